"""Finite sums in a normal-form basis, shared by the three crossed-product pictures.

A subclass fixes a basis (hashable keys) and supplies

* ``_IDENTITY``: the key of the unit,
* ``_basis_mul(k1, k2) -> (Cyclo, key)``: product of two basis elements,
* ``_basis_star(key) -> (Cyclo, key)``: adjoint of a basis element,
* ``_format_key(key) -> str``: parseable text for one basis element.

Coefficients are :class:`~lamplighter.scalar.Cyclo`; zero coefficients are
never stored, so two elements are equal iff their term dicts are.
"""

from __future__ import annotations

from numbers import Rational

from .scalar import ONE, ZERO, Cyclo


def _scalar(x):
    if isinstance(x, Cyclo):
        return x
    if isinstance(x, (int, Rational)):
        return Cyclo(x)
    return None


class NormalForm:
    __slots__ = ("terms",)
    _IDENTITY = None
    picture = ""

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for key, c in terms.items():
                c = Cyclo(c)
                if not c.is_zero:
                    nk = self._normalize_key(key)
                    clean[nk] = clean.get(nk, ZERO) + c
        self.terms = {k: v for k, v in clean.items() if not v.is_zero}

    @classmethod
    def _from_clean(cls, terms):
        obj = object.__new__(cls)
        obj.terms = terms
        return obj

    @classmethod
    def _normalize_key(cls, key):
        return key

    @classmethod
    def scalar(cls, c) -> "NormalForm":
        c = Cyclo(c)
        return cls._from_clean({} if c.is_zero else {cls._IDENTITY: c})

    @classmethod
    def one(cls):
        return cls.scalar(1)

    @classmethod
    def zero(cls):
        return cls._from_clean({})

    # -- abstract hooks ---------------------------------------------------
    def _basis_mul(self, k1, k2):  # pragma: no cover - abstract
        raise NotImplementedError

    def _basis_star(self, key):  # pragma: no cover - abstract
        raise NotImplementedError

    def _format_key(self, key) -> str:  # pragma: no cover - abstract
        raise NotImplementedError

    # -- linear structure -------------------------------------------------
    def _accumulate(self, items):
        out: dict = {}
        for key, c in items:
            prev = out.get(key)
            out[key] = c if prev is None else prev + c
        return type(self)._from_clean({k: v for k, v in out.items() if not v.is_zero})

    def __add__(self, other):
        s = _scalar(other)
        if s is not None:
            other = self.scalar(s)
        elif type(other) is not type(self):
            return NotImplemented
        return self._accumulate(list(self.terms.items()) + list(other.terms.items()))

    __radd__ = __add__

    def __neg__(self):
        return type(self)._from_clean({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        s = _scalar(other)
        if s is not None:
            other = self.scalar(s)
        elif type(other) is not type(self):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "NormalForm":
        c = Cyclo(c)
        if c.is_zero:
            return self.zero()
        return type(self)._from_clean({k: v * c for k, v in self.terms.items()})

    # -- algebra ------------------------------------------------------------
    def __mul__(self, other):
        s = _scalar(other)
        if s is not None:
            return self.scale(s)
        if type(other) is not type(self):
            return NotImplemented
        items = []
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                tw, key = self._basis_mul(k1, k2)
                items.append((key, c1 * c2 * tw))
        return self._accumulate(items)

    def __rmul__(self, other):
        s = _scalar(other)
        if s is None:
            return NotImplemented
        return self.scale(s)

    def __truediv__(self, other):
        s = _scalar(other)
        if s is None:
            return NotImplemented
        return self.scale(s.inverse())

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("only non-negative integer powers of general elements")
        result, base = self.one(), self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def star(self):
        items = []
        for key, c in self.terms.items():
            tw, k2 = self._basis_star(key)
            items.append((k2, c.conj() * tw))
        return self._accumulate(items)

    def trace(self) -> Cyclo:
        """Coefficient of the identity."""
        return self.terms.get(self._IDENTITY, ZERO)

    # -- comparison / text --------------------------------------------------
    def __eq__(self, other):
        s = _scalar(other)
        if s is not None:
            other = self.scalar(s)
        if type(other) is not type(self):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash((type(self).__name__, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: self._sort_key(kv[0]))

    @staticmethod
    def _sort_key(key):
        return key

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for key, c in self.sorted_terms():
            basis = self._format_key(key)
            neg = False
            coef = str(c)
            simple = " " not in coef
            if simple and coef.startswith("-"):
                neg, coef = True, coef[1:]
            if basis == "":
                body = coef
            elif coef == "1":
                body = basis
            else:
                body = f"{coef}*{basis}" if simple else f"({coef})*{basis}"
            parts.append((neg, body))
        out = ("-" if parts[0][0] else "") + parts[0][1]
        for neg, body in parts[1:]:
            out += (" - " if neg else " + ") + body
        return out

    def __repr__(self):
        return f"{type(self).__name__}('{self}')"


__all__ = ["NormalForm", "ONE", "ZERO"]
