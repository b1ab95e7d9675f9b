"""The group algebra of the lamplighter group Z_2 wr Z.

Every element is a unique finite sum  sum c_{k,S} t_S . s^k  where ``s`` is the
generator of Z, ``S`` a finite set of lamp positions and t_S the product of
the lamp generators t_i, i in S.  The shift moves lamps:
s^k t_S = t_{S+k} s^k, so

    (t_S s^k)(t_{S'} s^{k'}) = t_{S xor (S'+k)} s^{k+k'}.
"""

from __future__ import annotations

from .crossed import NormalForm
from .scalar import ONE

__all__ = ["WreathElement", "lamplighter_mul", "lamplighter_star", "kappa"]


def _shift(S, k):
    return tuple(s + k for s in S) if k else S


def lamplighter_mul(k1, k2):
    """Product of basis keys (shift, sorted lamp tuple) in any H = Z picture."""
    (a, S), (b, T) = k1, k2
    moved = _shift(T, a)
    if not S:
        lamps = moved
    elif not moved:
        lamps = S
    else:
        lamps = tuple(sorted(set(S).symmetric_difference(moved)))
    return ONE, (a + b, lamps)


def lamplighter_star(key):
    """(t_S s^k)* = s^{-k} t_S = t_{S-k} s^{-k}."""
    k, S = key
    return ONE, (-k, _shift(S, -k))


def _norm_key(key):
    k, S = key
    S = tuple(S)
    if len(set(S)) != len(S):
        # t_i^2 = 1: repeated lamps cancel in pairs
        odd = {s for s in S if S.count(s) % 2}
        return (int(k), tuple(sorted(odd)))
    return (int(k), tuple(sorted(S)))


class _LampBasis(NormalForm):
    __slots__ = ()
    _IDENTITY = (0, ())
    _LETTER = "?"

    @classmethod
    def _normalize_key(cls, key):
        return _norm_key(key)

    def _basis_mul(self, k1, k2):
        return lamplighter_mul(k1, k2)

    def _basis_star(self, key):
        return lamplighter_star(key)

    @staticmethod
    def _sort_key(key):
        k, S = key
        return (abs(k), k, len(S), S)

    def _format_key(self, key) -> str:
        k, S = key
        parts = [f"{self._LETTER}[{i}]" for i in S]
        if k:
            parts.append("s" if k == 1 else f"s^{k}")
        return "*".join(parts)

    @classmethod
    def shift(cls, k: int = 1):
        """The generator of Z raised to ``k``."""
        return cls._from_clean({(k, ()): ONE})

    def shifts(self) -> set[int]:
        return {k for k, _ in self.terms}

    def support(self) -> set[int]:
        """Union of all lamp sets."""
        out: set[int] = set()
        for _, S in self.terms:
            out.update(S)
        return out


class WreathElement(_LampBasis):
    """Element of C(Z_2 wr Z) in its unique normal form."""

    __slots__ = ()
    picture = "wreath"
    _LETTER = "t"

    @classmethod
    def t(cls, *lamps: int) -> "WreathElement":
        """t_S for S = ``lamps`` (repeats cancel)."""
        return cls._from_clean({_norm_key((0, lamps)): ONE})


def kappa(a: WreathElement):
    """The trace preserving *-isomorphism t_S s^k -> R_S s^k."""
    from .bernoulli import BernoulliElement

    if not isinstance(a, WreathElement):
        raise TypeError("kappa expects a WreathElement")
    return BernoulliElement._from_clean(dict(a.terms))


def kappa_inverse(b) -> WreathElement:
    return WreathElement._from_clean(dict(b.terms))
