"""Banded periodic operators on Z and their truncations.

A(x, y) with A(x + 2^n, y + 2^n) = A(x, y) and finitely many nonzero offsets
y - x.  Storage is by (row residue r, offset d), so periodicity holds by
construction.  Operators of different periods are compared and combined
after lifting to the common period; the period is never minimised.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import LevelTooSmall
from .scalar import ONE, ZERO, Cyclo, root_of_unity

__all__ = [
    "PeriodicOperator",
    "identity",
    "shift_J",
    "prufer_E",
    "diagonal",
    "truncate",
    "cauchy_exponent",
    "cauchy_modulus",
    "faithfulness_exponent",
    "truncation_rank_lower_bound",
    "product_defect_constant",
    "decompose_diagonal",
    "diagonal_to_prufer",
    "psi",
]


class PeriodicOperator:
    __slots__ = ("period_exp", "entries")
    picture = "periodic"

    def __init__(self, period_exp: int = 0, entries=None):
        if period_exp < 0:
            raise ValueError("period exponent must be non-negative")
        size = 1 << period_exp
        clean: dict = {}
        for (r, d), v in (entries or {}).items():
            v = Cyclo(v)
            if v.is_zero:
                continue
            key = (r % size, int(d))
            prev = clean.get(key)
            clean[key] = v if prev is None else prev + v
        self.period_exp = period_exp
        self.entries = {k: v for k, v in clean.items() if not v.is_zero}

    @classmethod
    def _from_clean(cls, period_exp, entries):
        obj = object.__new__(cls)
        obj.period_exp = period_exp
        obj.entries = entries
        return obj

    @classmethod
    def scalar(cls, c) -> "PeriodicOperator":
        return cls(0, {(0, 0): c})

    @classmethod
    def one(cls):
        return cls.scalar(1)

    @classmethod
    def zero(cls):
        return cls._from_clean(0, {})

    # -- structure ----------------------------------------------------------
    @property
    def period(self) -> int:
        return 1 << self.period_exp

    @property
    def bandwidth(self) -> int:
        return max((abs(d) for _, d in self.entries), default=0)

    def offsets(self) -> set[int]:
        return {d for _, d in self.entries}

    def entry(self, x: int, y: int) -> Cyclo:
        return self.entries.get((x % self.period, y - x), ZERO)

    def lift(self, m: int) -> "PeriodicOperator":
        """Same operator described with period 2^m (m >= period_exp)."""
        n = self.period_exp
        if m < n:
            raise LevelTooSmall(f"cannot lift period 2^{n} down to 2^{m}")
        if m == n:
            return self
        step = 1 << n
        reps = 1 << (m - n)
        out = {}
        for (r, d), v in self.entries.items():
            for j in range(reps):
                out[(r + j * step, d)] = v
        return PeriodicOperator._from_clean(m, out)

    def _align(self, other):
        m = max(self.period_exp, other.period_exp)
        return self.lift(m), other.lift(m), m

    def is_diagonal(self) -> bool:
        return all(d == 0 for _, d in self.entries)

    # -- linear structure ----------------------------------------------------
    def __add__(self, other):
        other = _as_operator(other)
        if other is NotImplemented:
            return other
        a, b, m = self._align(other)
        out = dict(a.entries)
        for k, v in b.entries.items():
            prev = out.get(k)
            out[k] = v if prev is None else prev + v
        return PeriodicOperator._from_clean(m, {k: v for k, v in out.items() if not v.is_zero})

    __radd__ = __add__

    def __neg__(self):
        return PeriodicOperator._from_clean(self.period_exp, {k: -v for k, v in self.entries.items()})

    def __sub__(self, other):
        other = _as_operator(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "PeriodicOperator":
        c = Cyclo(c)
        if c.is_zero:
            return PeriodicOperator.zero()
        return PeriodicOperator._from_clean(self.period_exp, {k: v * c for k, v in self.entries.items()})

    # -- algebra ---------------------------------------------------------------
    def compose(self, other: "PeriodicOperator") -> "PeriodicOperator":
        """(AB)(x, y) = sum_z A(x, z) B(z, y), exact."""
        a, b, m = self._align(other)
        size = 1 << m
        brows: dict = {}
        for (r, d), v in b.entries.items():
            brows.setdefault(r, []).append((d, v))
        out: dict = {}
        for (r, d1), v1 in a.entries.items():
            for d2, v2 in brows.get((r + d1) % size, ()):
                key = (r, d1 + d2)
                prod = v1 * v2
                prev = out.get(key)
                out[key] = prod if prev is None else prev + prod
        return PeriodicOperator._from_clean(m, {k: v for k, v in out.items() if not v.is_zero})

    def __mul__(self, other):
        if isinstance(other, PeriodicOperator):
            return self.compose(other)
        if isinstance(other, (int, Fraction, Cyclo)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Cyclo)):
            return self.scale(other)
        return NotImplemented

    __matmul__ = compose

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, Cyclo)):
            return self.scale(Cyclo(other).inverse())
        return NotImplemented

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("only non-negative integer powers of general operators")
        result, base = PeriodicOperator.one(), self
        while e:
            if e & 1:
                result = result.compose(base)
            e >>= 1
            if e:
                base = base.compose(base)
        return result

    def adjoint(self) -> "PeriodicOperator":
        """A*(x, y) = conj(A(y, x))."""
        size = self.period
        out = {((r + d) % size, -d): v.conj() for (r, d), v in self.entries.items()}
        return PeriodicOperator._from_clean(self.period_exp, out)

    star = adjoint

    def is_self_adjoint(self) -> bool:
        return self == self.adjoint()

    # -- comparison / text ------------------------------------------------------
    def __eq__(self, other):
        other = _as_operator(other)
        if other is NotImplemented:
            return other
        a, b, _ = self._align(other)
        return a.entries == b.entries

    __hash__ = None

    def __bool__(self):
        return bool(self.entries)

    def format_table(self) -> str:
        """One line per row residue listing ``offset: value`` pairs."""
        lines = [f"period 2^{self.period_exp}"]
        for r in range(self.period):
            row = sorted((d, v) for (rr, d), v in self.entries.items() if rr == r)
            body = ", ".join(f"{d:+d}: {v}" for d, v in row) or "-"
            lines.append(f"  r={r}: {body}")
        return "\n".join(lines)

    def __str__(self):
        """Parseable sum of c * E[n,l] * J^k terms."""
        if not self.entries:
            return "0"
        parts = []
        for k, dk in sorted(decompose_diagonal(self).items(), key=lambda kv: (abs(kv[0]), kv[0])):
            for (n, l), c in sorted(diagonal_to_prufer(dk).items()):
                basis = [f"E[{n},{l}]"] if (n, l) != (0, 0) else []
                if k:
                    basis.append("J" if k == 1 else f"J^{k}")
                basis = "*".join(basis)
                coef = str(c)
                simple = " " not in coef
                neg = simple and coef.startswith("-")
                if neg:
                    coef = coef[1:]
                if not basis:
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
        return f"PeriodicOperator('{self}')"

    # -- matrix views ------------------------------------------------------------
    def truncate(self, n: int):
        return truncate(self, n)

    def t_trace(self) -> Cyclo:
        """Normalised trace: mean of the diagonal over one period."""
        total = ZERO
        for (r, d), v in self.entries.items():
            if d == 0:
                total = total + v
        return total * Fraction(1, self.period)

    trace = t_trace

    def to_json(self) -> dict:
        return {
            "period_exp": self.period_exp,
            "entries": [
                {"residue": r, "offset": d, "value": str(v)}
                for (r, d), v in sorted(self.entries.items())
            ],
        }


def _as_operator(x):
    if isinstance(x, PeriodicOperator):
        return x
    if isinstance(x, (int, Fraction, Cyclo)):
        return PeriodicOperator.scalar(x)
    return NotImplemented


# -- generators ------------------------------------------------------------------

def identity() -> PeriodicOperator:
    return PeriodicOperator.one()


def shift_J(power: int = 1) -> PeriodicOperator:
    """J(x, y) = 1 iff y = x + 1 (raised to ``power``, negative allowed)."""
    return PeriodicOperator._from_clean(0, {(0, power): ONE})


def prufer_E(n: int, l: int) -> PeriodicOperator:
    """Diagonal E^l_n(x, x) = z_{2^n}^{x l}, period 2^n."""
    if n < 0:
        raise ValueError("level must be non-negative")
    return PeriodicOperator._from_clean(n, {(x, 0): root_of_unity(n, x * l) for x in range(1 << n)})


def diagonal(values) -> PeriodicOperator:
    """Diagonal operator repeating ``values`` (length a power of two)."""
    values = list(values)
    size = len(values)
    if size == 0 or size & (size - 1):
        raise ValueError("number of values must be a power of two")
    return PeriodicOperator(size.bit_length() - 1, {(x, 0): v for x, v in enumerate(values)})


# -- truncations -------------------------------------------------------------------

def truncate(A: PeriodicOperator, n: int):
    """The 2^n x 2^n block of A on [0, 2^n); entries leaving the block are dropped."""
    from .climit import LevelMatrix

    if n < A.period_exp:
        raise LevelTooSmall(f"level {n} is below the period exponent {A.period_exp}")
    size = 1 << n
    step = A.period
    sparse = {}
    for (r, d), v in A.entries.items():
        for x in range(r, size, step):
            y = x + d
            if 0 <= y < size:
                sparse[(x, y)] = v
    return LevelMatrix.from_sparse(n, sparse)


def cauchy_exponent(A: PeriodicOperator) -> int:
    """Smallest c >= period exponent with 2 * bandwidth <= 2^c."""
    c = A.period_exp
    while (1 << c) < 2 * A.bandwidth:
        c += 1
    return c


def cauchy_modulus(A: PeriodicOperator, n: int, m: int) -> Fraction:
    """Bound on rk(D^n_m(A_n) - A_m), independent of m.

    Only rows within ``bandwidth`` of an interior 2^n-block boundary change,
    so the normalised rank is at most 2b(2^{m-n} - 1)/2^m < 2^{c-n}.
    """
    if not A.period_exp <= n < m:
        raise LevelTooSmall("need period exponent <= n < m")
    return min(Fraction(1), Fraction(1 << cauchy_exponent(A), 1 << n))


def faithfulness_exponent(A: PeriodicOperator) -> int:
    """Smallest k >= period exponent with A(x, y) = 0 whenever |x - y| >= 2^k."""
    k = A.period_exp
    while (1 << k) <= A.bandwidth:
        k += 1
    return k


def truncation_rank_lower_bound(A: PeriodicOperator, n: int) -> Fraction:
    """(2^{n-k} - 1)/2^n for nonzero A and n > k (k the faithfulness exponent)."""
    if not A:
        return Fraction(0)
    k = faithfulness_exponent(A)
    if n <= k:
        return Fraction(0)
    return Fraction((1 << (n - k)) - 1, 1 << n)


def product_defect_constant(A: PeriodicOperator, B: PeriodicOperator) -> int:
    """c with rk((AB)_n - A_n B_n) <= c / 2^n.

    The defect lives in the rows within bandwidth(A) of the block edges and
    in the columns within bandwidth(B) of them.
    """
    return 2 * min(A.bandwidth, B.bandwidth)


# -- diagonal decomposition and psi ------------------------------------------------

def decompose_diagonal(A: PeriodicOperator) -> dict:
    """{k: D_k} with A = sum_k D_k J^k and D_k(x, x) = A(x, x + k)."""
    out: dict = {}
    for (r, d), v in A.entries.items():
        out.setdefault(d, {})[(r, 0)] = v
    return {d: PeriodicOperator._from_clean(A.period_exp, e) for d, e in out.items()}


def _dft_inverse(values, n):
    """c_l = sum_x v_x z_{2^n}^{-x l} (unnormalised), radix 2."""
    size = len(values)
    if size == 1:
        return list(values)
    even = _dft_inverse(values[0::2], n - 1)
    odd = _dft_inverse(values[1::2], n - 1)
    half = size // 2
    out = [ZERO] * size
    for l in range(half):
        t = odd[l] * root_of_unity(n, -l) if not odd[l].is_zero else ZERO
        out[l] = even[l] + t
        out[l + half] = even[l] - t
    return out


def diagonal_to_prufer(D: PeriodicOperator) -> dict:
    """Coefficients {(n, l): c} with D = sum c E^l_n, indices canonical."""
    from .odometer import canonicalize

    if not D.is_diagonal():
        raise ValueError("operator is not diagonal")
    n = D.period_exp
    size = 1 << n
    values = [D.entries.get((x, 0), ZERO) for x in range(size)]
    coeffs = _dft_inverse(values, n)
    scale = Fraction(1, size)
    out = {}
    for l, c in enumerate(coeffs):
        if not c.is_zero:
            out[tuple(canonicalize((n, l)))] = c * scale
    return out


def psi(A: PeriodicOperator):
    """The *-isomorphism onto the odometer algebra: D_k J^k -> D_k(F) u^{sigma k}."""
    from . import odometer

    sigma = odometer.ORIENTATION
    terms = {}
    for k, dk in decompose_diagonal(A).items():
        for (n, l), c in diagonal_to_prufer(dk).items():
            terms[(sigma * k, n, l)] = c
    return odometer.OdometerElement._from_clean(terms)
