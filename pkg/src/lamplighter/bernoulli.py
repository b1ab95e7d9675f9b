"""The Bernoulli crossed product A_Z x| Z in the Rademacher basis.

R_S(x) = prod_{s in S} (-1)^{x(s)} on the shift space {0,1}^Z.  The shift acts by
translating S, so the multiplication law is the lamplighter law of
:mod:`lamplighter.wreath` with R in place of t.  Elements with only the k = 0
shift are functions; for those we evaluate, integrate against the product
measure and compute the rank of the multiplication operator, which equals the
measure of the support.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import NotAFunction, Unsupported, WindowTooSmall
from .scalar import ONE, ZERO, Cyclo, _lift, degree
from .wreath import _LampBasis, _norm_key

__all__ = [
    "BernoulliElement",
    "CylinderAssignment",
    "evaluate",
    "integrate",
    "cylinder_indicator",
    "mult_operator_rank",
    "function_values",
]

MAX_WINDOW = 24


class BernoulliElement(_LampBasis):
    """Finite sum  sum c_{k,S} R_S . s^k."""

    __slots__ = ()
    picture = "bernoulli"
    _LETTER = "R"

    @classmethod
    def R(cls, *coords: int) -> "BernoulliElement":
        return cls._from_clean({_norm_key((0, coords)): ONE})

    @property
    def is_function(self) -> bool:
        return all(k == 0 for k, _ in self.terms)


@dataclass(frozen=True)
class CylinderAssignment:
    """Bits fixed on a finite window of coordinates."""

    values: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for c, b in self.values.items():
            if b not in (0, 1):
                raise ValueError(f"coordinate {c} has value {b}, expected 0 or 1")
            clean[int(c)] = int(b)
        object.__setattr__(self, "values", clean)

    @property
    def window(self) -> frozenset:
        return frozenset(self.values)

    def __hash__(self):
        return hash(frozenset(self.values.items()))

    def __str__(self):
        inner = ",".join(f"{c}:{b}" for c, b in sorted(self.values.items()))
        return f"cyl{{{inner}}}"


def _require_function(f: BernoulliElement):
    if not f.is_function:
        raise NotAFunction("operation needs an element with shift 0 only")


def evaluate(f: BernoulliElement, x: CylinderAssignment) -> Cyclo:
    """sum_S c_S prod_{s in S} (-1)^{x(s)}."""
    _require_function(f)
    total = ZERO
    for (_, S), c in f.terms.items():
        sign = 1
        for s in S:
            if s not in x.values:
                raise WindowTooSmall(f"coordinate {s} is outside the window")
            if x.values[s]:
                sign = -sign
        total = total + c if sign > 0 else total - c
    return total


def integrate(f: BernoulliElement) -> Cyclo:
    """Integral against the product measure: the coefficient of R_empty."""
    _require_function(f)
    return f.trace()


def cylinder_indicator(x: CylinderAssignment) -> BernoulliElement:
    """1_{cylinder} = prod_{s in window} (1 + (-1)^{x(s)} R_s) / 2."""
    coords = sorted(x.values)
    m = len(coords)
    scale = Cyclo(Fraction(1, 1 << m))
    neg = -scale
    terms = {}
    for mask in range(1 << m):
        S = tuple(coords[i] for i in range(m) if mask >> i & 1)
        sign = sum(x.values[s] for s in S) & 1
        terms[(0, S)] = neg if sign else scale
    return BernoulliElement._from_clean(terms)


def function_values(f: BernoulliElement, window=None):
    """All values of f on {0,1}^window as an exact integer table.

    Returns (coords, table, den, level): entry ``table[x]`` holds the power-basis
    numerators (over ``den``) of f at the assignment whose bit i is coordinate
    ``coords[i]``.
    """
    _require_function(f)
    coords = sorted(f.support() if window is None else set(window))
    if not f.support() <= set(coords):
        raise WindowTooSmall("window does not contain the support")
    m = len(coords)
    if m > MAX_WINDOW:
        raise Unsupported(f"support of size {m} exceeds the enumeration limit {MAX_WINDOW}")
    pos = {c: i for i, c in enumerate(coords)}
    level = max((c.level for c in f.terms.values()), default=0)
    d = degree(level)
    den = math.lcm(*(c.den for c in f.terms.values())) if f.terms else 1
    rows = {}
    mag = 0
    for (_, S), c in f.terms.items():
        mask = 0
        for s in S:
            mask |= 1 << pos[s]
        nums = [a * (den // c.den) for a in _lift(c.nums, c.level, level)]
        rows[mask] = nums
        mag += sum(abs(a) for a in nums)
    dtype = np.int64 if mag < (1 << 62) else object
    table = np.zeros((1 << m, d), dtype=dtype)
    for mask, nums in rows.items():
        table[mask] = nums
    return coords, kernels.fwht(table), den, level


def mult_operator_rank(f: BernoulliElement) -> Fraction:
    """Measure of the support of f: the fraction of assignments where f != 0."""
    _require_function(f)
    if not f.terms:
        return Fraction(0)
    coords, table, _, _ = function_values(f)
    nonzero = int(np.count_nonzero(np.any(table != 0, axis=1)))
    return Fraction(nonzero, 1 << len(coords))
