"""The odometer crossed product A_M x| Z in the Prufer basis.

F^l_n(x) = exp(2 pi i (x mod 2^n) l / 2^n) on the 2-adic integers, with
F^{2l}_{n+1} = F^l_n; canonical indices have l odd or (n, l) = (0, 0).

The generator u of Z acts on functions by (u^k f)(x) = f(x + k), so the
characters are eigenvectors:  u^k F^l_n = z_{2^n}^{kl} F^l_n u^k.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from .crossed import NormalForm
from .scalar import ONE, root_of_unity

__all__ = [
    "ORIENTATION",
    "PruferIndex",
    "canonicalize",
    "OdometerElement",
    "haar_cylinder",
    "psi_inv",
]

# Sign sigma in psi(E^l_n J^k) = F^l_n u^{sigma k}.  J E^l_n = z^l E^l_n J, so
# with the twist above psi is multiplicative only for sigma = +1
# (tests/test_orientation.py runs the other sign and watches it fail).
ORIENTATION = 1


class PruferIndex(NamedTuple):
    n: int
    l: int

    def canonical(self) -> "PruferIndex":
        return canonicalize(self)


def canonicalize(idx) -> PruferIndex:
    """Apply F^{2l}_{n+1} = F^l_n until l is odd (or the index is (0, 0))."""
    n, l = idx
    if n < 0:
        raise ValueError("level must be non-negative")
    l %= 1 << n
    if l == 0:
        return PruferIndex(0, 0)
    while l % 2 == 0:
        l //= 2
        n -= 1
    return PruferIndex(n, l)


def _add_index(n1, l1, n2, l2):
    n = max(n1, n2)
    return canonicalize((n, (l1 << (n - n1)) + (l2 << (n - n2))))


class OdometerElement(NormalForm):
    """Finite sum  sum c_{k,n,l} F^l_n . u^k  with canonical (n, l)."""

    __slots__ = ()
    picture = "odometer"
    _IDENTITY = (0, 0, 0)

    @classmethod
    def _normalize_key(cls, key):
        k, n, l = key
        n, l = canonicalize((n, l))
        return (int(k), n, l)

    @classmethod
    def F(cls, n: int, l: int) -> "OdometerElement":
        n, l = canonicalize((n, l))
        return cls._from_clean({(0, n, l): ONE})

    @classmethod
    def shift(cls, k: int = 1) -> "OdometerElement":
        return cls._from_clean({(k, 0, 0): ONE})

    def _basis_mul(self, k1, k2):
        a, n1, l1 = k1
        b, n2, l2 = k2
        twist = root_of_unity(n2, a * l2) if a and l2 else ONE
        n, l = _add_index(n1, l1, n2, l2)
        return twist, (a + b, n, l)

    def _basis_star(self, key):
        k, n, l = key
        twist = root_of_unity(n, k * l) if k and l else ONE
        n2, l2 = canonicalize((n, -l))
        return twist, (-k, n2, l2)

    @staticmethod
    def _sort_key(key):
        k, n, l = key
        return (abs(k), k, n, l)

    def _format_key(self, key) -> str:
        k, n, l = key
        parts = []
        if (n, l) != (0, 0):
            parts.append(f"F[{n},{l}]")
        if k:
            parts.append("u" if k == 1 else f"u^{k}")
        return "*".join(parts)

    def shifts(self) -> set[int]:
        return {k for k, _, _ in self.terms}

    def max_level(self) -> int:
        return max((n for _, n, _ in self.terms), default=0)


def haar_cylinder(n: int, l: int) -> Fraction:
    """Haar measure of the residue class l + 2^n Z_2."""
    if n < 0 or not 0 <= l < (1 << n):
        raise ValueError("need 0 <= l < 2^n")
    return Fraction(1, 1 << n)


def psi_inv(a: OdometerElement):
    """F^l_n u^k -> E^l_n J^{sigma k} as a periodic operator."""
    from .periodic import PeriodicOperator

    sigma = ORIENTATION
    n = a.max_level()
    size = 1 << n
    entries: dict = {}
    for (k, m, l), c in a.terms.items():
        d = sigma * k
        for x in range(size):
            key = (x, d)
            v = c * root_of_unity(m, x * l) if l else c
            prev = entries.get(key)
            entries[key] = v if prev is None else prev + v
    return PeriodicOperator(n, entries)
