"""Finite levels of the continuous ring: 2^n x 2^n exact matrices and ranks.

A :class:`LevelMatrix` of level n stands for its image in the direct limit
under the diagonal embeddings M -> diag(M, M).  Binary operations embed the
lower-level operand first, so mixed levels behave like elements of the limit.
Entries are kept sparse internally; ``entries`` materialises the dense array.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import LevelShrink
from .linalg import exact_rank
from .scalar import ONE, ZERO, Cyclo

__all__ = [
    "LevelMatrix",
    "CertifiedRank",
    "AxiomReport",
    "diag_embed",
    "rank",
    "rank_distance",
    "rank_limit",
    "limit_level",
    "verify_rank_axioms",
]


class LevelMatrix:
    __slots__ = ("level", "_sparse", "_rank")

    def __init__(self, level: int, sparse: dict | None = None):
        if level < 0:
            raise ValueError("level must be non-negative")
        size = 1 << level
        clean = {}
        for (i, j), v in (sparse or {}).items():
            if not (0 <= i < size and 0 <= j < size):
                raise IndexError(f"entry ({i}, {j}) outside a {size}x{size} matrix")
            v = Cyclo(v)
            if not v.is_zero:
                clean[(i, j)] = v
        self.level = level
        self._sparse = clean
        self._rank = None

    @classmethod
    def _wrap(cls, level, sparse):
        obj = object.__new__(cls)
        obj.level = level
        obj._sparse = sparse
        obj._rank = None
        return obj

    # -- constructors --------------------------------------------------------
    @classmethod
    def from_sparse(cls, level: int, sparse: dict) -> "LevelMatrix":
        return cls(level, sparse)

    @classmethod
    def from_rows(cls, rows) -> "LevelMatrix":
        rows = [list(r) for r in rows]
        size = len(rows)
        if size == 0 or size & (size - 1) or any(len(r) != size for r in rows):
            raise ValueError("need a square matrix whose side is a power of two")
        return cls(size.bit_length() - 1, {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r)})

    @classmethod
    def zeros(cls, level: int) -> "LevelMatrix":
        return cls._wrap(level, {})

    @classmethod
    def identity(cls, level: int) -> "LevelMatrix":
        return cls._wrap(level, {(i, i): ONE for i in range(1 << level)})

    @classmethod
    def diagonal(cls, values) -> "LevelMatrix":
        values = list(values)
        size = len(values)
        if size == 0 or size & (size - 1):
            raise ValueError("number of values must be a power of two")
        return cls(size.bit_length() - 1, {(i, i): v for i, v in enumerate(values)})

    # -- views ---------------------------------------------------------------
    @property
    def size(self) -> int:
        return 1 << self.level

    @property
    def entries(self) -> np.ndarray:
        out = np.full((self.size, self.size), ZERO, dtype=object)
        for (i, j), v in self._sparse.items():
            out[i, j] = v
        return out

    def nonzero(self) -> list:
        """Sorted (row, col, value) triples."""
        return [(i, j, v) for (i, j), v in sorted(self._sparse.items())]

    @property
    def nnz(self) -> int:
        return len(self._sparse)

    def __getitem__(self, ij) -> Cyclo:
        i, j = ij
        if not (0 <= i < self.size and 0 <= j < self.size):
            raise IndexError(ij)
        return self._sparse.get((i, j), ZERO)

    def to_complex(self, precision: int = 15) -> np.ndarray:
        out = np.zeros((self.size, self.size), dtype=np.complex128)
        memo: dict = {}
        for (i, j), v in self._sparse.items():
            z = memo.get(v)
            if z is None:
                z = memo[v] = complex(*v.to_complex(precision))
            out[i, j] = z
        return out

    # -- arithmetic ----------------------------------------------------------
    def _align(self, other: "LevelMatrix"):
        m = max(self.level, other.level)
        return diag_embed(self, m), diag_embed(other, m), m

    def __add__(self, other):
        if not isinstance(other, LevelMatrix):
            return NotImplemented
        a, b, m = self._align(other)
        out = dict(a._sparse)
        for k, v in b._sparse.items():
            prev = out.get(k)
            out[k] = v if prev is None else prev + v
        return LevelMatrix._wrap(m, {k: v for k, v in out.items() if not v.is_zero})

    def __neg__(self):
        return LevelMatrix._wrap(self.level, {k: -v for k, v in self._sparse.items()})

    def __sub__(self, other):
        if not isinstance(other, LevelMatrix):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "LevelMatrix":
        c = Cyclo(c)
        if c.is_zero:
            return LevelMatrix.zeros(self.level)
        return LevelMatrix._wrap(self.level, {k: v * c for k, v in self._sparse.items()})

    def matmul(self, other: "LevelMatrix") -> "LevelMatrix":
        a, b, m = self._align(other)
        brows: dict = {}
        for (i, j), v in b._sparse.items():
            brows.setdefault(i, []).append((j, v))
        out: dict = {}
        for (i, k), v in a._sparse.items():
            for j, w in brows.get(k, ()):
                key = (i, j)
                p = v * w
                prev = out.get(key)
                out[key] = p if prev is None else prev + p
        return LevelMatrix._wrap(m, {k: v for k, v in out.items() if not v.is_zero})

    def __mul__(self, other):
        if isinstance(other, LevelMatrix):
            return self.matmul(other)
        if isinstance(other, (int, Fraction, Cyclo)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Cyclo)):
            return self.scale(other)
        return NotImplemented

    __matmul__ = matmul

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("only non-negative integer powers")
        result, base = LevelMatrix.identity(self.level), self
        while e:
            if e & 1:
                result = result.matmul(base)
            e >>= 1
            if e:
                base = base.matmul(base)
        return result

    def adjoint(self) -> "LevelMatrix":
        return LevelMatrix._wrap(self.level, {(j, i): v.conj() for (i, j), v in self._sparse.items()})

    star = adjoint

    def trace(self) -> Cyclo:
        """Normalised trace sum_i M[i, i] / 2^n."""
        total = ZERO
        for (i, j), v in self._sparse.items():
            if i == j:
                total = total + v
        return total * Fraction(1, self.size)

    # -- rank ------------------------------------------------------------------
    def rank_int(self, method: str = "auto") -> int:
        if method == "auto" and self._rank is not None:
            return self._rank
        r = exact_rank(self.nonzero(), self.size, self.size, method=method)
        if method == "auto":
            self._rank = r
        return r

    def rank(self, method: str = "auto") -> Fraction:
        return Fraction(self.rank_int(method), self.size)

    # -- comparison / serialisation -------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, LevelMatrix):
            return NotImplemented
        a, b, _ = self._align(other)
        return a._sparse == b._sparse

    __hash__ = None

    def __repr__(self):
        return f"LevelMatrix(level={self.level}, nnz={self.nnz})"

    def to_json(self) -> dict:
        """Row-major dense layout with entries as exact scalar strings."""
        dense = self.entries
        return {"level": self.level, "entries": [[str(v) for v in row] for row in dense]}

    @classmethod
    def from_json(cls, data) -> "LevelMatrix":
        if isinstance(data, str):
            data = json.loads(data)
        m = cls.from_rows([[Cyclo(s) for s in row] for row in data["entries"]])
        if m.level != data["level"]:
            raise ValueError("level does not match the matrix size")
        return m


def diag_embed(M: LevelMatrix, m: int) -> LevelMatrix:
    """Block-diagonal matrix with 2^{m-n} copies of M."""
    n = M.level
    if m < n:
        raise LevelShrink(f"cannot embed level {n} into level {m}")
    if m == n:
        return M
    step = 1 << n
    out = {}
    for b in range(0, 1 << m, step):
        for (i, j), v in M._sparse.items():
            out[(b + i, b + j)] = v
    return LevelMatrix._wrap(m, out)


def rank(M: LevelMatrix) -> Fraction:
    return M.rank()


def rank_distance(A: LevelMatrix, B: LevelMatrix) -> Fraction:
    return (A - B).rank()


@dataclass(frozen=True)
class CertifiedRank:
    """Interval [lower, upper] known to contain a limit rank."""

    lower: Fraction
    upper: Fraction
    level_used: int

    def __post_init__(self):
        if not 0 <= self.lower <= self.upper <= 1:
            raise ValueError("need 0 <= lower <= upper <= 1")

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def __contains__(self, x) -> bool:
        return self.lower <= x <= self.upper

    def intersects(self, other: "CertifiedRank") -> bool:
        return self.lower <= other.upper and other.lower <= self.upper

    def complement(self) -> "CertifiedRank":
        """The interval for 1 - x."""
        return CertifiedRank(1 - self.upper, 1 - self.lower, self.level_used)

    def to_json(self) -> dict:
        return {"lower": str(self.lower), "upper": str(self.upper), "level_used": self.level_used}


def limit_level(A, eps) -> int:
    """Smallest level n with cauchy bound 2^{c-n} <= eps / 2."""
    from .periodic import cauchy_exponent

    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    c = cauchy_exponent(A)
    n = c + 1
    while Fraction(1 << c, 1 << n) > eps / 2:
        n += 1
    return n


def rank_limit(A, eps) -> CertifiedRank:
    """Certified interval for the rank of a periodic operator in the limit.

    |rk(A_n) - rk(A_m)| <= rk(D(A_n) - A_m) <= 2^{c-n} for every m > n, so the
    limit lies within eps/2 of rk(A_n); the interval is widened to eps.
    """
    from .periodic import truncate

    eps = Fraction(eps)
    n = limit_level(A, eps)
    r = truncate(A, n).rank()
    return CertifiedRank(max(Fraction(0), r - eps), min(Fraction(1), r + eps), n)


# -- rank axioms -------------------------------------------------------------------

AXIOMS = ("zero", "unit", "subadditive", "product", "adjoint", "idempotent_additive")


@dataclass
class AxiomReport:
    checked: dict = field(default_factory=lambda: {a: 0 for a in AXIOMS})
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "checked": dict(self.checked),
            "violations": [
                {"axiom": a, "matrices": [m.to_json() for m in ms]} for a, ms in self.violations
            ],
            "ok": self.ok,
        }


def verify_rank_axioms(pairs, idempotent_pairs=(), method: str = "auto") -> AxiomReport:
    """Check the rank-function axioms exactly.

    ``pairs`` are (A, B) matrices; ``idempotent_pairs`` are (e, f) with
    e^2 = e, f^2 = f, ef = fe = 0 (verified here before use).
    """
    report = AxiomReport()

    def rk(M):
        return M.rank(method)

    def fail(axiom, *ms):
        report.violations.append((axiom, ms))

    levels = set()
    for A, B in pairs:
        levels.update((A.level, B.level))
        ra, rb = rk(A), rk(B)
        report.checked["subadditive"] += 1
        if rk(A + B) > ra + rb:
            fail("subadditive", A, B)
        report.checked["product"] += 1
        if rk(A * B) > min(ra, rb):
            fail("product", A, B)
        report.checked["adjoint"] += 2
        if rk(A.adjoint()) != ra:
            fail("adjoint", A)
        if rk(B.adjoint()) != rb:
            fail("adjoint", B)
    for e, f in idempotent_pairs:
        levels.update((e.level, f.level))
        if e * e != e or f * f != f or (e * f).nnz or (f * e).nnz:
            raise ValueError("idempotent pair is not orthogonal idempotents")
        report.checked["idempotent_additive"] += 1
        if rk(e + f) != rk(e) + rk(f):
            fail("idempotent_additive", e, f)
    for n in sorted(levels):
        report.checked["zero"] += 1
        if rk(LevelMatrix.zeros(n)) != 0:
            fail("zero", LevelMatrix.zeros(n))
        report.checked["unit"] += 1
        if rk(LevelMatrix.identity(n)) != 1:
            fail("unit", LevelMatrix.identity(n))
    return report
