"""Spectral data of truncations: moments, norm bounds, distribution functions.

The atom of the spectral measure at zero is always exact (one minus a
normalised exact rank).  The rest of the distribution function uses float
eigenvalues from ``numpy.linalg.eigvalsh``; eigenvalues are counted as <= l
when they are <= l + tol with tol = 1e-9 * max(1, K^2), far above the
backward error of a symmetric eigensolve on these sizes.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .climit import CertifiedRank, LevelMatrix, diag_embed, rank_limit
from .errors import LevelTooSmall
from .periodic import PeriodicOperator, truncate
from .scalar import Cyclo

__all__ = [
    "NormData",
    "SpectralReport",
    "ConvergenceReport",
    "norm_bound",
    "truncation_norm",
    "moments",
    "limit_moment",
    "moment_error_bound",
    "spectral_distribution",
    "default_grid",
    "kernel_dimension_limit",
    "uniform_convergence_check",
    "cdf_sup_distance",
]


@dataclass(frozen=True)
class NormData:
    """|A(x, y)| <= M, A(x, y) = 0 for |x - y| >= N/2, so ||A_n|| <= K = M N."""

    M: Fraction
    N: int
    K: Fraction

    def to_json(self) -> dict:
        return {"M": str(self.M), "N": self.N, "K": str(self.K)}


def norm_bound(A: PeriodicOperator) -> NormData:
    M = max((v.abs_upper() for v in A.entries.values()), default=Fraction(0))
    N = 2 * A.bandwidth + 1
    return NormData(M, N, M * N)


def truncation_norm(A: PeriodicOperator, n: int) -> float:
    """Float spectral norm of the truncation A_n."""
    return float(np.linalg.norm(truncate(A, n).to_complex(), 2))


def _gram(A: PeriodicOperator, n: int) -> LevelMatrix:
    X = truncate(A, n)
    return X.adjoint() * X


def moments(A: PeriodicOperator, k: int, n: int) -> Cyclo:
    """Exact normalised trace t((A_n* A_n)^k)."""
    if k < 1:
        raise ValueError("moment order must be >= 1")
    return (_gram(A, n) ** k).trace()


def limit_moment(A: PeriodicOperator, k: int) -> Cyclo:
    """Exact t((A* A)^k) of the operator itself."""
    return ((A.adjoint() * A) ** k).t_trace()


def _diag_bound(values) -> int:
    return max([1] + [math.ceil(v.abs_upper()) for v in values])


def moment_error_bound(A: PeriodicOperator, k: int, n: int) -> Fraction:
    """4klq/2^n bounding |t((A_n*A_n)^k) - t((A*A)^k)|.

    l = bandwidth + 1 and q is an integer bound on the diagonal entries of
    both (A*A)^k and (A_n*A_n)^k, read off the exact powers.  Only diagonal
    entries within k*bandwidth of a block edge can differ, 2kb per block,
    each by at most 2q.
    """
    if n < A.period_exp:
        raise LevelTooSmall(f"level {n} is below the period exponent {A.period_exp}")
    P = (A.adjoint() * A) ** k
    Pn = _gram(A, n) ** k
    diag = [v for (_, d), v in P.entries.items() if d == 0]
    diag += [v for (i, j), v in Pn._sparse.items() if i == j]
    q = _diag_bound(diag)
    l = A.bandwidth + 1
    return Fraction(4 * k * l * q, 1 << n)


def default_grid(A: PeriodicOperator, points: int = 64) -> list[float]:
    K2 = float(norm_bound(A).K) ** 2
    return [float(x) for x in np.linspace(0.0, K2, points)]


def _cdf(eigs: np.ndarray, atom: Fraction, size: int, grid, tol: float) -> list[float]:
    zeros = int(atom * size)
    rest = np.sort(eigs)[zeros:]
    counts = np.searchsorted(rest, np.asarray(grid, dtype=float) + tol, side="right")
    return [float(atom) + int(c) / size for c in counts]


@dataclass
class SpectralReport:
    level: int
    atom_at_zero: Fraction
    cdf_grid: list
    moment_table: list
    norm: NormData = field(default=None)

    def to_json(self, precision: int = 12) -> dict:
        return {
            "level": self.level,
            "atom_at_zero": str(self.atom_at_zero),
            "cdf": [[round(l, precision), round(f, precision)] for l, f in self.cdf_grid],
            "moments": [str(m) for m in self.moment_table],
            "norm": self.norm.to_json() if self.norm else None,
        }

    def to_csv(self, precision: int = 12) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["level", "lambda", "F"])
        for l, f in self.cdf_grid:
            w.writerow([self.level, f"{l:.{precision}g}", f"{f:.{precision}g}"])
        return buf.getvalue()


def spectral_distribution(A: PeriodicOperator, n: int, grid=None, max_moment: int = 3) -> SpectralReport:
    """Distribution function of the eigenvalues of A_n* A_n on ``grid``."""
    nd = norm_bound(A)
    if grid is None:
        grid = default_grid(A)
    grid = [float(x) for x in grid]
    if any(x < 0 for x in grid) or grid != sorted(grid):
        raise ValueError("grid must be sorted and non-negative")
    P = _gram(A, n)
    atom = 1 - P.rank()
    eigs = np.linalg.eigvalsh(P.to_complex())
    tol = 1e-9 * max(1.0, float(nd.K) ** 2)
    values = _cdf(eigs, atom, P.size, grid, tol)
    table = []
    power = P
    for k in range(1, max_moment + 1):
        if k > 1:
            power = power * P
        table.append(power.trace())
    return SpectralReport(n, atom, list(zip(grid, values)), table, nd)


def kernel_dimension_limit(A: PeriodicOperator, eps) -> CertifiedRank:
    """Interval containing the limit measure of {0} for A*A."""
    return rank_limit(A.adjoint() * A, eps).complement()


# -- uniform convergence -------------------------------------------------------------

def cdf_sup_distance(x: np.ndarray, y: np.ndarray, tau: float = 0.0) -> float:
    """sup_l max(F_x(l - tau) - F_y(l + tau), F_y(l - tau) - F_x(l + tau)).

    F are empirical CDFs of equally many eigenvalues.  A positive ``tau``
    absorbs float noise in eigenvalues that agree exactly; it can only shrink
    the result.
    """
    x, y = np.sort(x), np.sort(y)
    size = len(x)
    if len(y) != size:
        raise ValueError("eigenvalue lists must have equal length")

    def one_way(a, b):
        fa = np.arange(1, size + 1)  # F_a just after each jump
        fb = np.searchsorted(b, a + 2 * tau, side="right")
        return max(0, int((fa - fb).max()))

    return max(one_way(x, y), one_way(y, x)) / size


@dataclass(frozen=True)
class ConvergenceReport:
    n: int
    m: int
    rank_bound: Fraction
    sup_distance: float
    tolerance: float
    holds: bool

    def to_json(self, precision: int = 12) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "rank_bound": str(self.rank_bound),
            "sup_distance": round(self.sup_distance, precision),
            "tolerance": self.tolerance,
            "holds": self.holds,
        }


def uniform_convergence_check(A: PeriodicOperator, n: int, m: int, tol: float = 1e-6) -> ConvergenceReport:
    """Compare eigenvalue CDFs of the truncations at levels n and m.

    Self-adjoint A: D(A_n) against A_m.  Otherwise the Gram matrices
    D(A_n)*D(A_n) against A_m*A_m.  Interlacing bounds the CDF distance of two
    hermitian matrices by the normalised rank of their difference.
    """
    if not A.period_exp <= n < m:
        raise LevelTooSmall("need period exponent <= n < m")
    if A.is_self_adjoint():
        X, Y = diag_embed(truncate(A, n), m), truncate(A, m)
        K2 = float(norm_bound(A).K)
    else:
        Xn, Ym = diag_embed(truncate(A, n), m), truncate(A, m)
        X, Y = Xn.adjoint() * Xn, Ym.adjoint() * Ym
        K2 = float(norm_bound(A).K) ** 2
    bound = (X - Y).rank()
    ex = np.linalg.eigvalsh(X.to_complex())
    ey = np.linalg.eigvalsh(Y.to_complex())
    dist = cdf_sup_distance(ex, ey, tau=1e-9 * max(1.0, K2))
    return ConvergenceReport(n, m, bound, dist, tol, dist <= float(bound) + tol)
