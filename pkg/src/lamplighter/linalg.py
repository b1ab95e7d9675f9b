"""Exact rank over 2-power cyclotomic fields.

Two independent routes:

``field_rank``
    Gauss-Jordan over :class:`Cyclo` with exact zero tests.  Rows are sparse
    dicts; each step pivots on the sparsest, lowest-height candidate of the
    smallest live column and normalises the pivot row so updates need no
    division.

``modular_rank``
    Deterministic multimodular rank.  Rows are scaled to have entries in
    Z[z]; for a prime p = 1 (mod 2^N) the substitution z -> w (w a primitive
    2^N-th root mod p) is a ring map, so rank_p <= rank.  Equality holds unless
    p divides the norm of a fixed nonzero maximal minor, and that norm is
    bounded by the Hadamard bound over all embeddings.  Using more primes than
    the bound allows to be simultaneously bad makes max(rank_p) exact.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache

import numpy as np

from . import kernels
from .scalar import Cyclo, degree, _lift

__all__ = ["field_rank", "modular_rank", "exact_rank", "primes_1_mod", "RankCertificate"]

FIELD_RANK_MAX_SIZE = 24  # "auto" switches to the modular route above this


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("LAMPLIGHTER_THREADS", "1")))
    except ValueError:
        return 1


# --------------------------------------------------------------------------
# field route
# --------------------------------------------------------------------------

def field_rank(rows) -> int:
    """Rank of a matrix given as an iterable of sparse rows {col: Cyclo}."""
    live = {}
    by_col: dict[int, set[int]] = {}
    for i, row in enumerate(rows):
        row = {c: v for c, v in row.items() if not v.is_zero}
        if row:
            live[i] = row
            for c in row:
                by_col.setdefault(c, set()).add(i)
    rank = 0
    while live:
        j = min(c for c, s in by_col.items() if s)
        cands = by_col[j]
        piv = min(cands, key=lambda r: (len(live[r]), live[r][j].height(), r))
        prow = live.pop(piv)
        for c in prow:
            by_col[c].discard(piv)
        inv = prow[j].inverse()
        prow = {c: v * inv for c, v in prow.items()}
        for r in list(by_col[j]):
            row = live[r]
            f = row[j]
            for c, v in prow.items():
                nv = row.get(c)
                nv = -f * v if nv is None else nv - f * v
                if nv.is_zero:
                    if c in row:
                        del row[c]
                        by_col[c].discard(r)
                else:
                    if c not in row:
                        by_col.setdefault(c, set()).add(r)
                    row[c] = nv
            if not row:
                del live[r]
        by_col = {c: s for c, s in by_col.items() if s}
        rank += 1
    return rank


# --------------------------------------------------------------------------
# modular route
# --------------------------------------------------------------------------

def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


PRIME_FLOOR = 1 << 30
PRIME_CEIL = 1 << 31


@lru_cache(maxsize=None)
def _prime_block(modulus: int, start: int, count: int) -> tuple[int, ...]:
    out = []
    p = start
    while len(out) < count:
        if p <= PRIME_FLOOR:
            raise RuntimeError("ran out of primes below 2^31")
        if _is_prime(p):
            out.append(p)
        p -= modulus
    return tuple(out)


def primes_1_mod(modulus: int, count: int) -> list[int]:
    """The ``count`` largest primes p < 2^31 with p = 1 (mod modulus)."""
    modulus = max(2, modulus)
    start = ((PRIME_CEIL - 2) // modulus) * modulus + 1
    block = 256
    out: list[int] = []
    while len(out) < count:
        chunk = _prime_block(modulus, start, block)
        out.extend(chunk)
        start = chunk[-1] - modulus
    return out[:count]


@lru_cache(maxsize=None)
def _root_powers(p: int, level: int) -> tuple[int, ...]:
    """Residues of z^0..z^{D-1} for a primitive 2^level-th root z mod p."""
    d = degree(level)
    if level == 0:
        return (1,)
    order = 1 << level
    for g in range(2, p):
        w = pow(g, (p - 1) // order, p)
        if pow(w, order // 2, p) == p - 1:
            break
    return tuple(pow(w, k, p) for k in range(d))


class RankCertificate:
    """Outcome of :func:`modular_rank` with the data that certifies it."""

    __slots__ = ("rank", "primes_used", "primes_needed", "bound_bits", "level")

    def __init__(self, rank, primes_used, primes_needed, bound_bits, level):
        self.rank = rank
        self.primes_used = primes_used
        self.primes_needed = primes_needed
        self.bound_bits = bound_bits
        self.level = level

    def __repr__(self):
        return (
            f"RankCertificate(rank={self.rank}, primes_used={self.primes_used}, "
            f"primes_needed={self.primes_needed}, bound_bits={self.bound_bits})"
        )


def _integralise(entries, nrows):
    """Lift to a common level and scale each row into Z[z].

    Returns rows, cols, coefficient lists and the level.
    """
    level = max((v.level for _, _, v in entries), default=0)
    row_den = [1] * nrows
    for i, _, v in entries:
        if v.den != 1:
            row_den[i] = math.lcm(row_den[i], v.den)
    rows, cols, coeffs = [], [], []
    for i, j, v in entries:
        scale = row_den[i] // v.den
        lifted = _lift(v.nums, v.level, level)
        rows.append(i)
        cols.append(j)
        coeffs.append([a * scale for a in lifted] if scale != 1 else list(lifted))
    return rows, cols, coeffs, level


def _hadamard_bits(rows, cols, coeffs, nrows, ncols, d) -> int:
    """Upper bound on log2 |Norm(minor)| for every minor of the integral matrix."""
    row_sq = [0] * nrows
    col_sq = [0] * ncols
    for i, j, c in zip(rows, cols, coeffs):
        l1 = sum(abs(a) for a in c)
        sq = l1 * l1
        row_sq[i] += sq
        col_sq[j] += sq
    by_rows = sum(s.bit_length() for s in row_sq if s)
    by_cols = sum(s.bit_length() for s in col_sq if s)
    # |sigma(det)| <= prod ||row||, ||row||^2 <= row_sq < 2^bits, D embeddings
    return (d * min(by_rows, by_cols) + 1) // 2


def modular_rank(entries, nrows: int, ncols: int, *, backend=None, primes=None) -> RankCertificate:
    """Certified exact rank from reductions modulo primes.

    ``entries`` is a list of (row, col, Cyclo) with distinct positions.
    ``primes`` overrides the number of primes (the result is then only a
    lower bound unless it reaches the certified count).
    """
    entries = [(i, j, v) for i, j, v in entries if not v.is_zero]
    full = min(nrows, ncols)
    if not entries:
        return RankCertificate(0, 0, 0, 0, 0)
    rows, cols, coeffs, level = _integralise(entries, nrows)
    d = degree(level)
    bits = _hadamard_bits(rows, cols, coeffs, nrows, ncols, d)
    needed = bits // 30 + 1
    count = needed if primes is None else primes
    plist = primes_1_mod(1 << level if level else 2, count)

    big = max(max(abs(a) for a in c) for c in coeffs)
    rows_a = np.asarray(rows, dtype=np.int64)
    cols_a = np.asarray(cols, dtype=np.int64)
    cap = kernels.window_cap(rows_a, cols_a, nrows, ncols)
    if big < (1 << 62):
        coeff_a = np.asarray(coeffs, dtype=np.int64).reshape(len(coeffs), d)

        def one(p):
            powers = np.asarray(_root_powers(p, level), dtype=np.int64)
            return kernels.rank_mod_p(rows_a, cols_a, coeff_a, powers, nrows, ncols, p, cap, backend)
    else:
        coeff_o = np.empty((len(coeffs), d), dtype=object)
        for e, c in enumerate(coeffs):
            coeff_o[e, :] = c

        def one(p):
            powers = np.asarray(_root_powers(p, level), dtype=np.int64)
            red = (coeff_o % p).astype(np.int64)
            return kernels.rank_mod_p(rows_a, cols_a, red, powers, nrows, ncols, p, cap, backend)

    best = 0
    used = 0
    threads = _threads()
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            for r in pool.map(one, plist):
                used += 1
                best = max(best, r)
    else:
        for p in plist:
            used += 1
            best = max(best, one(p))
            if best == full:
                break
    if best == full:
        needed = min(needed, used)
    return RankCertificate(best, used, needed, bits, level)


def exact_rank(entries, nrows: int, ncols: int, method: str = "auto", backend=None) -> int:
    """Exact rank of a sparse matrix given as (row, col, Cyclo) triples."""
    if method == "auto":
        method = "field" if max(nrows, ncols) <= FIELD_RANK_MAX_SIZE else "modular"
    if method == "field":
        rows: list[dict] = [dict() for _ in range(nrows)]
        for i, j, v in entries:
            rows[i][j] = v
        return field_rank(rows)
    if method == "modular":
        cert = modular_rank(entries, nrows, ncols, backend=backend)
        return cert.rank
    raise ValueError(f"unknown rank method {method!r}")
