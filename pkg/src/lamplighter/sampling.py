"""Seeded random elements for property checks and the verify-axioms command."""

from __future__ import annotations

import random
from fractions import Fraction

from .climit import LevelMatrix
from .periodic import PeriodicOperator
from .scalar import ONE, ZERO, Cyclo, degree
from .wreath import WreathElement

__all__ = [
    "random_cyclo",
    "random_wreath",
    "random_periodic",
    "random_level_matrix",
    "random_low_rank_matrix",
    "random_orthogonal_idempotents",
]


def random_cyclo(rng: random.Random, level: int = 3, bound: int = 3, dens=(1, 1, 2, 3)) -> Cyclo:
    coeffs = [rng.randint(-bound, bound) for _ in range(degree(level))]
    return Cyclo.from_coefficients(level, coeffs, rng.choice(dens))


def random_wreath(
    rng: random.Random, max_terms: int = 4, max_lamps: int = 3, max_shift: int = 3, lamp_range: int = 4, level: int = 3
) -> WreathElement:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        k = rng.randint(-max_shift, max_shift)
        S = tuple(rng.sample(range(-lamp_range, lamp_range + 1), rng.randint(0, max_lamps)))
        terms[(k, S)] = random_cyclo(rng, level)
    return WreathElement(terms)


def random_periodic(
    rng: random.Random, max_period_exp: int = 2, max_bandwidth: int = 4, density: float = 0.5, level: int = 3
) -> PeriodicOperator:
    """Period 2^k (k <= max_period_exp), offsets within +-bandwidth, never zero."""
    while True:
        n = rng.randint(0, max_period_exp)
        b = rng.randint(0, max_bandwidth)
        entries = {}
        for r in range(1 << n):
            for d in range(-b, b + 1):
                if rng.random() < density:
                    entries[(r, d)] = random_cyclo(rng, level)
        A = PeriodicOperator(n, entries)
        if A:
            return A


def random_level_matrix(rng: random.Random, n: int, level: int = 3, density: float = 0.5) -> LevelMatrix:
    size = 1 << n
    sparse = {}
    for i in range(size):
        for j in range(size):
            if rng.random() < density:
                sparse[(i, j)] = random_cyclo(rng, level, bound=2)
    return LevelMatrix(n, sparse)


def random_low_rank_matrix(rng: random.Random, n: int, rank: int | None = None, level: int = 3) -> LevelMatrix:
    """Product of 2^n x r and r x 2^n random factors (rank <= r)."""
    size = 1 << n
    r = rng.randint(0, size) if rank is None else rank
    if r == 0:
        return LevelMatrix.zeros(n)
    left = LevelMatrix(n, {(i, j): random_cyclo(rng, level, 2) for i in range(size) for j in range(r)})
    right = LevelMatrix(n, {(i, j): random_cyclo(rng, level, 2) for i in range(r) for j in range(size)})
    return left * right


def _transvection(n, i, j, c, inverse=False):
    size = 1 << n
    sparse = {(k, k): ONE for k in range(size)}
    sparse[(i, j)] = -c if inverse else c
    return LevelMatrix(n, sparse)


def random_orthogonal_idempotents(rng: random.Random, n: int, level: int = 3, steps: int | None = None):
    """e, f with e^2 = e, f^2 = f, ef = fe = 0, conjugated by random transvections."""
    size = 1 << n
    labels = [rng.randrange(3) for _ in range(size)]
    d1 = LevelMatrix.diagonal([ONE if t == 1 else ZERO for t in labels])
    d2 = LevelMatrix.diagonal([ONE if t == 2 else ZERO for t in labels])
    S = LevelMatrix.identity(n)
    S_inv = LevelMatrix.identity(n)
    for _ in range(size if steps is None else steps):
        i, j = rng.sample(range(size), 2) if size > 1 else (0, 0)
        if i == j:
            break
        c = random_cyclo(rng, level, bound=1, dens=(1,))
        if c.is_zero:
            continue
        S = S * _transvection(n, i, j, c)
        S_inv = _transvection(n, i, j, c, inverse=True) * S_inv
    return S * d1 * S_inv, S * d2 * S_inv


def random_fraction(rng: random.Random, bound: int = 5) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
