import random

import pytest

from lamplighter.linalg import exact_rank, field_rank, modular_rank, primes_1_mod
from lamplighter.sampling import random_cyclo, random_low_rank_matrix
from lamplighter.scalar import ONE, Cyclo, root_of_unity

from oracles import cyclo_rank


def triples(M):
    return M.nonzero()


def test_primes():
    ps = primes_1_mod(16, 5)
    assert len(set(ps)) == 5 and all(p < 2**31 for p in ps)
    assert all(p % 16 == 1 for p in ps)
    assert all(all(p % q for q in range(2, int(p**0.5) + 1)) for p in ps)


@pytest.mark.parametrize("level", [0, 2, 3, 4])
def test_routes_agree_with_oracle(level):
    rng = random.Random(level)
    for _ in range(10):
        M = random_low_rank_matrix(rng, 2, level=level)
        expected = cyclo_rank([[M[i, j] for j in range(4)] for i in range(4)], level=max(level, 1))
        t = triples(M)
        assert exact_rank(t, 4, 4, "field") == expected
        assert exact_rank(t, 4, 4, "modular") == expected


def test_rectangular():
    z = root_of_unity(3, 1)
    entries = [(0, 0, ONE), (0, 2, z), (1, 0, z), (1, 2, z * z), (2, 1, Cyclo(3))]
    assert exact_rank(entries, 3, 4, "field") == 2
    assert exact_rank(entries, 3, 4, "modular") == 2


def test_large_coefficients_fall_back_to_objects():
    big = Cyclo(10**30 + 1)
    entries = [(0, 0, big), (0, 1, Cyclo(1)), (1, 0, big * 2), (1, 1, Cyclo(2))]
    assert modular_rank(entries, 2, 2).rank == 1
    assert field_rank([{0: big, 1: ONE}, {0: big * 2, 1: Cyclo(2)}]) == 1


def test_certificate_reports_prime_count():
    rng = random.Random(9)
    M = random_low_rank_matrix(rng, 3, rank=3)
    cert = modular_rank(triples(M), 8, 8)
    assert cert.rank == 3
    assert cert.primes_used >= cert.primes_needed >= 1


def test_unknown_method():
    with pytest.raises(ValueError):
        exact_rank([], 1, 1, "magic")


def test_zero_matrix():
    assert exact_rank([], 4, 4, "modular") == 0
    assert exact_rank([(0, 0, random_cyclo(random.Random(0)) * 0)], 1, 1, "field") == 0
