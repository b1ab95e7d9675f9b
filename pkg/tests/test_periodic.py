import random
from fractions import Fraction

import pytest

from lamplighter.climit import LevelMatrix, diag_embed
from lamplighter.errors import LevelTooSmall
from lamplighter.periodic import (
    PeriodicOperator,
    cauchy_exponent,
    cauchy_modulus,
    decompose_diagonal,
    diagonal,
    diagonal_to_prufer,
    faithfulness_exponent,
    identity,
    product_defect_constant,
    prufer_E,
    shift_J,
    truncate,
    truncation_rank_lower_bound,
)
from lamplighter.sampling import random_periodic
from lamplighter.scalar import ZERO, Cyclo, root_of_unity

from oracles import cyclo_rank, truncation_rows

J = shift_J()


def operators(count, seed, **kw):
    rng = random.Random(seed)
    return [random_periodic(rng, **kw) for _ in range(count)]


class TestEntries:
    def test_shift(self):
        assert J.entry(0, 1) == 1 and J.entry(1, 0) == 0 and J.entry(5, 6) == 1
        assert J.period == 1 and J.bandwidth == 1

    def test_prufer_diagonal(self):
        E = prufer_E(2, 1)
        assert [E.entry(x, x) for x in range(4)] == [root_of_unity(2, x) for x in range(4)]
        assert E.entry(0, 1) == 0 and E.entry(6, 6) == E.entry(2, 2)

    def test_truncation_examples(self):
        assert truncate(J, 2).entries.tolist() == [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [0, 0, 0, 0]]
        assert truncate(prufer_E(1, 1), 2).entries.tolist() == [[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, 1, 0], [0, 0, 0, -1]]
        assert truncate(identity(), 3) == LevelMatrix.identity(3)

    def test_lift_keeps_operator(self):
        for A in operators(10, 1):
            L = A.lift(A.period_exp + 2)
            assert L == A
            assert all(L.entry(x, y) == A.entry(x, y) for x in range(-8, 8) for y in range(x - 5, x + 6))
        with pytest.raises(LevelTooSmall):
            prufer_E(2, 1).lift(1)

    def test_truncation_below_period(self):
        with pytest.raises(LevelTooSmall):
            truncate(prufer_E(2, 1), 1)


class TestAlgebra:
    def test_generator_relations(self):
        assert J.adjoint() * J == identity() == J * J.adjoint()
        assert prufer_E(2, 1) ** 4 == identity()
        assert prufer_E(3, 1) * prufer_E(3, 3) == prufer_E(1, 1)

    def test_composition_matches_matrix_product(self):
        for A, B in zip(operators(15, 2), operators(15, 3)):
            AB = A * B
            for x in range(-6, 6):
                for y in range(x - 9, x + 10):
                    direct = sum((A.entry(x, z) * B.entry(z, y) for z in range(x - 4, x + 5)), ZERO)
                    assert AB.entry(x, y) == direct

    def test_adjoint(self):
        for A in operators(15, 4):
            Astar = A.adjoint()
            assert all(Astar.entry(x, y) == A.entry(y, x).conj() for x in range(8) for y in range(x - 4, x + 5))
            assert Astar.adjoint() == A

    def test_ring_laws(self):
        ops = operators(30, 5)
        for A, B, C in zip(ops[::3], ops[1::3], ops[2::3]):
            assert (A * B) * C == A * (B * C)
            assert A * (B + C) == A * B + A * C
            assert (A * B).adjoint() == B.adjoint() * A.adjoint()

    def test_trace(self):
        assert identity().t_trace() == 1 and J.t_trace() == 0
        assert prufer_E(1, 1).t_trace() == 0
        assert diagonal([Cyclo(1), Cyclo(3)]).t_trace() == 2
        for A, B in zip(operators(10, 6), operators(10, 7)):
            assert (A * B).t_trace() == (B * A).t_trace()

    def test_equality_across_periods(self):
        assert PeriodicOperator(2, {(r, 1): 1 for r in range(4)}) == J
        assert diagonal([Cyclo(2)] * 4) == identity().scale(2)


class TestDiagonalDecomposition:
    def test_recomposes(self):
        for A in operators(15, 8):
            total = PeriodicOperator.zero()
            for k, dk in decompose_diagonal(A).items():
                assert dk.is_diagonal()
                total = total + dk * shift_J(k)
            assert total == A

    def test_prufer_expansion(self):
        for A in operators(15, 9):
            for dk in decompose_diagonal(A).values():
                rebuilt = PeriodicOperator.zero()
                for (n, l), c in diagonal_to_prufer(dk).items():
                    rebuilt = rebuilt + prufer_E(n, l).scale(c)
                assert rebuilt == dk

    def test_projection_example(self):
        half = (identity() + prufer_E(1, 1)) / 2
        assert half == diagonal([Cyclo(1), Cyclo(0)])
        assert diagonal_to_prufer(half) == {(0, 0): Fraction(1, 2), (1, 1): Fraction(1, 2)}


class TestTruncationLaws:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_linear_and_adjoint(self, n):
        for A, B in zip(operators(10, 10), operators(10, 11)):
            assert truncate(A + B, n) == truncate(A, n) + truncate(B, n)
            assert truncate(A.adjoint(), n) == truncate(A, n).adjoint()

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_product_defect(self, n):
        for A, B in zip(operators(10, 12), operators(10, 13)):
            defect = (truncate(A * B, n) - truncate(A, n) * truncate(B, n)).rank()
            assert defect <= Fraction(product_defect_constant(A, B), 1 << n)

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_rank_lower_bound(self, n):
        for A in operators(10, 14):
            assert truncate(A, n).rank() >= truncation_rank_lower_bound(A, n)

    def test_rank_matches_oracle(self):
        for A in operators(10, 15, max_bandwidth=2):
            n = A.period_exp + 2
            assert truncate(A, n).rank_int() == cyclo_rank(truncation_rows(A, n))


class TestCauchy:
    def test_modulus_holds(self):
        for A in operators(20, 16):
            p = A.period_exp
            for n in range(p, p + 3):
                for m in range(n + 1, n + 3):
                    dist = (diag_embed(truncate(A, n), m) - truncate(A, m)).rank()
                    assert dist <= cauchy_modulus(A, n, m)

    def test_self_adjoint_shift_counterexample(self):
        # period exponent 0, bandwidth 1: the naive 2^{0-n} bound is broken
        A = J + J.adjoint()
        dist = (diag_embed(truncate(A, 3), 5) - truncate(A, 5)).rank()
        assert dist == Fraction(3, 16)
        assert dist > Fraction(1, 8)
        assert cauchy_exponent(A) == 1 and cauchy_modulus(A, 3, 5) == Fraction(1, 4)

    def test_exponents(self):
        assert faithfulness_exponent(J) == 1 and cauchy_exponent(J) == 1
        assert faithfulness_exponent(identity()) == 0 and cauchy_exponent(identity()) == 0
        assert faithfulness_exponent(shift_J(4)) == 3 and cauchy_exponent(shift_J(4)) == 3

    def test_modulus_level_order(self):
        with pytest.raises(LevelTooSmall):
            cauchy_modulus(J, 3, 3)


def test_text_roundtrip():
    from lamplighter.parser import parse_element

    for A in operators(15, 17):
        assert parse_element(str(A), "periodic") == A
    assert str(J) == "J"
    assert str(identity()) == "1"
