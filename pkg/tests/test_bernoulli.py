import itertools
import random
from fractions import Fraction

import pytest

from lamplighter.bernoulli import (
    BernoulliElement,
    CylinderAssignment,
    cylinder_indicator,
    evaluate,
    function_values,
    integrate,
    mult_operator_rank,
)
from lamplighter.errors import NotAFunction, WindowTooSmall
from lamplighter.kernels import fwht
from lamplighter.sampling import random_cyclo, random_wreath
from lamplighter.scalar import Cyclo
from lamplighter.wreath import kappa

R = BernoulliElement.R
s = BernoulliElement.shift
one = BernoulliElement.one()


def cyl(**bits):
    return CylinderAssignment({int(k[1:]): v for k, v in bits.items()})


def assignments(window):
    window = sorted(window)
    for bits in itertools.product((0, 1), repeat=len(window)):
        yield CylinderAssignment(dict(zip(window, bits)))


def random_function(rng, coords=4, terms=5):
    out = {}
    for _ in range(terms):
        S = tuple(sorted(rng.sample(range(coords), rng.randint(0, 3))))
        out[(0, S)] = random_cyclo(rng, 2, bound=2)
    return BernoulliElement(out)


class TestAlgebra:
    def test_rademacher_laws(self):
        assert R(0) * R(0) == one
        assert s(1) * R(0) == R(1) * s(1)

    def test_star(self):
        assert R(0).star() == R(0)
        assert (R(0) * s(1)).star() == R(-1) * s(-1)

    def test_matches_wreath_through_kappa(self):
        rng = random.Random(7)
        for _ in range(20):
            a, b = random_wreath(rng), random_wreath(rng)
            assert kappa(a) * kappa(b) == kappa(a * b)
            assert kappa(a).star().star() == kappa(a)


class TestEvaluate:
    def test_examples(self):
        assert evaluate(one, CylinderAssignment({})) == 1
        assert evaluate(R(0), cyl(c0=1)) == -1
        half = (one + R(0)) / 2
        assert evaluate(half, cyl(c0=0)) == 1
        assert evaluate(half, cyl(c0=1)) == 0

    def test_window_too_small(self):
        with pytest.raises(WindowTooSmall):
            evaluate(R(0, 1), cyl(c0=1))

    def test_needs_function(self):
        with pytest.raises(NotAFunction):
            evaluate(R(0) * s(1), cyl(c0=1))

    def test_bad_bit(self):
        with pytest.raises(ValueError):
            CylinderAssignment({0: 2})


class TestIntegrate:
    def test_examples(self):
        assert integrate(R(3)) == 0
        assert integrate(one) == 1

    @pytest.mark.parametrize("m", [0, 1, 2, 3])
    def test_cylinder_measure(self, m):
        x = CylinderAssignment({c: (c * 5 + 1) % 2 for c in range(m)})
        assert integrate(cylinder_indicator(x)) == Fraction(1, 2**m)

    def test_integral_is_average_of_values(self):
        rng = random.Random(3)
        for _ in range(10):
            f = random_function(rng)
            vals = [evaluate(f, x) for x in assignments(range(4))]
            total = sum(vals, Cyclo(0))
            assert integrate(f) == total / 16


class TestCylinder:
    def test_examples(self):
        assert cylinder_indicator(CylinderAssignment({})) == one
        assert cylinder_indicator(cyl(c0=0)) == (one + R(0)) / 2
        expected = (one + R(0)) * (one - R(1)) / 4
        x = cyl(c0=0, c1=1)
        assert cylinder_indicator(x) == expected
        for y in assignments({0, 1}):
            assert evaluate(expected, y) == (1 if y == x else 0)

    def test_projection(self):
        p = cylinder_indicator(CylinderAssignment({-1: 1, 2: 0, 4: 1}))
        assert p * p == p and p.star() == p

    def test_text(self):
        assert str(cyl(c0=0, c1=1)) == "cyl{0:0,1:1}"


class TestRank:
    def test_examples(self):
        assert mult_operator_rank(R(0, 2, 5)) == 1
        assert mult_operator_rank((one + R(0)) / 2) == Fraction(1, 2)
        assert mult_operator_rank(BernoulliElement.zero()) == 0

    def test_matches_enumeration(self):
        rng = random.Random(11)
        for _ in range(15):
            f = random_function(rng)
            coords = sorted(f.support())
            count = sum(1 for x in assignments(coords) if not evaluate(f, x).is_zero)
            assert mult_operator_rank(f) == Fraction(count, 2 ** len(coords))

    def test_window_independent(self):
        f = (one + R(1)) / 2 + R(1, 2) / 3
        base = mult_operator_rank(f)
        coords, table, _, _ = function_values(f, window={0, 1, 2, 3})
        nonzero = sum(1 for row in table if any(row))
        assert Fraction(nonzero, 16) == base

    def test_axioms_on_commutative_subalgebra(self):
        rng = random.Random(5)
        for _ in range(15):
            f, g = random_function(rng, 3, 3), random_function(rng, 3, 3)
            rf, rg = mult_operator_rank(f), mult_operator_rank(g)
            assert mult_operator_rank(f * g) <= min(rf, rg)
            assert mult_operator_rank(f + g) <= rf + rg
        e = cylinder_indicator(cyl(c0=0, c1=0))
        f = cylinder_indicator(cyl(c0=1))
        assert e * f == BernoulliElement.zero()
        assert mult_operator_rank(e + f) == mult_operator_rank(e) + mult_operator_rank(f)

    def test_needs_function(self):
        with pytest.raises(NotAFunction):
            mult_operator_rank(s(1))


class TestWalshHadamard:
    @pytest.mark.parametrize("backend", ["numba", "numpy"])
    def test_agrees_with_direct_sum(self, backend):
        import numpy as np

        rng = np.random.default_rng(0)
        a = rng.integers(-5, 5, size=(16, 3)).astype(np.int64)
        h = fwht(a, backend=backend)
        for x in range(16):
            expected = sum(a[S] * (-1) ** bin(S & x).count("1") for S in range(16))
            assert (h[x] == expected).all()
