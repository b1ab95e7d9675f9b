import random

import pytest

from lamplighter.bernoulli import BernoulliElement, integrate
from lamplighter.sampling import random_wreath
from lamplighter.scalar import ZERO, Cyclo, root_of_unity
from lamplighter.wreath import WreathElement, kappa, kappa_inverse

t = WreathElement.t
s = WreathElement.shift
one = WreathElement.one()


def pairs(count, seed):
    rng = random.Random(seed)
    return [(random_wreath(rng), random_wreath(rng)) for _ in range(count)]


class TestMultiply:
    def test_lamps_are_involutions(self):
        assert t(0) * t(0) == one

    def test_shift_moves_lamps(self):
        assert s(1) * t(0) == t(1) * s(1)
        assert s(-2) * t(0, 3) == t(-2, 1) * s(-2)

    def test_symmetric_difference(self):
        assert t(0, 1) * t(1, 2) == t(0, 2)
        assert t(0, 0) == one

    @pytest.mark.parametrize("a,b", pairs(20, 1))
    def test_unit_and_associativity(self, a, b):
        c = random_wreath(random.Random(hash(str(a)) % 1000))
        assert a * one == a == one * a
        assert (a * b) * c == a * (b * c)


class TestStar:
    def test_example(self):
        assert (t(0) * s(1)).star() == t(-1) * s(-1)

    @pytest.mark.parametrize("a,b", pairs(20, 2))
    def test_anti_involution(self, a, b):
        assert a.star().star() == a
        assert (a * b).star() == b.star() * a.star()

    def test_conjugates_coefficients(self):
        a = WreathElement.scalar(root_of_unity(3, 1)) * t(2)
        assert a.star() == WreathElement.scalar(root_of_unity(3, 7)) * t(2)


class TestTrace:
    def test_examples(self):
        assert one.trace() == 1
        assert t(0).trace() == 0
        assert (t(0) * s(1)).trace() == 0

    @pytest.mark.parametrize("a,b", pairs(20, 3))
    def test_tracial_and_positive(self, a, b):
        assert (a * b).trace() == (b * a).trace()
        total = ZERO
        for c in a.terms.values():
            total = total + c.abs_squared()
        assert (a.star() * a).trace() == total
        assert total.sign() > 0

    def test_two_term_norm(self):
        a = WreathElement({(1, (0,)): Cyclo("1 + z(2,1)"), (0, ()): Cyclo(3)})
        assert (a.star() * a).trace() == 2 + 9


class TestKappa:
    def test_relabels(self):
        assert kappa(t(0) * s(2)) == BernoulliElement.R(0) * BernoulliElement.shift(2)
        assert kappa(one) == BernoulliElement.one()

    @pytest.mark.parametrize("a,b", pairs(30, 4))
    def test_star_isomorphism(self, a, b):
        assert kappa(a * b) == kappa(a) * kappa(b)
        assert kappa(a.star()) == kappa(a).star()
        assert kappa(a).trace() == a.trace()
        assert kappa_inverse(kappa(a)) == a

    def test_trace_is_integral_of_function_part(self):
        a = WreathElement({(0, ()): Cyclo("1/3"), (0, (1,)): Cyclo(2), (2, ()): Cyclo(5)})
        f = BernoulliElement({k: v for k, v in kappa(a).terms.items() if k[0] == 0})
        assert integrate(f) == a.trace()

    def test_rejects_other_pictures(self):
        with pytest.raises(TypeError):
            kappa(BernoulliElement.R(0))


class TestNormalForm:
    def test_zero_coefficients_dropped(self):
        a = WreathElement({(0, (1,)): Cyclo(0), (1, ()): Cyclo(2)})
        assert len(a) == 1

    def test_text(self):
        a = t(0) * s(2) + WreathElement.scalar(Cyclo("1/2"))
        assert str(a) == "1/2 + t[0]*s^2"
        assert str(s(1)) == "s"
        assert str(WreathElement.zero()) == "0"
        assert str(t(1) * Cyclo("1 + z(2,1)")) == "(1 + z(2,1))*t[1]"
        assert str(-t(1)) == "-t[1]"
