import math
import pickle
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lamplighter.errors import ZeroInverse
from lamplighter.scalar import ONE, ZERO, Cyclo, root_of_unity

from oracles import complex_value

z4 = root_of_unity(2, 1)
z8 = root_of_unity(3, 1)


@st.composite
def cyclos(draw, max_level=5):
    level = draw(st.integers(0, max_level))
    d = 1 if level <= 1 else 1 << (level - 1)
    coeffs = draw(st.lists(st.integers(-6, 6), min_size=d, max_size=d))
    den = draw(st.integers(1, 5))
    return Cyclo.from_coefficients(level, coeffs, den)


class TestRootsOfUnity:
    def test_small_levels(self):
        assert root_of_unity(0, 0) == 1
        assert root_of_unity(1, 1) == -1
        assert z4 * z4 == -1

    @pytest.mark.parametrize("n,l", [(3, 1), (3, 2), (4, 6), (5, 8), (2, 0)])
    def test_order(self, n, l):
        order = (1 << n) // math.gcd(l, 1 << n)
        z = root_of_unity(n, l)
        assert z**order == 1
        assert all(z**k != 1 for k in range(1, order))

    def test_negative_exponent_and_reduction(self):
        assert root_of_unity(3, -1) == root_of_unity(3, 7)
        assert root_of_unity(3, 2) == z4
        assert root_of_unity(4, 4) == z4


class TestArithmetic:
    def test_examples(self):
        assert z8 * root_of_unity(3, 7) == 1
        assert (1 + z4) * (1 - z4) == 2
        x = Cyclo("1/3 - 2*z(3,1)")
        assert x + (-x) == 0
        assert (x - x).is_zero

    @settings(max_examples=60, deadline=None)
    @given(cyclos(), cyclos(), cyclos())
    def test_field_laws(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a
        assert a + b == b + a

    @settings(max_examples=60, deadline=None)
    @given(cyclos(), cyclos())
    def test_conj_is_automorphism(self, a, b):
        assert (a * b).conj() == a.conj() * b.conj()
        assert (a + b).conj() == a.conj() + b.conj()
        assert a.conj().conj() == a

    def test_conj_examples(self):
        assert z4.conj() == root_of_unity(2, 3)
        assert Cyclo(Fraction(3, 2)).conj() == Fraction(3, 2)

    @settings(max_examples=60, deadline=None)
    @given(cyclos())
    def test_inverse(self, a):
        if a.is_zero:
            with pytest.raises(ZeroInverse):
                a.inverse()
        else:
            assert a * a.inverse() == 1

    def test_inverse_examples(self):
        assert Cyclo(2).inverse() == Fraction(1, 2)
        assert z8.inverse() == root_of_unity(3, 7)
        assert (1 + z4).inverse() == (1 - z4) / 2
        with pytest.raises(ZeroDivisionError):
            ZERO.inverse()

    def test_canonical_level_is_minimal(self):
        lifted = Cyclo.from_coefficients(4, [0, 0, 0, 0, 1, 0, 0, 0])  # z16^4 = z4
        assert lifted == z4 and lifted.level == 2
        assert hash(Cyclo(Fraction(1, 2))) == hash(Fraction(1, 2))
        assert Cyclo.from_coefficients(3, [2, 0, 0, 0], 4) == Fraction(1, 2)

    @settings(max_examples=40, deadline=None)
    @given(cyclos(max_level=3), cyclos(max_level=3))
    def test_level_lifting_compatibility(self, a, b):
        # the same values written at level 5 give identical canonical results
        def up(x):
            return Cyclo.from_coefficients(5, [c * x.den for c in x.coefficients(5)], x.den)

        assert up(a) == a and up(a) * up(b) == a * b and up(a) + up(b) == a + b

    def test_powers(self):
        assert z8**8 == 1 and z8**-1 == root_of_unity(3, 7)
        assert Cyclo(2) ** -2 == Fraction(1, 4)

    def test_pickle_roundtrip(self):
        x = Cyclo("3/4*z(3,1) - 1/5")
        assert pickle.loads(pickle.dumps(x)) == x


class TestNumerics:
    def test_examples(self):
        assert ONE.to_complex() == (1.0, 0.0)
        re, im = z4.to_complex()
        assert abs(re) < 1e-15 and abs(im - 1) < 1e-15
        re, im = z8.to_complex(precision=14)
        assert abs(re - math.sqrt(2) / 2) < 1e-12 and abs(im - math.sqrt(2) / 2) < 1e-12

    @settings(max_examples=40, deadline=None)
    @given(cyclos())
    def test_matches_direct_evaluation(self, a):
        assert abs(complex(a) - complex_value(a)) < 1e-9

    def test_precision_must_be_positive(self):
        with pytest.raises(ValueError):
            z8.to_complex(precision=0)

    def test_sign_and_abs_upper(self):
        r2 = z8 + z8.conj()  # sqrt 2
        assert r2.sign() == 1 and (-r2).sign() == -1 and ZERO.sign() == 0
        assert (r2 - Fraction(141421, 100000)).sign() == 1
        assert (r2 - Fraction(141422, 100000)).sign() == -1
        ub = r2.abs_upper()
        assert math.sqrt(2) <= ub < math.sqrt(2) + 1e-6
        assert z8.abs_upper() == 1 and Cyclo(Fraction(-3, 4)).abs_upper() == Fraction(3, 4)
        with pytest.raises(ValueError):
            z4.sign()


class TestText:
    @pytest.mark.parametrize("text", ["0", "1/2 - 3/4*z(3,1)", "-z(4,3) + 2*z(4,5)", "7"])
    def test_roundtrip(self, text):
        assert str(Cyclo(text)) == text

    def test_exponents_printed_odd(self):
        assert str(root_of_unity(4, 4)) == "z(2,1)"
        assert str(Cyclo("z(3,2) + z(3,1)")) == "z(3,1) + z(2,1)"

    @settings(max_examples=60, deadline=None)
    @given(cyclos())
    def test_print_parse(self, a):
        assert Cyclo(str(a)) == a
