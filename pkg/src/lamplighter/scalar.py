"""Exact arithmetic in the 2-power cyclotomic fields Q(z_{2^N}).

An element at level N >= 2 is a polynomial in z = exp(2 pi i / 2^N) of degree
below D = 2^(N-1), reduced with z^D = -1.  Levels 0 and 1 are both Q.

Values are kept in a canonical form: integer numerators over one positive
denominator with no common factor, at the smallest level that contains the
value.  Equality, hashing and zero tests are therefore exact tuple checks.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

import mpmath

from .errors import ZeroInverse

__all__ = ["Cyclo", "root_of_unity", "degree", "ZERO", "ONE"]


def degree(level: int) -> int:
    """Dimension of Q(z_{2^level}) over Q."""
    return 1 if level <= 1 else 1 << (level - 1)


def _lift(nums, src: int, dst: int):
    if src == dst:
        return nums
    out = [0] * degree(dst)
    if src <= 1:
        out[0] = nums[0]
        return out
    step = 1 << (dst - src)
    for i, a in enumerate(nums):
        out[i * step] = a
    return out


class Cyclo:
    """Immutable element of a 2-power cyclotomic field."""

    __slots__ = ("level", "nums", "den")

    def __init__(self, value=0):
        if isinstance(value, Cyclo):
            level, nums, den = value.level, value.nums, value.den
        elif isinstance(value, int):
            level, nums, den = 0, (value,), 1
        elif isinstance(value, Rational):
            level, nums, den = 0, (int(value.numerator),), int(value.denominator)
        elif isinstance(value, str):
            from .parser import parse_scalar

            c = parse_scalar(value)
            level, nums, den = c.level, c.nums, c.den
        else:
            raise TypeError(f"cannot build a cyclotomic scalar from {type(value).__name__}")
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "nums", nums)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("Cyclo is immutable")

    @classmethod
    def _raw(cls, level, nums, den):
        obj = object.__new__(cls)
        object.__setattr__(obj, "level", level)
        object.__setattr__(obj, "nums", nums)
        object.__setattr__(obj, "den", den)
        return obj

    @classmethod
    def from_coefficients(cls, level: int, coeffs, den: int = 1) -> "Cyclo":
        """Build sum_i coeffs[i] z^i / den at ``level``; coeffs may be Fractions."""
        if level < 0:
            raise ValueError("level must be non-negative")
        coeffs = list(coeffs)
        d = degree(level)
        if len(coeffs) > d:
            # reduce with z^D = -1
            red = [0] * d
            for i, c in enumerate(coeffs):
                q, r = divmod(i, d)
                red[r] += -c if q & 1 else c
            coeffs = red
        coeffs += [0] * (d - len(coeffs))
        fr = [Fraction(c) for c in coeffs]
        common = math.lcm(den, *(f.denominator for f in fr))
        nums = [f.numerator * (common // f.denominator) for f in fr]
        return _canon(level, nums, common * den)

    # -- predicates -----------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return self.den == 1 and self.level == 0 and self.nums[0] == 0

    def __bool__(self):
        return not self.is_zero

    @property
    def is_rational(self) -> bool:
        return self.level == 0

    def as_fraction(self) -> Fraction:
        if self.level:
            raise ValueError(f"{self} is not rational")
        return Fraction(self.nums[0], self.den)

    def coefficients(self, level: int | None = None) -> list[Fraction]:
        """Power-basis coefficients, optionally lifted to a higher level."""
        level = self.level if level is None else level
        if level < self.level:
            raise ValueError("cannot lower the level of a scalar")
        return [Fraction(a, self.den) for a in _lift(self.nums, self.level, level)]

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return _combine(self, other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return _combine(self, other, -1)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return _combine(other, self, -1)

    def __neg__(self):
        return Cyclo._raw(self.level, tuple(-a for a in self.nums), self.den)

    def __pos__(self):
        return self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return _multiply(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return _multiply(self, other.inverse())

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return _multiply(other, self.inverse())

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        base = self
        if e < 0:
            base, e = self.inverse(), -e
        result = ONE
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def conj(self) -> "Cyclo":
        """Complex conjugation, z -> z^{-1} = -z^{D-1}."""
        if self.level == 0:
            return self
        a = self.nums
        d = len(a)
        out = [0] * d
        out[0] = a[0]
        for i in range(1, d):
            out[d - i] = -a[i]
        return Cyclo._raw(self.level, tuple(out), self.den)

    def galois(self, j: int) -> "Cyclo":
        """Image under the automorphism z -> z^j (j odd)."""
        if j % 2 == 0:
            raise ValueError("Galois exponent must be odd")
        if self.level == 0:
            return self
        d = len(self.nums)
        out = [0] * d
        for i, a in enumerate(self.nums):
            if a:
                q, r = divmod(i * j, d)
                out[r] += -a if q & 1 else a
        return _canon(self.level, out, self.den)

    def inverse(self) -> "Cyclo":
        """Multiplicative inverse via the norm to the next level down.

        a(z) a(-z) is even in z, hence lies in Q(z^2); recurse until Q.
        """
        if self.is_zero:
            raise ZeroInverse("inverse of zero")
        if self.level == 0:
            n = self.nums[0]
            return Cyclo._raw(0, (self.den if n > 0 else -self.den,), abs(n))
        flipped = Cyclo._raw(
            self.level,
            tuple(-a if i & 1 else a for i, a in enumerate(self.nums)),
            self.den,
        )
        return flipped * (self * flipped).inverse()

    def abs_squared(self) -> "Cyclo":
        return self * self.conj()

    def norm(self) -> Fraction:
        """Field norm to Q (product of all Galois conjugates)."""
        x = self
        while x.level:
            x = x * Cyclo._raw(
                x.level, tuple(-a if i & 1 else a for i, a in enumerate(x.nums)), x.den
            )
        return x.as_fraction()

    def to_complex(self, precision: int = 15) -> tuple[float, float]:
        """Numerical value under z_{2^N} -> exp(2 pi i / 2^N)."""
        if precision < 1:
            raise ValueError("precision must be >= 1")
        if self.level == 0:
            return (float(Fraction(self.nums[0], self.den)), 0.0)
        big = max(abs(a) for a in self.nums)
        digits = precision + len(str(big)) + 10
        with mpmath.workdps(digits):
            n = 1 << self.level
            s = mpmath.mpc(0)
            for i, a in enumerate(self.nums):
                if a:
                    s += a * mpmath.expjpi(mpmath.mpf(2 * i) / n)
            s /= self.den
            return (float(s.real), float(s.imag))

    def __complex__(self):
        return complex(*self.to_complex())

    def is_real(self) -> bool:
        return self == self.conj()

    def sign(self) -> int:
        """Exact sign of a real element (-1, 0 or 1)."""
        if self.is_zero:
            return 0
        if self.level == 0:
            return 1 if self.nums[0] > 0 else -1
        if not self.is_real():
            raise ValueError("sign of a non-real number")
        l1 = sum(abs(a) for a in self.nums)
        digits = 30 + len(str(l1))
        while True:
            with mpmath.workdps(digits):
                n = 1 << self.level
                s = mpmath.mpf(0)
                for i, a in enumerate(self.nums):
                    if a:
                        s += a * mpmath.cospi(mpmath.mpf(2 * i) / n)
                err = mpmath.mpf(l1) * mpmath.mpf(10) ** (8 - digits)
                if abs(s) > err:
                    return 1 if s > 0 else -1
            digits *= 2

    def abs_upper(self) -> Fraction:
        """A rational upper bound for |self|, exact when |self| is rational."""
        sq = self.abs_squared()
        if sq.level == 0:
            q = sq.as_fraction()
            rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
            if rn * rn == q.numerator and rd * rd == q.denominator:
                return Fraction(rn, rd)
        re, im = self.to_complex(precision=30)
        guess = Fraction(math.hypot(re, im)) * (1 + Fraction(1, 1 << 30)) + Fraction(1, 1 << 40)
        while (Cyclo(guess * guess) - sq).sign() < 0:  # pragma: no cover - float slop
            guess *= 2
        return guess

    # -- comparison / hashing --------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Cyclo):
            return (
                self.level == other.level and self.den == other.den and self.nums == other.nums
            )
        if isinstance(other, (int, Rational)):
            return self.level == 0 and Fraction(self.nums[0], self.den) == other
        return NotImplemented

    def __hash__(self):
        if self.level == 0:
            return hash(Fraction(self.nums[0], self.den))
        return hash((self.level, self.nums, self.den))

    def height(self) -> int:
        """Bit size, used as a pivoting heuristic."""
        return self.den.bit_length() + max(abs(a) for a in self.nums).bit_length()

    # -- text --------------------------------------------------------------
    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f"Cyclo('{self}')"

    def __reduce__(self):
        return (Cyclo._raw, (self.level, self.nums, self.den))


def _canon(level, nums, den) -> Cyclo:
    if den < 0:
        den = -den
        nums = [-a for a in nums]
    while level >= 2 and not any(nums[1::2]):
        nums = nums[0::2]
        level -= 1
    if level == 1:
        level = 0
    g = math.gcd(den, *nums)
    if g == den and level == 0 and nums[0] == 0:
        return ZERO
    if g != 1:
        nums = [a // g for a in nums]
        den //= g
    return Cyclo._raw(level, tuple(nums), den)


def _coerce(x):
    if isinstance(x, Cyclo):
        return x
    if isinstance(x, int):
        return Cyclo._raw(0, (x,), 1)
    if isinstance(x, Rational):
        return Cyclo._raw(0, (int(x.numerator),), int(x.denominator))
    return NotImplemented


def _combine(a: Cyclo, b: Cyclo, sign: int) -> Cyclo:
    level = max(a.level, b.level)
    an = _lift(a.nums, a.level, level)
    bn = _lift(b.nums, b.level, level)
    if a.den == b.den:
        nums = [x + sign * y for x, y in zip(an, bn)]
        den = a.den
    else:
        da, db = a.den, b.den
        nums = [x * db + sign * y * da for x, y in zip(an, bn)]
        den = da * db
    return _canon(level, nums, den)


def _multiply(a: Cyclo, b: Cyclo) -> Cyclo:
    if a.level == 0 or b.level == 0:
        if a.level:
            a, b = b, a
        s = a.nums[0]
        if s == 0:
            return ZERO
        return _canon(b.level, [s * y for y in b.nums], a.den * b.den)
    level = max(a.level, b.level)
    an = _lift(a.nums, a.level, level)
    bn = _lift(b.nums, b.level, level)
    d = len(an)
    res = [0] * d
    nzb = [(j, y) for j, y in enumerate(bn) if y]
    for i, x in enumerate(an):
        if not x:
            continue
        for j, y in nzb:
            k = i + j
            if k < d:
                res[k] += x * y
            else:
                res[k - d] -= x * y
    return _canon(level, res, a.den * b.den)


ZERO = Cyclo._raw(0, (0,), 1)
ONE = Cyclo._raw(0, (1,), 1)


def root_of_unity(n: int, l: int) -> Cyclo:
    """z_{2^n}^l in canonical form."""
    if n < 0:
        raise ValueError("level must be non-negative")
    l %= 1 << n
    if n == 0:
        return ONE
    if n == 1:
        return ONE if l == 0 else Cyclo._raw(0, (-1,), 1)
    d = 1 << (n - 1)
    nums = [0] * d
    if l < d:
        nums[l] = 1
    else:
        nums[l - d] = -1
    return _canon(n, nums, 1)


def _zeta_atom(level: int, i: int) -> str:
    # z(level, i) with the exponent made odd
    while i and i % 2 == 0 and level > 1:
        i //= 2
        level -= 1
    return f"z({level},{i})"


def format_scalar(c: Cyclo) -> str:
    """Parseable text such as ``1/2 - 3/4*z(3,1)``."""
    if c.is_zero:
        return "0"
    parts = []
    for i, a in enumerate(c.nums):
        if not a:
            continue
        q = Fraction(a, c.den)
        sign = "-" if q < 0 else "+"
        q = abs(q)
        if i == 0:
            body = str(q)
        else:
            atom = _zeta_atom(c.level, i)
            body = atom if q == 1 else f"{q}*{atom}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out
