"""Exact numbers of the form ``a + b*sqrt(k)`` with rational ``a, b``.

Only the fields Q, Q(sqrt 2) and Q(sqrt 5) are supported.  Mixing sqrt 2 and
sqrt 5 in a single expression raises; nothing in the threshold formulas needs
the compositum.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Union

SUPPORTED_FIELDS = (1, 2, 5)
DEFAULT_PRECISION = 128

NEGATIVE, ZERO, POSITIVE = -1, 0, 1

Number = Union[int, Fraction, "QuadraticScalar"]


class IncompatibleFieldError(ValueError):
    pass


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational")


class QuadraticScalar:
    """Immutable element ``a + b*sqrt(k)`` of Q(sqrt k).

    ``k == 1`` is reserved for pure rationals and then ``b == 0``.
    """

    __slots__ = ("a", "b", "k")

    def __init__(self, a=0, b=0, k: int = 1):
        a = _as_fraction(a)
        b = _as_fraction(b)
        if k not in SUPPORTED_FIELDS:
            raise ValueError(f"unsupported field sqrt({k}); expected one of {SUPPORTED_FIELDS}")
        if k == 1:
            a, b = a + b, Fraction(0)
        elif b == 0:
            k = 1
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "k", k)

    def __setattr__(self, name, value):
        raise AttributeError("QuadraticScalar is immutable")

    def __reduce__(self):
        return (QuadraticScalar, (self.a, self.b, self.k))

    @classmethod
    def coerce(cls, x) -> "QuadraticScalar":
        if isinstance(x, QuadraticScalar):
            return x
        return cls(_as_fraction(x), 0, 1)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def conjugate(self) -> "QuadraticScalar":
        return QuadraticScalar(self.a, -self.b, self.k)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.k

    def _field_with(self, other: "QuadraticScalar") -> int:
        if self.k == other.k or other.k == 1:
            return self.k
        if self.k == 1:
            return other.k
        raise IncompatibleFieldError(f"cannot mix sqrt({self.k}) and sqrt({other.k})")

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        try:
            other = QuadraticScalar.coerce(other)
        except TypeError:
            return NotImplemented
        k = self._field_with(other)
        return QuadraticScalar(self.a + other.a, self.b + other.b, k)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticScalar(-self.a, -self.b, self.k)

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            other = QuadraticScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return QuadraticScalar.coerce(other) - self

    def __mul__(self, other):
        try:
            other = QuadraticScalar.coerce(other)
        except TypeError:
            return NotImplemented
        k = self._field_with(other)
        a, b, c, d = self.a, self.b, other.a, other.b
        return QuadraticScalar(a * c + b * d * k, a * d + b * c, k)

    __rmul__ = __mul__

    def inverse(self) -> "QuadraticScalar":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        return QuadraticScalar(self.a / n, -self.b / n, self.k)

    def __truediv__(self, other):
        try:
            other = QuadraticScalar.coerce(other)
        except TypeError:
            return NotImplemented
        if other.is_rational:
            if other.a == 0:
                raise ZeroDivisionError("division by zero in quadratic field")
            return QuadraticScalar(self.a / other.a, self.b / other.a, self.k)
        self._field_with(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return QuadraticScalar.coerce(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (self.inverse()) ** (-n)
        result = QuadraticScalar(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # comparison -----------------------------------------------------------

    def sign(self) -> int:
        return qf_sign(self)

    def __eq__(self, other):
        try:
            other = QuadraticScalar.coerce(other)
        except TypeError:
            return NotImplemented
        if self.is_rational and other.is_rational:
            return self.a == other.a
        return self.a == other.a and self.b == other.b and self.k == other.k

    def __hash__(self):
        if self.is_rational:
            return hash(self.a)
        return hash((self.a, self.b, self.k))

    def _cmp(self, other) -> int:
        return qf_sign(self - QuadraticScalar.coerce(other))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __bool__(self):
        return self.a != 0 or self.b != 0

    # conversion -----------------------------------------------------------

    def __float__(self):
        return qf_to_float(self)

    def __repr__(self):
        if self.is_rational:
            return f"QuadraticScalar({self.a})"
        return f"QuadraticScalar({self.a} + {self.b}*sqrt({self.k}))"

    def __str__(self):
        if self.is_rational:
            return str(self.a)
        sign = "+" if self.b > 0 else "-"
        return f"{self.a} {sign} {abs(self.b)}*sqrt({self.k})"

    def to_json(self) -> dict:
        return {
            "a_num": self.a.numerator,
            "a_den": self.a.denominator,
            "b_num": self.b.numerator,
            "b_den": self.b.denominator,
            "k": self.k,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "QuadraticScalar":
        return qf_make(
            Fraction(obj["a_num"], obj["a_den"]),
            Fraction(obj["b_num"], obj["b_den"]),
            obj["k"],
        )


def qf_make(a, b=0, k: int = 1) -> QuadraticScalar:
    """Build a canonical scalar; ``b == 0`` collapses the field to Q."""
    return QuadraticScalar(a, b, k)


def sqrt_of(k: int) -> QuadraticScalar:
    return QuadraticScalar(0, 1, k)


_OPS = {
    "add": lambda x, y: x + y,
    "sub": lambda x, y: x - y,
    "mul": lambda x, y: x * y,
    "div": lambda x, y: x / y,
}


def qf_arith(x, y, op: str) -> QuadraticScalar:
    if op not in _OPS:
        raise ValueError(f"unknown operation {op!r}")
    return _OPS[op](QuadraticScalar.coerce(x), QuadraticScalar.coerce(y))


def qf_sign(x) -> int:
    """Exact sign of ``a + b*sqrt(k)``."""
    x = QuadraticScalar.coerce(x)
    sa = (x.a > 0) - (x.a < 0)
    sb = (x.b > 0) - (x.b < 0)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # opposite signs: compare a^2 with b^2 k
    lhs = x.a * x.a
    rhs = x.b * x.b * x.k
    if lhs > rhs:
        return sa
    if lhs < rhs:
        return sb
    return 0


def int_sign(a: int, b: int, k: int) -> int:
    """Sign of ``a + b*sqrt(k)`` for integers."""
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    lhs, rhs = a * a, b * b * k
    if lhs == rhs:
        return 0
    return sa if lhs > rhs else sb


def qf_approx(x, precision: int = DEFAULT_PRECISION) -> Fraction:
    """Rational approximation of ``x`` with absolute error below ``2**-precision``."""
    x = QuadraticScalar.coerce(x)
    if x.is_rational:
        return x.a
    # extra guard bits keep the floor error of isqrt far below the target
    p = precision + 8
    scale = 1 << p
    b2k = x.b * x.b * x.k
    root = math.isqrt(b2k.numerator * scale * scale // b2k.denominator)
    if x.b < 0:
        root = -root
    return x.a + Fraction(root, scale)


def qf_to_float(x, precision: int = DEFAULT_PRECISION) -> float:
    """Float rendering of ``x``, computed from a ``precision``-bit rational.

    The conversion error is below the double-precision half-ulp except when
    ``x`` is within ``2**-precision`` of a rounding boundary.
    """
    if precision < 53:
        raise ValueError("precision must be at least 53 bits")
    x = QuadraticScalar.coerce(x)
    if x.is_rational:
        return float(x.a)
    approx = qf_approx(x, precision)
    # relative accuracy: if |x| is tiny, widen the working precision
    if approx != 0:
        mag = abs(approx)
        extra = max(0, -math.floor(math.log2(mag)))
        if extra:
            approx = qf_approx(x, precision + extra)
    return float(approx)


def scalar_from_float(value: float) -> QuadraticScalar:
    """Exact rational embedding of a binary float."""
    return QuadraticScalar(Fraction(value))


class ScalarVector:
    """A list of field elements over one common denominator.

    Entry ``i`` equals ``(num_a[i] + num_b[i]*sqrt(k)) / den``.  Sums of
    products then reduce to plain integer loops, which keeps exact
    evaluation cheap for long coefficient profiles.
    """

    __slots__ = ("num_a", "num_b", "den", "k")

    def __init__(self, values):
        values = [QuadraticScalar.coerce(v) for v in values]
        k = 1
        for v in values:
            if v.k != 1:
                if k not in (1, v.k):
                    raise IncompatibleFieldError("mixed quadratic fields in one vector")
                k = v.k
        den = 1
        for v in values:
            den = math.lcm(den, v.a.denominator, v.b.denominator)
        self.num_a = [v.a.numerator * (den // v.a.denominator) for v in values]
        self.num_b = [v.b.numerator * (den // v.b.denominator) for v in values]
        self.den = den
        self.k = k

    def __len__(self):
        return len(self.num_a)

    def sign(self, i: int) -> int:
        return int_sign(self.num_a[i], self.num_b[i], self.k)

    def sign_diff(self, i: int, j: int) -> int:
        """Sign of ``self[i] - self[j]``."""
        return int_sign(self.num_a[i] - self.num_a[j], self.num_b[i] - self.num_b[j], self.k)

    def _pack(self, a: int, b: int, den: int, k: int) -> QuadraticScalar:
        return QuadraticScalar(Fraction(a, den), Fraction(b, den), k)

    def total(self, stop: int | None = None) -> QuadraticScalar:
        stop = len(self) if stop is None else stop
        return self._pack(sum(self.num_a[:stop]), sum(self.num_b[:stop]), self.den, self.k)

    def dot(self, other: "ScalarVector", offset: int = 0, length: int | None = None) -> QuadraticScalar:
        """``sum_i self[i] * other[i + offset]`` for ``i < length``."""
        if self.k != 1 and other.k != 1 and self.k != other.k:
            raise IncompatibleFieldError("mixed quadratic fields in dot product")
        k = self.k if self.k != 1 else other.k
        if length is None:
            length = min(len(self), len(other) - offset)
        xa, xb, ya, yb = self.num_a, self.num_b, other.num_a, other.num_b
        sa = 0
        sb = 0
        if self.k == 1 and other.k == 1:
            for i in range(length):
                sa += xa[i] * ya[i + offset]
        else:
            for i in range(length):
                j = i + offset
                sa += xa[i] * ya[j] + k * xb[i] * yb[j]
                sb += xa[i] * yb[j] + xb[i] * ya[j]
        return self._pack(sa, sb, self.den * other.den, k)
