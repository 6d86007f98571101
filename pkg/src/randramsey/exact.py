"""Exact numbers of the form ``mantissa * 2**exp2``.

The proof constants reach magnitudes like ``2**-(10**7)``, far outside any
floating point range and too large to hold as plain fractions.  Keeping the
power of two separate from a small rational mantissa makes products, powers
and comparisons exact and cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

Number = Union["ExactScalar", Fraction, int]


def _split_twos(x: int) -> tuple[int, int]:
    """Return (odd part, power of two) of a nonzero integer."""
    tz = (x & -x).bit_length() - 1
    return x >> tz, tz


# exact sums of values this far apart would need more bits than is sensible
MAX_ADD_GAP = 1 << 26


@dataclass(frozen=True, eq=False)
class ExactScalar:
    """Exact value ``mantissa * 2**exp2``.

    The representation is normalized so that the mantissa has odd numerator
    and odd denominator; zero is stored as ``(0, 0)``.  Normalization makes
    structural equality coincide with numeric equality.
    """

    mantissa: Fraction
    exp2: int = 0

    def __post_init__(self) -> None:
        m = Fraction(self.mantissa)
        e = int(self.exp2)
        if m == 0:
            object.__setattr__(self, "mantissa", Fraction(0))
            object.__setattr__(self, "exp2", 0)
            return
        num, tn = _split_twos(m.numerator)
        den, td = _split_twos(m.denominator)
        object.__setattr__(self, "mantissa", Fraction(num, den))
        object.__setattr__(self, "exp2", e + tn - td)

    # construction -------------------------------------------------------

    @classmethod
    def of(cls, x: Number | str) -> ExactScalar:
        if isinstance(x, ExactScalar):
            return x
        if isinstance(x, (int, Rational)):
            return cls(Fraction(x))
        if isinstance(x, str):
            return cls(Fraction(x))
        if isinstance(x, float):
            return cls(Fraction(x))
        raise TypeError(f"cannot convert {type(x).__name__} to ExactScalar")

    @classmethod
    def pow2(cls, e: int) -> ExactScalar:
        return cls(Fraction(1), e)

    # queries ------------------------------------------------------------

    def is_zero(self) -> bool:
        return self.mantissa == 0

    @property
    def sign(self) -> int:
        return (self.mantissa > 0) - (self.mantissa < 0)

    def is_power_of_two(self) -> bool:
        return self.mantissa == 1

    def log2(self) -> int:
        """Exact log2; only defined for exact powers of two."""
        if not self.is_power_of_two():
            raise ValueError(f"{self} is not an exact power of two")
        return self.exp2

    def _log2_center(self) -> int:
        # log2|x| lies strictly within (center - 1, center + 1)
        m = abs(self.mantissa)
        return self.exp2 + m.numerator.bit_length() - m.denominator.bit_length()

    def log2_approx(self) -> float:
        if self.sign <= 0:
            raise ValueError("log2 of a non-positive value")
        m = self.mantissa
        return self.exp2 + math.log2(m.numerator) - math.log2(m.denominator)

    def to_fraction(self, max_bits: int = 1 << 20) -> Fraction:
        if abs(self.exp2) > max_bits:
            raise OverflowError(f"exponent {self.exp2} too large for a Fraction")
        if self.exp2 >= 0:
            return self.mantissa * (1 << self.exp2)
        return self.mantissa / (1 << -self.exp2)

    def __float__(self) -> float:
        if self.is_zero():
            return 0.0
        m = self.mantissa
        # scale the mantissa into a safe range before ldexp
        shift = m.numerator.bit_length() - m.denominator.bit_length()
        core = float(m / Fraction(2) ** shift) if shift else float(m)
        try:
            return math.ldexp(core, self.exp2 + shift)
        except OverflowError:
            return math.copysign(math.inf, core)

    # arithmetic ---------------------------------------------------------

    def __mul__(self, other: Number) -> ExactScalar:
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return ExactScalar(self.mantissa * o.mantissa, self.exp2 + o.exp2)

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> ExactScalar:
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("ExactScalar division by zero")
        return ExactScalar(self.mantissa / o.mantissa, self.exp2 - o.exp2)

    def __rtruediv__(self, other: Number) -> ExactScalar:
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def __pow__(self, k: int) -> ExactScalar:
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            if self.is_zero():
                raise ZeroDivisionError("zero to a negative power")
            return ExactScalar(1 / self.mantissa ** (-k), self.exp2 * k)
        if k == 0:
            return ExactScalar(Fraction(1))
        return ExactScalar(self.mantissa**k, self.exp2 * k)

    def __neg__(self) -> ExactScalar:
        return ExactScalar(-self.mantissa, self.exp2)

    def __abs__(self) -> ExactScalar:
        return ExactScalar(abs(self.mantissa), self.exp2)

    def __add__(self, other: Number) -> ExactScalar:
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.is_zero():
            return o
        if o.is_zero():
            return self
        lo = min(self.exp2, o.exp2)
        if abs(self.exp2 - o.exp2) > MAX_ADD_GAP:
            raise OverflowError("exponent gap too large for an exact sum")
        total = self.mantissa * (1 << (self.exp2 - lo)) + o.mantissa * (1 << (o.exp2 - lo))
        return ExactScalar(total, lo)

    __radd__ = __add__

    def __sub__(self, other: Number) -> ExactScalar:
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Number) -> ExactScalar:
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    # ordering -----------------------------------------------------------

    def _cmp(self, other: ExactScalar) -> int:
        s1, s2 = self.sign, other.sign
        if s1 != s2:
            return (s1 > s2) - (s1 < s2)
        if s1 == 0:
            return 0
        # both nonzero with the same sign: compare magnitudes
        c1, c2 = self._log2_center(), other._log2_center()
        if c1 - c2 >= 2:
            mag = 1
        elif c2 - c1 >= 2:
            mag = -1
        else:
            a, b = abs(self.mantissa), abs(other.mantissa)
            shift = self.exp2 - other.exp2
            if shift >= 0:
                a = a * (1 << shift)
            else:
                b = b * (1 << -shift)
            mag = (a > b) - (a < b)
        return mag * s1

    def __eq__(self, other: object) -> bool:
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.mantissa == o.mantissa and self.exp2 == o.exp2

    def __hash__(self) -> int:
        return hash((self.mantissa, self.exp2))

    def __lt__(self, other: Number) -> bool:
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._cmp(o) < 0

    def __le__(self, other: Number) -> bool:
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._cmp(o) <= 0

    def __gt__(self, other: Number) -> bool:
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._cmp(o) > 0

    def __ge__(self, other: Number) -> bool:
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._cmp(o) >= 0

    # display ------------------------------------------------------------

    def __repr__(self) -> str:
        return f"ExactScalar({self.mantissa}, {self.exp2})"

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        if self.exp2 == 0:
            return str(self.mantissa)
        if self.mantissa == 1:
            return f"2^{self.exp2}"
        if max(self.mantissa.numerator.bit_length(), self.mantissa.denominator.bit_length()) > 4096:
            return f"~2^{self.log2_approx():.6g}"
        return f"{self.mantissa}*2^{self.exp2}"

    def to_json(self) -> dict[str, str]:
        """Serialize with big integers as decimal strings."""
        return {"mantissa": str(self.mantissa), "exp2": str(self.exp2)}

    @classmethod
    def from_json(cls, obj: dict[str, str]) -> ExactScalar:
        return cls(Fraction(obj["mantissa"]), int(obj["exp2"]))


def _coerce(x: object) -> ExactScalar:
    if isinstance(x, ExactScalar):
        return x
    if isinstance(x, (int, Rational)):
        return ExactScalar(Fraction(x))
    return NotImplemented


def exact(x: Number | str) -> ExactScalar:
    return ExactScalar.of(x)


@dataclass(frozen=True)
class ExpValue:
    """The number ``exp(exponent)``, kept in log space.

    Probability bounds such as ``exp(-delta**2 * N * p / 9)`` are stored by
    their exponent so that comparisons never touch a floating point ``exp``.
    """

    exponent: ExactScalar

    def __post_init__(self) -> None:
        object.__setattr__(self, "exponent", ExactScalar.of(self.exponent))

    def __float__(self) -> float:
        x = float(self.exponent)
        if x < -745:
            return 0.0
        if x > 709:
            return math.inf
        return math.exp(x)

    def __mul__(self, other: ExpValue) -> ExpValue:
        return ExpValue(self.exponent + other.exponent)

    def __lt__(self, other: ExpValue) -> bool:
        return self.exponent < other.exponent

    def __le__(self, other: ExpValue) -> bool:
        return self.exponent <= other.exponent

    def __gt__(self, other: ExpValue) -> bool:
        return self.exponent > other.exponent

    def __ge__(self, other: ExpValue) -> bool:
        return self.exponent >= other.exponent

    def __str__(self) -> str:
        return f"exp({self.exponent})"

    def to_json(self) -> dict[str, object]:
        return {"exp_of": self.exponent.to_json()}
