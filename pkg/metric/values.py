"""Distance values: exact rationals or tolerant decimals.

A space fixes one `DistanceMode` for all of its values. Rational mode keeps
`Fraction` objects and compares exactly; decimal mode keeps floats and treats
two values as equal when they differ by at most `eps`.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
import math
from typing import Union

from config import DECIMAL_EPS

Distance = Union[Fraction, float]


class NumericMode(str, Enum):
    RATIONAL = "rational"
    DECIMAL = "decimal"


@dataclass(frozen=True)
class DistanceMode:
    """Numeric representation and comparison rules of a space."""

    kind: NumericMode = NumericMode.RATIONAL
    eps: float = 0.0

    @classmethod
    def rational(cls) -> "DistanceMode":
        return cls(NumericMode.RATIONAL, 0.0)

    @classmethod
    def decimal(cls, eps: float = DECIMAL_EPS) -> "DistanceMode":
        if eps < 0 or math.isnan(eps):
            raise ValueError(f"eps must be a nonnegative number, got {eps}")
        return cls(NumericMode.DECIMAL, float(eps))

    @classmethod
    def from_name(cls, name: str, eps: float = DECIMAL_EPS) -> "DistanceMode":
        if name == NumericMode.RATIONAL.value:
            return cls.rational()
        if name == NumericMode.DECIMAL.value:
            return cls.decimal(eps)
        raise ValueError(f"unknown numeric mode '{name}'")

    @property
    def is_exact(self) -> bool:
        return self.kind is NumericMode.RATIONAL

    @property
    def zero(self) -> Distance:
        return Fraction(0) if self.is_exact else 0.0

    def parse(self, token: str) -> Distance:
        """Parse one numeric token; raises ValueError on malformed or non-finite input."""
        if self.is_exact:
            return Fraction(token)
        value = float(token)
        if not math.isfinite(value):
            raise ValueError(f"non-finite value '{token}'")
        return value

    def coerce(self, value: Union[int, float, Fraction, str]) -> Distance:
        if isinstance(value, str):
            return self.parse(value)
        if self.is_exact:
            return Fraction(value)
        return float(value)

    def eq(self, a: Distance, b: Distance) -> bool:
        if self.is_exact:
            return a == b
        return abs(a - b) <= self.eps

    def le(self, a: Distance, b: Distance) -> bool:
        return a <= b if self.is_exact else a <= b + self.eps

    def lt(self, a: Distance, b: Distance) -> bool:
        return a < b if self.is_exact else a < b - self.eps

    def is_zero(self, a: Distance) -> bool:
        return self.eq(a, self.zero)

    def half(self, a: Distance) -> Distance:
        return a / 2


def format_value(value: Distance) -> str:
    """Text form used in dumps: integers bare, other rationals as p/q."""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    if float(value).is_integer():
        return str(int(value))
    return repr(float(value))


def to_json_number(value: Distance) -> Union[int, float]:
    """JSON form: integral values as int, everything else as float."""
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    if isinstance(value, float) and value.is_integer():
        return int(value)
    return float(value)
