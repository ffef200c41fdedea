"""Exact dyadic rationals num / 2**exp with arbitrary-precision integers.

Canonical form: num odd, or exp == 0.  No floats anywhere; every operation
is exact except the explicitly-rounding div_floor, which callers use only
to compress sample averages.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ValidationError


def _canonical(num: int, exp: int) -> tuple[int, int]:
    if exp < 0:
        raise ValidationError(f"negative dyadic exponent {exp}")
    if num == 0:
        return 0, 0
    # strip shared factors of two; (num & -num) isolates the low set bit
    tz = (num & -num).bit_length() - 1
    s = min(tz, exp)
    return num >> s, exp - s


@dataclass(frozen=True, slots=True)
class Dyadic:
    num: int
    exp: int

    def __post_init__(self):
        n, e = _canonical(self.num, self.exp)
        object.__setattr__(self, "num", n)
        object.__setattr__(self, "exp", e)

    @classmethod
    def from_int(cls, n: int) -> "Dyadic":
        return cls(n, 0)

    @classmethod
    def pow2(cls, k: int) -> "Dyadic":
        """2**k for any integer k."""
        return cls(1 << k, 0) if k >= 0 else cls(1, -k)

    def __add__(self, other: "Dyadic") -> "Dyadic":
        e = max(self.exp, other.exp)
        return Dyadic((self.num << (e - self.exp)) + (other.num << (e - other.exp)), e)

    def __sub__(self, other: "Dyadic") -> "Dyadic":
        e = max(self.exp, other.exp)
        return Dyadic((self.num << (e - self.exp)) - (other.num << (e - other.exp)), e)

    def __mul__(self, other: "Dyadic") -> "Dyadic":
        return Dyadic(self.num * other.num, self.exp + other.exp)

    def __neg__(self) -> "Dyadic":
        return Dyadic(-self.num, self.exp)

    def __abs__(self) -> "Dyadic":
        return Dyadic(abs(self.num), self.exp)

    def scale_pow2(self, k: int) -> "Dyadic":
        """self * 2**k, exact."""
        if k >= 0:
            return Dyadic(self.num << k, self.exp)
        return Dyadic(self.num, self.exp - k)

    def _cmp(self, other: "Dyadic") -> int:
        e = max(self.exp, other.exp)
        a = self.num << (e - self.exp)
        b = other.num << (e - other.exp)
        return (a > b) - (a < b)

    def __lt__(self, other: "Dyadic") -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: "Dyadic") -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: "Dyadic") -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: "Dyadic") -> bool:
        return self._cmp(other) >= 0

    def cmp_fraction(self, p: int, q: int) -> int:
        """Sign of self - p/q for integer p and positive integer q."""
        if q <= 0:
            raise ValidationError("fraction denominator must be positive")
        a = self.num * q
        b = p << self.exp
        return (a > b) - (a < b)

    def div_floor(self, den: int, bits: int = 60) -> "Dyadic":
        """floor(self / den * 2**bits) / 2**bits; exact when representable."""
        if den <= 0:
            raise ValidationError("divisor must be positive")
        return Dyadic((self.num << bits) // (den << self.exp), bits)

    def is_zero(self) -> bool:
        return self.num == 0

    def __float__(self) -> float:
        return self.num / (1 << self.exp)

    def __str__(self) -> str:
        return f"{self.num}/2^{self.exp}"

    @classmethod
    def parse(cls, text: str) -> "Dyadic":
        try:
            num_s, exp_s = text.split("/2^")
            return cls(int(num_s), int(exp_s))
        except (ValueError, ValidationError) as exc:
            raise ValidationError(f"bad dyadic literal {text!r}") from exc


ZERO = Dyadic(0, 0)
ONE = Dyadic(1, 0)


@dataclass(frozen=True, slots=True)
class DyadicInterval:
    """Closed interval [lo, hi] with dyadic endpoints."""

    lo: Dyadic
    hi: Dyadic

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValidationError(f"empty interval [{self.lo}, {self.hi}]")

    def width(self) -> Dyadic:
        return self.hi - self.lo

    def contains(self, d: Dyadic) -> bool:
        return self.lo <= d <= self.hi

    def intersects(self, other: "DyadicInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"
