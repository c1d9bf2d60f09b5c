#!/usr/bin/env python3
"""
Exact arithmetic over Q[sqrt2].

Every spectrality condition in this package is an integrality condition
(t1 + t2 in 2Z, gap in Z, ...), so positions, lengths and offsets are kept as
a + b*sqrt2 with rational a, b. Floats only appear at the evaluation boundary.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import total_ordering
from typing import Any, NamedTuple

SQRT2 = math.sqrt(2)

_TERM = r"\d+(?:\.\d*)?(?:/\d+)?"
_SCALAR_RE = re.compile(
    rf"^(?P<rat>[+-]?{_TERM})?"
    rf"(?:(?P<sign>[+-])?(?:(?P<coef>{_TERM})\*)?sqrt2(?:/(?P<den>\d+))?)?$"
)


class InputError(ValueError):
    """Raised when a value cannot be read as an element of Q[sqrt2]."""


class Integrality(NamedTuple):
    is_rational: bool
    is_integer: bool
    is_even_integer: bool


def _as_fraction(value: Any) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InputError(f"not a number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise InputError(f"not a finite number: {value!r}")
        # decimal value as written, not the binary expansion
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise InputError(f"not a rational number: {value!r}") from e
    raise InputError(f"not a rational number: {value!r}")


def _fraction_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    p, q = x.numerator, x.denominator
    rp, rq = math.isqrt(p), math.isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return None


def _sign(a: Fraction, b: Fraction) -> int:
    """Sign of a + b*sqrt2, decided without floats."""
    if b == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return (b > 0) - (b < 0)
    if a > 0 and b > 0:
        return 1
    if a < 0 and b < 0:
        return -1
    # opposite signs: compare a^2 against 2 b^2
    d = a * a - 2 * b * b
    s = (d > 0) - (d < 0)
    return s if a > 0 else -s


@total_ordering
class ExactScalar:
    """Element rat + sq2*sqrt2 of Q[sqrt2], immutable and hashable."""

    __slots__ = ("_rat", "_sq2")

    def __init__(self, rat: Any = 0, sq2: Any = 0) -> None:
        self._rat: Fraction = _as_fraction(rat)
        self._sq2: Fraction = _as_fraction(sq2)

    @property
    def rat(self) -> Fraction:
        return self._rat

    @property
    def sq2(self) -> Fraction:
        return self._sq2

    @classmethod
    def coerce(cls, value: Any) -> ExactScalar:
        if isinstance(value, ExactScalar):
            return value
        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            return cls(value)
        return cls.parse(value)

    @classmethod
    def sqrt2(cls) -> ExactScalar:
        return cls(0, 1)

    @classmethod
    def parse(cls, value: Any) -> ExactScalar:
        """Read ints, decimals, "p/q", "a+b*sqrt2" style strings and the JSON object form."""
        if isinstance(value, ExactScalar):
            return value
        if isinstance(value, dict):
            unknown = set(value) - {"rat", "sqrt2"}
            if unknown:
                raise InputError(f"unknown keys in scalar object: {sorted(unknown)}")
            return cls(_as_fraction(value.get("rat", 0)), _as_fraction(value.get("sqrt2", 0)))
        if isinstance(value, str):
            text = value.replace("√2", "sqrt2").replace("sqrt(2)", "sqrt2").replace(" ", "")
            match = _SCALAR_RE.match(text)
            if not text or match is None:
                raise InputError(f"not an element of Q[sqrt2]: {value!r}")
            rat = _as_fraction(match.group("rat")) if match.group("rat") else Fraction(0)
            if "sqrt2" not in text:
                return cls(rat, 0)
            if match.group("rat") and not match.group("sign"):
                raise InputError(f"not an element of Q[sqrt2]: {value!r}")
            coef = _as_fraction(match.group("coef")) if match.group("coef") else Fraction(1)
            if match.group("den"):
                den = int(match.group("den"))
                if den == 0:
                    raise InputError(f"zero denominator in {value!r}")
                coef /= den
            if match.group("sign") == "-":
                coef = -coef
            return cls(rat, coef)
        return cls(_as_fraction(value), 0)

    # -- representation -------------------------------------------------

    def __repr__(self) -> str:
        return f"ExactScalar({self._rat}, {self._sq2})"

    def __str__(self) -> str:
        if self._sq2 == 0:
            return str(self._rat)
        if self._sq2 == 1:
            coef = "sqrt2"
        elif self._sq2 == -1:
            coef = "-sqrt2"
        else:
            coef = f"{self._sq2}*sqrt2"
        if self._rat == 0:
            return coef
        return f"{self._rat}{'' if coef.startswith('-') else '+'}{coef}"

    def to_json(self) -> str | dict:
        if self._sq2 == 0:
            return str(self._rat)
        return {"rat": str(self._rat), "sqrt2": str(self._sq2)}

    def to_float(self) -> float:
        return float(self._rat) + float(self._sq2) * SQRT2

    __float__ = to_float

    # -- comparisons ----------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ExactScalar):
            return self._rat == other.rat and self._sq2 == other.sq2
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._sq2 == 0 and self._rat == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._sq2 == 0:
            return hash(self._rat)
        return hash((self._rat, self._sq2))

    def __lt__(self, other: Any) -> bool:
        try:
            other = ExactScalar.coerce(other)
        except InputError:
            return NotImplemented
        return (self - other).sign() < 0

    def sign(self) -> int:
        return _sign(self._rat, self._sq2)

    def __bool__(self) -> bool:
        return self._rat != 0 or self._sq2 != 0

    # -- field operations -----------------------------------------------

    def _other(self, other: Any) -> ExactScalar | None:
        if isinstance(other, ExactScalar):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return ExactScalar(other)
        return None

    def __add__(self, other: Any) -> ExactScalar:
        o = self._other(other)
        if o is None:
            return NotImplemented
        return ExactScalar(self._rat + o.rat, self._sq2 + o.sq2)

    def __radd__(self, other: Any) -> ExactScalar:
        return self + other

    def __sub__(self, other: Any) -> ExactScalar:
        o = self._other(other)
        if o is None:
            return NotImplemented
        return ExactScalar(self._rat - o.rat, self._sq2 - o.sq2)

    def __rsub__(self, other: Any) -> ExactScalar:
        return (-self) + other

    def __neg__(self) -> ExactScalar:
        return ExactScalar(-self._rat, -self._sq2)

    def __pos__(self) -> ExactScalar:
        return self

    def __abs__(self) -> ExactScalar:
        return -self if self.sign() < 0 else self

    def __mul__(self, other: Any) -> ExactScalar:
        o = self._other(other)
        if o is None:
            return NotImplemented
        return ExactScalar(
            self._rat * o.rat + 2 * self._sq2 * o.sq2,
            self._rat * o.sq2 + self._sq2 * o.rat,
        )

    def __rmul__(self, other: Any) -> ExactScalar:
        return self * other

    def conjugate(self) -> ExactScalar:
        return ExactScalar(self._rat, -self._sq2)

    @property
    def norm(self) -> Fraction:
        """Field norm a^2 - 2b^2; zero only for the zero element."""
        return self._rat * self._rat - 2 * self._sq2 * self._sq2

    def inverse(self) -> ExactScalar:
        if not self:
            raise ZeroDivisionError("division by zero in Q[sqrt2]")
        n = self.norm
        return ExactScalar(self._rat / n, -self._sq2 / n)

    def __truediv__(self, other: Any) -> ExactScalar:
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: Any) -> ExactScalar:
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, exponent: int) -> ExactScalar:
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** -exponent
        result = ExactScalar(1)
        base = self
        n = exponent
        while n > 0:
            if n & 1:
                result *= base
            base *= base
            n >>= 1
        return result

    # -- integrality ----------------------------------------------------

    def is_rational(self) -> bool:
        return self._sq2 == 0

    def is_integer(self) -> bool:
        return self._sq2 == 0 and self._rat.denominator == 1

    def is_even_integer(self) -> bool:
        return self.is_integer() and self._rat.numerator % 2 == 0

    def integrality(self) -> Integrality:
        return Integrality(self.is_rational(), self.is_integer(), self.is_even_integer())

    def residue_mod(self, q: Any) -> Fraction | None:
        """Representative of self modulo q in [0, q); None when self is irrational."""
        q = _as_fraction(q) if not isinstance(q, ExactScalar) else q
        if isinstance(q, ExactScalar):
            if not q.is_rational():
                raise ValueError("modulus must be rational")
            q = q.rat
        if q <= 0:
            raise ValueError("modulus must be positive")
        if not self.is_rational():
            return None
        return self._rat - q * math.floor(self._rat / q)

    def __floor__(self) -> int:
        if self._sq2 == 0:
            return math.floor(self._rat)
        f = math.floor(self.to_float())
        while ExactScalar(f) > self:
            f -= 1
        while ExactScalar(f + 1) <= self:
            f += 1
        return f

    def __ceil__(self) -> int:
        return -math.floor(-self)

    def nearest_integer(self) -> int:
        return math.floor(self + Fraction(1, 2))


def as_scalar(value: Any) -> ExactScalar:
    return ExactScalar.coerce(value)


def integrality(x: Any) -> Integrality:
    return as_scalar(x).integrality()


def sqrt_exact(x: Any) -> ExactScalar | None:
    """Square root of x when it lies in Q[sqrt2], else None."""
    x = as_scalar(x)
    if x.sign() < 0:
        return None
    if not x:
        return ExactScalar(0)
    a, b = x.rat, x.sq2
    if b == 0:
        r = _fraction_sqrt(a)
        if r is not None:
            return ExactScalar(r)
        # a = 2 d^2
        d = _fraction_sqrt(a / 2)
        return ExactScalar(0, d) if d is not None else None
    # (c + d sqrt2)^2 = c^2 + 2 d^2 + 2 c d sqrt2
    disc = _fraction_sqrt(a * a - 2 * b * b)
    if disc is None:
        return None
    for c2 in ((a + disc) / 2, (a - disc) / 2):
        c = _fraction_sqrt(c2)
        if c is None or c == 0:
            continue
        d = b / (2 * c)
        root = ExactScalar(c, d)
        if root.sign() > 0 and root * root == x:
            return root
        if (-root).sign() > 0 and root * root == x:
            return -root
    return None
