"""Scalar field backends.

Two backends are supported: exact rationals (:class:`fractions.Fraction`) and
complex double precision (:class:`complex`).  Scalars are plain Python values
of those types; a :class:`Field` carries the backend and knows how to coerce,
parse, print and zero-test them.  A table is always built over one field.
"""
from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

Scalar = Union[Fraction, complex]

DEFAULT_EPSILON = 1e-9


class Backend(str, enum.Enum):
    EXACT = "exact"
    FLOAT = "float"


class ScalarParseError(ValueError):
    """Raised for text that is not a scalar literal of the requested backend."""


@dataclass(frozen=True)
class ToleranceContext:
    """Zero-test policy.  Ignored entirely by the exact backend."""

    relative_epsilon: float = DEFAULT_EPSILON
    scale_hint: float = 1.0

    def __post_init__(self):
        if self.relative_epsilon < 0 or self.scale_hint < 0:
            raise ValueError("tolerance parameters must be nonnegative")

    def with_scale(self, scale: float) -> ToleranceContext:
        return ToleranceContext(self.relative_epsilon, float(scale))


_INT = r"[+-]?\d+"
_RATIONAL_RE = re.compile(rf"^\s*({_INT})\s*/\s*({_INT})\s*$")
_REAL = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_DECIMAL_RE = re.compile(rf"^\s*{_REAL}\s*$")


@dataclass(frozen=True)
class Field:
    backend: Backend = Backend.EXACT

    @property
    def exact(self) -> bool:
        return self.backend is Backend.EXACT

    @property
    def zero(self) -> Scalar:
        return Fraction(0) if self.exact else 0j

    @property
    def one(self) -> Scalar:
        return Fraction(1) if self.exact else 1 + 0j

    def __call__(self, value) -> Scalar:
        """Coerce ``value`` into this field."""
        if isinstance(value, str):
            return parse_scalar(value, self.backend)
        if self.exact:
            if isinstance(value, bool):
                raise TypeError("booleans are not scalars")
            if isinstance(value, (int, Rational)):
                return Fraction(value)
            if isinstance(value, complex):
                raise TypeError("complex value under the exact backend")
            if isinstance(value, float):
                raise TypeError("binary float under the exact backend; pass a string or Fraction")
            raise TypeError(f"cannot coerce {type(value).__name__} to an exact scalar")
        if isinstance(value, Rational):
            return complex(float(value))
        return complex(value)

    def parse(self, text: str) -> Scalar:
        return parse_scalar(text, self.backend)

    def format(self, value: Scalar) -> str:
        return format_scalar(value)

    def is_zero(self, value: Scalar, ctx: ToleranceContext | None = None) -> bool:
        return is_zero(value, ctx)

    def magnitude(self, value: Scalar) -> float:
        return float(abs(value))


EXACT = Field(Backend.EXACT)
FLOAT = Field(Backend.FLOAT)


def field_for(backend: Backend | str) -> Field:
    return Field(Backend(backend))


def parse_scalar(text: str, backend: Backend | str = Backend.EXACT) -> Scalar:
    """Parse ``p``, ``p/q``, a decimal, or (float backend only) ``re+im i``."""
    backend = Backend(backend)
    m = _RATIONAL_RE.match(text)
    if m:
        num, den = int(m.group(1)), int(m.group(2))
        if den == 0:
            raise ScalarParseError(f"zero denominator in {text!r}")
        value = Fraction(num, den)
        return value if backend is Backend.EXACT else complex(float(value))
    if _DECIMAL_RE.match(text):
        if backend is Backend.EXACT:
            return Fraction(text.strip())
        return complex(float(text))
    value = _parse_complex(text.replace(" ", ""))
    if value is None:
        raise ScalarParseError(f"malformed scalar {text!r}")
    if backend is Backend.EXACT:
        raise ScalarParseError(f"complex literal {text!r} under the exact backend")
    return value


def _parse_complex(text: str) -> complex | None:
    if not text or text[-1] not in "ij":
        return None
    body = text[:-1].rstrip("*")
    split = None
    for i in range(len(body) - 1, 0, -1):
        if body[i] in "+-" and body[i - 1] not in "eE":
            split = i
            break
    real, imag = ("", body) if split is None else (body[:split], body[split:])
    if imag in ("", "+", "-"):
        imag += "1"
    try:
        return complex(float(real) if real else 0.0, float(imag))
    except ValueError:
        return None


def format_scalar(value: Scalar) -> str:
    """Canonical text; round-trips through :func:`parse_scalar`."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, int):
        return str(value)
    value = complex(value)
    sign = "-" if math.copysign(1.0, value.imag) < 0 else "+"
    return f"{value.real + 0.0!r}{sign}{abs(value.imag)!r}i"


def is_zero(value: Scalar, ctx: ToleranceContext | None = None) -> bool:
    if isinstance(value, (Fraction, int)):
        return value == 0
    ctx = ctx or ToleranceContext()
    return abs(value) <= ctx.relative_epsilon * max(1.0, ctx.scale_hint)


def close(a: Scalar, b: Scalar, ctx: ToleranceContext | None = None) -> bool:
    """Equality under the zero-test policy, scaled by the operands' size."""
    diff = a - b
    if isinstance(diff, (Fraction, int)):
        return diff == 0
    ctx = ctx or ToleranceContext()
    return is_zero(diff, ctx.with_scale(max(ctx.scale_hint, abs(a), abs(b))))
