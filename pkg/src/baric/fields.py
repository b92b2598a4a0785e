"""Exact scalars over the rationals and over prime fields GF(p).

A field is described by a :class:`FieldSpec`; its elements are immutable
:class:`FieldValue` objects carrying their spec, so mixing fields is caught
at the point of arithmetic rather than silently producing garbage.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

__all__ = [
    "FieldError",
    "FieldSpec",
    "FieldValue",
    "QQ",
    "GF",
    "is_prime",
    "parse_value",
    "field_arith",
    "enumerate_field",
]

_LITERAL = re.compile(r"\s*(-?\d+)(?:/(\d+))?\s*")


class FieldError(ValueError):
    """Malformed literal, illegal operation, or mixed fields."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The rationals (``prime is None``) or GF(prime)."""

    prime: int | None = None

    def __post_init__(self):
        if self.prime is not None and not is_prime(self.prime):
            raise FieldError(f"{self.prime} is not prime")

    @property
    def is_finite(self) -> bool:
        return self.prime is not None

    @property
    def order(self) -> int | None:
        return self.prime

    def __str__(self):
        return "Q" if self.prime is None else f"GF({self.prime})"

    # -- element construction -------------------------------------------

    def _normalize(self, raw):
        if self.prime is None:
            return Fraction(raw)
        if isinstance(raw, Fraction):
            if raw.denominator % self.prime == 0:
                raise FieldError(f"{raw} has no image in {self}")
            return raw.numerator * pow(raw.denominator, -1, self.prime) % self.prime
        return int(raw) % self.prime

    def __call__(self, x: Union[int, Fraction, "FieldValue", str]) -> "FieldValue":
        if isinstance(x, FieldValue):
            if x.field == self:
                return x
            if x.field.prime is None:
                return FieldValue(self, self._normalize(x.value))
            raise FieldError(f"cannot convert {x.field} element into {self}")
        if isinstance(x, str):
            return parse_value(x, self)
        return FieldValue(self, self._normalize(x))

    @property
    def zero(self) -> "FieldValue":
        return FieldValue(self, self._normalize(0))

    @property
    def one(self) -> "FieldValue":
        return FieldValue(self, self._normalize(1))

    def elements(self) -> Iterator["FieldValue"]:
        return enumerate_field(self)

    def to_json(self):
        return "Q" if self.prime is None else {"prime": self.prime}

    @classmethod
    def from_json(cls, obj) -> "FieldSpec":
        if obj == "Q":
            return QQ
        if isinstance(obj, dict) and set(obj) == {"prime"} and isinstance(obj["prime"], int):
            return cls(obj["prime"])
        raise FieldError(f"bad field descriptor {obj!r}; expected \"Q\" or {{\"prime\": p}}")

    @classmethod
    def from_text(cls, text: str) -> "FieldSpec":
        """Parse ``Q`` or a prime such as ``5`` (CLI ``--field``)."""
        t = text.strip()
        if t.upper() == "Q":
            return QQ
        if t.isdigit():
            return cls(int(t))
        raise FieldError(f"bad field {text!r}; expected Q or a prime")


QQ = FieldSpec()


def GF(p: int) -> FieldSpec:
    return FieldSpec(p)


class FieldValue:
    """Immutable canonical scalar: a reduced Fraction, or a residue in [0, p)."""

    __slots__ = ("field", "value")

    def __init__(self, field: FieldSpec, value):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("FieldValue is immutable")

    def _other(self, other) -> "FieldValue":
        if isinstance(other, FieldValue):
            if other.field != self.field:
                raise FieldError(f"mixed fields: {self.field} and {other.field}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return NotImplemented

    def _make(self, v) -> "FieldValue":
        p = self.field.prime
        return FieldValue(self.field, v if p is None else v % p)

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._make(self.value + o.value)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._make(self.value - o.value)

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._make(self.value * o.value)

    __rmul__ = __mul__

    def __neg__(self):
        return self._make(-self.value)

    def inverse(self) -> "FieldValue":
        if not self:
            raise ZeroDivisionError(f"division by zero in {self.field}")
        p = self.field.prime
        if p is None:
            return FieldValue(self.field, 1 / self.value)
        return FieldValue(self.field, pow(self.value, -1, p))

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        p = self.field.prime
        return FieldValue(self.field, self.value**k if p is None else pow(self.value, k, p))

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        if isinstance(other, FieldValue):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, Fraction)):
            try:
                return self.value == self.field._normalize(other)
            except FieldError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def sort_key(self):
        """Total order used for deterministic output (residue order, or numeric)."""
        return self.value

    def __lt__(self, other):
        return self.sort_key() < self._other(other).sort_key()

    def __str__(self):
        v = self.value
        if isinstance(v, Fraction) and v.denominator != 1:
            return f"{v.numerator}/{v.denominator}"
        return str(int(v))

    def __repr__(self):
        return f"FieldValue({self.field}, {self})"


def parse_value(text: str, spec: FieldSpec) -> FieldValue:
    """Parse ``[-]digits`` or ``[-]digits/digits`` into a canonical element of ``spec``.

    Prime fields accept integer literals only; they are reduced mod p.
    """
    m = _LITERAL.fullmatch(text)
    if m is None:
        raise FieldError(f"malformed scalar literal {text!r}")
    num, den = m.groups()
    if den is None:
        return spec(int(num))
    if spec.is_finite:
        raise FieldError(f"fraction literal {text!r} not allowed over {spec}")
    if int(den) == 0:
        raise FieldError(f"zero denominator in {text!r}")
    return spec(Fraction(int(num), int(den)))


def field_arith(a: FieldValue, b: FieldValue, op: str) -> FieldValue:
    if a.field != b.field:
        raise FieldError(f"mixed fields: {a.field} and {b.field}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise FieldError(f"unknown operation {op!r}")


def enumerate_field(spec: FieldSpec) -> Iterator[FieldValue]:
    """Yield 0, 1, ..., p-1 of GF(p)."""
    if not spec.is_finite:
        raise FieldError("cannot enumerate the rationals")
    return (FieldValue(spec, r) for r in range(spec.prime))
