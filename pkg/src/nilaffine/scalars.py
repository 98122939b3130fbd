"""Exact arithmetic in the real quadratic field Q(sqrt(d)).

A :class:`Scalar` is a pair of rationals ``(rat, irr)`` standing for
``rat + irr*sqrt(d)``, with ``d`` a square-free positive integer fixed per
computation context. ``d = 1`` encodes the plain rationals; a nonzero
irrational part is folded into the rational part on construction in that
case, so the invariant ``d == 1 implies irr == 0`` always holds. Values
from contexts with different ``d`` never mix silently: combining them
raises :class:`~nilaffine.errors.FieldMismatchError`.

Floats are rejected everywhere; all arithmetic is exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Union

from .errors import FieldMismatchError, ParseError

RationalLike = Union[int, str, Fraction]


def as_fraction(value: RationalLike) -> Fraction:
    """Coerce an exact rational representation to Fraction.

    Accepts int, Fraction and strings like ``"3"`` or ``"-5/7"``. Floats
    and bools are rejected.
    """
    if isinstance(value, bool):
        raise TypeError("bool is not a rational value")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational literal: {value!r}") from exc
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def is_square_free(d: int) -> bool:
    if d < 1:
        return False
    p = 2
    while p * p <= d:
        if d % (p * p) == 0:
            return False
        p += 1
    return True


def check_context(d: int) -> int:
    """Validate a field context constant. Returns d unchanged."""
    if isinstance(d, bool) or not isinstance(d, int):
        raise TypeError(f"field context d must be an int, got {type(d).__name__}")
    if not is_square_free(d):
        raise ValueError(f"field context d must be square-free and positive, got {d}")
    return d


class Scalar:
    """An element rat + irr*sqrt(d) of Q(sqrt(d)), immutable."""

    __slots__ = ("rat", "irr", "d")

    def __init__(self, rat: RationalLike = 0, irr: RationalLike = 0, d: int = 1):
        check_context(d)
        r = as_fraction(rat)
        i = as_fraction(irr)
        if d == 1 and i:
            # sqrt(1) = 1, fold into the rational part
            r, i = r + i, Fraction(0)
        object.__setattr__(self, "rat", r)
        object.__setattr__(self, "irr", i)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    # -------------------------------------------------- constructors

    @classmethod
    def zero(cls, d: int = 1) -> "Scalar":
        return cls(0, 0, d)

    @classmethod
    def one(cls, d: int = 1) -> "Scalar":
        return cls(1, 0, d)

    @classmethod
    def sqrt(cls, d: int) -> "Scalar":
        """The square root of d itself, as an element of Q(sqrt(d))."""
        return cls(0, 1, d)

    @classmethod
    def of(cls, value: "Scalar | RationalLike", d: int = 1) -> "Scalar":
        """Coerce a rational-like value into context d."""
        if isinstance(value, Scalar):
            if value.d != d and not value.is_rational():
                raise FieldMismatchError(
                    f"cannot move sqrt({value.d}) value into context d={d}")
            return cls(value.rat, value.irr, d) if value.d != d else value
        return cls(value, 0, d)

    # -------------------------------------------------- predicates

    def is_zero(self) -> bool:
        return not self.rat and not self.irr

    def is_rational(self) -> bool:
        return not self.irr

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -------------------------------------------------- arithmetic

    def _coerce(self, other) -> "Scalar | None":
        if isinstance(other, Scalar):
            if other.d != self.d:
                raise FieldMismatchError(
                    f"mixed field contexts: d={self.d} and d={other.d}")
            return other
        if isinstance(other, bool):
            return None
        if isinstance(other, (int, Fraction)):
            return Scalar(other, 0, self.d)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Scalar(self.rat + o.rat, self.irr + o.irr, self.d)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Scalar(self.rat - o.rat, self.irr - o.irr, self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Scalar(o.rat - self.rat, o.irr - self.irr, self.d)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Scalar(self.rat * o.rat + self.irr * o.irr * self.d,
                      self.rat * o.irr + self.irr * o.rat, self.d)

    __rmul__ = __mul__

    def __neg__(self):
        return Scalar(-self.rat, -self.irr, self.d)

    def __pos__(self):
        return self

    def conjugate(self) -> "Scalar":
        """The field conjugate rat - irr*sqrt(d)."""
        return Scalar(self.rat, -self.irr, self.d)

    def norm(self) -> Fraction:
        """The field norm rat^2 - irr^2 * d, a rational."""
        return self.rat * self.rat - self.irr * self.irr * self.d

    def inverse(self) -> "Scalar":
        """Multiplicative inverse via the conjugate: 1/s = conj(s)/norm(s)."""
        n = self.norm()
        if not n:
            # for square-free d the norm vanishes only at zero
            raise ZeroDivisionError("division by zero scalar")
        return Scalar(self.rat / n, -self.irr / n, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, exponent: int):
        if isinstance(exponent, bool) or not isinstance(exponent, int):
            return NotImplemented
        base = self
        if exponent < 0:
            base = self.inverse()
            exponent = -exponent
        out = Scalar.one(self.d)
        while exponent:
            if exponent & 1:
                out = out * base
            base = base * base
            exponent >>= 1
        return out

    # -------------------------------------------------- comparison

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.irr == 0 and self.rat == other
        if not isinstance(other, Scalar):
            return NotImplemented
        if self.rat != other.rat or self.irr != other.irr:
            return False
        # rational values are equal across contexts
        return self.d == other.d or (not self.irr and not other.irr)

    def __hash__(self):
        return hash((self.rat, self.irr, self.d if self.irr else 1))

    # -------------------------------------------------- formatting

    def __str__(self):
        if not self.irr:
            return str(self.rat)
        if self.irr == 1:
            root = f"sqrt({self.d})"
        elif self.irr == -1:
            root = f"-sqrt({self.d})"
        else:
            root = f"{self.irr}*sqrt({self.d})"
        if not self.rat:
            return root
        sign = "-" if self.irr < 0 else "+"
        mag = -self.irr if self.irr < 0 else self.irr
        tail = f"sqrt({self.d})" if mag == 1 else f"{mag}*sqrt({self.d})"
        return f"{self.rat} {sign} {tail}"

    def __repr__(self):
        return f"Scalar({str(self.rat)!r}, {str(self.irr)!r}, d={self.d})"


def _encode_fraction(f: Fraction):
    return int(f) if f.denominator == 1 else str(f)


def scalar_to_json(s: Scalar):
    """Canonical serialized form: int, "p/q" string, or a two-element list."""
    if not s.irr:
        return _encode_fraction(s.rat)
    return [_encode_fraction(s.rat), _encode_fraction(s.irr)]


def scalar_from_json(obj, d: int, where: str = "scalar") -> Scalar:
    """Parse the serialized scalar form in field context d.

    Accepts ints, "p/q" strings and two-element [rat, irr] arrays. A
    nonzero irrational component under d = 1 is rejected, matching the
    invariant that d = 1 means plain rationals.
    """
    def part(value, label):
        if isinstance(value, bool) or isinstance(value, float):
            raise ParseError(f"{where}: {label} must be an int or a 'p/q' string, "
                             f"got {value!r}")
        try:
            return as_fraction(value)
        except (TypeError, ValueError) as exc:
            raise ParseError(f"{where}: {exc}") from exc

    if isinstance(obj, (list, tuple)):
        if len(obj) != 2:
            raise ParseError(f"{where}: scalar arrays must have exactly two "
                             f"entries [rat, irr], got {len(obj)}")
        rat = part(obj[0], "rational part")
        irr = part(obj[1], "irrational part")
        if d == 1 and irr:
            raise ParseError(f"{where}: nonzero sqrt-component not allowed "
                             f"in a d=1 (rational) context")
        return Scalar(rat, irr, d)
    return Scalar(part(obj, "value"), 0, d)
