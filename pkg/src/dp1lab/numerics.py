"""Arbitrary-precision reals, exact rationals and polynomials in gamma.

Precision is never global.  Every :class:`BigReal` carries its own
precision in bits, and binary operations run at the smaller of the two
operand precisions.  Plain ``int`` and :class:`fractions.Fraction`
operands are exact, so they are rounded at the precision of the
``BigReal`` they meet.  All rounding is to nearest.

The heavy lifting is delegated to mpmath's low-level ``libmp`` layer,
which takes the working precision as an explicit argument on every call.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from mpmath import libmp

from .errors import NegativeInput

Rational = Fraction

RND = libmp.round_nearest
DEFAULT_PRECISION_BITS = 4096
DEFAULT_CONTRACTIONS = 800


def digits_to_bits(digits: int) -> int:
    """Bits needed for ``digits`` significant decimal digits."""
    return math.ceil(digits * math.log2(10))


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"``, an integer, or a decimal string exactly."""
    return Fraction(text.strip())


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


class BigReal:
    """Immutable binary floating-point number with per-value precision."""

    __slots__ = ("_mpf", "prec")

    def __init__(self, value, prec: int):
        if prec < 2:
            raise ValueError("precision must be at least 2 bits")
        if isinstance(value, BigReal):
            mpf = libmp.mpf_pos(value._mpf, prec, RND)
        elif isinstance(value, bool):
            raise TypeError("bool is not a number here")
        elif isinstance(value, int):
            mpf = libmp.from_int(value, prec, RND)
        elif isinstance(value, Fraction):
            mpf = libmp.from_rational(value.numerator, value.denominator, prec, RND)
        elif isinstance(value, float):
            mpf = libmp.from_float(value, prec, RND)
        elif isinstance(value, str):
            mpf = _parse_decimal(value, prec)
        elif isinstance(value, tuple):
            mpf = libmp.mpf_pos(value, prec, RND)
        else:
            raise TypeError(f"cannot build BigReal from {type(value).__name__}")
        object.__setattr__(self, "_mpf", mpf)
        object.__setattr__(self, "prec", prec)

    @classmethod
    def _raw(cls, mpf, prec: int) -> "BigReal":
        obj = object.__new__(cls)
        object.__setattr__(obj, "_mpf", mpf)
        object.__setattr__(obj, "prec", prec)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("BigReal is immutable")

    def __reduce__(self):
        return (BigReal._raw, (self._mpf, self.prec))

    # -- conversion helpers ---------------------------------------------------

    def _coerce(self, other):
        """Return (mpf of other, working precision) or None if unsupported."""
        if isinstance(other, BigReal):
            return other._mpf, min(self.prec, other.prec)
        if isinstance(other, bool):
            return None
        if isinstance(other, int):
            return libmp.from_int(other), self.prec
        if isinstance(other, Fraction):
            return (
                libmp.from_rational(other.numerator, other.denominator, self.prec, RND),
                self.prec,
            )
        return None

    def with_precision(self, prec: int) -> "BigReal":
        """Round (or widen the nominal precision of) this value."""
        return BigReal._raw(libmp.mpf_pos(self._mpf, prec, RND), prec)

    def to_fraction(self) -> Fraction:
        """Exact dyadic value."""
        if self._mpf in (libmp.finf, libmp.fninf, libmp.fnan):
            raise ValueError("non-finite BigReal")
        p, q = libmp.to_rational(self._mpf)
        return Fraction(int(p), int(q))

    def to_decimal(self, digits: int | None = None) -> str:
        """Decimal string; by default enough digits to round-trip exactly."""
        if digits is None:
            digits = libmp.repr_dps(self.prec)
        return libmp.to_str(self._mpf, digits)

    def is_finite(self) -> bool:
        return self._mpf not in (libmp.finf, libmp.fninf, libmp.fnan)

    def sign(self) -> int:
        return libmp.mpf_sign(self._mpf)

    def sqrt(self) -> "BigReal":
        return big_sqrt(self, self.prec)

    def exp(self) -> "BigReal":
        return BigReal._raw(libmp.mpf_exp(self._mpf, self.prec, RND), self.prec)

    def log(self) -> "BigReal":
        if self.sign() < 0:
            raise NegativeInput("log of a negative number")
        if self.sign() == 0:
            return BigReal._raw(libmp.fninf, self.prec)
        return BigReal._raw(libmp.mpf_log(self._mpf, self.prec, RND), self.prec)

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return BigReal._raw(libmp.mpf_add(self._mpf, c[0], c[1], RND), c[1])

    __radd__ = __add__

    def __sub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return BigReal._raw(libmp.mpf_sub(self._mpf, c[0], c[1], RND), c[1])

    def __rsub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return BigReal._raw(libmp.mpf_sub(c[0], self._mpf, c[1], RND), c[1])

    def __mul__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return BigReal._raw(libmp.mpf_mul(self._mpf, c[0], c[1], RND), c[1])

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        if c[0] == libmp.fzero:
            raise ZeroDivisionError("BigReal division by zero")
        return BigReal._raw(libmp.mpf_div(self._mpf, c[0], c[1], RND), c[1])

    def __rtruediv__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        if self._mpf == libmp.fzero:
            raise ZeroDivisionError("BigReal division by zero")
        return BigReal._raw(libmp.mpf_div(c[0], self._mpf, c[1], RND), c[1])

    def __pow__(self, k):
        if not isinstance(k, int) or isinstance(k, bool):
            return NotImplemented
        if k < 0:
            return 1 / self ** (-k)
        return BigReal._raw(libmp.mpf_pow_int(self._mpf, k, self.prec, RND), self.prec)

    def __neg__(self):
        return BigReal._raw(libmp.mpf_neg(self._mpf), self.prec)

    def __pos__(self):
        return self

    def __abs__(self):
        return BigReal._raw(libmp.mpf_abs(self._mpf), self.prec)

    # -- comparison -----------------------------------------------------------

    def _cmp(self, other):
        if isinstance(other, BigReal):
            return libmp.mpf_cmp(self._mpf, other._mpf)
        if isinstance(other, bool):
            return None
        if isinstance(other, int):
            return libmp.mpf_cmp(self._mpf, libmp.from_int(other))
        if isinstance(other, float):
            # doubles are dyadic, so this comparison is exact
            if other != other:
                return None
            return libmp.mpf_cmp(self._mpf, libmp.from_float(other))
        if isinstance(other, Fraction):
            if not self.is_finite():
                return libmp.mpf_sign(self._mpf)
            mine = self.to_fraction()
            return (mine > other) - (mine < other)
        return None

    def __eq__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c == 0

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c >= 0

    def __hash__(self):
        if not self.is_finite():
            return hash(libmp.to_float(self._mpf))
        return hash(self.to_fraction())

    def __bool__(self):
        return self._mpf != libmp.fzero

    def __float__(self):
        return libmp.to_float(self._mpf)

    def __repr__(self):
        return f"BigReal('{libmp.to_str(self._mpf, 20)}', prec={self.prec})"

    def __str__(self):
        return self.to_decimal()


Number = Union[int, Fraction, BigReal]


def _parse_decimal(text: str, prec: int):
    text = text.strip()
    if "/" in text:
        q = Fraction(text)
        return libmp.from_rational(q.numerator, q.denominator, prec, RND)
    if text in ("inf", "+inf"):
        return libmp.finf
    if text == "-inf":
        return libmp.fninf
    return libmp.from_str(text, prec, RND)


def to_big(value: Number, prec: int) -> BigReal:
    """Coerce an exact or big value to a BigReal at ``prec`` bits."""
    return BigReal(value, prec)


def big_sqrt(x: Number, precision: int) -> BigReal:
    """Square root rounded to ``precision`` bits."""
    if not isinstance(x, BigReal):
        x = BigReal(x, precision + 8)
    if x.sign() < 0:
        raise NegativeInput(f"square root of negative value {x!r}")
    return BigReal._raw(libmp.mpf_sqrt(x._mpf, precision, RND), precision)


def exact_sqrt(x: Fraction) -> Fraction | None:
    """Exact square root of a non-negative rational, or None if irrational."""
    x = Fraction(x)
    if x < 0:
        return None
    p, q = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if p * p == x.numerator and q * q == x.denominator:
        return Fraction(p, q)
    return None


def sqrt_number(x: Number, precision: int | None = None) -> Number:
    """sqrt that stays exact for rational perfect squares."""
    if isinstance(x, (int, Fraction)):
        if x < 0:
            raise NegativeInput(f"square root of negative value {x}")
        root = exact_sqrt(Fraction(x))
        if root is not None:
            return root
        return big_sqrt(x, precision or DEFAULT_PRECISION_BITS)
    return big_sqrt(x, precision or x.prec)


def precision_of(*values, default: int | None = None) -> int | None:
    """Smallest precision among BigReal arguments (None if all exact)."""
    precs = [v.prec for v in values if isinstance(v, BigReal)]
    return min(precs) if precs else default


# ---------------------------------------------------------------------------
# Polynomials in gamma = r/N
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GammaPoly:
    """Dense polynomial in gamma with exact rational coefficients."""

    coeffs: tuple = ()

    def __post_init__(self):
        c = [Fraction(a) for a in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def constant(cls, value) -> "GammaPoly":
        return cls((Fraction(value),))

    @classmethod
    def gamma(cls) -> "GammaPoly":
        return cls((Fraction(0), Fraction(1)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def constant_term(self) -> Fraction:
        return self.coeffs[0] if self.coeffs else Fraction(0)

    @staticmethod
    def _lift(other):
        if isinstance(other, GammaPoly):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return GammaPoly.constant(other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = o.coeffs + (Fraction(0),) * (n - len(o.coeffs))
        return GammaPoly(tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        return GammaPoly(tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not self.coeffs or not o.coeffs:
            return GammaPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    out[i + j] += a * b
        return GammaPoly(tuple(out))

    __rmul__ = __mul__

    def scale(self, factor) -> "GammaPoly":
        factor = Fraction(factor)
        return GammaPoly(tuple(a * factor for a in self.coeffs))

    def __call__(self, gamma):
        return eval_gamma_poly(self, gamma)

    def to_strings(self) -> list[str]:
        return [format_rational(a) for a in self.coeffs]

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k, a in enumerate(self.coeffs):
            if a == 0:
                continue
            mono = "" if k == 0 else ("g" if k == 1 else f"g^{k}")
            if mono and abs(a) == 1:
                term = mono
            else:
                term = f"{abs(a)}" + (f"*{mono}" if mono else "")
            parts.append(("-" if a < 0 else "+") + " " + term)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def eval_gamma_poly(p: GammaPoly, gamma):
    """Horner evaluation; exact for rational gamma."""
    acc = Fraction(0) if isinstance(gamma, (int, Fraction)) else gamma * 0
    for a in reversed(p.coeffs):
        acc = acc * gamma + a
    return acc


def poly_from_strings(items: Iterable[str]) -> GammaPoly:
    return GammaPoly(tuple(parse_rational(s) for s in items))


# ---------------------------------------------------------------------------
# Run parameters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Params:
    """dP1 parameters plus the numerical protocol for a run."""

    r: Number = Fraction(1)
    N: Number = Fraction(1)
    precision_bits: int = DEFAULT_PRECISION_BITS
    contraction_count: int = DEFAULT_CONTRACTIONS

    def __post_init__(self):
        for name in ("r", "N"):
            v = getattr(self, name)
            if isinstance(v, int) and not isinstance(v, bool):
                object.__setattr__(self, name, Fraction(v))
            elif not isinstance(v, (Fraction, BigReal)):
                raise TypeError(f"{name} must be rational or BigReal")
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.precision_bits < 64:
            raise ValueError("precision_bits must be >= 64")
        if self.contraction_count < 1:
            raise ValueError("contraction_count must be >= 1")

    @property
    def gamma(self) -> Number:
        return self.r / self.N

    @property
    def exact(self) -> bool:
        return isinstance(self.r, Fraction) and isinstance(self.N, Fraction)

    def big(self, value: Number) -> BigReal:
        """Value as a BigReal at the run precision."""
        return BigReal(value, self.precision_bits)

    def describe(self) -> dict:
        def fmt(v):
            return format_rational(v) if isinstance(v, Fraction) else v.to_decimal()

        return {
            "r": fmt(self.r),
            "N": fmt(self.N),
            "gamma": fmt(self.gamma),
            "precision_bits": self.precision_bits,
            "contraction_count": self.contraction_count,
        }
