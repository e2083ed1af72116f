"""Exact arithmetic in rings of integers of imaginary quadratic fields.

Elements are stored as a + b*w in the (1, w) basis, where w is either
(1 + i*sqrt(d))/2 (the "half" convention, -d = 1 mod 4) or i*sqrt(d)
(the "pure" convention, -d = 2,3 mod 4).  All coordinates are Python
ints, so arithmetic is exact at any magnitude.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from fractions import Fraction

import mpmath

HALF = "half"
PURE = "pure"

# Base fields with class number one; only these are admissible for the
# binomial (pure quartic) application, where unique factorization is used.
CLASS_NUMBER_ONE_D = (3, 7, 11, 19, 43, 67, 163)


class QFieldError(ValueError):
    """Invalid field descriptor or mismatched-field operation."""


def _is_squarefree(n: int) -> bool:
    if n <= 0:
        return False
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class IQField:
    """Imaginary quadratic field Q(i*sqrt(d)) with a fixed integral basis (1, w)."""

    d: int
    omega_kind: str = HALF

    def __post_init__(self):
        if self.omega_kind not in (HALF, PURE):
            raise QFieldError(f"unknown omega kind {self.omega_kind!r}")
        if self.d <= 0:
            raise QFieldError("d must be a positive integer")
        if not _is_squarefree(self.d):
            raise QFieldError(f"d={self.d} is not squarefree")
        if self.omega_kind == HALF and (-self.d) % 4 != 1:
            raise QFieldError(f"half convention needs -d = 1 mod 4, got d={self.d}")
        if self.omega_kind == PURE and (-self.d) % 4 not in (2, 3):
            raise QFieldError(f"pure convention needs -d = 2,3 mod 4, got d={self.d}")

    @property
    def discriminant(self) -> int:
        return -self.d if self.omega_kind == HALF else -4 * self.d

    @property
    def omega_c(self) -> int:
        """For half fields w^2 = w - c with c = (1+d)/4; for pure, w^2 = -d."""
        if self.omega_kind == HALF:
            return (1 + self.d) // 4
        return self.d

    def zero(self) -> "IQInt":
        return IQInt(0, 0, self)

    def one(self) -> "IQInt":
        return IQInt(1, 0, self)

    def omega(self) -> "IQInt":
        return IQInt(0, 1, self)

    def element(self, a: int, b: int = 0) -> "IQInt":
        return IQInt(int(a), int(b), self)

    def omega_complex(self, prec: int = 53):
        """Midpoint approximation of w as an mpmath mpc at prec bits."""
        with mpmath.workprec(prec):
            s = mpmath.sqrt(self.d)
            if self.omega_kind == HALF:
                return mpmath.mpc(mpmath.mpf(1) / 2, s / 2)
            return mpmath.mpc(0, s)

    def to_json(self) -> dict:
        return {"d": self.d, "omega": self.omega_kind}

    @staticmethod
    def from_json(obj: dict) -> "IQField":
        try:
            return IQField(int(obj["d"]), str(obj.get("omega", HALF)))
        except (KeyError, TypeError) as exc:
            raise QFieldError(f"bad field descriptor {obj!r}") from exc

    def __repr__(self):
        return f"IQField(d={self.d}, {self.omega_kind})"


class IQInt:
    """Integer a + b*w of an imaginary quadratic field, exact coordinates."""

    __slots__ = ("a", "b", "field")

    def __init__(self, a: int, b: int, field: IQField):
        self.a = a
        self.b = b
        self.field = field

    def _check(self, other: "IQInt"):
        if self.field != other.field:
            raise QFieldError(f"mismatched fields {self.field} vs {other.field}")

    def __add__(self, other):
        other = self._coerce(other)
        self._check(other)
        return IQInt(self.a + other.a, self.b + other.b, self.field)

    def __sub__(self, other):
        other = self._coerce(other)
        self._check(other)
        return IQInt(self.a - other.a, self.b - other.b, self.field)

    def __neg__(self):
        return IQInt(-self.a, -self.b, self.field)

    def _coerce(self, other):
        if isinstance(other, IQInt):
            return other
        if isinstance(other, int):
            return IQInt(other, 0, self.field)
        return NotImplemented

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        self._check(other)
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        f = self.field
        if f.omega_kind == HALF:
            c = f.omega_c
            return IQInt(a1 * a2 - c * b1 * b2, a1 * b2 + a2 * b1 + b1 * b2, f)
        return IQInt(a1 * a2 - f.d * b1 * b2, a1 * b2 + a2 * b1, f)

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return (-self) + other

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not integral")
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self) -> "IQInt":
        if self.field.omega_kind == HALF:
            return IQInt(self.a + self.b, -self.b, self.field)
        return IQInt(self.a, -self.b, self.field)

    def norm(self) -> int:
        a, b, f = self.a, self.b, self.field
        if f.omega_kind == HALF:
            return a * a + a * b + b * b * f.omega_c
        return a * a + f.d * b * b

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_unit(self) -> bool:
        return self.norm() == 1

    def is_rational(self) -> bool:
        return self.b == 0

    def __eq__(self, other):
        if isinstance(other, int):
            return self.b == 0 and self.a == other
        return (
            isinstance(other, IQInt)
            and self.a == other.a
            and self.b == other.b
            and self.field == other.field
        )

    def __hash__(self):
        return hash((self.a, self.b, self.field))

    def coords(self) -> tuple:
        return (self.a, self.b)

    def to_json(self) -> list:
        # two decimal strings: consumers must not assume 64-bit range
        return [str(self.a), str(self.b)]

    def __str__(self):
        return format_iqint(self)

    def __repr__(self):
        return f"IQInt({self.a}, {self.b}, d={self.field.d})"


def mul(x: IQInt, y: IQInt) -> IQInt:
    return x * y


def norm(x: IQInt) -> int:
    return x.norm()


def is_unit(x: IQInt) -> bool:
    return x.is_unit()


def units(field: IQField) -> list:
    """The full (torsion) unit group of the ring of integers."""
    base = [field.one(), -field.one()]
    if field.d == 3 and field.omega_kind == HALF:
        w = field.omega()
        return base + [w, -w, w - 1, -(w - 1)]
    if field.d == 1 and field.omega_kind == PURE:
        w = field.omega()
        return base + [w, -w]
    return base


def exact_div(x: IQInt, y: IQInt):
    """x / y if the quotient lies in the ring, else None."""
    if y.is_zero():
        raise ZeroDivisionError("division by zero in Z_L")
    x._check(y)
    t = x * y.conj()
    n = y.norm()
    if t.a % n or t.b % n:
        return None
    return IQInt(t.a // n, t.b // n, x.field)


def embed(x: IQInt, precision: int = 128):
    """Complex ball containing a + b*w; radius <= 2^(2-precision) * |x|."""
    from .numerics import ComplexBall

    work = max(precision, x.a.bit_length() + abs(x.b).bit_length() + 16, 64)
    with mpmath.workprec(work + 8):
        w = x.field.omega_complex(work + 8)
        mid = mpmath.mpc(x.a) + mpmath.mpf(x.b) * w
        # real part is exact (integer or half-integer), error comes from sqrt(d)
        rad = abs(mpmath.mpf(x.b)) * mpmath.sqrt(x.field.d) * mpmath.mpf(2) ** (
            -work + 1
        )
        if x.is_zero():
            rad = mpmath.mpf(0)
    return ComplexBall(mid, rad, prec=precision)


def size(x: IQInt, precision: int = 128):
    """Common absolute value of both conjugates: sqrt(norm(x))."""
    from .numerics import RealBall

    n = x.norm()
    with mpmath.workprec(max(precision, n.bit_length() + 8)):
        mid = mpmath.sqrt(n)
        rad = mid * mpmath.mpf(2) ** (-precision + 1)
        if n == 0:
            rad = mpmath.mpf(0)
    return RealBall(mid, rad, prec=precision)


def size_sq(x: IQInt) -> int:
    """Exact squared size (= norm) of x."""
    return x.norm()


def size_to_coord_bounds(S, field: IQField) -> tuple:
    """Smallest integer box (boundA, boundB) containing every x of size <= S.

    half:  |b| <= 2S/sqrt(d),  |a| <= S + |b|/2
    pure:  |b| <= S/sqrt(d),   |a| <= S
    Bounds are rounded up so nothing of size <= S escapes the box.
    """
    if S <= 0:
        raise ValueError("size bound must be positive")
    # work with S as an exact integer upper bound
    S_int = int(S) if int(S) >= S else int(S) + 1
    if field.omega_kind == HALF:
        bound_b = math.isqrt((4 * S_int * S_int) // field.d) + 1
        bound_a = S_int + bound_b // 2 + 1
    else:
        bound_b = math.isqrt((S_int * S_int) // field.d) + 1
        bound_a = S_int
    return bound_a, bound_b


def canonical_tuple(elements, field: IQField):
    """Canonical representative of (x1, .., xk) under the torsion unit action.

    Each unit multiplies all entries simultaneously; the orbit member with
    the lexicographically smallest encoded coordinate vector wins, where
    integers are ordered by (|v|, sign) with nonnegative first.
    """

    def enc(v: int):
        return (abs(v), 0 if v >= 0 else 1)

    best = None
    best_key = None
    for u in units(field):
        cand = tuple(u * x for x in elements)
        key = tuple(k for x in cand for v in x.coords() for k in enc(v))
        if best_key is None or key < best_key:
            best_key = key
            best = cand
    return best


def canonical_pair(X: IQInt, Y: IQInt):
    return canonical_tuple((X, Y), X.field)


def canonical_sign_tuple(elements):
    """Canonical representative of a tuple under global negation only."""

    def enc(v: int):
        return (abs(v), 0 if v >= 0 else 1)

    pos = tuple(elements)
    neg = tuple(-x for x in elements)
    key = lambda t: tuple(k for x in t for v in x.coords() for k in enc(v))
    return pos if key(pos) <= key(neg) else neg


# ---------------------------------------------------------------------------
# textual form "a+b*w"

_TERM_RE = re.compile(r"^\s*([+-]?\d+)?\s*(\*?\s*w)?\s*$")


def format_iqint(x: IQInt) -> str:
    a, b = x.a, x.b
    if b == 0:
        return str(a)
    if b == 1:
        wpart = "w"
    elif b == -1:
        wpart = "-w"
    else:
        wpart = f"{b}*w"
    if a == 0:
        return wpart
    if b > 0:
        return f"{a}+{wpart}" if b != 1 else f"{a}+w"
    return f"{a}{wpart}"


def parse_iqint(text: str, field: IQField) -> IQInt:
    """Parse "a+b*w" style expressions (also accepts bare ints, "w", "-2*w+1")."""
    s = text.strip().replace(" ", "")
    if not s:
        raise QFieldError("empty element")
    # split into signed terms
    terms = re.findall(r"[+-]?[^+-]+", s)
    a = 0
    b = 0
    for term in terms:
        if "w" in term:
            coef = term.replace("*", "").replace("w", "")
            if coef in ("", "+"):
                b += 1
            elif coef == "-":
                b -= 1
            else:
                b += int(coef)
        else:
            a += int(term)
    return IQInt(a, b, field)


def iqint_from_json(obj, field: IQField) -> IQInt:
    if not isinstance(obj, (list, tuple)) or len(obj) != 2:
        raise QFieldError(f"bad element encoding {obj!r}")
    return IQInt(int(obj[0]), int(obj[1]), field)
