"""Exact arithmetic in an imaginary quadratic field K = Q(sqrt(d)) and its ring of integers.

Elements are stored in the {1, omega} basis, where omega = (1 + sqrt(d))/2
when d = 1 mod 4 and omega = sqrt(d) otherwise.  All coordinates are
arbitrary-precision Python integers; nothing in this module touches floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd


def _is_squarefree(n: int) -> bool:
    n = abs(n)
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        while n % k == 0:
            n //= k
        k += 1
    return True


@dataclass(frozen=True)
class QuadField:
    """The field Q(sqrt(d)) for a squarefree negative integer d.

    omega_trace is omega + conj(omega) (1 or 0), norm_coeff is
    omega * conj(omega) ((1 - d)/4 or -d); both are plain integers.
    """

    d: int

    def __post_init__(self):
        if self.d >= 0:
            raise ValueError(f"d must be negative, got {self.d}")
        if not _is_squarefree(self.d):
            raise ValueError(f"d must be squarefree, got {self.d}")

    @property
    def omega_is_half_integral(self) -> bool:
        return self.d % 4 == 1

    @property
    def omega_trace(self) -> int:
        return 1 if self.omega_is_half_integral else 0

    @property
    def norm_coeff(self) -> int:
        if self.omega_is_half_integral:
            return (1 - self.d) // 4
        return -self.d

    def zero(self) -> "QuadInt":
        return QuadInt(self, 0, 0)

    def one(self) -> "QuadInt":
        return QuadInt(self, 1, 0)

    def omega(self) -> "QuadInt":
        return QuadInt(self, 0, 1)

    def element(self, a: int, b: int = 0) -> "QuadInt":
        return QuadInt(self, a, b)

    def units(self) -> list["QuadInt"]:
        """All units of the ring of integers: {+-1} except for d = -1, -3."""
        one = self.one()
        units = [one, -one]
        if self.d == -1:
            units += [self.omega(), -self.omega()]
        elif self.d == -3:
            w = self.omega()
            units += [w, -w, w - one, one - w]
        return units

    def __repr__(self):
        return f"QuadField({self.d})"


class QuadInt:
    """An algebraic integer a + b*omega in the ring of integers of Q(sqrt(d))."""

    __slots__ = ("field", "a", "b")

    def __init__(self, field: QuadField, a: int, b: int):
        self.field = field
        self.a = a
        self.b = b

    def _check(self, other: "QuadInt") -> None:
        if self.field.d != other.field.d:
            raise ValueError(
                f"mixed fields: d={self.field.d} and d={other.field.d}"
            )

    def __add__(self, other):
        if isinstance(other, int):
            return QuadInt(self.field, self.a + other, self.b)
        self._check(other)
        return QuadInt(self.field, self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return QuadInt(self.field, -self.a, -self.b)

    def __mul__(self, other):
        if isinstance(other, int):
            return QuadInt(self.field, self.a * other, self.b * other)
        self._check(other)
        # omega^2 = t*omega - n  with  t = Tr(omega), n = N(omega)
        t = self.field.omega_trace
        n = self.field.norm_coeff
        bb = self.b * other.b
        return QuadInt(
            self.field,
            self.a * other.a - n * bb,
            self.a * other.b + self.b * other.a + t * bb,
        )

    __rmul__ = __mul__

    def conj(self) -> "QuadInt":
        # conj(omega) = t - omega
        return QuadInt(
            self.field, self.a + self.field.omega_trace * self.b, -self.b
        )

    def norm(self) -> int:
        t = self.field.omega_trace
        n = self.field.norm_coeff
        return self.a * self.a + t * self.a * self.b + n * self.b * self.b

    def trace(self) -> int:
        return 2 * self.a + self.field.omega_trace * self.b

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_unit(self) -> bool:
        return self.norm() == 1

    def divides(self, other: "QuadInt") -> bool:
        return self.divide_exact(other) is not None

    def divide_exact(self, numerator: "QuadInt") -> "QuadInt | None":
        """Return numerator / self if it lies in the ring, else None."""
        self._check(numerator)
        n = self.norm()
        if n == 0:
            return None
        top = numerator * self.conj()
        if top.a % n or top.b % n:
            return None
        return QuadInt(self.field, top.a // n, top.b // n)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.a == other and self.b == 0
        if not isinstance(other, QuadInt):
            return NotImplemented
        return (
            self.field.d == other.field.d
            and self.a == other.a
            and self.b == other.b
        )

    def __hash__(self):
        return hash((self.field.d, self.a, self.b))

    def coords(self) -> tuple[int, int]:
        return (self.a, self.b)

    def __repr__(self):
        return f"({self.a}{self.b:+}w)"


class QuadRat:
    """An element of K = Q(sqrt(d)) in lowest terms: (a + b*omega)/den with den > 0.

    gcd(a, b, den) = 1 is maintained by the constructor.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: QuadInt, den: int = 1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = -num, -den
        g = gcd(gcd(abs(num.a), abs(num.b)), den)
        if g > 1:
            num = QuadInt(num.field, num.a // g, num.b // g)
            den //= g
        self.num = num
        self.den = den

    @property
    def field(self) -> QuadField:
        return self.num.field

    @classmethod
    def from_coeffs(cls, field: QuadField, x: Fraction, y: Fraction) -> "QuadRat":
        """Build (x + y*omega) from rational coefficients."""
        x, y = Fraction(x), Fraction(y)
        den = (x.denominator * y.denominator) // gcd(
            x.denominator, y.denominator
        )
        a = x.numerator * (den // x.denominator)
        b = y.numerator * (den // y.denominator)
        return cls(QuadInt(field, a, b), den)

    def coeffs(self) -> tuple[Fraction, Fraction]:
        return (Fraction(self.num.a, self.den), Fraction(self.num.b, self.den))

    def __add__(self, other):
        other = self._coerce(other)
        return QuadRat(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return QuadRat(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + self._coerce(other)

    def __mul__(self, other):
        other = self._coerce(other)
        return QuadRat(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        n = other.num.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt(d))")
        return QuadRat(self.num * other.num.conj() * other.den, self.den * n)

    def _coerce(self, other) -> "QuadRat":
        if isinstance(other, QuadRat):
            if other.field.d != self.field.d:
                raise ValueError("mixed fields")
            return other
        if isinstance(other, QuadInt):
            return QuadRat(other)
        if isinstance(other, int):
            return QuadRat(QuadInt(self.field, other, 0))
        if isinstance(other, Fraction):
            return QuadRat(
                QuadInt(self.field, other.numerator, 0), other.denominator
            )
        raise TypeError(f"cannot coerce {other!r}")

    def conj(self) -> "QuadRat":
        return QuadRat(self.num.conj(), self.den)

    def norm(self) -> Fraction:
        return Fraction(self.num.norm(), self.den * self.den)

    def trace(self) -> Fraction:
        return Fraction(self.num.trace(), self.den)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_rational(self) -> bool:
        return self.num.b == 0

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return Fraction(self.num.a, self.den)

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"({self.num.a}{self.num.b:+}w)/{self.den}"


class Mat2:
    """A 2x2 matrix over the ring of integers of K, acting on column vectors."""

    __slots__ = ("field", "e")

    def __init__(self, entries):
        (p, q), (r, s) = entries
        self.e = ((p, q), (r, s))
        self.field = p.field

    @classmethod
    def identity(cls, field: QuadField) -> "Mat2":
        one, zero = field.one(), field.zero()
        return cls(((one, zero), (zero, one)))

    @classmethod
    def from_columns(cls, c1, c2) -> "Mat2":
        return cls(((c1[0], c2[0]), (c1[1], c2[1])))

    def det(self) -> QuadInt:
        (p, q), (r, s) = self.e
        return p * s - q * r

    def adjugate(self) -> "Mat2":
        (p, q), (r, s) = self.e
        return Mat2(((s, -q), (-r, p)))

    def conj_transpose(self) -> "Mat2":
        (p, q), (r, s) = self.e
        return Mat2(((p.conj(), r.conj()), (q.conj(), s.conj())))

    def __mul__(self, other: "Mat2") -> "Mat2":
        (a, b), (c, d) = self.e
        (p, q), (r, s) = other.e
        return Mat2(((a * p + b * r, a * q + b * s), (c * p + d * r, c * q + d * s)))

    def apply(self, v: tuple[QuadInt, QuadInt]) -> tuple[QuadInt, QuadInt]:
        (a, b), (c, d) = self.e
        return (a * v[0] + b * v[1], c * v[0] + d * v[1])

    def is_unimodular(self) -> bool:
        return self.det().is_unit()

    def inverse(self) -> "Mat2":
        """Inverse of a unimodular matrix (determinant a unit)."""
        det = self.det()
        if not det.is_unit():
            raise ValueError("matrix is not unimodular")
        # det^-1 = conj(det) since N(det) = 1
        dinv = det.conj()
        (p, q), (r, s) = self.adjugate().e
        return Mat2(((p * dinv, q * dinv), (r * dinv, s * dinv)))

    def __eq__(self, other):
        return isinstance(other, Mat2) and self.e == other.e

    def __hash__(self):
        return hash(self.e)

    def __repr__(self):
        (p, q), (r, s) = self.e
        return f"[{p} {q}; {r} {s}]"


def vec_conj_det(u, v) -> QuadInt:
    """det of the 2x2 matrix with columns u, v."""
    return u[0] * v[1] - u[1] * v[0]


def canonical_unit_rep(v: tuple[QuadInt, QuadInt]) -> tuple[QuadInt, QuadInt]:
    """Deterministic representative of {u*v : u a unit}: lexicographically
    largest coordinate tuple (a1, b1, a2, b2)."""
    field = v[0].field
    best = None
    best_key = None
    for u in field.units():
        w = (u * v[0], u * v[1])
        key = (w[0].a, w[0].b, w[1].a, w[1].b)
        if best_key is None or key > best_key:
            best, best_key = w, key
    return best
