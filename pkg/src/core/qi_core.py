"""
Quadratic Irrational Module for ECFCensus
Exact representation of real quadratic irrationals: canonical construction,
conjugation, floor, ordering against rationals and the Moebius action
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import FrozenSet, Union

from core.errors import (
    DiscriminantNotPositive,
    DiscriminantSquare,
    NonUnimodular,
    ZeroLeadingCoefficient,
)
from models.matrix import Mat2Z

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]

E_REDUCED = "E_reduced"
B_REDUCED = "B_reduced"
RCF_REDUCED = "RCF_reduced"

# Extra binary digits used when converting to floats and logarithms
_FLOAT_GUARD_BITS = 96


class ExactOrdering(str, Enum):
    """Result of comparing an irrational against a rational: never equal"""

    LESS = "less"
    GREATER = "greater"


def _is_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


@dataclass(frozen=True)
class QuadraticIrrational:
    """
    Root (-B + s*sqrt(D)) / (2A) of A X^2 + B X + C with D = B^2 - 4AC

    Instances are canonical: A > 0, gcd(A, B, C) = 1, D > 0 not a square.
    Build them with qi_from_poly; equality is field equality.
    """

    a_coef: int
    b_coef: int
    c_coef: int
    root_sign: int

    @property
    def discriminant(self) -> int:
        return self.b_coef * self.b_coef - 4 * self.a_coef * self.c_coef

    def spec(self) -> str:
        """CLI form "A,B,C,sign" """
        sign = "+" if self.root_sign > 0 else "-"
        return f"{self.a_coef},{self.b_coef},{self.c_coef},{sign}"

    def __float__(self) -> float:
        return qi_to_float(self)

    def __str__(self) -> str:
        sign = "+" if self.root_sign > 0 else "-"
        return f"({-self.b_coef}{sign}sqrt({self.discriminant}))/{2 * self.a_coef}"


def qi_from_poly(A: int, B: int, C: int, root_sign: int = 1) -> QuadraticIrrational:
    """
    Canonical quadratic irrational for a root of A X^2 + B X + C

    Args:
        A, B, C: Integer coefficients, A != 0
        root_sign: +1 or -1, selecting (-B + root_sign*sqrt(D)) / (2A)

    Returns:
        Normalized QuadraticIrrational representing the same real number
    """
    A, B, C = int(A), int(B), int(C)
    if A == 0:
        raise ZeroLeadingCoefficient(f"leading coefficient is zero in ({A},{B},{C})")
    if root_sign not in (1, -1):
        raise ValueError(f"root_sign must be +1 or -1, got {root_sign}")

    disc = B * B - 4 * A * C
    if disc <= 0:
        raise DiscriminantNotPositive(f"discriminant {disc} of ({A},{B},{C}) is not positive")
    if _is_square(disc):
        raise DiscriminantSquare(f"discriminant {disc} of ({A},{B},{C}) is a perfect square")

    g = math.gcd(math.gcd(A, B), C)
    A, B, C = A // g, B // g, C // g
    if A < 0:
        A, B, C = -A, -B, -C
        root_sign = -root_sign
    return QuadraticIrrational(A, B, C, root_sign)


def qi_conjugate(omega: QuadraticIrrational) -> QuadraticIrrational:
    """The other root of the same minimal polynomial"""
    return QuadraticIrrational(omega.a_coef, omega.b_coef, omega.c_coef, -omega.root_sign)


def qi_discriminant(omega: QuadraticIrrational) -> int:
    return omega.discriminant


def qi_negate(omega: QuadraticIrrational) -> QuadraticIrrational:
    """-omega, a root of A X^2 - B X + C"""
    return QuadraticIrrational(omega.a_coef, -omega.b_coef, omega.c_coef, -omega.root_sign)


def qi_floor(omega: QuadraticIrrational) -> int:
    """Exact floor by integer square-root bracketing"""
    r = math.isqrt(omega.discriminant)
    two_a = 2 * omega.a_coef
    if omega.root_sign > 0:
        # -B + sqrt(D) lies strictly between -B + r and -B + r + 1
        return (-omega.b_coef + r) // two_a
    return (-omega.b_coef - r - 1) // two_a


def qi_compare_rational(omega: QuadraticIrrational, r: Rational) -> ExactOrdering:
    """
    Exact order of omega against the rational r

    The sign of omega - n/m equals the sign of X*sqrt(D) - Y with X = s*m and
    Y = B*m + 2*A*n, decided by comparing squares.
    """
    r = Fraction(r)
    n, m = r.numerator, r.denominator
    X = omega.root_sign * m
    Y = omega.b_coef * m + 2 * omega.a_coef * n
    D = omega.discriminant
    if X > 0:
        if Y <= 0 or X * X * D > Y * Y:
            return ExactOrdering.GREATER
        return ExactOrdering.LESS
    if Y >= 0 or X * X * D > Y * Y:
        return ExactOrdering.LESS
    return ExactOrdering.GREATER


def qi_gt(omega: QuadraticIrrational, r: Rational) -> bool:
    return qi_compare_rational(omega, r) is ExactOrdering.GREATER


def qi_lt(omega: QuadraticIrrational, r: Rational) -> bool:
    return qi_compare_rational(omega, r) is ExactOrdering.LESS


def qi_apply_mobius(sigma: Mat2Z, omega: QuadraticIrrational) -> QuadraticIrrational:
    """
    (a*omega + b) / (c*omega + d) for sigma = [[a, b], [c, d]] with det +-1

    The new polynomial is (-cy + a)^2 P(sigma^-1 y); its derivative at the
    image root is det(sigma) P'(omega), which fixes the root sign.
    """
    det = sigma.det
    if det not in (1, -1):
        raise NonUnimodular(f"det of {sigma} is {det}, expected +1 or -1")
    a, b, c, d = sigma.a, sigma.b, sigma.c, sigma.d
    A, B, C = omega.a_coef, omega.b_coef, omega.c_coef
    new_a = A * d * d - B * c * d + C * c * c
    new_b = -2 * A * b * d + B * (a * d + b * c) - 2 * C * a * c
    new_c = A * b * b - B * a * b + C * a * a
    return qi_from_poly(new_a, new_b, new_c, det * omega.root_sign)


def qi_linear(omega: QuadraticIrrational, c: int, d: int) -> QuadraticIrrational:
    """c*omega + d for an integer c != 0"""
    if c == 0:
        raise ZeroLeadingCoefficient("linear image with c = 0 is rational")
    A, B, C = omega.a_coef, omega.b_coef, omega.c_coef
    sign = omega.root_sign if c > 0 else -omega.root_sign
    return qi_from_poly(A, B * c - 2 * A * d, A * d * d - B * c * d + C * c * c, sign)


def classify(omega: QuadraticIrrational) -> FrozenSet[str]:
    """Reduced flags of omega: E (conj in (-1,1)), B (conj in (0,1)), RCF (conj in (-1,0))"""
    flags = set()
    if not qi_gt(omega, 1):
        return frozenset()
    conj = qi_conjugate(omega)
    above_minus_one = qi_gt(conj, -1)
    below_one = qi_lt(conj, 1)
    positive = qi_gt(conj, 0)
    if above_minus_one and below_one:
        flags.add(E_REDUCED)
        flags.add(B_REDUCED if positive else RCF_REDUCED)
    return frozenset(flags)


def _scaled_numerator(omega: QuadraticIrrational, bits: int) -> int:
    """Integer close to (-B + s*sqrt(D)) * 2^bits"""
    root = math.isqrt(omega.discriminant << (2 * bits))
    return omega.root_sign * root - (omega.b_coef << bits)


def qi_to_float(omega: QuadraticIrrational) -> float:
    bits = _FLOAT_GUARD_BITS + omega.discriminant.bit_length()
    return float(Fraction(_scaled_numerator(omega, bits), (2 * omega.a_coef) << bits))


def qi_log(omega: QuadraticIrrational) -> float:
    """Natural logarithm of a positive quadratic irrational of any size"""
    if not qi_gt(omega, 0):
        raise ValueError(f"log of non-positive value {omega}")
    bits = _FLOAT_GUARD_BITS + omega.discriminant.bit_length()
    numerator = _scaled_numerator(omega, bits)
    return math.log(numerator) - math.log(2 * omega.a_coef) - bits * math.log(2)


@dataclass(frozen=True)
class QuadraticNumber:
    """
    Exact element x + y*sqrt(d) of Q(sqrt(d)) for a fixed non-square d > 0

    Used for identities that mix several elements of one field (unit
    products, trace and norm checks, ratios of linear forms).
    """

    x: Fraction
    y: Fraction
    d: int

    @classmethod
    def rational(cls, value: Rational, d: int) -> "QuadraticNumber":
        return cls(Fraction(value), Fraction(0), d)

    @classmethod
    def from_qi(cls, omega: QuadraticIrrational) -> "QuadraticNumber":
        two_a = 2 * omega.a_coef
        return cls(Fraction(-omega.b_coef, two_a), Fraction(omega.root_sign, two_a), omega.discriminant)

    def _coerce(self, other) -> "QuadraticNumber":
        if isinstance(other, QuadraticNumber):
            if other.d == self.d:
                return other
            # sqrt(d2) = (s / d1) sqrt(d1) when d1 * d2 = s^2
            s = math.isqrt(self.d * other.d)
            if s * s != self.d * other.d:
                raise ValueError(f"mixing sqrt({self.d}) and sqrt({other.d})")
            return QuadraticNumber(other.x, other.y * Fraction(s, self.d), self.d)
        if isinstance(other, (int, Fraction)):
            return QuadraticNumber.rational(other, self.d)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QuadraticNumber(self.x + other.x, self.y + other.y, self.d)

    __radd__ = __add__

    def __neg__(self) -> "QuadraticNumber":
        return QuadraticNumber(-self.x, -self.y, self.d)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QuadraticNumber(
            self.x * other.x + self.d * self.y * other.y,
            self.x * other.y + self.y * other.x,
            self.d,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "QuadraticNumber":
        return QuadraticNumber(self.x, -self.y, self.d)

    def norm(self) -> Fraction:
        return self.x * self.x - self.d * self.y * self.y

    def trace(self) -> Fraction:
        return 2 * self.x

    def inverse(self) -> "QuadraticNumber":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero has no inverse")
        return QuadraticNumber(self.x / n, -self.y / n, self.d)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "QuadraticNumber":
        if k < 0:
            return self.inverse() ** (-k)
        result = QuadraticNumber.rational(1, self.d)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def sign(self) -> int:
        """Exact sign of x + y*sqrt(d)"""
        sx = (self.x > 0) - (self.x < 0)
        sy = (self.y > 0) - (self.y < 0)
        if sy == 0:
            return sx
        if sx == 0 or sx == sy:
            return sy
        # opposite signs: the larger square wins
        lhs = self.x * self.x
        rhs = self.d * self.y * self.y
        if lhs == rhs:
            return 0
        return sx if lhs > rhs else sy

    def __eq__(self, other) -> bool:
        try:
            other = self._coerce(other)
        except ValueError:
            return False
        if other is NotImplemented:
            return False
        return self.x == other.x and self.y == other.y

    def __hash__(self) -> int:
        # y^2 d and sign(y) do not depend on how d carries square factors
        return hash((self.x, self.y * self.y * self.d, self.y > 0))

    def __lt__(self, other) -> bool:
        return (self - other).sign() < 0

    def __le__(self, other) -> bool:
        return (self - other).sign() <= 0

    def __gt__(self, other) -> bool:
        return (self - other).sign() > 0

    def __ge__(self, other) -> bool:
        return (self - other).sign() >= 0

    def is_rational(self) -> bool:
        return self.y == 0

    def to_qi(self) -> QuadraticIrrational:
        """Canonical form of an irrational element"""
        if self.y == 0:
            raise DiscriminantSquare(f"{self} is rational")
        # z^2 - 2x z + (x^2 - d y^2) = 0 and z = x + sign(y)|y| sqrt(d)
        c0 = self.x * self.x - self.d * self.y * self.y
        scale = math.lcm(self.x.denominator, c0.denominator)
        sign = 1 if self.y > 0 else -1
        return qi_from_poly(scale, -2 * self.x * scale, c0 * scale, sign)

    def __float__(self) -> float:
        return float(self.x) + float(self.y) * math.sqrt(self.d)

    def __str__(self) -> str:
        return f"{self.x}+{self.y}*sqrt({self.d})"
