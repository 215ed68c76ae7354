"""
Word Matrix Module for ECFCensus
Dictionary between digit words and integer matrices: the word map, its
constructive inverse, membership in the counting sets, the correspondence
between plus-words and (reduced value, power) pairs and the Phi bijection
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, Optional, Tuple

from core.cf_shifts import omega_tilde, periodic_value
from core.errors import NotInS, NotInSPlus, NotPlusWord
from core.qi_core import QuadraticIrrational, QuadraticNumber
from models.matrix import Mat2Z
from models.words import BCF, ECF, CfWord

logger = logging.getLogger(__name__)

S = "S"
S_PLUS = "S_plus"
S_MINUS = "S_minus"
S_B = "S_B"
THETA = "Theta"
THETA_TILDE = "ThetaTilde"


@dataclass(frozen=True)
class SMatrixParts:
    """Entries of sigma = [[p', p e], [q', q e]]"""

    p_prime: int
    p: int
    q_prime: int
    q: int
    e: int


@dataclass(frozen=True)
class SetMembership:
    flags: FrozenSet[str]

    def __contains__(self, flag: str) -> bool:
        return flag in self.flags


@dataclass(frozen=True)
class JEResult:
    omega: QuadraticIrrational
    k: int
    block: CfWord


def word_to_matrix(word: CfWord) -> Mat2Z:
    return word.matrix()


def s_parts(sigma: Mat2Z) -> Optional[SMatrixParts]:
    """Split sigma into (p', p, q', q, e) using e = sign of the bottom-right entry"""
    if sigma.d == 0:
        return None
    e = 1 if sigma.d > 0 else -1
    return SMatrixParts(sigma.a, sigma.b * e, sigma.c, sigma.d * e, e)


def in_theta(sigma: Mat2Z) -> bool:
    return sigma.det == 1 and (sigma.is_identity_mod2() or sigma.is_swap_mod2())


def in_theta_tilde(sigma: Mat2Z) -> bool:
    return sigma.det in (1, -1) and (sigma.is_identity_mod2() or sigma.is_swap_mod2())


def in_S(sigma: Mat2Z) -> bool:
    """det +-1, congruent to I or J mod 2, p' > p > q > 0 and p' > q' > q"""
    if not in_theta_tilde(sigma):
        return False
    parts = s_parts(sigma)
    if parts is None:
        return False
    return (parts.p_prime > parts.p > parts.q > 0
            and parts.p_prime > parts.q_prime > parts.q)


def _ge_scaled(x: int, factor: Fraction, y: int) -> bool:
    """x >= factor * y with cross-multiplication"""
    return x * factor.denominator >= factor.numerator * y


def in_S_sign(sigma: Mat2Z, alpha: Fraction, beta: Optional[Fraction], N: int, sign: int) -> bool:
    """
    Membership in S_+(alpha, beta; N) (sign = +1) or S_-(alpha, beta; N) (sign = -1)

    beta = None stands for an infinite bound and gives the empty set.
    """
    if beta is None or not in_S(sigma) or sigma.det != 1:
        return False
    parts = s_parts(sigma)
    if parts.e != sign or sigma.trace > N:
        return False
    return _ge_scaled(parts.p, Fraction(alpha), parts.q) and _ge_scaled(parts.p_prime, Fraction(beta), parts.p)


def in_S_B(sigma: Mat2Z, alpha: Fraction, beta: Optional[Fraction], N: int) -> bool:
    """sigma = [[p', -p], [q', -q]], det 1, p' > q' > q >= 0, p >= alpha q, p' >= beta p, p' - q <= N"""
    if beta is None or sigma.det != 1:
        return False
    p_prime, p, q_prime, q = sigma.a, -sigma.b, sigma.c, -sigma.d
    if not p_prime > q_prime > q >= 0:
        return False
    if p_prime - q > N:
        return False
    return _ge_scaled(p, Fraction(alpha), q) and _ge_scaled(p_prime, Fraction(beta), p)


def membership(sigma: Mat2Z, alpha, beta, N: int) -> SetMembership:
    """All set flags of sigma for the parameters (alpha, beta, N)"""
    alpha = Fraction(alpha)
    beta = None if beta is None else Fraction(beta)
    flags = set()
    if in_theta(sigma):
        flags.add(THETA)
    if in_theta_tilde(sigma):
        flags.add(THETA_TILDE)
    if in_S(sigma):
        flags.add(S)
    if in_S_sign(sigma, alpha, beta, N, 1):
        flags.add(S_PLUS)
    if in_S_sign(sigma, alpha, beta, N, -1):
        flags.add(S_MINUS)
    if in_S_B(sigma, alpha, beta, N):
        flags.add(S_B)
    return SetMembership(frozenset(flags))


def _single_ecf_digit(sigma: Mat2Z) -> Optional[Tuple[int, int]]:
    """(a, e) when sigma = M(a, e) = [[a, e], [1, 0]]"""
    if sigma.c == 1 and sigma.d == 0 and sigma.b in (1, -1) and sigma.a >= 2 and sigma.a % 2 == 0:
        return sigma.a, sigma.b
    return None


def matrix_to_word(sigma: Mat2Z) -> CfWord:
    """
    Unique ECF word whose matrix is sigma

    Peels M(a, e) from the right with a = 2*floor((q' + q) / (2q)); every
    intermediate factor is a word matrix with strictly smaller p'.
    Single-digit matrices M(a, e) are accepted as the base case.
    """
    digits = []
    current = sigma
    while True:
        single = _single_ecf_digit(current)
        if single is not None:
            digits.append(single)
            break
        if not in_S(current):
            raise NotInS(f"{sigma} is not a word matrix (failed at factor {current})")
        parts = s_parts(current)
        a = 2 * ((parts.q_prime + parts.q) // (2 * parts.q))
        digits.append((a, parts.e))
        following = Mat2Z(parts.p, parts.p_prime - a * parts.p, parts.q, parts.q_prime - a * parts.q)
        if following.a >= current.a:
            raise NotInS(f"decomposition of {sigma} does not decrease at {current}")
        current = following

    word = CfWord.of(ECF, reversed(digits))
    if word.matrix() != sigma:
        raise NotInS(f"{sigma} does not factor into ECF digit matrices")
    return word


def bcf_matrix_to_word(sigma: Mat2Z) -> CfWord:
    """
    Unique BCF word with matrix sigma = [[p', -p], [q', -q]]

    The last digit is 1 + floor(p'/p); peeling stops at [[a_1, -1], [1, 0]].
    """
    if sigma.det != 1:
        raise NotInS(f"{sigma} has det {sigma.det}")
    digits = []
    current = sigma
    while -current.d != 0:
        p_prime, p, q_prime, q = current.a, -current.b, current.c, -current.d
        if not (p_prime > p > 0 and q_prime > q > 0):
            raise NotInS(f"{sigma} is not a BCF word matrix (failed at factor {current})")
        a = 1 + p_prime // p
        digits.append(a)
        current = Mat2Z(p, -(a * p - p_prime), q, -(a * q - q_prime))
    if current.b != -1 or current.c != 1 or current.a < 2:
        raise NotInS(f"{sigma} is not a BCF word matrix (base factor {current})")
    digits.append(current.a)

    word = CfWord.of(BCF, reversed(digits))
    if word.matrix() != sigma:
        raise NotInS(f"{sigma} does not factor into BCF digit matrices")
    return word


def j_E(word: CfWord) -> JEResult:
    """
    (omega, k) for a word with sign product +1

    omega is the value of the primitive block and k counts effective
    periods, so that the word matrix equals Omega~(omega)^k.
    """
    if word.kind != ECF:
        raise NotPlusWord(f"j_E takes ECF words, got {word.kind}")
    if len(word) == 0 or word.sign_product() != 1:
        raise NotPlusWord(f"word {word} has sign product {word.sign_product()}")
    block, _ = word.primitive_root()
    omega = periodic_value(block)
    eper = len(block) if block.sign_product() == 1 else 2 * len(block)
    k = len(word) // eper
    if word.matrix() != omega_tilde(block).power(k):
        raise NotPlusWord(f"word {word} is not a power of Omega~ of its block")
    return JEResult(omega=omega, k=k, block=block)


def phi_bijection(sigma: Mat2Z) -> Tuple[int, int, int, str]:
    """
    (m, u, v) = (p, p', q) for sigma in S_+ with e = +1

    Returns the branch: "A1" (m odd, u and v even, uv = 1 mod m) or
    "A2" (m even, uv = 1 mod 2m).
    """
    if not in_S(sigma) or sigma.det != 1 or sigma.d <= 0:
        raise NotInSPlus(f"{sigma} is not in S_+ with e = +1")
    parts = s_parts(sigma)
    m, u, v = parts.p, parts.p_prime, parts.q
    branch = "A1" if m % 2 else "A2"
    return m, u, v, branch


def phi_inverse(m: int, u: int, v: int) -> Mat2Z:
    """[[u, m], [(uv - 1)/m, v]], validated to lie in S_+ with e = +1"""
    if m <= 0 or (u * v - 1) % m:
        raise NotInSPlus(f"({m}, {u}, {v}) has no integral q'")
    sigma = Mat2Z(u, m, (u * v - 1) // m, v)
    if not in_S(sigma) or sigma.det != 1:
        raise NotInSPlus(f"({m}, {u}, {v}) maps outside S_+")
    return sigma


def phi_branch_holds(m: int, u: int, v: int, branch: str) -> bool:
    if branch == "A1":
        return m % 2 == 1 and u % 2 == 0 and v % 2 == 0 and (u * v) % m == 1 % m
    return m % 2 == 0 and (u * v) % (2 * m) == 1


def is_consecutive_convergents(sigma: Mat2Z, u: QuadraticIrrational) -> bool:
    """
    Whether sigma = [[p', -p], [q', -q]] pairs consecutive BCF convergents of u

    Requires det 1, p' > q' > q >= 0, p' > p > q and
    E_sigma(u) = (p - q u) / (p' - q' u) > 1 with a positive denominator.
    """
    if sigma.det != 1:
        return False
    p_prime, p, q_prime, q = sigma.a, -sigma.b, sigma.c, -sigma.d
    if not (p_prime > q_prime > q >= 0 and p_prime > p > q):
        return False
    x = QuadraticNumber.from_qi(u)
    denominator = p_prime - q_prime * x
    if denominator.sign() <= 0:
        return False
    return (p - q * x) > denominator
