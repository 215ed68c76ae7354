"""
CF Shifts Module for ECFCensus
Gauss shifts for even, backward and regular continued fractions, exact
eventually-periodic expansions, convergents, period matrices and lengths
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple

from core.errors import (
    DegenerateWord,
    DiscriminantNotPositive,
    DiscriminantSquare,
    NonHyperbolic,
    NotReduced,
    OutOfDomain,
)
from core.qi_core import (
    QuadraticIrrational,
    QuadraticNumber,
    qi_apply_mobius,
    qi_conjugate,
    qi_floor,
    qi_from_poly,
    qi_gt,
    qi_log,
    qi_lt,
    qi_negate,
)
from models.matrix import Mat2Z
from models.words import (
    BCF,
    ECF,
    RCF,
    BcfDigit,
    CfWord,
    ConvergentPair,
    EcfDigit,
    Expansion,
    RcfDigit,
)

logger = logging.getLogger(__name__)

# Orbits of quadratic irrationals are finite; this only guards against bugs
MAX_ORBIT_STEPS = 10 ** 6


def _require_above_one(u: QuadraticIrrational) -> None:
    if not qi_gt(u, 1):
        raise OutOfDomain(f"shift needs u > 1, got {u}")


def ecf_digit(u: QuadraticIrrational) -> EcfDigit:
    """a = 2*floor((u+1)/2), e = sign(u - a)"""
    _require_above_one(u)
    fl = qi_floor(u)
    a = 2 * ((fl + 1) // 2)
    return EcfDigit(a, 1 if fl >= a else -1)


def ecf_step(u: QuadraticIrrational) -> QuadraticIrrational:
    """T_E(u) = e / (u - a)"""
    digit = ecf_digit(u)
    return qi_apply_mobius(Mat2Z(0, digit.e, 1, -digit.a), u)


def bcf_digit(u: QuadraticIrrational) -> BcfDigit:
    _require_above_one(u)
    return BcfDigit(1 + qi_floor(u))


def bcf_step(u: QuadraticIrrational) -> QuadraticIrrational:
    """T_B(u) = 1 / (a - u)"""
    digit = bcf_digit(u)
    return qi_apply_mobius(Mat2Z(0, -1, 1, -digit.a), u)


def rcf_digit(u: QuadraticIrrational) -> RcfDigit:
    _require_above_one(u)
    return RcfDigit(qi_floor(u))


def rcf_step(u: QuadraticIrrational) -> QuadraticIrrational:
    """Regular shift 1 / (u - floor(u))"""
    digit = rcf_digit(u)
    return qi_apply_mobius(Mat2Z(0, 1, 1, -digit.b), u)


_DIGIT = {ECF: ecf_digit, BCF: bcf_digit, RCF: rcf_digit}
_STEP = {ECF: ecf_step, BCF: bcf_step, RCF: rcf_step}


def _kind(kind: str) -> str:
    kind = kind.upper()
    if kind not in _DIGIT:
        raise OutOfDomain(f"unknown expansion kind {kind!r}")
    return kind


def digit_of(u: QuadraticIrrational, kind: str):
    return _DIGIT[_kind(kind)](u)


def shift(u: QuadraticIrrational, kind: str) -> QuadraticIrrational:
    return _STEP[_kind(kind)](u)


def expand(u: QuadraticIrrational, kind: str) -> Expansion:
    """
    Eventually periodic expansion of u > 1

    Iterates the shift and stops at the first repeated orbit point; the
    period anchored there is minimal because cycle points are distinct.
    """
    kind = _kind(kind)
    _require_above_one(u)
    digit_fn, step_fn = _DIGIT[kind], _STEP[kind]

    seen: Dict[QuadraticIrrational, int] = {}
    digits = []
    current = u
    while current not in seen:
        if len(digits) >= MAX_ORBIT_STEPS:
            raise OutOfDomain(f"orbit of {u} exceeded {MAX_ORBIT_STEPS} steps")
        seen[current] = len(digits)
        digits.append(digit_fn(current))
        current = step_fn(current)

    start = seen[current]
    expansion = Expansion(CfWord(kind, tuple(digits[:start])), CfWord(kind, tuple(digits[start:])))
    logger.debug(f"{kind} expansion of {u.spec()}: {expansion}")
    return expansion


def periodic_orbit(u: QuadraticIrrational, kind: str) -> List[QuadraticIrrational]:
    """Points of the shift cycle reached from u, starting at its first periodic point"""
    expansion = expand(u, kind)
    current = u
    for _ in range(len(expansion.preperiod)):
        current = shift(current, kind)
    orbit = []
    for _ in range(len(expansion.period)):
        orbit.append(current)
        current = shift(current, kind)
    return orbit


def convergents(word: CfWord) -> List[ConvergentPair]:
    """(p_0, q_0) = (1, 0), (p_1, q_1) = (a_1, 1), p_k = a_k p_{k-1} + e_{k-1} p_{k-2}"""
    if len(word) == 0:
        raise DegenerateWord("convergents of an empty word")
    pairs = [ConvergentPair(1, 0), ConvergentPair(word[0].a, 1)]
    for k in range(1, len(word)):
        e_prev = word[k - 1].e
        a = word[k].a
        p = a * pairs[-1].p + e_prev * pairs[-2].p
        q = a * pairs[-1].q + e_prev * pairs[-2].q
        pairs.append(ConvergentPair(p, q))
    return pairs


def omega_matrix(word: CfWord) -> Mat2Z:
    """Product of the digit matrices [[p_n, p_{n-1} e_n], [q_n, q_{n-1} e_n]]"""
    if len(word) == 0:
        raise DegenerateWord("period word must be nonempty")
    return word.matrix()


def omega_tilde(word: CfWord) -> Mat2Z:
    """Omega when its determinant is +1, otherwise Omega squared"""
    omega = omega_matrix(word)
    return omega if omega.det == 1 else omega @ omega


def spectral_radius(sigma: Mat2Z) -> QuadraticIrrational:
    """Exact (t + sqrt(t^2 - 4 det)) / 2 with t = |Tr sigma|"""
    det = sigma.det
    if det not in (1, -1):
        raise NonHyperbolic(f"{sigma} is not unimodular")
    t = abs(sigma.trace)
    disc = t * t - 4 * det
    root = math.isqrt(max(disc, 0))
    if disc <= 0 or root * root == disc:
        raise NonHyperbolic(f"{sigma} has trace {sigma.trace} and det {det}")
    return qi_from_poly(1, -t, det, 1)


def periodic_value(word: CfWord) -> QuadraticIrrational:
    """Value > 1 of the purely periodic expansion with the given period"""
    word.require_period()
    sigma = word.matrix()
    return qi_from_poly(sigma.c, sigma.d - sigma.a, -sigma.b, 1)


def reduced_period(omega: QuadraticIrrational, kind: str) -> CfWord:
    expansion = expand(omega, kind)
    if not expansion.is_purely_periodic:
        raise NotReduced(f"{omega.spec()} has {kind} preperiod {expansion.preperiod}")
    return expansion.period


@dataclass(frozen=True)
class RhoLength:
    """Length of a reduced quadratic irrational under one expansion"""

    kind: str
    period: CfWord
    radius: QuadraticIrrational
    rho: float
    rho_squared: float

    @property
    def radius_float(self) -> float:
        return float(self.radius)


def rho_length(omega: QuadraticIrrational, kind: str) -> RhoLength:
    """
    rho = 2 log r(Omega~) together with the squared convention 4 log r(Omega)

    Raises NotReduced when omega has a preperiod for this kind.
    """
    kind = _kind(kind)
    period = reduced_period(omega, kind)
    omega_m = omega_matrix(period)
    radius = spectral_radius(omega_tilde(period))
    return RhoLength(
        kind=kind,
        period=period,
        radius=radius,
        rho=2 * qi_log(radius),
        rho_squared=4 * qi_log(spectral_radius(omega_m)),
    )


def galois_dual(word: CfWord) -> QuadraticIrrational:
    """
    Fixed point in (-1, 1) of [[q_{n-1} e_n, p_{n-1} e_n], [q_n, p_n]]

    This is the value of the reversed dual expansion; it equals
    -conjugate(periodic_value(word)).
    """
    word.require_period()
    omega = word.matrix()
    dual = Mat2Z(omega.d, omega.b, omega.c, omega.a)
    for sign in (1, -1):
        try:
            candidate = qi_from_poly(dual.c, dual.d - dual.a, -dual.b, sign)
        except (DiscriminantNotPositive, DiscriminantSquare) as e:
            raise NonHyperbolic(f"dual matrix {dual} has no irrational fixed point: {e}")
        if qi_gt(candidate, -1) and qi_lt(candidate, 1):
            return candidate
    raise NonHyperbolic(f"dual matrix {dual} has no fixed point in (-1, 1)")


def galois_dual_holds(word: CfWord) -> bool:
    return galois_dual(word) == qi_negate(qi_conjugate(periodic_value(word)))


def shift_product_holds(u: QuadraticIrrational, k: int, kind: str = ECF) -> bool:
    """
    Exact check of T(u) T^2(u) ... T^k(u) = delta_k / (p_k - q_k u)

    with delta_k the sign product of the first k digits.
    """
    digits = []
    product = QuadraticNumber.rational(1, u.discriminant)
    current = u
    for _ in range(k):
        digits.append(digit_of(current, kind))
        current = shift(current, kind)
        product = product * QuadraticNumber.from_qi(current)
    word = CfWord(_kind(kind), tuple(digits))
    last = convergents(word)[-1]
    u_num = QuadraticNumber.from_qi(u)
    return product == word.sign_product() / (last.p - last.q * u_num)


def convergent_sign_holds(u: QuadraticIrrational, k: int) -> bool:
    """ECF sign rule sign(u - p_k/q_k) = -delta_k"""
    digits = []
    current = u
    for _ in range(k):
        digits.append(ecf_digit(current))
        current = ecf_step(current)
    word = CfWord(ECF, tuple(digits))
    last = convergents(word)[-1]
    above = qi_gt(u, Fraction(last.p, last.q))
    return (1 if above else -1) == -word.sign_product()


def unit_interval_map(x: float, kind: str) -> float:
    """One step of the unit-interval conjugate of the shift (float diagnostic)"""
    kind = _kind(kind)
    if kind == ECF:
        if not 0 < x < 1:
            raise OutOfDomain(f"ECF interval map needs x in (0, 1), got {x}")
        return abs(1 / x - 2 * math.floor((x + 1) / (2 * x)))
    if kind == BCF:
        if not 0 <= x < 1:
            raise OutOfDomain(f"BCF interval map needs x in [0, 1), got {x}")
        y = 1 / (1 - x)
        return y - math.floor(y)
    if not 0 < x < 1:
        raise OutOfDomain(f"RCF interval map needs x in (0, 1), got {x}")
    y = 1 / x
    return y - math.floor(y)


def natural_extension_step(point: Tuple[float, float], kind: str) -> Tuple[float, float]:
    """(u, v) -> (T(u), e/(v + a)) for ECF and (T(u), 1/(a - v)) for BCF"""
    kind = _kind(kind)
    u, v = point
    if u <= 1:
        raise OutOfDomain(f"natural extension needs u > 1, got {u}")
    if kind == ECF:
        if not -1 <= v <= 1:
            raise OutOfDomain(f"ECF fiber is [-1, 1], got v={v}")
        a = 2 * math.floor((u + 1) / 2)
        e = 1 if u > a else -1
        return e / (u - a), e / (v + a)
    if kind == BCF:
        if not 0 <= v <= 1:
            raise OutOfDomain(f"BCF fiber is [0, 1], got v={v}")
        a = 1 + math.floor(u)
        return 1 / (a - u), 1 / (a - v)
    raise OutOfDomain("natural extension is implemented for ECF and BCF")


def word_family(family: str, k1: int, k2: int = 1) -> Tuple[CfWord, Tuple[int, int, int]]:
    """
    Closed-form period families and their minimal polynomials (A, B, C)

    single:      [(2k1,-1)]               X^2 - 2k1 X + 1
    plus_minus:  [(2k1,1),(2k2,-1)]       k2 X^2 - (1 + 2k1k2) X + k1
    minus_plus:  [(2k1,-1),(2k2,1)]       k2 X^2 + (1 - 2k1k2) X - k1
    minus_minus: [(2k1,-1),(2k2,-1)]      k2 X^2 - 2k1k2 X + k1
    bcf_tail:    [[k1, k2, k2, ...]]      X^2 - (2k1 - k2) X + k1^2 - k1k2 + 1
    """
    if family == "single":
        return CfWord.of(ECF, [(2 * k1, -1)]), (1, -2 * k1, 1)
    if family == "plus_minus":
        return CfWord.of(ECF, [(2 * k1, 1), (2 * k2, -1)]), (k2, -(1 + 2 * k1 * k2), k1)
    if family == "minus_plus":
        return CfWord.of(ECF, [(2 * k1, -1), (2 * k2, 1)]), (k2, 1 - 2 * k1 * k2, -k1)
    if family == "minus_minus":
        return CfWord.of(ECF, [(2 * k1, -1), (2 * k2, -1)]), (k2, -2 * k1 * k2, k1)
    if family == "bcf_tail":
        return CfWord.of(BCF, [k1, k2]), (1, -(2 * k1 - k2), k1 * k1 - k1 * k2 + 1)
    raise OutOfDomain(f"unknown family {family!r}")


def ecf_pair_as_rcf(word: CfWord) -> CfWord:
    """[(a1,-1),(a2,1)] has the same matrix as the RCF word [a1-1, 1, a2-1]"""
    if len(word) != 2 or word.kind != ECF or (word[0].e, word[1].e) != (-1, 1):
        raise OutOfDomain(f"expected an ECF word [(a1,-1),(a2,1)], got {word}")
    return CfWord.of(RCF, [word[0].a - 1, 1, word[1].a - 1])
