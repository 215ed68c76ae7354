"""
Pell Theta Module for ECFCensus
Stabilizers of E-reduced quadratic irrationals in the Theta group, the
eigenvalue map sigma -> c*omega + d, fundamental units from ECF periods
and independent Pell-equation oracles
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from config.settings import settings
from core.cf_shifts import reduced_period
from core.errors import (
    BadDiscriminant,
    LambdaNotExpanding,
    NonUnimodular,
    NotEReduced,
    NotStabilizer,
    PellSearchExhausted,
    UnitNotApplicable,
    WrongDiscriminantClass,
)
from core.qi_core import (
    E_REDUCED,
    QuadraticIrrational,
    QuadraticNumber,
    classify,
    qi_apply_mobius,
    qi_from_poly,
    qi_gt,
    qi_linear,
)
from core.word_matrix import in_theta_tilde
from models.matrix import Mat2Z
from models.words import ECF

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PellUnit:
    """t + u*sqrt(delta) with t^2 - delta*u^2 = norm = +-1"""

    t: int
    u: int
    delta: int
    norm: int

    def __post_init__(self):
        if self.norm not in (1, -1) or self.t * self.t - self.delta * self.u * self.u != self.norm:
            raise UnitNotApplicable(
                f"{self.t}^2 - {self.delta}*{self.u}^2 != {self.norm}"
            )

    @classmethod
    def of(cls, t: int, u: int, delta: int) -> "PellUnit":
        return cls(t, u, delta, t * t - delta * u * u)

    def as_number(self) -> QuadraticNumber:
        return QuadraticNumber(Fraction(self.t), Fraction(self.u), self.delta)

    def as_qi(self) -> QuadraticIrrational:
        """Canonical form of t + u*sqrt(delta), a root of X^2 - 2t X + norm"""
        if self.u == 0:
            raise UnitNotApplicable(f"trivial unit {self.t} is rational")
        return qi_from_poly(1, -2 * self.t, self.norm, 1 if self.u > 0 else -1)

    def __mul__(self, other: "PellUnit") -> "PellUnit":
        if other.delta != self.delta:
            raise WrongDiscriminantClass(f"units over {self.delta} and {other.delta}")
        return PellUnit(
            self.t * other.t + self.delta * self.u * other.u,
            self.t * other.u + self.u * other.t,
            self.delta,
            self.norm * other.norm,
        )

    def power(self, k: int) -> "PellUnit":
        result = PellUnit(1, 0, self.delta, 1)
        for _ in range(k):
            result = result * self
        return result

    def __str__(self) -> str:
        return f"{self.t}+{self.u}*sqrt({self.delta}) (norm {self.norm:+d})"


@dataclass(frozen=True)
class PellOracleResult:
    """Fundamental units of t^2 - D u^2 = +-1 and of t^2 - D u^2 = 1"""

    fundamental: PellUnit
    fundamental_plus: PellUnit
    method: str


def _fixes(sigma: Mat2Z, omega: QuadraticIrrational) -> bool:
    try:
        return qi_apply_mobius(sigma, omega) == omega
    except NonUnimodular:
        return False


def lambda_eval(sigma: Mat2Z, omega: QuadraticIrrational) -> Union[int, QuadraticIrrational]:
    """
    Eigenvalue c*omega + d of a stabilizer sigma = [[a, b], [c, d]] of omega

    Norm and trace of the result are checked against det and Tr of sigma.
    """
    if not _fixes(sigma, omega):
        raise NotStabilizer(f"{sigma} does not fix {omega.spec()}")
    if sigma.c == 0:
        return sigma.d

    value = sigma.c * QuadraticNumber.from_qi(omega) + sigma.d
    if value.norm() != sigma.det or value.trace() != sigma.trace:
        raise NotStabilizer(f"eigenvalue of {sigma} has norm {value.norm()} and trace {value.trace()}")
    return qi_linear(omega, sigma.c, sigma.d)


def _period_matrix(omega: QuadraticIrrational) -> Mat2Z:
    if E_REDUCED not in classify(omega):
        raise NotEReduced(f"{omega.spec()} is not E-reduced")
    return reduced_period(omega, ECF).matrix()


def fundamental_eps(omega: QuadraticIrrational) -> PellUnit:
    """
    epsilon = q_n omega + q_{n-1} e_n for one ECF period of omega

    epsilon = T/2 + (v/2) sqrt(D) with T = Tr Omega and v = q_n / A; when
    D = 4 D0 it is written over sqrt(D0).
    """
    omega_m = _period_matrix(omega)
    disc = omega.discriminant
    trace = omega_m.trace
    if omega_m.c % omega.a_coef:
        raise WrongDiscriminantClass(f"q_n = {omega_m.c} is not a multiple of A = {omega.a_coef}")
    v = omega_m.c // omega.a_coef

    if disc % 4 == 0:
        if trace % 2:
            raise WrongDiscriminantClass(f"odd trace {trace} for discriminant {disc}")
        unit = PellUnit(trace // 2, v, disc // 4, omega_m.det)
    else:
        if trace % 2 or v % 2:
            raise WrongDiscriminantClass(f"epsilon of {omega.spec()} is a half-integral unit")
        unit = PellUnit(trace // 2, v // 2, disc, omega_m.det)
    logger.debug(f"fundamental unit of {omega.spec()}: {unit}")
    return unit


def _bruteforce_pell(disc: int, limit: int) -> Optional[PellOracleResult]:
    fundamental = None
    for u in range(1, limit + 1):
        base = disc * u * u
        for norm in (-1, 1):
            t_sq = base + norm
            t = math.isqrt(t_sq)
            if t * t == t_sq:
                unit = PellUnit(t, u, disc, norm)
                if fundamental is None:
                    fundamental = unit
                if norm == 1:
                    return PellOracleResult(fundamental, unit, "bruteforce")
    if fundamental is not None:
        # a norm -1 unit squares to the generator of the norm +1 subgroup
        return PellOracleResult(fundamental, fundamental * fundamental, "bruteforce")
    return None


def _rcf_pell(disc: int, max_steps: int) -> Optional[PellOracleResult]:
    """Convergents of the periodic regular continued fraction of sqrt(D)"""
    a0 = math.isqrt(disc)
    m, d, a = 0, 1, a0
    h_prev, h = 1, a0
    k_prev, k = 0, 1
    for _ in range(max_steps):
        norm = h * h - disc * k * k
        if norm in (1, -1):
            fundamental = PellUnit(h, k, disc, norm)
            plus = fundamental if norm == 1 else fundamental * fundamental
            return PellOracleResult(fundamental, plus, "rcf")
        m = d * a - m
        d = (disc - m * m) // d
        a = (a0 + m) // d
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
    return None


def pell_oracle(disc: int, limit: Optional[int] = None) -> PellOracleResult:
    """
    Fundamental solutions of t^2 - D u^2 = +-1 and of t^2 - D u^2 = 1

    Scans u = 1, 2, ... up to the configured limit testing D u^2 +- 1 for
    squares; falls back to the regular continued fraction of sqrt(D).
    """
    if disc <= 0 or math.isqrt(disc) ** 2 == disc:
        raise BadDiscriminant(f"Pell equation needs a positive non-square, got {disc}")
    limit = settings.pell_bruteforce_limit if limit is None else limit

    result = _bruteforce_pell(disc, limit)
    if result is None and settings.pell_rcf_fallback:
        logger.info(f"brute force exhausted u <= {limit} for D = {disc}, using RCF oracle")
        result = _rcf_pell(disc, max_steps=4 * disc + 8)
    if result is None:
        raise PellSearchExhausted(f"no unit found for D = {disc} with u <= {limit}")
    return result


def stabilizer_from_unit(omega: QuadraticIrrational, unit: PellUnit) -> Mat2Z:
    """
    Theta-group stabilizer of omega with eigenvalue t + u sqrt(D)

    D = disc(omega):      [[t - B u, -2 C u], [2 A u, t + B u]]
    D = 4 D0, B = 2 B0:   [[t - B0 u, -C u], [A u, t + B0 u]]
    """
    A, B, C = omega.a_coef, omega.b_coef, omega.c_coef
    disc = omega.discriminant
    t, u = unit.t, unit.u
    if unit.delta == disc:
        sigma = Mat2Z(t - B * u, -2 * C * u, 2 * A * u, t + B * u)
    elif 4 * unit.delta == disc:
        b0 = B // 2
        sigma = Mat2Z(t - b0 * u, -C * u, A * u, t + b0 * u)
    else:
        raise WrongDiscriminantClass(f"unit over {unit.delta} does not match discriminant {disc}")

    if not in_theta_tilde(sigma):
        raise UnitNotApplicable(f"{sigma} built from {unit} is not in the Theta group")
    if not _fixes(sigma, omega):
        raise UnitNotApplicable(f"{sigma} built from {unit} does not fix {omega.spec()}")
    return sigma


def power_decompose(sigma: Mat2Z, omega: QuadraticIrrational):
    """
    (Omega_E(omega), k) with sigma = Omega_E(omega)^k

    Requires sigma in the Theta group fixing omega with eigenvalue > 1;
    k is found by dividing out Omega_E(omega) until the identity appears.
    """
    if not in_theta_tilde(sigma) or not _fixes(sigma, omega):
        raise NotStabilizer(f"{sigma} is not a Theta stabilizer of {omega.spec()}")
    eigen = lambda_eval(sigma, omega)
    if isinstance(eigen, int) or not qi_gt(eigen, 1):
        raise LambdaNotExpanding(f"eigenvalue of {sigma} is not > 1")

    base = _period_matrix(omega)
    base_inverse = base.inverse()
    bound = 2 * sigma.max_entry().bit_length() + 2
    current = sigma
    k = 0
    while current != Mat2Z.identity():
        current = current @ base_inverse
        k += 1
        if k > bound:
            raise NotStabilizer(f"{sigma} is not a power of {base}")
    return base, k
