"""
Census Module for ECFCensus
Counting engines for the matrix sets S_+, S_- and S_B and for reduced
quadratic irrationals: congruence solving, word enumeration, exact-radius
counts, brute-force oracles and the asymptotic main terms
"""
import itertools
import logging
import math
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from config.settings import settings
from core.cf_shifts import periodic_value
from core.errors import BadDiscriminant, InvalidQuery
from core.kloosterman_check import POLYGON, Interval, Line, Region, count_pairs
from core.qi_core import (
    B_REDUCED,
    E_REDUCED,
    RCF_REDUCED,
    QuadraticIrrational,
    classify,
    qi_conjugate,
    qi_from_poly,
    qi_gt,
    qi_lt,
)
from core.totient import totient_engine
from core.word_matrix import in_S_B, in_S_sign
from models.census import CensusQuery, CensusResult
from models.matrix import Mat2Z
from models.words import BCF, ECF, CfWord
from utils.modular import ceil_frac, count_progression, floor_frac, modinv_array, ragged_ranges
from utils.parsing import format_rational

logger = logging.getLogger(__name__)

ZETA2 = math.pi ** 2 / 6

CONGRUENCE = "congruence"
WORD_DFS = "word_dfs"
REDUCED_DFS = "reduced_dfs"
BRUTEFORCE = "bruteforce"
METHODS = (CONGRUENCE, WORD_DFS, REDUCED_DFS, BRUTEFORCE)

_REDUCED_FLAG = {"E": E_REDUCED, "ECF": E_REDUCED, "B": B_REDUCED, "BCF": B_REDUCED, "RCF": RCF_REDUCED}


# --------------------------------------------------------------------------
# Main terms
# --------------------------------------------------------------------------

def main_term_S_plus(alpha, beta, N: int) -> float:
    """N^2 / (6 zeta(2)) * log((ab + 1) / ab)"""
    ab = float(Fraction(alpha) * Fraction(beta))
    return N * N / (6 * ZETA2) * math.log((ab + 1) / ab)


def main_term_S_minus(alpha, beta: Optional[Fraction], N: int) -> float:
    """N^2 / (6 zeta(2)) * log(ab / (ab - 1)); zero for an infinite beta"""
    if beta is None:
        return 0.0
    ab = float(Fraction(alpha) * Fraction(beta))
    return N * N / (6 * ZETA2) * math.log(ab / (ab - 1))


def main_term_S_B(alpha, beta, N: int) -> float:
    """N^2 / (2 zeta(2)) * log(ab / (ab - 1))"""
    ab = float(Fraction(alpha) * Fraction(beta))
    return N * N / (2 * ZETA2) * math.log(ab / (ab - 1))


def constant_E(alpha, beta1: Optional[Fraction], beta2) -> float:
    """
    C(alpha, beta1, beta2) = log((a b2 + 1)/(a b2) * a b1/(a b1 - 1)) / pi^2

    beta1 = None is the limit beta1 -> infinity.
    """
    alpha, beta2 = Fraction(alpha), Fraction(beta2)
    plus = float((alpha * beta2 + 1) / (alpha * beta2))
    minus = 1.0 if beta1 is None else float(alpha * beta1 / (alpha * beta1 - 1))
    return math.log(plus * minus) / math.pi ** 2


def constant_B(alpha, beta) -> float:
    """log(a b / (a b - 1)) / (2 zeta(2))"""
    ab = Fraction(alpha) * Fraction(beta)
    return math.log(float(ab / (ab - 1))) / (2 * ZETA2)


def _midpoint_integral(integrand: Callable, u0: float, v0: float, v1: float, steps: int) -> float:
    """Midpoint rule over [u0, inf) x [v0, v1] with u = u0 + s/(1 - s)"""
    s = (np.arange(steps) + 0.5) / steps
    u = u0 + s / (1 - s)
    du = 1.0 / ((1 - s) ** 2 * steps)
    v = v0 + (v1 - v0) * s
    dv = (v1 - v0) / steps
    grid_u, grid_v = np.meshgrid(u, v, indexing="ij")
    return float((integrand(grid_u, grid_v) * du[:, None]).sum() * dv)


def integral_constant(kind: str, alpha, beta1, beta2=1, steps: int = 600) -> float:
    """
    Main-term constant as a double integral

    E: (1/pi^2) * integral of (u + v)^-2 over [alpha, inf) x [-1/beta1, 1/beta2]
    B: (1/(2 zeta(2))) * integral of (u - v)^-2 over [alpha, inf) x [0, 1/beta1]
    """
    alpha = float(Fraction(alpha))
    if kind.upper() in ("E", "ECF"):
        v0 = 0.0 if beta1 is None else -1 / float(Fraction(beta1))
        v1 = 1 / float(Fraction(beta2))
        return _midpoint_integral(lambda u, v: 1 / (u + v) ** 2, alpha, v0, v1, steps) / math.pi ** 2
    v1 = 1 / float(Fraction(beta1))
    return _midpoint_integral(lambda u, v: 1 / (u - v) ** 2, alpha, 0.0, v1, steps) / (2 * ZETA2)


# --------------------------------------------------------------------------
# Congruence kernels
# --------------------------------------------------------------------------

def _chunks(lengths: np.ndarray, cap: int) -> Iterable[slice]:
    """Consecutive slices of lengths whose sums stay near cap"""
    cumulative = np.cumsum(lengths)
    start, n = 0, lengths.size
    while start < n:
        base = cumulative[start - 1] if start else 0
        stop = int(np.searchsorted(cumulative, base + cap, side="right"))
        stop = max(stop, start + 1)
        yield slice(start, min(stop, n))
        start = stop


def _count_block(task: Tuple) -> int:
    """
    Congruence count for moduli p in [p_lo, p_hi]

    kind "B": uv = -1 mod p, u in [ceil(beta p), N + v]
    kind "+": uv = 1 (mod 2p, or mod p with u, v even), u in [max(p+1, ceil(beta p)), N - v]
    kind "-": uv = -1 likewise, u in [max(p+1, ceil(beta p)), N + v]
    """
    kind, p_lo, p_hi, a_num, a_den, b_num, b_den, N, cap = task
    p = np.arange(p_lo, p_hi + 1, dtype=np.int64)
    if p.size == 0:
        return 0
    u_lo = -((-p * b_num) // b_den)
    if kind != "B":
        u_lo = np.maximum(u_lo, p + 1)
    v_hi = np.minimum((p * a_den) // a_num, p - 1)
    if kind == "+":
        v_lo = np.ones_like(p)
        v_hi = np.minimum(v_hi, N - u_lo)
    else:
        v_lo = np.maximum(1, u_lo - N)
    lengths = np.maximum(v_hi - v_lo + 1, 0)

    total = 0
    for part in _chunks(lengths, cap):
        owner, v = ragged_ranges(v_lo[part], lengths[part])
        if v.size == 0:
            continue
        pv = p[part][owner]
        lo = u_lo[part][owner]
        if kind == "B":
            inverse, g = modinv_array(v, pv)
            keep = g == 1
            residue = np.mod(-inverse, pv)
            modulus = pv
            hi = N + v
        else:
            # odd p forces u and v even
            parity_ok = (pv % 2 == 0) | (v % 2 == 0)
            pv, v, lo = pv[parity_ok], v[parity_ok], lo[parity_ok]
            odd = pv % 2 == 1
            inverse_modulus = np.where(odd, pv, 2 * pv)
            inverse, g = modinv_array(v, inverse_modulus)
            keep = g == 1
            residue = inverse if kind == "+" else np.mod(-inverse, inverse_modulus)
            residue = np.where(odd & (residue % 2 == 1), residue + pv, residue)
            modulus = 2 * pv
            hi = N - v if kind == "+" else N + v
        total += int(count_progression(lo, hi, residue, modulus)[keep].sum())
    return total


def _p_max_minus(alpha: Fraction, beta: Fraction, N: int) -> int:
    """Largest p with beta p <= N + p/alpha"""
    return floor_frac(alpha * N / (alpha * beta - 1))


def _run_tasks(worker: Callable, tasks: List, threads: int) -> List:
    if threads <= 1 or len(tasks) <= 1:
        return [worker(task) for task in tasks]
    results = []
    with ProcessPoolExecutor(max_workers=threads) as executor:
        futures = [executor.submit(worker, task) for task in tasks]
        for future in as_completed(futures):
            results.append(future.result())
    return results


# --------------------------------------------------------------------------
# Word enumeration
# --------------------------------------------------------------------------

def _power_index(digits: Tuple) -> int:
    """k such that the word is the k-th power of Omega~ of its primitive block"""
    n = len(digits)
    for size in range(1, n + 1):
        if n % size == 0 and digits[:size] * (n // size) == digits:
            reps = n // size
            sign = 1
            for _, e in digits[:size]:
                sign *= -e
            return reps if sign == 1 else reps // 2
    return 1


def _is_primitive(digits: Tuple) -> bool:
    n = len(digits)
    return not any(n % size == 0 and digits[:size] * (n // size) == digits for size in range(1, n))


@dataclass
class WordCensus:
    """Matrix-filter word count with its approximation ledger"""

    total: int = 0
    by_sign: Dict[int, int] = field(default_factory=lambda: {1: 0, -1: 0})
    by_power: Counter = field(default_factory=Counter)
    boundary: int = 0
    nodes: int = 0

    def merge(self, other: "WordCensus") -> "WordCensus":
        self.total += other.total
        for sign, value in other.by_sign.items():
            self.by_sign[sign] = self.by_sign.get(sign, 0) + value
        self.by_power.update(other.by_power)
        self.boundary += other.boundary
        self.nodes += other.nodes
        return self

    def ledger(self, N: int) -> Dict:
        """T_k split of the total, T_1 = S - sum_{k >= 2} T_k, power bound k <= log2 N"""
        tail = sum(v for k, v in self.by_power.items() if k >= 2)
        max_k = max(self.by_power) if self.by_power else 0
        return {
            "T_k": {str(k): v for k, v in sorted(self.by_power.items())},
            "T_1": self.total - tail,
            "power_tail": tail,
            "max_k": max_k,
            "power_bound_holds": max_k <= math.log2(N) if N > 1 else max_k == 0,
            "boundary": self.boundary,
        }


def _ecf_walk(task: Tuple) -> WordCensus:
    """
    Depth-first walk over ECF words from the given root digits

    A node [[p_n, p_{n-1} e], [q_n, q_{n-1} e]] of length >= 2 is counted when
    det = +1, Tr <= N, p >= alpha q and p' >= beta p (beta2 for e = +1,
    beta1 for e = -1). Children need p_{n+1} - q_n <= N, which is
    nondecreasing along every branch.
    """
    roots, alpha, beta1, beta2, N, p_cap, entry_bound, track = task
    a_num, a_den = alpha.numerator, alpha.denominator
    census = WordCensus()
    stack = [(a, 1, 1, 0, e, -e, ((a, e),) if track else None) for a, e in roots]
    while stack:
        p, p_prev, q, q_prev, e, delta, digits = stack.pop()
        census.nodes += 1
        if (q_prev > 0 and delta == 1 and p + e * q_prev <= N
                and (entry_bound is None or p <= entry_bound)):
            beta = beta2 if e == 1 else beta1
            if (beta is not None and p_prev * a_den >= a_num * q_prev
                    and p * beta.denominator >= beta.numerator * p_prev):
                census.total += 1
                census.by_sign[e] += 1
                if track:
                    census.by_power[_power_index(digits)] += 1
                    if q_prev * (q + e * q_prev) <= N or p_prev * (p_prev - q_prev) <= N:
                        census.boundary += 1
        if p > p_cap:
            continue
        a = 2
        while True:
            p_next = a * p + e * p_prev
            if p_next - q > N or (entry_bound is not None and p_next > entry_bound):
                break
            q_next = a * q + e * q_prev
            for e_next in (1, -1):
                child = digits + ((a, e_next),) if track else None
                stack.append((p_next, p, q_next, q, e_next, -delta * e_next, child))
            a += 2
    return census


def _bcf_walk(task: Tuple) -> WordCensus:
    """
    Depth-first walk over BCF words: [[p_n, -p_{n-1}], [q_n, -q_{n-1}]] is
    counted when p' - q <= N, p >= alpha q and p' >= beta p
    """
    roots, alpha, beta, N, p_cap, entry_bound, track = task
    a_num, a_den = alpha.numerator, alpha.denominator
    b_num, b_den = beta.numerator, beta.denominator
    census = WordCensus()
    stack = [(a, 1, 1, 0, (a,) if track else None) for a in roots]
    while stack:
        p, p_prev, q, q_prev, digits = stack.pop()
        census.nodes += 1
        if (p - q_prev <= N and (entry_bound is None or p <= entry_bound)
                and p_prev * a_den >= a_num * q_prev and p * b_den >= b_num * p_prev):
            census.total += 1
            census.by_sign[-1] += 1
            if track:
                census.by_power[len(digits) // _smallest_period(digits)] += 1
                if p_prev * (p_prev - q_prev) <= N:
                    census.boundary += 1
        if p > p_cap:
            continue
        a = 2
        while True:
            p_next = a * p - p_prev
            if p_next - q > N or (entry_bound is not None and p_next > entry_bound):
                break
            child = digits + (a,) if track else None
            stack.append((p_next, p, a * q - q_prev, q, child))
            a += 1
    return census


def _smallest_period(digits: Tuple) -> int:
    n = len(digits)
    for size in range(1, n + 1):
        if n % size == 0 and digits[:size] * (n // size) == digits:
            return size
    return n


def _split_roots(roots: List, threads: int) -> List[List]:
    """Round-robin root digits over the workers"""
    buckets = max(1, min(threads, len(roots)))
    return [roots[i::buckets] for i in range(buckets)]


def _walk_words(ecf: bool, roots: Sequence[Tuple[int, int]], bound: int, max_depth: int) -> Iterator[Tuple]:
    """
    Nodes (p_n, p_{n-1}, q_n, q_{n-1}, e_n, delta_n, digits) of every word
    whose prefixes keep p_k - q_{k-1} <= bound, up to length max_depth
    """
    stack = [(a, 1, 1, 0, e, -e, ((a, e),)) for a, e in roots]
    while stack:
        node = stack.pop()
        yield node
        p, p_prev, q, q_prev, e, delta, digits = node
        if len(digits) >= max_depth:
            continue
        a = 2
        while True:
            p_next = a * p + e * p_prev
            if p_next - q > bound:
                break
            q_next = a * q + e * q_prev
            for e_next in ((1, -1) if ecf else (-1,)):
                stack.append((p_next, p, q_next, q, e_next, -delta * e_next, digits + ((a, e_next),)))
            a += 2 if ecf else 1


def iter_words(kind: str, max_trace: int) -> Iterator[Tuple[Tuple, Mat2Z]]:
    """
    (digits, matrix) for ECF or BCF words that may have Tr <= max_trace

    Nondegenerate words of length n have trace at least n + 1, so the walk
    stops at length max_trace - 1; degenerate words are yielded too.
    """
    ecf = kind.upper() in ("E", "ECF")
    roots = [(a, e) for a in range(2, max_trace + 1, 2) for e in (1, -1)] if ecf else \
        [(a, -1) for a in range(2, max_trace + 1)]
    for p, p_prev, q, q_prev, e, _, digits in _walk_words(ecf, roots, max_trace, max(max_trace - 1, 1)):
        yield digits, Mat2Z(p, e * p_prev, q, e * q_prev)


def _reduced_walk(task: Tuple) -> int:
    """
    Count primitive nondegenerate period words with Tr(Omega~) <= T whose
    value passes the exact omega and conjugate filters
    """
    kind, roots, alpha, beta1, beta2, threshold = task
    t_floor = floor_frac(threshold)
    count = 0
    for p, p_prev, q, q_prev, e, delta, digits in _walk_words(kind == "E", roots, t_floor, max(t_floor - 1, 1)):
        trace = p + e * q_prev
        effective = trace if delta == 1 else trace * trace + 2
        if 2 < effective <= threshold and _is_primitive(digits):
            omega = qi_from_poly(q, e * q_prev - p, -e * p_prev, 1)
            if _passes_filters(kind, omega, alpha, beta1, beta2):
                count += 1
    return count


def _passes_filters(kind: str, omega: QuadraticIrrational, alpha: Fraction,
                    beta1: Optional[Fraction], beta2: Fraction) -> bool:
    if not qi_gt(omega, alpha):
        return False
    conj = qi_conjugate(omega)
    if kind == "E":
        upper = Fraction(0) if beta1 is None else 1 / beta1
        return qi_gt(conj, -1 / beta2) and qi_lt(conj, upper)
    return qi_gt(conj, 0) and qi_lt(conj, 1 / beta1)


# --------------------------------------------------------------------------
# Engine
# --------------------------------------------------------------------------

def _rational(value, name: str) -> Fraction:
    try:
        result = Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InvalidQuery(f"{name} must be rational, got {value!r}") from exc
    if result < 1:
        raise InvalidQuery(f"{name} must be >= 1, got {result}")
    return result


def _optional_rational(value, name: str) -> Optional[Fraction]:
    return None if value is None else _rational(value, name)


def _check_n(N) -> int:
    if int(N) != N or N < 1:
        raise InvalidQuery(f"N must be a positive integer, got {N}")
    return int(N)


class CensusEngine:
    """Congruence, word and exact-radius censuses with shared tolerance logic"""

    def __init__(self):
        self.block_size = settings.census_block_size
        self.batch_pairs = settings.census_batch_pairs

    def _threads(self, threads: Optional[int]) -> int:
        return settings.default_threads if threads is None else max(1, int(threads))

    def _judge(self, exact: int, main: float, N: int, tolerance: Optional[float]) -> Tuple[float, float, Optional[bool]]:
        if main > 0:
            deviation = abs(exact - main) / main
        else:
            deviation = 0.0 if exact == 0 else math.inf
        tolerance = settings.census_tolerance_c / math.sqrt(N) if tolerance is None else tolerance
        passed = deviation <= tolerance if N >= settings.census_min_check_n else None
        return deviation, tolerance, passed

    def _result(self, kind: str, alpha, beta1, beta2, N: int, method: str, exact: int,
                main: float, started: float, tolerance: Optional[float], extra: Dict) -> CensusResult:
        deviation, tolerance, passed = self._judge(exact, main, N, tolerance)
        return CensusResult(
            kind=kind,
            alpha=format_rational(alpha),
            beta1=format_rational(beta1),
            beta2=format_rational(beta2) if kind == "E" else "",
            N=N,
            method=method,
            exact_count=exact,
            main_term=main,
            relative_deviation=deviation,
            tolerance=tolerance,
            passed=passed,
            elapsed_ms=(time.perf_counter() - started) * 1000,
            extra=extra,
        )

    # ---------------------------------------------------------------- kernels

    def _congruence_total(self, kind: str, alpha: Fraction, beta: Fraction, N: int,
                          p_max: int, threads: int) -> int:
        tasks = [
            (kind, lo, min(lo + self.block_size - 1, p_max), alpha.numerator, alpha.denominator,
             beta.numerator, beta.denominator, N, self.batch_pairs)
            for lo in range(2, p_max + 1, self.block_size)
        ]
        logger.debug(f"Congruence {kind}: {len(tasks)} blocks up to p = {p_max}")
        return sum(_run_tasks(_count_block, tasks, threads))

    def s_b_total(self, alpha, beta, N: int, threads: Optional[int] = None) -> int:
        """|S_B(alpha, beta; N)| by congruence solving"""
        alpha, beta, N = _rational(alpha, "alpha"), _rational(beta, "beta"), _check_n(N)
        if alpha * beta <= 1:
            raise InvalidQuery(f"S_B needs alpha*beta > 1, got alpha={alpha}, beta={beta}")
        # p = 1: q = 0 and u in [max(2, ceil(beta)), N]
        p_one = max(0, N - max(2, ceil_frac(beta)) + 1)
        p_max = _p_max_minus(alpha, beta, N)
        return p_one + self._congruence_total("B", alpha, beta, N, p_max, self._threads(threads))

    def s_pm_total(self, alpha, beta, N: int, sign: int, threads: Optional[int] = None) -> int:
        """|S_+(alpha, beta; N)| (sign = +1) or |S_-(alpha, beta; N)| (sign = -1)"""
        alpha, N = _rational(alpha, "alpha"), _check_n(N)
        if sign not in (1, -1):
            raise InvalidQuery(f"sign must be +1 or -1, got {sign}")
        if beta is None:
            if sign == 1:
                raise InvalidQuery("S_+ needs a finite beta")
            return 0
        beta = _rational(beta, "beta")
        if sign == 1:
            p_max = N - 2
        else:
            if alpha * beta <= 1:
                raise InvalidQuery(f"S_- needs alpha*beta > 1, got alpha={alpha}, beta={beta}")
            p_max = _p_max_minus(alpha, beta, N)
        kind = "+" if sign == 1 else "-"
        return self._congruence_total(kind, alpha, beta, N, p_max, self._threads(threads))

    # ----------------------------------------------------------- operations

    def count_S_B_congruence(self, alpha, beta, N: int, threads: Optional[int] = None,
                             tolerance: Optional[float] = None) -> CensusResult:
        started = time.perf_counter()
        exact = self.s_b_total(alpha, beta, N, threads)
        alpha, beta = Fraction(alpha), Fraction(beta)
        main = main_term_S_B(alpha, beta, N)
        logger.info(f"S_B({alpha}, {beta}; {N}) = {exact} (main term {main:.1f})")
        extra = {
            "p_max": _p_max_minus(alpha, beta, N),
            "totient_prediction": self.s_b_totient_prediction(alpha, beta, N),
        }
        return self._result("B", alpha, beta, None, N, CONGRUENCE, exact, main, started, tolerance, extra)

    def count_S_pm_congruence(self, alpha, beta, N: int, sign: int, threads: Optional[int] = None,
                              tolerance: Optional[float] = None) -> CensusResult:
        started = time.perf_counter()
        exact = self.s_pm_total(alpha, beta, N, sign, threads)
        alpha, beta = Fraction(alpha), Fraction(beta)
        main = main_term_S_plus(alpha, beta, N) if sign == 1 else main_term_S_minus(alpha, beta, N)
        name = "S_plus" if sign == 1 else "S_minus"
        logger.info(f"{name}({alpha}, {beta}; {N}) = {exact} (main term {main:.1f})")
        result = self._result("E", alpha, beta, beta, N, CONGRUENCE, exact, main, started, tolerance,
                              {"set": name})
        if sign == 1:
            return result.model_copy(update={"beta1": ""})
        return result.model_copy(update={"beta2": ""})

    def theorem1_experiment(self, alpha, beta1, beta2, N: int, cross_check: bool = False,
                            threads: Optional[int] = None, tolerance: Optional[float] = None) -> CensusResult:
        """
        |S_-(alpha, beta1; N)| + |S_+(alpha, beta2; N)| against C(alpha, beta1, beta2) N^2

        With cross_check the matrix-filter word walk (which must agree
        exactly) and the exact-radius reduced count at M = N are attached.
        """
        started = time.perf_counter()
        alpha, beta2, N = _rational(alpha, "alpha"), _rational(beta2, "beta2"), _check_n(N)
        beta1 = _optional_rational(beta1, "beta1")
        if beta1 is not None and alpha * beta1 <= 1:
            raise InvalidQuery(f"alpha*beta1 must exceed 1, got alpha={alpha}, beta1={beta1}")
        s_minus = self.s_pm_total(alpha, beta1, N, -1, threads)
        s_plus = self.s_pm_total(alpha, beta2, N, 1, threads)
        exact = s_minus + s_plus
        constant = constant_E(alpha, beta1, beta2)
        main = constant * N * N
        extra = {
            "S_minus": s_minus,
            "S_plus": s_plus,
            "constant": constant,
            "constant_integral": integral_constant("E", alpha, beta1, beta2),
        }
        if cross_check:
            words = self.ecf_word_census(alpha, beta1, beta2, N, track=True, threads=threads)
            reduced = self.reduced_count("E", alpha, beta1, beta2, Fraction(N), threads=threads)
            extra.update({
                "word_dfs": words.total,
                "methods_agree": words.total == exact,
                "ledger": words.ledger(N),
                "reduced_count": reduced,
                "reduced_deviation": abs(reduced - exact) / exact if exact else 0.0,
            })
            if words.total != exact:
                logger.error(f"Word walk {words.total} != congruence {exact} at N = {N}")
        logger.info(f"E census ({alpha}, {beta1}, {beta2}; {N}) = {exact} (main {main:.1f})")
        return self._result("E", alpha, beta1, beta2, N, CONGRUENCE, exact, main, started, tolerance, extra)

    def ecf_word_census(self, alpha, beta1, beta2, N: int, entry_bound: Optional[int] = None,
                        track: bool = False, threads: Optional[int] = None) -> WordCensus:
        """
        ECF words of length >= 2 whose matrices lie in S_-(alpha, beta1; N) or S_+(alpha, beta2; N)

        Without alpha*beta1 > 1 the walk needs an entry bound on p'.
        """
        alpha, beta2, N = _rational(alpha, "alpha"), _rational(beta2, "beta2"), _check_n(N)
        beta1 = _optional_rational(beta1, "beta1")
        caps = [floor_frac(Fraction(N) / beta2)]
        if beta1 is not None:
            if alpha * beta1 > 1:
                caps.append(_p_max_minus(alpha, beta1, N))
            elif entry_bound is None:
                raise InvalidQuery("alpha*beta1 <= 1 needs an entry bound")
        p_cap = max(caps) if entry_bound is None else min(max(caps), entry_bound)
        roots = [(a, e) for a in range(2, N + 1, 2) for e in (1, -1)]
        tasks = [(bucket, alpha, beta1, beta2, N, p_cap, entry_bound, track)
                 for bucket in _split_roots(roots, self._threads(threads))]
        census = WordCensus()
        for part in _run_tasks(_ecf_walk, tasks, self._threads(threads)):
            census.merge(part)
        logger.debug(f"ECF word walk visited {census.nodes} nodes")
        return census

    def bcf_word_census(self, alpha, beta, N: int, entry_bound: Optional[int] = None,
                        track: bool = False, threads: Optional[int] = None) -> WordCensus:
        """BCF words of length >= 1 whose matrices lie in S_B(alpha, beta; N)"""
        alpha, beta, N = _rational(alpha, "alpha"), _rational(beta, "beta"), _check_n(N)
        if alpha * beta > 1:
            p_cap = _p_max_minus(alpha, beta, N)
            if entry_bound is not None:
                p_cap = min(p_cap, entry_bound)
        elif entry_bound is None:
            raise InvalidQuery("alpha*beta <= 1 needs an entry bound")
        else:
            p_cap = entry_bound
        roots = list(range(2, N + 1))
        tasks = [(bucket, alpha, beta, N, p_cap, entry_bound, track)
                 for bucket in _split_roots(roots, self._threads(threads))]
        census = WordCensus()
        for part in _run_tasks(_bcf_walk, tasks, self._threads(threads)):
            census.merge(part)
        logger.debug(f"BCF word walk visited {census.nodes} nodes")
        return census

    def count_word_dfs(self, query: CensusQuery, threads: Optional[int] = None,
                       tolerance: Optional[float] = None) -> CensusResult:
        """Matrix-filter word walk for the query's trace bound N = floor(M)"""
        started = time.perf_counter()
        N = query.N
        if query.kind == "E":
            census = self.ecf_word_census(query.alpha, query.beta1, query.beta2, N, track=True, threads=threads)
            main = constant_E(query.alpha, query.beta1, query.beta2) * N * N
            extra = {"S_minus": census.by_sign[-1], "S_plus": census.by_sign[1]}
        else:
            census = self.bcf_word_census(query.alpha, query.beta, N, track=True, threads=threads)
            main = main_term_S_B(query.alpha, query.beta, N)
            extra = {}
        extra["ledger"] = census.ledger(N)
        extra["nodes"] = census.nodes
        return self._result(query.kind, query.alpha, query.beta1, query.beta2, N, WORD_DFS,
                            census.total, main, started, tolerance, extra)

    def reduced_count(self, kind: str, alpha, beta1, beta2, radius_bound,
                      threads: Optional[int] = None) -> int:
        """
        Number of reduced omega >= alpha with conjugate filter and r(Omega~(omega)) <= M

        r <= M is decided exactly as Tr(Omega~) <= M + 1/M. No hypothesis
        on (alpha, beta) is imposed here.
        """
        kind = "E" if kind.upper() in ("E", "ECF") else "B"
        alpha, beta2 = _rational(alpha, "alpha"), _rational(beta2, "beta2")
        beta1 = _optional_rational(beta1, "beta1")
        if kind == "B" and beta1 is None:
            raise InvalidQuery("B-kind counts need a finite beta")
        M = Fraction(radius_bound)
        if M <= 1:
            raise InvalidQuery(f"radius bound must exceed 1, got {M}")
        threshold = M + 1 / M
        t_floor = floor_frac(threshold)
        # omega lies in (a - 1, a + 1) for ECF and (a - 1, a) for BCF
        if kind == "E":
            roots = [(a, e) for a in range(2, t_floor + 1, 2) for e in (1, -1) if a + 1 > alpha]
        else:
            roots = [(a, -1) for a in range(2, t_floor + 1) if a > alpha]
        if not roots:
            return 0
        threads = self._threads(threads)
        tasks = [(kind, bucket, alpha, beta1, beta2, threshold) for bucket in _split_roots(roots, threads)]
        return sum(_run_tasks(_reduced_walk, tasks, threads))

    def reduced_count_unpruned(self, kind: str, alpha, beta1, beta2, radius_bound,
                               max_digit: Optional[int] = None, max_length: Optional[int] = None) -> int:
        """
        reduced_count by plain enumeration, for checking the walk's pruning

        Every word with digits <= max_digit and length <= max_length is
        formed, kept when 2 < Tr(Omega~) <= M + 1/M, primitive and
        nondegenerate, and its periodic value is filtered exactly. The
        defaults exceed the digit and length reach of the pruned walk.

        Args:
            kind: "E" or "B"
            max_digit: largest digit a (default floor(M + 1/M) + 2)
            max_length: longest word (default floor(M + 1/M))

        Returns:
            Number of words that pass
        """
        kind = "E" if kind.upper() in ("E", "ECF") else "B"
        alpha, beta2 = _rational(alpha, "alpha"), _rational(beta2, "beta2")
        beta1 = _optional_rational(beta1, "beta1")
        if kind == "B" and beta1 is None:
            raise InvalidQuery("B-kind counts need a finite beta")
        M = Fraction(radius_bound)
        if M <= 1:
            raise InvalidQuery(f"radius bound must exceed 1, got {M}")
        threshold = M + 1 / M
        t_floor = floor_frac(threshold)
        max_digit = t_floor + 2 if max_digit is None else max_digit
        max_length = t_floor if max_length is None else max_length
        if kind == "E":
            alphabet = [(a, e) for a in range(2, max_digit + 1, 2) for e in (1, -1)]
        else:
            alphabet = list(range(2, max_digit + 1))
        cf_kind = ECF if kind == "E" else BCF

        count = 0
        for length in range(1, max_length + 1):
            for digits in itertools.product(alphabet, repeat=length):
                word = CfWord.of(cf_kind, digits)
                if word.is_degenerate() or not _is_primitive(digits):
                    continue
                sigma = word.matrix()
                effective = sigma.trace if sigma.det == 1 else sigma.trace ** 2 + 2
                if 2 < effective <= threshold and _passes_filters(kind, periodic_value(word), alpha, beta1, beta2):
                    count += 1
        logger.debug(f"Unpruned {kind} count at M = {M} (digits <= {max_digit}, length <= {max_length}): {count}")
        return count

    def count_reduced_word_dfs(self, query: CensusQuery, threads: Optional[int] = None,
                               tolerance: Optional[float] = None) -> CensusResult:
        started = time.perf_counter()
        M = query.radius_bound
        exact = self.reduced_count(query.kind, query.alpha, query.beta1, query.beta2, M, threads)
        m_float = float(M)
        if query.kind == "E":
            main = constant_E(query.alpha, query.beta1, query.beta2) * m_float ** 2
        else:
            main = constant_B(query.alpha, query.beta) * m_float ** 2
        extra = {"radius_bound": format_rational(M), "R": 2 * math.log(m_float)}
        logger.info(f"Reduced {query.kind}-census at M = {M}: {exact} (main {main:.1f})")
        return self._result(query.kind, query.alpha, query.beta1, query.beta2, query.N, REDUCED_DFS,
                            exact, main, started, tolerance, extra)

    # ------------------------------------------------------------- oracles

    def brute_force_S_pm(self, alpha, beta, N: int, sign: int, entry_bound: Optional[int] = None) -> int:
        """Scan (p, q, p') and solve for q' from det = 1, then test membership"""
        alpha, beta, N = _rational(alpha, "alpha"), _rational(beta, "beta"), _check_n(N)
        if sign == 1:
            p_max = N
        elif alpha * beta > 1:
            p_max = _p_max_minus(alpha, beta, N)
        elif entry_bound is None:
            raise InvalidQuery("alpha*beta <= 1 needs an entry bound")
        else:
            p_max = entry_bound
        if entry_bound is not None:
            p_max = min(p_max, entry_bound)
        count = 0
        for p in range(2, p_max + 1):
            for q in range(1, min(p - 1, floor_frac(p / alpha)) + 1):
                top = N - q if sign == 1 else N + q
                if entry_bound is not None:
                    top = min(top, entry_bound)
                for p_prime in range(max(p + 1, ceil_frac(beta * p)), top + 1):
                    numerator = p_prime * q - sign
                    if numerator % p:
                        continue
                    sigma = Mat2Z(p_prime, sign * p, numerator // p, sign * q)
                    if in_S_sign(sigma, alpha, beta, N, sign):
                        count += 1
        return count

    def brute_force_S_B(self, alpha, beta, N: int, entry_bound: Optional[int] = None) -> int:
        alpha, beta, N = _rational(alpha, "alpha"), _rational(beta, "beta"), _check_n(N)
        if alpha * beta > 1:
            p_max = _p_max_minus(alpha, beta, N)
            if entry_bound is not None:
                p_max = min(p_max, entry_bound)
        elif entry_bound is None:
            raise InvalidQuery("alpha*beta <= 1 needs an entry bound")
        else:
            p_max = entry_bound
        count = 0
        for p in range(1, p_max + 1):
            for q in range(0, floor_frac(p / alpha) + 1):
                top = N + q if entry_bound is None else min(N + q, entry_bound)
                for p_prime in range(ceil_frac(beta * p), top + 1):
                    numerator = p_prime * q + 1
                    if numerator % p:
                        continue
                    if in_S_B(Mat2Z(p_prime, -p, numerator // p, -q), alpha, beta, N):
                        count += 1
        return count

    # ------------------------------------------------------ S_B diagnostics

    def s_b_region(self, p: int, alpha, beta, N: int) -> Region:
        """Omega_p^-: beta p <= u <= N + v, 0 <= v <= p/alpha"""
        alpha, beta = Fraction(alpha), Fraction(beta)
        top = Fraction(p) / alpha
        return Region(POLYGON, Interval.closed(beta * p, N + top), Interval.closed(0, top),
                      lower=Line(Fraction(-N), 1))

    def kloosterman_identity(self, alpha, beta, N: int) -> Dict[str, int]:
        """
        Sum over p of the lattice count of uv = -1 mod p in Omega_p^-

        The p = 1 term also counts u = 1 (beta = 1) and v = 1 (alpha = 1),
        which S_B excludes; "corrected" swaps in the S_B value for p = 1.
        """
        alpha, beta, N = _rational(alpha, "alpha"), _rational(beta, "beta"), _check_n(N)
        p_max = _p_max_minus(alpha, beta, N)
        per_p = [count_pairs(p, -1, self.s_b_region(p, alpha, beta, N)) for p in range(1, p_max + 1)]
        p_one = max(0, N - max(2, ceil_frac(beta)) + 1)
        raw = sum(per_p)
        corrected = raw - (per_p[0] if per_p else 0) + p_one
        return {"raw": raw, "corrected": corrected, "congruence": self.s_b_total(alpha, beta, N, threads=1)}

    def s_b_totient_prediction(self, alpha, beta, N: int) -> float:
        """sum over p of phi(p)/p^2 * Area(Omega_p^-)"""
        alpha, beta = float(Fraction(alpha)), float(Fraction(beta))
        p_max = _p_max_minus(Fraction(alpha), Fraction(beta), N)
        if p_max < 1:
            return 0.0
        phi = totient_engine.phi(p_max)[1:p_max + 1].astype(np.float64)
        p = np.arange(1, p_max + 1, dtype=np.float64)
        full = (N - beta * p) * p / alpha + p * p / (2 * alpha * alpha)
        corner = 0.5 * np.maximum(N + p / alpha - beta * p, 0.0) ** 2
        area = np.where(beta * p <= N, full, corner)
        return math.fsum(phi * area / (p * p))

    # ------------------------------------------------------------ discriminants

    def enumerate_reduced_by_disc(self, disc: int, kind: str = "E") -> List[QuadraticIrrational]:
        """
        Every reduced (-B + sqrt(disc)) / (2A) of discriminant disc

        E-reduced means omega > 1 and conj in (-1, 1), which confines
        A to [1, disc] and B to [-2A - s, min(s - 2A, 2A - s - 1)], s = isqrt(disc).
        """
        flag = _REDUCED_FLAG.get(kind.upper())
        if flag is None:
            raise InvalidQuery(f"unknown reduction kind {kind!r}")
        s = math.isqrt(disc) if disc > 0 else 0
        if disc <= 0 or s * s == disc or disc % 4 not in (0, 1):
            raise BadDiscriminant(f"{disc} is not a positive nonsquare discriminant")
        found = []
        for A in range(1, disc + 1):
            for B in range(-2 * A - s, min(s - 2 * A, 2 * A - s - 1) + 1):
                if (B - disc) % 2 or (B * B - disc) % (4 * A):
                    continue
                C = (B * B - disc) // (4 * A)
                if math.gcd(math.gcd(A, B), C) != 1:
                    continue
                omega = qi_from_poly(A, B, C, 1)
                if flag in classify(omega):
                    found.append(omega)
        return found

    # -------------------------------------------------------------- queries

    def run_query(self, query: CensusQuery, methods: Sequence[str], threads: Optional[int] = None,
                  tolerance: Optional[float] = None) -> List[CensusResult]:
        """One result row per requested method"""
        rows = []
        for method in methods:
            if method == CONGRUENCE:
                if query.kind == "E":
                    rows.append(self.theorem1_experiment(query.alpha, query.beta1, query.beta2, query.N,
                                                         threads=threads, tolerance=tolerance))
                else:
                    rows.append(self.count_S_B_congruence(query.alpha, query.beta, query.N, threads, tolerance))
            elif method == WORD_DFS:
                rows.append(self.count_word_dfs(query, threads, tolerance))
            elif method == REDUCED_DFS:
                rows.append(self.count_reduced_word_dfs(query, threads, tolerance))
            elif method == BRUTEFORCE:
                rows.append(self._bruteforce_row(query, tolerance))
            else:
                raise InvalidQuery(f"unknown census method {method!r}")
        return rows

    def _bruteforce_row(self, query: CensusQuery, tolerance: Optional[float]) -> CensusResult:
        started = time.perf_counter()
        N = query.N
        if query.kind == "E":
            minus = 0 if query.beta1 is None else self.brute_force_S_pm(query.alpha, query.beta1, N, -1)
            exact = minus + self.brute_force_S_pm(query.alpha, query.beta2, N, 1)
            main = constant_E(query.alpha, query.beta1, query.beta2) * N * N
        else:
            exact = self.brute_force_S_B(query.alpha, query.beta, N)
            main = main_term_S_B(query.alpha, query.beta, N)
        return self._result(query.kind, query.alpha, query.beta1, query.beta2, N, BRUTEFORCE,
                            exact, main, started, tolerance, {})


# Global instance
census_engine = CensusEngine()


def count_S_B_congruence(alpha, beta, N: int) -> CensusResult:
    return census_engine.count_S_B_congruence(alpha, beta, N)


def count_S_pm_congruence(alpha, beta, N: int, sign: int) -> CensusResult:
    return census_engine.count_S_pm_congruence(alpha, beta, N, sign)


def count_reduced_word_dfs(query: CensusQuery) -> CensusResult:
    return census_engine.count_reduced_word_dfs(query)


def theorem1_experiment(alpha, beta1, beta2, N: int, cross_check: bool = False) -> CensusResult:
    return census_engine.theorem1_experiment(alpha, beta1, beta2, N, cross_check)


def enumerate_reduced_by_disc(disc: int, kind: str = "E") -> List[QuadraticIrrational]:
    return census_engine.enumerate_reduced_by_disc(disc, kind)
