"""
Kloosterman Check Module for ECFCensus
Exact counts of lattice points (u, v) with uv = h mod q in rectangles and
regions under lines, compared with the equidistribution main term
"""
import logging
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Optional, Tuple

from config.settings import settings
from core.errors import InvalidRegion, NotCoprime
from models.report import CheckRow
from utils.modular import ceil_frac, count_progression_int, floor_frac

logger = logging.getLogger(__name__)

RECTANGLE = "rectangle"
UNDER_LINE = "under_line"
POLYGON = "polygon"


@dataclass(frozen=True)
class Interval:
    """Rational interval with independent endpoint closure"""

    lo: Fraction
    hi: Fraction
    lo_closed: bool = True
    hi_closed: bool = False

    @classmethod
    def half_open(cls, lo, hi) -> "Interval":
        return cls(Fraction(lo), Fraction(hi), True, False)

    @classmethod
    def closed(cls, lo, hi) -> "Interval":
        return cls(Fraction(lo), Fraction(hi), True, True)

    @property
    def length(self) -> Fraction:
        return max(self.hi - self.lo, Fraction(0))

    def integer_bounds(self) -> Tuple[int, int]:
        """First and last integer in the interval (empty when first > last)"""
        first = ceil_frac(self.lo)
        if not self.lo_closed and first == self.lo:
            first += 1
        last = floor_frac(self.hi)
        if not self.hi_closed and last == self.hi:
            last -= 1
        return first, last

    def shifted(self, delta) -> "Interval":
        return Interval(self.lo + delta, self.hi + delta, self.lo_closed, self.hi_closed)


@dataclass(frozen=True)
class Line:
    """y = c + slope * x with slope = +-1"""

    c: Fraction
    slope: int

    def at(self, x) -> Fraction:
        return self.c + self.slope * Fraction(x)


@dataclass(frozen=True)
class Region:
    """
    Lattice region {(u, v): u in x, v in y, lower(u) <= v <= upper(u)}

    rectangle:  x and y intervals only
    under_line: 0 <= v <= f(u) = c +- u for u in x
    polygon:    general strip bounded by the intervals and up to two lines
    """

    kind: str
    x: Interval
    y: Interval
    upper: Optional[Line] = None
    lower: Optional[Line] = None

    @classmethod
    def rectangle(cls, x0, x1, y0, y1) -> "Region":
        return cls(RECTANGLE, Interval.half_open(x0, x1), Interval.half_open(y0, y1))

    @classmethod
    def under_line(cls, c, slope: int, x0, x1) -> "Region":
        if slope not in (1, -1):
            raise InvalidRegion(f"line slope must be +-1, got {slope}")
        line = Line(Fraction(c), slope)
        top = max(line.at(x0), line.at(x1))
        return cls(UNDER_LINE, Interval.half_open(x0, x1), Interval.closed(0, max(top, Fraction(0))), upper=line)

    def y_bounds(self, u: int) -> Tuple[int, int]:
        first, last = self.y.integer_bounds()
        if self.upper is not None:
            last = min(last, floor_frac(self.upper.at(u)))
        if self.lower is not None:
            first = max(first, ceil_frac(self.lower.at(u)))
        return first, last

    def columns(self) -> Iterator[Tuple[int, int, int]]:
        """(u, v_first, v_last) for every integer column of the region"""
        first, last = self.x.integer_bounds()
        for u in range(first, last + 1):
            v_first, v_last = self.y_bounds(u)
            if v_first <= v_last:
                yield u, v_first, v_last

    def area(self) -> Fraction:
        """Area of the rectangle or of the region under the line"""
        if self.kind == RECTANGLE:
            return self.x.length * self.y.length
        if self.kind == UNDER_LINE:
            lo, hi = self.x.lo, self.x.hi
            return self.upper.c * (hi - lo) + self.upper.slope * (hi * hi - lo * lo) / 2
        raise InvalidRegion("area is defined for rectangles and regions under a line")

    def translated(self, dx, dy=0) -> "Region":
        dx, dy = Fraction(dx), Fraction(dy)
        shift_line = lambda line: None if line is None else Line(line.c + dy - line.slope * dx, line.slope)
        return Region(self.kind, self.x.shifted(dx), self.y.shifted(dy), shift_line(self.upper), shift_line(self.lower))

    def validate_for(self, q: int) -> None:
        """Line regions need f(I) inside [0, q] and |I| <= q"""
        if self.kind != UNDER_LINE:
            return
        if self.x.length > q:
            raise InvalidRegion(f"interval length {self.x.length} exceeds q = {q}")
        for end in (self.x.lo, self.x.hi):
            value = self.upper.at(end)
            if value < 0 or value > q:
                raise InvalidRegion(f"f({end}) = {value} is outside [0, {q}]")


@dataclass(frozen=True)
class DeviationResult:
    q: int
    h: int
    count: int
    main: float
    normalized_error: float


def count_pairs(q: int, h: int, region: Region) -> int:
    """
    Number of lattice points (u, v) in the region with uv = h mod q

    For each column u with g = gcd(u, q) the congruence is solvable iff
    g | h, and then v runs over one class mod q/g.
    """
    if q < 1:
        raise ValueError(f"modulus must be >= 1, got {q}")
    h %= q
    total = 0
    for u, v_first, v_last in region.columns():
        g = math.gcd(u, q)
        if h % g:
            continue
        modulus = q // g
        residue = (h // g) * pow((u // g) % modulus, -1, modulus) % modulus if modulus > 1 else 0
        total += count_progression_int(v_first, v_last, residue, modulus)
    return total


def count_pairs_naive(q: int, h: int, region: Region) -> int:
    """Double loop over the region"""
    h %= q
    return sum(
        1
        for u, v_first, v_last in region.columns()
        for v in range(v_first, v_last + 1)
        if (u * v - h) % q == 0
    )


def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def main_term(q: int, region: Region) -> float:
    return euler_phi(q) / (q * q) * float(region.area())


def main_term_deviation(q: int, h: int, region: Region) -> DeviationResult:
    """(count, phi(q)/q^2 * area, |count - main| / q^exponent)"""
    if math.gcd(h, q) != 1:
        raise NotCoprime(f"gcd({h}, {q}) != 1")
    region.validate_for(q)
    count = count_pairs(q, h, region)
    main = main_term(q, region)
    normalized = abs(count - main) / q ** settings.kloosterman_exponent
    return DeviationResult(q=q, h=h, count=count, main=main, normalized_error=normalized)


def random_region(rng: random.Random, q: int) -> Region:
    """Random rectangle or line region sized on the scale of q"""
    if rng.random() < 0.5:
        x0 = rng.randint(-q, q)
        y0 = rng.randint(-q, q)
        return Region.rectangle(x0, x0 + rng.randint(0, q), y0, y0 + rng.randint(0, q))
    x0 = rng.randint(-q, q)
    length = rng.randint(0, q)
    slope = rng.choice((1, -1))
    return Region.under_line(rng.randint(-q, 2 * q), slope, x0, x0 + length)


def random_primes(rng: random.Random, count: int, lo: int, hi: int) -> List[int]:
    primes = set()
    while len(primes) < count:
        candidate = rng.randint(lo, hi)
        if candidate > 1 and euler_phi(candidate) == candidate - 1:
            primes.add(candidate)
    return sorted(primes)


def verify_fast_path(max_q: Optional[int] = None, regions_per_q: int = 20, seed: int = 0) -> List[CheckRow]:
    """count_pairs against the double loop for q up to the naive limit"""
    max_q = settings.kloosterman_naive_limit if max_q is None else max_q
    rng = random.Random(seed)
    mismatches = []
    checked = 0
    for q in range(1, max_q + 1):
        for _ in range(regions_per_q):
            region = random_region(rng, q)
            h = rng.randint(-q, q)
            fast, naive = count_pairs(q, h, region), count_pairs_naive(q, h, region)
            checked += 1
            if fast != naive:
                mismatches.append({"q": q, "h": h, "fast": fast, "naive": naive, "region": repr(region)})
    return [CheckRow(
        suite="kloosterman",
        label="fast_path_vs_naive",
        exact=float(checked - len(mismatches)),
        predicted=float(checked),
        passed=not mismatches,
        payload={"mismatches": mismatches[:5]},
    )]


def verify_translation(q_values: List[int], seed: int = 1) -> List[CheckRow]:
    """Shifting a region by (q, 0) keeps the count"""
    rng = random.Random(seed)
    failures = []
    for q in q_values:
        region = random_region(rng, q)
        h = rng.randint(0, q - 1)
        if count_pairs(q, h, region) != count_pairs(q, h, region.translated(q)):
            failures.append({"q": q, "h": h})
    return [CheckRow(suite="kloosterman", label="translation_invariance",
                     passed=not failures, payload={"failures": failures[:5]})]


def verify_random_primes(count: int = 50, lo: int = 10 ** 3, hi: int = 10 ** 5, seed: int = 2) -> List[CheckRow]:
    """Normalized error on full-period squares for random primes with h = +-1"""
    rng = random.Random(seed)
    bound = settings.kloosterman_error_bound
    rows = []
    for q in random_primes(rng, count, lo, hi):
        h = rng.choice((1, -1))
        result = main_term_deviation(q, h, Region.rectangle(0, q, 0, q))
        rows.append(CheckRow(
            suite="kloosterman",
            label=f"q={q}",
            exact=float(result.count),
            predicted=result.main,
            abs_error=abs(result.count - result.main),
            tolerance=bound,
            passed=result.normalized_error <= bound,
            payload={"q": q, "h": h, "normalized_error": result.normalized_error},
        ))
    logger.info(f"kloosterman random primes: {sum(r.passed for r in rows)}/{len(rows)} within {bound}")
    return rows
