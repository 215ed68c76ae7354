#!/usr/bin/env python3
"""
Acceptance Script for ECFCensus
Runs the desk-scale censuses and the full-scale verification suites
"""
import argparse
import math
import sys
import time
from pathlib import Path

# Add project root and src to path for imports
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))
sys.path.insert(0, str(project_root / "src"))

from config.logging_config import setup_logging
from core.census import census_engine
from core.kloosterman_check import verify_random_primes
from core.suites import FULL, verification_suites
from utils.output import write_rows

# Setup logging
logger = setup_logging()

ZETA2 = math.pi ** 2 / 6


def _within(label: str, exact: int, predicted: float, band: float) -> bool:
    deviation = abs(exact - predicted) / predicted
    logger.info(f"{label}: exact {exact}, predicted {predicted:.1f}, deviation {deviation:.4f} (band {band})")
    return deviation <= band


def census_s_b(out_dir=None):
    """S_B(2, 1; 10^4) within 5% of N^2 log 2 / (2 zeta(2)) in at most 60 s"""
    N = 10 ** 4
    started = time.perf_counter()
    result = census_engine.count_S_B_congruence(2, 1, N)
    elapsed = time.perf_counter() - started
    _save([result], "census_s_b", out_dir)
    logger.info(f"S_B census took {elapsed:.1f} s")
    return _within("S_B(2,1;1e4)", result.exact_count, N * N * math.log(2) / (2 * ZETA2), 0.05) and elapsed <= 60


def census_e(out_dir=None):
    """E census at (2, 1, 1): 12% at N = 2000 and 6% at N = 10^4"""
    rows = []
    ok = True
    for N, band in ((2000, 0.12), (10 ** 4, 0.06)):
        result = census_engine.theorem1_experiment(2, 1, 1, N)
        rows.append(result)
        ok &= _within(f"E(2,1,1;{N})", result.exact_count, N * N * math.log(3) / math.pi ** 2, band)
    _save(rows, "census_e", out_dir)
    return ok


def census_infinite_beta1(out_dir=None):
    """E census with beta1 = inf: 10% of N^2 log 2 / pi^2 at N = 5000"""
    N = 5000
    result = census_engine.theorem1_experiment(1, None, 1, N)
    _save([result], "census_infinite_beta1", out_dir)
    return _within(f"E(1,inf,1;{N})", result.exact_count, N * N * math.log(2) / math.pi ** 2, 0.10)


def _suite(name):
    def run(out_dir=None):
        rows = verification_suites.run(name, FULL)
        _save(rows, f"suite_{name}", out_dir)
        failed = [row.label for row in rows if row.failed]
        for label in failed:
            logger.error(f"  failed: {label}")
        return not failed
    run.__doc__ = f"{name} suite at full scale"
    return run


def kloosterman_primes(out_dir=None):
    """50 random primes in [10^3, 10^5], normalized error <= 10"""
    rows = verify_random_primes(50, 10 ** 3, 10 ** 5)
    _save(rows, "kloosterman_primes", out_dir)
    return not any(row.failed for row in rows)


def _save(rows, name, out_dir):
    if out_dir:
        write_rows(rows, "csv", str(Path(out_dir) / f"{name}.csv"))


CRITERIA = [
    ("1", "S_B census", census_s_b),
    ("2", "E census", census_e),
    ("3", "E census, infinite beta1", census_infinite_beta1),
    ("4", "Oracle equivalence", _suite("oracle")),
    ("5", "Word/matrix bijection", _suite("bijection")),
    ("6", "Galois dual", _suite("galois")),
    ("7", "Reduced sets", _suite("reduced")),
    ("8", "Pell units", _suite("pell")),
    ("9", "Totient sums", _suite("totient")),
    ("10", "Kloosterman desk check", kloosterman_primes),
    ("11", "Radius and trace", _suite("radius_trace")),
]


def main():
    """Main acceptance function"""
    parser = argparse.ArgumentParser(description="ECFCensus desk-scale acceptance run")
    parser.add_argument('--only', nargs='+', help='criterion numbers to run')
    parser.add_argument('--out', help='directory for per-criterion CSV files')
    args = parser.parse_args()

    selected = [c for c in CRITERIA if not args.only or c[0] in args.only]
    logger.info(f"Running {len(selected)} acceptance criteria...")

    passed = 0
    for number, title, check in selected:
        started = time.perf_counter()
        logger.info(f"[{number}] {title}: {check.__doc__}")
        if check(args.out):
            passed += 1
            logger.info(f"✓ [{number}] {title} ({time.perf_counter() - started:.1f} s)")
        else:
            logger.error(f"✗ [{number}] {title} ({time.perf_counter() - started:.1f} s)")

    logger.info(f"Acceptance complete: {passed}/{len(selected)} criteria passed")
    return passed == len(selected)


if __name__ == "__main__":
    try:
        success = main()
        sys.exit(0 if success else 1)
    except KeyboardInterrupt:
        logger.info("Acceptance run interrupted by user")
        sys.exit(1)
