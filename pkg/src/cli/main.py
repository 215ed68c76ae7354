"""
Command-line front end for ECFCensus
Subcommands expand | classify | census | verify | totient | kloosterman | pell
writing CSV or versioned JSON rows
"""
import argparse
import logging
import os
import sys
from typing import Any, Dict, List, Optional, Sequence

# Add the project root and src directory to the Python path
project_root = os.path.join(os.path.dirname(__file__), '..', '..')
src_dir = os.path.join(project_root, 'src')
sys.path.insert(0, project_root)
sys.path.insert(0, src_dir)

from pydantic import ValidationError

from config.settings import settings
from config.logging_config import setup_logging
from core.census import BRUTEFORCE, CONGRUENCE, REDUCED_DFS, WORD_DFS, census_engine
from core.cf_shifts import expand, rho_length
from core.errors import ECFCensusError, NotReduced
from core.kloosterman_check import Region, main_term_deviation, verify_random_primes
from core.pell_theta import fundamental_eps, pell_oracle, stabilizer_from_unit
from core.qi_core import B_REDUCED, E_REDUCED, RCF_REDUCED, classify, qi_conjugate, qi_to_float
from core.suites import FULL, QUICK, verification_suites
from core.totient import totient_engine
from models.census import CensusQuery, ExperimentConfig
from models.report import CheckRow
from models.words import KINDS
from utils.output import summary_counts, write_rows
from utils.parsing import parse_qi_spec

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2

METHOD_CHOICES = {
    CONGRUENCE: [CONGRUENCE],
    WORD_DFS: [WORD_DFS],
    REDUCED_DFS: [REDUCED_DFS],
    BRUTEFORCE: [BRUTEFORCE],
    "both": [CONGRUENCE, WORD_DFS],
    "all": [CONGRUENCE, WORD_DFS, REDUCED_DFS, BRUTEFORCE],
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--format', choices=['csv', 'json'], default='csv')
    common.add_argument('--out', help='write rows to this file instead of stdout')
    common.add_argument('--threads', type=int, default=settings.default_threads)
    common.add_argument('--check', action='store_true', help='exit 1 when a row fails its tolerance')
    common.add_argument('--tolerance', type=float, help='override the relative tolerance')

    parser = argparse.ArgumentParser(
        prog="ecfcensus",
        description="Even and backward continued fractions: expansions, censuses and verification suites",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    expand_parser = subparsers.add_parser("expand", parents=[common], help="expansion of a quadratic irrational")
    expand_parser.add_argument('spec', help='"A,B,C,sign" for a root of AX^2+BX+C')
    expand_parser.add_argument('kind', nargs='?', default='ecf', type=str.upper, choices=list(KINDS))

    classify_parser = subparsers.add_parser("classify", parents=[common], help="reduction flags of quadratic irrationals")
    classify_parser.add_argument('specs', nargs='+')

    census_parser = subparsers.add_parser("census", parents=[common], help="counting experiments")
    census_parser.add_argument('--kind', choices=['E', 'B'], type=str.upper, default='E')
    census_parser.add_argument('--alpha', default='1')
    census_parser.add_argument('--beta', help='beta of a B census (alias of --beta1)')
    census_parser.add_argument('--beta1', help='beta1 of an E census, "inf" for no bound')
    census_parser.add_argument('--beta2', default='1')
    bound = census_parser.add_mutually_exclusive_group(required=True)
    bound.add_argument('--N', help='trace bound')
    bound.add_argument('--M', help='spectral-radius bound (rational)')
    census_parser.add_argument('--methods', choices=list(METHOD_CHOICES), default=CONGRUENCE)

    verify_parser = subparsers.add_parser("verify", parents=[common], help="property and oracle suites")
    verify_parser.add_argument('--suite', choices=verification_suites.names + ['all'], default='all')
    verify_parser.add_argument('--scale', choices=[QUICK, FULL], default=QUICK)

    totient_parser = subparsers.add_parser("totient", parents=[common], help="totient sums against main terms")
    totient_parser.add_argument('--N', type=int, required=True)
    totient_parser.add_argument('--theta', default='2')
    totient_parser.add_argument('--identities', action='store_true', help='also check the exact identities')

    kloosterman_parser = subparsers.add_parser("kloosterman", parents=[common], help="uv = h mod q lattice counts")
    kloosterman_parser.add_argument('--q', type=int, help='single modulus; without it run the random-prime check')
    kloosterman_parser.add_argument('--h', type=int, default=1)
    kloosterman_parser.add_argument('--box', type=int, nargs=4, metavar=('X0', 'X1', 'Y0', 'Y1'),
                                    help='rectangle [X0, X1) x [Y0, Y1); defaults to [0, q)^2')
    kloosterman_parser.add_argument('--count', type=int, default=50)
    kloosterman_parser.add_argument('--lo', type=int, default=10 ** 3)
    kloosterman_parser.add_argument('--hi', type=int, default=10 ** 5)
    kloosterman_parser.add_argument('--seed', type=int, default=2)

    pell_parser = subparsers.add_parser("pell", parents=[common], help="Pell units from ECF periods and oracles")
    target = pell_parser.add_mutually_exclusive_group(required=True)
    target.add_argument('--disc', type=int, help='fundamental units of t^2 - D u^2 = +-1')
    target.add_argument('--omega', help='"A,B,C,sign" of an E-reduced quadratic irrational')

    return parser


def build_config(args: argparse.Namespace) -> ExperimentConfig:
    """Collect command parameters into a validated ExperimentConfig"""
    skip = {"command", "format", "out", "threads", "check", "tolerance"}
    parameters = {key: value for key, value in vars(args).items() if key not in skip}
    return ExperimentConfig(
        command=args.command,
        parameters=parameters,
        output_path=args.out,
        format=args.format,
        threads=args.threads,
        tolerance_override=args.tolerance,
        check=args.check,
    )


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------

def cmd_expand(config: ExperimentConfig) -> List[Dict[str, Any]]:
    omega = parse_qi_spec(config.parameters["spec"])
    kind = config.parameters["kind"]
    expansion = expand(omega, kind)
    row = {
        "spec": omega.spec(),
        "kind": kind,
        "value": qi_to_float(omega),
        "conjugate": qi_to_float(qi_conjugate(omega)),
        "discriminant": omega.discriminant,
        "classification": ";".join(sorted(classify(omega))),
        "preperiod": str(expansion.preperiod),
        "period": str(expansion.period),
        "purely_periodic": expansion.is_purely_periodic,
        "rho": None,
        "rho_squared": None,
    }
    try:
        length = rho_length(omega, kind)
        row.update(rho=length.rho, rho_squared=length.rho_squared)
    except NotReduced:
        logger.debug(f"{omega.spec()} is not {kind}-reduced; lengths omitted")
    return [row]


def cmd_classify(config: ExperimentConfig) -> List[Dict[str, Any]]:
    rows = []
    for spec in config.parameters["specs"]:
        omega = parse_qi_spec(spec)
        flags = classify(omega)
        rows.append({
            "spec": omega.spec(),
            "value": qi_to_float(omega),
            "conjugate": qi_to_float(qi_conjugate(omega)),
            "discriminant": omega.discriminant,
            "E_reduced": E_REDUCED in flags,
            "B_reduced": B_REDUCED in flags,
            "RCF_reduced": RCF_REDUCED in flags,
        })
    return rows


def census_query(parameters: Dict[str, Any]) -> CensusQuery:
    kind = parameters["kind"]
    if kind == "B":
        beta1 = parameters.get("beta") or parameters.get("beta1") or "1"
    else:
        beta1 = parameters.get("beta1") or parameters.get("beta") or "1"
    radius = parameters.get("M") or parameters.get("N")
    return CensusQuery(kind=kind, alpha=parameters["alpha"], beta1=beta1,
                       beta2=parameters.get("beta2") or "1", radius_bound=radius)


def cmd_census(config: ExperimentConfig):
    query = census_query(config.parameters)
    methods = METHOD_CHOICES[config.parameters["methods"]]
    logger.info(f"Census {query.describe()} with methods {methods}")
    return census_engine.run_query(query, methods, threads=config.threads, tolerance=config.tolerance_override)


def cmd_verify(config: ExperimentConfig) -> List[CheckRow]:
    suite = config.parameters["suite"]
    scale = config.parameters["scale"]
    names = verification_suites.names if suite == "all" else [suite]
    rows = []
    for name in names:
        rows.extend(verification_suites.run(name, scale))
    return rows


def cmd_totient(config: ExperimentConfig) -> List[CheckRow]:
    N = config.parameters["N"]
    rows = totient_engine.verify(N, theta=config.parameters["theta"], calibration=config.tolerance_override)
    if config.parameters.get("identities") and N > settings.totient_exact_limit:
        rows.extend(totient_engine.identity_rows(settings.totient_exact_limit))
    return rows


def cmd_kloosterman(config: ExperimentConfig) -> List[Any]:
    parameters = config.parameters
    q = parameters.get("q")
    if q is None:
        return verify_random_primes(parameters["count"], parameters["lo"], parameters["hi"], parameters["seed"])
    x0, x1, y0, y1 = parameters.get("box") or (0, q, 0, q)
    result = main_term_deviation(q, parameters["h"], Region.rectangle(x0, x1, y0, y1))
    bound = settings.kloosterman_error_bound if config.tolerance_override is None else config.tolerance_override
    return [CheckRow(
        suite="kloosterman",
        label=f"q={q},h={result.h},box=[{x0},{x1})x[{y0},{y1})",
        exact=float(result.count),
        predicted=result.main,
        abs_error=result.normalized_error,
        tolerance=bound,
        passed=result.normalized_error <= bound,
    )]


def cmd_pell(config: ExperimentConfig) -> List[Dict[str, Any]]:
    parameters = config.parameters
    if parameters.get("disc") is not None:
        disc = parameters["disc"]
        result = pell_oracle(disc)
        return [
            {"disc": disc, "group": group, "t": unit.t, "u": unit.u, "norm": unit.norm, "method": result.method}
            for group, unit in (("F", result.fundamental), ("F_plus", result.fundamental_plus))
        ]
    omega = parse_qi_spec(parameters["omega"])
    unit = fundamental_eps(omega)
    oracle = pell_oracle(unit.delta)
    reference = oracle.fundamental if unit.norm == -1 else oracle.fundamental_plus
    sigma = stabilizer_from_unit(omega, unit)
    return [{
        "spec": omega.spec(),
        "delta": unit.delta,
        "t": unit.t,
        "u": unit.u,
        "norm": unit.norm,
        "stabilizer": str(sigma),
        "identity_mod_2": sigma.is_identity_mod2(),
        "oracle_t": reference.t,
        "oracle_u": reference.u,
        "oracle_method": oracle.method,
        "matches_oracle": (unit.t, unit.u) == (reference.t, reference.u),
    }]


COMMANDS = {
    "expand": cmd_expand,
    "classify": cmd_classify,
    "census": cmd_census,
    "verify": cmd_verify,
    "totient": cmd_totient,
    "kloosterman": cmd_kloosterman,
    "pell": cmd_pell,
}


def exit_status(config: ExperimentConfig, rows: Sequence[Any]) -> int:
    """
    1 when a gated check row failed, or with --check when any row that
    carries a pass flag failed; 0 otherwise
    """
    if any(isinstance(row, CheckRow) and row.failed for row in rows):
        return EXIT_FAILED
    if config.check:
        counts = summary_counts(list(rows))
        if counts["unchecked"]:
            logger.warning(f"{counts['unchecked']} rows are below the checked regime; pass flag left empty")
        if counts["failed"]:
            return EXIT_FAILED
    if config.command == "pell" and any(row.get("matches_oracle") is False for row in rows):
        return EXIT_FAILED
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INVALID

    setup_logging()
    try:
        config = build_config(args)
        rows = COMMANDS[config.command](config)
    except ECFCensusError as e:
        logger.error(f"{args.command}: {e}")
        return e.status_code
    except (ValidationError, ValueError) as e:
        logger.error(f"{args.command}: invalid input: {e}")
        return EXIT_INVALID

    write_rows(rows, config.format, config.output_path)
    status = exit_status(config, rows)
    if status != EXIT_OK:
        logger.error(f"{config.command}: {summary_counts(list(rows))['failed']} rows failed")
    return status


if __name__ == "__main__":
    sys.exit(main())
