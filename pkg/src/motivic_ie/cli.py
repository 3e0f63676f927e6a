"""Command-line interface for the motivic inclusion-exclusion toolkit."""

from __future__ import annotations

import argparse
import logging
import string
import sys
from collections.abc import Callable, Mapping
from fractions import Fraction
from pathlib import Path

import yaml

from motivic_ie import (
    __version__,
    checks,
    cohom,
    families,
    ffield,
    homology,
    incidence,
    motivic,
    poset,
    store,
    zerocycles,
)
from motivic_ie.config import OUTPUT_FORMATS, RunConfig, default_log_level, guard_from_env
from motivic_ie.errors import CostGuardError, InvalidInputError, MotivicIEError

logger = logging.getLogger(__name__)

EXIT_VERIFICATION_FAILED = MotivicIEError.exit_code
EXIT_INVALID_INPUT = InvalidInputError.exit_code
EXIT_COST_GUARD = CostGuardError.exit_code

ORACLES = ("squarefree", "configurations", "divisors", "colored", "colored-p1", "smooth-p1", "residual", "sweep")


def _exact(value: Fraction) -> int | Fraction:
    return value.numerator if value.denominator == 1 else value


def _load_poset(config: RunConfig) -> poset.FinitePoset:
    if config.poset is not None:
        return store.load_poset(config.poset)
    if config.family is not None:
        params = dict(config.family_params)
        if config.family == "random":
            params.setdefault("seed", config.seed)
        return families.build_family(config.family, params)
    raise InvalidInputError(f"{config.command} requires --poset or --family")


def _load_variety(config: RunConfig) -> motivic.CellularVariety:
    config.require("variety")
    return store.load_variety(config.variety)


def _alphabet(n: int) -> list[str]:
    if not 1 <= n <= len(string.ascii_lowercase):
        raise InvalidInputError(f"Alphabet size must be between 1 and 26, got {n}")
    return list(string.ascii_lowercase[:n])


def mobius(config: RunConfig) -> dict:
    """Mobius function by inversion, by interval topology, or both."""
    p = _load_poset(config)
    report: dict = {"elements": len(p), "method": config.method}
    if config.method == "inversion":
        report["mobius"] = incidence.mobius_by_inversion(p).table()
    elif config.method == "topological":
        report["mobius"] = incidence.mobius_topological(p).table()
    else:
        comparison = incidence.compare_mobius(p)
        report["mobius"] = comparison.inversion.table()
        report["disagreements"] = [list(pair) for pair in comparison.disagreements]
        report["passed"] = comparison.agree
    return report


def nerve_cmd(config: RunConfig) -> dict:
    """Chain counts, Betti numbers and Euler characteristics of the nerve."""
    p = _load_poset(config)
    config.guard.check_poset_size(len(p))
    chi, chi_reduced = poset.euler_characteristics(p)
    report = {
        "elements": len(p),
        "chain_counts": poset.chain_counts(p),
        "betti": homology.nerve_betti(p),
        "reduced_betti": homology.nerve_betti(p, reduced=True),
        "euler_characteristic": chi,
        "reduced_euler_characteristic": chi_reduced,
        "center": poset.find_center(p),
    }
    if p.base is not None:
        centers = poset.fiber_centers(p)
        euler = poset.fibered_euler(p)
        report["fibers"] = {
            "centers": centers.centers,
            "missing_centers": centers.missing,
            "euler": euler.per_fiber,
            "total": euler.total,
        }
    return report


def ss_rank(config: RunConfig) -> dict:
    """Rank spectral sequence pages and the lower-interval E_1 check."""
    p = _load_poset(config)
    pages = homology.spectral_sequence(homology.rank_filtration(p))
    e1 = homology.rank_e1_report(p)
    return {"spectral_sequence": pages.to_dict(), "e1_check": e1.to_dict(), "passed": e1.passed}


def ss_skeletal_compare(config: RunConfig) -> dict:
    """Compare skeletal E_1 with the Banerjee complex by antisymmetrization."""
    config.require("alphabet", "cutoff")
    letters = _alphabet(config.alphabet)
    e = zerocycles.skeletal_e1(letters, config.cutoff, config.guard)
    b = zerocycles.banerjee_complex(letters, config.cutoff, config.guard)
    report = zerocycles.asym(e, b)
    euler = zerocycles.skeletal_graded_euler(e)
    return {
        "alphabet": letters,
        "cutoff": config.cutoff,
        "skeletal_dimensions": e.term_dimensions(),
        "banerjee_dimensions": b.term_dimensions(),
        "comparison": report.to_dict(),
        "graded_euler": {"observed": euler.observed, "expected": euler.expected},
        "passed": report.passed and euler.passed,
    }


def _series_report(series: motivic.MotSeries, config: RunConfig) -> dict:
    report = {"series": series.to_dict()}
    if config.specialize_q is not None:
        report["specialized"] = [_exact(c) for c in series.specialize(config.specialize_q)]
    return report


def zeta(config: RunConfig) -> dict:
    """Kapranov zeta function of a cellular variety."""
    config.require("N")
    x = _load_variety(config)
    return {"variety": x.to_dict(), **_series_report(motivic.kapranov_zeta(x, config.N), config)}


def zeta_invert(config: RunConfig) -> dict:
    """Inverse zeta function, with composition sums for each coefficient."""
    config.require("N")
    x = _load_variety(config)
    inverse = motivic.invert(motivic.kapranov_zeta(x, config.N))
    agree = all(motivic.mu_terms_gamma(x, k) == inverse.coefficient(k) for k in range(1, config.N + 1))
    return {
        "variety": x.to_dict(),
        **_series_report(inverse, config),
        "configurations": _series_report(motivic.config_gf(x, config.N), config),
        "passed": agree,
    }


def stable_limit_cmd(config: RunConfig) -> dict:
    """Inverse zeta at t = L^-n; exact unless -N asks for a truncation."""
    config.require("n")
    x = _load_variety(config)
    if config.N is None:
        value = motivic.exact_stable_limit(x, config.n)
    else:
        value = motivic.stable_limit(x, config.n, config.N)
    report = {"variety": x.to_dict(), "n": config.n, "value": value.to_dict()}
    if config.specialize_q is not None:
        report["specialized"] = _exact(value.evaluate(config.specialize_q))
    return report


def stable_betti(config: RunConfig) -> dict:
    """Stable homology table from a cohomology table or a cellular variety."""
    if config.variety_cohomology is not None:
        config.require("dim")
        v = store.load_cohomology(config.variety_cohomology)
        dim_x = config.dim
    else:
        x = _load_variety(config)
        v = cohom.cellular_cohomology(x)
        dim_x = x.dim if config.dim is None else config.dim
    k_max = config.kmax if config.kmax is not None else v.total_dimension
    table = cohom.stable_homology_table(v, dim_x, k_max)
    report = {"dim": dim_x, **table.to_dict(), "weight_polynomial": str(table.weight_polynomial())}
    if all(w % 2 == 0 for _, w in v.dims):
        report["euler_polynomial"] = table.euler_polynomial()
    return report


def count(config: RunConfig) -> dict:
    """Exhaustive finite-field counts."""
    config.require("oracle", "q")
    q, guard, oracle = config.q, config.guard, config.oracle
    report: dict = {"oracle": oracle, "q": q}
    if oracle in ("squarefree", "configurations", "divisors"):
        config.require("d")
        report["d"] = config.d
        if oracle == "squarefree":
            report["count"] = ffield.count_squarefree_monic(q, config.d, guard)
        elif oracle == "configurations":
            report["count"] = ffield.count_configurations(q, config.d, guard=guard)
            report["count_p1"] = ffield.count_configurations(q, config.d, projective=True, guard=guard)
        else:
            report["count"] = ffield.count_effective_divisors(q, config.d, guard=guard)
            report["count_p1"] = ffield.count_effective_divisors(q, config.d, projective=True, guard=guard)
    elif oracle in ("colored", "colored-p1"):
        if not config.parts:
            raise InvalidInputError(f"Oracle {oracle} requires --parts")
        report["parts"] = list(config.parts)
        counter = ffield.count_colored_configs if oracle == "colored" else ffield.count_colored_configs_p1
        report["count"] = counter(q, config.parts, guard)
    elif oracle == "smooth-p1":
        config.require("d")
        report["d"] = config.d
        report["count"] = ffield.count_smooth_sections_p1(q, config.d, config.workers, guard)
    elif oracle == "residual":
        config.require("d", "k")
        result = ffield.truncated_ie_discriminant(q, config.d, config.k, config.workers, guard)
        report.update(result.to_dict())
    else:
        config.require("d")
        report.update(ffield.truncated_ie_sweep(q, config.d, config.workers, guard).to_dict())
    return report


def density(config: RunConfig) -> dict:
    """Smooth-section densities of binary forms against the stable value."""
    config.require("q", "dmax")
    result = ffield.density_report(config.q, config.dmax, workers=config.workers, guard=config.guard)
    return result.to_dict()


def check(config: RunConfig) -> dict:
    """Run one verification suite, or all of them."""
    config.require("suite")
    if config.suite == "all":
        results = checks.run_all(config.guard, config.strict)
    else:
        results = [checks.run_suite(config.suite, config.guard, config.strict, q=config.q, N=config.N)]
    return {
        "suites": [r.to_dict() for r in results],
        "passed": all(r.passed for r in results),
    }


COMMANDS: dict[str, Callable[[RunConfig], dict]] = {
    "mobius": mobius,
    "nerve": nerve_cmd,
    "ss-rank": ss_rank,
    "ss-skeletal-compare": ss_skeletal_compare,
    "zeta": zeta,
    "zeta-invert": zeta_invert,
    "stable-limit": stable_limit_cmd,
    "stable-betti": stable_betti,
    "count": count,
    "density": density,
    "check": check,
}


def run(config: RunConfig) -> dict:
    """Dispatch a command and wrap its report with the command and version."""
    try:
        command = COMMANDS[config.command]
    except KeyError:
        raise InvalidInputError(f"Unknown command: {config.command}") from None
    report = command(config)
    if not report:
        logger.warning("Command %s produced an empty report", config.command)
    return {"command": config.command, "version": __version__, **report}


def _parse_params(pairs: list[str] | None) -> dict:
    params = {}
    for pair in pairs or []:
        key, sep, value = pair.partition("=")
        if not sep or not key:
            raise InvalidInputError(f"Family parameter must be key=value, got {pair!r}")
        params[key] = yaml.safe_load(value)
    return params


def _parse_parts(text: str | None) -> tuple[int, ...]:
    if not text:
        return ()
    try:
        return tuple(int(a) for a in text.split(","))
    except ValueError as e:
        raise InvalidInputError(f"Parts must be comma-separated integers, got {text!r}") from e


def _render_table(report: Mapping, indent: int = 0) -> list[str]:
    lines = []
    pad = "  " * indent
    for key, value in report.items():
        if isinstance(value, Mapping) and value:
            lines.append(f"{pad}{key}:")
            lines.extend(_render_table(value, indent + 1))
        elif isinstance(value, list) and value and all(isinstance(v, Mapping) for v in value):
            lines.append(f"{pad}{key}:")
            for item in value:
                lines.append(f"{pad}  -")
                lines.extend(_render_table(item, indent + 2))
        else:
            lines.append(f"{pad}{key}: {value}")
    return lines


def render(report: Mapping, output_format: str) -> str:
    if output_format == "json":
        return store.dump_report(report)
    return "\n".join(_render_table(store.to_jsonable(report))) + "\n"


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Build a RunConfig from parsed arguments."""
    guard = guard_from_env(guard_bytes=args.guard_bytes, max_enumeration=args.max_enumeration)
    optional = {
        "output_format": args.format,
        "workers": args.workers,
    }
    return RunConfig(
        command=args.command,
        poset=Path(args.poset) if args.poset else None,
        variety=Path(args.variety) if args.variety else None,
        variety_cohomology=Path(args.variety_cohomology) if args.variety_cohomology else None,
        family=args.family,
        family_params=_parse_params(args.param),
        q=args.q,
        d=args.d,
        k=args.k,
        n=args.n,
        N=args.N,
        seed=args.seed,
        dmax=args.dmax,
        dim=args.dim,
        kmax=args.kmax,
        alphabet=args.alphabet,
        cutoff=args.cutoff,
        parts=_parse_parts(args.parts),
        method=getattr(args, "method", "both"),
        oracle=getattr(args, "oracle", None),
        suite=getattr(args, "suite", None),
        strict=getattr(args, "strict", False),
        specialize_q=args.specialize_q,
        output=Path(args.output) if args.output else None,
        guard=guard,
        **{k: v for k, v in optional.items() if v is not None},
    )


def _common_arguments() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    inputs = common.add_argument_group("inputs")
    inputs.add_argument("--poset", help="Poset file (YAML or JSON)")
    inputs.add_argument("--family", choices=sorted(families.FAMILIES), help="Named poset family")
    inputs.add_argument("--param", action="append", metavar="KEY=VALUE", help="Family parameter (repeatable)")
    inputs.add_argument("--variety", help="Cellular variety file")
    inputs.add_argument("--variety-cohomology", help="Cohomology table file")

    numbers = common.add_argument_group("parameters")
    numbers.add_argument("--q", type=int, help="Prime field size")
    numbers.add_argument("--d", type=int, help="Degree")
    numbers.add_argument("--k", type=int, help="Truncation level")
    numbers.add_argument("-n", type=int, help="Evaluate at t = L^-n")
    numbers.add_argument("-N", type=int, help="Series precision")
    numbers.add_argument("--seed", type=int, default=0, help="Seed for the random poset family")
    numbers.add_argument("--dmax", type=int, help="Largest degree")
    numbers.add_argument("--dim", type=int, help="Dimension of the variety")
    numbers.add_argument("--kmax", type=int, help="Largest rank in the stable table")
    numbers.add_argument("--alphabet", type=int, help="Alphabet size")
    numbers.add_argument("--cutoff", type=int, help="Multiset size cutoff")
    numbers.add_argument("--parts", help="Comma-separated colored-configuration parts")
    numbers.add_argument("--specialize-q", type=int, help="Also specialize L -> q")

    run_group = common.add_argument_group("run")
    run_group.add_argument("--format", choices=OUTPUT_FORMATS, help="Output format (default: json)")
    run_group.add_argument("--output", help="Write the report to this file")
    run_group.add_argument("--workers", type=int, help="Process pool size for enumeration")
    run_group.add_argument("--guard-bytes", type=int, help="Largest dense matrix footprint in bytes")
    run_group.add_argument("--max-enumeration", type=int, help="Largest finite-field enumeration")
    run_group.add_argument("-v", "--verbose", action="count", default=0, help="More logging (-vv for debug)")
    return common


def create_parser() -> argparse.ArgumentParser:
    """Create the argument parser."""
    parser = argparse.ArgumentParser(
        prog="motivic-ie",
        description="Exact poset topology, motivic series and finite-field oracles",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = _common_arguments()
    subparsers = parser.add_subparsers(dest="command", help="Commands")

    mobius_parser = subparsers.add_parser("mobius", parents=[common], help="Mobius function of a poset")
    mobius_parser.add_argument("--method", choices=["inversion", "topological", "both"], default="both")

    subparsers.add_parser("nerve", parents=[common], help="Homology of the nerve of a poset")
    subparsers.add_parser("ss-rank", parents=[common], help="Rank spectral sequence of a ranked poset")
    subparsers.add_parser(
        "ss-skeletal-compare", parents=[common], help="Skeletal E_1 against the Banerjee complex"
    )
    subparsers.add_parser("zeta", parents=[common], help="Kapranov zeta function")
    subparsers.add_parser("zeta-invert", parents=[common], help="Inverse Kapranov zeta function")
    subparsers.add_parser("stable-limit", parents=[common], help="Inverse zeta at t = L^-n")
    subparsers.add_parser("stable-betti", parents=[common], help="Stable homology table")

    count_parser = subparsers.add_parser("count", parents=[common], help="Exhaustive finite-field counts")
    count_parser.add_argument("--oracle", choices=ORACLES, required=True)

    subparsers.add_parser("density", parents=[common], help="Smooth-section densities on P^1")

    check_parser = subparsers.add_parser("check", parents=[common], help="Run a verification suite")
    check_parser.add_argument("suite", choices=[*checks.SUITES, "all"], help="Suite name or 'all'")
    check_parser.add_argument("--strict", action="store_true", help="Fail with an error on the first failed suite")

    return parser


def _configure_logging(verbose: int) -> None:
    if verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = getattr(logging, default_log_level(), logging.WARNING)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def main(args: list[str] | None = None) -> None:
    """Main entry point for CLI."""
    parser = create_parser()
    parsed_args = parser.parse_args(args)

    if not parsed_args.command:
        parser.print_help()
        sys.exit(1)

    _configure_logging(parsed_args.verbose)

    try:
        config = config_from_args(parsed_args)
        report = run(config)
        if config.output is not None:
            store.save_report(report, config.output)
        else:
            sys.stdout.write(render(report, config.output_format))
    except MotivicIEError as e:
        print(f"Error: {e}", file=sys.stderr)
        sys.exit(e.exit_code)

    if report.get("passed") is False:
        sys.exit(EXIT_VERIFICATION_FAILED)


if __name__ == "__main__":
    main()
