"""
Command-Line Interface for zerolab

This module provides the batch experiment runner. Every subcommand builds a
Report from the library modules and writes it as CSV or JSON; runs are fully
determined by their configuration, so reruns are byte-identical.
"""

import argparse
import logging
import math
import os
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence

from dotenv import dotenv_values
from pydantic import ValidationError

from zerolab.arith import sieve_primes
from zerolab.configuration_service import get_configuration
from zerolab.data_loaders import DataLoaderFactory
from zerolab.errors import InvalidInputError, NumericalError, ResourceLimitError, ZerolabError
from zerolab.family import (
    FamilyModel,
    averaged_density,
    divisor_lattice,
    lambda2,
    nonvanishing_bounds,
    order_bounds,
    second_order_shift,
    sieve_round_trip,
    synthetic_family,
)
from zerolab.kernels import indistinguishability_report, kernel, pair, spatial_pair
from zerolab.lfun import (
    AutoRep,
    ZerosRecord,
    central_order,
    density_from_zeros,
    explicit_formula_density,
    multiplicity,
    pair_correlation_from_zeros,
    required_horizon,
    synthetic_rep,
)
from zerolab.logger import RichLogger, setup_logging
from zerolab.models import AngleScaling, GroupName, KernelLabel, OutputFormat, RunConfig, Statistic, ThetaMeasure
from zerolab.monte_carlo import ensemble_target, monte_carlo
from zerolab.output_formatter import OutputFormatter, Report
from zerolab.progress_tracker import ExperimentPhase, ProgressTracker
from zerolab.rmt import HaarDrawConfig, draw_generator
from zerolab.testfn import parse_test_fn, verify_pair

logger = logging.getLogger("zerolab.cli")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NUMERIC = 2

# flags that take no value when given in a config file
BOOLEAN_FLAGS = {"quiet", "spatial"}
# options shared by every subcommand, the rest goes to RunConfig.options
COMMON_OPTIONS = {"config", "seed", "threads", "out", "out_path", "quiet", "log_file", "command"}
# the result each subcommand checks, shown in --help
EXERCISES = {
    "rmt-density": "the one-level density of Haar eigenangles converging to the symmetry kernel of the group",
    "rmt-paircorr": "the pair correlation of U(N) eigenangles converging to the GUE sine kernel",
    "kernel-pair": "the Fourier transforms of the five symmetry densities",
    "indist-check": "the orthogonal densities being indistinguishable for support inside (-1, 1)",
    "ef-density": "the explicit formula turning Satake parameters into a one-level density",
    "density-from-zeros": "the one-level density as a sum over normalized zeros",
    "second-moment": "the prime-square sum behind the phi(0)/2 shift of the orthogonal density",
    "sieve-check": "the old/new-form sieve lambda2 * tau2 = e and the oldform multiplicity formula",
    "nonvanish": "the bound 1/T + 1/2 on the average order of central vanishing",
    "primes": "the prime tables behind every explicit-formula sum",
    "verify-testfn": "the Fourier pair identities phi_hat(0) = int phi and phi(0) = int phi_hat",
    "family-density": "the family average converging to the orthogonal value phi_hat(0) + phi(0)/2",
}


class ZerolabArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors with exit code 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _common_parser() -> argparse.ArgumentParser:
    config = get_configuration()
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="Config file of 'key = value' lines; command-line flags take precedence")
    common.add_argument("--seed", type=int, default=config.get_rmt_config()["default_seed"], help="Master seed")
    common.add_argument("--threads", type=int, default=config.get_rmt_config()["threads"], help="Worker threads, capped at ZEROLAB_THREADS")
    common.add_argument("--out", choices=[f.value for f in OutputFormat], default=OutputFormat.CSV.value,
                        help="Report format")
    common.add_argument("--out-path", help="Write the report here instead of stdout")
    common.add_argument("--quiet", action="store_true", help="Only print errors to stderr")
    common.add_argument("--log-file", default=config.get_log_config()["file"], help="Save an HTML log of the run")
    return common


def create_parser() -> argparse.ArgumentParser:
    """Create argument parser."""
    parser = ZerolabArgumentParser(
        prog="zerolab",
        description="Low-lying zeros laboratory: random matrix ensembles, symmetry kernels and explicit formulas",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest="command", help="Command to execute")
    common = _common_parser()

    def add(name: str, help_text: str, columns: str) -> argparse.ArgumentParser:
        return subparsers.add_parser(
            name,
            help=help_text,
            description=f"{help_text}. Exercises {EXERCISES[name]}.",
            epilog=f"CSV columns: {columns}",
            parents=[common],
            formatter_class=argparse.ArgumentDefaultsHelpFormatter,
        )

    groups = [g.value for g in GroupName]
    scalings = [s.value for s in AngleScaling]
    for name, what in (("rmt-density", "one-level density"), ("rmt-paircorr", "pair correlation")):
        sub = add(
            name,
            f"Monte-Carlo {what} of Haar eigenangles against its limiting value "
            f"({'symmetry kernel pairing' if name == 'rmt-density' else 'GUE sine-kernel functional'})",
            "group, n, draws, statistic, mean, stderr, target, abs_dev",
        )
        sub.add_argument("--group", choices=groups, default=GroupName.U.value, help="Group family")
        sub.add_argument("--dim", type=int, default=30, help="Dimension parameter N")
        sub.add_argument("--draws", type=int, default=20000, help="Number of Haar draws")
        sub.add_argument("--test-fn", default="fejer:1", help="Test function, e.g. fejer:0.8 or fejer:2/3")
        sub.add_argument("--scaling", choices=scalings, default=AngleScaling.MATRIX_SIZE.value,
                         help="Angle normalization")

    sub = add("kernel-pair", "Pair symmetry kernels with a test function on the Fourier side",
              "kernel, test_fn, pairing, spatial_pairing")
    sub.add_argument("--kernel", choices=[k.value for k in KernelLabel] + ["all"], default="all", help="Kernel label")
    sub.add_argument("--test-fn", default="fejer:1", help="Test function")
    sub.add_argument("--spatial", action="store_true", help="Also pair by spatial quadrature")

    sub = add("indist-check", "Check that the orthogonal kernels agree when the support lies in (-1, 1)",
              "kernel, test_fn, pairing")
    sub.add_argument("--test-fn", default="fejer:0.9", help="Test function")

    sub = add("ef-density", "One-level density of one representation from the explicit formula over primes",
              "source, conductor, nu_max, value, leading, tail_bound, ramified_bound")
    sub.add_argument("--coeffs", help="Coefficients file; a synthetic representation is used when omitted")
    sub.add_argument("--conductor", type=float, default=math.exp(20.0), help="Conductor of the synthetic representation")
    sub.add_argument("--measure", choices=[m.value for m in ThetaMeasure], default=ThetaMeasure.SATO_TATE.value,
                     help="Satake angle law of the synthetic representation")
    sub.add_argument("--test-fn", default="fejer:0.5", help="Test function")
    sub.add_argument("--nu-max", type=int, default=2, help="Largest prime-power block")
    sub.add_argument("--log-r", type=float, help="Normalizing logarithm, log c by default")

    sub = add("density-from-zeros", "One-level density, pair correlation and central order of stored zeros",
              "source, zeros, density, pair_correlation, central_order")
    sub.add_argument("--zeros", nargs="+", default=[], help="Zeros files")
    sub.add_argument("--test-fn", default="fejer:1", help="Test function")

    sub = add("second-moment", "Prime-square sum against its limit phi(0)/2",
              "log_c, sum, target, deviation")
    sub.add_argument("--test-fn", default="fejer:1", help="Test function")
    sub.add_argument("--log-c", type=float, nargs="+", default=[15.0, 30.0], help="Logarithms of the conductor")

    sub = add("sieve-check", "Exactness of the old/new-form sieve on every divisor lattice up to a bound",
              "q_max, vectors, checked, failures, multiplicity_failures, status")
    sub.add_argument("--q-max", type=int, default=1000, help="Largest level")
    sub.add_argument("--vectors", type=int, default=10, help="Random integer vectors per level")

    sub = add("nonvanish", "Bounds on central vanishing implied by the support of the test function",
              "support, multiplicity_bound, p0_lower, nontrivial, multiplicity_bound_exact, p0_lower_exact")
    sub.add_argument("--support", default="2/3", help="Support radius T; 'a/b' is kept exact")
    sub.add_argument("--m-max", type=int, default=5, help="Orders m with a reported p_m bound (JSON only)")

    sub = add("primes", "Enumerate primes up to a limit", "limit, count, largest, tail")
    sub.add_argument("--limit", type=int, default=100, help="Upper bound")
    sub.add_argument("--tail", type=int, default=10, help="How many of the largest primes to list")

    sub = add("verify-testfn", "Numerically verify a Fourier pair",
              "test_fn, passed, evenness, support, integral, dual_integral, inversion")
    sub.add_argument("--test-fn", default="fejer:1", help="Test function")
    sub.add_argument("--tol", type=float, default=1e-6, help="Accepted deviation")

    sub = add("family-density", "Family average of explicit-formula densities against phi_hat(0) + phi(0)/2",
              "member, density")
    sub.add_argument("--manifest", help="Family manifest; a synthetic family is used when omitted")
    sub.add_argument("--size", type=int, default=8, help="Size of the synthetic family")
    sub.add_argument("--conductor", type=float, default=math.exp(12.0), help="Conductor of the synthetic members")
    sub.add_argument("--measure", choices=[m.value for m in ThetaMeasure], default=ThetaMeasure.SATO_TATE.value,
                     help="Satake angle law of the synthetic members")
    sub.add_argument("--test-fn", default="fejer:0.5", help="Test function")
    sub.add_argument("--nu-max", type=int, default=2, help="Largest prime-power block")

    return parser


def load_config_file(path: str) -> List[str]:
    """
    Turn a 'key = value' config file into command-line tokens.

    Keys are flag names with or without dashes; true/false values toggle
    boolean flags.
    """
    if not os.path.exists(path):
        raise FileNotFoundError(f"config file {path} does not exist")
    tokens: List[str] = []
    for key, value in dotenv_values(path).items():
        name = key.strip().lstrip("-").replace("_", "-").lower()
        if name.replace("-", "_") in BOOLEAN_FLAGS:
            if str(value).strip().lower() in ("1", "true", "yes"):
                tokens.append(f"--{name}")
            continue
        if value is None:
            raise InvalidInputError(f"config key {key!r} in {path} has no value")
        tokens.extend([f"--{name}", *value.split()])
    return tokens


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    """
    Parse arguments with config-file defaults.

    Config values are spliced in right after the subcommand, so flags given
    on the command line override them.
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = create_parser()
    if argv and not argv[0].startswith("-"):
        pre = argparse.ArgumentParser(add_help=False)
        pre.add_argument("--config")
        known, _ = pre.parse_known_args(argv[1:])
        if known.config:
            try:
                argv = [argv[0], *load_config_file(known.config), *argv[1:]]
            except (InvalidInputError, FileNotFoundError) as e:
                parser.error(str(e))
    return parser.parse_args(argv)


def build_run_config(args: argparse.Namespace) -> RunConfig:
    """Collect parsed arguments into a RunConfig."""
    options = {k: v for k, v in vars(args).items() if k not in COMMON_OPTIONS}
    return RunConfig(
        command=args.command,
        seed=args.seed,
        threads=args.threads,
        output_format=args.out,
        out_path=args.out_path,
        verbose=not args.quiet,
        log_file=args.log_file,
        options=options,
    )


def rmt_command(config: RunConfig, statistic: Statistic, tracker: ProgressTracker) -> Report:
    opts = config.options
    fp = parse_test_fn(opts["test_fn"])
    template = HaarDrawConfig(group=opts["group"], dim_parameter=opts["dim"], seed=config.seed)
    result = monte_carlo(template, opts["draws"], statistic, fp, threads=config.threads,
                         scaling=AngleScaling(opts["scaling"]), tracker=tracker)
    target = ensemble_target(template.group, statistic, fp)
    return Report(
        command=config.command,
        columns=["group", "n", "draws", "statistic", "mean", "stderr", "target", "abs_dev"],
        rows=[[result.group.value, result.matrix_size, result.draws, result.statistic.value, result.mean, result.stderr,
               target, abs(result.mean - target)]],
        payload={"test_fn": fp.family_tag, "seed": config.seed, "scaling": result.scaling.value},
    )


def rmt_density_command(config: RunConfig, tracker: ProgressTracker) -> Report:
    return rmt_command(config, Statistic.ONE_LEVEL, tracker)


def rmt_paircorr_command(config: RunConfig, tracker: ProgressTracker) -> Report:
    return rmt_command(config, Statistic.PAIR_CORR, tracker)


def kernel_pair_command(config: RunConfig, tracker: ProgressTracker) -> Report:
    opts = config.options
    fp = parse_test_fn(opts["test_fn"])
    labels = list(KernelLabel) if opts["kernel"] == "all" else [KernelLabel(opts["kernel"])]
    rows = []
    for label in labels:
        k = kernel(label)
        rows.append([label.value, fp.family_tag, pair(k, fp), spatial_pair(k, fp) if opts["spatial"] else None])
    return Report(command=config.command, columns=["kernel", "test_fn", "pairing", "spatial_pairing"], rows=rows)


def indist_check_command(config: RunConfig, tracker: ProgressTracker) -> Report:
    fp = parse_test_fn(config.options["test_fn"])
    report = indistinguishability_report(fp)
    return Report(
        command=config.command,
        columns=["kernel", "test_fn", "pairing"],
        rows=[[label, fp.family_tag, value] for label, value in report.pairings.items()],
        payload=report.model_dump(exclude={"pairings", "family_tag"}),
    )


def _load_rep(path: str) -> AutoRep:
    rep = DataLoaderFactory.load(path)
    if not isinstance(rep, AutoRep):
        raise InvalidInputError(f"{path} is not a coefficients file")
    return rep


def ef_density_command(config: RunConfig, tracker: ProgressTracker) -> Report:
    opts = config.options
    fp = parse_test_fn(opts["test_fn"])
    tracker.update_progress(ExperimentPhase.LOADING, "Preparing Satake data", 0)
    if opts["coeffs"]:
        rep, source = _load_rep(opts["coeffs"]), opts["coeffs"]
    else:
        horizon = required_horizon(opts["conductor"], fp, opts["log_r"])
        rep = synthetic_rep(opts["conductor"], horizon, measure=ThetaMeasure(opts["measure"]), seed=config.seed)
        source = f"synthetic:{opts['measure']}:{config.seed}"
    result = explicit_formula_density(rep, fp, opts["nu_max"], opts["log_r"])
    return Report(
        command=config.command,
        columns=["source", "conductor", "nu_max", "value", "leading", "tail_bound", "ramified_bound"],
        rows=[[source, rep.conductor, opts["nu_max"], result.value, result.leading, result.tail_bound,
               result.ramified_bound]],
        payload={"test_fn": fp.family_tag, "per_nu": result.per_nu, "log_r": result.log_r},
    )


def density_from_zeros_command(config: RunConfig, tracker: ProgressTracker) -> Report:
    paths = config.options["zeros"]
    if not paths:
        raise InvalidInputError("density-from-zeros needs at least one --zeros file")
    fp = parse_test_fn(config.options["test_fn"])
    rows = []
    for path in paths:
        record = DataLoaderFactory.load(path)
        if not isinstance(record, ZerosRecord):
            raise InvalidInputError(f"{path} is not a zeros file")
        correlation = pair_correlation_from_zeros(record, fp) if len(record.ordinates) >= 2 else None
        rows.append([path, len(record.ordinates), density_from_zeros(record, fp), correlation,
                     central_order(record)])
    return Report(
        command=config.command,
        columns=["source", "zeros", "density", "pair_correlation", "central_order"],
        rows=rows,
        payload={"test_fn": fp.family_tag},
    )


def second_moment_command(config: RunConfig, tracker: ProgressTracker) -> Report:
    fp = parse_test_fn(config.options["test_fn"])
    log_cs = config.options["log_c"]
    tracker.start_sampling(len(log_cs), "Summing prime squares")
    rows = []
    for log_c in log_cs:
        shift = second_order_shift(fp, log_c)
        rows.append([shift.log_c, shift.sum, shift.target, shift.deviation])
        tracker.advance()
    return Report(command=config.command, columns=["log_c", "sum", "target", "deviation"], rows=rows,
                  payload={"test_fn": fp.family_tag})


def sieve_check_command(config: RunConfig, tracker: ProgressTracker) -> Report:
    q_max, vectors = config.options["q_max"], config.options["vectors"]
    if q_max < 1 or vectors < 1:
        raise InvalidInputError("q-max and vectors must be positive")
    rng = draw_generator(config.seed)
    checked = failures = multiplicity_failures = 0
    tracker.start_sampling(q_max, "Checking divisor lattices")
    for q in range(1, q_max + 1):
        lattice = divisor_lattice(q)
        for _ in range(vectors):
            values = dict(zip(lattice, rng.integers(-10**6, 10**6, len(lattice)).tolist()))
            failures += not sieve_round_trip(q, values)
            checked += 1
        for c in lattice:
            total = sum(lambda2(q // d) * multiplicity(c, d) for d in lattice)
            multiplicity_failures += total != (1 if c == q else 0)
        if q % 100 == 0 or q == q_max:
            tracker.advance(100 if q % 100 == 0 else q % 100)
    status = "all exact" if failures == 0 and multiplicity_failures == 0 else "FAILED"
    report = Report(
        command=config.command,
        columns=["q_max", "vectors", "checked", "failures", "multiplicity_failures", "status"],
        rows=[[q_max, vectors, checked, failures, multiplicity_failures, status]],
    )
    if status != "all exact":
        raise NumericalError(f"sieve round trip failed {failures} times", {"report": report.records()[0]})
    return report


def nonvanish_command(config: RunConfig, tracker: ProgressTracker) -> Report:
    report = nonvanishing_bounds(config.options["support"])
    bounds = order_bounds(config.options["support"], config.options["m_max"])
    columns = ["support", "multiplicity_bound", "p0_lower", "nontrivial", "multiplicity_bound_exact", "p0_lower_exact"]
    values = report.model_dump()
    return Report(command=config.command, columns=columns, rows=[[values[c] for c in columns]],
                  payload={"order_bounds": bounds})


def primes_command(config: RunConfig, tracker: ProgressTracker) -> Report:
    table = sieve_primes(config.options["limit"])
    tail = table.primes[-config.options["tail"]:].tolist() if config.options["tail"] > 0 and len(table) else []
    largest = tail[-1] if tail else None
    return Report(
        command=config.command,
        columns=["limit", "count", "largest", "tail"],
        rows=[[table.limit, len(table), largest, " ".join(map(str, tail))]],
    )


def verify_testfn_command(config: RunConfig, tracker: ProgressTracker) -> Report:
    fp = parse_test_fn(config.options["test_fn"])
    result = verify_pair(fp, config.options["tol"])
    columns = ["test_fn", "passed", "evenness", "support", "integral", "dual_integral", "inversion"]
    values = result.model_dump()
    values["test_fn"] = result.family_tag
    return Report(command=config.command, columns=columns, rows=[[values[c] for c in columns]])


def family_density_command(config: RunConfig, tracker: ProgressTracker) -> Report:
    opts = config.options
    fp = parse_test_fn(opts["test_fn"])
    tracker.update_progress(ExperimentPhase.LOADING, "Preparing family", 0)
    if opts["manifest"]:
        family = DataLoaderFactory.load(opts["manifest"])
        if not isinstance(family, FamilyModel):
            raise InvalidInputError(f"{opts['manifest']} is not a family manifest")
    else:
        horizon = required_horizon(opts["conductor"], fp)
        family = synthetic_family(opts["size"], opts["conductor"], horizon,
                                  measure=ThetaMeasure(opts["measure"]), seed=config.seed)
    report = averaged_density(family, fp, opts["nu_max"], threads=config.threads, tracker=tracker)
    return Report(
        command=config.command,
        columns=["member", "density"],
        rows=[[i, value] for i, value in enumerate(report.per_rep)],
        payload={
            "label": report.label,
            "test_fn": report.family_tag,
            "mean": report.mean,
            "predicted": report.predicted,
            "deviation": report.deviation,
            "per_rep": report.per_rep,
            "tail_bound": report.tail_bound,
        },
    )


COMMANDS: Dict[str, Callable[[RunConfig, ProgressTracker], Report]] = {
    "rmt-density": rmt_density_command,
    "rmt-paircorr": rmt_paircorr_command,
    "kernel-pair": kernel_pair_command,
    "indist-check": indist_check_command,
    "ef-density": ef_density_command,
    "density-from-zeros": density_from_zeros_command,
    "second-moment": second_moment_command,
    "sieve-check": sieve_check_command,
    "nonvanish": nonvanish_command,
    "primes": primes_command,
    "verify-testfn": verify_testfn_command,
    "family-density": family_density_command,
}


def _settings_table(config: RunConfig) -> Dict[str, Any]:
    settings = {"seed": config.seed, "threads": get_configuration().get_thread_count(config.threads),
                "output": config.output_format.value,
                "out_path": config.out_path or "stdout"}
    settings.update(config.options)
    return settings


def run(config: RunConfig) -> int:
    """
    Execute one subcommand and write its report.

    Args:
        config: Fully merged run configuration

    Returns:
        Exit code: 0 on success, 1 on input errors, 2 on numerical failures
    """
    settings = get_configuration()
    log_config = settings.get_log_config()
    rich_logger = RichLogger(verbose=config.verbose, log_to_file=config.log_file)
    setup_logging("ERROR" if not config.verbose else log_config["level"], rich_logger.console)

    if not settings.validate_config():
        bad = ", ".join(settings.invalid_keys)
        rich_logger.log_error("Invalid ZEROLAB_* settings in the environment", f"malformed: {bad}" if bad else None)
        return EXIT_INPUT

    handler = COMMANDS.get(config.command)
    if handler is None:
        create_parser().print_usage(sys.stderr)
        rich_logger.log_error(f"Unknown subcommand {config.command!r}")
        return EXIT_INPUT

    tracker = ProgressTracker(run_id=config.command, verbose=config.verbose and log_config["verbose"])
    rich_logger.start_run(config.command, _settings_table(config))
    try:
        report = handler(config, tracker)
        tracker.update_progress(ExperimentPhase.REPORTING, "Formatting report", 0)
        text = OutputFormatter(rich_logger).format(report, config.output_format)
        if config.out_path:
            with open(config.out_path, "w", encoding="utf-8") as f:
                f.write(text)
        else:
            sys.stdout.write(text)
        rich_logger.log_results(config.command, report.columns, report.rows)
        tracker.complete()
        return EXIT_OK
    except (NumericalError, ResourceLimitError) as e:
        tracker.error(str(e))
        details = "\n".join(f"{k}: {v}" for k, v in getattr(e, "diagnostics", {}).items())
        rich_logger.log_error(str(e), details or None)
        return EXIT_NUMERIC
    except (ZerolabError, OSError, ValidationError) as e:
        tracker.error(str(e))
        rich_logger.log_error(str(e))
        return EXIT_INPUT
    finally:
        rich_logger.save_log()


def main(argv: Optional[Sequence[str]] = None) -> None:
    """Main function."""
    args = parse_args(argv)
    if not args.command:
        create_parser().print_help()
        sys.exit(EXIT_INPUT)
    try:
        config = build_run_config(args)
    except ValidationError as e:
        print(f"Error: {e}", file=sys.stderr)
        sys.exit(EXIT_INPUT)
    sys.exit(run(config))


if __name__ == "__main__":
    main()
