"""Command-line front end for one-off runs and the scripted experiments.

Subcommands
-----------
verhulst     long run of the trait-structured population model -> trace CSV
markov-gen   draw one random drift transition matrix -> matrix CSV
stationary   solve a matrix CSV for its stationary distribution
hessenberg   tridiagonal chain: direct solve or exact closed form
sweep        expected state across a delta grid and seed list -> sweep CSV
verify       closed forms vs. direct solver over an (n, delta) grid

Exit codes: 0 success, 1 bad input (validation or usage), 2 numerical
failure (non-convergence, singular system) or I/O failure.  CSV goes to
``--output`` or stdout; one-line summaries go to stderr so that piped
output stays parseable.  The environment variable ``DARWIN_SEED``
supplies the default seed for ``markov-gen``.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

from .experiments import (
    run_delta_sweep,
    run_population_experiment,
    verify_closed_form,
)
from .markov import (
    ChainSpec,
    RandomSource,
    build_random_transition,
    expected_state,
    hessenberg_build,
    hessenberg_stationary_closed,
    stationary_direct,
    stationary_power,
)
from .serialize import (
    format_real,
    read_kernel_csv,
    read_matrix_csv,
    read_mortality_csv,
    write_distribution_csv,
    write_matrix_csv,
    write_svg_lines,
    write_sweep_csv,
    write_trace_csv,
)
from .verhulst import (
    VerhulstParams,
    inverse_trait_mortality,
    nearest_neighbor_kernel,
    point_mass_population,
    validate_kernel,
    validate_params,
)

__all__ = ["RunConfig", "parse_args", "main", "console_main"]

DEFAULT_DELTAS = (0.4, 0.2, 0.1, 0.05)
DEFAULT_SEEDS = (1, 2, 3, 4, 5)
DEFAULT_DELTA_GRID = (0.05, 0.1, 0.2, 0.25, 0.4)


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved invocation; ``parse_args`` output.

    Only the fields of the selected command are meaningful; the rest
    keep their defaults, so a config round-trips through its own argv
    (``parse_args(config.to_argv()) == config``).
    """

    command: str
    generations: int = 5000
    birth_rate: float = 0.5
    capacity: float = 10_000.0
    v_max: int = 25
    kernel: str = "paper8"
    mortality: str = "inverse-v"
    p0: str = "100"
    n: int = 50
    epsilon: float = 0.1
    delta: float = 0.2
    seed: int = 1
    input: str | None = None
    method: str = "direct"
    tolerance: float = 1e-12
    closed_form: bool = False
    deltas: tuple[float, ...] = DEFAULT_DELTAS
    seeds: tuple[int, ...] = DEFAULT_SEEDS
    n_range: tuple[int, int] = (4, 12)
    delta_grid: tuple[float, ...] = DEFAULT_DELTA_GRID
    output: str | None = None
    svg: str | None = None

    def to_argv(self) -> list[str]:
        """Reconstruct an argv equivalent to the one parsed."""
        argv = [self.command]
        if self.command == "verhulst":
            argv += ["--generations", str(self.generations)]
            argv += ["--b", format_real(self.birth_rate)]
            argv += ["--K", format_real(self.capacity)]
            argv += ["--vmax", str(self.v_max)]
            argv += ["--kernel", self.kernel]
            argv += ["--mortality", self.mortality]
            argv += ["--p0", self.p0]
        elif self.command == "markov-gen":
            argv += ["--n", str(self.n)]
            argv += ["--epsilon", format_real(self.epsilon)]
            argv += ["--delta", format_real(self.delta)]
            argv += ["--seed", str(self.seed)]
        elif self.command == "stationary":
            if self.input is not None:
                argv += ["--input", self.input]
            argv += ["--method", self.method]
            argv += ["--tol", format_real(self.tolerance)]
        elif self.command == "hessenberg":
            argv += ["--n", str(self.n)]
            argv += ["--epsilon", format_real(self.epsilon)]
            argv += ["--delta", format_real(self.delta)]
            if self.closed_form:
                argv += ["--closed-form"]
        elif self.command == "sweep":
            argv += ["--n", str(self.n)]
            argv += ["--epsilon", format_real(self.epsilon)]
            argv += ["--deltas", ",".join(format_real(d) for d in self.deltas)]
            argv += ["--seeds", ",".join(str(s) for s in self.seeds)]
        elif self.command == "verify":
            argv += ["--n-range", f"{self.n_range[0]}:{self.n_range[1]}"]
            argv += ["--delta-grid", ",".join(format_real(d) for d in self.delta_grid)]
        if self.output is not None:
            argv += ["--output", self.output]
        if self.svg is not None:
            argv += ["--svg", self.svg]
        return argv


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _float_list(text: str) -> tuple[float, ...]:
    try:
        items = tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of reals: {text!r}")
    if not items:
        raise argparse.ArgumentTypeError("list must not be empty")
    return items


def _int_list(text: str) -> tuple[int, ...]:
    try:
        items = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}")
    if not items:
        raise argparse.ArgumentTypeError("list must not be empty")
    return items


def _int_range(text: str) -> tuple[int, int]:
    parts = text.split(":")
    try:
        if len(parts) == 1:
            lo = hi = int(parts[0])
        elif len(parts) == 2:
            lo, hi = int(parts[0]), int(parts[1])
        else:
            raise ValueError
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI or a single integer, got {text!r}")
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def _default_seed() -> int:
    raw = os.environ.get("DARWIN_SEED")
    if raw is None:
        return 1
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"DARWIN_SEED must be an integer, got {raw!r}") from None


def parse_args(argv=None) -> RunConfig:
    """Parse an argv into a :class:`RunConfig`.

    Usage errors print a message and exit with status 1.
    """
    parser = _Parser(prog="darwinsim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_output(p, svg=False):
        p.add_argument("--output", default=None, help="CSV destination (default: stdout)")
        if svg:
            p.add_argument("--svg", default=None, help="also write a minimal line chart here")

    p = sub.add_parser("verhulst", help="simulate the trait-structured population model")
    p.add_argument("--generations", type=int, default=5000)
    p.add_argument("--b", dest="birth_rate", type=float, default=0.5, help="birth rate")
    p.add_argument("--K", dest="capacity", type=float, default=10_000.0, help="capacity")
    p.add_argument("--vmax", dest="v_max", type=int, default=25, help="trait-range radius")
    p.add_argument(
        "--kernel",
        default="paper8",
        help="'paper8' (stay 0.9, one-step 0.05 each) or a kernel CSV (u,mass); "
        "a file's radius must equal --vmax",
    )
    p.add_argument(
        "--mortality",
        default="inverse-v",
        help="'inverse-v' (1/v) or a mortality CSV (v,mortality) matching --vmax",
    )
    p.add_argument(
        "--p0",
        default="100",
        help="initial population: SIZE at trait 1, or SIZE@TRAIT",
    )
    add_output(p, svg=True)

    p = sub.add_parser("markov-gen", help="draw one random drift transition matrix")
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--delta", type=float, default=0.2)
    p.add_argument(
        "--seed",
        type=int,
        default=None,
        help="RNG seed (default: DARWIN_SEED from the environment, else 1)",
    )
    add_output(p)

    p = sub.add_parser("stationary", help="solve a matrix CSV for its stationary distribution")
    p.add_argument("--input", required=True, help="matrix CSV path")
    p.add_argument("--method", choices=("power", "direct"), default="direct")
    p.add_argument(
        "--tol", dest="tolerance", type=float, default=1e-12,
        help="L1 stopping tolerance for the power method",
    )
    add_output(p)

    p = sub.add_parser("hessenberg", help="tridiagonal drift chain (n > 3)")
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--delta", type=float, default=0.2)
    p.add_argument(
        "--closed-form", dest="closed_form", action="store_true",
        help="use the exact geometric-profile solution instead of the solver",
    )
    add_output(p)

    p = sub.add_parser("sweep", help="expected state across a delta grid and seed list")
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--deltas", type=_float_list, default=DEFAULT_DELTAS)
    p.add_argument("--seeds", type=_int_list, default=DEFAULT_SEEDS)
    add_output(p, svg=True)

    p = sub.add_parser("verify", help="closed forms vs. direct solver over a grid")
    p.add_argument("--n-range", dest="n_range", type=_int_range, default=(4, 12))
    p.add_argument("--delta-grid", dest="delta_grid", type=_float_list, default=DEFAULT_DELTA_GRID)

    ns = parser.parse_args(argv)
    fields = {k: v for k, v in vars(ns).items() if v is not None or k in ("input", "output", "svg")}
    if ns.command == "markov-gen" and ns.seed is None:
        fields["seed"] = _default_seed()
    return RunConfig(**fields)


# ---------------------------------------------------------------------------
# Command implementations


def _out_stream(config: RunConfig):
    return config.output if config.output is not None else sys.stdout


def _parse_p0(text: str, v_max: int):
    size_text, at, trait_text = text.partition("@")
    try:
        size = float(size_text)
        trait = int(trait_text) if at else 1
    except ValueError:
        raise ValueError(f"--p0 must be SIZE or SIZE@TRAIT, got {text!r}")
    return point_mass_population(v_max, trait=trait, size=size)


def _build_verhulst_params(config: RunConfig) -> VerhulstParams:
    if config.kernel == "paper8":
        kernel = nearest_neighbor_kernel(config.v_max)
    else:
        kernel = read_kernel_csv(config.kernel)
        if kernel.v_max != config.v_max:
            raise ValueError(
                f"kernel file has radius {kernel.v_max} but --vmax is {config.v_max}"
            )
    if config.mortality == "inverse-v":
        mortality = inverse_trait_mortality(config.v_max)
    else:
        mortality = read_mortality_csv(config.mortality)
        if mortality.v_max != config.v_max:
            raise ValueError(
                f"mortality file covers {mortality.v_max} traits but --vmax is {config.v_max}"
            )
    params = VerhulstParams(
        birth_rate=config.birth_rate,
        capacity=config.capacity,
        v_max=config.v_max,
        kernel=kernel,
        mortality=mortality,
    )
    report = validate_params(params)
    if not report.ok:
        raise ValueError("invalid parameters: " + "; ".join(report.violations))
    for warning in report.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    return params


def _cmd_verhulst(config: RunConfig) -> int:
    params = _build_verhulst_params(config)
    p0 = _parse_p0(config.p0, config.v_max)
    result = run_population_experiment(params, p0, generations=config.generations)
    write_trace_csv(_out_stream(config), result.trace)
    if config.svg is not None:
        xs = range(result.trace.totals.shape[0])
        series = [result.trace.totals] + list(result.sections)
        labels = ["total"] + [f"v={t}" for t in result.section_traits]
        write_svg_lines(config.svg, list(xs), series, labels, title="population run")
    final = result.trace.totals[-1]
    print(
        f"final total {format_real(final)} after {config.generations} generations",
        file=sys.stderr,
    )
    return 0


def _cmd_markov_gen(config: RunConfig) -> int:
    spec = ChainSpec(n=config.n, epsilon=config.epsilon, delta=config.delta)
    matrix = build_random_transition(spec, RandomSource(config.seed))
    write_matrix_csv(_out_stream(config), matrix)
    return 0


def _cmd_stationary(config: RunConfig) -> int:
    matrix = read_matrix_csv(config.input)
    if config.method == "power":
        dist = stationary_power(matrix, tolerance=config.tolerance)
    else:
        dist = stationary_direct(matrix)
    write_distribution_csv(_out_stream(config), dist)
    print(
        f"expected_state {format_real(expected_state(dist))} "
        f"residual {format_real(dist.residual)}",
        file=sys.stderr,
    )
    return 0


def _cmd_hessenberg(config: RunConfig) -> int:
    spec = ChainSpec(n=config.n, epsilon=config.epsilon, delta=config.delta)
    if config.closed_form:
        dist = hessenberg_stationary_closed(spec)
    else:
        dist = stationary_direct(hessenberg_build(spec))
    write_distribution_csv(_out_stream(config), dist)
    print(
        f"expected_state {format_real(expected_state(dist))} "
        f"residual {format_real(dist.residual)}",
        file=sys.stderr,
    )
    return 0


def _cmd_sweep(config: RunConfig) -> int:
    results = run_delta_sweep(
        n=config.n, epsilon=config.epsilon, deltas=config.deltas, seeds=config.seeds
    )
    write_sweep_csv(_out_stream(config), results)
    for r in results:
        if not r.ok:
            print(f"warning: delta={r.delta} seed={r.seed} failed: {r.error}", file=sys.stderr)
    if config.svg is not None:
        xs = list(config.deltas)
        series = []
        for seed in config.seeds:
            series.append([r.expected_state for r in results if r.seed == seed])
        labels = [f"seed {s}" for s in config.seeds]
        write_svg_lines(config.svg, xs, series, labels, title="expected state vs delta")
    return 0


def _cmd_verify(config: RunConfig) -> int:
    lo, hi = config.n_range
    report = verify_closed_form(n_range=range(lo, hi + 1), delta_grid=config.delta_grid)
    print(
        f"{len(report.entries)} grid points, max deviation {format_real(report.max_deviation)} "
        f"(threshold {format_real(report.flag_tolerance)})"
    )
    for entry in report.flagged:
        print(f"FLAGGED n={entry.n} delta={format_real(entry.delta)} "
              f"deviation {format_real(entry.deviation)}")
    return 0 if report.ok else 2


_COMMANDS = {
    "verhulst": _cmd_verhulst,
    "markov-gen": _cmd_markov_gen,
    "stationary": _cmd_stationary,
    "hessenberg": _cmd_hessenberg,
    "sweep": _cmd_sweep,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    """Run one command; returns the process exit code."""
    try:
        config = parse_args(argv)
        return _COMMANDS[config.command](config)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def console_main() -> None:
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    console_main()
