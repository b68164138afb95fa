#!/usr/bin/python
"""Command line interface for detbound."""

import platform
import sys
import traceback
import warnings
from collections.abc import Iterator, Sequence
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional

import click
import numpy as np
from click.core import ParameterSource

from . import __version__
from .bounds import bound_grid, bound_table
from .const import (
    DEFAULT_CHUNK_BITS,
    DEFAULT_DOMAIN_HI,
    DEFAULT_FREDHOLM_MAX_TERMS,
    DEFAULT_ISOLATION_WIDTH,
    DEFAULT_MINOR_LIMIT,
    DEFAULT_POWER_MAX_ITERATIONS,
    DEFAULT_POWER_TOLERANCE,
    DEFAULT_SEARCH_MAX_ORDER,
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    EXIT_USAGE,
    SAMPLE_DENOMINATOR_BITS,
)
from .constructors import perturb_identity, skew_hadamard, skew_tri, toeplitz_F
from .envelope import Envelope, format_point
from .exact import (
    DenseMatrix,
    DetboundError,
    FormatError,
    HypothesisViolated,
    SignPattern,
    det_rational,
    format_matrix,
    format_rational,
    fredholm_log_det,
    parse_rational,
    spectral_radius_estimate,
)
from .files import parse_config_toml, read_matrix, write_output
from .output import out, render_json, render_mapping, render_table
from .report import Report
from .search import search_maxdet, search_maxdet_exhaustive
from .types import DetboundSettings
from .verify import (
    LowerLegViolated,
    Status,
    VerificationReport,
    lemma2_dominance_grid,
    remark1_counterexample,
    sandwich_test,
    sharpness_check,
    theorem1_test,
    theorem4_check,
)

CLAIMS = ("sandwich", "sharpness", "theorem1", "remark1", "theorem4", "lemma2")
KINDS = ("toeplitz", "skew-tri", "skew-hadamard", "perturbed")


class RationalType(click.ParamType):
    """Click type for "p/q", integer or decimal rationals."""

    name = "rational"

    def __init__(self, *, nonnegative: bool = True) -> None:
        """Configure the range check.

        Parameters
        ----------
        nonnegative : bool
            Reject negative values. (Default value = True)
        """
        self.nonnegative = nonnegative

    def convert(
        self,
        value: Any,  # noqa: ANN401
        param: Optional[click.Parameter],
        ctx: Optional[click.Context],
    ) -> Fraction:
        """Parse the flag value.

        Parameters
        ----------
        value : Any
            Raw value from the command line or the config file.
        param : Optional[click.Parameter]
            The parameter being converted.
        ctx : Optional[click.Context]
            Current context.

        Returns
        -------
        Fraction
            Parsed rational.
        """
        if isinstance(value, Fraction):
            result = value
        else:
            try:
                result = parse_rational(str(value))
            except FormatError as e:
                self.fail(str(e), param, ctx)
        if self.nonnegative and result < 0:
            self.fail(f"{value} is negative", param, ctx)
        return result


RATIONAL = RationalType()


@dataclass
class AppState:
    """Options shared by every subcommand."""

    emit: str
    out_path: Optional[str]
    report: Report
    settings: DetboundSettings
    threads: int = 1
    seed: int = DEFAULT_SEED

    def emit_report(self, data: object, text: str) -> None:
        """Write a report as JSON or text to stdout or ``--out``."""
        rendered = render_json(data) if self.emit == "json" else text
        if self.out_path:
            write_output(self.out_path, rendered)
        else:
            click.echo(rendered)


@contextmanager
def guarded(state: AppState, what: str) -> Iterator[None]:
    """Map library errors to report entries.

    Parameters
    ----------
    state : AppState
        Shared options.
    what : str
        Name of the running subcommand.

    Yields
    ------
    None
        Control to the subcommand body.
    """
    report = state.report
    try:
        yield
    except HypothesisViolated as e:
        report.violated(what, str(e))
    except (DetboundError, ArithmeticError, ValueError) as e:
        if report.verbose:
            traceback.print_exc()
        report.failed(what, str(e))
    except Exception as e:  # noqa: BLE001
        if report.verbose:
            traceback.print_exc()
        report.failed(what, f"internal error: {e!r}")


def read_config(
    ctx: click.Context, _param: click.Parameter, value: Optional[str]
) -> Optional[str]:
    """Inject detbound configuration from an explicit TOML file into defaults in `ctx`.

    Returns the path of the configuration file, None if none was given.
    Nothing is discovered implicitly.

    Parameters
    ----------
    ctx : click.Context
        Context containing preexisting default values.
    value : Optional[str]
        Path to the config file.

    Returns
    -------
    Optional[str]
        Path to the config file if one was specified.

    Raises
    ------
    click.FileError
        If there was a problem reading the configuration file.
    """
    if not value:
        return None
    try:
        config = parse_config_toml(value)
    except (OSError, ValueError) as e:
        raise click.FileError(
            filename=value, hint=f"Error reading configuration file: {e}"
        ) from None
    if not config:
        return None
    # Sanitize the values to be Click friendly; subcommand tables stay dicts.
    config = {
        k: str(v) if not isinstance(v, (list, dict)) else v for k, v in config.items()
    }
    default_map: dict[str, Any] = {}
    if ctx.default_map:
        default_map.update(ctx.default_map)
    default_map.update(config)
    ctx.default_map = default_map
    return value


def _settings(ctx: click.Context, **values: Any) -> DetboundSettings:  # noqa: ANN401
    try:
        return DetboundSettings(**values)
    except ValueError as e:
        raise click.UsageError(str(e), ctx) from None


@click.group(
    context_settings={"help_option_names": ["-h", "--help"]},
    help="Determinant bounds for perturbations of the identity.",
)
@click.option(
    "--emit",
    type=click.Choice(["json", "text"]),
    default="text",
    show_default=True,
    help="Report format.",
)
@click.option(
    "--out",
    "out_path",
    type=click.Path(dir_okay=False, writable=True),
    help="Write the report to this file instead of standard output.",
)
@click.option(
    "--isolation-width",
    type=RATIONAL,
    default=str(DEFAULT_ISOLATION_WIDTH),
    help="Largest width of an irrational breakpoint bracket. [default: 1/2^32]",
)
@click.option(
    "--minor-limit",
    type=click.IntRange(min=1),
    default=DEFAULT_MINOR_LIMIT,
    show_default=True,
    help="Largest order for which rho(F) <= 1 is decided by principal minors.",
)
@click.option(
    "--power-tolerance",
    type=click.FloatRange(min=0, min_open=True),
    default=DEFAULT_POWER_TOLERANCE,
    show_default=True,
    help="Relative tolerance of the spectral radius estimate.",
)
@click.option(
    "--power-max-iterations",
    type=click.IntRange(min=1),
    default=DEFAULT_POWER_MAX_ITERATIONS,
    show_default=True,
    help="Iteration cap of the spectral radius estimate.",
)
@click.option(
    "--fredholm-max-terms",
    type=click.IntRange(min=1),
    default=DEFAULT_FREDHOLM_MAX_TERMS,
    show_default=True,
    help="Default term cap of the trace series.",
)
@click.option(
    "--search-max-order",
    type=click.IntRange(min=1, max=DEFAULT_SEARCH_MAX_ORDER),
    default=DEFAULT_SEARCH_MAX_ORDER,
    show_default=True,
    help="Largest order the maxdet search accepts.",
)
@click.option(
    "--sample-bits",
    type=click.IntRange(min=1),
    default=SAMPLE_DENOMINATOR_BITS,
    show_default=True,
    help="Random samples are rationals with denominator 2^BITS.",
)
@click.option(
    "--chunk-bits",
    type=click.IntRange(min=1),
    default=DEFAULT_CHUNK_BITS,
    show_default=True,
    help="Patterns per search partition, as a power of two.",
)
@click.option(
    "--threads", type=click.IntRange(min=1), default=1, help="Worker processes."
)
@click.option(
    "--seed",
    type=click.IntRange(min=0),
    default=DEFAULT_SEED,
    show_default=True,
    help="Seed of every random trial.",
)
@click.option(
    "--random-seed", is_flag=True, help="Draw a fresh seed and record it in the report."
)
@click.option(
    "-q",
    "--quiet",
    is_flag=True,
    help=(
        "Don't emit non-error messages to stderr. Errors are still emitted; silence"
        " those with 2>/dev/null."
    ),
)
@click.option(
    "-v",
    "--verbose",
    is_flag=True,
    help="Also emit progress, the configuration and tracebacks to stderr.",
)
@click.version_option(
    version=__version__,
    message=(
        f"%(prog)s, %(version)s\n"
        f"Python ({platform.python_implementation()}) {platform.python_version()}"
    ),
)
@click.option(
    "--config",
    type=click.Path(
        exists=True,
        file_okay=True,
        dir_okay=False,
        readable=True,
        allow_dash=False,
        path_type=str,
    ),
    is_eager=True,
    callback=read_config,
    help="Read the [tool.detbound] table of the TOML file FILE.",
)
@click.pass_context
def cli(  # pylint: disable=too-many-arguments  # noqa: PLR0913
    ctx: click.Context,
    *,
    emit: str,
    out_path: Optional[str],
    isolation_width: Fraction,
    minor_limit: int,
    power_tolerance: float,
    power_max_iterations: int,
    fredholm_max_terms: int,
    search_max_order: int,
    sample_bits: int,
    chunk_bits: int,
    threads: int,
    seed: int,
    random_seed: bool,
    quiet: bool,
    verbose: bool,
    config: Optional[str],
) -> None:
    """Determinant bounds for perturbations of the identity."""
    if verbose and config:
        config_source = ctx.get_parameter_source("config")
        if config_source is not ParameterSource.DEFAULT:
            out(f"Using configuration in '{config}'.", fg="blue")
        if ctx.default_map:
            for param, value in ctx.default_map.items():
                out(f"{param}: {value}")
    settings = _settings(
        ctx,
        isolation_width=isolation_width,
        minor_limit=minor_limit,
        power_tolerance=power_tolerance,
        power_max_iterations=power_max_iterations,
        fredholm_max_terms=fredholm_max_terms,
        search_max_order=search_max_order,
        sample_denominator_bits=sample_bits,
        chunk_bits=chunk_bits,
    )
    if random_seed:
        seed = int(np.random.default_rng().integers(0, 1 << 63))
    report = Report(quiet=quiet, verbose=verbose)
    ctx.obj = AppState(emit, out_path, report, settings, threads, seed)
    ctx.call_on_close(lambda: _summarise(ctx.obj.report))


def _summarise(report: Report) -> None:
    if report.verbose or (not report.quiet and report.return_code):
        error_msg = "Oh no! 💥 💔 💥"
        out(error_msg if report.return_code else "All done! ✨ 🍰 ✨")
        click.echo(str(report), err=True)


def _finish(ctx: click.Context) -> None:
    state: AppState = ctx.obj
    ctx.exit(state.report.return_code)


@cli.command(help="Table of every lower and upper bound at (n, eps, delta).")
@click.option("--n", "n", type=click.IntRange(min=1), required=True, help="Order.")
@click.option("--eps", type=RATIONAL, required=True, help="Off-diagonal bound.")
@click.option("--delta", type=RATIONAL, default="0", help="One-sided diagonal bound.")
@click.option(
    "--grid",
    type=click.IntRange(min=2),
    help="Instead, sample every bound at GRID points of [0, eps].",
)
@click.pass_context
def bounds(
    ctx: click.Context, *, n: int, eps: Fraction, delta: Fraction, grid: Optional[int]
) -> None:
    """Bounds subcommand."""
    state: AppState = ctx.obj
    with guarded(state, "bounds"):
        if grid is None:
            _emit_table(state, n, eps, delta)
        else:
            _emit_grid(state, n, eps, delta, grid)
    _finish(ctx)


def _emit_grid(
    state: AppState, n: int, eps_hi: Fraction, delta: Fraction, points: int
) -> None:
    rows = bound_grid(n, eps_hi, points, delta)
    names = list(rows[0].values)
    data: dict[str, Any] = {
        "n": n,
        "delta": format_rational(delta),
        "grid": [{"eps": format_rational(r.eps), "values": r.values} for r in rows],
    }
    text = render_table(
        ["eps", *names],
        [
            [format_rational(r.eps)]
            + [None if v is None else f"{v:.10g}" for v in r.values.values()]
            for r in rows
        ],
    )
    state.emit_report(data, text)
    state.report.done("bounds", f"{points} grid points")


def _emit_table(state: AppState, n: int, eps: Fraction, delta: Fraction) -> None:
    table = bound_table(n, eps, delta)
    data = table.to_json()
    data["order_violations"] = [list(p) for p in table.order_violations()]
    header = f"n = {n}, eps = {format_rational(eps)}, delta = {format_rational(delta)}"
    body = render_table(
        ["bound", "kind", "exact", "float", "valid", "hypothesis", "note"],
        [
            [
                e.name,
                e.kind,
                e.expression,
                None if e.approx is None else f"{e.approx:.10g}",
                "yes" if e.valid else "no",
                e.hypothesis,
                e.note or None,
            ]
            for e in table.entries.values()
        ],
    )
    state.emit_report(data, f"{header}\n\n{body}")
    invalid = [e.name for e in table.entries.values() if not e.valid]
    if invalid:
        state.report.violated("bounds", "hypothesis fails for " + ", ".join(invalid))
    else:
        state.report.done("bounds", f"{len(table.entries)} bounds")


@cli.command(help="Build a witness or extremal matrix.")
@click.option("--kind", type=click.Choice(KINDS), required=True, help="Construction.")
@click.option("--n", "n", type=click.IntRange(min=1), required=True, help="Order.")
@click.option("--eps", type=RATIONAL, default="0", help="Perturbation size.")
@click.option("--delta", type=RATIONAL, default="0", help="Toeplitz diagonal.")
@click.option(
    "--inflate", is_flag=True, help="Use 1 + eps on the skew-triangular diagonal."
)
@click.pass_context
def construct(  # noqa: PLR0913
    ctx: click.Context,
    *,
    kind: str,
    n: int,
    eps: Fraction,
    delta: Fraction,
    inflate: bool,
) -> None:
    """Construct subcommand."""
    state: AppState = ctx.obj
    with guarded(state, "construct"):
        if kind == "skew-hadamard":
            _emit_skew_hadamard(state, n)
        else:
            _emit_matrix(state, kind, n, eps, delta, inflate=inflate)
    _finish(ctx)


def _emit_skew_hadamard(state: AppState, n: int) -> None:
    h = skew_hadamard(n)
    data = {"kind": "skew-hadamard", "n": n, "rule": h.rule, "rows": h.compact_rows()}
    state.emit_report(data, f"# {h.rule}\n" + "\n".join(h.compact_rows()))
    state.report.done("construct", f"skew-Hadamard of order {n}")


def _emit_matrix(  # noqa: PLR0913
    state: AppState,
    kind: str,
    n: int,
    eps: Fraction,
    delta: Fraction,
    *,
    inflate: bool,
) -> None:
    data: dict[str, Any] = {"kind": kind, "n": n}
    if kind == "toeplitz":
        matrix = toeplitz_F(n, delta, eps, check=True)
        data["delta"] = format_rational(delta)
    elif kind == "skew-tri":
        matrix = skew_tri(n, eps, inflate=inflate)
        data["inflate"] = inflate
    else:
        h = skew_hadamard(n)
        matrix = perturb_identity(h, eps)
        data["rule"] = h.rule
    data["eps"] = format_rational(eps)
    data["matrix"] = [[format_rational(x) for x in row] for row in matrix.rows]
    data["det"] = format_rational(det_rational(matrix))
    if kind == "toeplitz":
        shifted = DenseMatrix.identity(n) - matrix
        data["det_I_minus_F"] = format_rational(det_rational(shifted))
    state.emit_report(data, format_matrix(matrix))
    state.report.done("construct", f"det = {data['det']}")


def _compact(pattern: Optional[SignPattern]) -> Optional[str]:
    return None if pattern is None else "/".join(pattern.rows())


def _envelope_text(n: int, envelope: Envelope) -> str:
    rows = [
        [
            f"({format_point(p.start)}, {format_point(p.end)}]",
            p.poly,
            _compact(p.witness),
        ]
        for p in envelope.pieces
    ]
    lines = [f"n = {n}", "", render_table(["interval", "poly", "witness"], rows)]
    for point in envelope.breakpoints:
        lines.append(f"breakpoint {format_point(point)}")
    for index, group in enumerate(envelope.all_witnesses):
        lines.append(f"piece {index}: " + ", ".join("/".join(w.rows()) for w in group))
    return "\n".join(lines)


@cli.command(help="Exact maximal determinant envelope over sign patterns.")
@click.option("--n", "n", type=click.IntRange(min=1), required=True, help="Order.")
@click.option(
    "--domain-hi",
    type=RATIONAL,
    default=str(DEFAULT_DOMAIN_HI),
    show_default=True,
    help="Right end of the domain (0, HI].",
)
@click.option(
    "--all-witnesses", is_flag=True, help="List every witness per piece (n <= 4)."
)
@click.option(
    "--exhaustive",
    is_flag=True,
    help="Scan all 2^(n(n-1)) patterns without symmetry reduction (n <= 5).",
)
@click.option(
    "--timeout",
    type=click.FloatRange(min=0, min_open=True),
    help="Give up after SECONDS.",
)
@click.pass_context
def search(  # noqa: PLR0913
    ctx: click.Context,
    *,
    n: int,
    domain_hi: Fraction,
    all_witnesses: bool,
    exhaustive: bool,
    timeout: Optional[float],
) -> None:
    """Search subcommand."""
    state: AppState = ctx.obj
    with guarded(state, "search"), warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ResourceWarning)
        if exhaustive:
            envelope = search_maxdet_exhaustive(n, domain_hi, settings=state.settings)
        else:
            envelope = search_maxdet(
                n,
                domain_hi,
                threads=state.threads,
                timeout=timeout,
                all_witnesses=all_witnesses,
                settings=state.settings,
                progress=state.report.progress,
            )
        for warning in caught:
            if not state.report.quiet:
                out(str(warning.message), fg="yellow")
        data: dict[str, Any] = {"n": n, **envelope.to_json()}
        if domain_hi >= 1:
            data["maxdet_at_one"] = format_rational(envelope.value_at(Fraction(1)))
        state.emit_report(data, _envelope_text(n, envelope))
        state.report.done("search", f"{len(envelope.pieces)} pieces")
    _finish(ctx)


def _verification_text(result: VerificationReport) -> str:
    return render_mapping(result.to_json())


def _record(state: AppState, result: VerificationReport) -> None:
    report = state.report
    if result.status is Status.PASS:
        report.done(result.claim, f"pass in {result.trials} trials")
    elif result.status is Status.INAPPLICABLE:
        report.violated(result.claim, "inapplicable: " + result.reference)
    else:
        report.failed(result.claim, f"{len(result.failures)} failures")


def _run_claim(  # noqa: PLR0911, PLR0913
    state: AppState,
    claim: str,
    *,
    n: int,
    eps: Fraction,
    delta: Fraction,
    trials: int,
    seed: int,
    zero_diag: bool,
    matrix_path: Optional[str],
    direction: str,
    phi: Fraction,
) -> VerificationReport:
    bits = state.settings.sample_denominator_bits
    if claim == "sandwich":
        return sandwich_test(
            n, eps, delta, zero_diag=zero_diag, trials=trials, seed=seed, bits=bits
        )
    if claim == "sharpness":
        return sharpness_check(n, eps, delta)
    if claim == "remark1":
        return remark1_counterexample(n, phi)
    if claim == "lemma2":
        return lemma2_dominance_grid(n, trials, seed)
    matrix: Optional[DenseMatrix] = None
    if matrix_path is not None:
        matrix = read_matrix(matrix_path)
    if claim == "theorem1":
        if matrix is None:
            matrix = toeplitz_F(n, delta, eps)
        return theorem1_test(
            matrix, trials, seed, bits=bits, minor_limit=state.settings.minor_limit
        )
    if matrix is None:
        return theorem4_check(skew_hadamard(n), direction)
    return theorem4_check(matrix, direction)


@cli.command(help="Check a claim on random or constructed instances.")
@click.option("--claim", type=click.Choice(CLAIMS), required=True, help="Claim.")
@click.option(
    "--n",
    "n",
    type=click.IntRange(min=1),
    required=True,
    help="Order (largest order for lemma2).",
)
@click.option("--eps", type=RATIONAL, default="0", help="Off-diagonal bound.")
@click.option("--delta", type=RATIONAL, default="0", help="One-sided diagonal bound.")
@click.option(
    "--trials",
    type=click.IntRange(min=1),
    default=DEFAULT_TRIALS,
    show_default=True,
    help="Random trials (grid points per order for lemma2).",
)
@click.option("--zero-diag", is_flag=True, help="Sandwich samples with zero diagonal.")
@click.option(
    "--matrix",
    "matrix_path",
    type=click.Path(exists=True, dir_okay=False, readable=True),
    help="F for theorem1, H for theorem4.",
)
@click.option(
    "--direction",
    type=click.Choice(["forward", "converse"]),
    default="converse",
    show_default=True,
    help="Direction of the skew-Hadamard check.",
)
@click.option("--phi", type=RATIONAL, default="2", help="Diagonal of F for remark1.")
@click.pass_context
def verify(  # noqa: PLR0913
    ctx: click.Context,
    *,
    claim: str,
    n: int,
    eps: Fraction,
    delta: Fraction,
    trials: int,
    zero_diag: bool,
    matrix_path: Optional[str],
    direction: str,
    phi: Fraction,
) -> None:
    """Verify subcommand."""
    state: AppState = ctx.obj
    with guarded(state, claim):
        try:
            result = _run_claim(
                state,
                claim,
                n=n,
                eps=eps,
                delta=delta,
                trials=trials,
                seed=state.seed,
                zero_diag=zero_diag,
                matrix_path=matrix_path,
                direction=direction,
                phi=phi,
            )
        except LowerLegViolated as e:
            state.emit_report(e.report.to_json(), _verification_text(e.report))
            _record(state, e.report)
            raise
        state.emit_report(result.to_json(), _verification_text(result))
        _record(state, result)
    _finish(ctx)


@cli.command(help="log det(I - E) from the trace power series.")
@click.option(
    "--matrix",
    "matrix_path",
    type=click.Path(exists=True, dir_okay=False, readable=True),
    required=True,
    help="E in the matrix text format.",
)
@click.option(
    "--tol",
    type=click.FloatRange(min=0, min_open=True),
    default=1e-12,
    show_default=True,
    help="Bound on the truncation error.",
)
@click.option(
    "--max-terms",
    type=click.IntRange(min=1),
    help="Largest number of series terms. [default: --fredholm-max-terms]",
)
@click.pass_context
def fredholm(
    ctx: click.Context, *, matrix_path: str, tol: float, max_terms: Optional[int]
) -> None:
    """Fredholm subcommand."""
    state: AppState = ctx.obj
    with guarded(state, "fredholm"):
        matrix = read_matrix(matrix_path)
        terms = max_terms or state.settings.fredholm_max_terms
        log_det = fredholm_log_det(matrix, tol, terms)
        exact = det_rational(DenseMatrix.identity(matrix.order) - matrix)
        data: dict[str, Any] = {
            "n": matrix.order,
            "log_det": log_det,
            "det": float(np.exp(log_det)),
            "exact_det": format_rational(exact),
            "tol": tol,
        }
        if matrix.is_nonnegative():
            estimate = spectral_radius_estimate(
                matrix,
                state.settings.power_tolerance,
                max_iterations=state.settings.power_max_iterations,
            )
            data["spectral_radius"] = [estimate.lower, estimate.upper]
        state.emit_report(data, render_mapping(data))
        state.report.done("fredholm", f"log det = {log_det:.12g}")
    _finish(ctx)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run the command line and return the exit status.

    Parameters
    ----------
    argv : Optional[Sequence[str]]
        Arguments without the program name; ``sys.argv[1:]`` if None.
        (Default value = None)

    Returns
    -------
    int
        0 on success, 2 for hypothesis violations and inapplicable claims,
        1 for failures and internal errors, 64 for usage errors.
    """
    args = list(sys.argv[1:] if argv is None else argv)
    try:
        code = cli.main(args=args, prog_name="detbound", standalone_mode=False)
    except click.UsageError as e:
        e.show()
        return EXIT_USAGE
    except click.ClickException as e:
        e.show()
        return 1
    except click.Abort:
        click.echo("Aborted!", err=True)
        return 1
    return code if isinstance(code, int) else 0


def main() -> None:
    """Console script entry point."""
    sys.exit(run())
