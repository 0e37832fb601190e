from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Optional

import typer

from rapolytope._exceptions import RAPolytopeError
from rapolytope._models import RunReport
from rapolytope._utils import dump_json, write_output
from rapolytope.constants import AuditStrategy, DisjointMode
from rapolytope.polytope_core import build_polytope_P, dump_polytope, load_polytope
from rapolytope.verifier import PolytopeVerifier, load_golden_values

rapolytope_app = typer.Typer(add_completion=False)

INPUT_OPTION = typer.Option(
    None,
    "--input",
    exists=True,
    dir_okay=False,
    help="Polytope JSON file to check instead of the built-in 48-facet polytope.",
)
JSON_OPTION = typer.Option(None, "--json", help="Write the machine-readable report to this file.")
THREADS_OPTION = typer.Option(
    None, "--threads", help="Cap on worker threads, overrides RAPOLYTOPE_THREADS."
)
VERBOSE_OPTION = typer.Option(False, "--verbose", help="Log progress at INFO level to stderr.")
DEBUG_OPTION = typer.Option(
    False, "--debug", help="Log at DEBUG level to stderr and to a rapolytope_debug_<time>.txt file."
)
GOLDEN_OPTION = typer.Option(
    None, "--golden", exists=True, dir_okay=False, help="Golden value file to compare against."
)


@contextmanager
def _input_errors() -> Iterator[None]:
    try:
        yield
    except RAPolytopeError as e:
        typer.echo(f"error: {e}", err=True)
        raise typer.Exit(code=2)


def _verifier(
    input_file: Optional[Path],
    threads: Optional[int],
    verbose: bool,
    debug: bool,
    golden: Optional[Path] = None,
) -> PolytopeVerifier:
    polytope = load_polytope(input_file) if input_file is not None else None
    golden_values = load_golden_values(golden) if golden is not None else None
    return PolytopeVerifier(
        polytope=polytope, threads=threads, golden=golden_values, debug_mode=debug, verbose=verbose
    )


def _print_report(report: RunReport) -> None:
    width = max((len(check.name) for check in report.checks), default=0)
    for check in report.checks:
        status = typer.style(
            "PASS" if check.passed else "FAIL",
            fg=typer.colors.GREEN if check.passed else typer.colors.RED,
        )
        typer.echo(f"{status}  {check.name.ljust(width)}  {check.detail}")
    typer.echo(f"{report.command}: {'pass' if report.passed else 'fail'} ({report.duration_seconds:.2f}s)")


def _finish(report: RunReport, json_file: Optional[Path]) -> None:
    _print_report(report)
    if json_file is not None:
        write_output(dump_json(report.to_dict()), json_file)
    raise typer.Exit(code=0 if report.passed else 1)


@rapolytope_app.command("gen-p")
def gen_p(json_file: Optional[Path] = JSON_OPTION) -> None:
    """
    Emits the built-in polytope as JSON, to stdout or to --json.
    """
    data = dump_polytope(build_polytope_P())
    if json_file is None:
        typer.echo(data.decode())
    else:
        write_output(data, json_file)


@rapolytope_app.command()
def gram(
    input_file: Optional[Path] = INPUT_OPTION,
    json_file: Optional[Path] = JSON_OPTION,
    threads: Optional[int] = THREADS_OPTION,
    verbose: bool = VERBOSE_OPTION,
    debug: bool = DEBUG_OPTION,
) -> None:
    """
    Distinct off-diagonal Gram values.
    """
    with _input_errors():
        report = _verifier(input_file, threads, verbose, debug).gram()
    _finish(report, json_file)


@rapolytope_app.command("check-right-angled")
def check_right_angled(
    input_file: Optional[Path] = INPUT_OPTION,
    json_file: Optional[Path] = JSON_OPTION,
    verbose: bool = VERBOSE_OPTION,
    debug: bool = DEBUG_OPTION,
) -> None:
    """
    Checks that every intersecting pair of facets is orthogonal; names the first offending pair.
    """
    with _input_errors():
        report = _verifier(input_file, None, verbose, debug).right_angled()
    _finish(report, json_file)


@rapolytope_app.command("verify-lemma32")
@rapolytope_app.command("verify-positions")
def verify_positions(
    input_file: Optional[Path] = INPUT_OPTION,
    json_file: Optional[Path] = JSON_OPTION,
    threads: Optional[int] = THREADS_OPTION,
    verbose: bool = VERBOSE_OPTION,
    debug: bool = DEBUG_OPTION,
) -> None:
    """
    Compares the cube-diagram prediction with the actual position of every pair of facets.
    """
    with _input_errors():
        report = _verifier(input_file, threads, verbose, debug).positions()
    _finish(report, json_file)


@rapolytope_app.command()
def ridges(
    facet: Optional[str] = typer.Option(None, "--facet", help='Facet label, e.g. "S(1,1,1,0)".'),
    input_file: Optional[Path] = INPUT_OPTION,
    json_file: Optional[Path] = JSON_OPTION,
    verbose: bool = VERBOSE_OPTION,
    debug: bool = DEBUG_OPTION,
) -> None:
    """
    Number of ridges of one facet, or of every facet when --facet is omitted.
    """
    with _input_errors():
        report = _verifier(input_file, None, verbose, debug).ridges(facet)
    _finish(report, json_file)


@rapolytope_app.command()
def vertices(
    input_file: Optional[Path] = INPUT_OPTION,
    json_file: Optional[Path] = JSON_OPTION,
    threads: Optional[int] = THREADS_OPTION,
    verbose: bool = VERBOSE_OPTION,
    debug: bool = DEBUG_OPTION,
) -> None:
    """
    Enumerates finite and ideal vertices; the JSON report lists every ray with its incident facets.
    """
    with _input_errors():
        report = _verifier(input_file, threads, verbose, debug).vertex_check(with_listing=True)
    _finish(report, json_file)


@rapolytope_app.command("finite-volume")
def finite_volume(
    input_file: Optional[Path] = INPUT_OPTION,
    json_file: Optional[Path] = JSON_OPTION,
    threads: Optional[int] = THREADS_OPTION,
    verbose: bool = VERBOSE_OPTION,
    debug: bool = DEBUG_OPTION,
) -> None:
    """
    Certifies finite volume with the Coxeter-diagram method and the vertex ray oracle.
    """
    with _input_errors():
        report = _verifier(input_file, threads, verbose, debug).finite_volume()
    _finish(report, json_file)


@rapolytope_app.command()
def symmetries(
    input_file: Optional[Path] = INPUT_OPTION,
    json_file: Optional[Path] = JSON_OPTION,
    threads: Optional[int] = THREADS_OPTION,
    verbose: bool = VERBOSE_OPTION,
    debug: bool = DEBUG_OPTION,
) -> None:
    """
    Symmetry group order, action on the cubes and exact realizing matrices.
    """
    with _input_errors():
        report = _verifier(input_file, threads, verbose, debug).symmetries()
    _finish(report, json_file)


@rapolytope_app.command("verify-lemma33")
@rapolytope_app.command("verify-families")
def verify_families(
    input_file: Optional[Path] = INPUT_OPTION,
    json_file: Optional[Path] = JSON_OPTION,
    threads: Optional[int] = THREADS_OPTION,
    verbose: bool = VERBOSE_OPTION,
    debug: bool = DEBUG_OPTION,
) -> None:
    """
    Checks that every symmetry keeps cube walls and type III facets apart and swaps types I and II wholesale.
    """
    with _input_errors():
        report = _verifier(input_file, threads, verbose, debug).families()
    _finish(report, json_file)


@rapolytope_app.command()
def ends(
    mode: DisjointMode = typer.Option(DisjointMode.STRICT, "--mode", case_sensitive=False),
    input_file: Optional[Path] = INPUT_OPTION,
    json_file: Optional[Path] = JSON_OPTION,
    threads: Optional[int] = THREADS_OPTION,
    verbose: bool = VERBOSE_OPTION,
    debug: bool = DEBUG_OPTION,
) -> None:
    """
    Census of maximal pairwise disjoint facet sets up to symmetry, each audited for determination.
    """
    with _input_errors():
        report = _verifier(input_file, threads, verbose, debug).ends(mode)
    _finish(report, json_file)


@rapolytope_app.command()
def audit(
    remove: str = typer.Option(
        "", "--remove", help="Comma separated labels of the removed facets, e.g. X+,S_X-."
    ),
    strategy: AuditStrategy = typer.Option(AuditStrategy.GREEDY, "--strategy", case_sensitive=False),
    mode: DisjointMode = typer.Option(DisjointMode.STRICT, "--mode", case_sensitive=False),
    input_file: Optional[Path] = INPUT_OPTION,
    json_file: Optional[Path] = JSON_OPTION,
    verbose: bool = VERBOSE_OPTION,
    debug: bool = DEBUG_OPTION,
) -> None:
    """
    Determination audit of every remaining facet after removing the given facets.
    """
    labels = [label.strip() for label in remove.split(",") if label.strip()]
    with _input_errors():
        report = _verifier(input_file, None, verbose, debug).audit(labels, strategy, mode)
    _finish(report, json_file)


@rapolytope_app.command()
def footprints(
    input_file: Optional[Path] = INPUT_OPTION,
    json_file: Optional[Path] = JSON_OPTION,
    verbose: bool = VERBOSE_OPTION,
    debug: bool = DEBUG_OPTION,
) -> None:
    """
    Boundary planes and spheres of every wall in the upper half-space model.
    """
    with _input_errors():
        report = _verifier(input_file, None, verbose, debug).footprints()
    _finish(report, json_file)


@rapolytope_app.command("verify-all")
def verify_all(
    input_file: Optional[Path] = INPUT_OPTION,
    json_file: Optional[Path] = JSON_OPTION,
    threads: Optional[int] = THREADS_OPTION,
    verbose: bool = VERBOSE_OPTION,
    debug: bool = DEBUG_OPTION,
    golden: Optional[Path] = GOLDEN_OPTION,
) -> None:
    """
    Runs every check; the built-in polytope is compared against the golden values.
    """
    with _input_errors():
        report = _verifier(input_file, threads, verbose, debug, golden).verify_all()
    _finish(report, json_file)


@rapolytope_app.command("freeze-golden")
def freeze_golden(
    golden: Path = typer.Option(..., "--golden", help="Destination of the golden value file."),
    threads: Optional[int] = THREADS_OPTION,
    verbose: bool = VERBOSE_OPTION,
    debug: bool = DEBUG_OPTION,
) -> None:
    """
    Computes vertex counts, f-vector and census sizes of the built-in polytope and writes them
    together with the shipped values.
    """
    with _input_errors():
        values = _verifier(None, threads, verbose, debug).freeze_golden(golden)
    typer.echo(f"wrote {len(values)} golden values to {golden}")


HELP_MSG = """
Exact verification of a right-angled hyperbolic polytope given by its Lorentzian facet normals.
Without --input every command checks the built-in 48-facet polytope in dimension 5.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on unreadable input or bad usage.

Examples:
 rapolytope verify-all --threads 8 --json report.json
 rapolytope ridges --facet "S(1,1,1,0)"
 rapolytope check-right-angled --input corrupted.json
 rapolytope audit --remove X+,S_X-
"""


def main() -> None:
    rapolytope_app.info.help = HELP_MSG
    rapolytope_app(prog_name="rapolytope")


if __name__ == "__main__":
    main()
