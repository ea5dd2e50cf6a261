# pylint: disable=logging-fstring-interpolation, too-many-arguments, too-many-locals

"""
Command-line surface for the rank-k numerical range toolkit.

Commands:
---------
range    Rank-k range of a Hermitian matrix file.
project  Build a compression projection (pairing or general construction) and write it out.
verify   Residual ||PTP - lambda P||_F of a projection file against a matrix file.
hull     Hull-intersection region of a normal matrix or spectrum file, as CSV vertices.
scan     Search residuals over a grid of candidate lambdas, as CSV.
qec      Check a code against an error model, or search for codes.

Exit codes: 0 success, 1 error, 2 definitive negative answer (Empty, lambda out of range,
not correctable), 3 resource cap hit.

Settings come from config.ini next to this file; flags override it, and HRNR_SEED overrides the
configured seed. Logs go to standard error, results to standard output.

Example:
--------
python main.py range --input files/diag6.json -k 2
"""

import configparser
import json
import logging
import os
import sys
from typing import List, Optional, Sequence

import click

import validation
from compression import certify
from errors import BadRank, CompressionError, LambdaOutOfRange, NotACompression
from file_formats import (MatrixFile, code_report_to_dict, load_error_model, load_projection, load_spectrum,
                          projection_to_dict, save_projection)
from hermitian_range import RangeKind, format_real, hermitian_range
from linalg_core import hermitian_eig, scale_of
from normal_geometry import RegionKind, hull_intersection_region, normal_spectrum, region_status
from projections import construct_projection_general, pairing_projection
from qec import code_check, joint_search
from search import SearchConfig, scan_region

logger = logging.getLogger(__name__)

DEFAULT_CONFIG = os.path.join(os.path.dirname(os.path.abspath(__file__)), "config.ini")
PROJECT_RTOL = 1e-9


def fmt_file(x: float) -> str:
    """17 significant digits, enough to round-trip any double; never prints -0."""
    return f"{float(x) + 0.0:.17g}"


class InputError(click.UsageError):
    """Bad flags or values. Exits 1: code 2 is reserved for definitive negative answers."""
    exit_code = 1


class ToolkitGroup(click.Group):
    """Click group whose usage errors exit with InputError's code."""
    def make_context(self, info_name, args, parent=None, **extra):
        try:
            return super().make_context(info_name, args, parent=parent, **extra)
        except click.UsageError as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(exc.format_message(), exc.ctx) from exc

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except click.UsageError as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(exc.format_message(), exc.ctx) from exc


def fail(exc: CompressionError) -> None:
    """Report a toolkit error on standard error and exit with its code."""
    click.echo(f"error: {exc}", err=True)
    sys.exit(exc.exit_code)


def emit(lines: Sequence[str], out: Optional[str]) -> None:
    """Write lines to `out`, or to standard output when no path is given."""
    text = "".join(f"{line}\n" for line in lines)
    if out:
        with open(out, 'w', encoding='utf-8') as handle:
            handle.write(text)
    else:
        click.echo(text, nl=False)


def resolve_seed(config_parser: configparser.ConfigParser, seed: Optional[int]) -> int:
    """Flag (or HRNR_SEED, via click) first, then config.ini, then 0."""
    if seed is not None:
        return seed
    return config_parser.getint('search', 'seed', fallback=0)


def search_config(config_parser: configparser.ConfigParser, seed: Optional[int]) -> SearchConfig:
    """SearchConfig from the [search] section with the resolved seed."""
    section = config_parser['search'] if config_parser.has_section('search') else None
    return SearchConfig.from_config(section).replace(seed=resolve_seed(config_parser, seed))


def lambda_option(required: bool = True):
    """--lambda option parsed with `validation.parse_complex`."""
    def convert(_ctx, _param, value):
        if value is None:
            return None
        try:
            return validation.parse_complex(value)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    return click.option('--lambda', 'lam', required=required, callback=convert,
                        help="Compression value, e.g. 1.5 or 0.2-0.3i.")


seed_option = click.option('--seed', type=int, envvar='HRNR_SEED', default=None,
                           help="Random seed (default: HRNR_SEED, then config.ini).")
input_option = click.option('--input', '-i', 'input_path', type=click.Path(dir_okay=False),
                            help="Matrix file (JSON).")
rank_option = click.option('-k', 'k', type=int, required=True, help="Rank k.")


@click.group(cls=ToolkitGroup)
@click.option('--config', 'config_path', default=DEFAULT_CONFIG, show_default=True, type=click.Path(dir_okay=False),
              help="Settings file.")
@click.option('--verbose', '-v', is_flag=True, help="Debug logging on standard error.")
@click.pass_context
def cli(ctx, config_path: str, verbose: bool):
    """Higher-rank numerical ranges, compression projections and code checks."""
    config_parser = configparser.ConfigParser()
    config_parser.read(config_path)
    level = logging.DEBUG if verbose else config_parser.get('logging', 'level', fallback='WARNING').upper()
    logging.basicConfig(format='%(asctime)s %(levelname)-8s %(message)s', level=level, datefmt='%Y-%m-%d_%H:%M:%S',
                        stream=sys.stderr, force=True)
    ctx.obj = config_parser


@cli.command('range')
@click.option('--input', '-i', 'input_path', type=click.Path(dir_okay=False), required=True, help="Hermitian matrix file.")
@rank_option
def cmd_range(input_path: str, k: int):
    """Print the rank-k range of a Hermitian matrix: Interval lo hi, Singleton v or Empty."""
    try:
        matrix = MatrixFile.load(input_path).matrix
        ok, message = validation.validate_rank(k, matrix.shape[0])
        if not ok:
            raise BadRank(message)
        result = hermitian_range(matrix, k)
    except CompressionError as exc:
        fail(exc)
    click.echo(result.describe())
    if result.kind == RangeKind.EMPTY:
        sys.exit(2)


@cli.command('project')
@click.option('--input', '-i', 'input_path', type=click.Path(dir_okay=False), required=True, help="Hermitian matrix file.")
@rank_option
@lambda_option()
@click.option('--method', type=click.Choice(['pairing', 'general']), default='pairing', show_default=True)
@seed_option
@click.option('--out', '-o', type=click.Path(dir_okay=False), help="ProjectionFile to write (standard output if omitted).")
@click.pass_obj
def cmd_project(config_parser, input_path: str, k: int, lam: complex, method: str, seed: Optional[int], out: Optional[str]):
    """Build a rank-k projection P with PAP = lambda P."""
    try:
        matrix = MatrixFile.load(input_path).matrix
        if lam.imag != 0.0:
            raise LambdaOutOfRange(f"lambda={lam} is not real; the range of a Hermitian matrix is real.")
        eig = hermitian_eig(matrix)
        if method == 'pairing':
            projection = pairing_projection(eig, k, lam)
        else:
            seed = resolve_seed(config_parser, seed)
            projection = construct_projection_general(eig.shifted(lam.real), k, seed=seed, lam=lam.real)
        projection = certify(matrix, projection)
        limit = PROJECT_RTOL * scale_of(matrix)
        if projection.residual > limit:
            raise NotACompression(f"Constructed projection has residual {projection.residual:.3e} > {limit:.3e}.")
    except CompressionError as exc:
        fail(exc)
    logger.info(f"{method} projection of rank {k} at lambda={lam.real}")
    if out:
        save_projection(out, projection)
        click.echo(f"residual {fmt_file(projection.residual)}")
    else:
        # Standard output carries the projection document itself.
        click.echo(json.dumps(projection_to_dict(projection), allow_nan=False))
        click.echo(f"residual {fmt_file(projection.residual)}", err=True)


@cli.command('verify')
@click.option('--input', '-i', 'input_path', type=click.Path(dir_okay=False), required=True, help="Matrix file.")
@click.option('--projection', '-p', 'projection_path', type=click.Path(dir_okay=False), required=True,
              help="ProjectionFile.")
@lambda_option(required=False)
def cmd_verify(input_path: str, projection_path: str, lam: Optional[complex]):
    """Print the residual ||PTP - lambda P||_F (lambda defaults to the one in the projection file)."""
    try:
        matrix = MatrixFile.load(input_path).matrix
        projection = certify(matrix, load_projection(projection_path), lam)
    except CompressionError as exc:
        fail(exc)
    click.echo(f"rank {projection.rank}")
    click.echo(f"residual {fmt_file(projection.residual)}")


@cli.command('hull')
@input_option
@click.option('--spectrum', '-s', 'spectrum_path', type=click.Path(dir_okay=False), help="Spectrum file (JSON).")
@rank_option
@click.option('--max-subsets', type=int, default=None, help="Subset enumeration cap (default from config.ini).")
@click.option('--out', '-o', type=click.Path(dir_okay=False), help="CSV file (standard output if omitted).")
@click.pass_obj
def cmd_hull(config_parser, input_path: Optional[str], spectrum_path: Optional[str], k: int,
             max_subsets: Optional[int], out: Optional[str]):
    """Vertices of the hull-intersection region of a normal matrix, one "re,im" per line."""
    if bool(input_path) == bool(spectrum_path):
        raise InputError("Give exactly one of --input and --spectrum.")
    if max_subsets is None:
        max_subsets = config_parser.getint('hull', 'max-subsets', fallback=1_000_000)
    try:
        spectrum = load_spectrum(spectrum_path) if spectrum_path else normal_spectrum(MatrixFile.load(input_path).matrix)
        ok, message = validation.validate_rank(k, spectrum.size)
        if not ok:
            raise BadRank(message)
        region = hull_intersection_region(spectrum, k, max_subsets)
    except CompressionError as exc:
        fail(exc)
    logger.info(f"Hull intersection for k={k}: {region.kind.name}, status {region_status(spectrum).value}")
    if region.kind == RegionKind.EMPTY:
        emit(["# Empty"], out)
        sys.exit(2)
    emit([f"{fmt_file(z.real)},{fmt_file(z.imag)}" for z in region.get_vertices()], out)


@cli.command('scan')
@click.option('--input', '-i', 'input_path', type=click.Path(dir_okay=False), required=True, help="Matrix file.")
@rank_option
@click.option('--grid', default='41x41', show_default=True, help="Grid points as NXxNY.")
@click.option('--bbox', default=None, help="x0,x1,y0,y1 (default: numerical-range box padded 10%).")
@click.option('--restarts', type=int, default=None, help="Restarts per grid point (default from config.ini).")
@click.option('--workers', type=int, default=None, help="Worker threads (default from config.ini).")
@seed_option
@click.option('--out', '-o', type=click.Path(dir_okay=False), help="CSV file (standard output if omitted).")
@click.pass_obj
def cmd_scan(config_parser, input_path: str, k: int, grid: str, bbox: Optional[str], restarts: Optional[int],
             workers: Optional[int], seed: Optional[int], out: Optional[str]):
    """Best search residual at each grid point, as CSV "re,im,residual"."""
    try:
        grid_size = validation.parse_grid(grid)
        box = validation.parse_bbox(bbox) if bbox else None
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if restarts is None:
        restarts = config_parser.getint('scan', 'restarts', fallback=8)
    if workers is None:
        workers = config_parser.getint('scan', 'workers', fallback=1)
    try:
        matrix = MatrixFile.load(input_path).matrix
        cfg = search_config(config_parser, seed)
        results = scan_region(matrix, k, grid_size, box, cfg, restarts=restarts, workers=workers)
    except CompressionError as exc:
        fail(exc)
    lines: List[str] = ["re,im,residual"]
    lines += [f"{fmt_file(lam.real)},{fmt_file(lam.imag)},{fmt_file(residual)}" for lam, residual in results]
    emit(lines, out)


@cli.command('qec')
@click.option('--errors', '-e', 'errors_path', type=click.Path(dir_okay=False), required=True, help="Error-model file.")
@click.option('--code', '-c', 'code_path', type=click.Path(dir_okay=False), help="ProjectionFile of the code space.")
@click.option('--search', 'search_k', type=int, default=None, help="Search for codes of this dimension.")
@click.option('--tol', type=float, default=1e-10, show_default=True, help="Relative code-check tolerance.")
@click.option('--restarts', type=int, default=None, help="Search restarts (default from config.ini).")
@seed_option
@click.option('--json', 'as_json', is_flag=True, help="Print JSON instead of text.")
@click.pass_obj
def cmd_qec(config_parser, errors_path: str, code_path: Optional[str], search_k: Optional[int], tol: float,
            restarts: Optional[int], seed: Optional[int], as_json: bool):
    """Check P_C A_i* A_j P_C = lambda_ij P_C for a code, or search for codes."""
    if bool(code_path) == (search_k is not None):
        raise InputError("Give exactly one of --code and --search.")
    try:
        errors = load_error_model(errors_path)
        if code_path:
            report = code_check(errors, load_projection(code_path), tol)
        else:
            cfg = search_config(config_parser, seed)
            if restarts is not None:
                cfg = cfg.replace(restarts=restarts)
            codes = joint_search(errors, search_k, cfg)
    except CompressionError as exc:
        fail(exc)
    if code_path:
        click.echo(json.dumps(code_report_to_dict(report)) if as_json else report.describe())
        if not report.correctable:
            sys.exit(2)
        return
    if as_json:
        click.echo(json.dumps([{"projection": projection_to_dict(p), "report": code_report_to_dict(r)}
                               for p, r in codes]))
    else:
        click.echo(f"codes {len(codes)} (numerical evidence)")
        for idx, (projection, report) in enumerate(codes):
            click.echo(f"code {idx} max_residual {format_real(report.max_residual)}")
            for column in projection.frame.T:
                click.echo(" ".join(f"{fmt_file(z.real)},{fmt_file(z.imag)}" for z in column))
    if not codes:
        sys.exit(2)


if __name__ == '__main__':
    cli()  # pylint: disable=no-value-for-parameter
