#!/usr/bin/env python3
"""
CLI Interface for dynkin-walk
Click command group over graph generation, walk matrices, Smith normal forms,
divisor matrices, Chebyshev checks and the D_n verification harness.

Big integers are written as decimal strings in JSON output.
"""

import json
import logging
import sys
import traceback
from pathlib import Path
from typing import Iterable, List, Optional

import click
from rich import box
from rich.console import Console
from rich.table import Table

from .chebyshev import chebyshev_t, chebyshev_u, discriminant, run_all_checks
from .config_manager import ConfigManager
from .errors import DynkinWalkError, Graph6ParseError, InvalidParameterError
from .exact_linalg import (
    BigMatrix,
    format_matrix,
    parse_matrix,
    rank_mod2,
    rank_rational,
    smith_normal_form,
)
from .graph_core import (
    Partition,
    adjacency_matrix,
    build_dynkin_d,
    divisor_of_partition,
    dynkin_partition,
    emit_edge_list,
    emit_graph6,
    parse_graph6,
    random_corpus,
    read_graph,
)
from .utils.logger import setup_logger
from .verify import VerifyEngine, VerifyReport, check_rank2_graphs
from .walk import main_polynomial, walk_pair

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


class AppContext:
    """Config and logger shared by every subcommand"""

    def __init__(self, config: ConfigManager, logger):
        self.config = config
        self.logger = logger

    def wants_json(self, flag: bool) -> bool:
        return flag or self.config.get('general', 'output_format', fallback='text') == 'json'


def _stdout_console() -> Console:
    return Console(file=sys.stdout, width=160, color_system=None, highlight=False, soft_wrap=True)


def _emit_json(obj) -> None:
    click.echo(json.dumps(obj, sort_keys=True))


def _matrix_strings(m: BigMatrix) -> List[List[str]]:
    return [[str(x) for x in m.row(i)] for i in range(m.rows)]


def _compress_diag(diag: Iterable[str]) -> str:
    """'1 1 1 2 0' -> '1^3 2 0'"""
    runs = []
    for d in diag:
        if runs and runs[-1][0] == d:
            runs[-1][1] += 1
        else:
            runs.append([d, 1])
    return " ".join(d if k == 1 else f"{d}^{k}" for d, k in runs)


def _require_one(n: Optional[int], source) -> None:
    if (n is None) == (source is None):
        raise click.UsageError("give exactly one of --n or --input")


@click.group()
@click.option('--debug', is_flag=True, help='Log to stderr at DEBUG level')
@click.option('--config-dir', type=click.Path(file_okay=False, path_type=Path), default=None,
              help='Directory holding config.ini and logs (default ~/.config/dynkin-walk)')
@click.pass_context
def cli(ctx, debug, config_dir):
    """Walk matrices, Smith normal forms and the D_n verification harness"""
    config = ConfigManager(config_dir)
    logger = setup_logger(debug=debug, log_dir=config.log_dir,
                          level=config.get('general', 'log_level', fallback='INFO'))
    ctx.obj = AppContext(config, logger)


@cli.command('gen-dn')
@click.option('--n', 'n', type=int, required=True, help='Number of vertices (n >= 4)')
@click.option('--format', 'fmt', type=click.Choice(['edges', 'graph6', 'matrix']), default='edges')
@click.pass_obj
def gen_dn(app: AppContext, n, fmt):
    """Emit the Dynkin graph D_n"""
    g = build_dynkin_d(n)
    if fmt == 'edges':
        click.echo(emit_edge_list(g), nl=False)
    elif fmt == 'graph6':
        click.echo(emit_graph6(g))
    else:
        click.echo(format_matrix(adjacency_matrix(g)), nl=False)
    return EXIT_OK


@cli.command()
@click.option('--n', 'n', type=int, default=None, help='Use D_n')
@click.option('--input', 'source', type=click.File('r'), default=None,
              help='graph6 or edge-list file, "-" for stdin')
@click.option('--hat', is_flag=True, help='Print the truncated matrix instead of W(G)')
@click.option('--main-poly', is_flag=True, help='Print the main polynomial of the walk recurrence')
@click.option('--json', 'as_json', is_flag=True)
@click.pass_obj
def walk(app: AppContext, n, source, hat, main_poly, as_json):
    """Walk matrix W(G) = [e, Ae, ..., A^{n-1}e]"""
    _require_one(n, source)
    g = build_dynkin_d(n) if n is not None else read_graph(source.read())
    if main_poly:
        poly = main_polynomial(g)
        if app.wants_json(as_json):
            _emit_json({"degree": poly.degree, "coefficients": [str(c) for c in poly.coeffs]})
        else:
            click.echo(str(poly))
        return EXIT_OK

    pair = walk_pair(g)
    m = pair.hatW if hat else pair.W
    app.logger.debug(f"walk matrix {m.rows}x{m.cols} for a {g.n}-vertex graph")
    if app.wants_json(as_json):
        _emit_json({"rows": m.rows, "cols": m.cols, "entries": _matrix_strings(m)})
    else:
        click.echo(format_matrix(m), nl=False)
    return EXIT_OK


def _read_matrix(n: Optional[int], source, hat: bool) -> BigMatrix:
    _require_one(n, source)
    if source is not None:
        return parse_matrix(source.read())
    pair = walk_pair(build_dynkin_d(n))
    return pair.hatW if hat else pair.W


@cli.command()
@click.option('--input', 'source', type=click.File('r'), default=None,
              help='Matrix text file, "-" for stdin')
@click.option('--n', 'n', type=int, default=None, help='Use W(D_n)')
@click.option('--hat', is_flag=True, help='With --n, use the truncated walk matrix')
@click.option('--witness', is_flag=True, help='Also print the unimodular U and V')
@click.option('--json', 'as_json', is_flag=True)
@click.pass_obj
def snf(app: AppContext, source, n, hat, witness, as_json):
    """Smith normal form diagonal of an integer matrix"""
    m = _read_matrix(n, source, hat)
    result = smith_normal_form(m)
    if app.wants_json(as_json):
        data = {"diag": [str(d) for d in result.diag], "rank": result.rank}
        if witness:
            data["U"] = _matrix_strings(result.U)
            data["V"] = _matrix_strings(result.V)
        _emit_json(data)
        return EXIT_OK
    click.echo(" ".join(str(d) for d in result.diag))
    if witness:
        click.echo("U")
        click.echo(format_matrix(result.U), nl=False)
        click.echo("V")
        click.echo(format_matrix(result.V), nl=False)
    return EXIT_OK


@cli.command()
@click.option('--input', 'source', type=click.File('r'), default=None,
              help='Matrix text file, "-" for stdin')
@click.option('--n', 'n', type=int, default=None, help='Use W(D_n)')
@click.option('--hat', is_flag=True, help='With --n, use the truncated walk matrix')
@click.option('--mod2', is_flag=True, help='Rank over GF(2) instead of the rationals')
@click.pass_obj
def rank(app: AppContext, source, n, hat, mod2):
    """Rank of an integer matrix"""
    m = _read_matrix(n, source, hat)
    click.echo(str(rank_mod2(m) if mod2 else rank_rational(m)))
    return EXIT_OK


@cli.command()
@click.option('--n', 'n', type=int, default=None, help='Use D_n with cells {1,2},{3},...,{n}')
@click.option('--input', 'source', type=click.File('r'), default=None, help='graph6 or edge-list file')
@click.option('--cells', default=None, help='Partition such as "1,2;3;4" (required with --input)')
@click.option('--json', 'as_json', is_flag=True)
@click.pass_obj
def divisor(app: AppContext, n, source, cells, as_json):
    """Characteristic matrix C and divisor matrix B of an equitable partition"""
    _require_one(n, source)
    if n is not None:
        g, partition = build_dynkin_d(n), dynkin_partition(n)
    else:
        if cells is None:
            raise click.UsageError("--input needs --cells")
        g, partition = read_graph(source.read()), Partition.parse(cells)
    data = divisor_of_partition(g, partition)
    if app.wants_json(as_json):
        _emit_json({"C": _matrix_strings(data.C), "B": _matrix_strings(data.B)})
    else:
        click.echo("C")
        click.echo(format_matrix(data.C), nl=False)
        click.echo("B")
        click.echo(format_matrix(data.B), nl=False)
    return EXIT_OK


@cli.command()
@click.option('--n', 'n', type=int, default=None, help='Print T_n, U_n and their discriminants')
@click.option('--check', is_flag=True, help='Run the trigonometric product and sum checks')
@click.option('--m', 'm', type=int, default=30, show_default=True, help='Largest parameter for --check')
@click.option('--tol', type=float, default=None, help='Log-space tolerance (default from config)')
@click.option('--json', 'as_json', is_flag=True)
@click.pass_obj
def cheb(app: AppContext, n, check, m, tol, as_json):
    """Chebyshev polynomials and the identities built on their roots"""
    if (n is None) == (not check):
        raise click.UsageError("give exactly one of --n or --check")
    if n is not None:
        if n < 1:
            raise InvalidParameterError(f"n must be at least 1, got {n}")
        t, u = chebyshev_t(n), chebyshev_u(n)
        data = {"n": n, "T": str(t), "U": str(u),
                "disc_T": str(discriminant(t)), "disc_U": str(discriminant(u))}
        if app.wants_json(as_json):
            _emit_json(data)
        else:
            click.echo(f"T_{n}(x) = {t}")
            click.echo(f"U_{n}(x) = {u}")
            click.echo(f"disc T_{n} = {data['disc_T']}")
            click.echo(f"disc U_{n} = {data['disc_U']}")
        return EXIT_OK

    tol = tol if tol is not None else app.config.getfloat('numeric', 'check_tol', fallback=1e-9)
    results = run_all_checks(m, tol)
    failed = [r for r in results if not r.passed]
    if app.wants_json(as_json):
        for r in results:
            _emit_json(r.to_dict())
    else:
        table = Table(box=box.SIMPLE)
        table.add_column("check")
        table.add_column("params")
        table.add_column("residual", justify="right")
        table.add_column("status")
        for r in results:
            params = ", ".join(f"{k}={v:g}" if isinstance(v, float) else f"{k}={v}" for k, v in r.params.items())
            table.add_row(r.name, params, f"{r.residual:.2e}", "ok" if r.passed else "FAIL")
        console = _stdout_console()
        console.print(table)
        console.print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    app.logger.info(f"cheb --check m={m}: {len(failed)} failure(s)")
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def _verify_table(reports: List[VerifyReport]) -> Table:
    table = Table(box=box.SIMPLE)
    for header in ("n", "det hat", "rank W", "SNF(W)", "rank2", "vanishing", "status"):
        table.add_column(header, justify="right" if header in ("n", "rank W", "rank2") else "left")
    for r in reports:
        table.add_row(
            str(r.n),
            r.det_hat,
            str(r.rank_W),
            _compress_diag(r.snf_diag),
            str(r.rank2),
            ",".join(str(j) for j in r.vanishing_indices) or "-",
            "ok" if r.passed else "FAIL " + ",".join(r.failed_flags()),
        )
    return table


@cli.command()
@click.option('--from', 'n_from', type=int, default=None, help='First n (default from config)')
@click.option('--to', 'n_to', type=int, default=None, help='Last n (default from config)')
@click.option('--workers', type=int, default=None, help='Worker processes; 0 means one per physical core')
@click.option('--json', 'as_json', is_flag=True, help='One JSON record per n')
@click.option('--timing', is_flag=True, help='Include wall time and memory in JSON records')
@click.option('--no-progress', is_flag=True, help='Hide the progress bar')
@click.pass_obj
def verify(app: AppContext, n_from, n_to, workers, as_json, timing, no_progress):
    """Check every determinant, rank, SNF and eigen-data claim for D_n"""
    n_from = n_from if n_from is not None else app.config.getint('verify', 'n_from', fallback=4)
    n_to = n_to if n_to is not None else app.config.getint('verify', 'n_to', fallback=64)
    engine = VerifyEngine(app.config, app.logger)
    reports = engine.run_range(n_from, n_to, workers, show_progress=not no_progress)

    if app.wants_json(as_json):
        for r in reports:
            _emit_json(r.to_dict(include_timing=timing))
    else:
        console = _stdout_console()
        console.print(_verify_table(reports))
        passed = sum(1 for r in reports if r.passed)
        console.print(f"{passed}/{len(reports)} values of n passed every check")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_CHECK_FAILED


@cli.command()
@click.option('--count', type=int, default=None, help='Number of random graphs (default from config)')
@click.option('--n-max', type=int, default=None, help='Largest vertex count (default from config)')
@click.option('--seed', type=int, default=None, help='Generator seed (default from config)')
@click.option('--check', is_flag=True, help='Check the GF(2) walk-matrix rank bound instead of emitting')
@click.option('--input', 'source', type=click.File('r'), default=None,
              help='graph6 corpus to check, one graph per line')
@click.option('--dynkin-max', type=int, default=64, show_default=True,
              help='With --check and no --input, also check D_4..D_k')
@click.option('--json', 'as_json', is_flag=True)
@click.pass_obj
def corpus(app: AppContext, count, n_max, seed, check, source, dynkin_max, as_json):
    """Seeded G(n, 1/2) corpus in graph6, or the GF(2) rank bound over one"""
    count = count if count is not None else app.config.getint('corpus', 'count', fallback=1000)
    n_max = n_max if n_max is not None else app.config.getint('corpus', 'n_max', fallback=16)
    seed = seed if seed is not None else app.config.getint('corpus', 'seed', fallback=42)

    if not check:
        if source is not None:
            raise click.UsageError("--input is only used with --check")
        for g in random_corpus(count, n_max, seed):
            click.echo(emit_graph6(g))
        return EXIT_OK

    if source is not None:
        graphs = []
        for line_no, line in enumerate(source.read().splitlines(), start=1):
            line = line.strip()
            if not line:
                continue
            try:
                graphs.append(parse_graph6(line))
            except Graph6ParseError as e:
                raise DynkinWalkError(f"line {line_no}: {e}") from None
        checked = len(graphs)
        violations = check_rank2_graphs(graphs)
    else:
        engine = VerifyEngine(app.config, app.logger)
        violations = engine.run_corpus(count, n_max, seed, dynkin_max)
        checked = count + max(0, dynkin_max - 3)

    if app.wants_json(as_json):
        _emit_json({"checked": checked,
                    "violations": [{"n": v.n, "graph6": v.graph6, "rank2": v.rank2, "bound": v.bound}
                                   for v in violations]})
    else:
        for v in violations:
            click.echo(f"violation: {v.graph6} n={v.n} rank2={v.rank2} bound={v.bound}")
        click.echo(f"checked {checked} graphs, {len(violations)} violation(s)")
    return EXIT_CHECK_FAILED if violations else EXIT_OK


def _report_error(e: Exception, argv: Optional[List[str]]) -> int:
    logging.getLogger("dynkin-walk").error(f"{type(e).__name__}: {e}")
    click.echo(f"error: {e}", err=True)
    if argv and "--debug" in argv:
        click.echo(traceback.format_exc(), err=True, nl=False)
    return EXIT_USAGE


def run(argv: Optional[List[str]] = None) -> int:
    """Run one invocation and return its exit code"""
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        rv = cli.main(args=argv, prog_name='dynkin-walk', standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.exceptions.Abort:
        click.echo("Aborted!", err=True)
        return EXIT_USAGE
    except (DynkinWalkError, OSError) as e:
        return _report_error(e, argv)
    return rv if isinstance(rv, int) else EXIT_OK


def main():
    sys.exit(run(sys.argv[1:]))
