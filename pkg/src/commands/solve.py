import logging
import sys

import click

from src.commands.run_base import run_options, start_run
from src.common.utils import greenify, log_verbose, write_report
from src.config.settings import REPORT_FILENAME, TRACE_FILENAME
from src.grid.dump import dump_field
from src.nehari.descent import solve_multistart
from src.nehari.exceptions import LineSearchStalledError

logger = logging.getLogger(__name__)

U_FILENAME = 'u.csv'
V_FILENAME = 'v.csv'


@run_options
@click.command(help='Computes the ground state by multi-start descent on the Nehari manifold.')
# pylint: disable-next=too-many-arguments,too-many-locals
def solve(
    config_path: str | None,
    seed: int | None,
    output_dir: str | None,
    overrides: list,
    log_format: str,
    log_level: str,
    verbose: bool,
    pool_size: int | None,
) -> None:
    manifest, problem = start_run(
        'solve',
        config_path,
        output_dir,
        seed,
        overrides,
        verbose=verbose,
        log_level=log_level,
        log_format=log_format,
        pool_size=pool_size,
    )
    try:
        cfg = problem.problem_config()
        cfg.validate()
        opts = problem.solver_options()
        reports = solve_multistart(cfg, opts)
    except LineSearchStalledError as e:
        trace_path = manifest.output_dir / TRACE_FILENAME
        write_report(trace_path, {'error': str(e), 'trace': [t.to_dict() for t in e.trace]})
        log_verbose(e)
        click.secho(f'Solver stalled, trace saved to {trace_path}', fg='red', err=True)
        sys.exit(1)
    except Exception as e:
        log_verbose(e)
        sys.exit(1)

    best = reports[0]
    energies = [r.energy_value for r in reports]
    spread = (max(energies) - min(energies)) / max(abs(best.energy_value), 1e-300)
    report = {
        'manifest': manifest.to_dict(),
        'ground_state': best.to_dict(),
        'starts': [r.to_dict(with_trace=False) for r in reports],
        'energy_spread': spread,
        'budget': cfg.budget.to_dict(),
        'solver': opts.to_dict(),
        'config': cfg.to_dict(),
    }
    write_report(manifest.output_dir / REPORT_FILENAME, report)
    dump_field(best.state.u, manifest.output_dir / U_FILENAME)
    dump_field(best.state.v, manifest.output_dir / V_FILENAME)

    if not best.converged:
        logger.warning(
            'best start stopped at gradient %.3e above tolerance %.1e', best.gradient_norm, opts.tol
        )
    click.echo(
        f'Done. Ground level {greenify(f"{best.energy_value:.12g}")} '
        f'from {greenify(len(reports))} starts.\n'
        f'Report saved to {greenify(manifest.output_dir / REPORT_FILENAME)}'
    )
