import sys
from pathlib import Path

import click
import numpy as np

from src.commands.run_base import run_options, start_run
from src.common.utils import greenify, log_verbose, write_report
from src.config.settings import REPORT_FILENAME
from src.functional.energy import energy, nehari_residual
from src.functional.states import random_positive_state
from src.functional.typings import CoupledState
from src.grid.dump import load_field
from src.nehari.fibering import project as project_state


@click.option(
    '--u-file',
    type=click.Path(exists=True, file_okay=True, dir_okay=False),
    help='CSV dump of the u component. A seeded random state is used when omitted.',
)
@click.option(
    '--v-file',
    type=click.Path(exists=True, file_okay=True, dir_okay=False),
    help='CSV dump of the v component. Required together with --u-file.',
)
@run_options
@click.command(help='Projects one state onto the Nehari manifold and reports its fiber.')
# pylint: disable-next=too-many-arguments,too-many-locals
def project(
    config_path: str | None,
    seed: int | None,
    output_dir: str | None,
    overrides: list,
    log_format: str,
    log_level: str,
    verbose: bool,
    pool_size: int | None,
    u_file: str | None,
    v_file: str | None,
) -> None:
    if (u_file is None) != (v_file is None):
        raise click.BadParameter('--u-file and --v-file must be given together')
    manifest, problem = start_run(
        'project',
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
        if u_file and v_file:
            state = CoupledState(
                load_field(Path(u_file), cfg.grid), load_field(Path(v_file), cfg.grid)
            )
        else:
            state = random_positive_state(cfg.grid, np.random.default_rng(manifest.seed))
        fibering, projected = project_state(state, cfg, with_values=True)
        report = {
            'manifest': manifest.to_dict(),
            'fibering': fibering.to_dict(),
            'energy': energy(projected, cfg),
            'nehari_residual': nehari_residual(projected, cfg),
            'config': cfg.to_dict(),
        }
    except Exception as e:
        log_verbose(e)
        sys.exit(1)

    write_report(manifest.output_dir / REPORT_FILENAME, report)
    click.echo(
        f'Done. Fiber maximum at t0 = {greenify(f"{fibering.t0:.12g}")}.\n'
        f'Report saved to {greenify(manifest.output_dir / REPORT_FILENAME)}'
    )
