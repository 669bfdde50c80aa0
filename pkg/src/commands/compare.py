import logging
import sys

import click

from src.commands.run_base import run_options, start_run
from src.common.utils import greenify, log_verbose, write_report
from src.config.settings import REPORT_FILENAME
from src.functional.typings import ProblemConfig
from src.nehari.probes import truncation_sensitivity
from src.nehari.typings import SolveReport, SolverOptions
from src.potential.fields import make_asymptotic_pair
from src.potential.typings import Perturbation
from src.scalar.compare import (
    asymptotic_gap_trend,
    compare_periodic_asymptotic,
    evaluate_coupled,
    solve_scalar_pair,
    trial_state_bound,
)

logger = logging.getLogger(__name__)


@click.option(
    '--asymptotic/--no-asymptotic',
    default=True,
    help='Whether to compare with the perturbed problem built from the [asymptotic] section.',
)
@click.option(
    '--truncation',
    is_flag=True,
    help='Whether to re-solve on a box of twice the half-width. Disabled by default.',
)
@run_options
@click.command(
    help='Compares the coupled ground level with the scalar levels and, optionally, '
    'with the asymptotically periodic problem.'
)
# pylint: disable-next=too-many-arguments,too-many-locals
def compare(
    config_path: str | None,
    seed: int | None,
    output_dir: str | None,
    overrides: list,
    log_format: str,
    log_level: str,
    verbose: bool,
    pool_size: int | None,
    asymptotic: bool,
    truncation: bool,
) -> None:
    manifest, problem = start_run(
        'compare',
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
        options = problem.verify_options()

        scalars = solve_scalar_pair(cfg, opts)
        coupled, verdict = evaluate_coupled(
            cfg, opts, scalars, options.semitrivial_slack, options.mass_fraction
        )
        report = {
            'manifest': manifest.to_dict(),
            'coupled': coupled.to_dict(with_trace=False),
            'scalar': [scalar.to_dict() for scalar in scalars],
            'semitrivial': verdict.to_dict(),
            'config': cfg.to_dict(),
        }
        if cfg.lambda_nonnegative:
            report['trial_state_bound'] = trial_state_bound(*scalars, cfg).to_dict()
        if asymptotic:
            report.update(
                _asymptotic_section(
                    cfg, opts, problem.perturbations(), options.semitrivial_slack, coupled
                )
            )
        if truncation:
            report['truncation'] = truncation_sensitivity(cfg, opts).to_dict()
    except Exception as e:
        log_verbose(e)
        sys.exit(1)

    write_report(manifest.output_dir / REPORT_FILENAME, report)
    click.echo(
        f'Done. Coupled level {greenify(f"{verdict.coupled_level:.12g}")}, '
        f'verdict {greenify(verdict.verdict)}.\n'
        f'Report saved to {greenify(manifest.output_dir / REPORT_FILENAME)}'
    )


def _asymptotic_section(
    cfg: ProblemConfig,
    opts: SolverOptions,
    perturbations: tuple[Perturbation, Perturbation, Perturbation],
    slack: float,
    periodic: SolveReport,
) -> dict:
    a, b, lam = make_asymptotic_pair((cfg.a, cfg.b, cfg.lam), perturbations, cfg.grid)
    asymptotic_cfg = cfg.replace(a=a, b=b, lam=lam)
    comparison = compare_periodic_asymptotic(cfg, asymptotic_cfg, opts, slack, periodic=periodic)
    trend = asymptotic_gap_trend(cfg, perturbations, opts, periodic=periodic)
    if not comparison.passed:
        logger.warning('asymptotic level is not strictly below the periodic level')
    return {'asymptotic': comparison.to_dict(), 'gap_trend': trend.to_dict()}
