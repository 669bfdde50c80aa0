import csv
import logging
import sys
from multiprocessing import Pool
from pathlib import Path

import click
import numpy as np

from src.commands.run_base import run_options, start_run
from src.common.utils import greenify, log_verbose, warning_verbose, write_report
from src.config.settings import SWEEP_FILENAME, THRESHOLD_FILENAME, settings
from src.functional.typings import ProblemConfig
from src.nehari.probes import norm_lower_bound_probe
from src.nehari.typings import SolverOptions
from src.scalar.compare import (
    evaluate_coupled,
    lambda_at_level,
    locate_lambda_threshold,
    solve_scalar_pair,
)
from src.scalar.exceptions import ComparisonError
from src.scalar.typings import ScalarReport, ThresholdReport
from src.verify.typings import VerifyOptions

logger = logging.getLogger(__name__)

PARAM_LAMBDA0 = 'lambda0'
PARAM_DELTA = 'delta'
SWEEP_PARAMS = [PARAM_LAMBDA0, PARAM_DELTA]
INFEASIBLE = 'infeasible'

SWEEP_COLUMNS = [
    'param',
    'value',
    'delta',
    'margin',
    'coupled_level',
    'min_scalar_level',
    'norm_floor',
    'verdict',
]


@click.option(
    '--param',
    type=click.Choice(SWEEP_PARAMS, case_sensitive=False),
    required=True,
    help='Swept quantity: the coupling level lambda0 or the coupling constant delta.',
)
@click.option(
    '--from',
    'start',
    type=float,
    required=True,
    help='First value of the swept quantity.',
)
@click.option(
    '--to',
    'stop',
    type=float,
    required=True,
    help='Last value of the swept quantity.',
)
@click.option(
    '--steps',
    type=click.IntRange(min=1),
    default=9,
    help='Number of evenly spaced values. Default is 9.',
)
@click.option(
    '--locate-threshold',
    is_flag=True,
    help='Also bisect lambda0 on [0, lambda_threshold_max] for the verdict change.',
)
@run_options
@click.command(help='Sweeps lambda0 or delta and writes levels and verdicts to CSV.')
# pylint: disable-next=too-many-arguments,too-many-locals
def sweep(
    config_path: str | None,
    seed: int | None,
    output_dir: str | None,
    overrides: list,
    log_format: str,
    log_level: str,
    verbose: bool,
    pool_size: int | None,
    param: str,
    start: float,
    stop: float,
    steps: int,
    locate_threshold: bool,
) -> None:
    manifest, problem = start_run(
        'sweep',
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
        cfg.validate(require_feasible=False)
        opts = problem.solver_options()
        options = problem.verify_options()
        values = [float(v) for v in np.linspace(start, stop, steps)]
        configs = [_point_config(cfg, param.lower(), value) for value in values]
        scalars = solve_scalar_pair(cfg, opts)
        rows = _sweep_rows(param.lower(), values, configs, opts, options, scalars)
        threshold = _threshold(cfg, opts, options, scalars) if locate_threshold else None
    except Exception as e:
        log_verbose(e)
        sys.exit(1)

    path = manifest.output_dir / SWEEP_FILENAME
    write_rows(path, rows)
    click.echo(
        f'Done. Swept {greenify(len(rows))} values of {param}.\n'
        f'Rows saved to {greenify(path)}'
    )
    if threshold is not None:
        threshold_path = manifest.output_dir / THRESHOLD_FILENAME
        write_report(threshold_path, {'manifest': manifest.to_dict(), **threshold.to_dict()})
        click.echo(f'lambda0 threshold {greenify(threshold.threshold)} saved to {threshold_path}')


def _point_config(cfg: ProblemConfig, param: str, value: float) -> ProblemConfig:
    if param == PARAM_LAMBDA0:
        return cfg.replace(lam=lambda_at_level(cfg.lam, value))
    if cfg.budget.delta == 0:
        raise click.ClickException('delta sweep needs a coupling coefficient that is not zero')
    return cfg.with_delta(value)


# pylint: disable-next=too-many-arguments
def _sweep_rows(
    param: str,
    values: list[float],
    configs: list[ProblemConfig],
    opts: SolverOptions,
    options: VerifyOptions,
    scalars: tuple[ScalarReport, ScalarReport],
) -> list[dict]:
    if settings.pool_size == 1 or len(configs) == 1:
        return [
            sweep_point(param, value, point, opts, options, scalars)
            for value, point in zip(values, configs)
        ]
    with Pool(processes=settings.pool_size) as pool:
        results = [
            pool.apply_async(
                sweep_point,
                (param, value, point, opts, options, scalars),
                {'inline': True},
            )
            for value, point in zip(values, configs)
        ]
        # rows keep the parameter order whatever the completion order
        return [result.get() for result in results]


# pylint: disable-next=too-many-arguments
def sweep_point(
    param: str,
    value: float,
    cfg: ProblemConfig,
    opts: SolverOptions,
    options: VerifyOptions,
    scalars: tuple[ScalarReport, ScalarReport],
    inline: bool = False,
) -> dict:
    """One sweep row. Pool workers solve their starts inline."""
    if inline:
        settings.pool_size = 1
    budget = cfg.budget
    row = {
        'param': param,
        'value': value,
        'delta': budget.delta,
        'margin': budget.margin,
        'coupled_level': None,
        'min_scalar_level': min(scalars[0].level, scalars[1].level),
        'norm_floor': None,
        'verdict': INFEASIBLE,
    }
    if not budget.feasible:
        logger.info('%s=%.6g is outside the coupling budget', param, value)
        return row

    _, verdict = evaluate_coupled(
        cfg, opts, scalars, options.semitrivial_slack, options.mass_fraction
    )
    row['coupled_level'] = verdict.coupled_level
    row['norm_floor'] = norm_lower_bound_probe(cfg, options.n_samples, opts.seed)
    row['verdict'] = verdict.verdict
    logger.info(
        '%s=%.6g level=%.12g verdict=%s', param, value, verdict.coupled_level, verdict.verdict
    )
    return row


def write_rows(path: Path, rows: list[dict]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', encoding='utf-8', newline='') as f:
        writer = csv.DictWriter(f, fieldnames=SWEEP_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: '' if v is None else _cell(v) for k, v in row.items()})


def _cell(value: object) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _threshold(
    cfg: ProblemConfig,
    opts: SolverOptions,
    options: VerifyOptions,
    scalars: tuple[ScalarReport, ScalarReport],
) -> ThresholdReport | None:
    try:
        return locate_lambda_threshold(
            cfg,
            opts,
            options.lambda_threshold_max,
            options.threshold_steps,
            options.semitrivial_slack,
            options.mass_fraction,
            scalars=scalars,
        )
    except ComparisonError as e:
        warning_verbose('lambda0 threshold not located: %s', e)
        return None
