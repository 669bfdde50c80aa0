import sys

import click

from src.commands.run_base import run_options, start_run
from src.common.utils import greenify, log_verbose, write_report
from src.config.settings import REPORT_FILENAME
from src.verify.harness import run_all
from src.verify.typings import Verdict

VERDICT_COLORS = {
    Verdict.PASS: 'green',
    Verdict.FAIL: 'red',
    Verdict.SKIPPED: 'yellow',
}


@click.option(
    '--n-samples',
    type=int,
    help='Random states per sampled check. Default is verify.n_samples of the problem file.',
)
@click.option(
    '--verify-workers',
    type=int,
    envvar='VERIFY_WORKERS',
    help='Number of threads running checks. Default is chosen by the executor.',
)
@run_options
@click.command(help='Runs the verification battery and exits non-zero if any check fails.')
# pylint: disable-next=too-many-arguments,too-many-locals
def verify(
    config_path: str | None,
    seed: int | None,
    output_dir: str | None,
    overrides: list,
    log_format: str,
    log_level: str,
    verbose: bool,
    pool_size: int | None,
    n_samples: int | None,
    verify_workers: int | None,
) -> None:
    manifest, problem = start_run(
        'verify',
        config_path,
        output_dir,
        seed,
        overrides,
        verbose=verbose,
        log_level=log_level,
        log_format=log_format,
        pool_size=pool_size,
        verify_workers=verify_workers,
    )
    try:
        # infeasible or critical configs still get a report: the checks name the violation
        cfg = problem.problem_config()
        options = problem.verify_options()
        report = run_all(cfg, manifest.seed, n_samples or options.n_samples, options)
    except Exception as e:
        log_verbose(e)
        sys.exit(1)

    write_report(manifest.output_dir / REPORT_FILENAME, report.to_dict())
    for check in report.checks:
        verdict = click.style(check.verdict.value, fg=VERDICT_COLORS[check.verdict])
        click.echo(f'{check.name:<28} {verdict}')
    click.echo(f'Report saved to {greenify(manifest.output_dir / REPORT_FILENAME)}')
    if not report.passed:
        click.secho(f'Failed checks: {", ".join(report.failed)}', fg='red', err=True)
        sys.exit(1)
