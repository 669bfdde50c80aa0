import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import click

import src
from src.common.logging import LOG_LEVELS, setup_logging
from src.common.problem_file import ProblemFile
from src.common.validators import validate_overrides
from src.config.settings import EFFECTIVE_CONFIG_FILENAME, LOG_FORMATS, LOG_PLAIN, settings

logger = logging.getLogger(__name__)


@dataclass
class RunManifest:
    command: str
    config_path: Path | None
    output_dir: Path
    seed: int | None = None
    overrides: list[tuple[str, Any]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            'command': self.command,
            'config_path': str(self.config_path) if self.config_path else None,
            'output_dir': str(self.output_dir),
            'seed': self.seed,
            'overrides': [f'{key}={value!r}' for key, value in self.overrides],
        }


def run_options(command: click.Command) -> click.Command:
    """Options shared by every run command."""
    options = [
        click.option(
            '--config',
            'config_path',
            type=click.Path(exists=True, file_okay=True, dir_okay=False),
            envvar='PROBLEM_CONFIG',
            help='Path to the TOML problem file. Built-in defaults are used when omitted.',
        ),
        click.option(
            '--seed',
            type=int,
            envvar='SEED',
            help='Random seed. Default is the solver seed of the problem file.',
        ),
        click.option(
            '--out',
            'output_dir',
            type=click.Path(file_okay=False, dir_okay=True),
            envvar='OUTPUT_DIR',
            help='Directory for reports and field dumps. Default is ./runs.',
        ),
        click.option(
            '--set',
            'overrides',
            multiple=True,
            callback=validate_overrides,
            help='Override a problem key, e.g. --set problem.q=4.0. Repeatable.',
        ),
        click.option(
            '--log-format',
            type=click.Choice(
                LOG_FORMATS,
                case_sensitive=False,
            ),
            default=LOG_PLAIN,
            envvar='LOG_FORMAT',
            help='The log record format. Can be "plain" or "json".',
        ),
        click.option(
            '--log-level',
            type=click.Choice(
                LOG_LEVELS,
                case_sensitive=False,
            ),
            default='INFO',
            envvar='LOG_LEVEL',
            help='The log level.',
        ),
        click.option(
            '-v',
            '--verbose',
            help='Enable debug mode. Default is false.',
            envvar='VERBOSE',
            is_flag=True,
        ),
        click.option(
            '--pool-size',
            help='Number of processes in a pool. Default is the number of CPUs.',
            envvar='POOL_SIZE',
            type=int,
        ),
    ]
    for option in options:
        command = option(command)
    return command


# pylint: disable-next=too-many-arguments
def start_run(
    command: str,
    config_path: str | None,
    output_dir: str | None,
    seed: int | None,
    overrides: list[tuple[str, Any]],
    verbose: bool,
    log_level: str,
    log_format: str,
    pool_size: int | None,
    verify_workers: int | None = None,
) -> tuple[RunManifest, ProblemFile]:
    """
    Applies runtime settings, loads the problem file with its overrides and saves
    the effective config next to the reports. A seed given on the command line
    replaces the solver seed so that the saved config reproduces the run.
    """
    settings.set(
        output_dir=Path(output_dir) if output_dir else None,
        verbose=verbose,
        log_level=log_level,
        log_format=log_format,
        pool_size=pool_size,
        verify_workers=verify_workers,
    )
    setup_logging()
    if not os.access(settings.output_dir, os.W_OK):
        raise click.ClickException(f'Output directory {settings.output_dir} is not writable.')

    manifest = RunManifest(
        command=command,
        config_path=Path(config_path) if config_path else None,
        output_dir=settings.output_dir,
        seed=seed,
        overrides=list(overrides),
    )
    if seed is not None:
        manifest.overrides.append(('solver.seed', seed))

    problem = ProblemFile(manifest.config_path, manifest.overrides)
    problem.load()
    problem.save(manifest.output_dir / EFFECTIVE_CONFIG_FILENAME)
    if manifest.seed is None:
        manifest.seed = problem.data['solver']['seed']

    logger.info('Starting %s, pq-nehari %s', command, src.__version__)
    logger.debug('run manifest %s', manifest.to_dict())
    return manifest, problem

