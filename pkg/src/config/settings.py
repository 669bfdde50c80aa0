from pathlib import Path

from decouple import config as decouple_config

from src.common.typings import Singleton

DEFAULT_OUTPUT_DIR = Path.cwd() / 'runs'

DEFAULT_LOG_LEVEL = 'INFO'


# pylint: disable-next=too-many-instance-attributes
class Settings(metaclass=Singleton):
    output_dir: Path
    verbose: bool
    log_level: str
    log_format: str
    pool_size: int | None
    verify_workers: int | None

    # projection onto the fiber
    fiber_max_steps: int = decouple_config('FIBER_MAX_STEPS', default=60, cast=int)
    bisection_rel_width: float = decouple_config(
        'BISECTION_REL_WIDTH', default=1e-12, cast=float
    )
    rhs_monotone_slack: float = decouple_config('RHS_MONOTONE_SLACK', default=1e-12, cast=float)

    # primitive tables for the log-power family
    primitive_table_ratio: float = decouple_config(
        'PRIMITIVE_TABLE_RATIO', default=1.004, cast=float
    )
    primitive_table_min: float = decouple_config('PRIMITIVE_TABLE_MIN', default=1e-6, cast=float)
    primitive_table_max: float = decouple_config('PRIMITIVE_TABLE_MAX', default=1e6, cast=float)

    spectral_floor: float = decouple_config('SPECTRAL_FLOOR', default=1e-8, cast=float)

    # pylint: disable-next=too-many-arguments
    def set(
        self,
        output_dir: Path | None = None,
        verbose: bool = False,
        log_level: str | None = None,
        log_format: str | None = None,
        pool_size: int | None = None,
        verify_workers: int | None = None,
    ) -> None:
        self.output_dir = output_dir or DEFAULT_OUTPUT_DIR
        self.output_dir.mkdir(parents=True, exist_ok=True)
        self.verbose = verbose
        self.log_level = log_level or decouple_config('LOG_LEVEL', default=DEFAULT_LOG_LEVEL)
        self.log_format = log_format or decouple_config('LOG_FORMAT', default=LOG_PLAIN)
        self.pool_size = pool_size
        self.verify_workers = verify_workers


settings = Settings()
settings.verbose = False
settings.pool_size = None
settings.verify_workers = None

# report file names
REPORT_FILENAME = 'report.json'
TRACE_FILENAME = 'trace.json'
EFFECTIVE_CONFIG_FILENAME = 'effective_config.toml'
SWEEP_FILENAME = 'sweep.csv'
THRESHOLD_FILENAME = 'threshold.json'

# logging
LOG_PLAIN = 'plain'
LOG_JSON = 'json'
LOG_FORMATS = [LOG_PLAIN, LOG_JSON]
LOG_DATE_FORMAT = '%Y-%m-%d %H:%M:%S'
