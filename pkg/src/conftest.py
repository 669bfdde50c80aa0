from pathlib import Path
from tempfile import TemporaryDirectory
from typing import Callable, Generator

import numpy as np
import pytest
from click.testing import CliRunner

from src.common.problem_file import ProblemFile
from src.config.settings import settings
from src.functional.states import bump_state
from src.functional.typings import CoupledState, ProblemConfig
from src.grid.typings import GridSpec
from src.nehari.typings import SolverOptions
from src.nonlinearity.typings import NonlinearityKind, NonlinearitySpec
from src.potential.typings import PotentialFamily, PotentialRole, PotentialSpec

SMALL_GRID = {'dimension': 1, 'half_width': 8.0, 'nodes_per_axis': 97}

# exact level of -u'' + u = u^3 on the line: u = sqrt(2) sech(x), E = 4/3
QUARTIC_LINE_LEVEL = 4 / 3

# a = b = 5, lambda = 4: delta = 0.8 is past the symmetry-breaking point at delta = 0.6,
# so the symmetric pair u = v is the only positive solution
COUPLED_LEVEL = 5.0
COUPLED_LAMBDA = 4.0


@pytest.fixture(autouse=True)
def _inline_pools() -> Generator[None, None, None]:
    settings.pool_size = 1
    settings.verify_workers = 2
    settings.verbose = False
    yield
    settings.pool_size = None
    settings.verify_workers = None


@pytest.fixture
def temp_dir() -> Generator[Path, None, None]:
    with TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(42)


@pytest.fixture
def small_grid() -> GridSpec:
    return GridSpec(**SMALL_GRID)


@pytest.fixture
def small_overrides() -> list[tuple[str, object]]:
    return [(f'grid.{key}', value) for key, value in SMALL_GRID.items()]


@pytest.fixture
def default_cfg(small_overrides: list) -> ProblemConfig:
    """Built-in defaults (log-power, p=2, q=3, lambda=0.3) on the small grid."""
    problem = ProblemFile(overrides=small_overrides)
    problem.load()
    return problem.problem_config()


@pytest.fixture
def quartic_cfg(small_grid: GridSpec) -> ProblemConfig:
    """p = q = 2, cubic f and g, a = b = 1 and no coupling."""
    return quartic_config(small_grid)


@pytest.fixture
def coupled_cfg(small_grid: GridSpec) -> ProblemConfig:
    return quartic_config(small_grid, lam_level=COUPLED_LAMBDA, level=COUPLED_LEVEL)


@pytest.fixture
def fast_opts() -> SolverOptions:
    return SolverOptions(tol=1e-6, max_iters=3000, multistart=2, seed=7)


def quartic_config(grid: GridSpec, lam_level: float = 0.0, level: float = 1.0) -> ProblemConfig:
    return ProblemConfig(
        p=2.0,
        q=2.0,
        alpha=1.0,
        beta=1.0,
        effective_dimension=3.0,
        grid=grid,
        a=PotentialSpec(PotentialFamily.CONSTANT, PotentialRole.A, level),
        b=PotentialSpec(PotentialFamily.CONSTANT, PotentialRole.B, level),
        lam=PotentialSpec(PotentialFamily.CONSTANT, PotentialRole.LAMBDA, lam_level),
        f=NonlinearitySpec(NonlinearityKind.PURE_POWER, exponent=2.0, dimension=3.0, power=4.0),
        g=NonlinearitySpec(NonlinearityKind.PURE_POWER, exponent=2.0, dimension=3.0, power=4.0),
    )


def centered_bump(grid: GridSpec, amplitude_v: float = 0.6) -> CoupledState:
    """Even start at the box center, so descent never drifts along translations."""
    center = np.full(grid.dimension, grid.center)
    return bump_state(grid, center, width=1.5, amplitude_u=1.0, amplitude_v=amplitude_v)


QUARTIC_PROBLEM = """\
[problem]
p = 2.0
q = 2.0
alpha = 1.0
beta = 1.0
effective_dimension = 3.0

[grid]
dimension = 1
half_width = 8.0
nodes_per_axis = 97

[potential.a]
base_level = {level}

[potential.b]
base_level = {level}

[potential.lambda]
base_level = {lam}
ball_radius = 0.0

[nonlinearity.f]
family = "pure-power"
power = 4.0

[nonlinearity.g]
family = "pure-power"
power = 4.0

[solver]
multistart = 1
max_iters = 3000

[verify]
n_samples = 10
"""


@pytest.fixture
def write_problem(temp_dir: Path) -> Callable[..., Path]:
    """Writes the quartic system as a problem file."""

    def write(lam: float = COUPLED_LAMBDA, level: float = COUPLED_LEVEL) -> Path:
        path = temp_dir / 'problem.toml'
        path.write_text(QUARTIC_PROBLEM.format(lam=lam, level=level), encoding='utf-8')
        return path

    return write
