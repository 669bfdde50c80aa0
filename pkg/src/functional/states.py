import numpy as np

from src.functional.typings import CoupledState
from src.grid.typings import GridField, GridSpec

HARMONICS = (2, 3, 4)


def random_positive_state(
    grid: GridSpec, rng: np.random.Generator, amplitude_range: tuple[float, float] = (0.5, 2.0)
) -> CoupledState:
    """
    Smooth states positive in the interior: per axis sin(pi s) plus harmonics
    with |c_k| <= 0.2/k, which |sin(k x)| <= k |sin x| keeps below the base mode.
    """
    low, high = amplitude_range
    components = []
    for _ in range(2):
        amplitude = np.exp(rng.uniform(np.log(low), np.log(high)))
        values = amplitude * np.ones(grid.shape)
        for s in _unit_coordinates(grid):
            profile = np.sin(np.pi * s)
            for k in HARMONICS:
                profile = profile + rng.uniform(-0.2 / k, 0.2 / k) * np.sin(k * np.pi * s)
            values = values * profile
        components.append(GridField.from_function(grid, values))
    return CoupledState(*components)


def random_direction(grid: GridSpec, rng: np.random.Generator, modes: int = 6) -> CoupledState:
    """Sign-changing smooth pair with unit-scale coefficients."""
    components = []
    for _ in range(2):
        values = np.ones(grid.shape)
        for s in _unit_coordinates(grid):
            coefficients = rng.normal(size=modes)
            values = values * sum(
                c * np.sin((k + 1) * np.pi * s) for k, c in enumerate(coefficients)
            )
        components.append(GridField.from_function(grid, values))
    return CoupledState(*components)


# pylint: disable-next=too-many-arguments
def bump_state(
    grid: GridSpec,
    center: np.ndarray,
    width: float,
    amplitude_u: float,
    amplitude_v: float,
) -> CoupledState:
    """Gaussian bumps at a shared center, tapered by the base sine mode of the box."""
    offset = grid.coordinates - np.asarray(center, dtype=float).reshape(
        (-1,) + (1,) * grid.dimension
    )
    profile = np.exp(-np.sum(offset**2, axis=0) / (2 * width**2))
    for s in _unit_coordinates(grid):
        profile = profile * np.sin(np.pi * s)
    return CoupledState(
        GridField.from_function(grid, amplitude_u * profile),
        GridField.from_function(grid, amplitude_v * profile),
    )


def random_bump_state(grid: GridSpec, rng: np.random.Generator) -> CoupledState:
    center = grid.center + rng.uniform(-grid.half_width / 2, grid.half_width / 2, grid.dimension)
    return bump_state(
        grid,
        center,
        width=rng.uniform(1.0, 2.0),
        amplitude_u=rng.uniform(0.5, 1.5),
        amplitude_v=rng.uniform(0.5, 1.5),
    )


def _unit_coordinates(grid: GridSpec) -> list[np.ndarray]:
    """Node coordinates mapped to [0, 1] per axis, each broadcast over the grid."""
    lower = grid.center - grid.half_width
    return [(grid.coordinates[k] - lower) / (2 * grid.half_width) for k in range(grid.dimension)]
