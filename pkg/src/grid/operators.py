import numpy as np

from src.grid.exceptions import (
    NEGATIVE_POTENTIAL,
    ExponentRangeError,
    FieldInvariantError,
)
from src.grid.typings import GridField, GridSpec

DEFAULT_REG_EPS = 1e-8


def gradient_field(u: GridField) -> np.ndarray:
    """
    Forward differences on the cells of the grid.
    Returns an array of shape (dimension, n - 1, ..., n - 1); component k holds
    (u[i + e_k] - u[i]) / h at the lower corner i of every cell.
    """
    return _cell_gradient(u.values, u.grid)


def p_dirichlet_energy(u: GridField, p: float) -> float:
    _check_exponent(p)
    return _dirichlet_energy(u.values, u.grid, p)


def weighted_norm_p(u: GridField, a: np.ndarray, p: float) -> float:
    """p-th power of the weighted norm: gradient energy plus the a-weighted mass."""
    _check_exponent(p)
    check_nonnegative(a)
    return _dirichlet_energy(u.values, u.grid, p) + integrate(a * np.abs(u.values) ** p, u.grid)


def integrate(w: np.ndarray, grid: GridSpec) -> float:
    return float(np.sum(grid.weights * w))


def p_laplacian(
    u: np.ndarray, grid: GridSpec, p: float, reg_eps: float = DEFAULT_REG_EPS
) -> np.ndarray:
    """
    Node residual of (1/p) * dirichlet energy, scaled by 1/h^d so that
    sum(h^d * residual * phi) is the directional derivative along phi.
    Boundary entries are zeroed. The flux is smoothed only when p < 2.
    """
    grid_g = _cell_gradient(u, grid)
    norm_sq = np.sum(grid_g**2, axis=0)
    if p < 2:
        weight = (norm_sq + reg_eps**2) ** ((p - 2) / 2)
    else:
        weight = norm_sq ** ((p - 2) / 2)

    residual = np.zeros(grid.shape)
    d = grid.dimension
    for k in range(d):
        flux = weight * grid_g[k]
        here = np.pad(flux, [(0, 1)] * d)
        behind = np.pad(flux, [(1, 0) if axis == k else (0, 1) for axis in range(d)])
        residual += behind - here
    residual /= grid.spacing
    residual[~grid.interior] = 0.0
    return residual


def check_nonnegative(a: np.ndarray) -> None:
    negative = a < 0
    if np.any(negative):
        raise FieldInvariantError(
            NEGATIVE_POTENTIAL.format(count=int(np.count_nonzero(negative)), minimum=np.min(a))
        )


def _cell_gradient(u: np.ndarray, grid: GridSpec) -> np.ndarray:
    d = grid.dimension
    components = []
    for k in range(d):
        diff = np.diff(u, axis=k) / grid.spacing
        cells = tuple(slice(None) if axis == k else slice(0, -1) for axis in range(d))
        components.append(diff[cells])
    return np.stack(components)


def _dirichlet_energy(u: np.ndarray, grid: GridSpec, p: float) -> float:
    grad = _cell_gradient(u, grid)
    norm = np.sqrt(np.sum(grad**2, axis=0))
    return float(grid.cell_volume * np.sum(norm**p))


def _check_exponent(p: float) -> None:
    if not p > 1:
        raise ExponentRangeError(p)
