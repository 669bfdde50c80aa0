import logging
import math
from typing import TYPE_CHECKING

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import eigsh

from src.config.settings import settings
from src.grid.typings import GridSpec
from src.potential.exceptions import (
    INFEASIBLE_BUDGET,
    INFEASIBLE_COUPLING,
    InfeasibleCouplingError,
    SpectralFloorError,
)
from src.potential.fields import sample_potential
from src.potential.typings import CouplingBudget, PotentialRole, PotentialSpec

if TYPE_CHECKING:
    from src.functional.typings import ProblemConfig

logger = logging.getLogger(__name__)

DELTA_PAD = 1e-12


def validate_coupling(
    a: PotentialSpec, b: PotentialSpec, lam: PotentialSpec, cfg: 'ProblemConfig'
) -> CouplingBudget:
    """Budget of the three fields on the grid; raises unless delta < 1 with a positive margin."""
    budget = coupling_budget(
        sample_potential(a, cfg.grid),
        sample_potential(b, cfg.grid),
        sample_potential(lam, cfg.grid),
        cfg,
        lam.ball_radius,
    )
    if not budget.feasible:
        raise InfeasibleCouplingError(
            INFEASIBLE_BUDGET.format(delta=budget.delta, margin=budget.margin)
        )
    return budget


# pylint: disable-next=too-many-arguments
def coupling_budget(
    a_values: np.ndarray,
    b_values: np.ndarray,
    lam_values: np.ndarray,
    cfg: 'ProblemConfig',
    ball_radius: float = 0.0,
) -> CouplingBudget:
    """Tight delta in |lambda| <= delta a^(alpha/p) b^(beta/q) over the nodes, padded by 1e-12."""
    scale = a_values ** (cfg.alpha / cfg.p) * b_values ** (cfg.beta / cfg.q)
    coupled = lam_values != 0
    unattainable = np.count_nonzero(coupled & (scale == 0))
    if unattainable:
        raise InfeasibleCouplingError(INFEASIBLE_COUPLING.format(count=unattainable))

    if np.any(coupled):
        delta = float(np.max(np.abs(lam_values[coupled]) / scale[coupled])) + DELTA_PAD
    else:
        delta = 0.0
    margin = 1 / cfg.q - delta * max(cfg.alpha / cfg.p, cfg.beta / cfg.q)

    lambda_floor = 0.0
    if ball_radius > 0:
        ball = cfg.grid.radius <= ball_radius
        if np.any(ball):
            lambda_floor = max(float(np.min(lam_values[ball])), 0.0)

    budget = CouplingBudget(
        delta=delta, margin=margin, lambda_floor=lambda_floor, ball_radius=ball_radius
    )
    logger.debug('coupling budget %s', budget.to_dict())
    return budget


def spectral_bound(values: np.ndarray, grid: GridSpec, p: float) -> float:
    """
    Lower bound for inf (|grad u|_p^p + int a |u|^p) / |u|_p^p over the zero-boundary grid.
    p = 2: smallest eigenvalue of -Laplacian_h + diag(a) on the interior nodes.
    Otherwise the Poincare bound (2L)^(-p) + min a of the box.
    """
    if p != 2:
        return (2 * grid.half_width) ** (-p) + float(np.min(values))

    m = grid.nodes_per_axis - 2
    h = grid.spacing
    second_difference = sparse.diags(
        [-np.ones(m - 1), 2 * np.ones(m), -np.ones(m - 1)], [-1, 0, 1], format='csr'
    ) / h**2
    identity = sparse.identity(m, format='csr')
    laplacian = sparse.csr_matrix((m**grid.dimension, m**grid.dimension))
    for k in range(grid.dimension):
        term = sparse.identity(1, format='csr')
        for axis in range(grid.dimension):
            term = sparse.kron(term, second_difference if axis == k else identity, format='csr')
        laplacian = laplacian + term

    interior = values[(slice(1, -1),) * grid.dimension].reshape(-1)
    operator = (laplacian + sparse.diags(interior)).tocsc()
    shift = float(np.min(interior)) - 1.0
    eigenvalues = eigsh(operator, k=1, sigma=shift, which='LM', return_eigenvectors=False)
    return float(np.min(eigenvalues))


def check_spectral_bound(
    values: np.ndarray, grid: GridSpec, p: float, role: PotentialRole
) -> float:
    bound = spectral_bound(values, grid, p)
    if not math.isfinite(bound) or bound <= settings.spectral_floor:
        raise SpectralFloorError(role.value, bound, settings.spectral_floor)
    return bound
