import logging
from typing import Sequence

import numpy as np

from src.grid.typings import GridSpec
from src.potential.exceptions import (
    NEGATIVE_COEFFICIENT,
    PerturbationSignError,
    PotentialSignError,
)
from src.potential.typings import (
    DecayProfile,
    Perturbation,
    PotentialFamily,
    PotentialRole,
    PotentialSpec,
)

logger = logging.getLogger(__name__)

# sign each role's perturbation must carry for the strict orderings of the asymptotic problem
PERTURBATION_SIGNS = {
    PotentialRole.A: -1,
    PotentialRole.B: -1,
    PotentialRole.LAMBDA: 1,
}


def eval_potential(spec: PotentialSpec, x: np.ndarray | Sequence[float]) -> float | np.ndarray:
    """
    Evaluates the field at coordinates `x`: a single point of shape (dimension,)
    gives a float, stacked points of shape (dimension, ...) give an array.
    """
    coords = np.asarray(x, dtype=float)
    is_point = coords.ndim == 1
    if is_point:
        coords = coords.reshape(-1, 1)
    if not np.all(np.isfinite(coords)):
        raise ValueError('potential coordinates must be finite')

    value = np.full(coords.shape[1:], float(spec.base_level))
    if spec.modulation_amplitude:
        value = value + spec.modulation_amplitude * np.mean(np.cos(2 * np.pi * coords), axis=0)
    if spec.perturbation is not None:
        value = value + perturbation_values(spec.perturbation, coords)
    if spec.ball_floor > 0:
        radius = np.sqrt(np.sum(coords**2, axis=0))
        value = np.where(radius <= spec.ball_radius, np.maximum(value, spec.ball_floor), value)

    return float(value[0]) if is_point else value


def sample_potential(spec: PotentialSpec, grid: GridSpec) -> np.ndarray:
    values = eval_potential(spec, grid.coordinates)
    if spec.role != PotentialRole.LAMBDA:
        check_potential_sign(values, spec.role)
    return np.asarray(values)


def perturbation_values(perturbation: Perturbation, coords: np.ndarray) -> np.ndarray:
    radius = np.sqrt(np.sum(coords**2, axis=0))
    if perturbation.profile == DecayProfile.GAUSS:
        return perturbation.amplitude * np.exp(-perturbation.rate * radius**2)
    return perturbation.amplitude * np.exp(-perturbation.rate * radius)


def check_potential_sign(values: np.ndarray, role: PotentialRole) -> None:
    minimum = float(np.min(values))
    if minimum < 0:
        raise PotentialSignError(NEGATIVE_COEFFICIENT.format(role=role.value, minimum=minimum))


def make_asymptotic_pair(
    periodic: tuple[PotentialSpec, PotentialSpec, PotentialSpec],
    perturbations: tuple[Perturbation, Perturbation, Perturbation],
    grid: GridSpec,
) -> tuple[PotentialSpec, PotentialSpec, PotentialSpec]:
    """
    Builds a(x) = a_o(x) + pa(x), b(x) = b_o(x) + pb(x), lambda(x) = lambda_o(x) + pl(x)
    with pa, pb < 0 < pl at every grid node. Strictness is asserted on the perturbation
    values, which is where a rounded sum could hide it far out in the decay.
    """
    result = []
    for spec, perturbation in zip(periodic, perturbations):
        if spec.family == PotentialFamily.ASYMPTOTICALLY_PERIODIC:
            raise PerturbationSignError(spec.role.value, 'applied to a periodic base')
        sign = PERTURBATION_SIGNS[spec.role]
        values = perturbation_values(perturbation, grid.coordinates)
        if not np.all(sign * values > 0):
            raise PerturbationSignError(spec.role.value, 'negative' if sign < 0 else 'positive')

        asymptotic = PotentialSpec(
            family=PotentialFamily.ASYMPTOTICALLY_PERIODIC,
            role=spec.role,
            base_level=spec.base_level,
            modulation_amplitude=spec.modulation_amplitude,
            perturbation=perturbation,
            ball_radius=spec.ball_radius,
            ball_floor=spec.ball_floor,
        )
        if spec.role != PotentialRole.LAMBDA:
            values = np.asarray(eval_potential(asymptotic, grid.coordinates))
            check_potential_sign(values, spec.role)
        result.append(asymptotic)

    logger.debug(
        'asymptotic pair amplitudes %s',
        ', '.join(f'{s.role.value}={p.amplitude:.3g}' for s, p in zip(periodic, perturbations)),
    )
    a, b, lam = result
    return a, b, lam


def perturbation_tail(spec: PotentialSpec, grid: GridSpec, radii: Sequence[float]) -> list[float]:
    """Sup of |perturbation| over the grid nodes with |x| >= rho, for each rho."""
    if spec.perturbation is None:
        return [0.0 for _ in radii]
    values = np.abs(perturbation_values(spec.perturbation, grid.coordinates))
    tails = []
    for rho in radii:
        outside = grid.radius >= rho
        tails.append(float(np.max(values[outside])) if np.any(outside) else 0.0)
    return tails
