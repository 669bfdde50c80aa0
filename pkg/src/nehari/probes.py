import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from src.functional.states import random_positive_state
from src.functional.typings import ProblemConfig
from src.grid.typings import GridSpec
from src.nehari.descent import solve_multistart
from src.nehari.exceptions import NegativeCouplingError
from src.nehari.fibering import FiberingMap, project
from src.nehari.typings import SolverOptions
from src.nonlinearity.exceptions import SamplePreconditionError

logger = logging.getLogger(__name__)

MIN_PROBE_SAMPLES = 10
# amplitudes of the probed states are drawn log-uniformly from this range
PROBE_AMPLITUDES = (0.1, 10.0)
# fractions of the delta feasibility limit visited by the floor trend
DELTA_FRACTIONS = (0.25, 0.5, 0.75, 0.95)


def projected_norms(cfg: ProblemConfig, n_samples: int, seed: int) -> np.ndarray:
    """Norms |u|_{a,p} + |v|_{b,q} of seeded random positive states after projection."""
    if n_samples < MIN_PROBE_SAMPLES:
        raise SamplePreconditionError(
            f'norm probe needs at least {MIN_PROBE_SAMPLES} samples, got {n_samples}'
        )
    norms = []
    for index in range(n_samples):
        rng = np.random.default_rng([seed, index])
        state = random_positive_state(cfg.grid, rng, PROBE_AMPLITUDES)
        fiber = FiberingMap(state, cfg)
        report, _ = project(state, cfg)
        norms.append(
            (report.t0 * fiber.norm_u) ** (1 / cfg.p) + (report.t0 * fiber.norm_v) ** (1 / cfg.q)
        )
    return np.asarray(norms)


def norm_lower_bound_probe(cfg: ProblemConfig, n_samples: int, seed: int = 42) -> float:
    floor = float(np.min(projected_norms(cfg, n_samples, seed)))
    logger.debug('nehari norm floor %.6g over %d samples', floor, n_samples)
    return floor


@dataclass
class FloorTrend:
    deltas: list[float]
    floors: list[float]

    @property
    def decreasing(self) -> bool:
        return all(later < earlier for earlier, later in zip(self.floors, self.floors[1:]))

    def to_dict(self) -> dict:
        return {'deltas': self.deltas, 'floors': self.floors, 'decreasing': self.decreasing}


def norm_floor_trend(
    cfg: ProblemConfig,
    n_samples: int,
    seed: int = 42,
    fractions: Sequence[float] = DELTA_FRACTIONS,
) -> FloorTrend:
    """
    Nehari norm floor with lambda rescaled so that delta runs through `fractions` of its
    feasibility limit. Every point projects the same seeded states.
    """
    if not cfg.lambda_nonnegative:
        raise NegativeCouplingError(float(np.min(cfg.lam_values)))
    limit = cfg.delta_limit
    deltas = [fraction * limit for fraction in sorted(fractions)]
    floors = [norm_lower_bound_probe(cfg.with_delta(delta), n_samples, seed) for delta in deltas]
    trend = FloorTrend(deltas, floors)
    logger.info('nehari norm floor over delta %s decreasing=%s', floors, trend.decreasing)
    return trend


def sign_change_scan(
    fiber: FiberingMap, t0: float, decades: float = 3.0, count: int = 121
) -> int:
    """Number of sign changes of h' on a log-spaced scan of [t0 / 10^decades, t0 * 10^decades]."""
    ts = t0 * np.logspace(-decades, decades, count)
    signs = np.sign([fiber.derivative(float(t)) for t in ts])
    signs = signs[signs != 0]
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


@dataclass
class TruncationReport:
    half_width: float
    level: float
    extended_half_width: float
    extended_level: float

    @property
    def relative_change(self) -> float:
        return abs(self.extended_level - self.level) / max(abs(self.level), 1e-300)

    def to_dict(self) -> dict:
        return {
            'half_width': self.half_width,
            'level': self.level,
            'extended_half_width': self.extended_half_width,
            'extended_level': self.extended_level,
            'relative_change': self.relative_change,
        }


def truncation_sensitivity(
    cfg: ProblemConfig, opts: SolverOptions, factor: int = 2
) -> TruncationReport:
    """Ground level on the box and on the box widened by `factor` at the same spacing."""
    grid = cfg.grid
    extended = GridSpec(
        dimension=grid.dimension,
        half_width=grid.half_width * factor,
        nodes_per_axis=(grid.nodes_per_axis - 1) * factor + 1,
        center=grid.center,
    )
    level = solve_multistart(cfg, opts)[0].energy_value
    extended_level = solve_multistart(cfg.replace(grid=extended), opts)[0].energy_value
    report = TruncationReport(grid.half_width, level, extended.half_width, extended_level)
    logger.info('truncation sensitivity %.3e', report.relative_change)
    return report
