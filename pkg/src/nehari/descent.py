import logging
import math
from functools import lru_cache
from multiprocessing import Pool
from typing import Sequence

import numpy as np

from src.common.utils import format_error, warning_verbose
from src.config.settings import settings
from src.functional.energy import (
    energy,
    energy_gradient,
    fiber_direction,
    nehari_residual,
    norm_terms,
    pairing,
)
from src.functional.exceptions import NumericError
from src.functional.states import random_bump_state
from src.functional.typings import CoupledState, ProblemConfig
from src.grid.operators import integrate
from src.nehari.exceptions import (
    BlowUpError,
    EnergyComparisonError,
    LineSearchStalledError,
    NegativeCouplingError,
    ProjectionError,
    ZeroStateError,
)
from src.nehari.fibering import project
from src.nehari.typings import PinnedComponent, SolveReport, SolverOptions, TraceEntry
from src.nonlinearity.audit import EVEN_PRIMITIVE_BOUND, audit_conditions, default_probe_set
from src.nonlinearity.exceptions import SamplePreconditionError
from src.nonlinearity.typings import NonlinearitySpec
from src.verify.positivity import check_positivity

logger = logging.getLogger(__name__)

Arrays = tuple[np.ndarray, np.ndarray]


def minimize_ground_state(
    init: CoupledState,
    cfg: ProblemConfig,
    opts: SolverOptions,
    pin: PinnedComponent | None = None,
    init_index: int = 0,
) -> SolveReport:
    """
    Projected descent on the Nehari manifold: step along the tangential residual,
    re-project, accept on Armijo decrease of the projected energy.
    The trial step comes from the Barzilai-Borwein quotient of the last accepted step.
    """
    _, state = project(_pinned(init, pin), cfg)
    current = energy(state, cfg)
    trace: list[TraceEntry] = []
    step = opts.initial_step
    previous: tuple[Arrays, Arrays] | None = None
    converged = False
    gradient_norm = math.inf
    iteration = 0

    while True:
        gradient = tangent_gradient(state, cfg, pin)
        gradient_norm = math.sqrt(max(pairing(gradient, gradient, cfg.grid), 0.0))
        point = (state.u.values, state.v.values)
        if previous is not None:
            step = _bb_step(previous, (point, gradient), step, cfg, opts)
        trace.append(
            TraceEntry(
                iteration=iteration,
                energy=current,
                residual=nehari_residual(state, cfg),
                gradient_norm=gradient_norm,
                step=step,
            )
        )
        logger.debug(
            'iteration %d energy=%.15g gradient=%.3e step=%.3e',
            iteration,
            current,
            gradient_norm,
            step,
        )
        if gradient_norm <= opts.tol:
            converged = True
            break
        if iteration >= opts.max_iters:
            break

        state, candidate_energy, step = _line_search(
            state, current, gradient, gradient_norm, step, cfg, opts, iteration, trace
        )
        iteration += 1
        if candidate_energy < opts.blowup_energy:
            raise BlowUpError(candidate_energy, opts.blowup_energy, iteration)
        previous = (point, gradient)
        current = candidate_energy

    report = _report(state, cfg, opts, current, gradient_norm, converged, iteration, trace)
    report.init_index = init_index
    logger.info(
        'start %d: energy=%.12g gradient=%.3e iterations=%d converged=%s',
        init_index,
        report.energy_value,
        gradient_norm,
        iteration,
        converged,
    )
    return report


def tangent_gradient(
    s: CoupledState, cfg: ProblemConfig, pin: PinnedComponent | None = None
) -> Arrays:
    """Energy residual minus its component along the fiber direction (u/p, v/q)."""
    r_u, r_v = energy_gradient(s, cfg)
    if pin == PinnedComponent.U:
        r_u = np.zeros_like(r_u)
    elif pin == PinnedComponent.V:
        r_v = np.zeros_like(r_v)
    direction = fiber_direction(s, cfg)
    weight = pairing((r_u, r_v), direction, cfg.grid) / pairing(direction, direction, cfg.grid)
    return r_u - weight * direction[0], r_v - weight * direction[1]


def solve_multistart(
    cfg: ProblemConfig,
    opts: SolverOptions,
    pin: PinnedComponent | None = None,
    extra_inits: Sequence[CoupledState] = (),
) -> list[SolveReport]:
    """
    Runs one descent per start: `opts.multistart` random bumps seeded by (seed, index)
    followed by `extra_inits`. Reports are ordered by (energy, start index).
    Failed starts are logged and dropped; the first failure is raised if none succeed.
    """
    inits = [
        random_bump_state(cfg.grid, np.random.default_rng([opts.seed, index]))
        for index in range(opts.multistart)
    ]
    inits.extend(extra_inits)

    if settings.pool_size == 1 or len(inits) == 1:
        outcomes = [
            _solve_start(init, cfg, opts, pin, index) for index, init in enumerate(inits)
        ]
    else:
        with Pool(processes=settings.pool_size) as pool:
            pending = [
                pool.apply_async(_solve_start, (init, cfg, opts, pin, index))
                for index, init in enumerate(inits)
            ]
            outcomes = [result.get() for result in pending]

    reports = [outcome for outcome in outcomes if isinstance(outcome, SolveReport)]
    failures = [outcome for outcome in outcomes if isinstance(outcome, Exception)]
    for failure in failures:
        logger.warning('start failed: %s', format_error(failure))
    if not reports:
        raise failures[0]

    reports.sort(key=lambda r: (r.energy_value, r.init_index))
    return reports


def absolutize_project(s: CoupledState, cfg: ProblemConfig) -> CoupledState:
    """Projection of (|u|, |v|); its energy must not exceed that of the projection of (u, v)."""
    if not cfg.lambda_nonnegative:
        raise NegativeCouplingError(float(np.min(cfg.lam_values)))
    for name, spec in (('f', cfg.f), ('g', cfg.g)):
        if not _even_primitive_holds(spec):
            raise SamplePreconditionError(f'{name} fails F(-t) <= F(t) on the probe set')

    _, signed = project(s, cfg)
    _, absolute = project(s.absolute(), cfg)
    signed_energy = energy(signed, cfg)
    absolute_energy = energy(absolute, cfg)
    if absolute_energy > signed_energy + 1e-12 * max(1.0, abs(signed_energy)):
        raise EnergyComparisonError(
            f'projected |state| energy {absolute_energy:.15g} exceeds '
            f'projected state energy {signed_energy:.15g}'
        )
    return absolute


def mass_fractions(s: CoupledState) -> tuple[float, float]:
    mass_u = integrate(s.u.values**2, s.grid)
    mass_v = integrate(s.v.values**2, s.grid)
    total = mass_u + mass_v
    if total == 0:
        return 0.0, 0.0
    return mass_u / total, mass_v / total


def state_norm(s: CoupledState, cfg: ProblemConfig) -> float:
    """|u|_{a,p} + |v|_{b,q}."""
    norm_u, norm_v = norm_terms(s, cfg)
    return norm_u ** (1 / cfg.p) + norm_v ** (1 / cfg.q)


@lru_cache(maxsize=32)
def _even_primitive_holds(spec: NonlinearitySpec) -> bool:
    report = audit_conditions(spec, default_probe_set())
    return report.verdict(EVEN_PRIMITIVE_BOUND).passed


def _solve_start(
    init: CoupledState,
    cfg: ProblemConfig,
    opts: SolverOptions,
    pin: PinnedComponent | None,
    index: int,
) -> SolveReport | Exception:
    try:
        return minimize_ground_state(init, cfg, opts, pin=pin, init_index=index)
    except Exception as e:  # pylint: disable=broad-except
        return e


def _pinned(s: CoupledState, pin: PinnedComponent | None) -> CoupledState:
    if pin == PinnedComponent.U:
        return CoupledState.from_arrays(np.zeros(s.grid.shape), s.v.values, s.grid)
    if pin == PinnedComponent.V:
        return CoupledState.from_arrays(s.u.values, np.zeros(s.grid.shape), s.grid)
    return s


# pylint: disable-next=too-many-arguments
def _line_search(
    state: CoupledState,
    current: float,
    gradient: Arrays,
    gradient_norm: float,
    step: float,
    cfg: ProblemConfig,
    opts: SolverOptions,
    iteration: int,
    trace: list[TraceEntry],
) -> tuple[CoupledState, float, float]:
    slack = opts.energy_slack * max(1.0, abs(current))
    for _ in range(opts.max_halvings + 1):
        try:
            candidate = CoupledState.from_arrays(
                state.u.values - step * gradient[0],
                state.v.values - step * gradient[1],
                cfg.grid,
            )
            _, candidate = project(candidate, cfg)
            candidate_energy = energy(candidate, cfg)
        except (ProjectionError, ZeroStateError, NumericError) as e:
            warning_verbose('rejected step %.3e: %s', step, format_error(e))
        else:
            if candidate_energy <= current - opts.armijo * step * gradient_norm**2 + slack:
                return candidate, candidate_energy, step
        step /= 2
    raise LineSearchStalledError(opts.max_halvings, iteration, trace)


def _bb_step(
    previous: tuple[Arrays, Arrays],
    latest: tuple[Arrays, Arrays],
    step: float,
    cfg: ProblemConfig,
    opts: SolverOptions,
) -> float:
    (x_old, g_old), (x_new, g_new) = previous, latest
    dx = (x_new[0] - x_old[0], x_new[1] - x_old[1])
    dg = (g_new[0] - g_old[0], g_new[1] - g_old[1])
    curvature = pairing(dx, dg, cfg.grid)
    if curvature > 0:
        candidate = pairing(dx, dx, cfg.grid) / curvature
    else:
        candidate = 2 * step
    return min(candidate, opts.max_step)


# pylint: disable-next=too-many-arguments
def _report(
    state: CoupledState,
    cfg: ProblemConfig,
    opts: SolverOptions,
    current: float,
    gradient_norm: float,
    converged: bool,
    iterations: int,
    trace: list[TraceEntry],
) -> SolveReport:
    fraction_u, fraction_v = mass_fractions(state)
    return SolveReport(
        state=state,
        energy_value=current,
        nehari_residual=nehari_residual(state, cfg),
        gradient_norm=gradient_norm,
        converged=converged,
        iterations=iterations,
        mass_fraction_u=fraction_u,
        mass_fraction_v=fraction_v,
        norm_value=state_norm(state, cfg),
        config_digest=cfg.family_digest,
        positivity=check_positivity(state, opts.positivity_tol).verdict,
        trace=trace,
        mass_threshold=opts.mass_fraction,
    )
