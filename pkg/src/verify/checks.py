import dataclasses
import math
import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Callable

import numpy as np

from src.functional.energy import (
    coupling_term,
    energy,
    energy_gradient,
    fiber_direction,
    nehari_residual,
    norm_terms,
    pairing,
    young_bound,
)
from src.functional.states import random_direction, random_positive_state
from src.functional.typings import CoupledState, ProblemConfig
from src.nehari.descent import absolutize_project
from src.nehari.fibering import FiberingMap, project
from src.nehari.probes import norm_floor_trend, norm_lower_bound_probe, sign_change_scan
from src.nonlinearity.audit import (
    DERIVATIVE_SIGN,
    EVEN_PRIMITIVE_BOUND,
    EXCESS_INCREASING,
    RATIO_INCREASING,
    SMALL_AND_LARGE_GROWTH,
    SUBCRITICAL_GROWTH,
    audit_conditions,
    default_probe_set,
)
from src.nonlinearity.typings import ConditionReport, NonlinearitySpec
from src.potential.fields import make_asymptotic_pair
from src.potential.typings import PotentialFamily
from src.scalar.compare import nonnegative_ground_state, solve_scalar_pair, trial_state_bound
from src.verify.exceptions import REGISTRY_MISMATCH, RegistryError, SkipCheck
from src.verify.positivity import IDENTICALLY_ZERO, check_positivity
from src.verify.typings import CheckOutcome, VerifyOptions

CHECK_NAMES = (
    'young_coupling_bound',
    'nonlinearity_hypotheses',
    'derivative_sign',
    'excess_monotonicity',
    'gradient_consistency',
    'nehari_residual_pairing',
    'fibering_uniqueness',
    'projection_invariance',
    'nehari_norm_floor',
    'nonnegative_projection',
    'semitrivial_test_state',
    'asymptotic_level_gap',
    'ground_state_positivity',
)


class SharedSolves:
    """Solves several checks depend on, computed once per run under a lock."""

    def __init__(self, cfg: ProblemConfig, options: VerifyOptions) -> None:
        self.cfg = cfg
        self.solver = dataclasses.replace(options.solver, multistart=options.solve_starts)
        self._lock = threading.Lock()
        self._cache: dict[str, Any] = {}

    def ground_state(self) -> tuple[CoupledState, float]:
        return self._get('ground', lambda: nonnegative_ground_state(self.cfg, self.solver, None))

    def scalars(self) -> Any:
        return self._get('scalars', lambda: solve_scalar_pair(self.cfg, self.solver))

    def _get(self, key: str, compute: Callable[[], Any]) -> Any:
        with self._lock:
            if key not in self._cache:
                try:
                    self._cache[key] = compute()
                except Exception as e:  # pylint: disable=broad-except
                    self._cache[key] = e
            value = self._cache[key]
        if isinstance(value, Exception):
            raise value
        return value


@dataclass
class CheckContext:
    cfg: ProblemConfig
    options: VerifyOptions
    seed: int
    rng: np.random.Generator
    shared: SharedSolves


@dataclass
class RegisteredCheck:
    name: str
    anchor: str
    run: Callable[[CheckContext], CheckOutcome]


_REGISTRY: dict[str, RegisteredCheck] = {}


def register_check(name: str, anchor: str) -> Callable:
    def decorator(func: Callable[[CheckContext], CheckOutcome]) -> Callable:
        _REGISTRY[name] = RegisteredCheck(name=name, anchor=anchor, run=func)
        return func

    return decorator


def registered_checks() -> list[RegisteredCheck]:
    return list(_REGISTRY.values())


def registry_self_test() -> None:
    registered = tuple(_REGISTRY)
    if registered != CHECK_NAMES:
        raise RegistryError(REGISTRY_MISMATCH.format(registered=registered, expected=CHECK_NAMES))


@register_check('young_coupling_bound', 'coupling integral within the Young inequality budget')
def young_coupling_bound(context: CheckContext) -> CheckOutcome:
    cfg = context.cfg
    budget = cfg.budget
    if not budget.feasible:
        return CheckOutcome(
            passed=False,
            margin=budget.margin,
            samples=0,
            detail=f'delta={budget.delta:.6g} leaves margin {budget.margin:.6g}',
        )
    slacks = []
    for _ in range(context.options.n_samples):
        state = random_positive_state(cfg.grid, context.rng)
        slacks.append(young_bound(state, cfg) - coupling_term(state, cfg))
    return CheckOutcome(
        passed=min(slacks) >= 0,
        margin=min(slacks),
        samples=len(slacks),
        detail=f'delta={budget.delta:.6g} margin={budget.margin:.6g}',
    )


@register_check('nonlinearity_hypotheses', 'growth, subcriticality and ratio monotonicity of f, g')
def nonlinearity_hypotheses(context: CheckContext) -> CheckOutcome:
    names = (SMALL_AND_LARGE_GROWTH, SUBCRITICAL_GROWTH, RATIO_INCREASING, EVEN_PRIMITIVE_BOUND)
    return _audit_outcome(context.cfg, names)


@register_check('derivative_sign', "f'(t) t^2 - (e - 1) f(t) t > 0 on the probe set")
def derivative_sign(context: CheckContext) -> CheckOutcome:
    return _audit_outcome(context.cfg, (DERIVATIVE_SIGN,))


@register_check('excess_monotonicity', 'f(t) t - e F(t) increasing and nonnegative')
def excess_monotonicity(context: CheckContext) -> CheckOutcome:
    return _audit_outcome(context.cfg, (EXCESS_INCREASING,))


@register_check('gradient_consistency', 'energy residual pairs to the directional derivative')
def gradient_consistency(context: CheckContext) -> CheckOutcome:
    cfg, options = context.cfg, context.options
    step = options.gradient_step
    errors = []
    for _ in range(options.n_samples):
        state = random_positive_state(cfg.grid, context.rng)
        direction = random_direction(cfg.grid, context.rng)
        plus = CoupledState.from_arrays(
            state.u.values + step * direction.u.values,
            state.v.values + step * direction.v.values,
            cfg.grid,
        )
        minus = CoupledState.from_arrays(
            state.u.values - step * direction.u.values,
            state.v.values - step * direction.v.values,
            cfg.grid,
        )
        central = (energy(plus, cfg) - energy(minus, cfg)) / (2 * step)
        residual = energy_gradient(state, cfg)
        d = (direction.u.values, direction.v.values)
        paired = pairing(residual, d, cfg.grid)
        scale = math.sqrt(pairing(residual, residual, cfg.grid) * pairing(d, d, cfg.grid))
        errors.append(abs(central - paired) / max(scale, 1e-300))
    worst = max(errors)
    return CheckOutcome(
        passed=worst <= options.gradient_tol,
        margin=options.gradient_tol - worst,
        samples=len(errors),
        detail=f'worst relative error {worst:.3e}',
    )


@register_check('nehari_residual_pairing', 'Nehari functional equals the fiber-direction pairing')
def nehari_residual_pairing(context: CheckContext) -> CheckOutcome:
    cfg, options = context.cfg, context.options
    errors = []
    for index in range(options.n_samples):
        state = _random_state(context, signed=index % 2 == 1)
        direct = nehari_residual(state, cfg)
        paired = pairing(energy_gradient(state, cfg), fiber_direction(state, cfg), cfg.grid)
        norm_u, norm_v = norm_terms(state, cfg)
        scale = max(abs(direct), abs(paired), norm_u / cfg.p + norm_v / cfg.q)
        errors.append(abs(direct - paired) / scale)
    worst = max(errors)
    return CheckOutcome(
        passed=worst <= options.residual_tol,
        margin=options.residual_tol - worst,
        samples=len(errors),
        detail=f'worst relative difference {worst:.3e}',
    )


@register_check('fibering_uniqueness', 'single critical point of the fibering map')
def fibering_uniqueness(context: CheckContext) -> CheckOutcome:
    cfg = context.cfg
    deviations = []
    monotone = True
    for index in range(context.options.n_samples):
        state = _random_state(context, signed=index % 2 == 1)
        report, _ = project(state, cfg)
        monotone = monotone and report.rhs_monotone
        changes = sign_change_scan(FiberingMap(state, cfg), report.t0)
        deviations.append(abs(changes - 1))
    worst = max(deviations)
    return CheckOutcome(
        passed=worst == 0 and monotone,
        margin=-float(worst),
        samples=len(deviations),
        detail=f'rhs trail increasing: {monotone}',
    )


@register_check('projection_invariance', 'projection idempotent and invariant under fiber scaling')
def projection_invariance(context: CheckContext) -> CheckOutcome:
    cfg, options = context.cfg, context.options
    worst = 0.0
    for _ in range(options.n_samples):
        state = random_positive_state(cfg.grid, context.rng)
        _, projected = project(state, cfg)
        again, _ = project(projected, cfg)
        c = math.exp(context.rng.uniform(math.log(0.1), math.log(10.0)))
        _, rescaled = project(state.scaled(c, cfg.p, cfg.q), cfg)
        drift = max(
            _relative_difference(rescaled.u.values, projected.u.values),
            _relative_difference(rescaled.v.values, projected.v.values),
        )
        worst = max(worst, abs(again.t0 - 1), drift)
    return CheckOutcome(
        passed=worst <= options.projection_tol,
        margin=options.projection_tol - worst,
        samples=options.n_samples,
        detail=f'worst relative change {worst:.3e}',
    )


@register_check('nehari_norm_floor', 'Nehari manifold bounded away from zero')
def nehari_norm_floor(context: CheckContext) -> CheckOutcome:
    cfg, options = context.cfg, context.options
    floor = norm_lower_bound_probe(cfg, options.n_samples, context.seed)
    detail = f'empirical floor {floor:.6g}'
    decreasing = True
    if cfg.lambda_nonnegative and cfg.budget.delta > 0:
        trend = norm_floor_trend(cfg, options.n_samples, context.seed)
        decreasing = trend.decreasing
        floors = ', '.join(f'{value:.6g}' for value in trend.floors)
        detail += f'; floors over delta -> {cfg.delta_limit:.6g}: {floors}'
    else:
        detail += '; delta trend needs a nonnegative coupling that is not zero'
    return CheckOutcome(
        passed=floor >= options.norm_floor and decreasing,
        margin=floor - options.norm_floor,
        samples=options.n_samples,
        detail=detail,
    )


@register_check('nonnegative_projection', 'absolute values do not raise the projected energy')
def nonnegative_projection(context: CheckContext) -> CheckOutcome:
    cfg = context.cfg
    _require_nonnegative_lambda(cfg)
    margins = []
    for _ in range(context.options.n_samples):
        state = random_direction(cfg.grid, context.rng)
        _, signed = project(state, cfg)
        absolute = absolutize_project(state, cfg)
        margins.append(energy(signed, cfg) - energy(absolute, cfg))
    return CheckOutcome(passed=True, margin=min(margins), samples=len(margins))


@register_check('semitrivial_test_state', 'projected scalar ground states obey the trial bound')
def semitrivial_test_state(context: CheckContext) -> CheckOutcome:
    cfg = context.cfg
    _require_nonnegative_lambda(cfg)
    sa, sb = context.shared.scalars()
    bound = trial_state_bound(sa, sb, cfg)
    below = bound.energy < min(sa.level, sb.level)
    return CheckOutcome(
        passed=bound.holds,
        margin=bound.bound - bound.energy,
        samples=1,
        detail=(
            f'trial energy {bound.energy:.12g}, bound {bound.bound:.12g}, '
            f'below both scalar levels: {below}'
        ),
    )


@register_check('asymptotic_level_gap', 'asymptotic level strictly below the periodic level')
def asymptotic_level_gap(context: CheckContext) -> CheckOutcome:
    cfg, options = context.cfg, context.options
    _require_nonnegative_lambda(cfg)
    if any(s.family == PotentialFamily.ASYMPTOTICALLY_PERIODIC for s in (cfg.a, cfg.b, cfg.lam)):
        raise SkipCheck('potentials are already asymptotically periodic')
    a, b, lam = make_asymptotic_pair((cfg.a, cfg.b, cfg.lam), options.perturbations, cfg.grid)
    asymptotic_cfg = cfg.replace(a=a, b=b, lam=lam)
    ground, periodic_level = context.shared.ground_state()
    _, trial = project(ground, asymptotic_cfg)
    upper_bound = energy(trial, asymptotic_cfg)
    gap = periodic_level - upper_bound
    return CheckOutcome(
        passed=gap > options.semitrivial_slack,
        margin=gap - options.semitrivial_slack,
        samples=1,
        detail=f'periodic level {periodic_level:.12g}, asymptotic bound {upper_bound:.12g}',
    )


@register_check('ground_state_positivity', 'interior positivity of the nonnegative ground state')
def ground_state_positivity(context: CheckContext) -> CheckOutcome:
    _require_nonnegative_lambda(context.cfg)
    ground, _ = context.shared.ground_state()
    verdict = check_positivity(ground, context.options.positivity_tol)
    core_minima = [c.core_min for c in (verdict.u, verdict.v) if c.status != IDENTICALLY_ZERO]
    return CheckOutcome(
        passed=verdict.passed,
        margin=min(core_minima) if core_minima else 0.0,
        samples=1,
        detail=f'verdict {verdict.verdict}',
    )


@lru_cache(maxsize=32)
def _audit(spec: NonlinearitySpec) -> ConditionReport:
    return audit_conditions(spec, default_probe_set())


def _audit_outcome(cfg: ProblemConfig, names: tuple[str, ...]) -> CheckOutcome:
    failed = []
    margins = []
    samples = 0
    for label, spec in (('f', cfg.f), ('g', cfg.g)):
        report = _audit(spec)
        samples += report.samples
        for name in names:
            verdict = report.verdict(name)
            margins.append(verdict.margin)
            if not verdict.passed:
                failed.append(f'{label}:{name}')
    detail = f'failed {", ".join(failed)}' if failed else 'all sampled conditions hold'
    return CheckOutcome(passed=not failed, margin=min(margins), samples=samples, detail=detail)


def _random_state(context: CheckContext, signed: bool) -> CoupledState:
    if signed:
        return random_direction(context.cfg.grid, context.rng)
    return random_positive_state(context.cfg.grid, context.rng)


def _require_nonnegative_lambda(cfg: ProblemConfig) -> None:
    if not cfg.lambda_nonnegative:
        raise SkipCheck('requires lambda >= 0 on the grid')


def _relative_difference(first: np.ndarray, second: np.ndarray) -> float:
    scale = float(np.max(np.abs(second)))
    if scale == 0:
        return float(np.max(np.abs(first)))
    return float(np.max(np.abs(first - second))) / scale
