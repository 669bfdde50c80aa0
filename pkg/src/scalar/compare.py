import logging

import numpy as np

from src.common.utils import warning_verbose
from src.functional.energy import energy
from src.functional.typings import CoupledState, ProblemConfig
from src.grid.operators import integrate
from src.nehari.descent import absolutize_project, solve_multistart
from src.nehari.exceptions import NegativeCouplingError
from src.nehari.fibering import FiberingMap, project
from src.nehari.typings import SolveReport, SolverOptions
from src.potential.exceptions import PerturbationSignError
from src.potential.fields import make_asymptotic_pair
from src.potential.typings import Perturbation, PotentialFamily, PotentialSpec
from src.scalar.exceptions import MISMATCHED_CONFIGS, NO_BRACKET, ComparisonError
from src.scalar.solve import solve_scalar
from src.scalar.typings import (
    FULLY_NONTRIVIAL,
    SEMITRIVIAL_RISK,
    AsymptoticComparison,
    GapTrend,
    LambdaPoint,
    ScalarReport,
    SemitrivialVerdict,
    Side,
    ThresholdReport,
    TrialStateBound,
)

logger = logging.getLogger(__name__)

DEFAULT_SLACK = 1e-8
DEFAULT_MASS_FRACTION = 1e-6


def compare_semitrivial(
    coupled: SolveReport,
    sa: ScalarReport,
    sb: ScalarReport,
    slack: float = DEFAULT_SLACK,
    mass_fraction: float = DEFAULT_MASS_FRACTION,
) -> SemitrivialVerdict:
    """
    fully-nontrivial iff the coupled level is below both scalar levels by `slack`
    and each component carries at least `mass_fraction` of the L2 mass.
    """
    digests = {coupled.config_digest, sa.config_digest, sb.config_digest}
    if len(digests) != 1:
        raise ComparisonError(MISMATCHED_CONFIGS.format(digests=sorted(digests)))
    if sa.side != Side.A or sb.side != Side.B:
        raise ComparisonError('scalar reports must be the a-side and the b-side, in that order')
    for name, converged in (
        ('coupled', coupled.converged),
        ('a-side', sa.converged),
        ('b-side', sb.converged),
    ):
        if not converged:
            logger.warning('%s solve did not reach tolerance, comparison is indicative', name)

    level_a, level_b = sa.level, sb.level
    gap = min(level_a, level_b) - coupled.energy_value
    binding = None
    if gap <= slack:
        binding = f'coupled level vs {"a" if level_a <= level_b else "b"}-side level'
    elif coupled.mass_fraction_u < mass_fraction:
        binding = 'mass fraction of u'
    elif coupled.mass_fraction_v < mass_fraction:
        binding = 'mass fraction of v'

    return SemitrivialVerdict(
        verdict=FULLY_NONTRIVIAL if binding is None else SEMITRIVIAL_RISK,
        coupled_level=coupled.energy_value,
        level_a=level_a,
        level_b=level_b,
        gap=gap,
        mass_fraction_u=coupled.mass_fraction_u,
        mass_fraction_v=coupled.mass_fraction_v,
        binding=binding,
    )


def trial_state_bound(sa: ScalarReport, sb: ScalarReport, cfg: ProblemConfig) -> TrialStateBound:
    """
    Projects (|u_a|, |v_b|) and compares its energy with
    t0 * (|u|^p/p + |v|^q/q - lambda_0 * int_{B_R} |u|^alpha |v|^beta).
    """
    if not cfg.lambda_nonnegative:
        raise NegativeCouplingError(float(np.min(cfg.lam_values)))
    trial = CoupledState(sa.field, sb.field).absolute()
    fiber = FiberingMap(trial, cfg)
    report, projected = project(trial, cfg)

    budget = cfg.budget
    ball_integral = 0.0
    if budget.ball_radius > 0:
        ball = cfg.grid.radius <= budget.ball_radius
        density = trial.u.values**cfg.alpha * trial.v.values**cfg.beta
        ball_integral = integrate(np.where(ball, density, 0.0), cfg.grid)
    bound = report.t0 * (
        fiber.norm_u / cfg.p + fiber.norm_v / cfg.q - budget.lambda_floor * ball_integral
    )
    return TrialStateBound(
        energy=energy(projected, cfg),
        bound=bound,
        t0=report.t0,
        lambda_floor=budget.lambda_floor,
        ball_integral=ball_integral,
    )


def lambda_at_level(spec: PotentialSpec, level: float) -> PotentialSpec:
    """lambda_0 acts as the ball floor when a ball is configured, else as a constant level."""
    if spec.ball_radius > 0:
        return PotentialSpec(
            family=spec.family,
            role=spec.role,
            base_level=spec.base_level,
            modulation_amplitude=spec.modulation_amplitude,
            perturbation=spec.perturbation,
            ball_radius=spec.ball_radius,
            ball_floor=level,
        )
    return PotentialSpec(family=PotentialFamily.CONSTANT, role=spec.role, base_level=level)


def solve_scalar_pair(cfg: ProblemConfig, opts: SolverOptions) -> tuple[ScalarReport, ScalarReport]:
    return solve_scalar(Side.A, cfg, opts), solve_scalar(Side.B, cfg, opts)


# pylint: disable-next=too-many-arguments
def evaluate_coupled(
    cfg: ProblemConfig,
    opts: SolverOptions,
    scalars: tuple[ScalarReport, ScalarReport],
    slack: float = DEFAULT_SLACK,
    mass_fraction: float = DEFAULT_MASS_FRACTION,
) -> tuple[SolveReport, SemitrivialVerdict]:
    """
    Coupled solve seeded with the semitrivial candidates (u_a, 0), (0, v_b) and the
    projected trial state (|u_a|, |v_b|) besides the random starts.
    """
    sa, sb = scalars
    zero = np.zeros(cfg.grid.shape)
    seeds = [
        CoupledState.from_arrays(sa.field.values, zero, cfg.grid),
        CoupledState.from_arrays(zero, sb.field.values, cfg.grid),
        CoupledState(sa.field, sb.field).absolute(),
    ]
    coupled = solve_multistart(cfg, opts, extra_inits=seeds)[0]
    return coupled, compare_semitrivial(coupled, sa, sb, slack, mass_fraction)


# pylint: disable-next=too-many-arguments
def evaluate_lambda_level(
    cfg: ProblemConfig,
    level: float,
    opts: SolverOptions,
    scalars: tuple[ScalarReport, ScalarReport],
    slack: float = DEFAULT_SLACK,
    mass_fraction: float = DEFAULT_MASS_FRACTION,
) -> LambdaPoint:
    leveled = cfg.replace(lam=lambda_at_level(cfg.lam, level))
    if not leveled.budget.feasible:
        return LambdaPoint(level=level, feasible=False)
    _, verdict = evaluate_coupled(leveled, opts, scalars, slack, mass_fraction)
    logger.info('lambda0=%.6g verdict=%s gap=%.3e', level, verdict.verdict, verdict.gap)
    return LambdaPoint(level=level, feasible=True, verdict=verdict)


# pylint: disable-next=too-many-arguments
def locate_lambda_threshold(
    cfg: ProblemConfig,
    opts: SolverOptions,
    lambda_max: float,
    steps: int,
    slack: float = DEFAULT_SLACK,
    mass_fraction: float = DEFAULT_MASS_FRACTION,
    scalars: tuple[ScalarReport, ScalarReport] | None = None,
) -> ThresholdReport:
    """Bisects lambda_0 on [0, lambda_max] for the semitrivial-risk -> fully-nontrivial change."""
    scalars = scalars or solve_scalar_pair(cfg, opts)
    evaluations = []

    def verdict_at(level: float) -> str:
        point = evaluate_lambda_level(cfg, level, opts, scalars, slack, mass_fraction)
        evaluations.append(point)
        if point.verdict is None:
            raise ComparisonError(f'lambda level {level:.6g} violates the coupling budget')
        return point.verdict.verdict

    low, high = 0.0, lambda_max
    low_verdict, high_verdict = verdict_at(low), verdict_at(high)
    if low_verdict != SEMITRIVIAL_RISK or high_verdict != FULLY_NONTRIVIAL:
        raise ComparisonError(
            NO_BRACKET.format(
                low=low, high=high, low_verdict=low_verdict, high_verdict=high_verdict
            )
        )
    for _ in range(steps):
        mid = (low + high) / 2
        if verdict_at(mid) == FULLY_NONTRIVIAL:
            high = mid
        else:
            low = mid

    evaluations.sort(key=lambda point: point.level)
    return ThresholdReport(threshold=high, bracket=(low, high), evaluations=evaluations)


def check_asymptotic_pair(periodic_cfg: ProblemConfig, asymptotic_cfg: ProblemConfig) -> None:
    specs = (asymptotic_cfg.a, asymptotic_cfg.b, asymptotic_cfg.lam)
    for spec in specs:
        if spec.family != PotentialFamily.ASYMPTOTICALLY_PERIODIC or spec.perturbation is None:
            raise PerturbationSignError(spec.role.value, 'present')
    rebuilt = make_asymptotic_pair(
        (periodic_cfg.a, periodic_cfg.b, periodic_cfg.lam),
        (specs[0].perturbation, specs[1].perturbation, specs[2].perturbation),
        periodic_cfg.grid,
    )
    if periodic_cfg.replace(a=rebuilt[0], b=rebuilt[1], lam=rebuilt[2]) != asymptotic_cfg:
        raise ComparisonError('asymptotic problem is not a perturbation of the periodic problem')


# pylint: disable-next=too-many-arguments
def compare_periodic_asymptotic(
    periodic_cfg: ProblemConfig,
    asymptotic_cfg: ProblemConfig,
    opts: SolverOptions,
    slack: float = DEFAULT_SLACK,
    tolerance: float = 1e-6,
    periodic: SolveReport | None = None,
) -> AsymptoticComparison:
    """
    Projects the nonnegative periodic ground state into the asymptotic problem: its
    energy bounds the asymptotic level from above and must sit strictly below the
    periodic level. The full asymptotic solve, seeded with that state, must not exceed it.
    """
    check_asymptotic_pair(periodic_cfg, asymptotic_cfg)
    ground, periodic_level = nonnegative_ground_state(periodic_cfg, opts, periodic)
    report, trial = project(ground, asymptotic_cfg)
    upper_bound = energy(trial, asymptotic_cfg)
    asymptotic = solve_multistart(asymptotic_cfg, opts, extra_inits=[trial])[0]

    comparison = AsymptoticComparison(
        periodic_level=periodic_level,
        upper_bound=upper_bound,
        asymptotic_level=asymptotic.energy_value,
        t0=report.t0,
        slack=slack,
        tolerance=tolerance,
    )
    logger.info(
        'periodic level %.12g, asymptotic bound %.12g, asymptotic level %.12g',
        periodic_level,
        upper_bound,
        asymptotic.energy_value,
    )
    return comparison


def asymptotic_gap_trend(
    periodic_cfg: ProblemConfig,
    perturbations: tuple[Perturbation, Perturbation, Perturbation],
    opts: SolverOptions,
    halvings: int = 3,
    periodic: SolveReport | None = None,
) -> GapTrend:
    """Gap between the periodic level and the projected bound as all amplitudes halve."""
    ground, periodic_level = nonnegative_ground_state(periodic_cfg, opts, periodic)
    factors, gaps = [], []
    for k in range(halvings + 1):
        factor = 0.5**k
        a, b, lam = make_asymptotic_pair(
            (periodic_cfg.a, periodic_cfg.b, periodic_cfg.lam),
            (
                perturbations[0].scaled(factor),
                perturbations[1].scaled(factor),
                perturbations[2].scaled(factor),
            ),
            periodic_cfg.grid,
        )
        asymptotic_cfg = periodic_cfg.replace(a=a, b=b, lam=lam)
        _, trial = project(ground, asymptotic_cfg)
        factors.append(factor)
        gaps.append(periodic_level - energy(trial, asymptotic_cfg))

    trend = GapTrend(factors=factors, gaps=gaps)
    if not trend.monotone:
        warning_verbose('asymptotic gaps do not shrink monotonically: %s', gaps)
    return trend


def nonnegative_ground_state(
    cfg: ProblemConfig, opts: SolverOptions, periodic: SolveReport | None
) -> tuple[CoupledState, float]:
    periodic = periodic or solve_multistart(cfg, opts)[0]
    ground = absolutize_project(periodic.state, cfg)
    return ground, energy(ground, cfg)
