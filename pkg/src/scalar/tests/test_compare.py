import dataclasses

import numpy as np
import pytest

from src.conftest import centered_bump, quartic_config
from src.functional.typings import CoupledState, ProblemConfig
from src.grid.typings import GridField, GridSpec
from src.nehari.descent import minimize_ground_state
from src.nehari.exceptions import NegativeCouplingError
from src.nehari.typings import SolveReport, SolverOptions
from src.potential.exceptions import PerturbationSignError
from src.potential.fields import make_asymptotic_pair
from src.potential.typings import Perturbation, PotentialFamily, PotentialRole, PotentialSpec
from src.scalar import compare
from src.scalar.compare import (
    asymptotic_gap_trend,
    check_asymptotic_pair,
    compare_periodic_asymptotic,
    compare_semitrivial,
    evaluate_coupled,
    evaluate_lambda_level,
    lambda_at_level,
    locate_lambda_threshold,
    trial_state_bound,
)
from src.scalar.exceptions import ComparisonError
from src.scalar.solve import solve_scalar
from src.scalar.typings import (
    FULLY_NONTRIVIAL,
    SEMITRIVIAL_RISK,
    LambdaPoint,
    ScalarReport,
    SemitrivialVerdict,
    Side,
)

PERTURBATIONS = (Perturbation(-0.5), Perturbation(-0.5), Perturbation(0.2))


def _coupled_report(
    grid: GridSpec,
    level: float,
    fractions: tuple[float, float] = (0.5, 0.5),
    digest: str = 'family',
) -> SolveReport:
    zero = GridField.zeros(grid)
    return SolveReport(
        state=CoupledState(zero, zero),
        energy_value=level,
        nehari_residual=0.0,
        gradient_norm=0.0,
        converged=True,
        iterations=1,
        mass_fraction_u=fractions[0],
        mass_fraction_v=fractions[1],
        norm_value=1.0,
        config_digest=digest,
    )


def _scalar_report(
    grid: GridSpec, side: Side, level: float, field: GridField | None = None
) -> ScalarReport:
    return ScalarReport(
        side=side,
        field=field if field is not None else GridField.zeros(grid),
        level=level,
        residual=0.0,
        gradient_norm=0.0,
        converged=True,
        config_digest='family',
    )


def _scalars(cfg: ProblemConfig, opts: SolverOptions) -> tuple[ScalarReport, ScalarReport]:
    init = centered_bump(cfg.grid).u
    return solve_scalar(Side.A, cfg, opts, init=init), solve_scalar(Side.B, cfg, opts, init=init)


class TestCompareSemitrivial:
    def test_fully_nontrivial(self, small_grid: GridSpec):
        verdict = compare_semitrivial(
            _coupled_report(small_grid, 1.0),
            _scalar_report(small_grid, Side.A, 1.5),
            _scalar_report(small_grid, Side.B, 2.0),
        )
        assert verdict.verdict == FULLY_NONTRIVIAL
        assert verdict.gap == pytest.approx(0.5)
        assert verdict.binding is None
        assert verdict.to_dict()['min_scalar_level'] == 1.5

    @pytest.mark.parametrize(
        'level, fractions, binding',
        [
            pytest.param(1.5, (0.5, 0.5), 'coupled level vs a-side level', id='no-gap'),
            pytest.param(1.5 - 1e-9, (0.5, 0.5), 'coupled level vs a-side level', id='in-slack'),
            pytest.param(1.0, (1.0, 0.0), 'mass fraction of v', id='v-vanishes'),
            pytest.param(1.0, (1e-7, 1.0), 'mass fraction of u', id='u-vanishes'),
        ],
    )
    def test_semitrivial_risk(self, small_grid: GridSpec, level, fractions, binding):
        verdict = compare_semitrivial(
            _coupled_report(small_grid, level, fractions),
            _scalar_report(small_grid, Side.A, 1.5),
            _scalar_report(small_grid, Side.B, 2.0),
        )
        assert verdict.verdict == SEMITRIVIAL_RISK
        assert verdict.binding == binding

    def test_mismatched_families(self, small_grid: GridSpec):
        with pytest.raises(ComparisonError, match='different problem families'):
            compare_semitrivial(
                _coupled_report(small_grid, 1.0, digest='other'),
                _scalar_report(small_grid, Side.A, 1.5),
                _scalar_report(small_grid, Side.B, 2.0),
            )

    def test_sides_in_order(self, small_grid: GridSpec):
        with pytest.raises(ComparisonError, match='in that order'):
            compare_semitrivial(
                _coupled_report(small_grid, 1.0),
                _scalar_report(small_grid, Side.B, 2.0),
                _scalar_report(small_grid, Side.A, 1.5),
            )

    def test_unconverged_solve_is_logged(self, small_grid: GridSpec, caplog):
        coupled = dataclasses.replace(_coupled_report(small_grid, 1.0), converged=False)
        compare_semitrivial(
            coupled,
            _scalar_report(small_grid, Side.A, 1.5),
            _scalar_report(small_grid, Side.B, 2.0),
        )
        assert 'coupled solve did not reach tolerance' in caplog.text


class TestEvaluateCoupled:
    def test_uncoupled_is_semitrivial(self, quartic_cfg: ProblemConfig, fast_opts: SolverOptions):
        opts = dataclasses.replace(fast_opts, multistart=1)
        scalars = _scalars(quartic_cfg, opts)
        coupled, verdict = evaluate_coupled(quartic_cfg, opts, scalars)

        assert verdict.verdict == SEMITRIVIAL_RISK
        assert coupled.energy_value <= scalars[0].level + 1e-8 * scalars[0].level

    def test_strong_coupling_is_fully_nontrivial(
        self, coupled_cfg: ProblemConfig, fast_opts: SolverOptions
    ):
        opts = dataclasses.replace(fast_opts, multistart=1)
        scalars = _scalars(coupled_cfg, opts)
        coupled, verdict = evaluate_coupled(coupled_cfg, opts, scalars)

        assert verdict.verdict == FULLY_NONTRIVIAL
        assert verdict.gap > 0
        assert min(coupled.mass_fraction_u, coupled.mass_fraction_v) > 0.4


class TestTrialStateBound:
    def test_holds_with_ball_floor(self, small_grid: GridSpec):
        lam = PotentialSpec(
            PotentialFamily.CONSTANT, PotentialRole.LAMBDA, 0.0, ball_radius=2.0, ball_floor=0.3
        )
        cfg = quartic_config(small_grid).replace(lam=lam)
        bump = centered_bump(small_grid)
        bound = trial_state_bound(
            _scalar_report(small_grid, Side.A, 1.0, bump.u),
            _scalar_report(small_grid, Side.B, 1.0, bump.v),
            cfg,
        )

        assert bound.lambda_floor == 0.3
        assert bound.ball_integral > 0
        assert bound.holds
        assert bound.to_dict()['holds'] is True

    def test_without_ball(self, coupled_cfg: ProblemConfig):
        bump = centered_bump(coupled_cfg.grid)
        bound = trial_state_bound(
            _scalar_report(coupled_cfg.grid, Side.A, 1.0, bump.u),
            _scalar_report(coupled_cfg.grid, Side.B, 1.0, bump.v),
            coupled_cfg,
        )
        assert bound.ball_integral == 0.0
        assert bound.holds

    def test_negative_coupling(self, small_grid: GridSpec):
        lam = PotentialSpec(PotentialFamily.PERIODIC_TRIG, PotentialRole.LAMBDA, 0.0, 0.2)
        cfg = quartic_config(small_grid).replace(lam=lam)
        bump = centered_bump(small_grid)
        with pytest.raises(NegativeCouplingError):
            trial_state_bound(
                _scalar_report(small_grid, Side.A, 1.0, bump.u),
                _scalar_report(small_grid, Side.B, 1.0, bump.v),
                cfg,
            )


class TestLambdaLevel:
    def test_constant_level(self):
        spec = PotentialSpec(PotentialFamily.PERIODIC_TRIG, PotentialRole.LAMBDA, 0.3, 0.1)
        leveled = lambda_at_level(spec, 0.7)
        assert leveled.family == PotentialFamily.CONSTANT
        assert leveled.base_level == 0.7

    def test_ball_floor(self):
        spec = PotentialSpec(
            PotentialFamily.CONSTANT, PotentialRole.LAMBDA, 0.0, ball_radius=2.0, ball_floor=0.1
        )
        leveled = lambda_at_level(spec, 0.7)
        assert leveled.ball_floor == 0.7
        assert leveled.ball_radius == 2.0
        assert leveled.base_level == 0.0

    def test_infeasible_level(self, quartic_cfg: ProblemConfig, fast_opts: SolverOptions):
        scalars = (
            _scalar_report(quartic_cfg.grid, Side.A, 1.0),
            _scalar_report(quartic_cfg.grid, Side.B, 1.0),
        )
        point = evaluate_lambda_level(quartic_cfg, 1.5, fast_opts, scalars)
        assert not point.feasible
        assert point.to_dict() == {'lambda0': 1.5, 'feasible': False, 'comparison': None}


class TestLocateThreshold:
    @staticmethod
    def _fake_levels(threshold: float):
        def evaluate(cfg, level, opts, scalars, slack, mass_fraction):
            if level > 0.9:
                return LambdaPoint(level=level, feasible=False)
            verdict = FULLY_NONTRIVIAL if level > threshold else SEMITRIVIAL_RISK
            semitrivial = SemitrivialVerdict(verdict, 1.0, 1.0, 1.0, 0.0, 0.5, 0.5)
            return LambdaPoint(level=level, feasible=True, verdict=semitrivial)

        return evaluate

    def test_bisects_verdict_change(
        self, monkeypatch, quartic_cfg: ProblemConfig, fast_opts: SolverOptions
    ):
        monkeypatch.setattr(compare, 'evaluate_lambda_level', self._fake_levels(0.37))
        scalars = (
            _scalar_report(quartic_cfg.grid, Side.A, 1.0),
            _scalar_report(quartic_cfg.grid, Side.B, 1.0),
        )
        report = locate_lambda_threshold(quartic_cfg, fast_opts, 0.8, 10, scalars=scalars)

        low, high = report.bracket
        assert low <= 0.37 < high
        assert high - low == pytest.approx(0.8 / 2**10)
        assert report.threshold == high
        levels = [point.level for point in report.evaluations]
        assert levels == sorted(levels)
        assert len(levels) == 12

    def test_no_bracket(self, monkeypatch, quartic_cfg: ProblemConfig, fast_opts: SolverOptions):
        monkeypatch.setattr(compare, 'evaluate_lambda_level', self._fake_levels(0.85))
        scalars = (
            _scalar_report(quartic_cfg.grid, Side.A, 1.0),
            _scalar_report(quartic_cfg.grid, Side.B, 1.0),
        )
        with pytest.raises(ComparisonError, match='do not bracket'):
            locate_lambda_threshold(quartic_cfg, fast_opts, 0.8, 4, scalars=scalars)

    def test_infeasible_end(
        self, monkeypatch, quartic_cfg: ProblemConfig, fast_opts: SolverOptions
    ):
        monkeypatch.setattr(compare, 'evaluate_lambda_level', self._fake_levels(0.37))
        scalars = (
            _scalar_report(quartic_cfg.grid, Side.A, 1.0),
            _scalar_report(quartic_cfg.grid, Side.B, 1.0),
        )
        with pytest.raises(ComparisonError, match='violates the coupling budget'):
            locate_lambda_threshold(quartic_cfg, fast_opts, 1.0, 4, scalars=scalars)


class TestAsymptoticComparison:
    @pytest.fixture
    def asymptotic_cfg(self, coupled_cfg: ProblemConfig) -> ProblemConfig:
        a, b, lam = make_asymptotic_pair(
            (coupled_cfg.a, coupled_cfg.b, coupled_cfg.lam), PERTURBATIONS, coupled_cfg.grid
        )
        return coupled_cfg.replace(a=a, b=b, lam=lam)

    @pytest.fixture
    def periodic(self, coupled_cfg: ProblemConfig, fast_opts: SolverOptions) -> SolveReport:
        return minimize_ground_state(centered_bump(coupled_cfg.grid), coupled_cfg, fast_opts)

    def test_pair_accepted(self, coupled_cfg: ProblemConfig, asymptotic_cfg: ProblemConfig):
        check_asymptotic_pair(coupled_cfg, asymptotic_cfg)

    def test_periodic_is_not_asymptotic(self, coupled_cfg: ProblemConfig):
        with pytest.raises(PerturbationSignError):
            check_asymptotic_pair(coupled_cfg, coupled_cfg)

    def test_other_periodic_part(self, coupled_cfg: ProblemConfig, asymptotic_cfg: ProblemConfig):
        other = coupled_cfg.replace(
            lam=PotentialSpec(PotentialFamily.CONSTANT, PotentialRole.LAMBDA, 3.0)
        )
        with pytest.raises(ComparisonError, match='not a perturbation'):
            check_asymptotic_pair(other, asymptotic_cfg)

    def test_strictly_below_periodic(
        self,
        coupled_cfg: ProblemConfig,
        asymptotic_cfg: ProblemConfig,
        fast_opts: SolverOptions,
        periodic: SolveReport,
    ):
        opts = dataclasses.replace(fast_opts, multistart=1)
        comparison = compare_periodic_asymptotic(
            coupled_cfg, asymptotic_cfg, opts, periodic=periodic
        )

        assert comparison.strict
        assert comparison.consistent
        assert comparison.passed
        assert comparison.periodic_level == pytest.approx(periodic.energy_value, rel=1e-9)
        assert comparison.asymptotic_level <= comparison.upper_bound + 1e-6

    def test_gap_shrinks_with_amplitude(
        self, coupled_cfg: ProblemConfig, fast_opts: SolverOptions, periodic: SolveReport
    ):
        trend = asymptotic_gap_trend(
            coupled_cfg, PERTURBATIONS, fast_opts, halvings=3, periodic=periodic
        )
        assert trend.factors == [1.0, 0.5, 0.25, 0.125]
        assert trend.monotone
        assert np.all(np.asarray(trend.gaps) > 0)
