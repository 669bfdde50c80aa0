import math

import numpy as np
import pytest

from src.grid.typings import GridSpec
from src.potential.exceptions import PerturbationSignError, PotentialSignError
from src.potential.fields import (
    eval_potential,
    make_asymptotic_pair,
    perturbation_tail,
    sample_potential,
)
from src.potential.typings import (
    DecayProfile,
    Perturbation,
    PotentialFamily,
    PotentialRole,
    PotentialSpec,
)


def _periodic(role: PotentialRole, level: float, amplitude: float = 0.0) -> PotentialSpec:
    family = PotentialFamily.PERIODIC_TRIG if amplitude else PotentialFamily.CONSTANT
    return PotentialSpec(family, role, level, modulation_amplitude=amplitude)


class TestEvalPotential:
    def test_constant(self):
        spec = _periodic(PotentialRole.A, 1.0)
        assert eval_potential(spec, [0.3]) == 1.0
        assert eval_potential(spec, [0.3, -7.2]) == 1.0

    def test_periodic_trig(self):
        spec = _periodic(PotentialRole.A, 1.0, amplitude=0.5)
        assert eval_potential(spec, [0.0]) == pytest.approx(1.5)
        assert eval_potential(spec, [0.5]) == pytest.approx(0.5)
        assert eval_potential(spec, [0.25, 0.0]) == pytest.approx(1.25)

    def test_periodic_in_every_direction(self):
        spec = _periodic(PotentialRole.B, 2.0, amplitude=0.3)
        x = np.array([0.37, -1.21])
        for shift in (np.array([1.0, 0.0]), np.array([0.0, -3.0])):
            assert eval_potential(spec, x + shift) == pytest.approx(eval_potential(spec, x))

    def test_stacked_points(self):
        spec = _periodic(PotentialRole.A, 1.0, amplitude=0.5)
        coords = np.array([[0.0, 0.5, 1.0]])
        np.testing.assert_allclose(eval_potential(spec, coords), [1.5, 0.5, 1.5])

    def test_ball_floor(self):
        spec = PotentialSpec(
            PotentialFamily.CONSTANT, PotentialRole.LAMBDA, 0.0, ball_radius=1.0, ball_floor=0.4
        )
        assert eval_potential(spec, [0.5]) == 0.4
        assert eval_potential(spec, [1.0]) == 0.4
        assert eval_potential(spec, [1.5]) == 0.0

    def test_floor_keeps_larger_values(self):
        spec = PotentialSpec(
            PotentialFamily.CONSTANT, PotentialRole.LAMBDA, 0.7, ball_radius=1.0, ball_floor=0.4
        )
        assert eval_potential(spec, [0.0]) == 0.7

    @pytest.mark.parametrize(
        'profile, expected',
        [
            pytest.param(DecayProfile.EXP, 1.0 - 0.2 * math.exp(-2.0), id='exp'),
            pytest.param(DecayProfile.GAUSS, 1.0 - 0.2 * math.exp(-4.0), id='gauss'),
        ],
    )
    def test_perturbation(self, profile, expected):
        spec = PotentialSpec(
            PotentialFamily.ASYMPTOTICALLY_PERIODIC,
            PotentialRole.A,
            1.0,
            perturbation=Perturbation(-0.2, 1.0, profile),
        )
        assert eval_potential(spec, [2.0]) == pytest.approx(expected)

    def test_non_finite(self):
        with pytest.raises(ValueError, match='finite'):
            eval_potential(_periodic(PotentialRole.A, 1.0), [math.nan])


class TestPotentialSpec:
    @pytest.mark.parametrize(
        'kwargs, match',
        [
            pytest.param(
                {'family': PotentialFamily.CONSTANT, 'role': PotentialRole.A, 'base_level': -1.0},
                'base level',
                id='negative-a',
            ),
            pytest.param(
                {
                    'family': PotentialFamily.CONSTANT,
                    'role': PotentialRole.A,
                    'base_level': 1.0,
                    'modulation_amplitude': 0.1,
                },
                'modulation',
                id='modulated-constant',
            ),
            pytest.param(
                {
                    'family': PotentialFamily.ASYMPTOTICALLY_PERIODIC,
                    'role': PotentialRole.B,
                    'base_level': 1.0,
                },
                'needs a perturbation',
                id='missing-perturbation',
            ),
            pytest.param(
                {
                    'family': PotentialFamily.CONSTANT,
                    'role': PotentialRole.LAMBDA,
                    'base_level': 0.1,
                    'ball_floor': 0.3,
                },
                'ball radius',
                id='floor-without-ball',
            ),
            pytest.param(
                {
                    'family': PotentialFamily.CONSTANT,
                    'role': PotentialRole.A,
                    'base_level': 1.0,
                    'ball_radius': 1.0,
                    'ball_floor': 0.3,
                },
                'only the coupling',
                id='floor-on-a',
            ),
        ],
    )
    def test_invalid(self, kwargs, match):
        with pytest.raises(PotentialSignError, match=match):
            PotentialSpec(**kwargs)

    def test_lambda_may_change_sign(self, small_grid: GridSpec):
        spec = _periodic(PotentialRole.LAMBDA, -0.1, amplitude=0.3)
        values = sample_potential(spec, small_grid)
        assert values.min() < 0 < values.max()

    def test_negative_a_values(self, small_grid: GridSpec):
        spec = _periodic(PotentialRole.A, 0.1, amplitude=0.3)
        with pytest.raises(PotentialSignError, match='a potential must be nonnegative'):
            sample_potential(spec, small_grid)

    def test_scaled(self):
        spec = PotentialSpec(
            PotentialFamily.ASYMPTOTICALLY_PERIODIC,
            PotentialRole.LAMBDA,
            0.2,
            modulation_amplitude=0.1,
            perturbation=Perturbation(0.1),
            ball_radius=1.0,
            ball_floor=0.4,
        )
        scaled = spec.scaled(0.5)
        assert scaled.base_level == pytest.approx(0.1)
        assert scaled.modulation_amplitude == pytest.approx(0.05)
        assert scaled.perturbation.amplitude == pytest.approx(0.05)
        assert scaled.ball_floor == pytest.approx(0.2)
        assert scaled.ball_radius == 1.0


class TestAsymptoticPair:
    def test_strict_ordering(self, small_grid: GridSpec):
        periodic = (
            _periodic(PotentialRole.A, 1.0, 0.3),
            _periodic(PotentialRole.B, 1.0, 0.3),
            _periodic(PotentialRole.LAMBDA, 0.2, 0.1),
        )
        perturbations = (Perturbation(-0.2), Perturbation(-0.2), Perturbation(0.1))
        a, b, lam = make_asymptotic_pair(periodic, perturbations, small_grid)

        assert a.family == PotentialFamily.ASYMPTOTICALLY_PERIODIC
        assert np.all(sample_potential(a, small_grid) < sample_potential(periodic[0], small_grid))
        assert np.all(sample_potential(b, small_grid) < sample_potential(periodic[1], small_grid))
        assert np.all(
            sample_potential(lam, small_grid) > sample_potential(periodic[2], small_grid)
        )
        assert a.periodic_part == periodic[0]

    @pytest.mark.parametrize(
        'perturbations, role',
        [
            pytest.param(
                (Perturbation(0.2), Perturbation(-0.2), Perturbation(0.1)), 'a', id='a-positive'
            ),
            pytest.param(
                (Perturbation(-0.2), Perturbation(-0.2), Perturbation(-0.1)),
                'lambda',
                id='lambda-negative',
            ),
            pytest.param(
                (Perturbation(-0.2), Perturbation(0.0), Perturbation(0.1)), 'b', id='b-zero'
            ),
        ],
    )
    def test_wrong_sign(self, small_grid: GridSpec, perturbations, role):
        periodic = (
            _periodic(PotentialRole.A, 1.0),
            _periodic(PotentialRole.B, 1.0),
            _periodic(PotentialRole.LAMBDA, 0.2),
        )
        with pytest.raises(PerturbationSignError, match=f'^{role} perturbation'):
            make_asymptotic_pair(periodic, perturbations, small_grid)

    def test_a_must_stay_nonnegative(self, small_grid: GridSpec):
        periodic = (
            _periodic(PotentialRole.A, 0.1),
            _periodic(PotentialRole.B, 1.0),
            _periodic(PotentialRole.LAMBDA, 0.2),
        )
        perturbations = (Perturbation(-0.5), Perturbation(-0.2), Perturbation(0.1))
        with pytest.raises(PotentialSignError):
            make_asymptotic_pair(periodic, perturbations, small_grid)

    def test_nested_annuli_decay(self, small_grid: GridSpec):
        spec = PotentialSpec(
            PotentialFamily.ASYMPTOTICALLY_PERIODIC,
            PotentialRole.A,
            1.0,
            perturbation=Perturbation(-0.2, rate=1.0),
        )
        tails = perturbation_tail(spec, small_grid, [1.0, 2.0, 4.0, 8.0])
        assert all(later < earlier for earlier, later in zip(tails, tails[1:]))
        assert tails[-1] < 1e-3

    def test_no_perturbation_has_no_tail(self, small_grid: GridSpec):
        assert perturbation_tail(_periodic(PotentialRole.A, 1.0), small_grid, [1.0, 2.0]) == [
            0.0,
            0.0,
        ]
