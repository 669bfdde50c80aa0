import numpy as np
import pytest

from src.grid.exceptions import ExponentRangeError, FieldInvariantError, GridError
from src.grid.operators import (
    gradient_field,
    integrate,
    p_dirichlet_energy,
    p_laplacian,
    weighted_norm_p,
)
from src.grid.typings import GridField, GridSpec

UNIT_INTERVAL = GridSpec(dimension=1, half_width=0.5, nodes_per_axis=512, center=0.5)


def _sine(grid: GridSpec) -> GridField:
    return GridField.from_function(grid, np.sin(np.pi * grid.axis))


class TestGridSpec:
    def test_spacing(self):
        grid = GridSpec(dimension=1, half_width=16.0, nodes_per_axis=512)
        assert grid.spacing == pytest.approx(32 / 511)
        assert grid.axis[0] == -16.0
        assert grid.axis[-1] == 16.0

    @pytest.mark.parametrize(
        'kwargs',
        [
            pytest.param({'dimension': 4, 'half_width': 1.0, 'nodes_per_axis': 32}, id='dim'),
            pytest.param({'dimension': 1, 'half_width': 0.0, 'nodes_per_axis': 32}, id='width'),
            pytest.param({'dimension': 1, 'half_width': 1.0, 'nodes_per_axis': 8}, id='nodes'),
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(GridError):
            GridSpec(**kwargs)

    def test_weights_sum_to_volume(self):
        grid = GridSpec(dimension=2, half_width=1.5, nodes_per_axis=21)
        assert np.sum(grid.weights) == pytest.approx(9.0, rel=1e-12)


class TestGridField:
    def test_boundary_must_vanish(self):
        grid = GridSpec(dimension=1, half_width=1.0, nodes_per_axis=16)
        with pytest.raises(FieldInvariantError, match='boundary'):
            GridField(np.ones(grid.shape), grid)

    def test_non_finite(self):
        grid = GridSpec(dimension=1, half_width=1.0, nodes_per_axis=16)
        values = np.zeros(grid.shape)
        values[3] = np.nan
        with pytest.raises(FieldInvariantError, match='non-finite'):
            GridField(values, grid)


class TestGradientField:
    def test_zero(self):
        grid = GridSpec(dimension=2, half_width=1.0, nodes_per_axis=16)
        grad = gradient_field(GridField.zeros(grid))
        assert grad.shape == (2, 15, 15)
        assert not np.any(grad)

    def test_ramp(self):
        grid = GridSpec(dimension=1, half_width=1.0, nodes_per_axis=33)
        u = GridField.from_function(grid, grid.axis)
        grad = gradient_field(u)[0]
        np.testing.assert_allclose(grad[1:-1], 1.0, rtol=1e-12)

    def test_sine(self):
        grid = GridSpec(dimension=1, half_width=1.0, nodes_per_axis=256)
        u = _sine(grid)
        grad = gradient_field(u)[0]
        exact = np.pi * np.cos(np.pi * grid.axis[:-1])
        assert np.max(np.abs(grad - exact)) <= 0.05

    def test_linearity(self):
        grid = GridSpec(dimension=2, half_width=1.0, nodes_per_axis=17)
        rng = np.random.default_rng(1)
        u = GridField.from_function(grid, rng.standard_normal(grid.shape))
        v = GridField.from_function(grid, rng.standard_normal(grid.shape))
        w = GridField(2.5 * u.values - v.values, grid)
        np.testing.assert_allclose(
            gradient_field(w),
            2.5 * gradient_field(u) - gradient_field(v),
            rtol=1e-12,
            atol=1e-12,
        )


class TestDirichletEnergy:
    def test_zero(self):
        grid = GridSpec(dimension=1, half_width=1.0, nodes_per_axis=16)
        assert p_dirichlet_energy(GridField.zeros(grid), 3.0) == 0.0

    def test_tent(self):
        grid = GridSpec(dimension=1, half_width=0.5, nodes_per_axis=17, center=0.5)
        u = GridField.from_function(grid, np.minimum(grid.axis, 1 - grid.axis))
        assert p_dirichlet_energy(u, 3.0) == pytest.approx(1.0, rel=1e-12)

    def test_sine(self):
        assert p_dirichlet_energy(_sine(UNIT_INTERVAL), 2.0) == pytest.approx(
            np.pi**2 / 2, abs=1e-3
        )

    def test_homogeneity(self):
        grid = GridSpec(dimension=2, half_width=1.0, nodes_per_axis=17)
        rng = np.random.default_rng(2)
        u = GridField.from_function(grid, rng.standard_normal(grid.shape))
        scaled = GridField(-1.7 * u.values, grid)
        assert p_dirichlet_energy(scaled, 2.5) == pytest.approx(
            1.7**2.5 * p_dirichlet_energy(u, 2.5), rel=1e-12
        )

    def test_invalid_exponent(self):
        grid = GridSpec(dimension=1, half_width=1.0, nodes_per_axis=16)
        with pytest.raises(ExponentRangeError):
            p_dirichlet_energy(GridField.zeros(grid), 1.0)

    def test_refinement(self):
        errors = []
        for n in (64, 128, 256):
            grid = GridSpec(dimension=1, half_width=0.5, nodes_per_axis=n, center=0.5)
            errors.append(abs(p_dirichlet_energy(_sine(grid), 2.0) - np.pi**2 / 2))
        assert errors[0] > errors[1] > errors[2]


class TestWeightedNorm:
    def test_sine(self):
        u = _sine(UNIT_INTERVAL)
        a = np.ones(UNIT_INTERVAL.shape)
        assert weighted_norm_p(u, a, 2.0) == pytest.approx((np.pi**2 + 1) / 2, abs=1e-3)

    def test_zero_potential(self):
        u = _sine(UNIT_INTERVAL)
        a = np.zeros(UNIT_INTERVAL.shape)
        assert weighted_norm_p(u, a, 2.0) == p_dirichlet_energy(u, 2.0)

    def test_dominates_dirichlet(self):
        u = _sine(UNIT_INTERVAL)
        a = 0.5 + 0.5 * np.cos(2 * np.pi * UNIT_INTERVAL.axis)
        assert weighted_norm_p(u, a, 3.0) >= p_dirichlet_energy(u, 3.0)

    def test_negative_potential(self):
        u = _sine(UNIT_INTERVAL)
        a = -np.ones(UNIT_INTERVAL.shape)
        with pytest.raises(FieldInvariantError, match='negative'):
            weighted_norm_p(u, a, 2.0)


class TestIntegrate:
    def test_constant(self):
        grid = GridSpec(dimension=1, half_width=1.0, nodes_per_axis=512)
        assert integrate(np.ones(grid.shape), grid) == pytest.approx(2.0, abs=1e-12)

    def test_square(self):
        grid = GridSpec(dimension=1, half_width=1.0, nodes_per_axis=512)
        assert integrate(grid.axis**2, grid) == pytest.approx(2 / 3, abs=1e-4)

    def test_zero(self):
        grid = GridSpec(dimension=3, half_width=1.0, nodes_per_axis=16)
        assert integrate(np.zeros(grid.shape), grid) == 0.0

    def test_monotone(self):
        grid = GridSpec(dimension=2, half_width=1.0, nodes_per_axis=16)
        rng = np.random.default_rng(3)
        assert integrate(rng.random(grid.shape), grid) >= 0


class TestPLaplacian:
    @pytest.mark.parametrize('p', [pytest.param(1.5, id='p<2'), 2.0, 3.0])
    @pytest.mark.parametrize('dimension', [1, 2])
    def test_directional_derivative(self, p, dimension):
        grid = GridSpec(dimension=dimension, half_width=1.0, nodes_per_axis=17)
        rng = np.random.default_rng(4)
        u = GridField.from_function(grid, rng.standard_normal(grid.shape))
        phi = GridField.from_function(grid, rng.standard_normal(grid.shape))
        residual = p_laplacian(u.values, grid, p)
        pairing = np.sum(grid.cell_volume * residual * phi.values)

        step = 1e-6
        plus = GridField(u.values + step * phi.values, grid)
        minus = GridField(u.values - step * phi.values, grid)
        fd = (p_dirichlet_energy(plus, p) - p_dirichlet_energy(minus, p)) / (2 * step * p)
        assert pairing == pytest.approx(fd, rel=1e-5)

    def test_stencil(self):
        grid = GridSpec(dimension=1, half_width=1.0, nodes_per_axis=16)
        rng = np.random.default_rng(5)
        u = GridField.from_function(grid, rng.standard_normal(grid.shape)).values
        residual = p_laplacian(u, grid, 2.0)
        h = grid.spacing
        expected = (-u[2:] + 2 * u[1:-1] - u[:-2]) / h**2
        np.testing.assert_allclose(residual[1:-1], expected, rtol=1e-10, atol=1e-10)
        assert residual[0] == residual[-1] == 0.0
