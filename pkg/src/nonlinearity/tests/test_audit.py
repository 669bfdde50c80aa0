import numpy as np
import pytest

from src.nonlinearity.audit import (
    DERIVATIVE_SIGN,
    EVEN_PRIMITIVE_BOUND,
    EXCESS_INCREASING,
    RATIO_INCREASING,
    SMALL_AND_LARGE_GROWTH,
    audit_conditions,
    default_probe_set,
    even_primitive_bound,
    exhibit_ar_failure,
)
from src.nonlinearity.exceptions import SamplePreconditionError
from src.nonlinearity.functions import eval_f, eval_F
from src.nonlinearity.typings import NonlinearityKind, NonlinearitySpec

LOG_POWER = NonlinearitySpec(NonlinearityKind.LOG_POWER, exponent=2.0, dimension=4.0, gamma=1.0)
QUARTIC = NonlinearitySpec(NonlinearityKind.PURE_POWER, exponent=2.0, dimension=3.0, power=4.0)
LINEAR = NonlinearitySpec(NonlinearityKind.PURE_POWER, exponent=2.0, dimension=3.0, power=2.0)


class TestAuditConditions:
    @pytest.mark.parametrize(
        'spec',
        [
            pytest.param(LOG_POWER, id='log-power'),
            pytest.param(QUARTIC, id='quartic'),
            pytest.param(
                NonlinearitySpec(NonlinearityKind.LOG_POWER, exponent=3.0, dimension=4.0),
                id='log-power-q',
            ),
        ],
    )
    def test_built_in_families_pass(self, spec):
        report = audit_conditions(spec, default_probe_set())
        assert report.passed, report.to_dict()

    def test_degenerate_power_fails(self):
        report = audit_conditions(LINEAR, default_probe_set())
        assert not report.passed
        assert not report.verdict(SMALL_AND_LARGE_GROWTH).passed
        assert not report.verdict(RATIO_INCREASING).passed
        assert not report.verdict(DERIVATIVE_SIGN).passed
        assert not report.verdict(EXCESS_INCREASING).passed

    def test_sup_derivative_ratio_reported(self):
        report = audit_conditions(QUARTIC, default_probe_set())
        assert report.sup_derivative_ratio == pytest.approx(3.0)

    @pytest.mark.parametrize(
        'samples',
        [
            pytest.param([1.0, 0.5, 2, 3, 4, 5, 6, 7000], id='unsorted'),
            pytest.param([0.0, 0.5, 1, 3, 4, 5, 6, 7000], id='nonpositive'),
            pytest.param([1.0, 2, 3], id='too-few'),
            pytest.param(list(np.linspace(1, 10, 20)), id='too-narrow'),
        ],
    )
    def test_precondition(self, samples):
        with pytest.raises(SamplePreconditionError):
            audit_conditions(LOG_POWER, samples)


class TestExcessProperty:
    def test_excess_increasing_and_nonnegative(self):
        t = np.geomspace(1e-2, 1e2, 200)
        excess = np.asarray([eval_f(LOG_POWER, x) * x - 2 * eval_F(LOG_POWER, x) for x in t])
        assert np.all(excess >= 0)
        assert np.all(np.diff(excess) > 0)


class TestEvenPrimitiveBound:
    def test_odd_families_balance(self):
        report = audit_conditions(LOG_POWER, default_probe_set())
        assert report.verdict(EVEN_PRIMITIVE_BOUND).passed

    def test_heavier_negative_side_fails(self):
        # f(t) = 1 - exp(-t): F(t) - F(-t) = 2t - 2 sinh(t) < 0
        t = np.geomspace(1e-1, 1e1, 20)
        F = t + np.exp(-t) - 1
        F_negative = -t + np.exp(t) - 1
        verdict = even_primitive_bound(F, F_negative)
        assert not verdict.passed
        assert verdict.margin == pytest.approx(20 - 2 * np.sinh(10.0))

    def test_lighter_negative_side_passes(self):
        # f(t) = exp(t) - 1: F(t) - F(-t) = 2 sinh(t) - 2t > 0
        t = np.geomspace(1e-1, 1e1, 20)
        verdict = even_primitive_bound(np.exp(t) - 1 - t, np.exp(-t) - 1 + t)
        assert verdict.passed
        assert verdict.margin > 0


class TestArFailure:
    def test_log_power_violates_superlinearity(self):
        witnesses = exhibit_ar_failure(LOG_POWER, [2.1, 3.0, 5.0])
        for theta, t in witnesses.items():
            assert t is not None
            assert theta * eval_F(LOG_POWER, t) > eval_f(LOG_POWER, t) * t
        # the log factor only beats theta = 2.1 far out
        assert witnesses[2.1] > 1e4

    def test_pure_power_satisfies_superlinearity(self):
        witnesses = exhibit_ar_failure(QUARTIC, [3.0, 3.9])
        assert witnesses == {3.0: None, 3.9: None}

    def test_theta_must_exceed_exponent(self):
        with pytest.raises(SamplePreconditionError):
            exhibit_ar_failure(LOG_POWER, [2.0])
