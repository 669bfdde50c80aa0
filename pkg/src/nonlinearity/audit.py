import logging
import math
from typing import Sequence

import numpy as np
from scipy import integrate

from src.nonlinearity.exceptions import TOO_FEW_SAMPLES, UNSORTED_SAMPLES, SamplePreconditionError
from src.nonlinearity.functions import (
    QUAD_EPSABS,
    QUAD_EPSREL,
    QUAD_LIMIT,
    eval_f,
    eval_F,
    eval_fprime,
)
from src.nonlinearity.typings import ConditionReport, ConditionVerdict, NonlinearitySpec

logger = logging.getLogger(__name__)

MIN_SAMPLES = 8
MIN_DECADES = 3
SMALL_RATIO_FACTOR = 1e-2
EVEN_PRIMITIVE_SLACK = 1e-10

SMALL_AND_LARGE_GROWTH = 'small_and_large_growth'
SUBCRITICAL_GROWTH = 'subcritical_growth'
RATIO_INCREASING = 'ratio_increasing'
DERIVATIVE_SIGN = 'derivative_sign'
EXCESS_INCREASING = 'excess_increasing'
EVEN_PRIMITIVE_BOUND = 'even_primitive_bound'


def default_probe_set(count: int = 61, low: float = 1e-3, high: float = 1e3) -> np.ndarray:
    return np.geomspace(low, high, count)


def audit_conditions(spec: NonlinearitySpec, t_samples: Sequence[float]) -> ConditionReport:
    t = np.asarray(t_samples, dtype=float)
    _check_samples(t)
    e = spec.exponent

    f = eval_f(spec, t)
    fp = eval_fprime(spec, t)
    F = np.asarray([eval_F(spec, float(x)) for x in t])
    F_negative = np.asarray([_primitive_from_left(spec, float(x)) for x in t])
    ratio = f / t ** (e - 1)

    verdicts = [
        _small_and_large_growth(ratio),
        _subcritical_growth(spec, t, f),
        _strictly_increasing(RATIO_INCREASING, ratio, 'f(t)/t^(e-1)'),
        _positive(DERIVATIVE_SIGN, fp * t**2 - (e - 1) * f * t),
        _excess_increasing(f * t - e * F),
        even_primitive_bound(F, F_negative),
    ]
    positive = f > 0
    sup_ratio = math.inf
    if positive.any():
        sup_ratio = float(np.max(fp[positive] * t[positive] / f[positive]))

    report = ConditionReport(
        kind=spec.kind,
        exponent=e,
        samples=len(t),
        verdicts=verdicts,
        sup_derivative_ratio=sup_ratio,
    )
    logger.debug(
        "audit %s exponent=%s passed=%s sup f't/f=%.6g",
        spec.kind.value,
        e,
        report.passed,
        sup_ratio,
    )
    return report


def exhibit_ar_failure(
    spec: NonlinearitySpec,
    thetas: Sequence[float],
    t_low: float = 1.0,
    t_high: float = 1e12,
    count: int = 481,
) -> dict[float, float | None]:
    """
    For each theta > exponent returns the first scanned t with theta*F(t) > f(t)*t,
    or None when the superlinearity inequality holds on the whole scan.
    """
    for theta in thetas:
        if not theta > spec.exponent:
            raise SamplePreconditionError(
                f'theta must exceed the paired exponent {spec.exponent}, got {theta}'
            )
    t = np.geomspace(t_low, t_high, count)
    f = eval_f(spec, t)
    F = np.empty_like(t)
    F[0] = eval_F(spec, float(t[0]))
    for index in range(1, count):
        increment, _ = integrate.quad(
            lambda tau: eval_f(spec, float(tau)),
            t[index - 1],
            t[index],
            epsabs=QUAD_EPSABS,
            epsrel=QUAD_EPSREL,
            limit=QUAD_LIMIT,
        )
        F[index] = F[index - 1] + increment

    witnesses: dict[float, float | None] = {}
    for theta in thetas:
        violated = np.flatnonzero(theta * F > f * t)
        witnesses[theta] = float(t[violated[0]]) if violated.size else None
    return witnesses


def _check_samples(t: np.ndarray) -> None:
    if t.ndim != 1 or np.any(t <= 0) or np.any(np.diff(t) <= 0):
        raise SamplePreconditionError(UNSORTED_SAMPLES)
    if len(t) < MIN_SAMPLES or t[-1] / t[0] < 10**MIN_DECADES:
        raise SamplePreconditionError(
            TOO_FEW_SAMPLES.format(count=MIN_SAMPLES, decades=MIN_DECADES)
        )


def _small_and_large_growth(ratio: np.ndarray) -> ConditionVerdict:
    # f(t)/t^(e-1) must vanish at small t and keep growing at the large end
    passed = bool(
        ratio[0] <= SMALL_RATIO_FACTOR * ratio[-1]
        and np.argmax(ratio) == len(ratio) - 1
        and np.argmin(ratio) == 0
    )
    if ratio[0] > 0 and ratio[-1] > 0:
        margin = math.log10(ratio[-1] / ratio[0]) + math.log10(SMALL_RATIO_FACTOR)
    else:
        margin = -math.inf
    return ConditionVerdict(SMALL_AND_LARGE_GROWTH, passed, margin)


def _subcritical_growth(spec: NonlinearitySpec, t: np.ndarray, f: np.ndarray) -> ConditionVerdict:
    if f[-1] > 0 and f[-2] > 0:
        growth = 1 + math.log(f[-1] / f[-2]) / math.log(t[-1] / t[-2])
    else:
        growth = math.inf
    critical = spec.critical_exponent
    passed = spec.is_subcritical and growth < critical
    return ConditionVerdict(
        SUBCRITICAL_GROWTH,
        passed,
        critical - growth,
        detail=f'sampled growth exponent {growth:.6g}, critical {critical:.6g}',
    )


def _strictly_increasing(name: str, values: np.ndarray, label: str) -> ConditionVerdict:
    steps = np.diff(values)
    margin = float(np.min(steps))
    return ConditionVerdict(name, margin > 0, margin, detail=f'{label} increments')


def _positive(name: str, values: np.ndarray) -> ConditionVerdict:
    margin = float(np.min(values))
    return ConditionVerdict(name, margin > 0, margin)


def _excess_increasing(excess: np.ndarray) -> ConditionVerdict:
    margin = float(min(np.min(np.diff(excess)), np.min(excess)))
    passed = bool(np.all(np.diff(excess) > 0) and np.all(excess >= 0))
    return ConditionVerdict(EXCESS_INCREASING, passed, margin, detail='f(t)t - eF(t)')


def even_primitive_bound(F: np.ndarray, F_negative: np.ndarray) -> ConditionVerdict:
    """F(-t) <= F(t) at every sample, up to quadrature round-off."""
    gap = F - F_negative
    passed = bool(np.all(gap >= -(EVEN_PRIMITIVE_SLACK * np.abs(F) + 2 * QUAD_EPSABS)))
    return ConditionVerdict(EVEN_PRIMITIVE_BOUND, passed, float(np.min(gap)))


def _primitive_from_left(spec: NonlinearitySpec, s: float) -> float:
    # F(-s) = -int_{-s}^0 f
    value, _ = integrate.quad(
        lambda tau: eval_f(spec, tau),
        -s,
        0.0,
        epsabs=QUAD_EPSABS,
        epsrel=QUAD_EPSREL,
        limit=QUAD_LIMIT,
    )
    return -value
