import logging
import math
from functools import lru_cache
from typing import overload

import numpy as np
from scipy import integrate
from scipy.interpolate import CubicHermiteSpline, PchipInterpolator
from scipy.special import roots_legendre

from src.config.settings import settings
from src.nonlinearity.exceptions import NonlinearityDomainError, SingularDerivativeError
from src.nonlinearity.typings import NonlinearityKind, NonlinearitySpec

logger = logging.getLogger(__name__)

QUAD_EPSABS = 1e-12
QUAD_EPSREL = 1e-12
QUAD_LIMIT = 500

_TABLE_NODES = 8
_SMALL_ARGUMENT_NODES = 16


@overload
def eval_f(spec: NonlinearitySpec, t: float) -> float:
    ...


@overload
def eval_f(spec: NonlinearitySpec, t: np.ndarray) -> np.ndarray:
    ...


def eval_f(spec: NonlinearitySpec, t: float | np.ndarray) -> float | np.ndarray:
    arr, is_scalar = _as_array(t)
    out = np.sign(arr) * _f_positive(spec, np.abs(arr))
    return float(out) if is_scalar else out


@overload
def eval_F(spec: NonlinearitySpec, t: float) -> float:
    ...


@overload
def eval_F(spec: NonlinearitySpec, t: np.ndarray) -> np.ndarray:
    ...


def eval_F(spec: NonlinearitySpec, t: float | np.ndarray) -> float | np.ndarray:
    """
    Primitive F(t) = int_0^t f. Scalars of the log-power family go through adaptive
    quadrature; arrays are served from a cached Hermite table of the same primitive.
    """
    arr, is_scalar = _as_array(t)
    if is_scalar:
        return _primitive_scalar(spec, abs(float(arr)))
    return _primitive_array(spec, np.abs(arr))


@overload
def eval_fprime(spec: NonlinearitySpec, t: float) -> float:
    ...


@overload
def eval_fprime(spec: NonlinearitySpec, t: np.ndarray) -> np.ndarray:
    ...


def eval_fprime(spec: NonlinearitySpec, t: float | np.ndarray) -> float | np.ndarray:
    arr, is_scalar = _as_array(t)
    if _is_singular_at_zero(spec) and np.any(arr == 0):
        raise SingularDerivativeError(spec.exponent)
    s = np.abs(arr)
    if spec.kind == NonlinearityKind.LOG_POWER:
        e, gamma = spec.exponent, spec.gamma
        log = np.log1p(s)
        out = (e - 1) * s ** (e - 2) * log**gamma + gamma * s ** (e - 1) * log ** (
            gamma - 1
        ) / (1 + s)
    elif spec.kind == NonlinearityKind.PURE_POWER:
        out = (spec.power - 1) * s ** (spec.power - 2)
    else:
        out = _tabulated(spec.table).derivative(s)
    return float(out) if is_scalar else out


def _is_singular_at_zero(spec: NonlinearitySpec) -> bool:
    if spec.exponent < 2:
        return True
    return spec.kind == NonlinearityKind.PURE_POWER and spec.power < 2


def _as_array(t: float | np.ndarray) -> tuple[np.ndarray, bool]:
    arr = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise NonlinearityDomainError()
    return arr, arr.ndim == 0


def _f_positive(spec: NonlinearitySpec, s: np.ndarray) -> np.ndarray:
    if spec.kind == NonlinearityKind.LOG_POWER:
        return s ** (spec.exponent - 1) * np.log1p(s) ** spec.gamma
    if spec.kind == NonlinearityKind.PURE_POWER:
        return s ** (spec.power - 1)
    return _tabulated(spec.table).value(s)


@lru_cache(maxsize=65536)
def _primitive_scalar(spec: NonlinearitySpec, s: float) -> float:
    if s == 0:
        return 0.0
    if spec.kind == NonlinearityKind.PURE_POWER:
        return s**spec.power / spec.power
    if spec.kind == NonlinearityKind.TABULATED:
        return float(_tabulated(spec.table).primitive(np.asarray(s)))
    value, _ = integrate.quad(
        lambda tau: float(_f_positive(spec, np.asarray(tau))),
        0.0,
        s,
        epsabs=QUAD_EPSABS,
        epsrel=QUAD_EPSREL,
        limit=QUAD_LIMIT,
    )
    return value


def _primitive_array(spec: NonlinearitySpec, s: np.ndarray) -> np.ndarray:
    if spec.kind == NonlinearityKind.PURE_POWER:
        return s**spec.power / spec.power
    if spec.kind == NonlinearityKind.TABULATED:
        return _tabulated(spec.table).primitive(s)
    table = _log_power_table(
        spec.exponent,
        spec.gamma,
        settings.primitive_table_min,
        settings.primitive_table_max,
        settings.primitive_table_ratio,
    )
    return table.primitive(s)


class _LogPowerPrimitive:
    """
    Hermite interpolant of F on geometric knots. Knot values are accumulated from
    Gauss-Legendre increments; the interpolant's slopes are the exact f(knot).
    """

    def __init__(
        self, exponent: float, gamma: float, t_min: float, t_max: float, ratio: float
    ) -> None:
        self.exponent = exponent
        self.gamma = gamma
        self.t_min = t_min
        self.t_max = t_max

        count = int(math.ceil(math.log(t_max / t_min) / math.log(ratio))) + 1
        knots = np.geomspace(t_min, t_max, count)
        nodes, weights = roots_legendre(_TABLE_NODES)
        mid = (knots[1:] + knots[:-1]) / 2
        half = (knots[1:] - knots[:-1]) / 2
        increments = half * (self._f(mid[:, None] + half[:, None] * nodes[None, :]) @ weights)
        start = self._small(np.asarray([t_min]))[0]
        values = start + np.concatenate([[0.0], np.cumsum(increments)])

        self.spline = CubicHermiteSpline(knots, values, self._f(knots))
        self.F_max = float(values[-1])
        logger.debug('built primitive table exponent=%s gamma=%s knots=%d', exponent, gamma, count)

    def _f(self, s: np.ndarray) -> np.ndarray:
        return s ** (self.exponent - 1) * np.log1p(s) ** self.gamma

    def _small(self, s: np.ndarray) -> np.ndarray:
        nodes, weights = roots_legendre(_SMALL_ARGUMENT_NODES)
        half = s / 2
        return half * (self._f(half[:, None] * (nodes[None, :] + 1)) @ weights)

    def primitive(self, s: np.ndarray) -> np.ndarray:
        flat = s.reshape(-1)
        out = np.empty_like(flat)
        low = flat < self.t_min
        high = flat > self.t_max
        mid = ~(low | high)
        if np.any(low):
            out[low] = self._small(flat[low])
        if np.any(mid):
            out[mid] = self.spline(flat[mid])
        for index in np.flatnonzero(high):
            tail, _ = integrate.quad(
                lambda tau: float(self._f(np.asarray(tau))),
                self.t_max,
                flat[index],
                epsabs=QUAD_EPSABS,
                epsrel=QUAD_EPSREL,
                limit=QUAD_LIMIT,
            )
            out[index] = self.F_max + tail
        return out.reshape(s.shape)


@lru_cache(maxsize=32)
def _log_power_table(
    exponent: float, gamma: float, t_min: float, t_max: float, ratio: float
) -> _LogPowerPrimitive:
    return _LogPowerPrimitive(exponent, gamma, t_min, t_max, ratio)


class _Tabulated:
    """Monotone cubic interpolant of tabulated f with a power-law tail past the last row."""

    def __init__(self, table: tuple[tuple[float, float], ...]) -> None:
        t = np.asarray([row[0] for row in table], dtype=float)
        f = np.asarray([row[1] for row in table], dtype=float)
        if t[0] > 0:
            t = np.concatenate([[0.0], t])
            f = np.concatenate([[0.0], f])
        self.t_max = float(t[-1])
        self.f_max = float(f[-1])
        self.tail_exponent = math.log(f[-1] / f[-2]) / math.log(t[-1] / t[-2])
        self.interp = PchipInterpolator(t, f)
        self.integral = self.interp.antiderivative()
        self.slope = self.interp.derivative()
        self.F_max = float(self.integral(self.t_max))

    def value(self, s: np.ndarray) -> np.ndarray:
        inside = s <= self.t_max
        tail = self.f_max * (np.maximum(s, self.t_max) / self.t_max) ** self.tail_exponent
        return np.where(inside, self.interp(np.minimum(s, self.t_max)), tail)

    def primitive(self, s: np.ndarray) -> np.ndarray:
        inside = s <= self.t_max
        k = self.tail_exponent
        scaled = np.maximum(s, self.t_max) / self.t_max
        tail = self.F_max + self.f_max * self.t_max / (k + 1) * (scaled ** (k + 1) - 1)
        return np.where(inside, self.integral(np.minimum(s, self.t_max)), tail)

    def derivative(self, s: np.ndarray) -> np.ndarray:
        inside = s <= self.t_max
        tail = self.tail_exponent * self.value(np.maximum(s, self.t_max)) / np.maximum(
            s, self.t_max
        )
        return np.where(inside, self.slope(np.minimum(s, self.t_max)), tail)


@lru_cache(maxsize=32)
def _tabulated(table: tuple[tuple[float, float], ...]) -> _Tabulated:
    return _Tabulated(table)
