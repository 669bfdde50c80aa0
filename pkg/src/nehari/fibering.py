import logging

import numpy as np

from src.common.utils import warning_verbose
from src.config.settings import settings
from src.functional.energy import coupling_term, norm_terms
from src.functional.typings import CoupledState, ProblemConfig
from src.grid.operators import integrate
from src.nehari.exceptions import (
    NO_BRACKET,
    NONPOSITIVE_LHS,
    FiberParameterError,
    ProjectionError,
    ZeroStateError,
)
from src.nehari.typings import FiberingReport, FiberSample
from src.nonlinearity.functions import eval_f, eval_F

logger = logging.getLogger(__name__)


class FiberingMap:
    """
    h(t) = I(t^(1/p) u, t^(1/q) v) for one state. The norm and coupling terms are
    homogeneous of degree one in t, so they are assembled once into `lhs`;
    only the nonlinear integrals are evaluated per t.
    """

    def __init__(self, s: CoupledState, cfg: ProblemConfig) -> None:
        if s.is_zero:
            raise ZeroStateError()
        self.state = s
        self.cfg = cfg
        self.norm_u, self.norm_v = norm_terms(s, cfg)
        self.coupling = coupling_term(s, cfg)
        self.lhs = self.norm_u / cfg.p + self.norm_v / cfg.q - self.coupling

    @property
    def scale(self) -> float:
        return self.norm_u + self.norm_v

    def value(self, t: float) -> float:
        if t == 0:
            return 0.0
        cfg = self.cfg
        u_t = t ** (1 / cfg.p) * self.state.u.values
        v_t = t ** (1 / cfg.q) * self.state.v.values
        return (
            t * self.lhs
            - integrate(eval_F(cfg.f, u_t), cfg.grid)
            - integrate(eval_F(cfg.g, v_t), cfg.grid)
        )

    def rhs(self, t: float) -> float:
        cfg = self.cfg
        u, v = self.state.u.values, self.state.v.values
        rhs_u = integrate(eval_f(cfg.f, t ** (1 / cfg.p) * u) * u, cfg.grid)
        rhs_v = integrate(eval_f(cfg.g, t ** (1 / cfg.q) * v) * v, cfg.grid)
        return rhs_u / (cfg.p * t ** (1 - 1 / cfg.p)) + rhs_v / (cfg.q * t ** (1 - 1 / cfg.q))

    def derivative(self, t: float) -> float:
        return self.lhs - self.rhs(t)


def fibering_value(s: CoupledState, cfg: ProblemConfig, t: float) -> float:
    if not t >= 0:
        raise FiberParameterError(t, '>= 0')
    return FiberingMap(s, cfg).value(t)


def fibering_derivative(s: CoupledState, cfg: ProblemConfig, t: float) -> float:
    if not t > 0:
        raise FiberParameterError(t, '> 0')
    return FiberingMap(s, cfg).derivative(t)


def project(
    s: CoupledState, cfg: ProblemConfig, with_values: bool = False
) -> tuple[FiberingReport, CoupledState]:
    """
    Scales s onto the Nehari manifold: brackets the root of h' by doubling or halving
    from t=1, then bisects to relative width `settings.bisection_rel_width`.
    """
    fiber = FiberingMap(s, cfg)
    if fiber.lhs <= 0:
        raise ProjectionError(NONPOSITIVE_LHS.format(value=fiber.lhs))

    samples: list[FiberSample] = []

    def sample(t: float) -> float:
        rhs = fiber.rhs(t)
        derivative = fiber.lhs - rhs
        value = fiber.value(t) if with_values else None
        samples.append(FiberSample(t=t, value=value, derivative=derivative, rhs=rhs))
        return derivative

    t = 1.0
    derivative = sample(t)
    if derivative == 0:
        lo = hi = t
    else:
        lo, hi = _bracket(sample, t, derivative)
        while hi - lo > settings.bisection_rel_width * hi:
            mid = (lo + hi) / 2
            if mid in (lo, hi):
                break
            d_mid = sample(mid)
            if d_mid > 0:
                lo = mid
            elif d_mid < 0:
                hi = mid
            else:
                lo = hi = mid
    t0 = (lo + hi) / 2

    report = FiberingReport(
        t0=t0,
        bracket=(lo, hi),
        samples=samples,
        iterations=len(samples),
        residual_at_t0=t0 * fiber.derivative(t0),
        scale=t0 * fiber.scale,
        rhs_monotone=_rhs_monotone(samples),
    )
    if not report.rhs_monotone:
        warning_verbose('fibering rhs trail is not increasing, t0=%.12g', t0)
    logger.debug('projected t0=%.12g after %d evaluations', t0, report.iterations)
    return report, s.scaled(t0, cfg.p, cfg.q)


def _bracket(sample, t: float, derivative: float) -> tuple[float, float]:  # type: ignore
    factor = 2.0 if derivative > 0 else 0.5
    for _ in range(settings.fiber_max_steps):
        t_next = t * factor
        d_next = sample(t_next)
        if (derivative > 0 and d_next <= 0) or (derivative < 0 and d_next >= 0):
            return (t, t_next) if factor > 1 else (t_next, t)
        t = t_next
    raise ProjectionError(NO_BRACKET.format(steps=settings.fiber_max_steps, t=t))


def _rhs_monotone(samples: list[FiberSample]) -> bool:
    ordered = sorted(samples, key=lambda s: s.t)
    rhs = np.asarray([s.rhs for s in ordered])
    if len(rhs) < 2:
        return True
    slack = settings.rhs_monotone_slack * float(np.max(np.abs(rhs)))
    return bool(np.all(np.diff(rhs) > -slack))
