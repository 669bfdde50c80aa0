import math

import numpy as np

from src.functional.exceptions import NumericError
from src.functional.typings import CoupledState, EnergyTerms, ProblemConfig
from src.grid.operators import integrate, p_laplacian, weighted_norm_p
from src.grid.typings import GridSpec
from src.nonlinearity.functions import eval_f, eval_F


def energy(s: CoupledState, cfg: ProblemConfig) -> float:
    terms = energy_terms(s, cfg)
    value = (
        terms.norm_u / cfg.p
        + terms.norm_v / cfg.q
        - terms.primitive_f
        - terms.primitive_g
        - terms.coupling
    )
    return _finite('energy', value)


def energy_terms(s: CoupledState, cfg: ProblemConfig) -> EnergyTerms:
    norm_u, norm_v = norm_terms(s, cfg)
    return EnergyTerms(
        norm_u=norm_u,
        norm_v=norm_v,
        primitive_f=_finite('F(u)', integrate(eval_F(cfg.f, s.u.values), cfg.grid)),
        primitive_g=_finite('G(v)', integrate(eval_F(cfg.g, s.v.values), cfg.grid)),
        coupling=coupling_term(s, cfg),
    )


def norm_terms(s: CoupledState, cfg: ProblemConfig) -> tuple[float, float]:
    """p-th and q-th powers of the weighted norms of u and v."""
    return (
        _finite('norm of u', weighted_norm_p(s.u, cfg.a_values, cfg.p)),
        _finite('norm of v', weighted_norm_p(s.v, cfg.b_values, cfg.q)),
    )


def coupling_term(s: CoupledState, cfg: ProblemConfig) -> float:
    density = cfg.lam_values * np.abs(s.u.values) ** cfg.alpha * np.abs(s.v.values) ** cfg.beta
    return _finite('coupling', integrate(density, cfg.grid))


def energy_gradient(s: CoupledState, cfg: ProblemConfig) -> tuple[np.ndarray, np.ndarray]:
    """
    Node residuals (R_u, R_v) with pairing(R, (phi, psi)) equal to the directional
    derivative of `energy` along (phi, psi). Boundary entries are zero.
    """
    u, v = s.u.values, s.v.values
    grid = cfg.grid
    abs_u, abs_v = np.abs(u), np.abs(v)

    r_u = (
        p_laplacian(u, grid, cfg.p, cfg.reg_eps)
        + cfg.a_values * signed_power(u, cfg.p - 1)
        - eval_f(cfg.f, u)
        - cfg.alpha * cfg.lam_values * signed_power(u, cfg.alpha - 1) * abs_v**cfg.beta
    )
    r_v = (
        p_laplacian(v, grid, cfg.q, cfg.reg_eps)
        + cfg.b_values * signed_power(v, cfg.q - 1)
        - eval_f(cfg.g, v)
        - cfg.beta * cfg.lam_values * abs_u**cfg.alpha * signed_power(v, cfg.beta - 1)
    )
    for name, residual in (('u residual', r_u), ('v residual', r_v)):
        if not np.all(np.isfinite(residual)):
            raise NumericError(name)
        residual[~grid.interior] = 0.0
    return r_u, r_v


def signed_power(x: np.ndarray, exponent: float) -> np.ndarray:
    """sign(x) |x|^exponent, zero where x is zero."""
    return np.sign(x) * np.abs(x) ** exponent


def nehari_residual(s: CoupledState, cfg: ProblemConfig) -> float:
    norm_u, norm_v = norm_terms(s, cfg)
    u, v = s.u.values, s.v.values
    value = (
        norm_u / cfg.p
        + norm_v / cfg.q
        - coupling_term(s, cfg)
        - integrate(eval_f(cfg.f, u) * u, cfg.grid) / cfg.p
        - integrate(eval_f(cfg.g, v) * v, cfg.grid) / cfg.q
    )
    return _finite('nehari residual', value)


def pairing(
    first: tuple[np.ndarray, np.ndarray], second: tuple[np.ndarray, np.ndarray], grid: GridSpec
) -> float:
    return integrate(first[0] * second[0] + first[1] * second[1], grid)


def fiber_direction(s: CoupledState, cfg: ProblemConfig) -> tuple[np.ndarray, np.ndarray]:
    return s.u.values / cfg.p, s.v.values / cfg.q


def young_bound(s: CoupledState, cfg: ProblemConfig) -> float:
    """delta * max(alpha/p, beta/q) * (|u|^p + |v|^q) with the budget's delta."""
    norm_u, norm_v = norm_terms(s, cfg)
    return cfg.budget.delta * max(cfg.alpha / cfg.p, cfg.beta / cfg.q) * (norm_u + norm_v)


def _finite(term: str, value: float) -> float:
    if not math.isfinite(value):
        raise NumericError(term)
    return value
