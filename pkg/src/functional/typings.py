import dataclasses
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from src.common.utils import digest
from src.functional.exceptions import (
    IDENTITY_VIOLATED,
    SUPERCRITICAL,
    ZERO_COUPLING,
    ConfigValidationError,
)
from src.grid.operators import DEFAULT_REG_EPS
from src.grid.typings import GridField, GridSpec
from src.nonlinearity.typings import NonlinearitySpec
from src.potential.coupling import DELTA_PAD, check_spectral_bound, coupling_budget
from src.potential.exceptions import INFEASIBLE_BUDGET
from src.potential.fields import sample_potential
from src.potential.typings import CouplingBudget, PotentialRole, PotentialSpec

EXPONENT_TOLERANCE = 1e-12


@dataclass
# pylint: disable-next=too-many-instance-attributes
class ProblemConfig:
    """
    One instance of the coupled system
        -Delta_p u + a |u|^(p-2) u = f(u) + alpha lambda |u|^(alpha-2) u |v|^beta
        -Delta_q v + b |v|^(q-2) v = g(v) + beta lambda |u|^alpha |v|^(beta-2) v
    on a truncated grid. Exponent constraints are checked on construction;
    the potential side (coupling budget, signs, spectral floor) by `validate`.
    """

    p: float
    q: float
    alpha: float
    beta: float
    effective_dimension: float
    grid: GridSpec
    a: PotentialSpec
    b: PotentialSpec
    lam: PotentialSpec
    f: NonlinearitySpec
    g: NonlinearitySpec
    reg_eps: float = DEFAULT_REG_EPS

    def __post_init__(self) -> None:
        self._check_exponents()
        self._check_roles()

    @cached_property
    def a_values(self) -> np.ndarray:
        return sample_potential(self.a, self.grid)

    @cached_property
    def b_values(self) -> np.ndarray:
        return sample_potential(self.b, self.grid)

    @cached_property
    def lam_values(self) -> np.ndarray:
        return sample_potential(self.lam, self.grid)

    @cached_property
    def budget(self) -> CouplingBudget:
        return coupling_budget(
            self.a_values, self.b_values, self.lam_values, self, self.lam.ball_radius
        )

    @property
    def lambda_nonnegative(self) -> bool:
        return bool(np.all(self.lam_values >= 0))

    @property
    def delta_limit(self) -> float:
        """Supremum of the feasible coupling constants: delta < 1 with a positive margin."""
        return min(1.0, 1 / (self.q * max(self.alpha / self.p, self.beta / self.q)))

    def with_delta(self, delta: float) -> 'ProblemConfig':
        """Rescales lambda so that its tight coupling constant becomes `delta`."""
        current = self.budget.delta - DELTA_PAD
        if current <= 0:
            raise ConfigValidationError(ZERO_COUPLING)
        return self.replace(lam=self.lam.scaled(delta / current))

    def validate(self, require_feasible: bool = True) -> None:
        budget = self.budget
        if require_feasible and not budget.feasible:
            raise ConfigValidationError(
                INFEASIBLE_BUDGET.format(delta=budget.delta, margin=budget.margin)
            )
        for name, spec in (('f', self.f), ('g', self.g)):
            if not spec.is_subcritical:
                raise ConfigValidationError(
                    SUPERCRITICAL.format(name=name, critical=spec.critical_exponent)
                )
        check_spectral_bound(self.a_values, self.grid, self.p, PotentialRole.A)
        check_spectral_bound(self.b_values, self.grid, self.q, PotentialRole.B)

    def replace(self, **changes) -> 'ProblemConfig':  # type: ignore
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return {
            'problem': {
                'p': self.p,
                'q': self.q,
                'alpha': self.alpha,
                'beta': self.beta,
                'effective_dimension': self.effective_dimension,
                'reg_eps': self.reg_eps,
            },
            'grid': self.grid.to_dict(),
            'potential': {
                'a': self.a.to_dict(),
                'b': self.b.to_dict(),
                'lambda': self.lam.to_dict(),
            },
            'nonlinearity': {'f': self.f.to_dict(), 'g': self.g.to_dict()},
        }

    @property
    def family_digest(self) -> str:
        """Identifies the problem up to the coupling coefficient."""
        data = self.to_dict()
        del data['potential']['lambda']
        return digest(data)

    def _check_exponents(self) -> None:
        p, q, alpha, beta, n = self.p, self.q, self.alpha, self.beta, self.effective_dimension
        if not 1 < p <= q < n:
            raise ConfigValidationError(f'exponents must satisfy 1 < p <= q < N, got {p}, {q}, {n}')
        if not 1 <= alpha < p:
            raise ConfigValidationError(f'alpha must satisfy 1 <= alpha < p, got {alpha}')
        if not 1 <= beta < q:
            raise ConfigValidationError(f'beta must satisfy 1 <= beta < q, got {beta}')
        identity = alpha / p + beta / q
        if abs(identity - 1) > EXPONENT_TOLERANCE:
            raise ConfigValidationError(IDENTITY_VIOLATED.format(value=identity))
        if p < q and not p < alpha + beta < q:
            raise ConfigValidationError(
                f'p < alpha + beta < q required when p < q, got alpha + beta = {alpha + beta}'
            )
        if p == q and abs(alpha + beta - p) > EXPONENT_TOLERANCE:
            raise ConfigValidationError(
                f'alpha + beta = p required when p = q, got alpha + beta = {alpha + beta}'
            )
        if not self.reg_eps > 0:
            raise ConfigValidationError(f'reg_eps must be positive, got {self.reg_eps}')

    def _check_roles(self) -> None:
        for name, spec, paired in (('f', self.f, self.p), ('g', self.g, self.q)):
            if not math.isclose(spec.exponent, paired, rel_tol=0, abs_tol=EXPONENT_TOLERANCE):
                raise ConfigValidationError(
                    f'{name} must be paired with exponent {paired}, got {spec.exponent}'
                )
            if spec.dimension != self.effective_dimension:
                raise ConfigValidationError(
                    f'{name} critical exponent uses N = {spec.dimension}, '
                    f'problem has N = {self.effective_dimension}'
                )
        for spec, role in ((self.a, PotentialRole.A), (self.b, PotentialRole.B)):
            if spec.role != role:
                raise ConfigValidationError(f'potential {spec.role.value} given for {role.value}')
        if self.lam.role != PotentialRole.LAMBDA:
            raise ConfigValidationError(f'potential {self.lam.role.value} given for lambda')


@dataclass
class CoupledState:
    u: GridField
    v: GridField

    def __post_init__(self) -> None:
        if self.u.grid != self.v.grid:
            raise ConfigValidationError('state components live on different grids')

    @classmethod
    def from_arrays(cls, u: np.ndarray, v: np.ndarray, grid: GridSpec) -> 'CoupledState':
        return cls(GridField(u, grid), GridField(v, grid))

    @property
    def grid(self) -> GridSpec:
        return self.u.grid

    @property
    def is_zero(self) -> bool:
        return self.u.is_zero and self.v.is_zero

    def scaled(self, t: float, p: float, q: float) -> 'CoupledState':
        """Fiber scaling (t^(1/p) u, t^(1/q) v)."""
        return CoupledState.from_arrays(
            t ** (1 / p) * self.u.values, t ** (1 / q) * self.v.values, self.grid
        )

    def absolute(self) -> 'CoupledState':
        return CoupledState.from_arrays(np.abs(self.u.values), np.abs(self.v.values), self.grid)


@dataclass
class EnergyTerms:
    """Integrals the energy and the Nehari functional are assembled from."""

    norm_u: float
    norm_v: float
    primitive_f: float
    primitive_g: float
    coupling: float
