from dataclasses import dataclass, field
from enum import Enum

from src.functional.typings import CoupledState


class PinnedComponent(Enum):
    """Component held at zero during descent."""

    U = 'u'
    V = 'v'


@dataclass
class FiberSample:
    t: float
    value: float | None
    derivative: float
    rhs: float


@dataclass
# pylint: disable-next=too-many-instance-attributes
class FiberingReport:
    t0: float
    bracket: tuple[float, float]
    samples: list[FiberSample]
    iterations: int
    residual_at_t0: float
    scale: float
    rhs_monotone: bool

    def to_dict(self) -> dict:
        return {
            't0': self.t0,
            'bracket': list(self.bracket),
            'iterations': self.iterations,
            'residual_at_t0': self.residual_at_t0,
            'scale': self.scale,
            'rhs_monotone': self.rhs_monotone,
            'samples': [
                {'t': s.t, 'value': s.value, 'derivative': s.derivative, 'rhs': s.rhs}
                for s in sorted(self.samples, key=lambda s: s.t)
            ],
        }


@dataclass
# pylint: disable-next=too-many-instance-attributes
class SolverOptions:
    tol: float = 1e-6
    max_iters: int = 5000
    multistart: int = 8
    seed: int = 42
    armijo: float = 1e-4
    max_halvings: int = 40
    initial_step: float = 0.1
    max_step: float = 1e3
    energy_slack: float = 1e-12
    blowup_energy: float = -1e12
    mass_fraction: float = 1e-6
    positivity_tol: float = 1e-10

    def to_dict(self) -> dict:
        return {
            'tol': self.tol,
            'max_iters': self.max_iters,
            'multistart': self.multistart,
            'seed': self.seed,
            'armijo': self.armijo,
            'max_halvings': self.max_halvings,
            'initial_step': self.initial_step,
            'max_step': self.max_step,
            'energy_slack': self.energy_slack,
            'blowup_energy': self.blowup_energy,
            'mass_fraction': self.mass_fraction,
            'positivity_tol': self.positivity_tol,
        }


@dataclass
class TraceEntry:
    iteration: int
    energy: float
    residual: float
    gradient_norm: float
    step: float

    def to_dict(self) -> dict:
        return {
            'iteration': self.iteration,
            'energy': self.energy,
            'residual': self.residual,
            'gradient_norm': self.gradient_norm,
            'step': self.step,
        }


@dataclass
# pylint: disable-next=too-many-instance-attributes
class SolveReport:
    state: CoupledState
    energy_value: float
    nehari_residual: float
    gradient_norm: float
    converged: bool
    iterations: int
    mass_fraction_u: float
    mass_fraction_v: float
    norm_value: float
    config_digest: str
    init_index: int = 0
    positivity: str | None = None
    trace: list[TraceEntry] = field(default_factory=list)
    mass_threshold: float = 1e-6

    @property
    def semitrivial(self) -> bool:
        return min(self.mass_fraction_u, self.mass_fraction_v) < self.mass_threshold

    def to_dict(self, with_trace: bool = True) -> dict:
        data = {
            'energy': self.energy_value,
            'nehari_residual': self.nehari_residual,
            'gradient_norm': self.gradient_norm,
            'converged': self.converged,
            'iterations': self.iterations,
            'init_index': self.init_index,
            'mass_fraction_u': self.mass_fraction_u,
            'mass_fraction_v': self.mass_fraction_v,
            'semitrivial': self.semitrivial,
            'positivity': self.positivity,
            'norm': self.norm_value,
            'config_digest': self.config_digest,
        }
        if with_trace:
            data['trace'] = [entry.to_dict() for entry in self.trace]
        return data
