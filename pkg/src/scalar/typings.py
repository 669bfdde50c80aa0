from dataclasses import dataclass, field
from enum import Enum

from src.grid.typings import GridField
from src.nehari.typings import PinnedComponent

FULLY_NONTRIVIAL = 'fully-nontrivial'
SEMITRIVIAL_RISK = 'semitrivial-risk'


class Side(Enum):
    """Which uncoupled equation a scalar solve addresses."""

    A = 'a'
    B = 'b'

    @property
    def pinned(self) -> PinnedComponent:
        return PinnedComponent.V if self == Side.A else PinnedComponent.U


@dataclass
# pylint: disable-next=too-many-instance-attributes
class ScalarReport:
    side: Side
    field: GridField
    level: float
    residual: float
    gradient_norm: float
    converged: bool
    config_digest: str

    def to_dict(self) -> dict:
        return {
            'side': self.side.value,
            'level': self.level,
            'residual': self.residual,
            'gradient_norm': self.gradient_norm,
            'converged': self.converged,
            'config_digest': self.config_digest,
        }


@dataclass
# pylint: disable-next=too-many-instance-attributes
class SemitrivialVerdict:
    verdict: str
    coupled_level: float
    level_a: float
    level_b: float
    gap: float
    mass_fraction_u: float
    mass_fraction_v: float
    binding: str | None = None

    @property
    def min_scalar_level(self) -> float:
        return min(self.level_a, self.level_b)

    def to_dict(self) -> dict:
        return {
            'verdict': self.verdict,
            'coupled_level': self.coupled_level,
            'level_a': self.level_a,
            'level_b': self.level_b,
            'min_scalar_level': self.min_scalar_level,
            'gap': self.gap,
            'mass_fraction_u': self.mass_fraction_u,
            'mass_fraction_v': self.mass_fraction_v,
            'binding': self.binding,
        }


@dataclass
class TrialStateBound:
    """Projected (u_a, v_b) against t0 * (|u|^p/p + |v|^q/q - lambda_0 * int_B u^alpha v^beta)."""

    energy: float
    bound: float
    t0: float
    lambda_floor: float
    ball_integral: float

    @property
    def holds(self) -> bool:
        return self.energy <= self.bound + 1e-12 * max(1.0, abs(self.bound))

    def to_dict(self) -> dict:
        return {
            'energy': self.energy,
            'bound': self.bound,
            't0': self.t0,
            'lambda_floor': self.lambda_floor,
            'ball_integral': self.ball_integral,
            'holds': self.holds,
        }


@dataclass
class LambdaPoint:
    level: float
    feasible: bool
    verdict: SemitrivialVerdict | None = None

    def to_dict(self) -> dict:
        return {
            'lambda0': self.level,
            'feasible': self.feasible,
            'comparison': self.verdict.to_dict() if self.verdict else None,
        }


@dataclass
class ThresholdReport:
    threshold: float
    bracket: tuple[float, float]
    evaluations: list[LambdaPoint] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            'threshold': self.threshold,
            'bracket': list(self.bracket),
            'evaluations': [point.to_dict() for point in self.evaluations],
        }


@dataclass
# pylint: disable-next=too-many-instance-attributes
class AsymptoticComparison:
    periodic_level: float
    upper_bound: float
    asymptotic_level: float
    t0: float
    slack: float
    tolerance: float

    @property
    def gap(self) -> float:
        return self.periodic_level - self.upper_bound

    @property
    def strict(self) -> bool:
        return self.upper_bound < self.periodic_level - self.slack

    @property
    def consistent(self) -> bool:
        return self.asymptotic_level <= self.upper_bound + self.tolerance

    @property
    def passed(self) -> bool:
        return self.strict and self.consistent

    def to_dict(self) -> dict:
        return {
            'periodic_level': self.periodic_level,
            'upper_bound': self.upper_bound,
            'asymptotic_level': self.asymptotic_level,
            't0': self.t0,
            'gap': self.gap,
            'strict': self.strict,
            'consistent': self.consistent,
            'passed': self.passed,
        }


@dataclass
class GapTrend:
    factors: list[float]
    gaps: list[float]

    @property
    def monotone(self) -> bool:
        return all(g > 0 for g in self.gaps) and all(
            later < earlier for earlier, later in zip(self.gaps, self.gaps[1:])
        )

    def to_dict(self) -> dict:
        return {'factors': self.factors, 'gaps': self.gaps, 'monotone': self.monotone}
