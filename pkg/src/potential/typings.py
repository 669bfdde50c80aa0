from dataclasses import dataclass
from enum import Enum

from src.potential.exceptions import PotentialSignError


class PotentialFamily(Enum):
    """Shape of a coefficient field."""

    CONSTANT = 'constant'
    PERIODIC_TRIG = 'periodic-trig'
    ASYMPTOTICALLY_PERIODIC = 'asymptotically-periodic'


class PotentialRole(Enum):
    """Which coefficient of the system the field plays."""

    A = 'a'
    B = 'b'
    LAMBDA = 'lambda'


class DecayProfile(Enum):
    EXP = 'exp'
    GAUSS = 'gauss'


@dataclass(frozen=True)
class Perturbation:
    """amplitude * exp(-rate |x|) or amplitude * exp(-rate |x|^2)."""

    amplitude: float
    rate: float = 1.0
    profile: DecayProfile = DecayProfile.EXP

    def __post_init__(self) -> None:
        if not self.rate > 0:
            raise PotentialSignError(f'perturbation decay rate must be positive, got {self.rate}')

    def scaled(self, factor: float) -> 'Perturbation':
        return Perturbation(self.amplitude * factor, self.rate, self.profile)


@dataclass(frozen=True)
# pylint: disable-next=too-many-instance-attributes
class PotentialSpec:
    """
    value(x) = base_level + modulation_amplitude * mean_i cos(2 pi x_i)
               [+ perturbation(x) for the asymptotically periodic family]
    and, for lambda with a ball floor, max(value(x), ball_floor) on |x| <= ball_radius.
    """

    family: PotentialFamily
    role: PotentialRole
    base_level: float
    modulation_amplitude: float = 0.0
    perturbation: Perturbation | None = None
    ball_radius: float = 0.0
    ball_floor: float = 0.0

    def __post_init__(self) -> None:
        if self.modulation_amplitude < 0:
            raise PotentialSignError('modulation amplitude must be nonnegative')
        if self.role != PotentialRole.LAMBDA and self.base_level < 0:
            raise PotentialSignError(f'{self.role.value} base level must be nonnegative')
        if self.family == PotentialFamily.CONSTANT and self.modulation_amplitude:
            raise PotentialSignError('constant potential cannot carry a modulation')
        if self.family == PotentialFamily.ASYMPTOTICALLY_PERIODIC:
            if self.perturbation is None:
                raise PotentialSignError('asymptotically periodic potential needs a perturbation')
        elif self.perturbation is not None:
            raise PotentialSignError(f'{self.family.value} potential cannot carry a perturbation')
        if self.ball_floor < 0:
            raise PotentialSignError('ball floor must be nonnegative')
        if self.ball_floor > 0 and not self.ball_radius > 0:
            raise PotentialSignError('a positive ball floor needs a positive ball radius')
        if self.ball_floor > 0 and self.role != PotentialRole.LAMBDA:
            raise PotentialSignError('only the coupling coefficient carries a ball floor')

    @property
    def periodic_part(self) -> 'PotentialSpec':
        family = self.family
        if family == PotentialFamily.ASYMPTOTICALLY_PERIODIC:
            family = (
                PotentialFamily.PERIODIC_TRIG
                if self.modulation_amplitude
                else PotentialFamily.CONSTANT
            )
        return PotentialSpec(
            family=family,
            role=self.role,
            base_level=self.base_level,
            modulation_amplitude=self.modulation_amplitude,
            ball_radius=self.ball_radius,
            ball_floor=self.ball_floor,
        )

    def scaled(self, factor: float) -> 'PotentialSpec':
        """Multiplies every level of the field by a nonnegative factor."""
        return PotentialSpec(
            family=self.family,
            role=self.role,
            base_level=self.base_level * factor,
            modulation_amplitude=self.modulation_amplitude * factor,
            perturbation=self.perturbation.scaled(factor) if self.perturbation else None,
            ball_radius=self.ball_radius,
            ball_floor=self.ball_floor * factor,
        )

    def to_dict(self) -> dict:
        perturbation = self.perturbation or Perturbation(0.0)
        return {
            'family': self.family.value,
            'base_level': self.base_level,
            'modulation_amplitude': self.modulation_amplitude,
            'perturbation_amplitude': perturbation.amplitude,
            'perturbation_rate': perturbation.rate,
            'perturbation_profile': perturbation.profile.value,
            'ball_radius': self.ball_radius,
            'ball_floor': self.ball_floor,
        }


@dataclass
class CouplingBudget:
    """Tight constant in |lambda| <= delta a^(alpha/p) b^(beta/q) over the grid."""

    delta: float
    margin: float
    lambda_floor: float
    ball_radius: float

    @property
    def feasible(self) -> bool:
        return self.delta < 1 and self.margin > 0

    def to_dict(self) -> dict:
        return {
            'delta': self.delta,
            'margin': self.margin,
            'lambda_floor': self.lambda_floor,
            'ball_radius': self.ball_radius,
            'feasible': self.feasible,
        }
