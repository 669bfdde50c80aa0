from dataclasses import dataclass, field
from enum import Enum

from src.nehari.typings import SolverOptions
from src.potential.typings import DecayProfile, Perturbation


class Verdict(Enum):
    PASS = 'pass'
    FAIL = 'fail'
    SKIPPED = 'skipped'


def default_perturbations() -> tuple[Perturbation, Perturbation, Perturbation]:
    return (
        Perturbation(-0.2, 1.0, DecayProfile.EXP),
        Perturbation(-0.2, 1.0, DecayProfile.EXP),
        Perturbation(0.1, 1.0, DecayProfile.EXP),
    )


@dataclass
# pylint: disable-next=too-many-instance-attributes
class VerifyOptions:
    n_samples: int = 50
    positivity_tol: float = 1e-10
    lambda_threshold_max: float = 0.6
    threshold_steps: int = 6
    semitrivial_slack: float = 1e-8
    mass_fraction: float = 1e-6
    norm_floor: float = 1e-4
    gradient_step: float = 1e-5
    gradient_tol: float = 1e-6
    residual_tol: float = 1e-8
    projection_tol: float = 1e-9
    solve_starts: int = 1
    perturbations: tuple[Perturbation, Perturbation, Perturbation] = field(
        default_factory=default_perturbations
    )
    solver: SolverOptions = field(default_factory=SolverOptions)

    def to_dict(self) -> dict:
        return {
            'n_samples': self.n_samples,
            'positivity_tol': self.positivity_tol,
            'lambda_threshold_max': self.lambda_threshold_max,
            'threshold_steps': self.threshold_steps,
            'semitrivial_slack': self.semitrivial_slack,
            'mass_fraction': self.mass_fraction,
            'norm_floor': self.norm_floor,
            'solve_starts': self.solve_starts,
        }


@dataclass
class CheckOutcome:
    passed: bool
    margin: float
    samples: int
    detail: str = ''


@dataclass
# pylint: disable-next=too-many-instance-attributes
class CheckResult:
    index: int
    name: str
    anchor: str
    verdict: Verdict
    margin: float | None
    samples: int
    detail: str = ''

    def to_dict(self) -> dict:
        return {
            'name': self.name,
            'anchor': self.anchor,
            'verdict': self.verdict.value,
            'margin': self.margin,
            'samples': self.samples,
            'detail': self.detail,
        }


@dataclass
class VerificationReport:
    checks: list[CheckResult]
    seed: int
    n_samples: int
    config: dict

    @property
    def failed(self) -> list[str]:
        return [c.name for c in self.checks if c.verdict == Verdict.FAIL]

    @property
    def passed(self) -> bool:
        return not self.failed

    def result(self, name: str) -> CheckResult:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            'seed': self.seed,
            'n_samples': self.n_samples,
            'config': self.config,
            'passed': self.passed,
            'failed': self.failed,
            'checks': [check.to_dict() for check in self.checks],
        }
