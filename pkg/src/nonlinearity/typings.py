import math
from dataclasses import dataclass, field
from enum import Enum

from src.nonlinearity.exceptions import NonlinearityDomainError


class NonlinearityKind(Enum):
    """Family of the nonlinear term f."""

    LOG_POWER = 'log-power'
    PURE_POWER = 'pure-power'
    TABULATED = 'tabulated'


def critical_exponent(exponent: float, dimension: float) -> float:
    if exponent >= dimension:
        return math.inf
    return dimension * exponent / (dimension - exponent)


@dataclass(frozen=True)
class NonlinearitySpec:
    """
    f(t) = |t|^{e-2} t ln^gamma(1+|t|)   (log-power)
    f(t) = |t|^{r-2} t                   (pure-power, F = |t|^r / r)
    f(t) from a table of (t, f(t)), t >= 0, extended as an odd function (tabulated)
    where e is the paired exponent p or q.
    """

    kind: NonlinearityKind
    exponent: float
    dimension: float
    gamma: float = 1.0
    power: float = 0.0
    table: tuple[tuple[float, float], ...] = field(default=())

    def __post_init__(self) -> None:
        if not self.exponent > 1:
            raise NonlinearityDomainError(f'paired exponent must be > 1, got {self.exponent}')
        if self.kind == NonlinearityKind.LOG_POWER and self.gamma < 1:
            raise NonlinearityDomainError(f'log-power gamma must be >= 1, got {self.gamma}')
        if self.kind == NonlinearityKind.PURE_POWER and not self.power > 1:
            raise NonlinearityDomainError(f'pure-power exponent must be > 1, got {self.power}')
        if self.kind == NonlinearityKind.TABULATED:
            self._check_table()

    @property
    def critical_exponent(self) -> float:
        return critical_exponent(self.exponent, self.dimension)

    @property
    def is_subcritical(self) -> bool:
        """Growth strictly between the paired and the critical exponent."""
        if self.kind == NonlinearityKind.PURE_POWER:
            return self.exponent < self.power < self.critical_exponent
        return self.exponent < self.critical_exponent

    def to_dict(self) -> dict:
        return {
            'family': self.kind.value,
            'gamma': self.gamma,
            'power': self.power,
            'table': [list(row) for row in self.table],
        }

    def _check_table(self) -> None:
        if len(self.table) < 4:
            raise NonlinearityDomainError('tabulated nonlinearity needs at least 4 rows')
        ts = [row[0] for row in self.table]
        if any(not math.isfinite(v) for row in self.table for v in row):
            raise NonlinearityDomainError('tabulated nonlinearity contains non-finite values')
        if ts[0] < 0 or any(t1 <= t0 for t0, t1 in zip(ts, ts[1:])):
            raise NonlinearityDomainError('tabulated t values must be nonnegative and increasing')
        if ts[0] == 0 and self.table[0][1] != 0:
            raise NonlinearityDomainError('tabulated nonlinearity must satisfy f(0) = 0')
        if self.table[-1][1] <= 0 or self.table[-2][1] <= 0:
            raise NonlinearityDomainError('tabulated tail values must be positive')


@dataclass
class ConditionVerdict:
    name: str
    passed: bool
    margin: float
    detail: str = ''


@dataclass
class ConditionReport:
    """Sampled audit of the growth and monotonicity hypotheses; 'pass on probe set' only."""

    kind: NonlinearityKind
    exponent: float
    samples: int
    verdicts: list[ConditionVerdict]
    sup_derivative_ratio: float

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def verdict(self, name: str) -> ConditionVerdict:
        for v in self.verdicts:
            if v.name == name:
                return v
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            'family': self.kind.value,
            'exponent': self.exponent,
            'samples': self.samples,
            'passed': self.passed,
            'sup_derivative_ratio': self.sup_derivative_ratio,
            'verdicts': [
                {'name': v.name, 'passed': v.passed, 'margin': v.margin, 'detail': v.detail}
                for v in self.verdicts
            ],
        }
