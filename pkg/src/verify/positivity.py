from dataclasses import dataclass

import numpy as np

from src.functional.typings import CoupledState
from src.grid.typings import GridField

POSITIVE = 'positive'
SEMITRIVIAL_POSITIVE = 'semitrivial-positive'
FAIL = 'fail'
IDENTICALLY_ZERO = 'identically-zero'

COLLAR = 2


@dataclass
class ComponentPositivity:
    status: str
    interior_min: float
    core_min: float

    def to_dict(self) -> dict:
        return {
            'status': self.status,
            'interior_min': self.interior_min,
            'core_min': self.core_min,
        }


@dataclass
class PositivityVerdict:
    verdict: str
    u: ComponentPositivity
    v: ComponentPositivity

    @property
    def passed(self) -> bool:
        return self.verdict != FAIL

    def to_dict(self) -> dict:
        return {'verdict': self.verdict, 'u': self.u.to_dict(), 'v': self.v.to_dict()}


def check_positivity(s: CoupledState, tol: float) -> PositivityVerdict:
    """
    Interior values of both components must be >= -tol, and every nonzero component
    must be strictly positive on the nodes more than a two-cell collar off the boundary.
    """
    u = _component(s.u, tol)
    v = _component(s.v, tol)
    statuses = {u.status, v.status}
    if FAIL in statuses or statuses == {IDENTICALLY_ZERO}:
        verdict = FAIL
    elif IDENTICALLY_ZERO in statuses:
        verdict = SEMITRIVIAL_POSITIVE
    else:
        verdict = POSITIVE
    return PositivityVerdict(verdict=verdict, u=u, v=v)


def _component(field: GridField, tol: float) -> ComponentPositivity:
    grid = field.grid
    interior = field.values[grid.interior]
    core = field.values[grid.core(COLLAR)]
    interior_min = float(np.min(interior))
    core_min = float(np.min(core)) if core.size else interior_min
    if field.is_zero:
        status = IDENTICALLY_ZERO
    elif interior_min >= -tol and core_min > 0:
        status = POSITIVE
    else:
        status = FAIL
    return ComponentPositivity(status=status, interior_min=interior_min, core_min=core_min)
