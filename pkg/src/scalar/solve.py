import logging

import numpy as np

from src.functional.typings import CoupledState, ProblemConfig
from src.grid.typings import GridField
from src.nehari.descent import minimize_ground_state, solve_multistart
from src.nehari.typings import SolveReport, SolverOptions
from src.scalar.typings import ScalarReport, Side

logger = logging.getLogger(__name__)


def solve_scalar(
    which: Side, cfg: ProblemConfig, opts: SolverOptions, init: GridField | None = None
) -> ScalarReport:
    """
    Ground level of the uncoupled a-side (u, 0) or b-side (0, v) problem, solved by
    the coupled descent with the other component pinned at zero.
    """
    if init is None:
        report = solve_multistart(cfg, opts, pin=which.pinned)[0]
    else:
        zero = np.zeros(cfg.grid.shape)
        if which == Side.A:
            state = CoupledState.from_arrays(init.values, zero, cfg.grid)
        else:
            state = CoupledState.from_arrays(zero, init.values, cfg.grid)
        report = minimize_ground_state(state, cfg, opts, pin=which.pinned)

    scalar = to_scalar_report(which, report)
    logger.info('%s-side level %.12g', which.value, scalar.level)
    return scalar


def to_scalar_report(which: Side, report: SolveReport) -> ScalarReport:
    return ScalarReport(
        side=which,
        field=report.state.u if which == Side.A else report.state.v,
        level=report.energy_value,
        residual=report.nehari_residual,
        gradient_norm=report.gradient_norm,
        converged=report.converged,
        config_digest=report.config_digest,
    )
