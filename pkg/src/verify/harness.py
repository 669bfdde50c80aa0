import dataclasses
import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from src.common.utils import format_error
from src.config.settings import settings
from src.functional.typings import ProblemConfig
from src.verify.checks import (
    CheckContext,
    RegisteredCheck,
    SharedSolves,
    registered_checks,
    registry_self_test,
)
from src.verify.exceptions import SkipCheck
from src.verify.typings import CheckResult, Verdict, VerificationReport, VerifyOptions

logger = logging.getLogger(__name__)

GATE_CHECK = 'young_coupling_bound'


def run_all(
    cfg: ProblemConfig,
    seed: int,
    n_samples: int,
    options: VerifyOptions | None = None,
) -> VerificationReport:
    """
    Runs every registered check with its own generator seeded by (seed, index).
    A failed coupling budget skips the rest. Exceptions inside a check become
    failed verdicts; the battery itself never aborts.
    """
    registry_self_test()
    options = dataclasses.replace(options or VerifyOptions(), n_samples=n_samples)
    shared = SharedSolves(cfg, options)
    checks = registered_checks()

    def context(index: int) -> CheckContext:
        return CheckContext(
            cfg=cfg,
            options=options,
            seed=seed,
            rng=np.random.default_rng([seed, index]),
            shared=shared,
        )

    gate = _run_check(0, checks[0], context(0))
    if gate.verdict != Verdict.PASS:
        reason = f'{GATE_CHECK} failed: {gate.detail}'
        results = [gate] + [
            _skipped(index, check, reason) for index, check in enumerate(checks[1:], start=1)
        ]
    else:
        with ThreadPoolExecutor(max_workers=settings.verify_workers) as executor:
            futures = [
                executor.submit(_run_check, index, check, context(index))
                for index, check in enumerate(checks[1:], start=1)
            ]
            results = [gate] + [future.result() for future in futures]

    results.sort(key=lambda r: r.index)
    report = VerificationReport(
        checks=results, seed=seed, n_samples=n_samples, config=cfg.to_dict()
    )
    logger.info(
        'verification: %d passed, %d failed, %d skipped',
        sum(r.verdict == Verdict.PASS for r in results),
        len(report.failed),
        sum(r.verdict == Verdict.SKIPPED for r in results),
    )
    return report


def _run_check(index: int, check: RegisteredCheck, context: CheckContext) -> CheckResult:
    try:
        # warm the sampled fields before threads share the config
        _ = context.cfg.budget
        outcome = check.run(context)
    except SkipCheck as e:
        return _skipped(index, check, str(e))
    except Exception as e:  # pylint: disable=broad-except
        logger.debug('check %s raised %s', check.name, format_error(e))
        return CheckResult(
            index=index,
            name=check.name,
            anchor=check.anchor,
            verdict=Verdict.FAIL,
            margin=None,
            samples=0,
            detail=format_error(e),
        )
    verdict = Verdict.PASS if outcome.passed else Verdict.FAIL
    logger.debug('check %s: %s margin=%s', check.name, verdict.value, outcome.margin)
    return CheckResult(
        index=index,
        name=check.name,
        anchor=check.anchor,
        verdict=verdict,
        margin=outcome.margin,
        samples=outcome.samples,
        detail=outcome.detail,
    )


def _skipped(index: int, check: RegisteredCheck, reason: str) -> CheckResult:
    return CheckResult(
        index=index,
        name=check.name,
        anchor=check.anchor,
        verdict=Verdict.SKIPPED,
        margin=None,
        samples=0,
        detail=reason,
    )
