import time
from logging import getLogger
from typing import List, Optional, Sequence

from integrability.utils import ComplexCodec

from .checks import DEFAULT_CHECKS, AbstractCheck, CheckContext
from .configs import RunConfig
from .reports import CheckRecord, CheckReport

logger = getLogger(__name__)


class VerificationSuite:
    """Runs registered checks in order; a failing check never stops the run."""
    config: RunConfig
    checks: List[AbstractCheck]

    def __init__(self, config: RunConfig, checks: Optional[Sequence[AbstractCheck]] = None):
        self.config = config
        self.checks = list(DEFAULT_CHECKS if checks is None else checks)
        names = [check.name for check in self.checks]
        if len(set(names)) != len(names):
            raise ValueError(f"Check names must be unique, got {names}")

    def build_context(self) -> CheckContext:
        rng = self.config.generator()
        regime = self.config.build_regime()
        lattice = self.config.build_lattice(rng)
        logger.info(f"Verification lattice {lattice}, regime {regime}")
        return CheckContext(config=self.config, lattice=lattice, regime=regime, rng=rng)

    def run(self) -> CheckReport:
        context = self.build_context()
        records = [self.run_check(check, context) for check in self.checks]
        report = CheckReport(records=records,
                             config=self.config.to_document(),
                             lattice={"L": context.lattice.site_count,
                                      "xi": ComplexCodec.encode_list(context.lattice.xi)})
        logger.info(f"{len(records) - len(report.failures)}/{len(records)} checks passed")
        return report

    def run_check(self, check: AbstractCheck, context: CheckContext) -> CheckRecord:
        tolerance = self.config.tolerance * check.tolerance_factor
        logger.info(f"Starting check {check.name}")
        started = time.perf_counter()
        try:
            outcome = check.run(context)
        except Exception as e:
            wall_time = time.perf_counter() - started
            logger.warning(f"Check {check.name} raised {type(e).__name__}: {e}")
            return CheckRecord(name=check.name, parameters={}, residual=float("inf"), tolerance=tolerance,
                               passed=False, wall_time=wall_time, error=f"{type(e).__name__}: {e}")
        wall_time = time.perf_counter() - started
        passed = bool(outcome.residual < tolerance)
        record = CheckRecord(name=check.name, parameters=outcome.parameters, residual=float(outcome.residual),
                             tolerance=tolerance, passed=passed, wall_time=wall_time, details=outcome.details)
        if passed:
            logger.info(f"Check {check.name} passed: residual {record.residual:.3e} < {tolerance:.1e}")
        else:
            logger.warning(f"Check {check.name} failed: residual {record.residual:.3e} >= {tolerance:.1e}")
        return record
