"""Re-verification of code records: Fossorier condition plus the Tanner-graph oracle."""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, List, Optional

from src.config import settings
from src.schemas import CodeRecord, VerificationReport, VerificationResult
from src.tools.expmat import FOSSORIER_CAP, expand, fossorier_girth, tanner_girth
from src.tools.irs import build_matrix

logger = logging.getLogger(__name__)


def verify_record(record: CodeRecord, oracle: Optional[bool] = None) -> VerificationResult:
    """
    Check one record against its claimed girth.

    Args:
        record: code parameters
        oracle: run the Tanner BFS too; None means only when N <= settings.oracle_max_n

    Returns:
        VerificationResult; passed requires every check that ran to reach record.g
    """
    started = time.monotonic()
    P = build_matrix(record.matrix_spec(), record.m)
    girth = fossorier_girth(P, FOSSORIER_CAP)
    passed = girth.meets(record.g)

    if oracle is None:
        oracle = record.N <= settings.oracle_max_n
    tanner = None
    if oracle:
        tanner = tanner_girth(expand(P), FOSSORIER_CAP)
        passed = passed and tanner.meets(record.g)
        if tanner != girth:
            logger.error(f"{record.label()}: Fossorier girth {girth} but Tanner girth {tanner}")
            passed = False

    return VerificationResult(
        record=record,
        fossorier_girth=str(girth),
        tanner_girth=None if tanner is None else str(tanner),
        passed=passed,
        elapsed_seconds=time.monotonic() - started,
    )


def _verify_task(args) -> VerificationResult:
    return verify_record(*args)


class VerificationPipeline:
    """Verifies corpus records, optionally fanned out over worker processes."""

    def __init__(self, workers: Optional[int] = None):
        self.workers = settings.workers if workers is None else workers
        logger.info("VerificationPipeline initialized")

    def verify_record(
        self, record: CodeRecord, oracle: Optional[bool] = None
    ) -> VerificationResult:
        result = verify_record(record, oracle)
        status = "✓ PASS" if result.passed else "⚠ FAIL"
        logger.info(f"{status} {record.label()} (girth {result.fossorier_girth})")
        return result

    def verify_all(
        self, records: Iterable[CodeRecord], oracle: Optional[bool] = None
    ) -> VerificationReport:
        """
        Verify records in input order.

        Args:
            records: records to check
            oracle: force (True) or skip (False) the Tanner oracle; None = small N only

        Returns:
            VerificationReport with one result per record, in input order
        """
        records = list(records)
        logger.info(f"Verification Step 1: {len(records)} record(s), workers={self.workers}")
        results: List[VerificationResult]
        if self.workers > 1 and len(records) > 1:
            with ProcessPoolExecutor(max_workers=self.workers) as executor:
                results = list(executor.map(_verify_task, [(r, oracle) for r in records]))
        else:
            results = [verify_record(r, oracle) for r in records]

        logger.info("Verification Step 2: summarize")
        for result in results:
            if not result.passed:
                logger.error(
                    f"FAIL {result.record.label()}: Fossorier {result.fossorier_girth}, "
                    f"Tanner {result.tanner_girth or 'not run'}"
                )
        report = VerificationReport(results=results)
        logger.info(f"✓ {report.passed} passed, {report.failed} failed")
        return report
