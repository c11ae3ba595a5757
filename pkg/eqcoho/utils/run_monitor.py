"""
Run bookkeeping for analysis jobs.

Usage:
    from utils.run_monitor import analysis_run

    with analysis_run("polygon_report", n=6, p=3) as run:
        report = build_polygon_report(6, 3)
        run.cells_processed = report.cell_count
    # success -> INFO line with elapsed time, run.status == "success"
    # exception -> ERROR line with traceback, run.status == "failed", re-raised
"""
from __future__ import annotations

import logging
import time
import traceback
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Generator, Optional

log = logging.getLogger(__name__)


@dataclass
class RunRecord:
    """Mutable handle yielded by analysis_run. Jobs set cells_processed before exit."""

    job_name: str
    metadata: dict[str, Any] = field(default_factory=dict)
    status: str = "running"
    cells_processed: int = 0
    elapsed_s: float = 0.0
    error: Optional[str] = None

    def as_dict(self) -> dict[str, Any]:
        return {
            "job_name": self.job_name,
            "status": self.status,
            "cells_processed": self.cells_processed,
            "elapsed_s": round(self.elapsed_s, 3),
            "error": self.error,
            **self.metadata,
        }


@contextmanager
def analysis_run(job_name: str, **metadata: Any) -> Generator[RunRecord, None, None]:
    """Bookend a job with timing and status.

    On clean exit  -> status='success'
    On exception   -> status='failed', error recorded, traceback logged, re-raised
    """
    record = RunRecord(job_name=job_name, metadata=dict(metadata))
    started = time.perf_counter()
    log.debug("starting job: %s %s", job_name, metadata)
    try:
        yield record
        record.status = "success"
        record.elapsed_s = time.perf_counter() - started
        log.info(
            "job %s finished in %.2fs (cells=%d) %s",
            job_name, record.elapsed_s, record.cells_processed, metadata,
        )
    except Exception as exc:
        record.status = "failed"
        record.elapsed_s = time.perf_counter() - started
        record.error = f"{type(exc).__name__}: {exc}"
        log.error("job %s failed after %.2fs: %s\n%s",
                  job_name, record.elapsed_s, record.error, traceback.format_exc())
        raise
