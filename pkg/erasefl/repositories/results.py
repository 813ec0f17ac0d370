"""
Result repository: CSV files for plotting and reporting.
"""

import csv
import logging
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence

from erasefl.models.learning import Dataset
from erasefl.models.simulation import MonteCarloResult
from erasefl.schemas.reports import LeCamReport, SummaryRow, SweepRow

logger = logging.getLogger(__name__)

ROUNDS_COLUMNS = ["scheme", "replica", "round", "elapsed_symbols", "participation", "mse"]
SUMMARY_COLUMNS = list(SummaryRow.model_fields)
SWEEP_COLUMNS = list(SweepRow.model_fields)
DATASET_COLUMNS = ["user", "x", "y"]
BOUNDS_COLUMNS = ["lambda", "tv_sum", "bound", "holds"]


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


class ResultRepository:
    """Writes result files atomically into one output directory."""

    def __init__(self, output_dir: Path | str):
        self.output_dir = Path(output_dir)

    def _write(self, filename: str, columns: Sequence[str], rows: Iterable[Sequence]) -> Path:
        """Write to a temp file next to the target, then rename it into place."""
        self.output_dir.mkdir(parents=True, exist_ok=True)
        target = self.output_dir / filename
        fd, tmp = tempfile.mkstemp(prefix=f".{filename}.", dir=self.output_dir)
        try:
            with os.fdopen(fd, "w", newline="", encoding="utf-8") as f:
                writer = csv.writer(f, lineterminator="\n")
                writer.writerow(columns)
                count = 0
                for row in rows:
                    writer.writerow([_cell(v) for v in row])
                    count += 1
            os.replace(tmp, target)
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise
        logger.info("wrote %d rows to %s", count, target)
        return target

    def write_rounds(self, results: Sequence[tuple[str, MonteCarloResult]]) -> Path:
        """
        Per-replica MSE trajectories.

        Args:
            results: (scheme label, Monte Carlo result) per scheme
        """
        def rows():
            for label, result in results:
                n_symbols = result.n_symbols
                for replica, (series, counts) in enumerate(
                    zip(result.replica_mse, result.replica_participation)
                ):
                    for t, (mse, count) in enumerate(zip(series, counts)):
                        yield label, replica, t, (t + 1) * n_symbols, int(count), float(mse)
        return self._write("rounds.csv", ROUNDS_COLUMNS, rows())

    def write_summary(self, rows: Sequence[SummaryRow]) -> Path:
        return self._write(
            "summary.csv", SUMMARY_COLUMNS, ([getattr(r, c) for c in SUMMARY_COLUMNS] for r in rows)
        )

    def write_sweep(self, rows: Sequence[SweepRow]) -> Path:
        return self._write(
            "sweep.csv", SWEEP_COLUMNS, ([getattr(r, c) for c in SWEEP_COLUMNS] for r in rows)
        )

    def write_dataset(self, datasets: Sequence[Dataset]) -> Path:
        """One row per sample, users numbered from 1."""
        def rows():
            for user, dataset in enumerate(datasets, start=1):
                for x, y in zip(dataset.x, dataset.y):
                    yield user, float(x), float(y)
        return self._write("dataset.csv", DATASET_COLUMNS, rows())

    def write_bounds(self, report: LeCamReport) -> Path:
        return self._write(
            "bounds.csv", BOUNDS_COLUMNS,
            [[report.lambda_, report.tv_sum, report.bound, report.holds]],
        )
