"""Per-corpus clustering metrics, regression over them, and workload forecasts.

`corpus_stats` condenses one indexed corpus into the standard row:
size, class count, mean/min/max bucket occupancy, dispersion,
penetration rates, detected duplicates, and wall time.
`fit_regression` / `predict_avg` model how the mean occupancy grows
with database size, and `estimate_workload` turns a size and mean
occupancy into expected comparison counts and wall time.

REFERENCE_ROWS carries published benchmark measurements of this index
scheme on the public FVC/NIST corpora; the (size, mean occupancy)
columns of those rows are the standard regression input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cluster import ClusterTable
from .dedup import DuplicateReport

TABLE_COLUMNS = ["FBD", "Size", "Nb class", "Avg.", "Min P.", "Max P.", "Std dev",
                 "Min P. Rate", "Max P. Rate", "Duplicates", "Duration deduplication (s)"]


@dataclass
class CorpusStats:
    """One corpus row in the standard column layout."""

    size: int
    nb_class: int
    avg: float
    min_p: int
    max_p: int
    std_dev: float
    min_rate: float
    max_rate: float
    duplicates: int
    duration_s: float

    def csv_row(self, name: str) -> str:
        return ",".join([
            name, str(self.size), str(self.nb_class), f"{self.avg:.4f}",
            str(self.min_p), str(self.max_p), f"{self.std_dev:.4f}",
            format_rate(self.min_rate), format_rate(self.max_rate),
            str(self.duplicates), f"{self.duration_s:.4f}",
        ])


def format_rate(rate: float) -> str:
    """Percentage with 4 decimals, e.g. 0.003125 -> '0.3125%'."""
    return f"{100.0 * rate:.4f}%"


def corpus_stats(table: ClusterTable,
                 report: DuplicateReport | None = None,
                 duration_s: float = 0.0) -> CorpusStats:
    """Compute the standard metrics row for one indexed corpus.

    ``report`` must come from the same corpus; without one the
    duplicates column is zero.
    """
    if not table.buckets:
        raise ValueError("cannot compute statistics of an empty table")
    sizes = [len(bucket) for bucket in table.buckets.values()]
    size = table.size
    nb_class = len(sizes)
    duplicates = report.duplicate_count() if report is not None else 0
    if duplicates > size - nb_class:
        # Groups never span buckets, so each bucket of c records yields
        # at most c-1 duplicates; a violation means corrupt inputs.
        raise ValueError(
            f"duplicate count {duplicates} exceeds size - nb_class = {size - nb_class}; "
            "table and report disagree"
        )
    return CorpusStats(
        size=size,
        nb_class=nb_class,
        avg=size / nb_class,
        min_p=min(sizes),
        max_p=max(sizes),
        std_dev=float(np.std(sizes)),  # population standard deviation
        min_rate=min(sizes) / size,
        max_rate=max(sizes) / size,
        duplicates=duplicates,
        duration_s=duration_s,
    )


# ---------------------------------------------------------------------------
# Regression of mean bucket occupancy against database size


@dataclass
class RegressionFit:
    slope: float      # occupancy growth per record
    intercept: float


def fit_regression(points: list[tuple[float, float]]) -> RegressionFit:
    """Ordinary least squares fit of Y (mean occupancy) on X (size)."""
    if len(points) < 2:
        raise ValueError("regression needs at least 2 points")
    x = np.array([p[0] for p in points], dtype=np.float64)
    y = np.array([p[1] for p in points], dtype=np.float64)
    if np.all(x == x[0]):
        raise ValueError("regression is degenerate: all X values are equal")
    slope, intercept = np.polyfit(x, y, 1)
    return RegressionFit(float(slope), float(intercept))


def predict_avg(fit: RegressionFit, n: float) -> float:
    """Extrapolated mean bucket occupancy for a database of n records."""
    if n < 0:
        raise ValueError("database size cannot be negative")
    return fit.slope * n + fit.intercept


# ---------------------------------------------------------------------------
# Workload forecast


@dataclass
class WorkloadEstimate:
    classes: float
    comparisons: float
    wall_time_ms: float

    def wall_time_human(self) -> str:
        ms = self.wall_time_ms
        seconds, ms = divmod(ms, 1000.0)
        minutes, seconds = divmod(int(seconds), 60)
        hours, minutes = divmod(minutes, 60)
        return f"{hours}h{minutes:02d}m{seconds:02d}s" + (f"+{ms:g}ms" if ms else "")


def estimate_workload(n: float, avg: float, ms_per_comparison: float) -> WorkloadEstimate:
    """Forecast deduplication work for n records at a given mean occupancy.

    classes = n / avg, each class costs avg*(avg-1)/2 comparisons, and
    wall time is the comparison total times the per-comparison cost.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if avg < 1:
        raise ValueError("avg must be >= 1")
    classes = n / avg
    per_class = avg * (avg - 1) / 2.0
    comparisons = classes * per_class
    return WorkloadEstimate(classes, comparisons, comparisons * ms_per_comparison)


# ---------------------------------------------------------------------------
# Published reference measurements (public FVC/NIST corpora)


@dataclass(frozen=True)
class ReferenceRow:
    name: str
    size: int
    nb_class: int
    avg: float
    min_p: int
    max_p: int
    std_dev: float
    min_rate_pct: float   # printed percentages, 4 decimals
    max_rate_pct: float
    duplicates: int
    duration_s: float


REFERENCE_ROWS: tuple[ReferenceRow, ...] = (
    ReferenceRow("FVC2000", 320, 320, 1.0, 1, 1, 0.0, 0.3125, 0.3125, 0, 0.7191),
    ReferenceRow("FVC2002", 320, 320, 1.0, 1, 1, 0.0, 0.3125, 0.3125, 0, 0.7411),
    ReferenceRow("BDAutres", 1011, 1009, 1.002, 1, 2, 0.0632, 0.0989, 0.1978, 4, 1.7444),
    ReferenceRow("FVC2004", 4001, 3991, 1.0025, 1, 7, 0.1026, 0.0250, 0.1750, 0, 4.6645),
    ReferenceRow("BD10000", 10000, 9986, 1.0014, 1, 5, 0.0566, 0.0100, 0.0500, 2, 10.7835),
    ReferenceRow("BD20000", 20000, 19934, 1.0033, 1, 22, 0.1752, 0.0050, 0.1100, 0, 21.9237),
    ReferenceRow("BD30000", 30000, 29823, 1.0059, 1, 38, 0.2806, 0.0033, 0.1267, 9, 32.7862),
    ReferenceRow("BD40000", 40000, 39791, 1.0053, 1, 36, 0.2591, 0.0025, 0.0900, 12, 45.0318),
    ReferenceRow("BD50000", 50000, 49754, 1.0049, 1, 42, 0.2671, 0.0020, 0.0840, 13, 57.5517),
    ReferenceRow("NIST09", 54000, 53713, 1.0053, 1, 46, 0.2911, 0.0019, 0.0852, 20, 65.2882),
    ReferenceRow("NIST14", 54000, 53740, 1.0048, 1, 43, 0.2697, 0.0019, 0.0796, 15, 65.5147),
    ReferenceRow("BD_GLO", 113609, 112643, 1.0086, 1, 91, 0.4167, 0.0009, 0.0801, 749, 163.2234),
)

# The ten distinct (size, mean occupancy) pairs used for the regression
# study; NIST14 shares its size with NIST09 and FVC2002 with FVC2000, so
# each size appears once.
REFERENCE_SIZE_AVG_PAIRS: tuple[tuple[float, float], ...] = (
    (320, 1.0), (1011, 1.002), (4001, 1.0025), (10000, 1.0014), (20000, 1.0033),
    (30000, 1.0059), (40000, 1.0053), (50000, 1.0049), (54000, 1.0053), (113609, 1.0086),
)
