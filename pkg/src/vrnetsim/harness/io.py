"""CSV/JSON persistence of run records and empirical CDFs."""

from __future__ import annotations

import bisect
import csv
import io
import json
from pathlib import Path

from vrnetsim.harness.experiment import RunRecord

CSV_COLUMNS = ("seed", "algorithm", "period", "sbs_id", "mean_utility", "convergence_iter",
               "format_360_fraction")


def fmt(x) -> str:
    """Numbers with 9 significant digits; integers and strings as they are."""
    if isinstance(x, float):
        return f"{x:.9g}"
    return str(x)


def csv_rows(records):
    for rec in records:
        for p in rec.periods:
            means = p.mean_utility
            for j in range(len(p.traces)):
                yield (rec.seed, rec.algorithm, p.period, j, float(means[j]),
                       int(p.convergence_iter[j]), float(p.format_360_fraction[j]))


def to_csv(records, columns=CSV_COLUMNS, rows=None) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in csv_rows(records) if rows is None else rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def to_json(records) -> str:
    # repr-based float output round-trips exactly
    return json.dumps([r.to_dict() for r in records], sort_keys=True, indent=1)


def from_json(text: str) -> list[RunRecord]:
    return [RunRecord.from_dict(d) for d in json.loads(text)]


def _write(path, text: str) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc
    return path


def emit(records, format: str, path) -> Path:
    """Write records as ``csv`` (one row per run, SBS and period) or lossless ``json``."""
    if format == "csv":
        return _write(path, to_csv(records))
    if format == "json":
        return _write(path, to_json(records))
    raise ValueError(f"unknown format {format!r}")


def read_json(path) -> list[RunRecord]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror}") from exc
    return from_json(text)


METRICS = {
    "total_utility": lambda r: [r.total_utility],
    "per_user_utility": lambda r: [r.per_user_utility],
    "mean_utility": lambda r: [float(v) for p in r.periods for v in p.mean_utility],
}


def compute_cdf(run_records, metric: str = "total_utility") -> list[tuple[float, float]]:
    """Empirical CDF as ascending ``(value, fraction <= value)`` step points.

    ``run_records`` may also be a plain sequence of numbers.
    """
    samples = []
    for r in run_records:
        samples.extend(METRICS[metric](r) if isinstance(r, RunRecord) else [float(r)])
    if not samples:
        raise ValueError("compute_cdf needs at least one sample")
    samples.sort()
    n = len(samples)
    points = []
    for i, v in enumerate(samples):
        if i + 1 < n and samples[i + 1] == v:
            continue
        points.append((v, (i + 1) / n))
    return points


def cdf_at(points, x: float) -> float:
    """Evaluate a step CDF returned by :func:`compute_cdf` (right-continuous)."""
    values = [v for v, _ in points]
    i = bisect.bisect_right(values, x)
    return 0.0 if i == 0 else points[i - 1][1]
