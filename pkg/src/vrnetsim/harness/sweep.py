"""Parameter sweeps over seeds and algorithms."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from vrnetsim.harness.config import ExperimentConfig
from vrnetsim.harness.experiment import RunRecord, run_experiment

AXES = ("num_sbs", "num_users", "backhaul_rate", "sigma_max_scale", "period")
SWEEP_COLUMNS = ("axis", "value", "algorithm", "metric", "mean", "std", "num_seeds")


@dataclass
class SweepPoint:
    axis: str
    value: float
    algorithm: str
    metric: str
    mean: float
    std: float
    samples: list[float] = field(default_factory=list)

    @property
    def row(self) -> tuple:
        return (self.axis, self.value, self.algorithm, self.metric, self.mean, self.std,
                len(self.samples))


def _cast(axis: str, value):
    return int(value) if axis in ("num_sbs", "num_users", "period") else float(value)


def _job(args):
    config, algorithm, seed = args
    return run_experiment(config, algorithm, seed)


def _run_all(jobs, workers: int) -> list[RunRecord]:
    if workers <= 1:
        return [_job(j) for j in jobs]
    with ProcessPoolExecutor(workers) as pool:
        return list(pool.map(_job, jobs))


def sweep(config: ExperimentConfig, axis: str, values, algorithms, seeds,
          workers: int = 1) -> tuple[list[SweepPoint], list[RunRecord]]:
    """Mean and standard deviation over seeds for every (value, algorithm).

    Along ``period`` the metric is the convergence iteration at that period,
    taken from one run per seed covering the largest requested period. On the
    other axes it is the network total success probability.

    Returns:
        The aggregate points and every run record they were computed from.
    """
    if axis not in AXES:
        raise ValueError(f"unknown axis {axis!r}; pick one of {', '.join(AXES)}")
    values = [_cast(axis, v) for v in values]
    seeds = list(seeds)
    if axis == "period":
        cfg = config.replace(num_periods=max(config.num_periods, max(values)))
        configs = {v: cfg for v in values}
    else:
        configs = {v: config.replace(**{axis: v}) for v in values}
    jobs, keys = [], []
    seen = {}
    for v in values:
        for algo in algorithms:
            for s in seeds:
                cfg = configs[v]
                ident = (cfg.config_hash(), algo, s)
                if ident not in seen:
                    seen[ident] = len(jobs)
                    jobs.append((cfg, algo, s))
                keys.append((v, algo, seen[ident]))
    records = _run_all(jobs, workers)

    points = []
    for v in values:
        for algo in algorithms:
            idx = [i for (vv, a, i) in keys if vv == v and a == algo]
            if axis == "period":
                metric = "convergence_iter"
                samples = [records[i].convergence_at(v) for i in idx]
            else:
                metric = "total_utility"
                samples = [records[i].total_utility for i in idx]
            arr = np.asarray(samples, dtype=float)
            points.append(SweepPoint(axis, v, algo, metric, float(arr.mean()), float(arr.std()),
                                     samples))
    return points, records
