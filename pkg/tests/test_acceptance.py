"""Acceptance criteria, each run at its stated tolerance and time budget.

Every test prints one ``criterion N: PASS|FAIL`` line. Run with
``pytest tests/test_acceptance.py -v`` (about 8 minutes on one core).
"""

import functools
import time

import numpy as np
import pytest

from vrnetsim.correlation import Format, ViewState, choose_format, overlap_sets, visible_union_size
from vrnetsim.harness import ExperimentConfig, run_experiment, sweep
from vrnetsim.harness.io import to_csv
from vrnetsim.learning import EsnAgent, LearningRate
from vrnetsim.qos import SlotHistory, gain_downlink_rbs, gain_format_change, gain_uplink_rbs

SEEDS = range(20)
DESK = ExperimentConfig(num_sbs=5, num_users=25, num_periods=10, num_iterations=1000, seed=0)


@pytest.fixture(autouse=True)
def no_seed_env(monkeypatch):
    monkeypatch.delenv("VRNETSIM_SEED", raising=False)


def report(capsys, number, ok, detail, elapsed, budget):
    in_time = elapsed < budget
    verdict = "PASS" if ok and in_time else "FAIL"
    with capsys.disabled():
        print(f"\ncriterion {number}: {verdict} ({detail}; {elapsed:.1f}s of {budget:.0f}s)")
    assert ok, detail
    assert in_time, f"took {elapsed:.1f}s, budget {budget}s"


@functools.lru_cache(maxsize=None)
def desk_runs(algorithm):
    return tuple(run_experiment(DESK, algorithm, s) for s in SEEDS)


def test_criterion_1_format_threshold(capsys):
    t0 = time.perf_counter()
    got = {la: choose_format(50e6, la * 1e6)[0] for la in (12, 24, 36, 48, 50, 52, 60)}
    want = {la: Format.VISIBLE_120 if la <= 50 else Format.FULL_360 for la in got}
    elapsed = time.perf_counter() - t0
    detail = ", ".join(f"{la}:{'120' if f is Format.VISIBLE_120 else '360'}" for la, f in got.items())
    report(capsys, 1, got == want, detail, elapsed, 1)


def test_criterion_2_inclusion_exclusion_oracle(capsys):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    g120 = 12e6
    grid = (np.arange(10**5) + 0.5) * 360.0 / 10**5
    worst = 0.0
    for _ in range(500):
        n = int(rng.integers(1, 7))
        views = [ViewState(0, float(c)) for c in rng.uniform(0, 360, n)]
        la = visible_union_size(overlap_sets(views), g120)
        covered = np.zeros(grid.size, dtype=bool)
        for v in views:
            covered |= ((grid - v.start) % 360.0) < v.view_width
        oracle = covered.mean() * 360.0 / 120.0 * g120
        worst = max(worst, abs(la - oracle) / oracle)
    elapsed = time.perf_counter() - t0
    report(capsys, 2, worst <= 0.01, f"worst relative error {worst:.2e}", elapsed, 10)


def test_criterion_3_gain_formulas_equal_direct_difference(capsys):
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    mismatches = 0
    for _ in range(100):
        t = 1000
        h = SlotHistory(
            dl_rate=np.where(rng.random(t) < 0.05, 0.0, rng.uniform(0.2e6, 3e6, t)),
            ul_rate=np.where(rng.random(t) < 0.05, 0.0, rng.uniform(5e3, 3e5, t)),
            tracking_bits=rng.uniform(100, 1000), g120=12e3,
            backhaul_payload=rng.uniform(12e3, 50e3, t), requesters=rng.integers(1, 4, t),
            per_user_backhaul=rng.uniform(2e6, 2e7), gamma_d=0.02)
        base = h.successes().sum()
        d_ul, d_dl = rng.uniform(0, 2e5), rng.uniform(0, 2e6)
        m120, m360 = rng.uniform(12e3, 60e3), 50e3
        small, large = min(m120, m360), max(m120, m360)
        pairs = [
            (gain_uplink_rbs(h, d_ul), (h.successes(ul_rate=h.ul_rate + d_ul).sum() - base) / t),
            (gain_downlink_rbs(h, d_dl), (h.successes(dl_rate=h.dl_rate + d_dl).sum() - base) / t),
            (gain_format_change(h, m120, m360),
             (h.successes(payload=np.full(t, small)).sum()
              - h.successes(payload=np.full(t, large)).sum()) / t),
        ]
        mismatches += sum(a != b for a, b in pairs)
    elapsed = time.perf_counter() - t0
    report(capsys, 3, mismatches == 0, f"{mismatches} mismatches in 300 comparisons", elapsed, 30)


def _updates_to_converge(rate):
    agent = EsnAgent(8, 6, np.random.default_rng(4), lam=rate)
    targets = np.linspace(0.5, 4.0, 8)
    x = np.array([0.2, 0.8, 0.4, 0.6, 0.1, 0.3])
    rng = np.random.default_rng(5)
    for t in range(1, 5001):
        agent.update_state(x)
        k = int(rng.integers(8))
        agent.train_utility(k, targets[k])
        if np.max(np.abs(agent.predict() - targets)) < 1e-2:
            return t
    return None


def test_criterion_4_supervised_convergence(capsys):
    t0 = time.perf_counter()
    const = _updates_to_converge(LearningRate(0.3))
    rm = _updates_to_converge(LearningRate(0.3, tau=1000.0))
    elapsed = time.perf_counter() - t0
    ok = const is not None and rm is not None
    report(capsys, 4, ok, f"constant rate: {const} updates, Robbins-Monro: {rm} updates", elapsed, 5)


def test_criterion_5_echo_state_contraction(capsys):
    t0 = time.perf_counter()
    rng = np.random.default_rng(11)
    a = EsnAgent(4, 6, np.random.default_rng(1), w=0.5)
    b = EsnAgent(4, 6, np.random.default_rng(1), w=0.5)
    a.state = rng.uniform(-1, 1, 100)
    b.state = rng.uniform(-1, 1, 100)
    initial = np.linalg.norm(a.state - b.state)
    for _ in range(200):
        x = rng.random(6)
        a.update_state(x)
        b.update_state(x)
    final = np.linalg.norm(a.state - b.state)
    elapsed = time.perf_counter() - t0
    bound = 0.5**200 * initial + 1e-9
    report(capsys, 5, final <= bound, f"distance {final:.3e} <= {bound:.3e}", elapsed, 1)


def test_criterion_6_algorithm_ordering(capsys):
    t0 = time.perf_counter()
    means = {a: np.mean([r.total_utility for r in desk_runs(a)])
             for a in ("EsnTransfer", "QCorr", "QNoCorr")}
    elapsed = time.perf_counter() - t0
    esn, qc, qn = means["EsnTransfer"], means["QCorr"], means["QNoCorr"]
    ok = esn >= qc >= qn and esn >= 1.05 * qc
    detail = (f"EsnTransfer {esn:.4f} >= QCorr {qc:.4f} >= QNoCorr {qn:.4f}, "
              f"ESN/QCorr {esn / qc:.3f}")
    report(capsys, 6, ok, detail, elapsed, 600)


def test_criterion_7_transfer_speedup(capsys):
    t0 = time.perf_counter()
    ratios = {}
    for algo in ("EsnTransfer", "QCorr"):
        runs = desk_runs(algo)
        p1 = np.mean([r.convergence_at(1) for r in runs])
        p3 = np.mean([r.convergence_at(3) for r in runs])
        ratios[algo] = (p3 / p1, p1, p3)
    elapsed = time.perf_counter() - t0
    esn, q = ratios["EsnTransfer"][0], ratios["QCorr"][0]
    ok = esn <= 0.85 and 0.9 <= q <= 1.1
    detail = ", ".join(f"{a} period3/period1 = {r:.3f} ({p3:.1f}/{p1:.1f})"
                       for a, (r, p1, p3) in ratios.items())
    report(capsys, 7, ok, detail, elapsed, 600)


SWEEP_BASE = DESK.replace(num_periods=3)
BACKHAUL_GRID = [0.05e9, 0.1e9, 0.2e9, 0.4e9]
ALL = ["EsnTransfer", "EsnNoCorr", "QCorr", "QNoCorr"]


def _curves(points):
    out = {}
    for p in points:
        out.setdefault(p.algorithm, []).append(p.mean)
    return {a: np.array(v) for a, v in out.items()}


def test_criterion_8_monotone_sweeps(capsys):
    t0 = time.perf_counter()
    sbs = _curves(sweep(SWEEP_BASE, "num_sbs", [3, 5, 7, 9], ALL, SEEDS)[0])
    bh = _curves(sweep(SWEEP_BASE, "backhaul_rate", BACKHAUL_GRID, ALL, SEEDS)[0])
    elapsed = time.perf_counter() - t0
    sbs_ok = all(np.all(np.diff(c) >= 0) for c in sbs.values())
    bh_ok = all(np.all(np.diff(c) >= 0) for c in bh.values())
    gap = bh["EsnTransfer"] - bh["QCorr"]
    gap_ok = bool(np.all(np.diff(gap) <= 0))
    detail = (f"num_sbs monotone {sbs_ok}; backhaul monotone {bh_ok}; "
              f"gap non-increasing {gap_ok}; "
              + "; ".join(f"{a} sbs {np.round(sbs[a], 3).tolist()} bh {np.round(bh[a], 3).tolist()}"
                          for a in ALL)
              + f"; ESN-QCorr gap over backhaul {np.round(gap, 3).tolist()}")
    report(capsys, 8, sbs_ok and bh_ok and gap_ok, detail, elapsed, 1200)


def test_criterion_9_determinism(capsys):
    t0 = time.perf_counter()
    first = to_csv([run_experiment(DESK, "EsnTransfer", 123)]).encode()
    second = to_csv([run_experiment(DESK, "EsnTransfer", 123)]).encode()
    elapsed = time.perf_counter() - t0
    report(capsys, 9, first == second, f"{len(first)} CSV bytes identical: {first == second}",
           elapsed, 60)
