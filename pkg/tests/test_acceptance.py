"""Acceptance criteria, each run at its stated tolerance.

Every test records its outcome through the ``criterion`` fixture so the run
ends with one PASS/FAIL line per criterion.
"""
import math
import time

import numpy as np
import pytest

from cvtda import verification as ver
from cvtda.cvsim import gaussian_mixture, is_bimodal
from cvtda.fixtures import all_fixtures, circle
from cvtda.pipeline import RunConfig, run_pipeline


@pytest.fixture(scope="module")
def corpus():
    return ver.random_corpus(count=100, max_n=10, seed=0)


def _timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - t0


def test_chain_complex_identity(corpus, criterion):
    res, secs = _timed(ver.chain_complex_suite, corpus)
    ok = res.passed and res.max_deviation == 0 and len(res.checks) >= 100 and secs < 10
    criterion(1, "chain-complex identity", ok, f"max|dd|={res.max_deviation:g} t={secs:.2f}s")
    assert ok


def test_dirac_square(corpus, criterion):
    res = ver.dirac_square_suite(corpus)
    ok = res.passed and res.max_deviation == 0
    criterion(2, "Dirac square is block Laplacian", ok, f"max dev={res.max_deviation:g}")
    assert ok


def test_betti_ground_truth(criterion):
    res, secs = _timed(ver.betti_fixture_suite)
    ok = res.passed and secs < 30
    detail = " ".join(f"{c['case']}={tuple(c['exact'])}" for c in res.checks)
    criterion(3, "Betti ground truth on fixtures", ok, f"{detail} t={secs:.2f}s")
    assert ok


def test_cv_estimation_fidelity(criterion):
    worst, where = 0.0, ""
    for fx in all_fixtures():
        rep = run_pipeline(RunConfig(epsilons=[fx.epsilon], mode="mixed"), cloud=fx.cloud)
        by_k = {r["k"]: r for r in rep.records}
        for k in range(4):
            # sectors above n - 1 are empty, so the estimate is 0 by construction
            est, exact = (by_k[k]["beta_mixed"], by_k[k]["beta_exact"]) if k in by_k else (0.0, 0)
            if abs(est - exact) >= worst:
                worst, where = abs(est - exact), f"{fx.name}/k={k}"
    ok = worst <= 0.05
    criterion(4, "CV estimation fidelity (mixed, analytic)", ok, f"max err={worst:.2e} at {where}")
    assert ok


def _resolution_threshold(s: float) -> float:
    """Smallest gamma*sqrt(s)*gap at which two equal-weight peaks are resolved."""
    lo, hi = 0.2, 6.0
    sigma = 1 / math.sqrt(2 * s)
    for _ in range(40):
        mid = (lo + hi) / 2
        sep = mid / math.sqrt(s)  # gamma * gap, the peak separation in q_R
        dist = gaussian_mixture([0.0, sep], [0.5, 0.5], s)
        q = np.linspace(-8 * sigma, sep + 8 * sigma, 20001)
        lo, hi = (lo, mid) if is_bimodal(dist, q) else (mid, hi)
    return (lo + hi) / 2


def test_peak_resolution(criterion):
    thresholds = [_resolution_threshold(s) for s in (1.0, 16.0, 100.0)]
    worst = max(abs(t - 2.0) for t in thresholds)
    ok = worst <= 0.2
    criterion(5, "peak resolution threshold 2 +- 0.2", ok, "measured " + ", ".join(f"{t:.4f}" for t in thresholds))
    assert ok, f"bimodality sets in at gamma*sqrt(s)*gap = {thresholds}, not 2"


def test_grover_closed_form(criterion):
    res, secs = _timed(ver.grover_suite, max_n=10, max_r=20, tol=1e-10)
    ok = res.passed and secs < 5
    criterion(6, "Grover closed form", ok, f"max dev={res.max_deviation:.1e} t={secs:.2f}s")
    assert ok


def test_trotter_convergence(criterion):
    res = ver.trotter_suite(halvings=10, band=0.3)
    ratios = [r for c in res.checks for r in c["ratios"]]
    span = max(c["delta_t"][0] / c["delta_t"][-1] for c in res.checks)
    ok = res.passed and span >= 1000
    criterion(7, "Trotter convergence", ok, f"ratios in [{min(ratios):.3f}, {max(ratios):.3f}] over {span:.0f}x")
    assert ok


def test_appendix_identity(criterion):
    res = ver.appendix_suite(pair_counts=(1, 2), n_max_values=(2,), tol=1e-10)
    sweep = [c for c in res.checks if "t_pR" in c]
    purity = min(c["ancilla_purity"] for c in sweep)
    ok = res.passed and purity >= 1 - 1e-10 and len(sweep) == 2 * len(ver.APPENDIX_T_VALUES)
    criterion(8, "exponential conditional swap identity", ok, f"max dev={res.max_deviation:.1e} min purity={purity:.15f}")
    assert ok


def test_distance_operator(criterion):
    res = ver.distance_operator_suite(count=50, tol=1e-10)
    criterion(9, "distance-operator protocol", res.passed, f"max dev={res.max_deviation:.1e}")
    assert res.passed


def test_pure_vs_mixed_reported(criterion):
    fx = circle()
    rep = run_pipeline(RunConfig(epsilons=[fx.epsilon]), cloud=fx.cloud)
    has_both = all("beta_pure" in r and "beta_mixed" in r for r in rep.records)
    gaps = [d for d in rep.discrepancies if abs(d["gap"]) > 0.05]
    ok = has_both and bool(gaps)
    detail = ", ".join(f"k={d['k']}: pure {d['beta_pure']:.3g} vs mixed {d['beta_mixed']:.3g}" for d in gaps[:2])
    criterion(10, "pure vs mixed discrepancy reported", ok, detail)
    assert ok
