"""Invariant suites run by ``cvtda verify`` and ``cvtda gates``.

Every suite returns a :class:`SuiteResult` carrying pass/fail, the largest
deviation seen and one entry per individual check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sps
from scipy.linalg import expm

from . import fockgates as fg
from .cvsim import exact_evolution, trace_distance, trotterized_evolution
from .fixtures import all_fixtures
from .geometry import PointCloud, pairwise_sq_distances
from .homology import (
    BoundaryMatrix,
    betti_numbers,
    boundary_matrices,
    chain_defect,
    dirac_square_defect,
    kernel_count,
    laplacian,
)
from .rips import enumerate_vr
from .statevector import derive_distance_operator, grover_success_curve

__all__ = [
    "SuiteResult",
    "random_corpus",
    "mutate_sign",
    "chain_complex_suite",
    "dirac_square_suite",
    "betti_fixture_suite",
    "distance_operator_suite",
    "grover_suite",
    "trotter_suite",
    "appendix_suite",
    "APPENDIX_T_VALUES",
]

APPENDIX_T_VALUES = (0.0, 0.3, -0.3, 0.7, -0.7, math.pi / 4, -math.pi / 4, math.pi / 2, -math.pi / 2, 1.5, -1.5)
GATE_TOL = 1e-10


@dataclass
class SuiteResult:
    name: str
    passed: bool
    max_deviation: float
    tolerance: float
    checks: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "max_deviation": self.max_deviation,
            "tolerance": self.tolerance,
            "checks": self.checks,
        }


def _finish(name: str, checks: list[dict], tol: float, passed: bool | None = None) -> SuiteResult:
    worst = max((c["deviation"] for c in checks), default=0.0)
    if passed is None:
        passed = all(c["passed"] for c in checks)
    return SuiteResult(name, bool(passed), float(worst), tol, checks)


def random_corpus(count: int = 100, max_n: int = 10, seed: int = 0) -> list[tuple[PointCloud, float]]:
    """Random clouds of 1..max_n points with a random scale up to their diameter."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(1, max_n + 1))
        d = int(rng.integers(1, 5))
        pc = PointCloud(rng.normal(size=(n, d)))
        diam = math.sqrt(float(pairwise_sq_distances(pc).max())) or 1.0
        out.append((pc, float(rng.uniform(0.0, 1.1 * diam))))
    return out


def mutate_sign(boundaries: list[BoundaryMatrix]) -> list[BoundaryMatrix]:
    """Flip the sign of one stored entry of the first boundary map above ``d_1``."""
    out = list(boundaries)
    for idx in range(1, len(out)):
        bm = out[idx]
        if bm.matrix.nnz:
            mat = sps.csc_array(bm.matrix, copy=True)
            mat.data[0] = -mat.data[0]
            out[idx] = BoundaryMatrix(bm.k, bm.rows, bm.cols, mat)
            break
    return out


def _corpus_complexes(corpus):
    for i, (pc, eps) in enumerate(corpus):
        yield f"random{i}", enumerate_vr(pairwise_sq_distances(pc), eps)
    for fx in all_fixtures():
        yield fx.name, enumerate_vr(pairwise_sq_distances(fx.cloud), fx.epsilon)


def chain_complex_suite(corpus=None, mutate: bool = False) -> SuiteResult:
    corpus = random_corpus() if corpus is None else corpus
    checks = []
    for name, vr in _corpus_complexes(corpus):
        bms = boundary_matrices(vr)
        if mutate:
            bms = mutate_sign(bms)
        dev = chain_defect(bms)
        checks.append({"case": name, "epsilon": vr.epsilon, "deviation": float(dev), "passed": dev == 0})
    return _finish("chain-complex", checks, 0.0)


def dirac_square_suite(corpus=None) -> SuiteResult:
    corpus = random_corpus() if corpus is None else corpus
    checks = []
    for name, vr in _corpus_complexes(corpus):
        dev = dirac_square_defect(vr)
        checks.append({"case": name, "epsilon": vr.epsilon, "deviation": float(dev), "passed": dev == 0})
    return _finish("dirac-square", checks, 0.0)


def betti_fixture_suite() -> SuiteResult:
    """Exact rank count, eigenvalue count and known values agree on every fixture."""
    checks = []
    for fx in all_fixtures():
        vr = enumerate_vr(pairwise_sq_distances(fx.cloud), fx.epsilon)
        exact = betti_numbers(vr, 2, check=False).betti
        spectral = tuple(kernel_count(laplacian(vr, k)) if k <= vr.n - 1 else 0 for k in range(3))
        ok = exact == spectral == fx.betti
        dev = max(abs(a - b) for a, b in zip(exact + spectral, fx.betti * 2))
        checks.append(
            {
                "case": fx.name,
                "expected": list(fx.betti),
                "exact": list(exact),
                "spectral": list(spectral),
                "deviation": float(dev),
                "passed": ok,
            }
        )
    return _finish("betti-fixtures", checks, 0.0)


def distance_operator_suite(count: int = 50, seed: int = 1, tol: float = 1e-10) -> SuiteResult:
    rng = np.random.default_rng(seed)
    checks = []
    for i in range(count):
        n = int(rng.integers(1, 9))
        d = int(rng.integers(1, 5))
        pc = PointCloud(rng.normal(size=(n, d)))
        dev = float(np.abs(derive_distance_operator(pc) - pairwise_sq_distances(pc)).max())
        checks.append({"case": f"random{i}", "n": n, "deviation": dev, "passed": dev <= tol})
    return _finish("distance-operator", checks, tol)


def grover_suite(max_n: int = 10, max_r: int = 20, seed: int = 2, tol: float = 1e-10) -> SuiteResult:
    """Simulated success probability against ``sin^2((2r+1) asin sqrt(M/N))``."""
    rng = np.random.default_rng(seed)
    checks = []
    r = np.arange(max_r + 1)
    for n in range(1, max_n + 1):
        N = 2**n
        masks = np.zeros((N, N), dtype=bool)
        for M in range(1, N + 1):
            masks[M - 1, rng.choice(N, size=M, replace=False)] = True
        simulated = grover_success_curve(n, masks, max_r)
        theta = np.arcsin(np.sqrt(np.arange(1, N + 1) / N))
        closed = np.sin((2 * r[None, :] + 1) * theta[:, None]) ** 2
        worst = float(np.abs(simulated - closed).max())
        checks.append({"case": f"n={n}", "deviation": worst, "passed": worst <= tol})
    return _finish("grover-closed-form", checks, tol)


def _trotter_generators() -> list[tuple[str, np.ndarray, np.ndarray]]:
    rng = np.random.default_rng(3)
    plus = np.full((2, 2), 0.5, dtype=complex)
    G = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    A4 = G @ G.conj().T
    A4 /= np.trace(A4).real
    v = rng.normal(size=4) + 1j * rng.normal(size=4)
    v /= np.linalg.norm(v)
    return [
        ("dim2", np.diag([1.0, 0.0]).astype(complex), plus),
        ("dim4", A4, np.outer(v, v.conj())),
    ]


def trotter_suite(t: float = 1.0, p_R: float = 1.0, halvings: int = 10, band: float = 0.3) -> SuiteResult:
    """Error ratio between successive step halvings, over about three decades of ``delta_t``."""
    checks = []
    for name, A, rho in _trotter_generators():
        tr = float(np.trace(A).real)
        exact = exact_evolution(rho, A, p_R, t)
        errors, dts = [], []
        for j in range(halvings + 1):
            dt = t * tr / (10 * 2**j)
            dts.append(dt)
            errors.append(trace_distance(trotterized_evolution(rho, A, p_R, t, dt), exact))
        ratios = [a / b for a, b in zip(errors, errors[1:])]
        dev = max(abs(r - 2.0) for r in ratios)
        checks.append(
            {
                "case": name,
                "delta_t": dts,
                "errors": errors,
                "ratios": ratios,
                "deviation": dev,
                "passed": dev <= band,
            }
        )
    return _finish("trotter-convergence", checks, band)


def _haar_vector(rng, dim: int) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def appendix_case(t_pR: float, pairs: int, n_max: int, seed: int = 4, reverse: bool = False) -> dict:
    """Circuit vs ``cos(t)I + i sin(t)S`` for one parameter value."""
    space = fg.FockSpace.for_qubits(2 * pairs + 1, n_max)
    qs = [space.qubit(i) for i in range(2 * pairs)]
    anc = space.qubit(2 * pairs)
    pair_list = [(qs[2 * i], qs[2 * i + 1]) for i in range(pairs)]
    gate = fg.exp_cond_swap(t_pR, pair_list, anc, space, reverse=reverse)
    act = fg.logical_action(gate, space, qs, anc)
    S = fg.swap_matrix(pairs)
    target = math.cos(t_pR) * np.eye(len(S)) + 1j * math.sin(t_pR) * S
    dev = float(np.abs(act.block - target).max())
    spectral_dev = float(np.abs(expm(1j * t_pR * S) - target).max())
    rng = np.random.default_rng(seed)
    rho = fg.ancilla_reduced_state(gate, space, qs, anc, _haar_vector(rng, len(S)))
    purity = float(np.real(np.trace(rho @ rho)))
    anc_dev = float(np.abs(rho - np.diag([1.0, 0.0])).max())
    return {
        "t_pR": t_pR,
        "pairs": pairs,
        "n_max": n_max,
        "deviation": max(dev, act.ancilla_leak, act.leakage, spectral_dev),
        "circuit_deviation": dev,
        "ancilla_leak": act.ancilla_leak,
        "leakage": act.leakage,
        "ancilla_purity": purity,
        "ancilla_deviation": anc_dev,
        "unitarity": gate.factor_unitarity_error(),
    }


def _two_qubit_checks(n_max: int) -> list[dict]:
    space = fg.FockSpace.for_qubits(3, n_max)
    i, j, anc = space.qubit(0), space.qubit(1), space.qubit(2)
    swap = fg.swap_matrix(1)
    czm = np.diag([1.0, 1.0, 1.0, -1.0])
    out = []
    for label, gate, target, ancilla in [
        ("swap_via_cz", fg.swap_via_cz(i, j, space), swap, None),
        ("cz_via_ancilla", fg.cz_via_ancilla(i, j, anc, space), czm, anc),
        ("cnot", fg.cnot(i, j, space), np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]), None),
        ("cz", fg.cz(i, j, space), czm, None),
    ]:
        act = fg.logical_action(gate, space, [i, j], ancilla)
        dev = max(float(np.abs(act.block - target).max()), act.ancilla_leak, act.leakage)
        out.append({"case": f"{label}/n_max={n_max}", "deviation": dev, "passed": dev <= GATE_TOL})
    return out


def appendix_suite(
    t_values=APPENDIX_T_VALUES, pair_counts=(1, 2), n_max_values=(1, 2), tol: float = GATE_TOL
) -> SuiteResult:
    checks = []
    for n_max in n_max_values:
        checks += _two_qubit_checks(n_max)
        for pairs in pair_counts:
            for t in t_values:
                case = appendix_case(t, pairs, n_max)
                case["passed"] = (
                    case["deviation"] <= tol
                    and case["ancilla_purity"] >= 1 - tol
                    and case["unitarity"] <= tol
                )
                case["case"] = f"t={t:.4f}/pairs={pairs}/n_max={n_max}"
                checks.append(case)
    # reversing the conjugation must break the identity
    neg = appendix_case(0.7, 1, max(n_max_values), reverse=True)
    checks.append(
        {
            "case": "negative-control/reversed-order",
            "deviation": 0.0,
            "reversed_deviation": neg["circuit_deviation"],
            "passed": neg["circuit_deviation"] > 0.1,
        }
    )
    return _finish("appendix-gates", checks, tol)
