"""End-to-end runs: scale sweep with exact and simulated Betti numbers, and verification."""
from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from . import verification as ver
from .cvsim import (
    auto_params,
    eigendecompose,
    estimate_betti,
    sample_homodyne,
    sector_distribution,
)
from .errors import ConfigError
from .geometry import PointCloud, load_point_cloud, normalize_to_unit_sphere, pairwise_sq_distances
from .homology import betti_exact, dirac_operator
from .rips import enumerate_vr, scale_grid
from .statevector import prepare_vr_state

__all__ = ["RunConfig", "RunReport", "run_pipeline", "run_verification", "run_gates", "write_report"]

MODES = ("pure", "mixed")
DEFAULT_KMAX = 3
DISCREPANCY_TOL = 0.05


@dataclass
class RunConfig:
    """Everything needed to reproduce a run.  ``None`` phase-estimation values mean "auto"."""

    input: str | None = None
    format: str | None = None
    normalize: bool = False
    m: int | None = None
    epsilons: list[float] | None = None
    kmax: int | None = None
    mode: str = "mixed"
    s: float | None = None
    gamma: float | None = None
    alpha: float = 1.0
    window: float | None = None
    samples: int = 0
    seed: int = 0
    grover: bool = True
    out: str | None = None
    workers: int = 1
    mutate_sign: bool = False

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def to_dict(self) -> dict:
        return asdict(self)

    def validate(self, n: int | None = None) -> None:
        if (self.m is None) == (self.epsilons is None):
            raise ConfigError("give exactly one of m and an explicit epsilon list")
        if self.m is not None and self.m < 1:
            raise ConfigError("m must be at least 1")
        if self.epsilons is not None:
            if not self.epsilons:
                raise ConfigError("epsilon list is empty")
            if any(not (e > 0 and math.isfinite(e)) for e in self.epsilons):
                raise ConfigError("epsilons must be positive and finite")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}")
        if self.samples < 0:
            raise ConfigError("samples must be non-negative")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        for name in ("s", "gamma", "window"):
            val = getattr(self, name)
            if val is not None and not val > 0:
                raise ConfigError(f"{name} must be positive or auto")
        if n is not None and self.kmax is not None and not 0 <= self.kmax <= n - 1:
            raise ConfigError(f"kmax must lie in [0, {n - 1}] for {n} points")

    def grid(self) -> list[float]:
        return scale_grid(self.m) if self.m is not None else [float(e) for e in self.epsilons]


@dataclass
class RunReport:
    config: dict
    n: int = 0
    records: list[dict] = field(default_factory=list)
    betti: list[dict] = field(default_factory=list)
    params: list[dict] = field(default_factory=list)
    discrepancies: list[dict] = field(default_factory=list)
    suites: dict = field(default_factory=dict)
    timing: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(s["passed"] for s in self.suites.values())

    def to_json(self) -> dict:
        """Deterministic content; wall-clock timing is kept out and written separately."""
        return {
            "config": self.config,
            "n": self.n,
            "records": self.records,
            "betti": self.betti,
            "params": self.params,
            "discrepancies": self.discrepancies,
            "suites": self.suites,
            "passed": self.passed,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, data: dict | str) -> "RunReport":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(
            config=data["config"],
            n=data["n"],
            records=data["records"],
            betti=data["betti"],
            params=data["params"],
            discrepancies=data["discrepancies"],
            suites=data["suites"],
        )


def _load(config: RunConfig) -> PointCloud:
    if config.input is None:
        raise ConfigError("no input point cloud given")
    pc = load_point_cloud(config.input, config.format)
    return normalize_to_unit_sphere(pc) if config.normalize else pc


def _fmt_eps(eps: float) -> str:
    return f"{eps:.6g}"


def _scale_job(D: np.ndarray, eps: float, kmax: int, config: RunConfig) -> dict:
    """All work for one scale: complex, operator, exact and simulated Betti numbers."""
    n = D.shape[0]
    # one dimension beyond kmax so that every reported Laplacian is complete
    vr = enumerate_vr(D, eps, min(kmax + 1, n - 1))
    eig = eigendecompose(dirac_operator(vr), alpha=config.alpha)
    params = auto_params(eig, s=config.s, gamma=config.gamma, window=config.window)
    state, success = prepare_vr_state(vr, grover=config.grover)
    q = params.q_grid()
    records, tables = [], {}
    for k in range(kmax + 1):
        size = vr.count(k) if k <= vr.kmax else 0
        rec = {
            "epsilon": eps,
            "k": k,
            "size": size,
            "beta_exact": 0,
            "beta_mixed": 0.0,
            "beta_pure": 0.0,
            "mass_mixed": 0.0,
            "mass_pure": 0.0,
            "eigen_count": 0,
            "eigen_check": True,
            "grover_success": success.get(k) if config.grover else None,
        }
        if config.samples:
            rec["beta_sampled"] = 0.0
        if size:
            exact = betti_exact(vr, k)
            mixed = sector_distribution(eig, k, params, "mixed")
            pure = sector_distribution(eig, k, params, "pure", state)
            em = estimate_betti(mixed, k, vr, params, "mixed", exact=exact)
            ep = estimate_betti(pure, k, vr, params, "pure", exact=exact)
            count = eig.kernel_dimension(k)
            rec.update(
                beta_exact=exact,
                beta_mixed=em.estimate,
                beta_pure=ep.estimate,
                mass_mixed=em.mass,
                mass_pure=ep.mass,
                eigen_count=count,
                eigen_check=count == exact,
            )
            if config.samples:
                chosen = mixed if config.mode == "mixed" else pure
                draws = sample_homodyne(chosen, config.samples, config.seed + 1000 * k)
                rec["beta_sampled"] = estimate_betti(draws, k, vr, params, config.mode).estimate
            tables[k] = (mixed.pdf(q), pure.pdf(q))
        rec["beta_estimate"] = rec["beta_mixed"] if config.mode == "mixed" else rec["beta_pure"]
        records.append(rec)
    return {
        "epsilon": eps,
        "records": records,
        "params": {"epsilon": eps, **params.to_json()},
        "q": q,
        "tables": tables,
    }


def _run_scale(args):
    D, eps, kmax, config = args
    try:
        return _scale_job(D, eps, kmax, config)
    except Exception as exc:
        try:
            wrapped = type(exc)(f"at eps={_fmt_eps(eps)}: {exc}")
        except Exception:
            raise exc
        raise wrapped from exc


def run_pipeline(config: RunConfig, cloud: PointCloud | None = None) -> RunReport:
    """Sweep the scale grid and collect exact and simulated Betti numbers.

    ``cloud`` bypasses file loading.  When ``config.out`` is set the report,
    per-scale distribution tables, the resolved config and timings are
    written there.
    """
    config.validate()
    start = time.perf_counter()
    pc = cloud if cloud is not None else _load(config)
    if cloud is not None and config.normalize:
        pc = normalize_to_unit_sphere(pc)
    config.validate(pc.n)
    kmax = config.kmax if config.kmax is not None else min(DEFAULT_KMAX, pc.n - 1)
    D = pairwise_sq_distances(pc)
    jobs = [(D, eps, kmax, config) for eps in config.grid()]
    if config.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_run_scale, jobs))
    else:
        results = [_run_scale(job) for job in jobs]

    resolved = config.to_dict()
    resolved["kmax"] = kmax
    report = RunReport(config=resolved, n=pc.n)
    for res in results:
        report.records += res["records"]
        report.params.append(res["params"])
        report.betti.append({"epsilon": res["epsilon"], "betti": [r["beta_exact"] for r in res["records"]]})
    report.discrepancies = [
        {
            "epsilon": r["epsilon"],
            "k": r["k"],
            "beta_exact": r["beta_exact"],
            "beta_mixed": r["beta_mixed"],
            "beta_pure": r["beta_pure"],
            "gap": r["beta_pure"] - r["beta_mixed"],
        }
        for r in report.records
        if abs(r["beta_pure"] - r["beta_mixed"]) > DISCREPANCY_TOL
    ]
    report.timing = {"total_seconds": time.perf_counter() - start, "scales": len(jobs)}
    if config.out is not None:
        write_report(report, config.out, results)
    return report


def _write_tables(out: Path, results: list[dict]) -> None:
    for res in results:
        q = res["q"]
        for k, (mixed, pure) in sorted(res["tables"].items()):
            lines = ["q_R\tP_mixed\tP_pure"]
            lines += [f"{a:.10g}\t{b:.10g}\t{c:.10g}" for a, b, c in zip(q, mixed, pure)]
            path = out / f"dist_eps{_fmt_eps(res['epsilon'])}_k{k}.tsv"
            path.write_text("\n".join(lines) + "\n")


def write_report(report: RunReport, out: str | Path, results: list[dict] | None = None) -> Path:
    """Write ``report.json``, ``config.json``, ``timing.json`` and distribution tables."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(report.dumps())
    (out / "config.json").write_text(json.dumps(report.config, indent=2, sort_keys=True) + "\n")
    (out / "timing.json").write_text(json.dumps(report.timing, indent=2, sort_keys=True) + "\n")
    if results:
        _write_tables(out, results)
    return out


def _timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    res = fn(*args, **kwargs)
    return res, time.perf_counter() - t0


def run_gates(config: RunConfig | None = None) -> RunReport:
    """Dual-rail gate identity sweep only."""
    config = config or RunConfig()
    report = RunReport(config=config.to_dict())
    res, secs = _timed(ver.appendix_suite)
    report.suites[res.name] = res.to_json()
    report.timing[res.name] = secs
    if config.out is not None:
        write_report(report, config.out)
    return report


def run_verification(config: RunConfig | None = None) -> RunReport:
    """Run every invariant suite; ``report.passed`` is false if any fails."""
    config = config or RunConfig()
    corpus = ver.random_corpus(seed=config.seed)
    suites = [
        (ver.chain_complex_suite, (corpus,), {"mutate": config.mutate_sign}),
        (ver.dirac_square_suite, (corpus,), {}),
        (ver.betti_fixture_suite, (), {}),
        (ver.distance_operator_suite, (), {}),
        (ver.grover_suite, (), {}),
        (ver.trotter_suite, (), {}),
        (ver.appendix_suite, (), {}),
    ]
    report = RunReport(config=config.to_dict())
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            futures = [pool.submit(_timed, fn, *args, **kw) for fn, args, kw in suites]
            outcomes = [f.result() for f in futures]
    else:
        outcomes = [_timed(fn, *args, **kw) for fn, args, kw in suites]
    for res, secs in outcomes:
        report.suites[res.name] = res.to_json()
        report.timing[res.name] = secs
    if config.out is not None:
        write_report(report, config.out)
    return report
