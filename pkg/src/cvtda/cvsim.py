"""Continuous-variable phase estimation on the Dirac operator.

The homodyne outcome density of the squeezed resource mode is evaluated in
closed form from the spectrum of ``B + alpha*I``: a mixture of Gaussians of
variance ``1/(2s)`` centred at ``gamma * lambda_i`` with weights
``|<e_i|Psi>|**2``.  The exponential-swap primitive used to exponentiate an
operator is simulated separately on density matrices.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import expm
from scipy.integrate import trapezoid
from scipy.special import erf

from .errors import (
    NonSymmetricError,
    OrderingError,
    RegularizationError,
    ResolutionWarning,
    StateError,
)
from .homology import DiracOperator
from .rips import VietorisRipsComplex
from .statevector import QuantumState, TaggedState

__all__ = [
    "PhaseEstimationParams",
    "EigenDecomposition",
    "SpectralDistribution",
    "BettiEstimate",
    "TrotterParams",
    "eigendecompose",
    "auto_params",
    "restrict_state",
    "spectral_distribution",
    "sector_distribution",
    "gaussian_mixture",
    "sample_homodyne",
    "estimate_betti",
    "swap_operator",
    "exp_swap_step",
    "swap_channel",
    "trotter_params",
    "trotterized_evolution",
    "exact_evolution",
    "trace_distance",
    "is_bimodal",
]

# gamma*sqrt(s)*gap chosen by auto_params; puts a neighbouring peak 24
# standard deviations from the kernel peak
RESOLUTION = 24.0
WINDOW_FRACTION = 0.25
POINTS_PER_WIDTH = 10
DENSITY_TOL = 1e-10


@dataclass(frozen=True)
class PhaseEstimationParams:
    """Squeezing ``s``, evolution strength ``gamma`` and spectral shift ``alpha``.

    ``grid`` is ``(q_min, q_max, step)`` for tabulating the density and
    ``window`` the half-width of the kernel-peak integration interval.
    """

    s: float
    gamma: float
    alpha: float = 1.0
    grid: tuple[float, float, float] | None = None
    window: float | None = None

    def __post_init__(self):
        if not self.s > 0:
            raise ValueError(f"squeezing s must be positive, got {self.s}")
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")

    @property
    def sigma(self) -> float:
        """Standard deviation of each homodyne peak in ``q``."""
        return 1.0 / math.sqrt(2.0 * self.s)

    @property
    def kernel_center(self) -> float:
        return self.gamma * self.alpha

    def q_grid(self) -> np.ndarray:
        if self.grid is None:
            raise ValueError("no q grid configured")
        lo, hi, step = self.grid
        count = int(math.floor((hi - lo) / step + 0.5)) + 1
        return lo + step * np.arange(count)

    def to_json(self) -> dict:
        return {
            "s": self.s,
            "gamma": self.gamma,
            "alpha": self.alpha,
            "grid": list(self.grid) if self.grid is not None else None,
            "window": self.window,
        }


@dataclass(frozen=True)
class EigenDecomposition:
    """Spectrum of ``B + alpha*I`` with per-sector weight of each eigenvector.

    ``sector_weights[i, k]`` is the squared norm of eigenvector ``i`` on the
    ``k``-simplex rows.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sector_weights: np.ndarray
    alpha: float
    offsets: tuple[int, ...]
    words: tuple[int, ...]
    n: int
    zero_tol: float

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    def shifted(self) -> np.ndarray:
        """Eigenvalues of ``B`` itself."""
        return self.eigenvalues - self.alpha

    def kernel_mask(self) -> np.ndarray:
        return np.abs(self.shifted()) < self.zero_tol

    def kernel_dimension(self, k: int | None = None) -> int:
        """Zero-eigenvalue count, optionally restricted to sector ``k``.

        The sector count sums sector weights over the kernel, which does not
        depend on how the eigensolver chose a basis inside the eigenspace.
        """
        mask = self.kernel_mask()
        if k is None:
            return int(mask.sum())
        return int(round(float(self.sector_weights[mask, k].sum())))

    def spectral_radius(self) -> float:
        return float(np.abs(self.shifted()).max()) if self.dim else 0.0

    def smallest_gap(self) -> float | None:
        """Smallest non-zero ``|lambda - alpha|``, or ``None`` if ``B = 0``."""
        shifted = np.abs(self.shifted())
        nonzero = shifted[shifted >= self.zero_tol]
        return float(nonzero.min()) if nonzero.size else None

    def residual(self, B) -> float:
        """``max_i |(B + alpha I) e_i - lambda_i e_i|``."""
        M = _dense(B) + self.alpha * np.eye(self.dim)
        R = M @ self.eigenvectors - self.eigenvectors * self.eigenvalues
        return float(np.linalg.norm(R, axis=0).max()) if self.dim else 0.0


def _dense(B) -> np.ndarray:
    if isinstance(B, DiracOperator):
        return B.toarray().astype(float)
    if hasattr(B, "toarray"):
        return B.toarray().astype(float)
    return np.asarray(B, dtype=float)


def eigendecompose(B: DiracOperator | np.ndarray, alpha: float = 1.0) -> EigenDecomposition:
    """Full symmetric eigendecomposition of ``B + alpha*I`` (LAPACK ``syevd``)."""
    M = _dense(B)
    if M.size and np.abs(M - M.T).max() > 1e-12:
        raise NonSymmetricError("operator is not symmetric")
    N = M.shape[0]
    if isinstance(B, DiracOperator):
        offsets, words, n = B.offsets, B.words, B.n
    else:
        offsets, words, n = (0, N), tuple(range(N)), 0
    evals, evecs = np.linalg.eigh(M + alpha * np.eye(N))
    sq = evecs**2
    weights = np.stack(
        [sq[offsets[k] : offsets[k + 1]].sum(axis=0) for k in range(len(offsets) - 1)], axis=1
    ) if N else np.zeros((0, len(offsets) - 1))
    norm = float(np.abs(M).sum(axis=1).max()) if N else 0.0
    return EigenDecomposition(
        evals, evecs, weights, float(alpha), tuple(offsets), tuple(words), n,
        1e-9 * max(1.0, norm),
    )


def auto_params(
    eig: EigenDecomposition,
    s: float | None = None,
    gamma: float | None = None,
    window: float | None = None,
) -> PhaseEstimationParams:
    """Default parameters for an eigendecomposition; explicit values win.

    ``gamma = 1/(alpha + rho)`` with ``rho`` the spectral radius of ``B``;
    ``s`` is set so the smallest non-zero gap spans ``RESOLUTION`` units of
    ``1/(gamma sqrt(s))``; the window is a quarter of that gap in ``q``.
    The tabulation grid always follows the final ``s`` and ``gamma``.
    """
    alpha = eig.alpha
    rho = eig.spectral_radius()
    if gamma is None:
        gamma = 1.0 / (abs(alpha) + rho) if abs(alpha) + rho > 0 else 1.0
    gap = eig.smallest_gap() or 1.0
    if s is None:
        s = (RESOLUTION / (gamma * gap)) ** 2
    if window is None:
        window = WINDOW_FRACTION * gamma * gap
    sigma = 1.0 / math.sqrt(2 * s)
    # the finer of the q-space width 1/sqrt(s) and the 1/(gamma sqrt(s)) scale
    width = 1.0 / (max(1.0, gamma) * math.sqrt(s))
    step = width / POINTS_PER_WIDTH
    lo = gamma * (alpha - rho) - 10 * sigma
    hi = gamma * (alpha + rho) + 10 * sigma
    return PhaseEstimationParams(s=s, gamma=gamma, alpha=alpha, grid=(lo, hi, step), window=window)


def restrict_state(state, eig: EigenDecomposition) -> np.ndarray:
    """Amplitudes of ``state`` on the simplices of the operator, in its row order."""
    if isinstance(state, np.ndarray) and state.ndim == 1:
        if state.shape[0] != eig.dim:
            raise OrderingError(f"state has {state.shape[0]} entries, operator {eig.dim}")
        return state.astype(complex)
    if not isinstance(state, (QuantumState, TaggedState)):
        raise TypeError(f"unsupported state type {type(state).__name__}")
    if state.n != eig.n:
        raise OrderingError(f"state on {state.n} qubits, operator on {eig.n} vertices")
    words = np.array(eig.words, dtype=np.int64)
    if isinstance(state, TaggedState):
        ks = np.repeat(np.arange(len(eig.offsets) - 1), np.diff(eig.offsets))
        vec = state.amplitudes[ks, words]
    else:
        vec = state.amplitudes[words]
    outside = 1.0 - float(np.sum(np.abs(vec) ** 2))
    if outside > DENSITY_TOL:
        raise OrderingError(f"state has weight {outside:.3g} outside the operator's simplices")
    return vec


@dataclass(frozen=True)
class SpectralDistribution:
    """Gaussian-mixture density of the homodyne outcome ``q``.

    The density itself is analytic; ``q`` and ``density`` tabulate it on
    the parameter grid.
    """

    centers: np.ndarray
    weights: np.ndarray
    s: float
    q: np.ndarray
    density: np.ndarray

    @property
    def sigma(self) -> float:
        return 1.0 / math.sqrt(2.0 * self.s)

    def pdf(self, q) -> np.ndarray:
        q = np.asarray(q, dtype=float)
        z = q[..., None] - self.centers
        return np.exp(-self.s * z**2) @ self.weights * math.sqrt(self.s / math.pi)

    def mass(self, lo: float, hi: float) -> float:
        """Exact probability of ``lo <= q <= hi``."""
        root = math.sqrt(self.s)
        cdf = 0.5 * (erf(root * (hi - self.centers)) - erf(root * (lo - self.centers)))
        return float(self.weights @ cdf)

    def integral(self) -> float:
        """Trapezoid integral of the tabulated density."""
        return float(trapezoid(self.density, self.q))

    def to_tsv(self) -> str:
        lines = ["q_R\tP"]
        lines += [f"{q:.10g}\t{p:.10g}" for q, p in zip(self.q, self.density)]
        return "\n".join(lines) + "\n"


def gaussian_mixture(centers, weights, s: float, grid: np.ndarray | None = None) -> SpectralDistribution:
    """Mixture with the given centres and weights, normalised to total weight one."""
    centers = np.asarray(centers, dtype=float)
    weights = np.asarray(weights, dtype=float)
    total = weights.sum()
    if total <= 0:
        raise ValueError("mixture has no weight")
    weights = weights / total
    q = np.empty(0) if grid is None else np.asarray(grid, dtype=float)
    dist = SpectralDistribution(centers, weights, float(s), q, np.empty(0))
    return replace(dist, density=dist.pdf(q) if q.size else np.empty(0))


def spectral_distribution(
    eig: EigenDecomposition, state, params: PhaseEstimationParams, sector: int | None = None
) -> SpectralDistribution:
    """Homodyne density for a pure state.

    With ``sector`` the register is read first and the density is that of
    the normalised sector component ``|Psi_k>``.
    """
    vec = restrict_state(state, eig)
    if sector is not None:
        part = np.zeros_like(vec)
        sl = slice(eig.offsets[sector], eig.offsets[sector + 1])
        part[sl] = vec[sl]
        norm = np.linalg.norm(part)
        if norm == 0:
            raise ValueError(f"state has no weight in sector {sector}")
        vec = part / norm
    amps = eig.eigenvectors.T @ vec
    grid = params.q_grid() if params.grid is not None else None
    return gaussian_mixture(params.gamma * eig.eigenvalues, np.abs(amps) ** 2, params.s, grid)


def sector_distribution(
    eig: EigenDecomposition,
    k: int,
    params: PhaseEstimationParams,
    mode: str = "mixed",
    state=None,
) -> SpectralDistribution:
    """Density conditioned on the register reading ``k``.

    ``mixed`` uses the maximally mixed state on the ``k``-simplices, whose
    kernel-peak mass is exactly ``beta_k / |S_k|``.  ``pure`` uses the sector
    component of ``state``.
    """
    if mode == "pure":
        if state is None:
            raise ValueError("pure mode needs a state")
        return spectral_distribution(eig, state, params, sector=k)
    if mode != "mixed":
        raise ValueError(f"unknown mode {mode!r}")
    size = eig.offsets[k + 1] - eig.offsets[k]
    if size == 0:
        raise ValueError(f"sector {k} is empty")
    grid = params.q_grid() if params.grid is not None else None
    return gaussian_mixture(
        params.gamma * eig.eigenvalues, eig.sector_weights[:, k] / size, params.s, grid
    )


def sample_homodyne(dist: SpectralDistribution, count: int, seed: int) -> np.ndarray:
    """Draw ``count`` homodyne outcomes from the mixture."""
    if count < 1:
        raise ValueError(f"sample count must be positive, got {count}")
    rng = np.random.default_rng(seed)
    comp = rng.choice(len(dist.weights), size=count, p=dist.weights)
    return rng.normal(dist.centers[comp], dist.sigma)


@dataclass(frozen=True)
class BettiEstimate:
    k: int
    epsilon: float
    mode: str
    mass: float
    estimate: float
    window: float
    exact: int | None = None

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "epsilon": self.epsilon,
            "mode": self.mode,
            "mass": self.mass,
            "estimate": self.estimate,
            "exact": self.exact,
            "window": self.window,
        }


def estimate_betti(
    dist,
    k: int,
    vr: VietorisRipsComplex,
    params: PhaseEstimationParams,
    mode: str = "mixed",
    window: float | None = None,
    exact: int | None = None,
) -> BettiEstimate:
    """Kernel-peak mass around ``gamma*alpha`` scaled by ``|S_k|``.

    ``dist`` is a :class:`SpectralDistribution` (mass integrated exactly) or
    an array of homodyne samples (mass = fraction inside the window).  In
    ``mixed`` mode the result estimates ``beta_k``.  In ``pure`` mode it is
    ``|S_k| <Psi_k|P_ker|Psi_k>``, which need not equal ``beta_k``.
    """
    if mode not in ("pure", "mixed"):
        raise ValueError(f"unknown mode {mode!r}")
    if window is None:
        window = params.window
    if window is None:
        raise ValueError("no integration window given")
    size = vr.count(k)
    center = params.kernel_center
    if size == 0 or dist is None:
        return BettiEstimate(k, vr.epsilon, mode, 0.0, 0.0, window, exact)
    if isinstance(dist, SpectralDistribution):
        offsets = np.abs(dist.centers - center)
        # centres closer than the eigenvalue tolerance belong to the kernel peak
        nonzero = offsets[offsets > 1e-9 * max(1.0, params.gamma)]
        if nonzero.size and window >= nonzero.min():
            warnings.warn(
                f"window {window:.3g} reaches a peak {nonzero.min():.3g} from the kernel centre",
                ResolutionWarning,
                stacklevel=2,
            )
        mass = dist.mass(center - window, center + window)
    else:
        samples = np.asarray(dist, dtype=float)
        mass = float(np.mean(np.abs(samples - center) <= window))
    return BettiEstimate(k, vr.epsilon, mode, mass, mass * size, window, exact)


def is_bimodal(dist: SpectralDistribution, q: np.ndarray) -> bool:
    """True when the density has more than one local maximum on ``q``."""
    p = dist.pdf(q)
    peaks = (p[1:-1] > p[:-2]) & (p[1:-1] > p[2:])
    return int(peaks.sum()) > 1


# ---------------------------------------------------------------------------
# operator exponentiation by exponential swap


def _check_density(rho: np.ndarray, name: str, tol: float = 1e-10) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise StateError(f"{name} must be square")
    if np.abs(rho - rho.conj().T).max() > tol:
        raise StateError(f"{name} is not Hermitian")
    if abs(np.trace(rho) - 1.0) > tol:
        raise StateError(f"{name} has trace {np.trace(rho).real:.6g}, expected 1")
    if np.linalg.eigvalsh(rho).min() < -tol:
        raise StateError(f"{name} is not positive semidefinite")
    return rho


def swap_operator(d: int) -> np.ndarray:
    """Swap of two ``d``-dimensional factors, as a ``d**2 x d**2`` permutation."""
    S = np.zeros((d * d, d * d))
    for a in range(d):
        for b in range(d):
            S[b * d + a, a * d + b] = 1.0
    return S


def swap_channel(rho: np.ndarray, sigma: np.ndarray, theta: float) -> np.ndarray:
    """``tr_2[exp(i theta S) (rho x sigma) exp(-i theta S)]`` without input checks."""
    d = rho.shape[0]
    # S squares to the identity, so exp(i theta S) = cos(theta) I + i sin(theta) S
    U = math.cos(theta) * np.eye(d * d) + 1j * math.sin(theta) * swap_operator(d)
    joint = U @ np.kron(rho, sigma) @ U.conj().T
    return np.einsum("abcb->ac", joint.reshape(d, d, d, d))


def exp_swap_step(rho, rho_A, p_R: float, delta_t: float) -> np.ndarray:
    """One exponential-swap step with ``rho_A`` as the auxiliary state, traced out."""
    rho = _check_density(rho, "rho")
    rho_A = _check_density(rho_A, "rho_A")
    if rho.shape != rho_A.shape:
        raise StateError(f"shape mismatch {rho.shape} vs {rho_A.shape}")
    return swap_channel(rho, rho_A, p_R * delta_t)


@dataclass(frozen=True)
class TrotterParams:
    delta_t: float
    p_R: float
    total_t: float
    steps: int


def trotter_params(A, t: float, delta_t: float, p_R: float = 1.0) -> TrotterParams:
    """Step count for reaching ``exp(i t p_R A)`` with swap steps of length ``delta_t``.

    Each step advances by ``delta_t / tr(A)`` in units of ``A``, so
    ``steps = t tr(A) / delta_t``; ``total_t`` is ``t`` rounded to a whole
    number of steps.
    """
    if not delta_t > 0:
        raise ValueError("delta_t must be positive")
    tr = float(np.real(np.trace(A)))
    if abs(tr) < 1e-12:
        raise RegularizationError("tr(A) = 0; shift the operator by alpha*I first")
    steps = int(round(t * tr / delta_t))
    if steps < 1:
        raise ValueError(f"t={t} with delta_t={delta_t} gives no positive step count")
    return TrotterParams(delta_t, p_R, steps * delta_t / tr, steps)


def trotterized_evolution(rho, A, p_R: float, t: float, delta_t: float) -> np.ndarray:
    """Approximate ``exp(i t p_R A) rho exp(-i t p_R A)`` by repeated swap steps.

    The swap step is linear in ``rho``, so its superoperator is assembled
    once and raised to the step count.
    """
    rho = _check_density(rho, "rho")
    A = np.asarray(A, dtype=complex)
    tp = trotter_params(A, t, delta_t, p_R)
    rho_A = _check_density(A / np.trace(A), "A / tr(A)")
    d = rho.shape[0]
    theta = p_R * delta_t
    cols = []
    for idx in range(d * d):
        basis = np.zeros(d * d, dtype=complex)
        basis[idx] = 1.0
        cols.append(swap_channel(basis.reshape(d, d), rho_A, theta).ravel())
    step = np.stack(cols, axis=1)
    out = np.linalg.matrix_power(step, tp.steps) @ rho.ravel()
    return out.reshape(d, d)


def exact_evolution(rho, A, p_R: float, t: float) -> np.ndarray:
    U = expm(1j * t * p_R * np.asarray(A, dtype=complex))
    return U @ np.asarray(rho, dtype=complex) @ U.conj().T


def trace_distance(rho, sigma) -> float:
    diff = np.asarray(rho) - np.asarray(sigma)
    diff = (diff + diff.conj().T) / 2
    return 0.5 * float(np.abs(np.linalg.eigvalsh(diff)).sum())
