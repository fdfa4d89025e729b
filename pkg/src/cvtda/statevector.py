"""State-vector simulation of the qubit side of the algorithm.

Basis index ``y`` of an ``n``-qubit state is the simplex word itself, so
qubit ``i`` carries vertex ``i``.  The sector register holding ``k`` is kept
as a leading axis of length ``n`` (its ``ceil(log2 n)`` qubits only ever
hold the values ``0 .. n-1``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyTargetError, SizeError
from .geometry import PointCloud
from .rips import MAX_VERTICES, VietorisRipsComplex

__all__ = [
    "QuantumState",
    "TaggedState",
    "DistanceProtocol",
    "uniform_state",
    "popcounts",
    "marked_mask",
    "oracle_phase_flip",
    "marked_probability",
    "grover_iterations",
    "grover_iterate",
    "grover_amplify",
    "grover_success_curve",
    "tag_sectors",
    "tag_sectors_direct",
    "build_initial_state",
    "prepare_vr_state",
    "distance_protocol",
    "derive_distance_operator",
    "state_to_json",
]

NORM_TOL = 1e-12
EXPORT_LIMIT = 12

_MINUS = np.array([1.0, -1.0]) / math.sqrt(2.0)


def _check_qubits(n: int) -> None:
    if not 1 <= n <= MAX_VERTICES:
        raise SizeError(f"qubit count must lie in [1, {MAX_VERTICES}], got {n}")


@dataclass(frozen=True)
class QuantumState:
    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        _check_qubits(self.n)
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (2**self.n,):
            raise SizeError(f"expected {2**self.n} amplitudes, got shape {amps.shape}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {norm!r} differs from 1")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_unnormalized(cls, n: int, amps) -> "QuantumState":
        amps = np.asarray(amps, dtype=complex)
        return cls(n, amps / np.linalg.norm(amps))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


@dataclass(frozen=True)
class TaggedState:
    """Joint state of the sector register and the ``n`` simplex qubits.

    ``amplitudes[k, y]`` is the amplitude of ``|k>|y>``.
    """

    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        _check_qubits(self.n)
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.n, 2**self.n):
            raise SizeError(f"expected shape {(self.n, 2**self.n)}, got {amps.shape}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {norm!r} differs from 1")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def register_width(self) -> int:
        return math.ceil(math.log2(self.n)) if self.n > 1 else 0

    def sector_weights(self) -> np.ndarray:
        """Probability of reading each register value ``k``."""
        return np.sum(np.abs(self.amplitudes) ** 2, axis=1)

    def sector_state(self, k: int) -> np.ndarray:
        """Normalized ``|Psi_k>`` left after the register reads ``k``."""
        vec = self.amplitudes[k]
        norm = np.linalg.norm(vec)
        if norm == 0:
            raise ValueError(f"sector {k} has zero weight")
        return vec / norm

    def is_sector_consistent(self, atol: float = 1e-12) -> bool:
        """True when every populated ``|k>|y>`` has ``popcount(y) == k + 1``."""
        pc = popcounts(self.n)
        wrong = pc[None, :] != (np.arange(self.n)[:, None] + 1)
        return bool(np.all(np.abs(self.amplitudes[wrong]) <= atol))


def uniform_state(n: int) -> QuantumState:
    _check_qubits(n)
    return QuantumState(n, np.full(2**n, 2.0 ** (-n / 2), dtype=complex))


def popcounts(n: int) -> np.ndarray:
    """Hamming weight of every ``n``-bit index."""
    y = np.arange(2**n)
    out = np.zeros(2**n, dtype=np.int64)
    for q in range(n):
        out += (y >> q) & 1
    return out


def marked_mask(vr: VietorisRipsComplex, k: int) -> np.ndarray:
    """Boolean mask over basis states selecting ``S_k`` of ``vr``."""
    mask = np.zeros(2**vr.n, dtype=bool)
    words = vr.simplices(k)
    if words:
        mask[np.array(words, dtype=np.int64)] = True
    return mask


_MINUS_UNNORMALIZED = np.array([1.0, -1.0])


def _phase_kickback(amps: np.ndarray, mask: np.ndarray) -> np.ndarray:
    # bit-flip oracle on an ancilla held in |->, then read the ancilla back out;
    # the two 1/sqrt(2) factors are applied together as an exact 1/2
    joint = np.outer(amps, _MINUS_UNNORMALIZED)
    joint[mask] = joint[mask][:, ::-1]
    return (joint @ _MINUS_UNNORMALIZED) / 2


def oracle_phase_flip(state: QuantumState, vr: VietorisRipsComplex, k: int) -> QuantumState:
    """Negate the amplitude of every simplex in ``S_k``.

    Simulated as the bit-flip oracle acting on an ancilla prepared in
    ``|->``; the ancilla factors out and leaves the phase behind.
    """
    return QuantumState(state.n, _phase_kickback(state.amplitudes, marked_mask(vr, k)))


def marked_probability(state: QuantumState, mask: np.ndarray) -> float:
    return float(np.sum(np.abs(state.amplitudes[mask]) ** 2))


def grover_iterations(marked_fraction: float) -> int:
    """``floor(pi / (4 sin(theta)))`` with ``sin(theta)**2`` the initial marked weight.

    For the uniform start state this is ``floor((pi/4) sqrt(2**n / M))``.
    """
    if marked_fraction <= 0:
        raise EmptyTargetError("no marked states")
    return math.floor(math.pi / 4 / math.sqrt(marked_fraction))


def grover_iterate(
    state: QuantumState, mask: np.ndarray, iterations: int, initial: QuantumState | None = None
) -> QuantumState:
    """Apply ``iterations`` rounds of oracle + reflection about ``initial``.

    ``initial`` defaults to ``state``; for a uniform start the reflection is
    the usual diffusion operator ``2|s><s| - I``.
    """
    if iterations < 0:
        raise ValueError("iteration count must be non-negative")
    ref = (initial if initial is not None else state).amplitudes
    amps = state.amplitudes.copy()
    for _ in range(iterations):
        amps = _phase_kickback(amps, mask)
        amps = 2 * ref * np.vdot(ref, amps) - amps
    return QuantumState.from_unnormalized(state.n, amps)


def grover_amplify(
    state: QuantumState, vr: VietorisRipsComplex, k: int, iterations: int | str = "auto"
) -> QuantumState:
    """Amplitude-amplify ``state`` towards ``S_k``.

    In ``"auto"`` mode the iteration count comes from the marked weight of
    the start state, which for the uniform state reproduces the textbook
    ``floor((pi/4) sqrt(N/M))``.
    """
    mask = marked_mask(vr, k)
    if not mask.any():
        raise EmptyTargetError(f"S_{k} is empty at eps={vr.epsilon}")
    if iterations == "auto":
        iterations = grover_iterations(marked_probability(state, mask))
    return grover_iterate(state, mask, int(iterations))


def grover_success_curve(n: int, masks: np.ndarray, max_iterations: int) -> np.ndarray:
    """Marked probability after ``0 .. max_iterations`` rounds, for a batch of oracles.

    ``masks`` has shape ``(batch, 2**n)``; every row is searched from the
    uniform state with the same oracle and diffusion steps as
    :func:`grover_iterate`.  Returns shape ``(batch, max_iterations + 1)``.
    """
    _check_qubits(n)
    masks = np.asarray(masks, dtype=bool)
    ref = uniform_state(n).amplitudes
    amps = np.tile(ref, (masks.shape[0], 1))
    signs = np.where(masks, -1.0, 1.0)
    out = np.empty((masks.shape[0], max_iterations + 1))
    for r in range(max_iterations + 1):
        out[:, r] = np.sum(np.abs(amps) ** 2 * masks, axis=1)
        amps = amps * signs
        amps = 2 * np.outer(amps @ ref.conj(), ref) - amps
    return out


def tag_sectors(state: QuantumState) -> TaggedState:
    """Attach the sector register by controlled cyclic increments.

    The register starts at ``|0>`` and is stepped back once, so that after one
    increment per set qubit it reads ``popcount(y) - 1 (mod n)``.  The empty
    word ``y = 0`` therefore lands in register ``n - 1``.
    """
    n = state.n
    joint = np.zeros((n, 2**n), dtype=complex)
    joint[0] = state.amplitudes
    joint = np.roll(joint, -1, axis=0)
    y = np.arange(2**n)
    for q in range(n):
        ctrl = ((y >> q) & 1).astype(bool)
        joint[:, ctrl] = np.roll(joint[:, ctrl], 1, axis=0)
    return TaggedState(n, joint)


def tag_sectors_direct(state: QuantumState) -> TaggedState:
    """Reference tagging that writes ``popcount(y) - 1 (mod n)`` directly."""
    n = state.n
    joint = np.zeros((n, 2**n), dtype=complex)
    joint[(popcounts(n) - 1) % n, np.arange(2**n)] = state.amplitudes
    return TaggedState(n, joint)


def _postselect_sectors(joint: np.ndarray, n: int) -> np.ndarray:
    pc = popcounts(n)
    keep = pc[None, :] == (np.arange(n)[:, None] + 1)
    return np.where(keep, joint, 0)


def build_initial_state(n: int) -> TaggedState:
    """Equal-weight superposition of all ``k``-simplices over ``k = 0 .. n-1``.

    Built from the uniform state by sector tagging; the stray ``y = 0``
    component is post-selected away and each sector rescaled to weight ``1/n``.
    """
    joint = _postselect_sectors(tag_sectors(uniform_state(n)).amplitudes, n)
    weights = np.sqrt(np.sum(np.abs(joint) ** 2, axis=1, keepdims=True))
    joint = joint / weights / math.sqrt(n)
    return TaggedState(n, joint)


def prepare_vr_state(
    vr: VietorisRipsComplex, grover: bool = True
) -> tuple[TaggedState, dict[int, float]]:
    """Uniform superposition over the simplices of ``vr``, sector by sector.

    With ``grover`` each sector of the initial state is amplified towards
    ``S_k`` and then post-selected on the oracle reporting membership; the
    returned dict holds the per-sector post-selection success probability.
    Without it the target state is written down directly.  Empty sectors and
    sectors beyond ``vr.kmax`` get zero weight and the rest share equally.
    """
    n = vr.n
    initial = build_initial_state(n) if grover else None
    sectors = [k for k in range(vr.kmax + 1) if vr.count(k) > 0]
    joint = np.zeros((n, 2**n), dtype=complex)
    success: dict[int, float] = {}
    for k in sectors:
        mask = marked_mask(vr, k)
        if grover:
            start = QuantumState(n, initial.sector_state(k))
            amped = grover_amplify(start, vr, k)
            success[k] = marked_probability(amped, mask)
            vec = np.where(mask, amped.amplitudes, 0)
            vec /= np.linalg.norm(vec)
        else:
            vec = mask / math.sqrt(mask.sum())
        joint[k] = vec / math.sqrt(len(sectors))
    return TaggedState(n, joint), success


@dataclass(frozen=True)
class DistanceProtocol:
    """Outcome of the simulated distance-operator construction.

    ``operator[i, j]`` is the diagonal entry on ``|i>|j>``; ``success`` is the
    probability of the ``-1`` outcome of the X measurement and ``coherence``
    the largest off-diagonal magnitude of the reduced operator (zero when
    the ancilla copies fully decohere the labels).
    """

    operator: np.ndarray
    success: float
    coherence: float


def distance_protocol(pc: PointCloud) -> DistanceProtocol:
    n, d = pc.n, pc.d
    V = pc.coords
    # (1/n) sum_ij |i>|j>, qRAM loads |v_i>, control qubit in |+>; the
    # controlled swap puts |v_j> into the data register on the control=1 branch
    psi = np.zeros((n, n, d, 2), dtype=complex)
    psi[..., 0] = V[:, None, :]
    psi[..., 1] = V[None, :, :]
    psi /= n * math.sqrt(2.0)
    # X measurement with outcome -1: project the control onto |->
    proj = psi @ _MINUS
    success = float(np.sum(np.abs(proj) ** 2))
    # copy i and j onto ancilla registers
    eye = np.eye(n)
    full = np.einsum("ijx,ia,jb->ijabx", proj, eye, eye)
    # trace out ancillas and data register
    flat = full.reshape(n * n, -1)
    rho = flat @ flat.conj().T
    off = rho - np.diag(np.diag(rho))
    scale = 4.0 * n * n
    H = np.real(np.diag(rho)).reshape(n, n) * scale
    return DistanceProtocol(H, success, float(np.abs(off).max()) * scale if off.size else 0.0)


def derive_distance_operator(pc: PointCloud) -> np.ndarray:
    """Diagonal of the distance operator obtained by simulating its construction.

    Returned as an ``n x n`` table indexed like a distance matrix.
    """
    return distance_protocol(pc).operator


def state_to_json(state: QuantumState | TaggedState) -> list:
    """``[re, im]`` pairs in basis order (register-major for tagged states)."""
    if state.n > EXPORT_LIMIT:
        raise SizeError(f"state export is limited to n <= {EXPORT_LIMIT}")
    flat = np.asarray(state.amplitudes).ravel()
    return [[float(a.real), float(a.imag)] for a in flat]
