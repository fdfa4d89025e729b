"""Dual-rail qubit gates on a truncated multimode Fock space.

Each logical qubit is a pair of bosonic modes ``(a, b)`` holding one photon:
``|0> = |10>`` and ``|1> = |01>``.  Modes are numbered qubit by qubit, ``a``
before ``b``, with the ancilla pair last.

A :class:`GateMatrix` is a product of local factors, each a unitary on a few
modes.  ``G @ H`` means "apply ``H`` first", as for matrices.  Full
``dim x dim`` matrices are only materialised on request since two qubit
pairs plus an ancilla at ``n_max = 2`` already span ``3**10`` states.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np
import scipy.sparse as sps
from scipy.linalg import expm

from .errors import AliasingError, PreconditionError, SizeError
from .homology import to_coo_text

__all__ = [
    "FockSpace",
    "DualRailQubit",
    "GateMatrix",
    "LogicalAction",
    "identity_gate",
    "phase_shift",
    "beam_splitter",
    "cr_gate",
    "cnot",
    "cz",
    "ccnot",
    "z_gate",
    "ancilla_rotation",
    "swap_via_cz",
    "cz_via_ancilla",
    "exp_cond_swap",
    "conjugation_unitary",
    "logical_state",
    "logical_action",
    "ancilla_reduced_state",
    "leakage_check",
    "swap_matrix",
    "gate_to_coo_text",
]

FULL_MATRIX_LIMIT = 4096


@dataclass(frozen=True)
class DualRailQubit:
    a: int
    b: int

    @property
    def modes(self) -> tuple[int, int]:
        return (self.a, self.b)


@dataclass(frozen=True)
class FockSpace:
    """``mode_count`` modes, each truncated to at most ``n_max`` photons."""

    mode_count: int
    n_max: int = 2

    def __post_init__(self):
        if self.n_max < 1:
            raise SizeError("n_max must be at least 1")
        if self.mode_count < 1:
            raise SizeError("need at least one mode")

    @classmethod
    def for_qubits(cls, count: int, n_max: int = 2) -> "FockSpace":
        return cls(2 * count, n_max)

    @property
    def local_dim(self) -> int:
        return self.n_max + 1

    @property
    def dim(self) -> int:
        return self.local_dim**self.mode_count

    @property
    def qubit_count(self) -> int:
        return self.mode_count // 2

    def qubit(self, i: int) -> DualRailQubit:
        if not 0 <= i < self.qubit_count:
            raise SizeError(f"qubit {i} outside [0, {self.qubit_count})")
        return DualRailQubit(2 * i, 2 * i + 1)

    def annihilation(self) -> np.ndarray:
        """Single-mode ``a`` truncated to ``n_max`` photons."""
        return np.diag(np.sqrt(np.arange(1, self.local_dim)), k=1)

    def number(self) -> np.ndarray:
        return np.diag(np.arange(self.local_dim, dtype=float))

    def local_operators(self, k: int) -> list[np.ndarray]:
        """Annihilators of each of ``k`` modes on their joint ``local_dim**k`` space."""
        a = self.annihilation()
        eye = np.eye(self.local_dim)
        ops = []
        for pos in range(k):
            factors = [a if p == pos else eye for p in range(k)]
            op = factors[0]
            for f in factors[1:]:
                op = np.kron(op, f)
            ops.append(op)
        return ops

    def basis_index(self, occupations) -> int:
        idx = 0
        for n in occupations:
            idx = idx * self.local_dim + int(n)
        return idx


def _check_distinct(*qubits: DualRailQubit) -> None:
    modes = [m for q in qubits for m in q.modes]
    if len(set(modes)) != len(modes):
        raise AliasingError(f"qubits {qubits} share modes")


@dataclass(frozen=True)
class GateMatrix:
    """Product of local unitaries, stored in time order."""

    factors: tuple[tuple[tuple[int, ...], object], ...]
    label: str = ""
    params: dict = field(default_factory=dict)

    def __matmul__(self, other: "GateMatrix") -> "GateMatrix":
        params = {**other.params, **self.params}
        return GateMatrix(other.factors + self.factors, f"{self.label}*{other.label}", params)

    def dagger(self) -> "GateMatrix":
        factors = tuple((modes, mat.conj().T) for modes, mat in reversed(self.factors))
        return GateMatrix(factors, f"({self.label})^dag", dict(self.params))

    def apply(self, space: FockSpace, psi: np.ndarray) -> np.ndarray:
        """Apply to state vectors ``psi`` of shape ``(dim,)`` or ``(dim, batch)``."""
        psi = np.asarray(psi, dtype=complex)
        single = psi.ndim == 1
        batch = 1 if single else psi.shape[1]
        D, M = space.local_dim, space.mode_count
        t = psi.reshape((D,) * M + (batch,))
        for modes, mat in self.factors:
            k = len(modes)
            t = np.moveaxis(t, modes, range(k))
            shape = t.shape
            t = (mat @ t.reshape(D**k, -1)).reshape(shape)
            t = np.moveaxis(t, range(k), modes)
        out = np.ascontiguousarray(t).reshape(space.dim, batch)
        return out[:, 0] if single else out

    def full(self, space: FockSpace) -> np.ndarray:
        if space.dim > FULL_MATRIX_LIMIT:
            raise SizeError(f"refusing to build a {space.dim}-dimensional dense matrix")
        return self.apply(space, np.eye(space.dim, dtype=complex))

    def factor_unitarity_error(self) -> float:
        """Largest ``|U^dag U - I|`` entry over the local factors."""
        worst = 0.0
        for _, mat in self.factors:
            m = mat.toarray() if sps.issparse(mat) else mat
            worst = max(worst, float(np.abs(m.conj().T @ m - np.eye(m.shape[0])).max()))
        return worst


def identity_gate() -> GateMatrix:
    return GateMatrix((), "I")


def phase_shift(space: FockSpace, mode: int, phi: float) -> GateMatrix:
    """``exp(i phi n)`` on a single mode."""
    mat = np.diag(np.exp(1j * phi * np.arange(space.local_dim)))
    return GateMatrix((((mode,), mat),), f"R({phi:.4g})", {"phi": phi})


def beam_splitter(space: FockSpace, m1: int, m2: int, theta: float) -> GateMatrix:
    """``exp(theta (a_1^dag a_2 - a_1 a_2^dag))`` between two arbitrary modes."""
    if m1 == m2:
        raise AliasingError("beam splitter needs two distinct modes")
    a1, a2 = space.local_operators(2)
    gen = theta * (a1.conj().T @ a2 - a1 @ a2.conj().T)
    return GateMatrix((((m1, m2), expm(gen)),), f"BS({theta:.4g})", {"theta": theta})


def cr_gate(
    axis: str, theta: float, control: DualRailQubit, target: DualRailQubit, space: FockSpace
) -> GateMatrix:
    """Controlled rotation generated by ``b_c^dag b_c`` times a target-pair operator.

    X: ``exp(i theta n_bc (a_t^dag b_t + a_t b_t^dag))``
    Y: ``exp(theta n_bc (a_t^dag b_t - a_t b_t^dag))``
    Z: ``exp(i theta n_bc (a_t^dag a_t - b_t^dag b_t))``
    """
    _check_distinct(control, target)
    bc, at, bt = space.local_operators(3)
    n_c = bc.conj().T @ bc
    if axis == "X":
        gen = 1j * theta * n_c @ (at.conj().T @ bt + at @ bt.conj().T)
    elif axis == "Y":
        gen = theta * n_c @ (at.conj().T @ bt - at @ bt.conj().T)
    elif axis == "Z":
        gen = 1j * theta * n_c @ (at.conj().T @ at - bt.conj().T @ bt)
    else:
        raise ValueError(f"unknown rotation axis {axis!r}")
    modes = (control.b, target.a, target.b)
    return GateMatrix(((modes, expm(gen)),), f"CR{axis}({theta:.4g})", {"theta": theta})


def _control_phase(space: FockSpace, control: DualRailQubit, phi: float) -> GateMatrix:
    return phase_shift(space, control.b, phi)


def cnot(control: DualRailQubit, target: DualRailQubit, space: FockSpace) -> GateMatrix:
    """``CR^X(pi/2)`` with its ``i`` phase on the control removed by a phase shifter."""
    g = _control_phase(space, control, -math.pi / 2) @ cr_gate("X", math.pi / 2, control, target, space)
    return GateMatrix(g.factors, "CNOT")


def cz(control: DualRailQubit, target: DualRailQubit, space: FockSpace) -> GateMatrix:
    """``CR^Z(pi/2)`` with its ``i`` phase on the control removed by a phase shifter."""
    g = _control_phase(space, control, -math.pi / 2) @ cr_gate("Z", math.pi / 2, control, target, space)
    return GateMatrix(g.factors, "CZ")


def ccnot(c1: DualRailQubit, c2: DualRailQubit, target: DualRailQubit, space: FockSpace) -> GateMatrix:
    """Toffoli on the dual-rail subspace of three qubits, identity elsewhere."""
    _check_distinct(c1, c2, target)
    D = space.local_dim
    size = D**6
    perm = np.arange(size)
    for occ in product(range(D), repeat=6):
        if occ[0:2] == (0, 1) and occ[2:4] == (0, 1) and occ[4:6] in ((1, 0), (0, 1)):
            src = space.basis_index(occ)
            dst = space.basis_index(occ[:4] + occ[4:6][::-1])
            perm[src] = dst
    mat = sps.csr_array((np.ones(size, dtype=complex), (perm, np.arange(size))), shape=(size, size))
    modes = c1.modes + c2.modes + target.modes
    return GateMatrix(((modes, mat),), "CCNOT")


def z_gate(qubit: DualRailQubit, space: FockSpace) -> GateMatrix:
    g = phase_shift(space, qubit.b, math.pi)
    return GateMatrix(g.factors, "Z")


def ancilla_rotation(t_pR: float, ancilla: DualRailQubit, space: FockSpace) -> GateMatrix:
    """``exp(i t p_R (a^dag a - b^dag b))`` on the ancilla pair."""
    n = np.arange(space.local_dim)
    diff = n[:, None] - n[None, :]
    mat = np.diag(np.exp(1j * t_pR * diff).ravel())
    return GateMatrix(((ancilla.modes, mat),), f"expZ({t_pR:.4g})", {"t_pR": t_pR})


def conjugation_unitary(i: DualRailQubit, j: DualRailQubit, space: FockSpace) -> GateMatrix:
    """``CNOT_ji CR^Y_ij(-pi/4)``, the unitary taking CZ to SWAP.

    The angle sign follows the printed two-qubit circuit, where the
    ``U^dag`` half starts with ``exp(+i pi/4 Y)``; with ``+pi/4`` in ``U`` the
    identity does not hold.
    """
    g = cnot(j, i, space) @ cr_gate("Y", -math.pi / 4, i, j, space)
    return GateMatrix(g.factors, "U")


def swap_via_cz(i: DualRailQubit, j: DualRailQubit, space: FockSpace) -> GateMatrix:
    _check_distinct(i, j)
    U = conjugation_unitary(i, j, space)
    g = U @ cz(i, j, space) @ U.dagger()
    return GateMatrix(g.factors, "SWAP")


def cz_via_ancilla(i: DualRailQubit, j: DualRailQubit, ancilla: DualRailQubit, space: FockSpace) -> GateMatrix:
    """``CCNOT Z_A CCNOT``; acts as CZ only with the ancilla in ``|0>``."""
    toff = ccnot(i, j, ancilla, space)
    g = toff @ z_gate(ancilla, space) @ toff
    return GateMatrix(g.factors, "CZ_A", {"ancilla": ancilla})


def exp_cond_swap(
    t_pR: float,
    qubit_pairs: list[tuple[DualRailQubit, DualRailQubit]],
    ancilla: DualRailQubit,
    space: FockSpace,
    reverse: bool = False,
) -> GateMatrix:
    """Circuit for ``exp(i t p_R S)`` with ``S`` the product of pair swaps.

    ``W exp(i t p_R Z_A) W^dag`` with ``W = prod_i U_ii' CCNOT_ii',A``.
    ``reverse`` swaps ``W`` and ``W^dag`` (used as a negative control).
    """
    _check_distinct(*(q for pair in qubit_pairs for q in pair), ancilla)
    W = identity_gate()
    for i, ip in qubit_pairs:
        W = W @ conjugation_unitary(i, ip, space) @ ccnot(i, ip, ancilla, space)
    rot = ancilla_rotation(t_pR, ancilla, space)
    g = W.dagger() @ rot @ W if reverse else W @ rot @ W.dagger()
    return GateMatrix(g.factors, "expS", {"t_pR": t_pR, "ancilla": ancilla})


# ---------------------------------------------------------------------------
# logical (dual-rail) views


def logical_state(space: FockSpace, bits: dict[int, int]) -> np.ndarray:
    """Fock vector with qubit ``q`` in logical ``bits.get(q, 0)`` for every qubit."""
    occ = []
    for q in range(space.qubit_count):
        occ += [0, 1] if bits.get(q, 0) else [1, 0]
    if space.mode_count % 2:
        occ.append(0)
    vec = np.zeros(space.dim, dtype=complex)
    vec[space.basis_index(occ)] = 1.0
    return vec


def _qubit_index(space: FockSpace, qubit: DualRailQubit) -> int:
    if qubit.b != qubit.a + 1 or qubit.a % 2:
        raise AliasingError(f"{qubit} is not a canonical mode pair")
    return qubit.a // 2


def _logical_projector_indices(space: FockSpace) -> np.ndarray:
    Q = space.qubit_count
    return np.array(
        [logical_state(space, {q: (x >> (Q - 1 - q)) & 1 for q in range(Q)}).argmax() for x in range(2**Q)]
    )


@dataclass(frozen=True)
class LogicalAction:
    """Action of a gate on the computational states of chosen qubits.

    ``block[y, x]`` is the amplitude ``<y, 0_A| G |x, 0_A>`` with qubit order
    as given (first qubit most significant).  ``ancilla_leak`` is the largest
    norm left on ancilla ``|1>`` and ``leakage`` the largest norm outside the
    dual-rail subspace of the whole space.
    """

    block: np.ndarray
    ancilla_leak: float
    leakage: float


def logical_action(
    gate: GateMatrix,
    space: FockSpace,
    qubits: list[DualRailQubit],
    ancilla: DualRailQubit | None = None,
    ancilla_state: int = 0,
) -> LogicalAction:
    """Restrict ``gate`` to computational inputs on ``qubits``.

    Qubits outside ``qubits`` (and the ancilla) are prepared in ``|0>``.
    Gates built around an ancilla reject any other ancilla preparation.
    """
    required = gate.params.get("ancilla")
    if required is not None and ancilla_state != 0:
        raise PreconditionError("this circuit requires its ancilla in logical |0>")
    idx = [_qubit_index(space, q) for q in qubits]
    anc = _qubit_index(space, ancilla) if ancilla is not None else None
    k = len(idx)
    inputs = []
    for x in range(2**k):
        bits = {q: (x >> (k - 1 - p)) & 1 for p, q in enumerate(idx)}
        if anc is not None:
            bits[anc] = ancilla_state
        inputs.append(logical_state(space, bits))
    out = gate.apply(space, np.stack(inputs, axis=1))

    block = np.zeros((2**k, 2**k), dtype=complex)
    for y in range(2**k):
        bits = {q: (y >> (k - 1 - p)) & 1 for p, q in enumerate(idx)}
        if anc is not None:
            bits[anc] = 0
        block[y] = out[logical_state(space, bits).argmax()]

    logical_rows = _logical_projector_indices(space)
    inside = np.zeros(space.dim, dtype=bool)
    inside[logical_rows] = True
    leakage = float(np.linalg.norm(out[~inside], axis=0).max())

    anc_leak = 0.0
    if anc is not None:
        Q = space.qubit_count
        flipped = [r for x, r in enumerate(logical_rows) if (x >> (Q - 1 - anc)) & 1]
        anc_leak = float(np.linalg.norm(out[flipped], axis=0).max())
    return LogicalAction(block, anc_leak, leakage)


def ancilla_reduced_state(
    gate: GateMatrix,
    space: FockSpace,
    qubits: list[DualRailQubit],
    ancilla: DualRailQubit,
    coeffs: np.ndarray,
) -> np.ndarray:
    """Logical 2x2 density matrix of the ancilla after ``gate``.

    The input is ``sum_x coeffs[x] |x>|0_A>`` over computational states of
    ``qubits``.
    """
    idx = [_qubit_index(space, q) for q in qubits]
    k = len(idx)
    psi = np.zeros(space.dim, dtype=complex)
    for x in range(2**k):
        bits = {q: (x >> (k - 1 - p)) & 1 for p, q in enumerate(idx)}
        psi += coeffs[x] * logical_state(space, bits)
    out = gate.apply(space, psi)
    D, M = space.local_dim, space.mode_count
    t = np.moveaxis(out.reshape((D,) * M), ancilla.modes, (0, 1)).reshape(D * D, -1)
    rho = t @ t.conj().T
    keep = [space.basis_index((1, 0)), space.basis_index((0, 1))]
    return rho[np.ix_(keep, keep)]


def leakage_check(gate: GateMatrix, space: FockSpace) -> float:
    """Operator norm of the part of ``gate`` mapping the dual-rail subspace outside itself."""
    rows = _logical_projector_indices(space)
    inputs = np.zeros((space.dim, len(rows)), dtype=complex)
    inputs[rows, np.arange(len(rows))] = 1.0
    out = gate.apply(space, inputs)
    mask = np.ones(space.dim, dtype=bool)
    mask[rows] = False
    return float(np.linalg.norm(out[mask], 2)) if mask.any() else 0.0


def swap_matrix(pairs: int) -> np.ndarray:
    """Product of swaps ``(q_2i, q_2i+1)`` on ``2*pairs`` qubits, first qubit most significant."""
    k = 2 * pairs
    S = np.zeros((2**k, 2**k))
    for x in range(2**k):
        bits = [(x >> (k - 1 - p)) & 1 for p in range(k)]
        for i in range(pairs):
            bits[2 * i], bits[2 * i + 1] = bits[2 * i + 1], bits[2 * i]
        y = sum(b << (k - 1 - p) for p, b in enumerate(bits))
        S[y, x] = 1.0
    return S


def gate_to_coo_text(gate: GateMatrix, space: FockSpace, tol: float = 1e-14) -> str:
    full = gate.full(space)
    full[np.abs(full) < tol] = 0
    return to_coo_text(sps.coo_array(full))
