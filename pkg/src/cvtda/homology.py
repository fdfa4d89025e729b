"""Boundary maps, the Dirac operator and exact Betti numbers.

All matrices here carry small integer entries and are kept in integer dtype
so that chain-complex and Dirac-square identities can be checked exactly.
Rows and columns follow the order of the simplex lists in the complex.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sps

from .errors import ConsistencyError, DimensionError
from .rips import VietorisRipsComplex, faces, full_complex

__all__ = [
    "BoundaryMatrix",
    "DiracOperator",
    "BettiVector",
    "boundary_matrix",
    "boundary_matrices",
    "dirac_operator",
    "unrestricted_dirac",
    "laplacian",
    "integer_rank",
    "kernel_count",
    "betti_exact",
    "betti_numbers",
    "chain_defect",
    "verify_chain_complex",
    "dirac_square_defect",
    "verify_dirac_square",
    "to_coo_text",
]


@dataclass(frozen=True)
class BoundaryMatrix:
    """Restricted boundary map from ``k``-simplices to ``(k-1)``-simplices."""

    k: int
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    matrix: sps.csc_array

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()


@dataclass(frozen=True)
class DiracOperator:
    """Symmetric block matrix with boundary maps on the first off-diagonal.

    ``offsets[k]`` is the first row of sector ``k``; ``offsets[-1]`` is the
    total dimension.  Within a sector rows follow ascending simplex word.
    """

    matrix: sps.csr_array
    offsets: tuple[int, ...]
    words: tuple[int, ...]
    epsilon: float
    n: int

    @property
    def dim(self) -> int:
        return self.offsets[-1]

    @property
    def sectors(self) -> int:
        return len(self.offsets) - 1

    def sector(self, k: int) -> slice:
        return slice(self.offsets[k], self.offsets[k + 1])

    def sector_labels(self) -> np.ndarray:
        """Sector index ``k`` of every row."""
        return np.repeat(np.arange(self.sectors), np.diff(self.offsets))

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()


@dataclass(frozen=True)
class BettiVector:
    epsilon: float
    betti: tuple[int, ...]

    def to_json(self) -> dict:
        return {"epsilon": self.epsilon, "betti": list(self.betti)}


def boundary_matrix(vr: VietorisRipsComplex, k: int) -> BoundaryMatrix:
    """Signed incidence of ``k``-simplices on their faces, restricted to ``vr``.

    The column of ``s`` holds ``(-1)**l`` in the row of the face obtained by
    dropping its ``l``-th lowest vertex.
    """
    if not 1 <= k <= vr.n - 1:
        raise DimensionError(f"boundary dimension {k} outside [1, {vr.n - 1}]")
    cols = vr.simplices(k)
    rows = vr.simplices(k - 1)
    row_of = {w: i for i, w in enumerate(rows)}
    r, c, v = [], [], []
    for j, word in enumerate(cols):
        for l, face in faces(word):
            i = row_of.get(face)
            # the projection onto the complex never drops a face: VR complexes are closed
            assert i is not None, f"face {face:b} of {word:b} missing from complex"
            r.append(i)
            c.append(j)
            v.append(1 if l % 2 == 0 else -1)
    mat = sps.csc_array(
        (np.array(v, dtype=np.int64), (np.array(r, dtype=np.int64), np.array(c, dtype=np.int64))),
        shape=(len(rows), len(cols)),
    )
    return BoundaryMatrix(k, rows, cols, mat)


def boundary_matrices(vr: VietorisRipsComplex) -> list[BoundaryMatrix]:
    """``[d_1, ..., d_kmax]`` for every enumerated dimension."""
    return [boundary_matrix(vr, k) for k in range(1, vr.kmax + 1)]


def dirac_operator(vr: VietorisRipsComplex) -> DiracOperator:
    """Assemble the Dirac operator over the enumerated sectors of ``vr``.

    When ``vr`` stops short of ``n - 1`` the top sector simply has no upper
    block; the lower Laplacian blocks of the square are unaffected.
    """
    counts = vr.counts
    offsets = tuple(int(x) for x in np.concatenate([[0], np.cumsum(counts)]))
    N = offsets[-1]
    r, c, v = [], [], []
    for bm in boundary_matrices(vr):
        coo = bm.matrix.tocoo()
        rr = coo.row + offsets[bm.k - 1]
        cc = coo.col + offsets[bm.k]
        r += [rr, cc]
        c += [cc, rr]
        v += [coo.data, coo.data]
    if r:
        mat = sps.csr_array(
            (np.concatenate(v), (np.concatenate(r), np.concatenate(c))), shape=(N, N)
        )
    else:
        mat = sps.csr_array((N, N), dtype=np.int64)
    words = tuple(w for s in vr.sets for w in s)
    return DiracOperator(mat, offsets, words, vr.epsilon, vr.n)


def unrestricted_dirac(n: int) -> DiracOperator:
    """Dirac operator built from the unrestricted boundary maps on all simplices."""
    return dirac_operator(full_complex(n))


def laplacian(vr: VietorisRipsComplex, k: int) -> np.ndarray:
    """Combinatorial Laplacian ``d_k^T d_k + d_{k+1} d_{k+1}^T`` as a dense int array."""
    if not 0 <= k <= vr.n - 1:
        raise DimensionError(f"Laplacian dimension {k} outside [0, {vr.n - 1}]")
    size = vr.count(k)
    L = np.zeros((size, size), dtype=np.int64)
    if k >= 1:
        d = boundary_matrix(vr, k).matrix
        L += (d.T @ d).toarray()
    if k + 1 <= vr.n - 1:
        d = boundary_matrix(vr, k + 1).matrix
        L += (d @ d.T).toarray()
    return L


def integer_rank(A) -> int:
    """Exact rank of an integer matrix by fraction-free (Bareiss) elimination.

    Works on Python integers throughout, so the result carries no tolerance.
    """
    if sps.issparse(A):
        A = A.toarray()
    M = np.array(A, dtype=object)
    if M.size == 0:
        return 0
    # all-zero rows and columns never hold a pivot
    M = M[np.any(M != 0, axis=1)][:, np.any(M != 0, axis=0)]
    rows, cols = M.shape
    rank = 0
    prev = 1
    for c in range(cols):
        if rank == rows:
            break
        nz = np.flatnonzero(M[rank:, c] != 0)
        if nz.size == 0:
            continue
        p = rank + int(nz[0])
        if p != rank:
            M[[rank, p]] = M[[p, rank]]
        piv = M[rank, c]
        below = M[rank + 1 :, c]
        M[rank + 1 :, c + 1 :] = (
            M[rank + 1 :, c + 1 :] * piv - np.outer(below, M[rank, c + 1 :])
        ) // prev
        M[rank + 1 :, c] = 0
        prev = piv
        rank += 1
    return rank


def _zero_tol(L: np.ndarray) -> float:
    norm_inf = float(np.abs(L).sum(axis=1).max()) if L.size else 0.0
    return 1e-9 * max(1.0, norm_inf)


def kernel_count(L: np.ndarray) -> int:
    """Number of eigenvalues of symmetric ``L`` below the zero tolerance."""
    if L.shape[0] == 0:
        return 0
    evals = np.linalg.eigvalsh(L.astype(float))
    return int(np.sum(np.abs(evals) < _zero_tol(L)))


def _rank_of_boundary(vr: VietorisRipsComplex, k: int) -> int:
    if k < 1 or k > vr.n - 1:
        return 0
    return integer_rank(boundary_matrix(vr, k).matrix)


def betti_exact(vr: VietorisRipsComplex, k: int, check: bool = True) -> int:
    """``dim ker`` of the ``k``-th Laplacian.

    The rank-nullity count ``|S_k| - rank d_k - rank d_{k+1}`` is exact.  With
    ``check`` the eigenvalue count of the Laplacian is computed as well and a
    disagreement raises :class:`ConsistencyError`.
    """
    if not 0 <= k <= vr.n - 1:
        raise DimensionError(f"Betti dimension {k} outside [0, {vr.n - 1}]")
    exact = vr.count(k) - _rank_of_boundary(vr, k) - _rank_of_boundary(vr, k + 1)
    if check:
        spectral = kernel_count(laplacian(vr, k))
        if spectral != exact:
            raise ConsistencyError(
                f"beta_{k} at eps={vr.epsilon}: rank-nullity gives {exact}, "
                f"eigenvalue count gives {spectral}"
            )
    return exact


def betti_numbers(vr: VietorisRipsComplex, kmax: int | None = None, check: bool = True) -> BettiVector:
    """Betti numbers ``beta_0 .. beta_kmax``; dimensions past ``n - 1`` are 0."""
    if kmax is None:
        kmax = vr.n - 1
    betti = tuple(
        betti_exact(vr, k, check=check) if k <= vr.n - 1 else 0 for k in range(kmax + 1)
    )
    return BettiVector(vr.epsilon, betti)


def chain_defect(boundaries: list[BoundaryMatrix]) -> int:
    """Largest absolute entry over all products ``d_k d_{k+1}`` (0 for a chain complex)."""
    worst = 0
    for lo, hi in zip(boundaries, boundaries[1:]):
        prod = (lo.matrix @ hi.matrix).tocoo()
        if prod.nnz:
            worst = max(worst, int(np.abs(prod.data).max()))
    return worst


def verify_chain_complex(vr: VietorisRipsComplex) -> bool:
    return chain_defect(boundary_matrices(vr)) == 0


def dirac_square_defect(vr: VietorisRipsComplex) -> int:
    """Largest absolute entry of ``B**2 - blockdiag(Laplacians)``.

    For a complex enumerated short of ``n - 1`` the top block is compared
    against ``d^T d`` alone, which is what the truncated operator squares to.
    """
    B = dirac_operator(vr)
    sq = (B.matrix @ B.matrix).toarray()
    expected = np.zeros_like(sq)
    for k in range(B.sectors):
        sl = B.sector(k)
        if k < vr.kmax or vr.complete:
            expected[sl, sl] = laplacian(vr, k)
        elif k >= 1:
            d = boundary_matrix(vr, k).matrix
            expected[sl, sl] = (d.T @ d).toarray()
    if sq.size == 0:
        return 0
    return int(np.abs(sq - expected).max())


def verify_dirac_square(vr: VietorisRipsComplex) -> bool:
    return dirac_square_defect(vr) == 0


def to_coo_text(matrix) -> str:
    """Render a matrix as ``row col value`` lines, one per stored non-zero."""
    coo = sps.coo_array(matrix)
    lines = [f"# shape {coo.shape[0]} {coo.shape[1]}"]
    order = np.lexsort((coo.col, coo.row))
    cplx = np.iscomplexobj(coo.data)
    for i in order:
        val = coo.data[i]
        if val == 0:
            continue
        if cplx:
            lines.append(f"{coo.row[i]} {coo.col[i]} {float(val.real)!r} {float(val.imag)!r}")
        elif np.issubdtype(coo.data.dtype, np.integer):
            lines.append(f"{coo.row[i]} {coo.col[i]} {int(val)}")
        else:
            lines.append(f"{coo.row[i]} {coo.col[i]} {float(val)!r}")
    return "\n".join(lines) + "\n"
