"""Bit-encoded simplices and Vietoris-Rips complexes.

A simplex on ``n`` vertices is an ``int`` word below ``2**n``; bit ``i``
(least significant = vertex 0) marks vertex ``i``.  Vertices of a simplex
are ordered by ascending bit position, which fixes every orientation sign
used by the boundary maps.
"""
from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import numpy as np

from .errors import IncompleteComplexError, InvalidSimplexError, SimplexIndexError, SizeError
from .geometry import bit_vertices

__all__ = [
    "MAX_VERTICES",
    "FiltrationScale",
    "VietorisRipsComplex",
    "popcount",
    "simplex_dim",
    "scale_from_index",
    "scale_grid",
    "membership",
    "enumerate_vr",
    "enumerate_vr_scan",
    "full_complex",
    "remove_vertex",
    "faces",
]

# statevector simulation needs 2**n amplitudes
MAX_VERTICES = 20


def popcount(word: int) -> int:
    return bin(word).count("1")


def simplex_dim(word: int) -> int:
    """Dimension ``k`` of a simplex with ``k + 1`` vertices."""
    if word <= 0:
        raise InvalidSimplexError("a simplex needs at least one vertex")
    return popcount(word) - 1


@dataclass(frozen=True)
class FiltrationScale:
    """Scale ``epsilon = x / 2**(m-1)`` held in an ``m``-qubit register."""

    x: int
    m: int

    @property
    def epsilon(self) -> float:
        return self.x / 2 ** (self.m - 1)


def scale_from_index(x: int, m: int) -> FiltrationScale:
    if m < 1:
        raise SimplexIndexError(f"register width must be >= 1, got {m}")
    if not 0 <= x < 2**m:
        raise SimplexIndexError(f"scale index {x} outside [0, {2**m})")
    return FiltrationScale(x, m)


def scale_grid(m: int) -> list[float]:
    """All non-zero scales representable by an ``m``-qubit register."""
    return [scale_from_index(x, m).epsilon for x in range(1, 2**m)]


def _within(sq_dist: float, eps: float) -> bool:
    # compare as a diameter so membership agrees bit-for-bit with simplex_diameter
    return math.sqrt(sq_dist) <= eps


def membership(s: int, eps: float, D: np.ndarray) -> bool:
    """Whether every pair of vertices of ``s`` is within ``eps``."""
    verts = bit_vertices(s)
    return all(_within(D[i, j], eps) for i, j in combinations(verts, 2))


@dataclass(frozen=True)
class VietorisRipsComplex:
    """Simplices of diameter at most ``epsilon``, grouped by dimension.

    ``sets[k]`` is the ascending tuple of ``k``-simplex words.  The complex may
    be enumerated only up to ``kmax < n - 1``; asking for a dimension past
    that raises :class:`IncompleteComplexError` rather than guessing.
    """

    epsilon: float
    n: int
    sets: tuple[tuple[int, ...], ...]

    @property
    def kmax(self) -> int:
        return len(self.sets) - 1

    @property
    def complete(self) -> bool:
        return self.kmax == self.n - 1

    def simplices(self, k: int) -> tuple[int, ...]:
        if k < 0 or k > self.n - 1:
            return ()
        if k > self.kmax:
            raise IncompleteComplexError(
                f"complex enumerated up to k={self.kmax}, dimension {k} requested"
            )
        return self.sets[k]

    def count(self, k: int) -> int:
        return len(self.simplices(k))

    @property
    def counts(self) -> list[int]:
        return [len(s) for s in self.sets]

    @property
    def size(self) -> int:
        return sum(self.counts)

    def index(self, k: int) -> dict[int, int]:
        """Map from ``k``-simplex word to its position in ``sets[k]``."""
        return {w: i for i, w in enumerate(self.simplices(k))}

    def __contains__(self, word: int) -> bool:
        k = popcount(word) - 1
        if k < 0 or k > self.kmax:
            return False
        seq = self.sets[k]
        i = bisect.bisect_left(seq, word)
        return i < len(seq) and seq[i] == word

    def to_json(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "n": self.n,
            "sets": {str(k): list(s) for k, s in enumerate(self.sets)},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data: dict | str) -> "VietorisRipsComplex":
        if isinstance(data, str):
            data = json.loads(data)
        sets = data["sets"]
        ks = sorted(int(k) for k in sets)
        if ks != list(range(len(ks))):
            raise InvalidSimplexError("simplex sets must cover k = 0 .. kmax contiguously")
        return cls(
            float(data["epsilon"]),
            int(data["n"]),
            tuple(tuple(sorted(int(w) for w in sets[str(k)])) for k in ks),
        )


def _check_size(n: int) -> None:
    if n > MAX_VERTICES:
        raise SizeError(f"{n} points exceeds the {MAX_VERTICES}-vertex limit")


def _resolve_kmax(n: int, kmax: int | None) -> int:
    if kmax is None:
        return n - 1
    if not 0 <= kmax <= n - 1:
        raise SimplexIndexError(f"kmax must lie in [0, {n - 1}], got {kmax}")
    return kmax


def enumerate_vr(D: np.ndarray, eps: float, kmax: int | None = None) -> VietorisRipsComplex:
    """Vietoris-Rips complex at scale ``eps`` by clique growth.

    Each ``k``-simplex is extended only by vertices above its largest vertex
    that are adjacent to all of its vertices, so every clique of the
    ``eps``-neighbourhood graph is produced exactly once.
    """
    n = D.shape[0]
    _check_size(n)
    kmax = _resolve_kmax(n, kmax)
    adj = np.sqrt(D) <= eps
    nbr = [0] * n
    for i in range(n):
        for j in np.flatnonzero(adj[i]):
            if j != i:
                nbr[i] |= 1 << int(j)

    # (word, common-neighbour mask) pairs of the current dimension
    level = [(1 << i, nbr[i]) for i in range(n)]
    sets = [tuple(w for w, _ in level)]
    for _ in range(kmax):
        nxt = []
        for word, common in level:
            above = common >> word.bit_length() << word.bit_length()
            while above:
                low = above & -above
                j = low.bit_length() - 1
                nxt.append((word | low, common & nbr[j]))
                above ^= low
        level = nxt
        sets.append(tuple(sorted(w for w, _ in level)))
    return VietorisRipsComplex(float(eps), n, tuple(sets))


def enumerate_vr_scan(D: np.ndarray, eps: float, kmax: int | None = None) -> VietorisRipsComplex:
    """Reference enumeration testing all ``2**n`` words with :func:`membership`."""
    n = D.shape[0]
    _check_size(n)
    kmax = _resolve_kmax(n, kmax)
    sets: list[list[int]] = [[] for _ in range(kmax + 1)]
    for word in range(1, 2**n):
        k = popcount(word) - 1
        if k <= kmax and membership(word, eps, D):
            sets[k].append(word)
    return VietorisRipsComplex(float(eps), n, tuple(tuple(s) for s in sets))


def full_complex(n: int, kmax: int | None = None) -> VietorisRipsComplex:
    """Every simplex on ``n`` vertices (the complex at any scale >= diameter)."""
    _check_size(n)
    kmax = _resolve_kmax(n, kmax)
    sets: list[list[int]] = [[] for _ in range(kmax + 1)]
    for word in range(1, 2**n):
        k = popcount(word) - 1
        if k <= kmax:
            sets[k].append(word)
    return VietorisRipsComplex(math.inf, n, tuple(tuple(s) for s in sets))


def remove_vertex(s: int, l: int) -> int:
    """Clear the ``l``-th lowest set bit of ``s`` (the face opposite vertex ``i_l``)."""
    k = simplex_dim(s)
    if k == 0:
        raise InvalidSimplexError("removing the only vertex would leave an empty simplex")
    if not 0 <= l <= k:
        raise SimplexIndexError(f"vertex rank {l} outside [0, {k}]")
    word = s
    for _ in range(l):
        word &= word - 1
    return s & ~(word & -word)


def faces(s: int) -> Iterable[tuple[int, int]]:
    """Yield ``(l, face)`` for each codimension-one face of ``s``."""
    word = s
    l = 0
    while word:
        low = word & -word
        yield l, s & ~low
        word ^= low
        l += 1
