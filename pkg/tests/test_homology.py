import math

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cvtda.errors import ConsistencyError, DimensionError
from cvtda.fixtures import all_fixtures, circle, octahedron, single_point, two_clusters
from cvtda.geometry import PointCloud, pairwise_sq_distances
from cvtda.homology import (
    BettiVector,
    betti_exact,
    betti_numbers,
    boundary_matrices,
    boundary_matrix,
    chain_defect,
    dirac_operator,
    dirac_square_defect,
    integer_rank,
    kernel_count,
    laplacian,
    to_coo_text,
    unrestricted_dirac,
    verify_chain_complex,
    verify_dirac_square,
)
from cvtda.rips import VietorisRipsComplex, enumerate_vr, full_complex
from cvtda.verification import mutate_sign

from conftest import clouds

SQUARE = PointCloud([[0, 0], [1, 0], [1, 1], [0, 1]])


def square_complex():
    return enumerate_vr(pairwise_sq_distances(SQUARE), 1.1)


def vertices_only(n=3):
    return VietorisRipsComplex(0.0, n, tuple([tuple(1 << i for i in range(n))] + [()] * (n - 1)))


class TestBoundary:
    def test_triangle_column(self):
        bm = boundary_matrix(full_complex(3), 2)
        assert bm.rows == (0b011, 0b101, 0b110)
        assert bm.toarray().ravel().tolist() == [1, -1, 1]

    def test_empty_columns(self):
        bm = boundary_matrix(vertices_only(3), 1)
        assert bm.shape == (3, 0)

    def test_square_edges(self):
        bm = boundary_matrix(square_complex(), 1)
        M = bm.toarray()
        assert M.shape == (4, 4)
        assert np.all(np.sum(M != 0, axis=0) == 2)
        assert np.all(M.sum(axis=0) == 0)
        # edge {0,1}: dropping vertex 0 gives +{1}, dropping vertex 1 gives -{0}
        assert M[:, 0].tolist() == [-1, 1, 0, 0]

    def test_dimension_range(self):
        with pytest.raises(DimensionError):
            boundary_matrix(full_complex(3), 0)
        with pytest.raises(DimensionError):
            boundary_matrix(full_complex(3), 3)

    @given(clouds(max_n=7), st.floats(0, 5))
    def test_columns_have_k_plus_one_entries(self, pc, eps):
        vr = enumerate_vr(pairwise_sq_distances(pc), eps)
        for bm in boundary_matrices(vr):
            M = bm.toarray()
            assert set(np.unique(M)) <= {-1, 0, 1}
            if M.size:
                assert np.all(np.sum(M != 0, axis=0) == bm.k + 1)


class TestDirac:
    def test_vertices_only_zero(self):
        B = dirac_operator(vertices_only(4))
        assert B.dim == 4 and B.matrix.nnz == 0

    def test_triangle(self):
        B = dirac_operator(full_complex(3))
        M = B.toarray()
        assert M.shape == (7, 7)
        assert np.array_equal(M, M.T) and np.trace(M) == 0
        assert B.offsets == (0, 3, 6, 7)
        assert B.sector_labels().tolist() == [0, 0, 0, 1, 1, 1, 2]

    def test_two_disjoint_edges(self):
        pc = PointCloud([[0, 0], [0.1, 0], [5, 0], [5.1, 0]])
        B = dirac_operator(enumerate_vr(pairwise_sq_distances(pc), 0.5))
        assert B.dim == 6
        block = B.toarray()[B.sector(0), B.sector(1)]
        assert block.shape == (4, 2)
        assert np.array_equal(np.abs(block), [[1, 0], [1, 0], [0, 1], [0, 1]])

    def test_block_pattern(self):
        vr = full_complex(4)
        B = dirac_operator(vr)
        M = B.toarray()
        for a in range(B.sectors):
            for b in range(B.sectors):
                if abs(a - b) != 1:
                    assert not M[B.sector(a), B.sector(b)].any()

    def test_unrestricted(self):
        assert unrestricted_dirac(3).dim == 7


class TestLaplacian:
    def test_isolated_vertices(self):
        assert not laplacian(vertices_only(2), 0).any()

    def test_triangle_blocks(self):
        L0 = laplacian(full_complex(3), 0)
        assert np.allclose(np.linalg.eigvalsh(L0), [0, 3, 3])
        assert np.array_equal(np.diag(L0), [2, 2, 2])
        assert laplacian(full_complex(3), 2).tolist() == [[3]]

    def test_range(self):
        with pytest.raises(DimensionError):
            laplacian(full_complex(3), 3)

    @given(clouds(max_n=7), st.floats(0, 5))
    def test_psd_symmetric(self, pc, eps):
        vr = enumerate_vr(pairwise_sq_distances(pc), eps)
        for k in range(vr.n):
            L = laplacian(vr, k)
            assert np.array_equal(L, L.T)
            if L.size:
                assert np.linalg.eigvalsh(L.astype(float)).min() > -1e-9


class TestRank:
    def test_simple(self):
        assert integer_rank(np.array([[1, 2], [2, 4]])) == 1
        assert integer_rank(np.zeros((3, 0), dtype=int)) == 0
        assert integer_rank(np.eye(4, dtype=int)) == 4

    @settings(max_examples=80)
    @given(arrays(np.int64, st.tuples(st.integers(1, 7), st.integers(1, 7)), elements=st.integers(-3, 3)))
    def test_matches_sympy(self, A):
        assert integer_rank(A) == sympy.Matrix(A.tolist()).rank()

    def test_low_rank_products(self, rng):
        for _ in range(20):
            r = int(rng.integers(1, 5))
            A = rng.integers(-4, 5, size=(8, r)) @ rng.integers(-4, 5, size=(r, 9))
            assert integer_rank(A) == sympy.Matrix(A.tolist()).rank()

    def test_kernel_count(self):
        assert kernel_count(np.zeros((0, 0))) == 0
        assert kernel_count(np.diag([0, 1, 0])) == 2


class TestBetti:
    @pytest.mark.parametrize("fx", all_fixtures(), ids=lambda f: f.name)
    def test_fixtures(self, fx):
        vr = enumerate_vr(pairwise_sq_distances(fx.cloud), fx.epsilon)
        assert betti_numbers(vr, 2).betti == fx.betti

    def test_components_match_union_find(self, rng):
        for _ in range(15):
            n = int(rng.integers(2, 10))
            pc = PointCloud(rng.normal(size=(n, 2)))
            D = pairwise_sq_distances(pc)
            eps = float(rng.uniform(0.2, 1.5))
            parent = list(range(n))

            def find(x):
                while parent[x] != x:
                    x = parent[x]
                return x

            for i in range(n):
                for j in range(i + 1, n):
                    if math.sqrt(D[i, j]) <= eps:
                        parent[find(i)] = find(j)
            comps = len({find(i) for i in range(n)})
            assert betti_exact(enumerate_vr(D, eps, kmax=1), 0) == comps

    def test_full_simplex(self):
        assert betti_numbers(full_complex(5)).betti == (1, 0, 0, 0, 0)

    def test_padding_and_json(self):
        bv = betti_numbers(enumerate_vr(np.zeros((1, 1)), 1.0), kmax=3)
        assert bv.betti == (1, 0, 0, 0)
        assert bv.to_json() == {"epsilon": 1.0, "betti": [1, 0, 0, 0]}

    def test_consistency_error_raised(self, monkeypatch):
        import cvtda.homology as hom

        monkeypatch.setattr(hom, "kernel_count", lambda L: -1)
        with pytest.raises(ConsistencyError):
            betti_exact(full_complex(3), 0)

    @settings(max_examples=40)
    @given(clouds(max_n=8), st.floats(0, 5))
    def test_euler_characteristic(self, pc, eps):
        vr = enumerate_vr(pairwise_sq_distances(pc), eps)
        betti = betti_numbers(vr).betti
        assert sum((-1) ** k * b for k, b in enumerate(betti)) == sum(
            (-1) ** k * c for k, c in enumerate(vr.counts)
        )
        assert all(b <= c for b, c in zip(betti, vr.counts))

    @settings(max_examples=25)
    @given(clouds(max_n=7), st.floats(0, 5), st.randoms(use_true_random=False))
    def test_permutation_invariant(self, pc, eps, random):
        perm = list(range(pc.n))
        random.shuffle(perm)
        shuffled = PointCloud(pc.coords[perm])
        a = betti_numbers(enumerate_vr(pairwise_sq_distances(pc), eps)).betti
        b = betti_numbers(enumerate_vr(pairwise_sq_distances(shuffled), eps)).betti
        assert a == b


class TestVerification:
    def test_triangle_chain(self):
        assert verify_chain_complex(full_complex(3))
        assert verify_dirac_square(full_complex(3))

    def test_vertices_and_square(self):
        assert verify_dirac_square(vertices_only(3))
        assert verify_dirac_square(square_complex())

    def test_single_sign_flip_detected(self):
        bms = mutate_sign(boundary_matrices(full_complex(4)))
        assert chain_defect(bms) == 2

    def test_whole_column_flip_is_not_detected(self):
        # negating an entire column keeps d d = 0, so the mutation fixture flips one entry
        bms = boundary_matrices(full_complex(3))
        d2 = bms[1].matrix.copy()
        d2.data = -d2.data
        assert (bms[0].matrix @ d2).count_nonzero() == 0

    @settings(max_examples=40)
    @given(clouds(max_n=8), st.floats(0, 5), st.integers(0, 7))
    def test_random_complexes(self, pc, eps, kmax):
        kmax = min(kmax, pc.n - 1)
        vr = enumerate_vr(pairwise_sq_distances(pc), eps, kmax)
        assert chain_defect(boundary_matrices(vr)) == 0
        assert dirac_square_defect(vr) == 0


def test_coo_export():
    text = to_coo_text(boundary_matrix(full_complex(3), 2).matrix)
    assert text == "# shape 3 1\n0 0 1\n1 0 -1\n2 0 1\n"
    assert to_coo_text(np.array([[0.5, 0]])) == "# shape 1 2\n0 0 0.5\n"
    assert to_coo_text(np.array([[1j]])).splitlines()[1] == "0 0 0.0 1.0"
