import json

import numpy as np
import pytest

from cvtda import verification as ver
from cvtda.geometry import pairwise_sq_distances
from cvtda.homology import boundary_matrices, chain_defect
from cvtda.rips import full_complex


def test_corpus_is_reproducible():
    a, b = ver.random_corpus(10, seed=7), ver.random_corpus(10, seed=7)
    assert all(np.array_equal(x.coords, y.coords) and e == f for (x, e), (y, f) in zip(a, b))
    assert all(1 <= pc.n <= 10 and eps >= 0 for pc, eps in ver.random_corpus(30))


def test_mutation_breaks_chain_identity():
    bms = boundary_matrices(full_complex(4))
    assert chain_defect(bms) == 0
    assert chain_defect(ver.mutate_sign(bms)) > 0
    # original matrices are untouched
    assert chain_defect(bms) == 0


def test_mutation_without_higher_maps_is_noop():
    bms = boundary_matrices(full_complex(2))
    assert chain_defect(ver.mutate_sign(bms)) == 0


def test_chain_suite_detects_mutation():
    corpus = ver.random_corpus(20)
    assert ver.chain_complex_suite(corpus).passed
    bad = ver.chain_complex_suite(corpus, mutate=True)
    assert not bad.passed and bad.max_deviation > 0


def test_small_suites_pass():
    corpus = ver.random_corpus(15)
    for res in (
        ver.dirac_square_suite(corpus),
        ver.betti_fixture_suite(),
        ver.distance_operator_suite(10),
        ver.grover_suite(max_n=5, max_r=8),
    ):
        assert res.passed, res.name
        json.dumps(res.to_json())


def test_trotter_ratios():
    res = ver.trotter_suite(halvings=4)
    assert res.passed
    for check in res.checks:
        assert np.all(np.diff(check["errors"]) < 0)


def test_appendix_case_fields():
    case = ver.appendix_case(0.7, 1, 1)
    assert case["deviation"] <= 1e-10
    assert case["ancilla_purity"] >= 1 - 1e-10
    reversed_case = ver.appendix_case(0.7, 1, 1, reverse=True)
    assert reversed_case["circuit_deviation"] > 0.1


def test_appendix_suite_subset():
    res = ver.appendix_suite(t_values=(0.0, 0.7), pair_counts=(1,), n_max_values=(1,))
    assert res.passed
    assert res.checks[-1]["case"].startswith("negative-control")
