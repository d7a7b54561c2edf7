"""Exit criteria. Run ``pytest tests/test_acceptance.py`` for the per-criterion summary."""

import time

import pytest

from gbtree.exact import (
    charpoly_tree,
    charpoly_tridiagonal,
    krylov_rank,
    main_count_divisor,
    poly_divides,
    verify_xi_identity,
)
from gbtree.partition import (
    characteristic_matrix,
    check_compatibility,
    check_similarity,
    divisor_matrix,
    level_partition,
)
from gbtree.search import SearchConfig, enumerate_degrees, scan
from gbtree.spectra import TOL_CLUSTER, TOL_MAIN, main_spectrum_numeric, walk_matrix_rank
from gbtree.tree import (
    DegreeSequence,
    adjacency,
    bethe_degrees,
    build_tree,
    counterexample_degrees,
    level_sizes,
    quasi_regular_degrees,
)
from gbtree.verify import verify_main_spectrum_equality

from conftest import random_sample

EVEN_K = range(6, 41, 2)
SAMPLE = random_sample(30, max_k=5, max_d=4)
COUNTEREXAMPLE = DegreeSequence((5, 3, 5, 3, 2))


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


@pytest.mark.criterion(1, "xi identity: B^T xi = -2 xi and sum(xi) = 0, even k in 6..40, exact, < 1 s")
def test_c01_xi_identity():
    with Timer() as t:
        reports = [verify_xi_identity(k) for k in EVEN_K]
    assert all(r.eigen_ok and r.orthogonal_ok for r in reports)
    assert t.elapsed < 1.0


@pytest.mark.criterion(2, "counterexample family has <= k-1 main eigenvalues (exact Krylov rank), < 5 s")
def test_c02_counterexample_bound():
    with Timer() as t:
        counts = {k: main_count_divisor(divisor_matrix(counterexample_degrees(k))) for k in EVEN_K}
    assert all(counts[k] <= k - 1 for k in EVEN_K), counts
    assert t.elapsed < 5.0


@pytest.mark.criterion(3, "B_(d,k) and Q_(d,k) have exactly k main eigenvalues, d in 2..4, k in 3..8, < 5 s")
def test_c03_theorem1():
    with Timer() as t:
        bad = [
            (d, k, kind)
            for d in (2, 3, 4)
            for k in range(3, 9)
            for kind, ds in (("bethe", bethe_degrees(d, k)), ("quasi", quasi_regular_degrees(d, k)))
            if main_count_divisor(divisor_matrix(ds)) != k
        ]
    assert bad == []
    assert t.elapsed < 5.0


@pytest.mark.criterion(4, "(a^2-a+1, a) has exactly 2 main eigenvalues, a in 2..6, < 1 s")
def test_c04_hou_family():
    with Timer() as t:
        counts = [main_count_divisor(divisor_matrix(DegreeSequence((a * a - a + 1, a))))
                  for a in range(2, 7)]
    assert counts == [2] * 5
    assert t.elapsed < 1.0


@pytest.mark.criterion(5, "30 random trees: numeric main count = exact, main values bracket divisor roots (1e-7), < 2 min")
def test_c05_main_spectrum_equality():
    assert len(SAMPLE) == 30
    assert all(ds.k <= 5 and max(ds.degrees) <= 4 for ds in SAMPLE)
    with Timer() as t:
        outcomes = [verify_main_spectrum_equality(ds, tol_cluster=1e-7) for ds in SAMPLE]
    failed = [(o.instance, o.observed) for o in outcomes if not o.passed]
    assert failed == []
    assert all(o.observed["exact_main_count"] == o.observed["numeric_main_count"] for o in outcomes)
    assert all(all(o.observed["bracketed"]) for o in outcomes)
    assert t.elapsed < 120.0


@pytest.mark.criterion(6, "det(xI-B) divides det(xI-A) exactly for the random sample plus B(5,3,5,3,2), < 1 min")
def test_c06_charpoly_divisibility():
    with Timer() as t:
        bad = [ds for ds in [*SAMPLE, COUNTEREXAMPLE]
               if not poly_divides(charpoly_tridiagonal(divisor_matrix(ds)), charpoly_tree(ds))]
    assert bad == []
    assert t.elapsed < 60.0


def _all_instances():
    seen = {}
    for k in EVEN_K:
        seen[counterexample_degrees(k)] = None
    for d in (2, 3, 4):
        for k in range(3, 9):
            seen[bethe_degrees(d, k)] = None
            seen[quasi_regular_degrees(d, k)] = None
    for a in range(2, 7):
        seen[DegreeSequence((a * a - a + 1, a))] = None
    for ds in [*SAMPLE, COUNTEREXAMPLE, *enumerate_degrees(4, 8)]:
        seen[ds] = None
    return list(seen)


@pytest.mark.criterion(7, "AC = CB and b_ij|C_i| = b_ji|C_j| exactly for every instance used in this suite")
def test_c07_compatibility_and_similarity():
    instances = _all_instances()
    bad = []
    for ds in instances:
        tree = build_tree(ds)
        B = divisor_matrix(ds)
        C = characteristic_matrix(level_partition(tree))
        if not check_compatibility(adjacency(tree), C, B) or not check_similarity(B, level_sizes(ds)):
            bad.append(ds)
    assert bad == []
    assert len(instances) > 380


@pytest.mark.criterion(8, "numeric walk-matrix rank equals the exact divisor count on the random sample")
def test_c08_walk_rank_oracle():
    bad = []
    for ds in SAMPLE:
        A = adjacency(build_tree(ds))
        if walk_matrix_rank(A) != main_count_divisor(divisor_matrix(ds)):
            bad.append(ds)
    assert bad == []


@pytest.mark.criterion(9, "-2 is an eigenvalue but not main for B(5,3,5,3,2), numerically and exactly, < 10 s")
def test_c09_minus_two_non_main():
    with Timer() as t:
        A = adjacency(build_tree(COUNTEREXAMPLE))
        assert A.shape == (216, 216)
        report = main_spectrum_numeric(A)
        cluster = report.cluster_near(-2.0, TOL_CLUSTER)
        B = divisor_matrix(COUNTEREXAMPLE)
        p = charpoly_tridiagonal(B)
        count = krylov_rank(B.tolist(), [1] * 6)
    assert cluster is not None and abs(cluster.value + 2) <= 1e-7
    assert cluster.projection_norm < TOL_MAIN
    assert not cluster.is_main
    assert p(-2) == 0
    assert count <= 5
    assert t.elapsed < 10.0


@pytest.mark.criterion(10, "k = 4 exhaustive scan, max_degree 8 (343 divisors), identical at 1 and 4 workers, < 10 s")
def test_c10_k4_scan():
    with Timer() as t:
        serial = scan(SearchConfig(4, 8, worker_count=1))
        parallel = scan(SearchConfig(4, 8, worker_count=4))
    assert serial.to_dict() == parallel.to_dict()
    assert serial.total == 343 == sum(serial.histogram.values())
    assert not serial.failures
    assert all(1 <= c <= 4 for c in serial.histogram)
    assert t.elapsed < 10.0
    # outcome is reported, not presumed
    print(f"k=4, max_degree=8: histogram {serial.histogram}, hits {[str(h.degrees) for h in serial.hits]}")
