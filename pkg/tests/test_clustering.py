import itertools
import random

import numpy as np
import pytest

from forestmap.clustering import (
    ClusterCurve,
    Dendrogram,
    cluster_curve,
    complete_linkage,
    dynamic_hybrid_cut,
    medoid,
)

# three-point example: 0 and 1 are close, 2 is far from both
D3 = np.array([[0.0, 0.1, 0.9], [0.1, 0.0, 0.8], [0.9, 0.8, 0.0]])


def random_distance_matrix(rng, n):
    M = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            M[i, j] = M[j, i] = rng.random()
    return M


def test_linkage_single_point():
    d = complete_linkage(np.zeros((1, 1)))
    assert d.n == 1 and d.merges == []


def test_linkage_hand_trace():
    d = complete_linkage(D3)
    assert len(d.merges) == 2
    assert (d.merges[0].left, d.merges[0].right) == (0, 1)
    assert d.merges[0].height == pytest.approx(0.1)
    # second merge joins leaf 2 with internal node 3 at the complete-linkage max
    assert (d.merges[1].left, d.merges[1].right) == (2, 3)
    assert d.merges[1].height == pytest.approx(0.9)


def test_linkage_zero_matrix():
    d = complete_linkage(np.zeros((5, 5)))
    assert all(m.height == 0.0 for m in d.merges)
    assert d.merges[-1].size == 5


def test_linkage_heights_monotone():
    rng = random.Random(3)
    for _ in range(10):
        M = random_distance_matrix(rng, 12)
        d = complete_linkage(M)
        h = d.heights()
        assert all(a <= b + 1e-12 for a, b in zip(h, h[1:]))


def test_medoid_trivial_and_hand_trace():
    assert medoid([2], D3) == 2
    # summed distances over {0,1,2}: 1.0, 0.9, 1.7
    assert medoid([0, 1, 2], D3) == 1


def test_medoid_matches_brute_force():
    rng = random.Random(9)
    for _ in range(20):
        n = rng.randrange(3, 12)
        M = random_distance_matrix(rng, n)
        members = sorted(rng.sample(range(n), rng.randrange(2, n + 1)))
        best = min(members, key=lambda i: (sum(M[i, j] for j in members), i))
        assert medoid(members, M) == best


def test_cut_three_point_hand_trace():
    d = complete_linkage(D3)
    c = dynamic_hybrid_cut(d, D3, 1)
    assert c.clusters == [[0, 1], [2]]
    assert list(c.labels) == [0, 0, 1]
    assert c.medoids == [0, 2]


def test_cut_zero_matrix_single_cluster():
    M = np.zeros((6, 6))
    d = complete_linkage(M)
    c = dynamic_hybrid_cut(d, M, 2)
    assert c.n_clusters == 1
    assert c.clusters == [list(range(6))]


def test_cut_min_size_one_allows_singletons():
    M = np.ones((4, 4)) - np.eye(4)
    d = complete_linkage(M)
    c = dynamic_hybrid_cut(d, M, 1)
    assert sorted(i for cl in c.clusters for i in cl) == [0, 1, 2, 3]


def assert_valid_clustering(c, n, m):
    flat = sorted(i for cl in c.clusters for i in cl)
    assert flat == list(range(n))  # total partition
    assert all(len(cl) >= min(m, n) or c.n_clusters == 1 for cl in c.clusters)
    sizes = [len(cl) for cl in c.clusters]
    assert sizes == sorted(sizes, reverse=True)
    for cid, cl in enumerate(c.clusters):
        assert all(c.labels[i] == cid for i in cl)
        assert c.medoids[cid] in cl


def test_cut_partition_size_and_medoid_invariants():
    rng = random.Random(17)
    for _ in range(15):
        n = rng.randrange(4, 25)
        M = random_distance_matrix(rng, n)
        d = complete_linkage(M)
        for m in (1, 2, 3, n // 2):
            if m < 1:
                continue
            c = dynamic_hybrid_cut(d, M, m)
            assert_valid_clustering(c, n, m)
            # medoids are the brute-force argmin within their final clusters
            for cid, cl in enumerate(c.clusters):
                best = min(cl, key=lambda i: (sum(M[i, j] for j in cl), i))
                assert c.medoids[cid] == best


def test_cut_deterministic():
    rng = random.Random(23)
    M = random_distance_matrix(rng, 20)
    d = complete_linkage(M)
    a = dynamic_hybrid_cut(d, M, 2)
    b = dynamic_hybrid_cut(d, M, 2)
    assert a.clusters == b.clusters and a.medoids == b.medoids


def test_cut_invalid_m():
    with pytest.raises(ValueError):
        dynamic_hybrid_cut(complete_linkage(D3), D3, 0)


def _stub_curve(counts_by_m, n):
    """Drive cluster_curve with a canned m -> cluster count table."""
    dend = Dendrogram([], n)

    class FakeClustering:
        def __init__(self, k):
            self.n_clusters = k

    def cut(d, M, m):
        return FakeClustering(counts_by_m[m])

    return cluster_curve(dend, None, cut=cut)


def test_curve_elbow_hand_trace():
    # counts for m=2..8; slopes [0,-3,-3,-1,0,0], slope changes [-3,0,2,1,0]
    counts = dict(zip(range(2, 9), [9, 9, 6, 3, 2, 2, 2]))
    curve = _stub_curve(counts, 16)
    assert curve.samples == list(zip(range(2, 9), [9, 9, 6, 3, 2, 2, 2]))
    assert curve.default_m == 3


def test_curve_linear_counts():
    counts = {m: 20 - m for m in range(2, 9)}
    curve = _stub_curve(counts, 16)
    assert curve.default_m == 3


def test_curve_tiny_n_defaults_to_two():
    M = random_distance_matrix(random.Random(1), 5)
    d = complete_linkage(M)
    curve = cluster_curve(d, M)
    assert curve.default_m == 2


def test_curve_on_real_matrix():
    rng = random.Random(5)
    M = random_distance_matrix(rng, 30)
    d = complete_linkage(M)
    curve = cluster_curve(d, M)
    ms = [m for m, _ in curve.samples]
    assert ms == list(range(2, 16))
    assert any(m == curve.default_m for m in ms)
    counts = [c for _, c in curve.samples]
    assert all(c >= 1 for c in counts)
