import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from cochainlab.cochains import Cochain, edge_list, random_cochain
from cochainlab.complexes import (
    ProjectionKernel,
    TwoComplex,
    all_triangles,
    avoidance_probability,
    avoidance_probability_exact,
    build_kernel,
    enumerate_hypertrees,
    exact_kernel,
    full_two_skeleton,
    log_avoidance_probability_exact,
    log_containment_upper_bound,
    one_out_containment_probability,
    sample_hypertree,
    sample_linial_meshulam,
    sample_one_out,
    triangle_edge_counts,
    triangle_index,
)
from cochainlab.groups import Group
from cochainlab.homology import boundary_matrices, smith_normal_form


def test_two_complex_normalizes():
    X = TwoComplex(5, [(3, 2, 1), (1, 2, 3), (2, 4, 5)])
    assert X.triangles == ((1, 2, 3), (2, 4, 5))
    assert X.num_faces == 2


def test_two_complex_rejects_bad_input():
    with pytest.raises(ValueError):
        TwoComplex(2, [])
    with pytest.raises(ValueError):
        TwoComplex(5, [(1, 1, 2)])
    with pytest.raises(ValueError):
        TwoComplex(5, [(1, 2, 6)])
    with pytest.raises(ValueError):
        TwoComplex(5, [(0, 1, 2)])


def test_all_triangles_count_and_index():
    n = 7
    tris = all_triangles(n)
    assert len(tris) == math.comb(n, 3)
    for i, t in enumerate(tris):
        assert triangle_index(n, t) == i
    assert triangle_index(n, (5, 3, 1)) == triangle_index(n, (1, 3, 5))


def test_triangle_edge_counts_oracle():
    rng = np.random.default_rng(10)
    n = 6
    tris = [t for t in all_triangles(n) if rng.random() < 0.5]
    t = triangle_edge_counts(n, tris)
    assert (t == t.T).all()
    assert (np.diag(t) == 0).all()
    for u in range(1, n + 1):
        for w in range(u + 1, n + 1):
            expect = sum(1 for tri in tris if u in tri and w in tri)
            assert t[u - 1, w - 1] == expect


def test_one_out_covers_every_edge():
    rng = np.random.default_rng(11)
    for _ in range(20):
        X = sample_one_out(8, rng)
        t = triangle_edge_counts(8, X.triangles)
        for u, v in edge_list(8):
            assert t[u - 1, v - 1] >= 1
        assert X.num_faces <= len(edge_list(8))


def test_one_out_third_vertex_marginal():
    # n=5: triangle (1,2,v) appears iff one of its three edges picked it,
    # so after dedup P = 1 - (1 - 1/3)^3 = 19/27 for each v in {3, 4, 5}
    rng = np.random.default_rng(12)
    counts = {3: 0, 4: 0, 5: 0}
    reps = 6000
    for _ in range(reps):
        X = sample_one_out(5, rng)
        for t in X.triangles:
            if 1 in t and 2 in t:
                third = next(v for v in t if v not in (1, 2))
                counts[third] += 1
    for v, c in counts.items():
        assert abs(c / reps - 19 / 27) < 0.025, (v, c)


def test_linial_meshulam_extremes():
    rng = np.random.default_rng(13)
    assert sample_linial_meshulam(6, 0.0, rng).num_faces == 0
    assert sample_linial_meshulam(6, 6.0, rng).num_faces == math.comb(6, 3)
    with pytest.raises(ValueError):
        sample_linial_meshulam(6, 7.0, rng)


# ---------------------------------------------------------------------------
# projection kernel

def test_kernel_invariants():
    for n in (4, 5, 6):
        kern = build_kernel(n)
        K = kern.K
        F = math.comb(n, 3)
        assert K.shape == (F, F)
        assert np.allclose(K, K.T, atol=1e-12)
        assert np.allclose(K @ K, K, atol=1e-10)
        assert abs(np.trace(K) - math.comb(n - 1, 2)) < 1e-10
        assert kern.rank == math.comb(n - 1, 2)


def test_kernel_diagonal_n4():
    # at n = 4 every triangle has inclusion probability rank/faces = 3/4
    kern = build_kernel(4)
    assert np.allclose(np.diag(kern.K), 0.75, atol=1e-12)


def test_subset_probability_matches_exact_kernel():
    n = 5
    kern = build_kernel(n)
    N, D = exact_kernel(n)
    tris = all_triangles(n)
    for size in (1, 2):
        for S in itertools.combinations(tris, size):
            got = kern.subset_probability(S)
            idx = [triangle_index(n, t) for t in S]
            sub = [[Fraction(int(N[i, j]), int(D)) for j in idx] for i in idx]
            # exact determinant via Fraction expansion (tiny sizes only)
            expect = _det_fraction(sub)
            assert abs(got - float(expect)) < 1e-9


def _det_fraction(rows):
    m = len(rows)
    if m == 1:
        return rows[0][0]
    total = Fraction(0)
    for j in range(m):
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        sign = -1 if j % 2 else 1
        total += sign * rows[0][j] * _det_fraction(minor)
    return total


def test_exact_kernel_denominator():
    for n in (4, 5, 6):
        N, D = exact_kernel(n)
        assert D == n ** math.comb(n - 2, 2)


def test_avoidance_exact_vs_float():
    rng = np.random.default_rng(14)
    n = 5
    kern = build_kernel(n)
    tris = all_triangles(n)
    for _ in range(15):
        Y = [t for t in tris if rng.random() < 0.35]
        p_float = avoidance_probability(kern, Y)
        p_exact = avoidance_probability_exact(n, Y)
        assert 0 <= p_exact <= 1
        assert abs(p_float - float(p_exact)) < 1e-10


def test_avoidance_extreme_sets():
    # containment in the full skeleton is certain, in the empty set impossible
    tris = all_triangles(5)
    assert avoidance_probability_exact(5, tris) == 1
    assert log_avoidance_probability_exact(5, tris) == 0.0
    assert avoidance_probability_exact(5, []) == 0
    assert log_avoidance_probability_exact(5, []) == -math.inf


def test_avoidance_vs_enumeration_n4():
    # direct check against the tree list: P(T subset Y) weighted by torsion^2
    trees = enumerate_hypertrees(4)
    total = sum(t * t for _, t in trees)
    tris = all_triangles(4)
    rng = np.random.default_rng(15)
    for _ in range(10):
        Y = frozenset(t for t in tris if rng.random() < 0.6)
        hit = sum(t * t for X, t in trees if X.triangle_set() <= Y)
        assert avoidance_probability_exact(4, Y) == Fraction(hit, total)


def test_log_containment_upper_bound_dominates():
    rng = np.random.default_rng(16)
    n = 6
    tris = all_triangles(n)
    for _ in range(10):
        Y = [t for t in tris if rng.random() < 0.25]
        exact = log_avoidance_probability_exact(n, Y)
        bound = log_containment_upper_bound(n, Y)
        if exact == -math.inf:
            assert bound == -math.inf or bound <= 0
        else:
            assert exact <= bound + 1e-9


def test_one_out_containment_exact_formula():
    # P(complex subset Y) for one-out: product over edges of t_Y(edge)/(n-2),
    # verified by full enumeration of the (n-2)^E outcomes at n = 4
    n = 4
    edges = edge_list(n)
    rng = np.random.default_rng(17)
    tris = all_triangles(n)
    for _ in range(8):
        Y = [t for t in tris if rng.random() < 0.7]
        want = one_out_containment_probability(n, Y, exact=True)
        choices = []
        for u, v in edges:
            others = [w for w in range(1, n + 1) if w not in (u, v)]
            choices.append([tuple(sorted((u, v, w))) for w in others])
        Yset = set(tuple(sorted(t)) for t in Y)
        hit = total = 0
        for combo in itertools.product(*choices):
            total += 1
            if all(f in Yset for f in combo):
                hit += 1
        assert want == Fraction(hit, total)


def test_one_out_containment_float_matches_exact():
    n = 6
    rng = np.random.default_rng(18)
    tris = all_triangles(n)
    Y = [t for t in tris if rng.random() < 0.3]
    f = one_out_containment_probability(n, Y)
    e = one_out_containment_probability(n, Y, exact=True)
    assert abs(f - float(e)) < 1e-12


# ---------------------------------------------------------------------------
# sampling and enumeration

def test_sample_hypertree_is_hypertree():
    rng = np.random.default_rng(19)
    for n in (4, 5, 6, 8):
        for _ in range(5):
            T = sample_hypertree(n, rng)
            assert T.num_faces == math.comb(n - 1, 2)
            d2 = boundary_matrices(T).d2
            d = smith_normal_form(d2)
            assert all(x >= 1 for x in d)
            assert len(d) == T.num_faces  # full column rank: acyclic H_2


def test_sample_hypertree_accepts_kernel_object():
    rng = np.random.default_rng(20)
    kern = build_kernel(5)
    T = sample_hypertree(kern, rng)
    assert isinstance(T, TwoComplex)
    assert T.num_faces == kern.rank


def test_enumerate_counts():
    # n = 4: every 3-subset of the 4 faces works, all torsion-free
    trees4 = enumerate_hypertrees(4)
    assert len(trees4) == 4
    assert all(t == 1 for _, t in trees4)
    trees5 = enumerate_hypertrees(5)
    assert sum(t * t for _, t in trees5) == 5 ** 3
    assert all(t == 1 for _, t in trees5)


def test_enumerate_rejects_big_n():
    with pytest.raises(ValueError):
        enumerate_hypertrees(7)
