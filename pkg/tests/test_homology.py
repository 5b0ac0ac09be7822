import itertools
import math

import numpy as np
import pytest
from fractions import Fraction

from cochainlab.cochains import edge_list
from cochainlab.complexes import TwoComplex, full_two_skeleton
from cochainlab.groups import Group
from cochainlab.homology import (
    bareiss_det,
    boundary_matrices,
    count_cocycles,
    cycle_space_dim,
    dim_h1_mod_p,
    dim_z1_mod_p,
    homology_report,
    min_generators_h1,
    rank_mod_p,
    rank_rational,
    smith_normal_form,
    torsion_bound_ok,
    torsion_order,
)
from cochainlab.lab.certify import PROJECTIVE_PLANE_6


def test_boundary_squares_to_zero():
    X = full_two_skeleton(6)
    B = boundary_matrices(X)
    assert (B.d1 @ B.d2 == 0).all()


def test_boundary_shapes():
    X = full_two_skeleton(5)
    B = boundary_matrices(X)
    assert B.d1.shape == (5, 10)
    assert B.d2.shape == (10, 10)


def _rank_oracle_mod_p(M, p):
    """Fraction elimination over integers reduced mod p, no bit tricks."""
    A = [[Fraction(int(x) % p) for x in row] for row in M]
    rank = 0
    rows = len(A)
    cols = len(A[0]) if rows else 0
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i][c] % p != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(int(A[r][c]), p - 2, p)
        A[r] = [(v * inv) % p for v in A[r]]
        for i in range(rows):
            if i != r and A[i][c] % p:
                f = A[i][c]
                A[i] = [(a - f * b) % p for a, b in zip(A[i], A[r])]
        r += 1
        rank += 1
    return rank


def test_rank_mod_p_small_random():
    rng = np.random.default_rng(1)
    for trial in range(20):
        p = [2, 3, 5, 7][trial % 4]
        M = rng.integers(-10, 10, size=(rng.integers(1, 7), rng.integers(1, 7)))
        assert rank_mod_p(M, p) == _rank_oracle_mod_p(M, p)


def test_rank_rational_vs_numpy():
    rng = np.random.default_rng(2)
    for _ in range(10):
        M = rng.integers(-5, 6, size=(6, 6))
        assert rank_rational(M) == np.linalg.matrix_rank(M.astype(float))


def test_bareiss_matches_numpy_det():
    rng = np.random.default_rng(3)
    for _ in range(15):
        M = rng.integers(-6, 7, size=(5, 5))
        got = bareiss_det(M.astype(object))
        expect = round(float(np.linalg.det(M.astype(float))))
        assert got == expect


def test_bareiss_singular():
    M = np.array([[1, 2], [2, 4]], dtype=object)
    assert bareiss_det(M) == 0


def test_snf_of_diagonal():
    M = np.diag([6, 4, 0, 10]).astype(np.int64)
    assert smith_normal_form(M) == (2, 2, 60)


def test_snf_divisibility_chain():
    rng = np.random.default_rng(4)
    for _ in range(25):
        M = rng.integers(-8, 9, size=(rng.integers(2, 7), rng.integers(2, 7)))
        d = smith_normal_form(M)
        assert all(x > 0 for x in d)
        for a, b in zip(d, d[1:]):
            assert b % a == 0


def test_snf_known_2x2():
    # divisors of [[2, 4], [6, 8]]: d1 = gcd of entries = 2, d1*d2 = |det| = 8
    assert smith_normal_form(np.array([[2, 4], [6, 8]])) == (2, 4)


def test_snf_projective_plane():
    d2 = boundary_matrices(PROJECTIVE_PLANE_6).d2
    assert smith_normal_form(d2) == (1,) * 9 + (2,)
    assert torsion_order(PROJECTIVE_PLANE_6) == 2
    assert min_generators_h1(PROJECTIVE_PLANE_6) == 1
    assert torsion_bound_ok(PROJECTIVE_PLANE_6)


def test_projective_plane_mod_p_dims():
    assert dim_h1_mod_p(PROJECTIVE_PLANE_6, 2) == 1
    assert dim_h1_mod_p(PROJECTIVE_PLANE_6, 3) == 0


def _count_cocycles_brute(X: TwoComplex, group: Group) -> int:
    """Enumerate all labelings of the edges; count those compatible on every
    face. Only usable for tiny instances."""
    n = X.n
    edges = edge_list(n)
    m = len(edges)
    eidx = {e: i for i, e in enumerate(edges)}
    count = 0
    for labels in itertools.product(range(group.order), repeat=m):
        ok = True
        for (u, v, w) in X.triangles:
            a = group.element(labels[eidx[(u, v)]])
            b = group.element(labels[eidx[(v, w)]])
            c = group.element(labels[eidx[(u, w)]])
            if group.add(a, b) != c:
                ok = False
                break
        if ok:
            count += 1
    return count


def test_count_cocycles_brute_force_n4():
    rng = np.random.default_rng(5)
    tris4 = full_two_skeleton(4).triangles
    for trial in range(8):
        keep = [t for t in tris4 if rng.random() < 0.6]
        X = TwoComplex(4, keep) if keep else TwoComplex(4, [])
        for moduli in [(2,), (3,), (4,), (2, 2)]:
            g = Group(moduli)
            assert count_cocycles(X, g) == _count_cocycles_brute(X, g)


def test_count_cocycles_composite_vs_prime_product():
    # Z/6 factors as Z/2 x Z/3, so the cocycle counts multiply
    rng = np.random.default_rng(6)
    tris = full_two_skeleton(5).triangles
    keep = [t for t in tris if rng.random() < 0.5]
    X = TwoComplex(5, keep)
    assert count_cocycles(X, Group((6,))) == count_cocycles(X, Group((2,))) * count_cocycles(
        X, Group((3,))
    )


def test_count_cocycles_full_skeleton_equals_coboundaries():
    # complete 2-skeleton has H^1 = 0, so only the |G|^(n-1) coboundaries remain
    for n in (4, 5):
        X = full_two_skeleton(n)
        for moduli in [(2,), (3,), (2, 2)]:
            g = Group(moduli)
            assert count_cocycles(X, g) == g.order ** (n - 1)


def test_dim_z1_and_h1_relation():
    X = full_two_skeleton(5)
    assert cycle_space_dim(5) == 6
    assert dim_z1_mod_p(X, 2) == 4  # coboundary dim n-1
    assert dim_h1_mod_p(X, 2) == 0


def test_dim_h1_empty_complex():
    X = TwoComplex(5, [])
    assert dim_h1_mod_p(X, 2) == cycle_space_dim(5)


def test_homology_report_roundtrip():
    X = PROJECTIVE_PLANE_6
    rep = homology_report(X)
    assert rep.n == 6
    assert rep.num_faces == 10
    assert rep.torsion_order == 2
    assert rep.min_generators == 1
    d = rep.to_json_dict()
    assert d["torsion_order"] == 2
    rep2 = homology_report(X, p=2, include_snf=False)
    assert rep2.dim_h1 == 1
    assert rep2.elementary_divisors is None


def test_snf_big_entries_stay_exact():
    # entries past float precision; SNF must not round
    M = np.array([[2**40, 1], [1, 2**40]], dtype=object)
    d = smith_normal_form(M)
    prod = d[0] * d[1]
    assert prod == abs(2**80 - 1)
