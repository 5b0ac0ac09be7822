"""Random 2-complexes on a complete 1-skeleton: the fixed-size determinantal
face model, the one-face-per-edge model, and Bernoulli faces; plus the
projection kernel behind the determinantal measure, exact avoidance
probabilities, and small-n exhaustive enumeration.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .cochains import edge_index, edge_list
from .homology import bareiss_det, boundary_matrices, smith_normal_form


@dataclass(frozen=True)
class TwoComplex:
    """Face set over the complete graph on [n]; triangles are sorted triples
    of 1-based vertices, stored sorted and deduplicated."""

    n: int
    triangles: tuple[tuple[int, int, int], ...]

    def __init__(self, n: int, triangles):
        n = int(n)
        if n < 3:
            raise ValueError("need n >= 3")
        norm = set()
        for t in triangles:
            t = tuple(sorted(int(v) for v in t))
            if len(set(t)) != 3:
                raise ValueError(f"triangle {t} has repeated vertices")
            if t[0] < 1 or t[2] > n:
                raise ValueError(f"triangle {t} out of range for n={n}")
            norm.add(t)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "triangles", tuple(sorted(norm)))

    @property
    def num_faces(self) -> int:
        return len(self.triangles)

    def triangle_set(self) -> frozenset:
        return frozenset(self.triangles)


@lru_cache(maxsize=None)
def all_triangles(n: int) -> tuple[tuple[int, int, int], ...]:
    return tuple(itertools.combinations(range(1, n + 1), 3))


@lru_cache(maxsize=None)
def _triangle_index_map(n: int) -> dict:
    return {t: i for i, t in enumerate(all_triangles(n))}


def triangle_index(n: int, t) -> int:
    return _triangle_index_map(n)[tuple(sorted(t))]


def full_two_skeleton(n: int) -> TwoComplex:
    return TwoComplex(n, all_triangles(n))


def triangle_edge_counts(n: int, triangles) -> np.ndarray:
    """t[u-1, w-1] = number of the given triangles containing edge {u, w};
    symmetric with zero diagonal."""
    t = np.zeros((n, n), dtype=np.int64)
    for a, b, c in triangles:
        for u, w in ((a, b), (a, c), (b, c)):
            t[u - 1, w - 1] += 1
            t[w - 1, u - 1] += 1
    return t


# ---------------------------------------------------------------------------
# samplers

def sample_one_out(n: int, rng: np.random.Generator) -> TwoComplex:
    """One face per edge of K_n: each edge {u, v} picks the third vertex
    uniformly from the remaining n - 2; duplicates collapse."""
    if n < 3:
        raise ValueError("need n >= 3")
    faces = []
    for u, v in edge_list(n):
        w = int(rng.integers(0, n - 2))
        # skip over u and v in the order they appear
        for x in sorted((u, v)):
            if w + 1 >= x:
                w += 1
        faces.append((u, v, w + 1))
    return TwoComplex(n, faces)


def sample_linial_meshulam(n: int, c: float, rng: np.random.Generator) -> TwoComplex:
    """Bernoulli(c/n) faces, independently over all triangles."""
    p = c / n
    if not 0 <= p <= 1:
        raise ValueError(f"face probability c/n = {p} out of [0, 1]")
    tris = all_triangles(n)
    keep = rng.random(len(tris)) < p
    return TwoComplex(n, [t for t, k in zip(tris, keep) if k])


# ---------------------------------------------------------------------------
# the projection kernel and exact determinantal sampling

def _reduced_boundary(n: int) -> np.ndarray:
    """Rows of d2 indexed by edges inside [n-1]; these span the full row
    space: a 1-cycle supported on the star of vertex n would live on a tree.
    Shape (C(n-1,2), C(n,3)), integer."""
    bm = boundary_matrices(full_two_skeleton(n))
    keep = [i for i, (u, v) in enumerate(edge_list(n)) if v <= n - 1]
    return bm.d2[keep, :]


class ProjectionKernel:
    """Orthogonal projection onto the row space of the full-skeleton triangle
    boundary operator; the marginal kernel of the fixed-size determinantal
    face measure.

    basis: (F, r) orthonormal columns; K = basis @ basis.T; rank r = C(n-1,2).
    """

    def __init__(self, n: int, basis: np.ndarray):
        self.n = n
        self.triangles = all_triangles(n)
        self.basis = basis
        self.rank = basis.shape[1]
        self.K = basis @ basis.T

    def subset_probability(self, S) -> float:
        """det(K_S); for |S| = rank this is the probability of sampling S."""
        idx = [triangle_index(self.n, t) for t in S]
        sub = self.K[np.ix_(idx, idx)]
        return float(np.linalg.det(sub))


def build_kernel(n: int) -> ProjectionKernel:
    """Orthonormalizes the boundary rows (SVD, rank threshold 1e-10) and
    checks the projection contracts: rank C(n-1,2), K symmetric idempotent."""
    if n < 3:
        raise ValueError("need n >= 3")
    if n > 30:
        raise ValueError("kernel build capped at n = 30 (dense C(n,3)^2 memory)")
    B = _reduced_boundary(n).astype(float)  # (r0, F) with full row rank
    # columns of V^T spanning the row space
    _, s, vt = np.linalg.svd(B, full_matrices=False)
    r = int((s > 1e-10 * s[0]).sum())
    expected = math.comb(n - 1, 2)
    if r != expected:
        raise ArithmeticError(f"numerical rank {r} != C(n-1,2) = {expected}")
    basis = vt[:r].T  # (F, r), orthonormal columns
    kern = ProjectionKernel(n, basis)
    if abs(np.trace(kern.K) - expected) > 1e-8:
        raise ArithmeticError("kernel trace drifted from the projection rank")
    if np.abs(kern.K @ kern.K - kern.K).max() > 1e-10:
        raise ArithmeticError("kernel is not idempotent within 1e-10")
    return kern


def sample_hypertree(kernel_or_n, rng: np.random.Generator) -> TwoComplex:
    """Exact fixed-size determinantal sample via sequential conditioning.

    Chain rule for projection kernels: the next point is drawn with
    probability K_ii / remaining-rank, then the kernel is replaced by its
    Schur complement at the chosen index. Returns exactly rank faces; drift
    in the conditioned diagonal is the first certificate-visible failure of
    the chain, guarded here.
    """
    kern = kernel_or_n if isinstance(kernel_or_n, ProjectionKernel) else build_kernel(kernel_or_n)
    K = kern.K.copy()
    F = K.shape[0]
    chosen: list[int] = []
    for step in range(kern.rank, 0, -1):
        w = np.clip(np.diag(K).copy(), 0.0, None)
        if chosen:
            w[chosen] = 0.0
        total = w.sum()
        if abs(total - step) > 1e-6 * max(step, 1):
            raise ArithmeticError(
                f"conditioned trace {total} drifted from remaining rank {step}"
            )
        u = rng.random() * total
        i = int(np.searchsorted(np.cumsum(w), u, side="right"))
        i = min(i, F - 1)
        chosen.append(i)
        d = K[i, i]
        if d <= 1e-9:
            raise ArithmeticError("conditioning picked a numerically null face")
        col = K[:, i].copy()
        K -= np.outer(col, col) / d
    tris = [kern.triangles[i] for i in chosen]
    if len(set(tris)) != kern.rank:
        raise ArithmeticError("determinantal sample produced a repeated face")
    return TwoComplex(kern.n, tris)


def avoidance_probability(kernel: ProjectionKernel, Y) -> float:
    """P(sample is contained in Y) = det(I - K restricted to the complement
    of Y); float path, see exact_kernel for the rational one."""
    yset = {tuple(sorted(t)) for t in Y}
    comp = [i for i, t in enumerate(kernel.triangles) if t not in yset]
    if not comp:
        return 1.0
    sub = np.eye(len(comp)) - kernel.K[np.ix_(comp, comp)]
    return float(np.linalg.det(sub))


@lru_cache(maxsize=8)
def exact_kernel(n: int):
    """Rational projection kernel as (N, D) with K = N / D elementwise.

    B the reduced boundary rows, M = B B^T, D = det(M), N = B^T adj(M) B.
    D equals n^C(n-2,2): expanding det(M) by Cauchy-Binet gives the sum of
    squared maximal minors, which is the squared-torsion mass of the
    determinantal measure; asserted here rather than assumed.
    """
    B = _reduced_boundary(n)
    r = B.shape[0]
    M = (B @ B.T).astype(object)
    D = bareiss_det(M)
    if D != n ** math.comb(n - 2, 2):
        raise AssertionError("det(B B^T) mismatch against the measure normalization")
    # adjugate via Fraction inverse scaled by the determinant
    A = [[Fraction(int(M[i, j])) for j in range(r)] for i in range(r)]
    inv = _fraction_inverse(A)
    adj = np.empty((r, r), dtype=object)
    for i in range(r):
        for j in range(r):
            entry = inv[i][j] * D
            if entry.denominator != 1:
                raise AssertionError("adjugate must be integral")
            adj[i, j] = int(entry)
    Bo = B.astype(object)
    N = Bo.T @ adj @ Bo
    return N, int(D)


def _fraction_inverse(A):
    """Gauss-Jordan inverse of a square Fraction matrix (list of lists)."""
    r = len(A)
    aug = [row[:] + [Fraction(int(i == j)) for j in range(r)] for i, row in enumerate(A)]
    for c in range(r):
        piv = next((i for i in range(c, r) if aug[i][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [v * inv for v in aug[c]]
        for i in range(r):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
    return [row[r:] for row in aug]


def avoidance_probability_exact(n: int, Y) -> Fraction:
    """Exact P(sample within Y): det(D I - N) over the complement block,
    divided by D^|complement|; big-int Bareiss, no floats anywhere."""
    N, D = exact_kernel(n)
    yset = {tuple(sorted(t)) for t in Y}
    tris = all_triangles(n)
    comp = [i for i, t in enumerate(tris) if t not in yset]
    if not comp:
        return Fraction(1)
    a = len(comp)
    sub = [[(D if i == j else 0) - N[ci, cj] for j, cj in enumerate(comp)] for i, ci in enumerate(comp)]
    det = bareiss_det(sub)
    return Fraction(det, D**a)


def log_avoidance_probability_exact(n: int, Y) -> float:
    p = avoidance_probability_exact(n, Y)
    if p == 0:
        return -math.inf
    if p < 0:
        raise ArithmeticError("exact avoidance probability cannot be negative")
    return math.log(p.numerator) - math.log(p.denominator)


def log_containment_upper_bound(n: int, Y) -> float:
    """(n-2) log n + (1 - 2/n) sum over edges of log(t_Y(edge)/n); equals
    -inf when some edge lies in no triangle of Y. Upper-bounds the exact
    log avoidance probability."""
    t = triangle_edge_counts(n, Y)
    total = 0.0
    for u, v in edge_list(n):
        cnt = t[u - 1, v - 1]
        if cnt == 0:
            return -math.inf
        total += math.log(cnt / n)
    return (n - 2) * math.log(n) + (1 - 2 / n) * total


def one_out_containment_probability(n: int, Y, exact: bool = False):
    """P(every face of the one-per-edge complex lands in Y): the per-edge
    choices are independent, giving prod over edges of t_Y(edge)/(n-2)."""
    t = triangle_edge_counts(n, Y)
    if exact:
        p = Fraction(1)
        for u, v in edge_list(n):
            p *= Fraction(int(t[u - 1, v - 1]), n - 2)
        return p
    p = 1.0
    for u, v in edge_list(n):
        p *= t[u - 1, v - 1] / (n - 2)
    return p


# ---------------------------------------------------------------------------
# exhaustive enumeration (small n)

def enumerate_hypertrees(n: int):
    """All complexes with complete 1-skeleton, C(n-1,2) faces and finite H_1,
    each paired with its torsion order |H_1|.

    Candidates are C(n,3)-choose-C(n-1,2) face sets, filtered by the
    determinant of the reduced boundary square: nonzero iff the face set is
    a hypertree. Torsion orders come from Smith normal form of the full
    boundary matrix, cross-checked against |det|.
    """
    if n < 3 or n > 6:
        raise ValueError("enumeration supported for 3 <= n <= 6 only")
    B = _reduced_boundary(n).astype(float)
    r = math.comb(n - 1, 2)
    tris = all_triangles(n)
    F = len(tris)
    combos = np.array(list(itertools.combinations(range(F), r)), dtype=np.intp)
    out = []
    chunk = 20000
    for start in range(0, combos.shape[0], chunk):
        batch = combos[start : start + chunk]
        mats = B[:, batch.reshape(-1)].reshape(r, batch.shape[0], r).transpose(1, 0, 2)
        dets = np.linalg.det(mats)
        for row, d in zip(batch, dets):
            ad = abs(d)
            if ad < 0.5:
                continue
            order = round(ad)
            if abs(ad - order) > 0.01:
                raise ArithmeticError("float determinant too ambiguous to round")
            faces = [tris[i] for i in row]
            X = TwoComplex(n, faces)
            divisors = smith_normal_form(boundary_matrices(X).d2)
            torsion = 1
            for dv in divisors:
                torsion *= dv
            if len(divisors) != r or torsion != order:
                raise ArithmeticError(
                    "Smith normal form disagrees with the reduced determinant"
                )
            out.append((X, torsion))
    return out
