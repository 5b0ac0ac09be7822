"""Antisymmetric edge labelings of the complete graph.

A cochain assigns a group element f(u, v) to each ordered pair of distinct
vertices with f(v, u) = -f(u, v). Vertices are 1-based. Storage is one label
index per unordered edge in lexicographic order; the accessor negates for
reversed pairs.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .graphons import StepKernel
from .groups import Group, SymmetricDistribution


@lru_cache(maxsize=None)
def edge_list(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(itertools.combinations(range(1, n + 1), 2))


@lru_cache(maxsize=None)
def _edge_index_map(n: int) -> dict:
    return {e: i for i, e in enumerate(edge_list(n))}


def edge_index(n: int, u: int, v: int) -> int:
    if u > v:
        u, v = v, u
    return _edge_index_map(n)[(u, v)]


class Cochain:
    """Group-valued antisymmetric labeling of K_n edges.

    labels[i] is the group element index on the i-th edge (u < v); the value
    on (v, u) is the negation.
    """

    def __init__(self, group: Group, n: int, labels):
        if n < 2:
            raise ValueError("need at least 2 vertices")
        labels = np.asarray(labels, dtype=np.intp)
        m = n * (n - 1) // 2
        if labels.shape != (m,):
            raise ValueError(f"expected {m} edge labels for n={n}, got shape {labels.shape}")
        if labels.min() < 0 or labels.max() >= group.order:
            raise ValueError("label index out of range for the group")
        self.group = group
        self.n = n
        self.labels = labels

    def value(self, u: int, v: int):
        return self.group.element(self.index_value(u, v))

    def index_value(self, u: int, v: int) -> int:
        if u == v:
            raise ValueError("cochains are defined on distinct vertex pairs")
        i = self.labels[edge_index(self.n, u, v)]
        if u < v:
            return int(i)
        return int(self.group.neg_perm[i])

    def label_matrix(self) -> np.ndarray:
        """(n, n) matrix of label indices, 0-based vertices; diagonal is 0
        and must be masked out by callers."""
        n = self.n
        M = np.zeros((n, n), dtype=np.intp)
        neg = self.group.neg_perm
        for i, (u, v) in enumerate(edge_list(n)):
            M[u - 1, v - 1] = self.labels[i]
            M[v - 1, u - 1] = neg[self.labels[i]]
        return M

    def permute(self, pi) -> "Cochain":
        """Relabels vertices: result(u, v) = self(pi(u), pi(v)).

        pi is a sequence of length n with pi[u - 1] the 1-based image of u."""
        pi = [int(x) for x in pi]
        if sorted(pi) != list(range(1, self.n + 1)):
            raise ValueError("pi must be a permutation of 1..n")
        new = np.empty_like(self.labels)
        for i, (u, v) in enumerate(edge_list(self.n)):
            new[i] = self.index_value(pi[u - 1], pi[v - 1])
        return Cochain(self.group, self.n, new)

    def __eq__(self, other):
        return (
            isinstance(other, Cochain)
            and self.group == other.group
            and self.n == other.n
            and np.array_equal(self.labels, other.labels)
        )

    def __repr__(self):
        return f"Cochain(n={self.n}, group={self.group})"


def random_cochain(n: int, nu: SymmetricDistribution, rng: np.random.Generator) -> Cochain:
    """Independent nu-draws on the n(n-1)/2 edges."""
    m = n * (n - 1) // 2
    return Cochain(nu.group, n, nu.sample_indices(rng, m))


def path_counts(f: Cochain) -> np.ndarray:
    """counts[u-1, w-1, g] = #middle vertices v with f(u, v) + f(v, w) = g.

    Shape (n, n, |G|). On the diagonal the two labels cancel, so
    counts[u, u, 0] = n - 1 and the rest of that fiber is zero."""
    n, order = f.n, f.group.order
    M = f.label_matrix()
    tab = f.group.add_table
    counts = np.zeros((n, n, order), dtype=np.int64)
    idx = np.arange(n)
    for u in range(n):
        counts[u, u, 0] = n - 1
        for w in range(n):
            if u == w:
                continue
            sums = tab[M[u, :], M[:, w]]
            mask = (idx != u) & (idx != w)
            counts[u, w] = np.bincount(sums[mask], minlength=order)
    return counts


def cocycle_triangles(f: Cochain) -> tuple[tuple[int, int, int], ...]:
    """Triangles {u < v < w} whose cyclic label sum vanishes, i.e.
    f(u, v) + f(v, w) = f(u, w)."""
    n = f.n
    M = f.label_matrix()
    tab = f.group.add_table
    out = []
    for u, v, w in itertools.combinations(range(n), 3):
        if tab[M[u, v], M[v, w]] == M[u, w]:
            out.append((u + 1, v + 1, w + 1))
    return tuple(out)


def triangle_support_counts(f: Cochain) -> np.ndarray:
    """t[u-1, w-1] = number of zero-sum triangles through edge {u, w}.

    Identity: equals path_counts at the edge's own label."""
    M = f.label_matrix()
    pc = path_counts(f)
    n = f.n
    t = np.zeros((n, n), dtype=np.int64)
    for u in range(n):
        for w in range(n):
            if u != w:
                t[u, w] = pc[u, w, M[u, w]]
    return t


def embed_graphon(f: Cochain, exact: bool = False) -> StepKernel:
    """Step kernel of the cochain: n equal parts, indicator values
    1{f(u, v) = g} off the diagonal, all-zero diagonal blocks."""
    n, order = f.n, f.group.order
    M = f.label_matrix()
    if exact:
        vals = np.empty((n, n, order), dtype=object)
        vals[...] = Fraction(0)
        one = Fraction(1)
        measures = [Fraction(1, n)] * n
    else:
        vals = np.zeros((n, n, order))
        one = 1.0
        measures = [1.0 / n] * n
    for u in range(n):
        for v in range(n):
            if u != v:
                vals[u, v, M[u, v]] = one
    return StepKernel(f.group, measures, vals)
