"""Exact homological linear algebra: GF(p) ranks, Smith normal form over Z,
cocycle counts for arbitrary finite abelian coefficients.

Everything here is exact: bit-packed elimination for p = 2, int64 modular
elimination for odd primes, arbitrary-precision integers for SNF and
determinants. Complexes are duck-typed (anything with .n and .triangles).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cochains import edge_index, edge_list


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def prime_factors(x: int) -> list[int]:
    x = abs(int(x))
    out = []
    d = 2
    while d * d <= x:
        if x % d == 0:
            out.append(d)
            while x % d == 0:
                x //= d
        d += 1 if d == 2 else 2
    if x > 1:
        out.append(x)
    return out


@dataclass(frozen=True)
class BoundaryMatrices:
    """Integer chain maps of a 2-complex with complete 1-skeleton.

    d1: (n, E) vertex-by-edge incidence, edge (u, v) gets -1 at u, +1 at v.
    d2: (E, F) edge-by-triangle; triangle (u < v < w) gets +1 at uv, -1 at uw,
    +1 at vw. Composition d1 @ d2 vanishes identically.
    """

    n: int
    edges: tuple
    triangles: tuple
    d1: np.ndarray
    d2: np.ndarray


def boundary_matrices(X) -> BoundaryMatrices:
    n = X.n
    triangles = tuple(X.triangles)
    edges = edge_list(n)
    E = len(edges)
    d1 = np.zeros((n, E), dtype=np.int64)
    for i, (u, v) in enumerate(edges):
        d1[u - 1, i] = -1
        d1[v - 1, i] = 1
    d2 = np.zeros((E, len(triangles)), dtype=np.int64)
    for j, (u, v, w) in enumerate(triangles):
        d2[edge_index(n, u, v), j] = 1
        d2[edge_index(n, u, w), j] = -1
        d2[edge_index(n, v, w), j] = 1
    if len(triangles) and np.abs(d1 @ d2).max() != 0:
        raise AssertionError("boundary composition d1 d2 must vanish")
    return BoundaryMatrices(n, edges, triangles, d1, d2)


# ---------------------------------------------------------------------------
# ranks

def _rank_gf2(A: np.ndarray) -> int:
    """Row echelon over GF(2) with rows packed into Python ints."""
    pivots: dict[int, int] = {}
    for row in A:
        x = 0
        for j in np.nonzero(row & 1)[0]:
            x |= 1 << int(j)
        while x:
            j = x.bit_length() - 1
            if j in pivots:
                x ^= pivots[j]
            else:
                pivots[j] = x
                break
    return len(pivots)


def rank_mod_p(M, p: int) -> int:
    """Exact rank of an integer matrix over F_p."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    A = np.asarray(M, dtype=np.int64)
    if A.ndim != 2:
        raise ValueError("need a matrix")
    if A.size == 0:
        return 0
    A = np.mod(A, p)
    if p == 2:
        return _rank_gf2(A)
    # int64 is safe: entries < p <= 2^31, products < 2^62
    if p >= 1 << 31:
        raise ValueError("p too large for the int64 elimination path")
    m, ncols = A.shape
    r = 0
    for c in range(ncols):
        rows = np.nonzero(A[r:, c])[0]
        if rows.size == 0:
            continue
        piv = r + int(rows[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), p - 2, p)
        A[r, c:] = (A[r, c:] * inv) % p
        below = A[r + 1 :, c]
        nz = np.nonzero(below)[0]
        if nz.size:
            block = A[r + 1 :, c:]
            block[nz] = (block[nz] - np.outer(below[nz], A[r, c:])) % p
        r += 1
        if r == m:
            break
    return r


def rank_rational(M) -> int:
    """Independent exact rank via Fraction Gaussian elimination (oracle path,
    quadratic-entry-growth-free but slow; keep matrices modest)."""
    A = [[Fraction(int(x)) for x in row] for row in np.asarray(M)]
    m = len(A)
    ncols = len(A[0]) if m else 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, m) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        A[r] = [v * inv for v in A[r]]
        for i in range(r + 1, m):
            f = A[i][c]
            if f:
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        r += 1
        if r == m:
            break
    return r


# ---------------------------------------------------------------------------
# integer determinants and Smith normal form

def bareiss_det(M) -> int:
    """Fraction-free exact determinant of an integer matrix."""
    A = [[int(x) for x in row] for row in np.asarray(M)]
    n = len(A)
    if n == 0:
        return 1
    if any(len(row) != n for row in A):
        raise ValueError("determinant needs a square matrix")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if piv is None:
                return 0
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        akk = A[k][k]
        for i in range(k + 1, n):
            Ai, Ak = A[i], A[k]
            aik = Ai[k]
            for j in range(k + 1, n):
                Ai[j] = (Ai[j] * akk - aik * Ak[j]) // prev
            Ai[k] = 0
        prev = akk
    return sign * A[n - 1][n - 1]


def smith_normal_form(M) -> tuple[int, ...]:
    """Nonzero elementary divisors d_1 | d_2 | ... of an integer matrix.

    Min-abs pivoting, full row/column reduction, divisibility fix-up by row
    absorption. Arbitrary precision throughout; the divisor count equals the
    rank and their product is the lattice index (|det| for nonsingular
    square input).
    """
    Mat = np.asarray(M)
    if Mat.ndim != 2:
        raise ValueError("need a matrix")
    A = [[int(x) for x in row] for row in Mat]
    m = len(A)
    ncols = len(A[0]) if m else 0
    divisors: list[int] = []
    t = 0
    while t < min(m, ncols):
        # locate a minimal-magnitude nonzero pivot in the trailing block
        piv = None
        best = 0
        for i in range(t, m):
            Ai = A[i]
            for j in range(t, ncols):
                v = Ai[j]
                if v and (piv is None or abs(v) < best):
                    piv = (i, j)
                    best = abs(v)
                    if best == 1:
                        break
            if best == 1:
                break
        if piv is None:
            break
        i0, j0 = piv
        A[t], A[i0] = A[i0], A[t]
        if j0 != t:
            for row in A:
                row[t], row[j0] = row[j0], row[t]
        while True:
            p = A[t][t]
            # column t: subtract quotients; a nonzero remainder becomes the
            # strictly smaller new pivot, restart
            restart = False
            for i in range(t + 1, m):
                v = A[i][t]
                if v == 0:
                    continue
                q = v // p
                if q:
                    Ai, At = A[i], A[t]
                    for j in range(t, ncols):
                        Ai[j] -= q * At[j]
                if A[i][t]:
                    A[t], A[i] = A[i], A[t]
                    restart = True
                    break
            if restart:
                continue
            # row t: same with column operations
            for j in range(t + 1, ncols):
                v = A[t][j]
                if v == 0:
                    continue
                q = v // p
                if q:
                    for row in A:
                        row[j] -= q * row[t]
                if A[t][j]:
                    for row in A:
                        row[t], row[j] = row[j], row[t]
                    restart = True
                    break
            if restart:
                continue
            p = A[t][t]
            if p in (1, -1):
                break
            # divisibility: pivot must divide the trailing block
            offender = None
            for i in range(t + 1, m):
                Ai = A[i]
                for j in range(t + 1, ncols):
                    if Ai[j] % p:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            At, Ai = A[t], A[offender]
            for j in range(t, ncols):
                At[j] += Ai[j]
        divisors.append(abs(A[t][t]))
        t += 1
    return tuple(divisors)


# ---------------------------------------------------------------------------
# homology of 2-complexes (complete 1-skeleton throughout)

def cycle_space_dim(n: int) -> int:
    return n * (n - 1) // 2 - (n - 1)


def dim_z1_mod_p(X, p: int) -> int:
    bm = boundary_matrices(X)
    E = len(bm.edges)
    return E - rank_mod_p(bm.d2, p)


def dim_h1_mod_p(X, p: int) -> int:
    """dim H_1(X, F_p) = (C(n,2) - (n-1)) - rank_p(d2); the 1-skeleton is
    complete, so ker d1 has dimension C(n,2) - (n-1) over every field."""
    bm = boundary_matrices(X)
    return cycle_space_dim(X.n) - rank_mod_p(bm.d2, p)


def count_cocycles(X, group) -> int:
    """|Z^1(X, G)| exactly: product over cyclic factors Z/m of
    m^(E - r) * prod_j gcd(m, d_j), the kernel size of d2^T mod m.

    Prime moduli shortcut through a single F_p rank; composite moduli use the
    elementary divisors.
    """
    bm = boundary_matrices(X)
    E = len(bm.edges)
    total = 1
    divisors = None
    for m in group.moduli:
        if is_prime(m):
            r = rank_mod_p(bm.d2, m)
            total *= m ** (E - r)
        else:
            if divisors is None:
                divisors = smith_normal_form(bm.d2)
            cnt = m ** (E - len(divisors))
            for d in divisors:
                cnt *= math.gcd(m, d)
            total *= cnt
    return total


def torsion_order(X) -> int:
    bm = boundary_matrices(X)
    out = 1
    for d in smith_normal_form(bm.d2):
        out *= d
    return out


def min_generators_h1(X) -> int:
    """Minimum generator count of H_1(X, Z): free rank plus the largest
    p-multiplicity among the torsion divisors; equals sup_p dim H_1(F_p)."""
    bm = boundary_matrices(X)
    divisors = smith_normal_form(bm.d2)
    free = cycle_space_dim(X.n) - len(divisors)
    best = 0
    primes = set()
    for d in divisors:
        if d > 1:
            primes.update(prime_factors(d))
    for p in primes:
        best = max(best, sum(1 for d in divisors if d % p == 0))
    return free + best


def torsion_bound_ok(X) -> bool:
    """Torsion order of H_1 is at most 3^(n^2/4); checked in exact integers
    as torsion^4 <= 3^(n^2)."""
    t = torsion_order(X)
    return t**4 <= 3 ** (X.n * X.n)


@dataclass(frozen=True)
class HomologyReport:
    n: int
    num_faces: int
    p: int | None
    dim_z1: int
    dim_h1: int
    elementary_divisors: tuple | None
    torsion_order: int | None
    min_generators: int | None

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "num_faces": self.num_faces,
            "p": self.p,
            "dim_z1": self.dim_z1,
            "dim_h1": self.dim_h1,
            "elementary_divisors": (
                None
                if self.elementary_divisors is None
                else [int(d) for d in self.elementary_divisors]
            ),
            "torsion_order": None if self.torsion_order is None else int(self.torsion_order),
            "min_generators": self.min_generators,
        }


def homology_report(X, p: int | None = None, include_snf: bool = True) -> HomologyReport:
    """Field dimensions (over F_p if p given, else over Q) plus, when
    include_snf, integral data: divisors, torsion, minimum generators."""
    bm = boundary_matrices(X)
    E = len(bm.edges)
    divisors = smith_normal_form(bm.d2) if include_snf else None
    if p is not None:
        rank = rank_mod_p(bm.d2, p)
    elif divisors is not None:
        rank = len(divisors)
    else:
        rank = rank_rational(bm.d2)
    dim_z1 = E - rank
    dim_h1 = cycle_space_dim(X.n) - rank
    tor = None
    mg = None
    if divisors is not None:
        tor = 1
        for d in divisors:
            tor *= d
        free = cycle_space_dim(X.n) - len(divisors)
        best = 0
        primes = set()
        for d in divisors:
            if d > 1:
                primes.update(prime_factors(d))
        for q in primes:
            best = max(best, sum(1 for d in divisors if d % q == 0))
        mg = free + best
    return HomologyReport(
        n=X.n,
        num_faces=len(bm.triangles),
        p=p,
        dim_z1=dim_z1,
        dim_h1=dim_h1,
        elementary_divisors=divisors,
        torsion_order=tor,
        min_generators=mg,
    )
