"""Finite abelian groups as direct sums of cyclic factors, plus symmetric
probability distributions on them.

Elements are tuples of residues, one per cyclic factor. Element order is
lexicographic in the residues, which fixes the index used by every array in
the package (cochain labels, kernel value slabs, distribution vectors).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np


@dataclass(frozen=True)
class Group:
    """Direct sum of Z/m_i, moduli all >= 2."""

    moduli: tuple[int, ...]

    def __init__(self, moduli: Iterable[int]):
        mods = tuple(int(m) for m in moduli)
        if not mods:
            raise ValueError("group needs at least one cyclic factor")
        if any(m < 2 for m in mods):
            raise ValueError(f"moduli must all be >= 2, got {mods}")
        object.__setattr__(self, "moduli", mods)

    @property
    def order(self) -> int:
        n = 1
        for m in self.moduli:
            n *= m
        return n

    @property
    def identity(self) -> tuple[int, ...]:
        return (0,) * len(self.moduli)

    def check(self, g) -> tuple[int, ...]:
        g = tuple(int(x) for x in g)
        if len(g) != len(self.moduli):
            raise ValueError(f"element {g} has wrong arity for moduli {self.moduli}")
        if any(not 0 <= x < m for x, m in zip(g, self.moduli)):
            raise ValueError(f"element {g} out of range for moduli {self.moduli}")
        return g

    def add(self, a, b) -> tuple[int, ...]:
        a, b = self.check(a), self.check(b)
        return tuple((x + y) % m for x, y, m in zip(a, b, self.moduli))

    def neg(self, a) -> tuple[int, ...]:
        a = self.check(a)
        return tuple((-x) % m for x, m in zip(a, self.moduli))

    @cached_property
    def elements(self) -> tuple[tuple[int, ...], ...]:
        return tuple(itertools.product(*(range(m) for m in self.moduli)))

    def index(self, g) -> int:
        g = self.check(g)
        idx = 0
        for x, m in zip(g, self.moduli):
            idx = idx * m + x
        return idx

    def element(self, idx: int) -> tuple[int, ...]:
        return self.elements[idx]

    @cached_property
    def neg_perm(self) -> np.ndarray:
        """Index permutation sending i to index(-element(i))."""
        return np.array([self.index(self.neg(g)) for g in self.elements], dtype=np.intp)

    @cached_property
    def add_table(self) -> np.ndarray:
        """add_table[i, j] = index(element(i) + element(j))."""
        k = self.order
        tab = np.empty((k, k), dtype=np.intp)
        for i, a in enumerate(self.elements):
            for j, b in enumerate(self.elements):
                tab[i, j] = self.index(self.add(a, b))
        return tab

    def label(self, g) -> str:
        return "|".join(str(x) for x in self.check(g))

    def parse_label(self, s: str) -> tuple[int, ...]:
        return self.check(tuple(int(x) for x in s.split("|")))

    def __str__(self):
        return " x ".join(f"Z/{m}" for m in self.moduli)


class SymmetricDistribution:
    """Probability distribution nu on a group with nu(g) == nu(-g) exactly
    and nu(g) > 0 for all g (nondegenerate).

    Probabilities may be floats or Fractions; Fractions make later kernel
    arithmetic exact.
    """

    def __init__(self, group: Group, probs):
        self.group = group
        k = group.order
        if isinstance(probs, Mapping):
            vec = [None] * k
            for key, p in probs.items():
                g = group.parse_label(key) if isinstance(key, str) else group.check(key)
                vec[group.index(g)] = p
            if any(v is None for v in vec):
                missing = [group.label(group.element(i)) for i, v in enumerate(vec) if v is None]
                raise ValueError(f"distribution missing probabilities for {missing}")
        else:
            vec = list(probs)
            if len(vec) != k:
                raise ValueError(f"expected {k} probabilities, got {len(vec)}")
        self.exact = all(isinstance(v, (Fraction, int)) for v in vec)
        if self.exact:
            vec = [Fraction(v) for v in vec]
            if sum(vec) != 1:
                raise ValueError(f"probabilities sum to {sum(vec)}, not 1")
        else:
            vec = [float(v) for v in vec]
            if abs(sum(vec) - 1.0) > 1e-12:
                raise ValueError(f"probabilities sum to {sum(vec)!r}, not 1 within 1e-12")
        if any(v <= 0 for v in vec):
            raise ValueError("all probabilities must be positive")
        neg = self.group.neg_perm
        for i in range(k):
            if vec[i] != vec[neg[i]]:
                raise ValueError(
                    f"symmetry violated: nu({group.label(group.element(i))}) = {vec[i]} "
                    f"!= {vec[neg[i]]} = nu of its inverse"
                )
        self.probs = tuple(vec)
        # cumulative table for inversion sampling
        self._cum = np.cumsum(np.array([float(v) for v in vec]))
        self._cum[-1] = 1.0

    @classmethod
    def uniform(cls, group: Group, exact: bool = True) -> "SymmetricDistribution":
        if exact:
            return cls(group, [Fraction(1, group.order)] * group.order)
        return cls(group, [1.0 / group.order] * group.order)

    def prob(self, g) -> float | Fraction:
        return self.probs[self.group.index(g)]

    def as_array(self) -> np.ndarray:
        if self.exact:
            return np.array(self.probs, dtype=object)
        return np.array(self.probs, dtype=float)

    def as_float_array(self) -> np.ndarray:
        return np.array([float(p) for p in self.probs], dtype=float)

    def sample_indices(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Inversion sampling; deterministic given the generator state."""
        u = rng.random(size)
        return np.searchsorted(self._cum, u, side="right").astype(np.intp)

    def sample(self, rng: np.random.Generator):
        idx = int(self.sample_indices(rng, 1)[0])
        return self.group.element(idx)

    def to_json_dict(self) -> dict:
        return {
            "group": list(self.group.moduli),
            "probs": {
                self.group.label(g): (str(p) if self.exact else float(p))
                for g, p in zip(self.group.elements, self.probs)
            },
        }

    def __eq__(self, other):
        return (
            isinstance(other, SymmetricDistribution)
            and self.group == other.group
            and self.probs == other.probs
        )

    def __repr__(self):
        return f"SymmetricDistribution({self.group}, {self.to_json_dict()})"


def group_from_json(data: Sequence[int]) -> Group:
    if not isinstance(data, (list, tuple)):
        raise ValueError("group JSON must be a list of moduli, e.g. [2] or [3, 3]")
    return Group(data)


def distribution_from_json(data: Mapping, exact: bool = False) -> SymmetricDistribution:
    if not isinstance(data, Mapping) or "group" not in data or "probs" not in data:
        raise ValueError(
            'distribution JSON needs {"group": [moduli...], "probs": {"label": p}}'
        )
    group = group_from_json(data["group"])
    vals = {}
    for k, v in data["probs"].items():
        if isinstance(v, str) or exact:
            v = Fraction(v)
        vals[k] = v
    return SymmetricDistribution(group, vals)
