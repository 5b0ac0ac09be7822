"""JSON readers and writers for the on-disk formats.

All loaders validate structure and the type invariants, raising ValueError
messages that name the violated invariant. Exact (Fraction) payloads are
encoded as strings like "1/3"; floats stay floats.
"""
from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from .cochains import Cochain, edge_list
from .complexes import TwoComplex
from .graphons import StepKernel
from .groups import Group, group_from_json


def _num_to_json(v):
    if isinstance(v, Fraction):
        return str(v)
    return float(v)


def _num_from_json(v, exact: bool):
    if isinstance(v, str):
        return Fraction(v)
    if exact:
        return Fraction(v)
    return float(v)


# ---------------------------------------------------------------------------
# cochains

def cochain_to_json_dict(f: Cochain) -> dict:
    return {
        "n": f.n,
        "group": list(f.group.moduli),
        "edges": [
            {"u": u, "v": v, "g": list(f.group.element(int(f.labels[i])))}
            for i, (u, v) in enumerate(edge_list(f.n))
        ],
    }


def cochain_from_json_dict(data: dict) -> Cochain:
    try:
        n = int(data["n"])
        group = group_from_json(data["group"])
        edges = data["edges"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"cochain JSON needs n, group, edges: {exc}") from exc
    want = edge_list(n)
    labels = {}
    for item in edges:
        u, v = int(item["u"]), int(item["v"])
        if not (1 <= u < v <= n):
            raise ValueError(f"edge ({u}, {v}) violates 1 <= u < v <= n")
        if (u, v) in labels:
            raise ValueError(f"edge ({u}, {v}) listed twice")
        labels[(u, v)] = group.index(group.check(item["g"]))
    missing = [e for e in want if e not in labels]
    if missing:
        raise ValueError(f"cochain JSON is missing edges, first: {missing[0]}")
    return Cochain(group, n, [labels[e] for e in want])


# ---------------------------------------------------------------------------
# kernels

def kernel_to_json_dict(W: StepKernel) -> dict:
    return {
        "group": list(W.group.moduli),
        "part_measures": [_num_to_json(m) for m in W.measures],
        "values": [
            [[_num_to_json(W.values[i, j, g]) for g in range(W.group.order)] for j in range(W.k)]
            for i in range(W.k)
        ],
    }


def kernel_from_json_dict(data: dict, require_graphon: bool = False, exact: bool = False) -> StepKernel:
    try:
        group = group_from_json(data["group"])
        measures = [_num_from_json(m, exact) for m in data["part_measures"]]
        raw = data["values"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"kernel JSON needs group, part_measures, values: {exc}") from exc
    k = len(measures)
    if len(raw) != k or any(len(row) != k for row in raw):
        raise ValueError("values must be a k x k x |G| array matching part_measures")
    vals = [
        [[_num_from_json(x, exact) for x in cell] for cell in row]
        for row in raw
    ]
    if any(len(cell) != group.order for row in vals for cell in row):
        raise ValueError(f"every value cell must list all {group.order} group elements")
    W = StepKernel(group, measures, vals)  # validates symmetry and measures
    if require_graphon and not W.is_graphon():
        raise ValueError("range violated: graphon values must lie in [0, 1]")
    return W


# ---------------------------------------------------------------------------
# complexes

def complex_to_json_dict(X: TwoComplex) -> dict:
    return {"n": X.n, "triangles": [list(t) for t in X.triangles]}


def complex_from_json_dict(data: dict) -> TwoComplex:
    try:
        return TwoComplex(int(data["n"]), data["triangles"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"complex JSON needs n and triangles: {exc}") from exc


# ---------------------------------------------------------------------------
# files

def dump_json(obj: dict, path: str):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def dumps_json(obj: dict) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"
