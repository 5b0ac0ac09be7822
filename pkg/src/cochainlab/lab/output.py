"""Deterministic tabular output: same rows in, same bytes out."""
from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction

import numpy as np


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if math.isnan(v):
            return "nan"
        return repr(float(v))
    return str(v)


class Table:
    def __init__(self, columns: list[str], rows: list[list] | None = None):
        self.columns = list(columns)
        self.rows: list[list] = [] if rows is None else [list(r) for r in rows]

    def add(self, *values, **named):
        if values and named:
            raise ValueError("pass positional values or column keywords, not both")
        if named:
            extra = [k for k in named if k not in self.columns]
            missing = [c for c in self.columns if c not in named]
            if extra or missing:
                raise ValueError(f"row keys mismatch: extra {extra}, missing {missing}")
            values = tuple(named[c] for c in self.columns)
        if len(values) != len(self.columns):
            raise ValueError(f"row width {len(values)} != {len(self.columns)} columns")
        self.rows.append(list(values))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([_cell(v) for v in row])
        return buf.getvalue()

    def to_json_dict(self) -> dict:
        def jsonable(v):
            if isinstance(v, float):
                return _cell(v) if math.isinf(v) or math.isnan(v) else float(v)
            if isinstance(v, np.floating):
                return jsonable(float(v))
            if isinstance(v, (np.integer,)):
                return int(v)
            if isinstance(v, Fraction):
                return str(v)
            return v

        return {
            "columns": self.columns,
            "rows": [[jsonable(v) for v in row] for row in self.rows],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"unknown format {fmt!r}")

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]
