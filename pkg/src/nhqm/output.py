"""CSV / JSON serialization of result records.

Records are flat dicts of str, int, float, bool or None; complex quantities
are always split into ``*_re`` / ``*_im`` (or ``re`` / ``im``) columns before
they get here.
"""
from __future__ import annotations

import csv
import io
import json
import math
from typing import Any, Iterable, Mapping

from . import __version__

SIG_DIGITS = 9


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if v == 0:
            return "0"  # folds -0.0
        return f"{v:.{SIG_DIGITS}g}"
    return str(v)


def _columns(records: list[Mapping[str, Any]]) -> list[str]:
    cols: list[str] = []
    for r in records:
        for k in r:
            if k not in cols:
                cols.append(k)
    return cols


def to_csv(records: Iterable[Mapping[str, Any]]) -> str:
    records = list(records)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    cols = _columns(records)
    writer.writerow(cols)
    for r in records:
        writer.writerow([_cell(r.get(c)) for c in cols])
    return buf.getvalue()


def _json_safe(v):
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    if isinstance(v, complex):
        raise TypeError("split complex values into re/im fields before serializing")
    return v


def to_json(records: Iterable[Mapping[str, Any]], meta: Mapping[str, Any]) -> str:
    doc = {
        "meta": {**meta, "version": __version__},
        "data": [{k: _json_safe(v) for k, v in r.items()} for r in records],
    }
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def parse_json(text: str) -> dict:
    doc = json.loads(text)
    if not isinstance(doc, dict) or set(doc) != {"meta", "data"}:
        raise ValueError("expected an object with 'meta' and 'data'")
    return doc


def emit(records: Iterable[Mapping[str, Any]], fmt: str = "csv", meta: Mapping[str, Any] | None = None) -> bytes:
    if fmt == "csv":
        text = to_csv(records)
    elif fmt == "json":
        text = to_json(records, meta or {})
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return text.encode("utf-8")


def spectrum_records(spec) -> list[dict]:
    return [
        {
            "index": i + 1,
            "re": s.value.real,
            "im": s.value.imag,
            "label": s.label.value,
            "partner": None if s.partner is None else s.partner + 1,
            "eps_re": s.diagonal_deviation.real,
            "eps_im": s.diagonal_deviation.imag,
        }
        for i, s in enumerate(spec.states)
    ]


def sweep_records(result, states: int = 10) -> list[dict]:
    rows = []
    for rec in result:
        grid = {"T": rec.T, "mu": rec.mu, "N": rec.N}
        if rec.spectrum is None:
            rows.append({**grid, "pairs": None, "error": rec.error})
            continue
        for row in spectrum_records(rec.spectrum)[:states]:
            rows.append({**grid, "pairs": rec.pair_count(states), **row, "error": None})
    return rows
