"""CSV and JSON exchange formats.

* points and circle samplings: CSV with header ``re,im``, one row per value;
* moment sequences: CSV with header ``m,re,im``, ``m = 0, 1, ...`` in order;
* recovery results and reports: JSON, complex numbers as ``{"re": .., "im": ..}``.

A path of ``"-"`` means standard input or output.
"""

from __future__ import annotations

import contextlib
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from .errors import InvalidInputError
from .hardy import CircleSampling
from .prony import MomentSequence, RecoveryResult


@contextlib.contextmanager
def open_stream(path, mode):
    if str(path) == "-":
        yield sys.stdout if "w" in mode else sys.stdin
    else:
        with open(Path(path), mode, newline="", encoding="utf-8") as fh:
            yield fh


def _read_rows(path, header):
    with open_stream(path, "r") as fh:
        reader = csv.reader(fh)
        try:
            first = [h.strip() for h in next(reader)]
        except StopIteration:
            raise InvalidInputError(f"{path}: empty file") from None
        if first != header:
            raise InvalidInputError(f"{path}: expected header {','.join(header)}, got {','.join(first)}")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise InvalidInputError(f"{path}:{lineno}: expected {len(header)} fields")
            try:
                rows.append([float(cell) for cell in row])
            except ValueError:
                raise InvalidInputError(f"{path}:{lineno}: non-numeric field") from None
    return np.array(rows, dtype=float).reshape(-1, len(header))


def _write_rows(path, header, rows):
    with open_stream(path, "w") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(float(v)) if not isinstance(v, (int, np.integer)) else int(v)
                             for v in row])


def read_points_csv(path) -> np.ndarray:
    rows = _read_rows(path, ["re", "im"])
    return rows[:, 0] + 1j * rows[:, 1]


def write_points_csv(path, values):
    values = np.atleast_1d(np.asarray(values, dtype=complex))
    _write_rows(path, ["re", "im"], ((v.real, v.imag) for v in values))


def read_sampling_csv(path) -> CircleSampling:
    return CircleSampling(read_points_csv(path))


def write_sampling_csv(path, sampling: CircleSampling):
    write_points_csv(path, sampling.values)


def read_moments_csv(path, provenance="file") -> MomentSequence:
    rows = _read_rows(path, ["m", "re", "im"])
    if rows.shape[0] == 0:
        raise InvalidInputError(f"{path}: no moments")
    if not np.array_equal(rows[:, 0], np.arange(rows.shape[0])):
        raise InvalidInputError(f"{path}: column m must run 0, 1, 2, ... without gaps")
    return MomentSequence(rows[:, 1] + 1j * rows[:, 2], provenance)


def write_moments_csv(path, g):
    vals = g.values if isinstance(g, MomentSequence) else np.asarray(g, dtype=complex)
    _write_rows(path, ["m", "re", "im"], ((m, v.real, v.imag) for m, v in enumerate(vals)))


def to_jsonable(obj):
    """Recursively convert numpy and complex values; non-finite floats become ``None``."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": to_jsonable(float(obj.real)), "im": to_jsonable(float(obj.imag))}
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else None
    return obj


def result_to_dict(result: RecoveryResult) -> dict:
    out = {"poles": to_jsonable(np.asarray(result.poles, dtype=complex))}
    out["coefficients"] = (
        None if result.coefficients is None else to_jsonable(np.asarray(result.coefficients, complex))
    )
    out["diagnostics"] = to_jsonable(result.diagnostics)
    return out


def result_from_dict(data: dict) -> RecoveryResult:
    def points(items):
        return np.array([complex(p["re"], p["im"]) for p in items], dtype=complex)

    coef = data.get("coefficients")
    return RecoveryResult(points(data["poles"]), None if coef is None else points(coef),
                          data.get("diagnostics", {}))


def write_json(path, obj):
    payload = result_to_dict(obj) if isinstance(obj, RecoveryResult) else to_jsonable(obj)
    with open_stream(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def read_json(path):
    with open_stream(path, "r") as fh:
        return json.load(fh)
