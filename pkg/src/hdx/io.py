"""Text formats for complexes and cochains, plus deterministic JSON output.

The facet-list format is one facet per line (whitespace-separated vertex
ids, `#` starts a comment); canonical complexes round-trip byte-identically.
Rationals serialize as {"num", "den"} strings and infinities as "inf", so
no floats appear in any assertion path.
"""

from __future__ import annotations

import hashlib
import json
import os
from fractions import Fraction
from typing import Mapping

from .complexes import Cochain, Complex
from .errors import InputFormatError
from .gf2 import lowest_bit  # noqa: F401  (re-exported for CLI helpers)


def dumps_complex(x: Complex) -> str:
    return "".join(" ".join(str(v) for v in f) + "\n" for f in x.facets)


def write_complex(x: Complex, path: str):
    _atomic_write_text(path, dumps_complex(x))


def loads_complex(text: str) -> Complex:
    facets = []
    first_len = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            ids = tuple(int(tok) for tok in line.split())
        except ValueError:
            raise InputFormatError("vertex ids must be non-negative integers", lineno)
        if any(v < 0 for v in ids):
            raise InputFormatError("vertex ids must be non-negative", lineno)
        if len(set(ids)) != len(ids):
            raise InputFormatError("facet repeats a vertex", lineno)
        if first_len is None:
            first_len = len(ids)
        elif len(ids) != first_len:
            raise InputFormatError(
                f"facet has {len(ids)} vertices, expected {first_len}", lineno)
        facets.append(ids)
    if not facets:
        raise InputFormatError("no facets found")
    return Complex(facets)


def read_complex(path: str) -> Complex:
    with open(path, "r", encoding="ascii") as fh:
        return loads_complex(fh.read())


def dumps_cochain(x: Complex, alpha: Cochain) -> str:
    lines = [f"dim={alpha.dim}\n"]
    for cell in x.support(alpha):
        lines.append(" ".join(str(v) for v in cell) + "\n")
    return "".join(lines)


def write_cochain(x: Complex, alpha: Cochain, path: str):
    _atomic_write_text(path, dumps_cochain(x, alpha))


def loads_cochain(x: Complex, text: str) -> Cochain:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("dim="):
        raise InputFormatError("first line must be dim=<i>", 1)
    try:
        dim = int(lines[0][4:])
    except ValueError:
        raise InputFormatError("bad dimension header", 1)
    if not 0 <= dim <= x.d:
        raise InputFormatError(f"dimension {dim} out of range", 1)
    bits = 0
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            cell = tuple(int(tok) for tok in line.split())
        except ValueError:
            raise InputFormatError("cell must be integer ids", lineno)
        if len(cell) != dim + 1:
            raise InputFormatError(f"cell has {len(cell)} vertices, expected {dim + 1}", lineno)
        if not x.has_cell(cell):
            raise InputFormatError(f"{cell} is not a cell of the complex", lineno)
        bits |= 1 << x.cell_index(cell)
    return Cochain(dim, bits, x.num_cells(dim))


def read_cochain(x: Complex, path: str) -> Cochain:
    with open(path, "r", encoding="ascii") as fh:
        return loads_cochain(x, fh.read())


def write_building_annotations(x: Complex, path: str):
    """Sidecar: vertex id -> subspace dimension and echelon basis rows.

    Each basis row is the hex rendering of its base-q digit value, least
    significant entry first, so any supported field order fits.
    """
    labels = x.labels or {}
    if "vertex_spaces" not in labels:
        raise InputFormatError("complex carries no subspace annotations")
    q = labels["q"]
    lines = [f"# r={labels['r']} q={q}\n"]
    for vid, space in enumerate(labels["vertex_spaces"]):
        rows = []
        for row in space.basis:
            val = 0
            for entry in reversed(row):
                val = val * q + entry
            rows.append(format(val, "x"))
        lines.append(f"{vid} {space.dim} {','.join(rows)}\n")
    _atomic_write_text(path, "".join(lines))


def rational_json(value: Fraction | None, infinite: bool = False):
    if infinite:
        return "inf"
    if value is None:
        return None
    return {"num": str(value.numerator), "den": str(value.denominator)}


def dumps_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def write_json(obj, path: str):
    _atomic_write_text(path, dumps_json(obj))


def file_digest(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return h.hexdigest()


def _atomic_write_text(path: str, text: str):
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w", encoding="ascii") as fh:
        fh.write(text)
    os.replace(tmp, path)
