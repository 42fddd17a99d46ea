"""Matrix ingestion and emission: Matrix Market files and a flat JSON form.

The JSON form is ``{"rows": m, "cols": n, "re": [...], "im": [...]}`` with
row-major entry lists.  Matrix Market covers both ``array`` and
``coordinate`` layouts through scipy.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import scipy.io
import scipy.sparse

from .core import as_matrix
from .errors import ParseError


def matrix_to_json(a) -> dict:
    a = as_matrix(a)
    return {
        "rows": int(a.shape[0]),
        "cols": int(a.shape[1]),
        "re": [float(x) for x in a.real.ravel()],
        "im": [float(x) for x in a.imag.ravel()],
    }


def matrix_from_json(d) -> np.ndarray:
    if not isinstance(d, dict):
        raise ParseError(f"matrix object must be a mapping, got {type(d).__name__}")
    try:
        rows, cols = int(d["rows"]), int(d["cols"])
        re = np.asarray(d["re"], dtype=float)
        im = np.asarray(d["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad matrix object: {exc}") from exc
    if rows < 0 or cols < 0 or re.shape != (rows * cols,) or im.shape != (rows * cols,):
        raise ParseError("matrix entry lists do not match rows * cols")
    return (re + 1j * im).reshape(rows, cols)


def read_matrix_market(path) -> np.ndarray:
    try:
        m = scipy.io.mmread(path)
    except (ValueError, OSError) as exc:
        raise ParseError(f"cannot read matrix market file {path}: {exc}") from exc
    if scipy.sparse.issparse(m):
        m = m.toarray()
    return as_matrix(m)


def write_matrix_market(path, a, comment=""):
    a = as_matrix(a)
    scipy.io.mmwrite(path, a, comment=comment)


def read_matrix_file(path) -> np.ndarray:
    """Read a matrix from a path, dispatching on suffix or header."""
    p = Path(path)
    if not p.exists():
        raise ParseError(f"no such matrix file: {path}")
    suffix = p.suffix.lower()
    if suffix in (".mtx", ".mm"):
        return read_matrix_market(p)
    if suffix == ".json":
        try:
            payload = json.loads(p.read_text())
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad JSON in {path}: {exc}") from exc
        return matrix_from_json(payload)
    head = p.read_text(errors="replace").lstrip()[:14]
    if head.startswith("%%MatrixMarket"):
        return read_matrix_market(p)
    raise ParseError(f"unrecognized matrix format: {path}")


def load_matrix_source(src, base_dir=None) -> np.ndarray:
    """Resolve a manifest matrix source: inline JSON object or file path."""
    if isinstance(src, dict):
        return matrix_from_json(src)
    if isinstance(src, str):
        path = Path(src)
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        return read_matrix_file(path)
    raise ParseError(f"matrix source must be a path or object, got {type(src).__name__}")
