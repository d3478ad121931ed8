"""Matrix files (Matrix Market and dense JSON), complex literals and atomic writes."""
from __future__ import annotations

import io as _io
import json
import os
import re
import tempfile
from pathlib import Path

import numpy as np
import scipy.io


class MatrixFormatError(ValueError):
    """Unparseable or non-square matrix input, with a location when known."""

    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(loc + message)
        self.line, self.column = line, column


_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_REAL = re.compile(rf"^[+-]?{_NUM}$")
_IMAG = re.compile(rf"^(?P<s>[+-]?)(?P<b>{_NUM})?i$")
_FULL = re.compile(rf"^(?P<a>[+-]?{_NUM})(?P<s>[+-])(?P<b>{_NUM})?i$")


def parse_complex(text):
    """Parse ``a+bi`` style literals: ``1``, ``-2.5``, ``3i``, ``-i``, ``1-2i``, ``1e-3+4e2i``.

    No spaces are allowed.
    """
    t = text.strip()
    if _REAL.match(t):
        return complex(float(t), 0.0)
    m = _IMAG.match(t)
    if m:
        b = float(m["b"]) if m["b"] else 1.0
        return complex(0.0, -b if m["s"] == "-" else b)
    m = _FULL.match(t)
    if m:
        b = float(m["b"]) if m["b"] else 1.0
        return complex(float(m["a"]), -b if m["s"] == "-" else b)
    raise ValueError(f"not a complex literal of the form a+bi: {text!r}")


def format_complex(z):
    z = complex(z)
    sign = "-" if z.imag < 0 or (z.imag == 0 and str(z.imag).startswith("-")) else "+"
    return f"{z.real!r}{sign}{abs(z.imag)!r}i"


# JSON ---------------------------------------------------------------------


def _entry(value, line, col):
    if isinstance(value, bool):
        raise MatrixFormatError("boolean is not a matrix entry", line, col)
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, list) and len(value) == 2 and all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
        return complex(value[0], value[1])
    raise MatrixFormatError(f"entry must be a number or [re, im], got {value!r}", line, col)


def parse_json_matrix(text):
    """Dense JSON ``{"n": n, "rows": [[...], ...]}``; entries are numbers or ``[re, im]``.

    Diagnostics report the 1-based row as ``line`` and entry as ``column``.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict) or "rows" not in doc:
        raise MatrixFormatError('expected an object with a "rows" array')
    rows = doc["rows"]
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise MatrixFormatError('"rows" must be a list of lists')
    n = doc.get("n", len(rows))
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise MatrixFormatError(f'"n" must be a nonnegative integer, got {n!r}')
    if len(rows) != n:
        raise MatrixFormatError(f"expected {n} rows, found {len(rows)}", len(rows))
    a = np.zeros((n, n), dtype=complex)
    for i, row in enumerate(rows):
        if len(row) != n:
            raise MatrixFormatError(f"row has {len(row)} entries, expected {n} (matrix must be square)",
                                    i + 1, len(row))
        for j, v in enumerate(row):
            a[i, j] = _entry(v, i + 1, j + 1)
    return a


def _json_entry(z):
    z = complex(z)
    return z.real if z.imag == 0 else [z.real, z.imag]


def dump_json_matrix(a):
    a = np.asarray(a)
    return json.dumps({"n": int(a.shape[0]), "rows": [[_json_entry(v) for v in row] for row in a]})


# Matrix Market --------------------------------------------------------------


def parse_matrix_market(text):
    """Array or coordinate Matrix Market, real/integer/complex, any symmetry."""
    lines = text.splitlines()
    if not lines or not lines[0].lower().startswith("%%matrixmarket"):
        raise MatrixFormatError("missing %%MatrixMarket header", 1)
    size_line = next((k for k, ln in enumerate(lines[1:], start=2)
                      if ln.strip() and not ln.lstrip().startswith("%")), None)
    if size_line is None:
        raise MatrixFormatError("missing size line", len(lines))
    dims = lines[size_line - 1].split()
    try:
        rows, cols = int(dims[0]), int(dims[1])
    except (IndexError, ValueError):
        raise MatrixFormatError(f"bad size line {lines[size_line - 1]!r}", size_line) from None
    if rows != cols:
        raise MatrixFormatError(f"matrix is {rows}x{cols}; a square matrix is required", size_line,
                                len(dims[0]) + 2)
    try:
        a = scipy.io.mmread(_io.BytesIO(text.encode()))
    except Exception as exc:  # scipy raises several types for malformed bodies
        raise MatrixFormatError(f"malformed Matrix Market body: {exc}") from None
    if hasattr(a, "toarray"):
        a = a.toarray()
    return np.asarray(a, dtype=complex)


def dump_matrix_market(a):
    a = np.asarray(a)
    real = not np.iscomplexobj(a) or not np.any(a.imag)
    buf = _io.BytesIO()
    scipy.io.mmwrite(buf, a.real if real else a, precision=17)
    return buf.getvalue().decode()


def read_matrix(path):
    """Read a matrix file; the format is chosen by extension (``.json`` or Matrix Market)."""
    p = Path(path)
    try:
        text = p.read_text()
    except UnicodeDecodeError:
        raise MatrixFormatError("file is not text") from None
    if p.suffix.lower() == ".json":
        return parse_json_matrix(text)
    return parse_matrix_market(text)


def write_matrix(path, a):
    p = Path(path)
    text = dump_json_matrix(a) if p.suffix.lower() == ".json" else dump_matrix_market(a)
    atomic_write(p, text)


def read_vector(path):
    """A vector as a JSON list of numbers / ``[re, im]`` pairs, or one entry per line."""
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError:
        return np.array([parse_complex(t) for t in text.split()], dtype=complex)
    if isinstance(doc, dict):
        doc = doc.get("values", doc.get("z"))
    if not isinstance(doc, list):
        raise MatrixFormatError("vector file must hold a list")
    return np.array([_entry(v, None, k + 1) for k, v in enumerate(doc)], dtype=complex)


def atomic_write(path, text):
    """Write to a temporary file in the target directory, then rename over ``path``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
