"""JSON matrix documents.

Input documents hold exact Gaussian-rational strings::

    {"n": 2, "entries": [["1", "1/2+3i"], ["0", "-i"]]}

Output documents carry either the same exact strings (``"exact": true``) or
decimal complex strings together with the working precision in bits.
"""

from __future__ import annotations

import json
import math

import mpmath
import numpy as np

from .arithmetic import DEFAULT_PROFILE, GaussianRational
from .exceptions import DimensionMismatch, ParseError
from .linalg import is_exact_matrix

__all__ = [
    "parse_matrix_document",
    "read_matrix",
    "matrix_document",
    "format_scalar",
    "dumps",
]


def _locate(text, needle):
    """1-based ``(line, column)`` of the first occurrence of ``needle``."""
    pos = text.find(needle)
    if pos < 0:
        return None, None
    line = text.count("\n", 0, pos) + 1
    column = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, column


def parse_matrix_document(text: str) -> np.ndarray:
    """Exact matrix from a ``{"n": ..., "entries": [[...], ...]}`` document.

    Raises
    ------
    ParseError
        Malformed JSON, a missing field or an entry outside the
        Gaussian-rational grammar; carries the line and column when known.
    DimensionMismatch
        Ragged rows or a shape that disagrees with ``n``.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict) or "entries" not in doc or "n" not in doc:
        raise ParseError('matrix document needs "n" and "entries" fields', 1, 1)
    n, entries = doc["n"], doc["entries"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError(f'"n" must be a positive integer, got {n!r}', *_locate(text, '"n"'))
    if not isinstance(entries, list) or not all(isinstance(r, list) for r in entries):
        raise ParseError('"entries" must be a list of rows', *_locate(text, '"entries"'))
    if len(entries) != n or any(len(r) != n for r in entries):
        shape = [len(r) for r in entries]
        raise DimensionMismatch(f"expected {n} rows of length {n}, got row lengths {shape}")
    M = np.empty((n, n), dtype=object)
    for i, row in enumerate(entries):
        for j, x in enumerate(row):
            if not isinstance(x, (str, int)) or isinstance(x, bool):
                raise ParseError(f"entry ({i + 1},{j + 1}) must be a string, got {x!r}", *_locate(text, json.dumps(x)))
            try:
                M[i, j] = GaussianRational.parse(str(x))
            except ParseError as exc:
                raise ParseError(f"entry ({i + 1},{j + 1}): {exc}", *_locate(text, json.dumps(x))) from None
    return M


def read_matrix(path) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        return parse_matrix_document(fh.read())


def _digits(bits):
    return max(1, int(bits * math.log10(2)))


def format_scalar(x, precision_bits=None):
    """Exact text for Gaussian rationals, ``a+bi`` decimals otherwise."""
    if isinstance(x, GaussianRational):
        return str(x)
    digits = _digits(precision_bits or DEFAULT_PROFILE.precision_bits)
    re = mpmath.nstr(x.real, digits)
    im = mpmath.nstr(abs(x.imag), digits)
    sign = "-" if x.imag < 0 else "+"
    return f"{re}{sign}{im}i"


def matrix_document(M, precision_bits=None) -> dict:
    """Serialisable document for an exact or approximate matrix."""
    M = np.asarray(M, dtype=object)
    exact = is_exact_matrix(M)
    doc = {"n": int(M.shape[0])}
    if exact:
        doc["exact"] = True
    else:
        doc["exact"] = False
        doc["precision_bits"] = int(precision_bits or DEFAULT_PROFILE.precision_bits)
    doc["entries"] = [[format_scalar(x, precision_bits) for x in row] for row in M]
    return doc


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, default=str)
