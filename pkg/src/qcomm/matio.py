"""Text matrix files.

Format: the first line holds ``n``; then ``n`` lines of ``n``
whitespace-separated entries written as ``re+imi`` (``re-imi`` for a
negative imaginary part) with 17 significant digits, which round-trips
every double exactly. Blank lines and ``#`` comments are ignored on read.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from qcomm.matcore import as_matrix

__all__ = ["MatrixFormatError", "format_entry", "format_matrix", "parse_matrix", "read_matrix", "write_matrix"]


class MatrixFormatError(ValueError):
    pass


def format_entry(z: complex) -> str:
    z = complex(z)
    return f"{z.real:.17g}{z.imag:+.17g}i"


def parse_entry(tok: str) -> complex:
    if not tok.endswith(("i", "j")):
        raise MatrixFormatError(f"entry {tok!r} lacks the imaginary unit suffix")
    try:
        z = complex(tok[:-1] + "j")
    except ValueError as exc:
        raise MatrixFormatError(f"cannot parse entry {tok!r}") from exc
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise MatrixFormatError(f"non-finite entry {tok!r}")
    return z


def format_matrix(a) -> str:
    a = as_matrix(a)
    rows = [" ".join(format_entry(z) for z in row) for row in a]
    return "\n".join([str(a.shape[0]), *rows]) + "\n"


def parse_matrix(text: str) -> np.ndarray:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise MatrixFormatError("empty matrix file")
    try:
        n = int(lines[0])
    except ValueError as exc:
        raise MatrixFormatError(f"first line must be the dimension, got {lines[0]!r}") from exc
    if n < 1:
        raise MatrixFormatError(f"dimension must be positive, got {n}")
    rows = lines[1:]
    if len(rows) != n:
        raise MatrixFormatError(f"expected {n} rows, found {len(rows)}")
    out = np.empty((n, n), dtype=np.complex128)
    for i, row in enumerate(rows):
        toks = row.split()
        if len(toks) != n:
            raise MatrixFormatError(f"row {i + 1} has {len(toks)} entries, expected {n}")
        out[i] = [parse_entry(t) for t in toks]
    return out


def read_matrix(path) -> np.ndarray:
    return parse_matrix(Path(path).read_text())


def write_matrix(path, a) -> None:
    Path(path).write_text(format_matrix(a))
