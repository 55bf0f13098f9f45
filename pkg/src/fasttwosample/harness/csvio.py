"""Reading sample files and writing result tables."""

import csv
import math

import numpy as np

from ..errors import DataError

RESULT_HEADER = ["sweep", "test", "rate", "wald_low", "wald_high", "mean_elapsed_s", "replications", "flags"]


def _is_number(text):
    try:
        float(text)
    except ValueError:
        return False
    return True


def load_csv(path):
    """Read a numeric CSV into an n x d array.

    A first row containing any non-numeric cell is treated as a header and
    skipped. Errors report 1-based row and column numbers as they appear in
    the file.
    """
    rows = []
    width = None
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            cells = [c.strip() for c in row]
            if not cells or all(c == "" for c in cells):
                continue
            if lineno == 1 and not all(_is_number(c) for c in cells):
                continue
            if width is None:
                width = len(cells)
            elif len(cells) != width:
                raise DataError(f"expected {width} columns, found {len(cells)}", path, row=lineno)
            values = []
            for col, c in enumerate(cells, start=1):
                try:
                    v = float(c)
                except ValueError:
                    raise DataError(f"non-numeric cell {c!r}", path, row=lineno, column=col) from None
                if not math.isfinite(v):
                    raise DataError(f"non-finite cell {c!r}", path, row=lineno, column=col)
                values.append(v)
            rows.append(values)
    if not rows:
        raise DataError("no numeric rows", path)
    return np.array(rows, dtype=float)


def load_csv_pair(path_x, path_y):
    """Load two samples that must share their dimension."""
    X = load_csv(path_x)
    Y = load_csv(path_y)
    if X.shape[1] != Y.shape[1]:
        raise DataError(
            f"dimension mismatch: {path_x} has {X.shape[1]} columns but {path_y} has {Y.shape[1]}"
        )
    return X, Y


def _fmt(value):
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_rows(rows, fh):
    """Write PowerRows as CSV with the fixed result header."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(RESULT_HEADER)
    for r in rows:
        writer.writerow(
            [
                _fmt(r.sweep_value),
                r.test,
                _fmt(r.rate),
                _fmt(r.wald_low),
                _fmt(r.wald_high),
                _fmt(r.mean_elapsed),
                r.replications,
                ";".join(r.flags),
            ]
        )
