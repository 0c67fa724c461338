"""Point-set files and kernel specs for the command line."""

import csv
import io
import json
import os

import numpy as np

from .exceptions import ValidationError
from .kernels.kernel import Kernel, default_kernel

FLOAT_FORMAT = "%.17g"


def _is_number(text):
    try:
        float(text)
    except ValueError:
        return False
    return True


def read_pointset(source, header=None):
    """Read a CSV point set.

    Parameters
    ----------
    source : str or file-like
        Path, or an open text stream.
    header : bool or None, default=None
        Whether the first row holds column names. ``None`` detects it: the
        first row is a header when any of its fields is not a number.

    Returns
    -------
    X : ndarray of shape (N, D)
    names : list of str or None
    """
    if hasattr(source, "read"):
        text = source.read()
    else:
        try:
            with open(source, newline="") as fh:
                text = fh.read()
        except OSError as exc:
            raise ValidationError(f"cannot read '{source}': {exc.strerror}") from None
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(f.strip() for f in r)]
    if not rows:
        raise ValidationError("point set file is empty")
    if header is None:
        header = not all(_is_number(f) for f in rows[0])
    names = [f.strip() for f in rows[0]] if header else None
    body = rows[1:] if header else rows
    if not body:
        raise ValidationError("point set has no data rows")
    width = len(body[0])
    for i, r in enumerate(body):
        if len(r) != width:
            raise ValidationError(f"row {i + 1} has {len(r)} fields, expected {width}")
    if names is not None and len(names) != width:
        raise ValidationError(f"header has {len(names)} fields, data has {width}")
    try:
        X = np.array([[float(f) for f in r] for r in body])
    except ValueError as exc:
        raise ValidationError(f"non-numeric field: {exc}") from None
    if not np.all(np.isfinite(X)):
        raise ValidationError("point set contains non-finite values")
    return X, names


def format_rows(X):
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    return [",".join(FLOAT_FORMAT % v for v in row) for row in X]


def write_pointset(target, X, names=None):
    """Write rows with 17 significant digits, so reading back is exact.

    ``target`` is a path or a text stream; ``names`` adds a header row.
    """
    lines = ([",".join(names)] if names is not None else []) + format_rows(X)
    text = "\n".join(lines) + "\n"
    if hasattr(target, "write"):
        target.write(text)
    else:
        with open(target, "w", newline="") as fh:
            fh.write(text)


def write_columns(target, columns):
    """Write a dict of equal-length 1-D arrays as a CSV table with header."""
    names = list(columns)
    data = np.column_stack([np.asarray(columns[n], dtype=float).ravel() for n in names])
    write_pointset(target, data, names)


def load_kernel(spec):
    """Kernel from a JSON file path or an inline JSON object; ``None`` gives the default."""
    if spec is None:
        return default_kernel()
    text = spec.strip()
    if not text.startswith("{"):
        if not os.path.exists(text):
            raise ValidationError(f"kernel spec '{spec}' is neither JSON nor an existing file")
        with open(text) as fh:
            text = fh.read()
    return Kernel.from_json(text)


def dump_json(obj):
    return json.dumps(obj, indent=2, sort_keys=True)
