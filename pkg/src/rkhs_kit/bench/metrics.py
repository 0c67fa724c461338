"""Error, classification and two-sample metrics."""

import math

import numpy as np
from scipy.stats import ks_2samp

from ..exceptions import ValidationError

KINDS = ("rmse", "normalized", "accuracy", "confusion", "ks")


def _pair(pred, truth):
    pred = np.asarray(pred, dtype=float)
    truth = np.asarray(truth, dtype=float)
    if pred.size == 0 or truth.size == 0:
        raise ValidationError("metrics need non-empty inputs")
    if pred.shape != truth.shape:
        raise ValidationError(f"shapes differ: {pred.shape} vs {truth.shape}")
    return pred, truth


def rmse(pred, truth):
    pred, truth = _pair(pred, truth)
    return float(np.sqrt(np.mean((pred - truth) ** 2)))


def normalized_error(pred, truth):
    """|pred - truth| / (|truth| + |pred|), zero when both vanish."""
    pred, truth = _pair(pred, truth)
    den = np.linalg.norm(truth) + np.linalg.norm(pred)
    return float(np.linalg.norm(pred - truth) / den) if den > 0 else 0.0


def _labels(a):
    a = np.asarray(a)
    if a.ndim == 2:
        # probability or one-hot rows
        return np.argmax(a, axis=1)
    return a.ravel()


def accuracy(pred, truth):
    """Fraction of matching labels; 2-D inputs are read by row argmax."""
    p, t = _labels(pred), _labels(truth)
    if p.size == 0 or p.shape != t.shape:
        raise ValidationError("accuracy needs non-empty label vectors of equal length")
    return float(np.mean(p == t))


def confusion(pred, truth, n_classes=None):
    """M[i, j] counts samples with truth i predicted as j."""
    p = _labels(pred).astype(np.int64)
    t = _labels(truth).astype(np.int64)
    if p.size == 0 or p.shape != t.shape:
        raise ValidationError("confusion needs non-empty label vectors of equal length")
    if p.min() < 0 or t.min() < 0:
        raise ValidationError("class labels must be non-negative integers")
    n = int(max(p.max(), t.max()) + 1) if n_classes is None else int(n_classes)
    M = np.zeros((n, n), dtype=np.int64)
    np.add.at(M, (t, p), 1)
    return M


def ks_critical(n_x, n_y, alpha=0.05):
    """c(alpha) sqrt((n_x + n_y) / (n_x n_y)) with c(alpha) = sqrt(-log(alpha / 2) / 2)."""
    c = math.sqrt(-math.log(alpha / 2.0) / 2.0)
    return c * math.sqrt((n_x + n_y) / (n_x * n_y))


def ks(sample_x, sample_y, alpha=0.05):
    """Two-sample Kolmogorov-Smirnov statistic and its critical value.

    Returns
    -------
    statistic : float
        Supremum distance between the two empirical CDFs.
    critical : float
        Rejection threshold at level ``alpha``.
    """
    x = np.asarray(sample_x, dtype=float).ravel()
    y = np.asarray(sample_y, dtype=float).ravel()
    if x.size == 0 or y.size == 0:
        raise ValidationError("KS test needs non-empty samples")
    return float(ks_2samp(x, y).statistic), ks_critical(x.size, y.size, alpha)


def metrics(pred, truth, kind):
    """Dispatch on ``kind`` in ``("rmse", "normalized", "accuracy", "confusion", "ks")``."""
    funcs = {"rmse": rmse, "normalized": normalized_error, "accuracy": accuracy,
             "confusion": confusion, "ks": ks}
    if kind not in funcs:
        raise ValidationError(f"unknown metric '{kind}', expected one of {KINDS}")
    return funcs[kind](pred, truth)


def moments(sample):
    """Mean, variance, skewness and excess kurtosis of each column."""
    from scipy.stats import kurtosis, skew

    a = np.asarray(sample, dtype=float)
    if a.ndim == 1:
        a = a[:, None]
    return {"mean": a.mean(axis=0), "variance": a.var(axis=0),
            "skewness": skew(a, axis=0), "kurtosis": kurtosis(a, axis=0)}
