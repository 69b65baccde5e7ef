"""Regression accuracy metrics."""

import numpy as np

from .errors import DimensionMismatch


def _pair(y, y_hat):
    y = np.asarray(y, dtype=np.float64).ravel()
    y_hat = np.asarray(y_hat, dtype=np.float64).ravel()
    if y.shape != y_hat.shape:
        raise DimensionMismatch(f"length mismatch: {y.size} targets vs {y_hat.size} predictions")
    if y.size < 1:
        raise DimensionMismatch("metrics need at least one sample")
    return y, y_hat


def rmse(y, y_hat):
    y, y_hat = _pair(y, y_hat)
    return float(np.sqrt(np.mean((y - y_hat) ** 2)))


def r_squared(y, y_hat):
    """Coefficient of determination ``1 - SSE/SST``; 0 for a constant target."""
    y, y_hat = _pair(y, y_hat)
    resid = y - y_hat
    dev = y - y.mean()
    sst = float(dev @ dev)
    if sst == 0.0:
        return 0.0
    return 1.0 - float(resid @ resid) / sst
