"""Fixed univariate basis functions and the rules that place them."""

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import expit

from .errors import InvalidInput


class BafKind(str, Enum):
    GAUSSIAN = "gaussian"
    SIGMOID = "sigmoid"
    RELU = "relu"
    SOFTPLUS = "softplus"
    TANH = "tanh"
    IDENTITY = "identity"


class Placement(str, Enum):
    RANDOM = "random"
    DATA = "data"
    EQUAL = "equal"


# Kinds and placements that may only appear in the output layer.
OUTPUT_ONLY_KINDS = frozenset({BafKind.IDENTITY})
OUTPUT_ONLY_PLACEMENTS = frozenset({Placement.EQUAL})


@dataclass(frozen=True)
class BafParams:
    kind: BafKind
    mu: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", BafKind(self.kind))
        if self.kind is not BafKind.IDENTITY and not self.sigma > 0:
            raise InvalidInput(f"sigma must be > 0, got {self.sigma}")


def baf_response(kind, mu, sigma, z):
    """Evaluate a family of basis functions sharing one kind and sigma.

    Parameters
    ----------
    kind : BafKind or str
    mu : array_like, shape (m,)
        Location parameters.
    sigma : float
        Smoothing (slope / bandwidth) parameter.
    z : array_like, shape (N,)
        Points at which to evaluate.

    Returns
    -------
    numpy.ndarray, shape (N, m)
        Entry ``(i, r)`` is ``g_r(z_i)``.
    """
    kind = BafKind(kind)
    z = np.asarray(z, dtype=np.float64).reshape(-1, 1)
    mu = np.asarray(mu, dtype=np.float64).reshape(1, -1)
    if kind is BafKind.IDENTITY:
        return np.repeat(z, mu.shape[1], axis=1)
    a = sigma * (z - mu)
    if kind is BafKind.GAUSSIAN:
        return np.exp(-(a * a))
    if kind is BafKind.SIGMOID:
        return expit(a)
    if kind is BafKind.RELU:
        return np.maximum(a, 0.0)
    if kind is BafKind.SOFTPLUS:
        return np.maximum(a, 0.0) + np.log1p(np.exp(-np.abs(a)))
    if kind is BafKind.TANH:
        return np.tanh(a)
    raise InvalidInput(f"unknown basis kind {kind!r}")


def eval_baf(p, z):
    """Value of a single basis function at scalar ``z``."""
    return float(baf_response(p.kind, [p.mu], p.sigma, [z])[0, 0])


def placement_range(column):
    """Interval over which random and equally spaced locations are drawn.

    Inputs already inside [0, 1] use [0, 1]; anything wider uses its observed
    range.
    """
    column = np.asarray(column, dtype=np.float64)
    lo, hi = float(column.min()), float(column.max())
    if lo >= 0.0 and hi <= 1.0:
        return 0.0, 1.0
    return lo, hi


def generate_locations(strategy, m, column, rng):
    """Location parameters for ``m`` basis functions over one input column.

    Parameters
    ----------
    strategy : Placement or str
        ``random`` draws uniformly over :func:`placement_range`, ``data``
        samples training values (with replacement) as support points, and
        ``equal`` puts midpoints of ``m`` equal cells over the range.
    m : int
    column : array_like, shape (N,)
    rng : numpy.random.Generator
    """
    strategy = Placement(strategy)
    if int(m) < 1:
        raise InvalidInput(f"number of basis functions must be >= 1, got {m}")
    m = int(m)
    column = np.asarray(column, dtype=np.float64).ravel()
    if column.size < 1:
        raise InvalidInput("cannot place basis functions on an empty column")
    if not np.all(np.isfinite(column)):
        raise InvalidInput("column must be finite")
    if strategy is Placement.DATA:
        return column[rng.integers(0, column.size, size=m)]
    lo, hi = placement_range(column)
    if strategy is Placement.RANDOM:
        return rng.uniform(lo, hi, size=m)
    return lo + (np.arange(m) + 0.5) * (hi - lo) / m
