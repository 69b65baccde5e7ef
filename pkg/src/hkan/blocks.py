"""Block functions: least-squares combinations of basis functions on one input."""

from dataclasses import dataclass

import numpy as np

from .basis import BafKind, BafParams, baf_response
from .errors import InvalidInput
from .linsolve import solve_ridge
from .metrics import r_squared


@dataclass(frozen=True, eq=False)
class Block:
    """A fitted block: ``phi(z) = sum_r c_r g_r(z)`` over a single input column.

    All basis functions of a block share one kind and one ``sigma``.
    """

    input_index: int
    kind: BafKind
    mu: np.ndarray
    sigma: float
    c: np.ndarray
    train_r2: float

    @property
    def m(self):
        return self.c.size

    @property
    def bafs(self):
        return [BafParams(self.kind, float(mu), self.sigma) for mu in self.mu]

    def responses(self, column):
        return baf_response(self.kind, self.mu, self.sigma, column)

    def predict(self, column):
        return self.responses(column) @ self.c

    def to_dict(self):
        return {
            "input_index": int(self.input_index),
            "kind": self.kind.value,
            "mu": [float(v) for v in self.mu],
            "sigma": float(self.sigma),
            "c": [float(v) for v in self.c],
            "train_r2": float(self.train_r2),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            input_index=int(d["input_index"]),
            kind=BafKind(d["kind"]),
            mu=np.asarray(d["mu"], dtype=np.float64),
            sigma=float(d["sigma"]),
            c=np.asarray(d["c"], dtype=np.float64),
            train_r2=float(d["train_r2"]),
        )


def build_design_matrix(bafs, column):
    """Response matrix of ``bafs`` on ``column``: entry ``(i, r)`` is ``g_r(z_i)``."""
    column = np.asarray(column, dtype=np.float64).ravel()
    bafs = list(bafs)
    if not bafs or column.size == 0:
        raise InvalidInput("design matrix needs at least one basis function and one point")
    first = bafs[0]
    if all(b.kind == first.kind and b.sigma == first.sigma for b in bafs):
        return baf_response(first.kind, [b.mu for b in bafs], first.sigma, column)
    return np.column_stack([baf_response(b.kind, [b.mu], b.sigma, column)[:, 0] for b in bafs])


def _fit(input_index, kind, mu, sigma, column, y, lam):
    kind = BafKind(kind)
    if kind is BafKind.IDENTITY:
        mu, sigma, lam = np.zeros(1), 1.0, 0.0
    mu = np.asarray(mu, dtype=np.float64).ravel()
    G = baf_response(kind, mu, sigma, column)
    c = solve_ridge(G, y, lam).solution
    return Block(input_index, kind, mu, float(sigma), c, r_squared(y, G @ c))


def fit_block(p, bafs, column, y, lam_phi=0.0):
    """Fit the weights of one block to the target by (ridge) least squares.

    Parameters
    ----------
    p : int
        Index of the input column the block reads.
    bafs : sequence of BafParams
        Basis functions of the block; they must share kind and sigma.
        An identity block always collapses to a single basis function.
    column : array_like, shape (N,)
    y : array_like, shape (N,)
    lam_phi : float
        Ridge parameter; 0 gives the pseudoinverse solution.
    """
    bafs = list(bafs)
    if not bafs:
        raise InvalidInput("a block needs at least one basis function")
    kind, sigma = bafs[0].kind, bafs[0].sigma
    if any(b.kind != kind or b.sigma != sigma for b in bafs):
        raise InvalidInput("basis functions in one block must share kind and sigma")
    return _fit(p, kind, [b.mu for b in bafs], sigma, column, y, lam_phi)


def eval_block(b, z):
    return float(b.predict([z])[0])
