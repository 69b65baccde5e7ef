"""Cross-validation and repeated-run statistics."""

from dataclasses import dataclass

import numpy as np

from .datasets import NormStats, fit_normalization
from .errors import InvalidInput
from .metrics import r_squared, rmse  # noqa: F401  (re-exported)
from .network import fit_hkan


@dataclass(frozen=True, eq=False)
class RunStats:
    median: float
    iqr: float
    per_run_rmse: np.ndarray
    per_run_train_rmse: np.ndarray = None

    @classmethod
    def from_runs(cls, values, train_values=None):
        values = np.asarray(values, dtype=np.float64)
        q1, med, q3 = np.percentile(values, [25, 50, 75])
        if train_values is not None:
            train_values = np.asarray(train_values, dtype=np.float64)
        return cls(float(med), float(q3 - q1), values, train_values)

    def to_dict(self):
        d = {
            "median_rmse": self.median,
            "iqr": self.iqr,
            "runs": int(self.per_run_rmse.size),
            "per_run_rmse": [float(v) for v in self.per_run_rmse],
        }
        if self.per_run_train_rmse is not None:
            d["per_run_train_rmse"] = [float(v) for v in self.per_run_train_rmse]
        return d


def kfold_indices(n, k, seed):
    """Seeded partition of ``range(n)`` into ``k`` folds whose sizes differ by at most one."""
    k = int(k)
    if k < 2:
        raise InvalidInput(f"need at least 2 folds, got {k}")
    if k > n:
        raise InvalidInput(f"cannot make {k} folds from {n} samples")
    perm = np.random.default_rng(seed).permutation(n)
    return [np.sort(f) for f in np.array_split(perm, k)]


def _stats(train, normalize):
    return fit_normalization(train) if normalize else NormStats.identity(train.n_inputs)


def iter_fold_rmse(cfg, ds, k, seed, workers=None, normalize=True):
    """Yield the held-out RMSE of each fold in turn.

    Scaling statistics are refitted on each fold's training part.
    """
    folds = kfold_indices(ds.n_samples, k, seed)
    for held in folds:
        mask = np.ones(ds.n_samples, dtype=bool)
        mask[held] = False
        train, test = ds.subset(mask), ds.subset(held)
        model = fit_hkan(train.X, train.y, cfg, _stats(train, normalize), workers)
        yield rmse(test.y, model.predict(test.X))


def kfold_cv(cfg, ds, k=5, seed=0, workers=None, normalize=True):
    """Mean held-out RMSE over ``k`` folds."""
    return float(np.mean(list(iter_fold_rmse(cfg, ds, k, seed, workers, normalize))))


def repeated_runs(cfg, train, test, runs, workers=None, normalize=True):
    """Train ``runs`` times with seeds ``cfg.seed + i`` and summarise test RMSE."""
    if int(runs) < 1:
        raise InvalidInput(f"runs must be >= 1, got {runs}")
    stats = _stats(train, normalize)
    scores, train_scores = [], []
    for i in range(int(runs)):
        model = fit_hkan(train.X, train.y, cfg.with_seed(cfg.seed + i), stats, workers)
        scores.append(rmse(test.y, model.predict(test.X)))
        train_scores.append(rmse(train.y, model.predict(train.X)))
    return RunStats.from_runs(scores, train_scores)
