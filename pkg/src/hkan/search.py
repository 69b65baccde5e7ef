"""Seeded random hyperparameter search with cross-validation and baseline pruning."""

import json
import logging
import time
from dataclasses import dataclass, field

import numpy as np

from .basis import OUTPUT_ONLY_KINDS, OUTPUT_ONLY_PLACEMENTS, BafKind, Placement
from .errors import HkanError, InvalidInput
from .evaluation import iter_fold_rmse
from .network import HkanConfig, LayerConfig

log = logging.getLogger(__name__)

HIDDEN_KINDS = (BafKind.SIGMOID, BafKind.GAUSSIAN, BafKind.RELU, BafKind.SOFTPLUS, BafKind.TANH)


@dataclass(frozen=True)
class SearchSpace:
    """Ranges sampled by :func:`sample_config`. Integer ranges are inclusive."""

    n_layers: tuple = (1, 2, 3)
    width_range: tuple = (2, 1000)
    # widest hidden layer allowed in three-layer nets
    width_cap_three_layers: int = 200
    hidden_kinds: tuple = HIDDEN_KINDS
    output_kinds: tuple = HIDDEN_KINDS + (BafKind.IDENTITY,)
    sigma_range: tuple = (1, 50)
    m_range: tuple = (1, 40)
    hidden_placements: tuple = (Placement.RANDOM, Placement.DATA)
    output_placements: tuple = (Placement.RANDOM, Placement.DATA, Placement.EQUAL)
    lambdas: tuple = (0.0, 0.001, 0.01, 0.1, 1.0, 10.0)

    def __post_init__(self):
        conv = {
            "hidden_kinds": BafKind,
            "output_kinds": BafKind,
            "hidden_placements": Placement,
            "output_placements": Placement,
        }
        for name, enum in conv.items():
            object.__setattr__(self, name, tuple(enum(v) for v in getattr(self, name)))
        for name in ("n_layers", "width_range", "sigma_range", "m_range", "lambdas"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if not self.n_layers or any(int(L) < 1 for L in self.n_layers):
            raise InvalidInput(f"n_layers must be a non-empty set of positive ints, got {self.n_layers}")
        if any(L > 1 for L in self.n_layers) and not (self.hidden_kinds and self.hidden_placements):
            raise InvalidInput("multi-layer spaces need hidden kinds and placements")
        if not (self.output_kinds and self.output_placements and self.lambdas):
            raise InvalidInput("output kinds, output placements and lambdas must be non-empty")
        if set(self.hidden_kinds) & OUTPUT_ONLY_KINDS:
            raise InvalidInput("identity basis functions are only allowed in the output layer")
        if set(self.hidden_placements) & OUTPUT_ONLY_PLACEMENTS:
            raise InvalidInput("equally spaced placement is only allowed in the output layer")
        for name in ("width_range", "sigma_range", "m_range"):
            lo, hi = getattr(self, name)
            if not 1 <= lo <= hi:
                raise InvalidInput(f"{name} must satisfy 1 <= low <= high, got {(lo, hi)}")
        if any(lam < 0 for lam in self.lambdas):
            raise InvalidInput("lambdas must be >= 0")

    def max_width(self, n_layers):
        hi = self.width_range[1]
        return min(hi, self.width_cap_three_layers) if n_layers >= 3 else hi

    def to_dict(self):
        d = {}
        for name in self.__dataclass_fields__:
            v = getattr(self, name)
            d[name] = [x.value if hasattr(x, "value") else x for x in v] if isinstance(v, tuple) else v
        return d

    @classmethod
    def from_dict(cls, d):
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise InvalidInput(f"unknown search space fields: {sorted(unknown)}")
        return cls(**d)


def _choice(rng, options):
    return options[int(rng.integers(len(options)))]


def _sample_layer(space, rng, n_out, kinds, placements):
    return LayerConfig(
        n_out=n_out,
        m=int(rng.integers(space.m_range[0], space.m_range[1] + 1)),
        kind=_choice(rng, kinds),
        sigma=float(rng.integers(space.sigma_range[0], space.sigma_range[1] + 1)),
        placement=_choice(rng, placements),
        lambda_phi=float(_choice(rng, space.lambdas)),
    )


def sample_config(space, rng, seed=0):
    """Draw one configuration, each hyperparameter independently and uniformly."""
    n_layers = int(_choice(rng, space.n_layers))
    lo, hi = space.width_range[0], space.max_width(n_layers)
    hidden = []
    for _ in range(n_layers - 1):
        width = int(rng.integers(min(lo, hi), hi + 1))
        hidden.append(_sample_layer(space, rng, width, space.hidden_kinds, space.hidden_placements))
    output = _sample_layer(space, rng, 1, space.output_kinds, space.output_placements)
    return HkanConfig(tuple(hidden), output, seed)


@dataclass
class TrialRecord:
    index: int
    config: HkanConfig
    status: str  # "complete", "pruned" or "failed"
    cv_rmse: float = float("nan")
    fold_rmse: list = field(default_factory=list)
    wall_time: float = 0.0
    error: str = ""

    def to_dict(self):
        return {
            "index": self.index,
            "status": self.status,
            "cv_rmse": None if np.isnan(self.cv_rmse) else self.cv_rmse,
            "fold_rmse": list(self.fold_rmse),
            "wall_time": self.wall_time,
            "error": self.error,
            "config": self.config.to_dict(),
        }

    def to_json(self):
        return json.dumps(self.to_dict())


def baseline_rmse(y):
    """RMSE of predicting the training mean everywhere."""
    y = np.asarray(y, dtype=np.float64)
    return float(np.sqrt(np.mean((y - y.mean()) ** 2)))


def run_trial(index, cfg, ds, k, seed, threshold, workers=None, normalize=True):
    t0 = time.perf_counter()
    folds = []
    try:
        for score in iter_fold_rmse(cfg, ds, k, seed, workers, normalize):
            folds.append(score)
            if len(folds) == 1 and score > threshold:
                return TrialRecord(index, cfg, "pruned", score, folds, time.perf_counter() - t0)
    except (HkanError, ValueError, np.linalg.LinAlgError, MemoryError) as exc:
        return TrialRecord(index, cfg, "failed", float("nan"), folds, time.perf_counter() - t0, repr(exc))
    return TrialRecord(index, cfg, "complete", float(np.mean(folds)), folds, time.perf_counter() - t0)


def random_search(space, ds, trials, k=5, seed=0, workers=None, on_trial=None, normalize=True):
    """Evaluate ``trials`` random configurations by k-fold CV and return the best.

    A trial is pruned when its first fold's RMSE exceeds twice the RMSE of the
    mean predictor on ``ds``. Failed trials are logged and skipped.

    Returns
    -------
    best : HkanConfig
    records : list of TrialRecord, in trial order
    """
    if int(trials) < 1:
        raise InvalidInput(f"trials must be >= 1, got {trials}")
    rng = np.random.default_rng(seed)
    threshold = 2.0 * baseline_rmse(ds.y)
    records = []
    for i in range(int(trials)):
        cfg = sample_config(space, rng, seed)
        rec = run_trial(i, cfg, ds, k, seed, threshold, workers, normalize)
        log.info("trial %d: %s cv_rmse=%.6g (%.2fs)", i, rec.status, rec.cv_rmse, rec.wall_time)
        records.append(rec)
        if on_trial is not None:
            on_trial(rec)
    return best_of(records), records


def best_of(records):
    """First record with the lowest CV RMSE; pruned trials only count if nothing completed."""
    for status in ("complete", "pruned"):
        pool = [r for r in records if r.status == status]
        if pool:
            return min(pool, key=lambda r: r.cv_rmse).config
    raise HkanError("every search trial failed")
