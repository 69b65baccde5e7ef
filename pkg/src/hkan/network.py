"""Layer assembly, hierarchical training, prediction and input importance.

A layer maps ``n_in`` inputs to ``n_out`` outputs. Node ``q`` owns one block
per input column, each fitted directly to the target, and an h-function that
combines those blocks by least squares. The node's fitted output becomes a
column of the next layer's input. The last layer has a single node.
"""

import hashlib
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import blocks as _blocks
from .basis import OUTPUT_ONLY_KINDS, OUTPUT_ONLY_PLACEMENTS, BafKind, Placement, generate_locations
from .blocks import Block
from .datasets import NormStats
from .errors import DimensionMismatch, InvalidInput
from .linsolve import solve_ridge

FORMAT_VERSION = 1


@dataclass(frozen=True)
class LayerConfig:
    n_out: int
    m: int = 1
    kind: BafKind = BafKind.SIGMOID
    sigma: float = 1.0
    placement: Placement = Placement.RANDOM
    lambda_phi: float = 0.0
    lambda_h: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", BafKind(self.kind))
        object.__setattr__(self, "placement", Placement(self.placement))
        if int(self.n_out) < 1:
            raise InvalidInput(f"layer width must be >= 1, got {self.n_out}")
        if int(self.m) < 1:
            raise InvalidInput(f"basis functions per block must be >= 1, got {self.m}")
        if not (np.isfinite(self.sigma) and self.sigma > 0):
            raise InvalidInput(f"sigma must be > 0, got {self.sigma}")
        for name in ("lambda_phi", "lambda_h"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v >= 0):
                raise InvalidInput(f"{name} must be finite and >= 0, got {v}")
        object.__setattr__(self, "n_out", int(self.n_out))
        object.__setattr__(self, "m", 1 if self.kind is BafKind.IDENTITY else int(self.m))
        object.__setattr__(self, "sigma", float(self.sigma))
        object.__setattr__(self, "lambda_phi", float(self.lambda_phi))
        object.__setattr__(self, "lambda_h", float(self.lambda_h))

    def to_dict(self):
        d = asdict(self)
        d["kind"] = self.kind.value
        d["placement"] = self.placement.value
        return d

    @classmethod
    def from_dict(cls, d):
        known = {k: d[k] for k in ("n_out", "m", "kind", "sigma", "placement", "lambda_phi", "lambda_h") if k in d}
        unknown = set(d) - set(known)
        if unknown:
            raise InvalidInput(f"unknown layer config fields: {sorted(unknown)}")
        return cls(**known)


@dataclass(frozen=True)
class HkanConfig:
    hidden_layers: tuple = ()
    output_layer: LayerConfig = field(default_factory=lambda: LayerConfig(1, kind=BafKind.IDENTITY))
    seed: int = 0

    def __post_init__(self):
        hidden = tuple(LayerConfig.from_dict(h) if isinstance(h, dict) else h for h in self.hidden_layers)
        out = self.output_layer
        if isinstance(out, dict):
            out = LayerConfig.from_dict({"n_out": 1, **out})
        object.__setattr__(self, "hidden_layers", hidden)
        object.__setattr__(self, "output_layer", out)
        object.__setattr__(self, "seed", int(self.seed))
        if self.seed < 0:
            raise InvalidInput(f"seed must be a non-negative integer, got {self.seed}")
        if out.n_out != 1:
            raise InvalidInput(f"output layer must have exactly one node, got {out.n_out}")
        for i, h in enumerate(hidden):
            if h.kind in OUTPUT_ONLY_KINDS:
                raise InvalidInput(f"hidden layer {i + 1}: kind {h.kind.value!r} is only allowed in the output layer")
            if h.placement in OUTPUT_ONLY_PLACEMENTS:
                raise InvalidInput(
                    f"hidden layer {i + 1}: placement {h.placement.value!r} is only allowed in the output layer"
                )

    @property
    def layers(self):
        return self.hidden_layers + (self.output_layer,)

    @property
    def n_layers(self):
        return len(self.hidden_layers) + 1

    def with_seed(self, seed):
        return HkanConfig(self.hidden_layers, self.output_layer, seed)

    def to_dict(self):
        return {
            "hidden_layers": [h.to_dict() for h in self.hidden_layers],
            "output_layer": self.output_layer.to_dict(),
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d):
        unknown = set(d) - {"hidden_layers", "output_layer", "seed"}
        if unknown:
            raise InvalidInput(f"unknown config fields: {sorted(unknown)}")
        return cls(
            tuple(LayerConfig.from_dict(h) for h in d.get("hidden_layers", [])),
            LayerConfig.from_dict({"n_out": 1, **d.get("output_layer", {"kind": "identity"})}),
            d.get("seed", 0),
        )

    def config_hash(self):
        payload = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(payload).hexdigest()


@dataclass(frozen=True, eq=False)
class Node:
    blocks: tuple
    h_weights: np.ndarray

    def block_responses(self, Z):
        return np.column_stack([b.predict(Z[:, b.input_index]) for b in self.blocks])

    def predict(self, Z):
        return self.block_responses(Z) @ self.h_weights


@dataclass(frozen=True, eq=False)
class Layer:
    config: LayerConfig
    nodes: tuple

    @property
    def n_in(self):
        return len(self.nodes[0].blocks)

    @property
    def n_out(self):
        return len(self.nodes)

    def forward(self, Z):
        Z = np.asarray(Z, dtype=np.float64)
        if Z.ndim != 2 or Z.shape[1] != self.n_in:
            raise DimensionMismatch(f"layer expects {self.n_in} input columns, got shape {Z.shape}")
        return np.column_stack([node.predict(Z) for node in self.nodes])

    def to_dict(self):
        return {
            "config": self.config.to_dict(),
            "nodes": [
                {"blocks": [b.to_dict() for b in node.blocks], "h_weights": [float(w) for w in node.h_weights]}
                for node in self.nodes
            ],
        }

    @classmethod
    def from_dict(cls, d):
        nodes = tuple(
            Node(tuple(Block.from_dict(b) for b in nd["blocks"]), np.asarray(nd["h_weights"], dtype=np.float64))
            for nd in d["nodes"]
        )
        return cls(LayerConfig.from_dict(d["config"]), nodes)


def fit_h(block_responses, y, lam_h=0.0):
    """Least-squares weights combining a node's block outputs into its h-function."""
    return solve_ridge(block_responses, y, lam_h).solution


def _resolve_workers(workers):
    if workers is None:
        env = os.environ.get("HKAN_THREADS", "").strip()
        if not env:
            return os.cpu_count() or 1
        try:
            workers = int(env)
        except ValueError:
            raise InvalidInput(f"HKAN_THREADS must be an integer, got {env!r}") from None
    return max(1, int(workers))


def node_streams(seed, layer_index, n_out):
    """One independent seed sequence per node of a layer."""
    return [np.random.SeedSequence(seed, spawn_key=(layer_index, q)) for q in range(n_out)]


def _input_rng(stream, p):
    return np.random.default_rng(np.random.SeedSequence(stream.entropy, spawn_key=tuple(stream.spawn_key) + (p,)))


def _fit_node(Z_in, y, cfg, stream):
    blocks = []
    for p in range(Z_in.shape[1]):
        column = Z_in[:, p]
        if cfg.kind is BafKind.IDENTITY:
            mu = np.zeros(1)
        else:
            mu = generate_locations(cfg.placement, cfg.m, column, _input_rng(stream, p))
        blocks.append(_blocks._fit(p, cfg.kind, mu, cfg.sigma, column, y, cfg.lambda_phi))
    node = Node(tuple(blocks), np.empty(0))
    Phi = node.block_responses(Z_in)
    node = Node(node.blocks, fit_h(Phi, y, cfg.lambda_h))
    return node, Phi @ node.h_weights


def fit_layer(Z_in, y, cfg, streams, workers=None):
    """Fit every node of one layer.

    Parameters
    ----------
    Z_in : ndarray, shape (N, n_in)
        Layer inputs on the training set.
    y : ndarray, shape (N,)
        Training target; every block and h-function is fitted to it.
    cfg : LayerConfig
    streams : sequence of numpy.random.SeedSequence, length ``cfg.n_out``
        Node ``q`` draws its basis locations from ``streams[q]``.
    workers : int, optional
        Thread count; results do not depend on it.

    Returns
    -------
    layer : Layer
    Z_out : ndarray, shape (N, n_out)
        Fitted node outputs, i.e. the next layer's training inputs.
    """
    Z_in = np.asarray(Z_in, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64).ravel()
    if Z_in.ndim != 2 or Z_in.shape[0] != y.size:
        raise DimensionMismatch(f"inputs of shape {Z_in.shape} do not match {y.size} targets")
    if Z_in.shape[1] < 1:
        raise InvalidInput("layer needs at least one input column")
    if not (np.all(np.isfinite(Z_in)) and np.all(np.isfinite(y))):
        raise InvalidInput("layer inputs and target must be finite")
    if len(streams) != cfg.n_out:
        raise InvalidInput(f"need {cfg.n_out} node streams, got {len(streams)}")

    workers = min(_resolve_workers(workers), cfg.n_out)
    if workers == 1:
        results = [_fit_node(Z_in, y, cfg, s) for s in streams]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda s: _fit_node(Z_in, y, cfg, s), streams))
    nodes = tuple(node for node, _ in results)
    Z_out = np.column_stack([out for _, out in results])
    return Layer(cfg, nodes), Z_out


@dataclass(frozen=True, eq=False)
class HkanModel:
    layers: tuple
    input_dim: int
    normalization: NormStats
    config: HkanConfig

    @property
    def seed(self):
        return self.config.seed

    def predict_normalized(self, Z):
        for layer in self.layers:
            Z = layer.forward(Z)
        return Z[:, 0]

    def predict(self, X):
        """Predictions in original target units for raw (unscaled) inputs."""
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X.reshape(1, -1)
        if X.ndim != 2 or X.shape[1] != self.input_dim:
            raise DimensionMismatch(f"model expects {self.input_dim} input columns, got shape {X.shape}")
        return self.normalization.inverse_y(self.predict_normalized(self.normalization.transform_X(X)))

    def to_dict(self):
        return {
            "format_version": FORMAT_VERSION,
            "seed": self.seed,
            "config_hash": self.config.config_hash(),
            "input_dim": self.input_dim,
            "normalization": self.normalization.to_dict(),
            "config": self.config.to_dict(),
            "layers": [layer.to_dict() for layer in self.layers],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=1, allow_nan=False) + "\n"

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())

    @classmethod
    def from_dict(cls, d):
        version = d.get("format_version")
        if version != FORMAT_VERSION:
            raise InvalidInput(f"unsupported model format_version {version!r}")
        config = HkanConfig.from_dict(d["config"]) if "config" in d else None
        layers = tuple(Layer.from_dict(ld) for ld in d["layers"])
        if config is None:
            config = HkanConfig(tuple(l.config for l in layers[:-1]), layers[-1].config, d.get("seed", 0))
        model = cls(layers, int(d["input_dim"]), NormStats.from_dict(d["normalization"]), config)
        _check_widths(model)
        return model

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def _check_widths(model):
    width = model.input_dim
    for i, layer in enumerate(model.layers):
        for node in layer.nodes:
            if len(node.blocks) != width or node.h_weights.size != width:
                raise DimensionMismatch(f"layer {i + 1}: nodes must have {width} blocks and weights")
        width = layer.n_out
    if width != 1:
        raise DimensionMismatch(f"last layer must have one output, got {width}")


def fit_hkan(X, y, cfg, stats=None, workers=None, normalize=True):
    """Train an HKAN layer by layer.

    Parameters
    ----------
    X : array_like, shape (N, n)
        Raw training inputs.
    y : array_like, shape (N,)
        Raw training target.
    cfg : HkanConfig
    stats : NormStats, optional
        Min-max statistics to scale with; fitted on ``(X, y)`` when omitted.
    normalize : bool
        With ``False`` (and no ``stats``) the data is used as given.
    workers : int, optional
        Threads used within a layer (default ``HKAN_THREADS`` or CPU count).

    Returns
    -------
    HkanModel
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64).ravel()
    if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
        raise InvalidInput(f"X must be a non-empty 2-D array, got shape {X.shape}")
    if X.shape[0] != y.size:
        raise DimensionMismatch(f"X has {X.shape[0]} rows but y has {y.size}")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise InvalidInput("training data must be finite")
    if stats is None and not normalize:
        stats = NormStats.identity(X.shape[1])
    elif stats is None:
        stats = NormStats(X.min(axis=0), X.max(axis=0), y.min(), y.max())
    Z = stats.transform_X(X)
    t = stats.transform_y(y)

    layers = []
    for index, layer_cfg in enumerate(cfg.layers):
        layer, Z = fit_layer(Z, t, layer_cfg, node_streams(cfg.seed, index, layer_cfg.n_out), workers)
        layers.append(layer)
    return HkanModel(tuple(layers), X.shape[1], stats, cfg)


def predict(model, X):
    return model.predict(X)


def input_importance(model):
    """Mean training R^2 of the first-layer blocks attached to each input."""
    first = model.layers[0]
    r2 = np.array([[b.train_r2 for b in node.blocks] for node in first.nodes])
    return r2.mean(axis=0)
