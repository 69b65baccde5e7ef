"""Hierarchical Kolmogorov-Arnold networks trained by closed-form least squares."""

from .basis import BafKind, BafParams, Placement, eval_baf, generate_locations
from .blocks import Block, build_design_matrix, eval_block, fit_block
from .datasets import (
    Dataset,
    NormStats,
    apply_normalization,
    fit_normalization,
    gen_tf,
    load_abalone,
    load_csv,
    split,
)
from .errors import DataError, DimensionMismatch, EmptyDataset, HkanError, InvalidInput, ParseError
from .linsolve import SolveReport, solve_least_squares, solve_ridge
from .metrics import r_squared, rmse
from .network import HkanConfig, HkanModel, Layer, LayerConfig, fit_h, fit_hkan, fit_layer, input_importance, predict

__version__ = "0.1.0"
