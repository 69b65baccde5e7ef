"""Command-line interface: ``hkan {synth,train,predict,eval,importance,search}``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.
"""

import argparse
import csv
import json
import sys
import time
from pathlib import Path

import numpy as np

from .datasets import gen_tf, load_csv, read_table, save_csv
from .errors import DataError, DimensionMismatch, HkanError, InvalidInput
from .evaluation import repeated_runs
from .metrics import rmse
from .network import HkanConfig, HkanModel, fit_hkan, input_importance
from .search import SearchSpace, random_search

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read_json(path, what):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise UsageError(f"{what} file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what} file {path} is not valid JSON: {exc}") from None


def load_config(path):
    try:
        return HkanConfig.from_dict(_read_json(path, "config"))
    except (InvalidInput, KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(f"invalid config {path}: {exc}") from None


def _load_model(path):
    try:
        return HkanModel.from_dict(_read_json(path, "model"))
    except (InvalidInput, KeyError, TypeError) as exc:
        raise DataError(f"invalid model file {path}: {exc}") from None


def _emit(obj):
    print(json.dumps(obj, indent=1))


def cmd_synth(args):
    train, test = gen_tf(args.fn, args.train, args.test, args.seed)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    save_csv(train, out / "train.csv")
    save_csv(test, out / "test.csv")
    _emit({"function": args.fn, "train": str(out / "train.csv"), "test": str(out / "test.csv"),
           "n_train": train.n_samples, "n_test": test.n_samples})


def cmd_train(args):
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    ds = load_csv(args.train, args.target)
    t0 = time.perf_counter()
    model = fit_hkan(ds.X, ds.y, cfg, normalize=not args.no_normalize)
    elapsed = time.perf_counter() - t0
    model.save(args.model_out)
    report = {
        "train_rmse": rmse(ds.y, model.predict(ds.X)),
        "n_samples": ds.n_samples,
        "input_dim": ds.n_inputs,
        "layer_widths": [layer.n_out for layer in model.layers],
        "wall_time": elapsed,
        "seed": cfg.seed,
        "model": str(args.model_out),
    }
    if args.report:
        Path(args.report).write_text(json.dumps(report, indent=1) + "\n", encoding="utf-8")
    _emit(report)


def _feature_matrix(path, target):
    """All columns of ``path`` except ``target`` (if given) as a float matrix."""
    header, values = read_table(path)
    if target is None:
        return values
    if target not in header:
        raise DataError(f"{path}: target column {target!r} not in header {header}")
    return np.delete(values, header.index(target), axis=1)


def cmd_predict(args):
    model = _load_model(args.model)
    X = _feature_matrix(args.data, args.target)
    if X.shape[1] != model.input_dim:
        raise DimensionMismatch(f"model expects {model.input_dim} input columns, {args.data} has {X.shape[1]}")
    y_hat = model.predict(X)
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["prediction"])
        w.writerows([repr(float(v))] for v in y_hat)


def cmd_eval(args):
    if args.model:
        if not args.data:
            raise UsageError("eval --model needs --data")
        model = _load_model(args.model)
        ds = load_csv(args.data, args.target)
        if ds.n_inputs != model.input_dim:
            raise DimensionMismatch(f"model expects {model.input_dim} input columns, {args.data} has {ds.n_inputs}")
        _emit({"rmse": rmse(ds.y, model.predict(ds.X)), "n_samples": ds.n_samples})
        return
    if not (args.config and args.train and args.test):
        raise UsageError("eval needs either --model and --data, or --config, --train and --test")
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    train = load_csv(args.train, args.target)
    test = load_csv(args.test, args.target)
    if train.n_inputs != test.n_inputs:
        raise DimensionMismatch(f"train has {train.n_inputs} inputs but test has {test.n_inputs}")
    _emit(repeated_runs(cfg, train, test, args.runs, normalize=not args.no_normalize).to_dict())


def cmd_importance(args):
    model = _load_model(args.model)
    values = input_importance(model)
    _emit({"importance": [{"index": i, "value": float(v)} for i, v in enumerate(values)]})


def cmd_search(args):
    space = SearchSpace()
    if args.space:
        try:
            space = SearchSpace.from_dict(_read_json(args.space, "search space"))
        except (InvalidInput, TypeError, ValueError) as exc:
            if isinstance(exc, UsageError):
                raise
            raise UsageError(f"invalid search space {args.space}: {exc}") from None
    ds = load_csv(args.train, args.target)
    log_path = Path(args.log) if args.log else Path(str(args.out) + ".trials.jsonl")
    with open(log_path, "w", encoding="utf-8") as fh:
        def write(rec):
            fh.write(rec.to_json() + "\n")
            fh.flush()

        best, records = random_search(space, ds, args.trials, args.folds, args.seed, on_trial=write,
                                      normalize=not args.no_normalize)
    Path(args.out).write_text(json.dumps(best.to_dict(), indent=1) + "\n", encoding="utf-8")
    best_rec = next(r for r in records if r.config is best)
    _emit({"best_cv_rmse": best_rec.cv_rmse, "best_trial": best_rec.index, "config": str(args.out),
           "log": str(log_path), "trials": len(records),
           "pruned": sum(r.status == "pruned" for r in records),
           "failed": sum(r.status == "failed" for r in records)})


def build_parser():
    p = _Parser(prog="hkan", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("synth", help="generate a synthetic target-function dataset")
    s.add_argument("--fn", required=True, help="TF1, TF2, TF3, TF4, TF5 or TF5-5")
    s.add_argument("--train", type=int, default=None)
    s.add_argument("--test", type=int, default=None)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out-dir", default=".")
    s.set_defaults(func=cmd_synth)

    s = sub.add_parser("train", help="fit a model and write it as JSON")
    s.add_argument("--train", required=True)
    s.add_argument("--config", required=True)
    s.add_argument("--seed", type=int, default=None, help="overrides the seed in the config")
    s.add_argument("--model-out", required=True)
    s.add_argument("--report", default=None, help="also write the training report here")
    s.add_argument("--target", default=None, help="target column (default: last)")
    s.add_argument("--no-normalize", action="store_true", help="skip min-max scaling of inputs and target")
    s.set_defaults(func=cmd_train)

    s = sub.add_parser("predict", help="write predictions for a feature file")
    s.add_argument("--model", required=True)
    s.add_argument("--data", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--target", default=None, help="column to drop before predicting")
    s.set_defaults(func=cmd_predict)

    s = sub.add_parser("eval", help="score a model, or summarise repeated training runs")
    s.add_argument("--model")
    s.add_argument("--data")
    s.add_argument("--config")
    s.add_argument("--train")
    s.add_argument("--test")
    s.add_argument("--runs", type=int, default=1)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--target", default=None)
    s.add_argument("--no-normalize", action="store_true", help="skip min-max scaling of inputs and target")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("importance", help="per-input importance of a trained model")
    s.add_argument("--model", required=True)
    s.set_defaults(func=cmd_importance)

    s = sub.add_parser("search", help="random hyperparameter search")
    s.add_argument("--train", required=True)
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--folds", type=int, default=5)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--space", default=None)
    s.add_argument("--out", required=True)
    s.add_argument("--log", default=None, help="trial log path (default: OUT.trials.jsonl)")
    s.add_argument("--target", default=None)
    s.add_argument("--no-normalize", action="store_true", help="skip min-max scaling of inputs and target")
    s.set_defaults(func=cmd_search)
    return p


def run_cli(argv=None):
    try:
        args = build_parser().parse_args(argv)
        args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except DimensionMismatch as exc:
        print(f"DimensionMismatch: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (HkanError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


def main():
    sys.exit(run_cli())
