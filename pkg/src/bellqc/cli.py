"""Command-line harness: ``train``, ``evaluate`` and ``inspect``.

Exit codes: 0 success, 1 usage or configuration error, 2 data error,
3 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import data, training
from .classifier import FeatureScaling, ModelParams, accuracy, load_model, model_document
from .errors import InvalidInputError, NumericError, ParseError

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3

CURVE_HEADER = ["epoch", "raw_cost", "normalized_cost", "train_accuracy", "test_accuracy"]
INSPECT_HEADER = ["pair_index", "bell", "abs_bell", "cost"]

DEFAULTS = {
    "data": None,
    "classes": "0,1",
    "train_per_class": 40,
    "test_per_class": 10,
    "epochs": 50,
    "seed": 0,
    "lr": training.TrainConfig.learning_rate,
    "fd_step": training.TrainConfig.fd_step,
    "mode": "batch",
    "cost": "bell",
    "normalize_features": False,
    "reshuffle_pairs": False,
    "out": None,
    "model": None,
}


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p):
    # Defaults are None so config-file values can fill in before DEFAULTS.
    p.add_argument("--config", help="JSON file of option values; flags override it")
    p.add_argument("--data", help="dataset CSV (default: bundled Iris)")
    p.add_argument("--classes", help="class pair A,B; A is labelled +, B is labelled - (default 0,1)")
    p.add_argument("--train-per-class", type=int)
    p.add_argument("--test-per-class", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--normalize-features", action="store_const", const=True, default=None,
                   help="min-max scale features using training-set ranges")


def build_parser():
    parser = _Parser(prog="bellqc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    tr = sub.add_parser("train", help="train a classifier and write curve.csv, metrics.json, model.json")
    _common(tr)
    tr.add_argument("--epochs", type=int)
    tr.add_argument("--lr", type=float, help="Adam learning rate")
    tr.add_argument("--fd-step", type=float, help="central finite-difference step")
    tr.add_argument("--mode", choices=["batch", "stochastic"])
    tr.add_argument("--cost", choices=["bell", "baseline"])
    tr.add_argument("--reshuffle-pairs", action="store_const", const=True, default=None)
    tr.add_argument("--out", help="output directory")

    for name, text in (("evaluate", "print train/test accuracy of a saved model as JSON"),
                       ("inspect", "print per-pair Bell expectations and costs as CSV")):
        sp = sub.add_parser(name, help=text)
        _common(sp)
        sp.add_argument("--model", help="model.json written by train")
    return parser


def resolve_options(args):
    """Merge defaults < config file < command-line flags."""
    opts = dict(DEFAULTS)
    if args.config:
        try:
            doc = json.loads(Path(args.config).read_text())
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(doc, dict):
            raise UsageError("config file must hold a JSON object")
        for key, value in doc.items():
            key = key.replace("-", "_")
            if key not in opts:
                raise UsageError(f"unknown config key {key!r}")
            opts[key] = value
    for key, value in vars(args).items():
        if key in opts and value is not None:
            opts[key] = value
    if isinstance(opts["classes"], str):
        try:
            opts["classes"] = [int(c) for c in opts["classes"].split(",")]
        except ValueError as exc:
            raise UsageError(f"--classes must be two integers A,B, got {opts['classes']!r}") from exc
    opts["classes"] = [int(c) for c in opts["classes"]]
    if len(opts["classes"]) != 2:
        raise UsageError("--classes must name exactly two classes")
    return opts


def _train_config(opts):
    try:
        return training.TrainConfig(
            epochs=opts["epochs"],
            seed=opts["seed"],
            learning_rate=opts["lr"],
            fd_step=opts["fd_step"],
            mode=opts["mode"],
            cost=opts["cost"],
            reshuffle_pairs=bool(opts["reshuffle_pairs"]),
        )
    except (InvalidInputError, ValueError) as exc:
        raise UsageError(str(exc)) from exc


def _prepare(opts, scaling=None, fit_scaling=False):
    """Load, select and split; returns ``(train, test, scaling)`` with scaling applied."""
    path = opts["data"] or data.iris_path()
    try:
        ds = data.load_csv(path)
        ds = data.select_binary(ds, *opts["classes"])
        spec = data.SplitSpec(opts["train_per_class"], opts["test_per_class"], opts["seed"])
        train_ds, test_ds = data.split(ds, spec)
    except (ParseError, InvalidInputError) as exc:
        raise DataError(str(exc)) from exc
    if fit_scaling:
        scaling = FeatureScaling.fit(train_ds.features())
    if scaling is not None:
        train_ds = train_ds.with_features(scaling.apply(train_ds.features()))
        if test_ds is not None:
            test_ds = test_ds.with_features(scaling.apply(test_ds.features()))
    return train_ds, test_ds, scaling


def _load_for_data(opts):
    if not opts["model"]:
        raise UsageError("--model is required")
    try:
        params, classes, scaling = load_model(opts["model"])
    except InvalidInputError as exc:
        raise DataError(str(exc)) from exc
    if opts["classes"] != list(classes):
        raise UsageError(f"model was trained on classes {list(classes)}, got --classes {opts['classes']}")
    train_ds, test_ds, _ = _prepare(opts, scaling)
    if train_ds.feature_dim != params.dim:
        raise DataError(
            f"model expects {params.dim} features, data has {train_ds.feature_dim}"
        )
    return params, train_ds, test_ds


def _fmt(value):
    return "" if value is None else repr(float(value))


def _dump_json(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def cmd_train(opts):
    config = _train_config(opts)
    if not opts["out"]:
        raise UsageError("--out is required")
    train_ds, test_ds, scaling = _prepare(opts, fit_scaling=bool(opts["normalize_features"]))
    t_plus, t_minus = train_ds.by_label()
    eval_sets = (train_ds.labelled(), test_ds.labelled() if test_ds is not None else None)
    params, records = training.train(config, t_plus, t_minus, eval_sets)

    pairs = training.training_pairs(t_plus, t_minus, config.seed)
    Xp, Xm = training.stack_pairs(pairs)
    final = training.COST_FUNCTIONS[config.cost](Xp, Xm, params)
    scale = training.COST_SCALE[config.cost]
    last = records[-1]

    curve = io.StringIO()
    writer = csv.writer(curve, lineterminator="\n")
    writer.writerow(CURVE_HEADER)
    for r in records:
        writer.writerow([r.epoch, _fmt(r.raw_cost), _fmt(r.normalized_cost),
                         _fmt(r.train_accuracy), _fmt(r.test_accuracy)])

    # Output location is left out so runs written to different directories compare equal.
    effective = {k: opts[k] for k in DEFAULTS if k not in ("model", "out")}
    effective["data"] = str(opts["data"] or data.iris_path().name)
    metrics = {
        "train_accuracy": last.train_accuracy,
        "test_accuracy": last.test_accuracy,
        "initial_raw_cost": records[0].raw_cost,
        "last_epoch_raw_cost": last.raw_cost,
        "last_epoch_normalized_cost": last.normalized_cost,
        "final_raw_cost": float(np.mean(final)),
        "final_normalized_cost": float(np.mean(final)) / scale,
        "epochs": config.epochs,
        "seed": config.seed,
        "config": effective,
    }

    out = Path(opts["out"])
    out.mkdir(parents=True, exist_ok=True)
    (out / "curve.csv").write_text(curve.getvalue())
    (out / "metrics.json").write_text(_dump_json(metrics))
    (out / "model.json").write_text(_dump_json(model_document(params, opts["classes"], scaling)))
    print(_dump_json({k: metrics[k] for k in ("train_accuracy", "test_accuracy", "final_normalized_cost")}), end="")
    return EXIT_OK


def cmd_evaluate(opts):
    params, train_ds, test_ds = _load_for_data(opts)
    result = {
        "train_accuracy": accuracy(train_ds.labelled(), params),
        "test_accuracy": accuracy(test_ds.labelled(), params) if test_ds is not None else None,
    }
    print(_dump_json(result), end="")
    return EXIT_OK


def cmd_inspect(opts):
    params, train_ds, _ = _load_for_data(opts)
    t_plus, t_minus = train_ds.by_label()
    pairs = training.training_pairs(t_plus, t_minus, opts["seed"])
    Xp, Xm = training.stack_pairs(pairs)
    bell = training.pair_bell_values(Xp, Xm, params)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(INSPECT_HEADER)
    for i, b in enumerate(bell):
        cost = max(training.TSIRELSON - abs(b), 0.0)
        writer.writerow([i, repr(float(b)), repr(float(abs(b))), repr(float(cost))])
    return EXIT_OK


COMMANDS = {"train": cmd_train, "evaluate": cmd_evaluate, "inspect": cmd_inspect}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        opts = resolve_options(args)
        return COMMANDS[args.command](opts)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
