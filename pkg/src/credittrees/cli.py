"""Command-line front end: train, evaluate, compare, predict.

Exit codes: 0 success, 2 I/O error, 3 data/schema error, 4 usage error.
Text tables mirror the published layout: accuracy to 1 decimal, MAE/RMSE to
4 decimals, build time to 2 decimals; confusion matrices print actual rows
with an "Actual (Total)" column and a "Predicted (Total)" row.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import ladtree, reptree
from .dataset import DataFormatError, load_german_credit, parse_arff, parse_csv
from .evaluation import (CrossValidation, LadTreeSpec, RepTreeSpec, TrainingSet,
                         compare, evaluate)
from .metrics import Prediction
from .reptree import GrowParams

EXIT_OK = 0
EXIT_IO = 2
EXIT_DATA = 3
EXIT_USAGE = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    parser = _Parser(prog="credittrees",
                     description="REP Tree / LAD Tree credit-risk classifiers")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, classifier=True):
        p.add_argument("--data", default=None,
                       help="ARFF or CSV dataset path (default: bundled German credit)")
        p.add_argument("--seed", type=int, default=1)
        p.add_argument("--format", choices=["text", "csv", "json"], default="text")
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        if classifier:
            p.add_argument("--classifier", choices=["reptree", "ladtree"],
                           default="reptree")
            p.add_argument("--iterations", type=int, default=10,
                           help="ladtree boosting iterations")
            p.add_argument("--min-leaf", type=float, default=2.0,
                           help="reptree minimum leaf weight")
            p.add_argument("--prune-folds", type=int, default=3)
            p.add_argument("--no-prune", action="store_true")
            p.add_argument("--max-depth", type=int, default=None)

    p_train = sub.add_parser("train", help="train a model and save it")
    add_common(p_train)

    p_eval = sub.add_parser("evaluate", help="evaluate under a test mode")
    add_common(p_eval)
    p_eval.add_argument("--mode", choices=["training", "cv"], default="training")
    p_eval.add_argument("--folds", type=int, default=10)

    p_cmp = sub.add_parser("compare", help="compare reptree and ladtree")
    add_common(p_cmp)
    p_cmp.add_argument("--modes", nargs="+", default=None,
                       help="modes: 'training' or 'cvK' (default: training cv5 cv10 cv15 cv20)")

    p_pred = sub.add_parser("predict", help="score a dataset with a saved model")
    p_pred.add_argument("--model", required=True)
    add_common(p_pred, classifier=False)
    return parser


def _load_dataset(args):
    if args.data is None:
        return load_german_credit()
    try:
        with open(args.data) as fh:
            text = fh.read()
    except OSError as exc:
        raise IOErrorWithPath(args.data, exc)
    if args.data.lower().endswith(".csv"):
        from .dataset import german_credit_schema
        return parse_csv(text, german_credit_schema(), has_header=True)
    return parse_arff(text)


class IOErrorWithPath(Exception):
    def __init__(self, path, cause):
        super().__init__("cannot read %s: %s" % (path, cause))


def _make_spec(args):
    if args.classifier == "reptree":
        params = GrowParams(min_instances=args.min_leaf, max_depth=args.max_depth,
                            prune_folds=args.prune_folds,
                            do_prune=not args.no_prune, seed=args.seed)
        return RepTreeSpec(params)
    return LadTreeSpec(iterations=args.iterations, seed=args.seed)


def _parse_modes(tokens, seed):
    if tokens is None:
        return [TrainingSet(), CrossValidation(5, seed), CrossValidation(10, seed),
                CrossValidation(15, seed), CrossValidation(20, seed)]
    modes = []
    for t in tokens:
        if t == "training":
            modes.append(TrainingSet())
        elif t.startswith("cv") and t[2:].isdigit():
            modes.append(CrossValidation(int(t[2:]), seed))
        else:
            raise UsageError("unknown mode %r (use 'training' or 'cvK')" % t)
    return modes


def _emit(text, out_path):
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w") as fh:
            fh.write(text)


def _fmt_cell(v):
    return ("%g" % v) if v == int(v) else ("%.4f" % v)


def render_confusion_text(cm):
    header = list(cm.classes) + ["Actual (Total)"]
    rows = []
    for i, name in enumerate(cm.classes):
        rows.append([name] + [_fmt_cell(v) for v in cm.counts[i]]
                    + [_fmt_cell(cm.actual_totals()[i])])
    rows.append(["Predicted (Total)"] + [_fmt_cell(v) for v in cm.predicted_totals()]
                + [_fmt_cell(cm.total())])
    widths = [max(len(r[j]) for r in rows + [[""] + header]) for j in range(len(header) + 1)]
    lines = ["  ".join(("" if j == 0 else header[j - 1]).rjust(widths[j])
                       for j in range(len(widths)))]
    for r in rows:
        lines.append("  ".join(r[j].rjust(widths[j]) for j in range(len(r))))
    return "\n".join(lines)


SUMMARY_COLUMNS = ["Test Mode", "Correctly Classified Instances",
                   "Incorrectly Classified Instances", "Accuracy",
                   "Mean Absolute Error", "Root Mean Squared Error",
                   "Time Taken to Build Model (Sec)"]


def _summary_row(mode, s):
    return [mode.label(), _fmt_cell(s.correct), _fmt_cell(s.incorrect),
            "%.1f%%" % s.accuracy, "%.4f" % s.mae, "%.4f" % s.rmse,
            "%.2f" % s.build_time]


def render_summary_table(rows):
    table = [SUMMARY_COLUMNS] + rows
    widths = [max(len(r[j]) for r in table) for j in range(len(SUMMARY_COLUMNS))]
    return "\n".join("  ".join(r[j].ljust(widths[j]) for j in range(len(r)))
                     for r in table)


def _summary_dict(mode, s, classes):
    return {
        "mode": mode.label(),
        "correct": s.correct,
        "incorrect": s.incorrect,
        "accuracy": s.accuracy,
        "mae": s.mae,
        "rmse": s.rmse,
        "build_time_sec": s.build_time,
        "confusion": {"classes": list(classes),
                      "counts": s.confusion.counts.tolist()},
    }


def _summary_csv(rows, seed):
    header = ["seed", "mode", "correct", "incorrect", "accuracy", "mae", "rmse",
              "build_time_sec"]
    lines = [",".join(header)]
    for mode, s in rows:
        lines.append(",".join([str(seed), mode.label(), repr(s.correct),
                               repr(s.incorrect), repr(s.accuracy), repr(s.mae),
                               repr(s.rmse), repr(s.build_time)]))
    return "\n".join(lines) + "\n"


def cmd_train(args):
    dataset = _load_dataset(args)
    spec = _make_spec(args)
    import time
    start = time.perf_counter()
    model = spec.train(dataset)
    build_time = time.perf_counter() - start
    out_path = args.out or (args.classifier + ".model")
    try:
        with open(out_path, "w") as fh:
            fh.write(model.to_text())
    except OSError as exc:
        raise IOErrorWithPath(out_path, exc)
    print("model written to %s (build time %.2f s)" % (out_path, build_time))
    return EXIT_OK


def cmd_evaluate(args):
    dataset = _load_dataset(args)
    spec = _make_spec(args)
    if args.mode == "cv":
        mode = CrossValidation(args.folds, args.seed)
    else:
        mode = TrainingSet()
    summary = evaluate(spec, dataset, mode)
    classes = dataset.schema.class_names
    if args.format == "json":
        doc = _summary_dict(mode, summary, classes)
        doc.update(classifier=spec.name, seed=args.seed)
        _emit(json.dumps(doc, indent=2) + "\n", args.out)
    elif args.format == "csv":
        _emit(_summary_csv([(mode, summary)], args.seed), args.out)
    else:
        lines = ["classifier=%s mode=%s seed=%d" % (spec.name, mode.label(), args.seed),
                 render_summary_table([_summary_row(mode, summary)]),
                 "",
                 render_confusion_text(summary.confusion)]
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_compare(args):
    dataset = _load_dataset(args)
    modes = _parse_modes(args.modes, args.seed)
    specs = [RepTreeSpec(GrowParams(min_instances=args.min_leaf,
                                    max_depth=args.max_depth,
                                    prune_folds=args.prune_folds,
                                    do_prune=not args.no_prune, seed=args.seed)),
             LadTreeSpec(iterations=args.iterations, seed=args.seed)]
    reports, order = compare(specs, dataset, modes)
    winner = reports[order[0]].classifier.name
    if args.format == "json":
        doc = {"seed": args.seed,
               "ranking": [reports[i].classifier.name for i in order],
               "classifiers": [
                   {"classifier": r.classifier.name,
                    "mean_cv_accuracy": r.mean_cv_accuracy,
                    "summaries": [_summary_dict(m, s, dataset.schema.class_names)
                                  for m, s in r.summaries]}
                   for r in reports]}
        _emit(json.dumps(doc, indent=2) + "\n", args.out)
    elif args.format == "csv":
        streams = []
        for r in reports:
            streams.append("classifier,%s\n%s" % (r.classifier.name,
                                                  _summary_csv(r.summaries, args.seed)))
        _emit("\n".join(streams), args.out)
    else:
        blocks = ["seed=%d" % args.seed]
        for r in reports:
            blocks.append("== %s ==" % r.classifier.name)
            blocks.append(render_summary_table(
                [_summary_row(m, s) for m, s in r.summaries]))
            if r.mean_cv_accuracy is not None:
                blocks.append("mean CV accuracy: %.1f%%" % r.mean_cv_accuracy)
            blocks.append("")
        blocks.append("Ranking: " + " > ".join(reports[i].classifier.name
                                               for i in order))
        blocks.append("Winner: %s" % winner)
        _emit("\n".join(blocks) + "\n", args.out)
    return EXIT_OK


def load_model(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise IOErrorWithPath(path, exc)
    if text.startswith(reptree.MODEL_FORMAT):
        return reptree.RepTreeModel.from_text(text)
    if text.startswith(ladtree.MODEL_FORMAT):
        return ladtree.LadTreeModel.from_text(text)
    raise DataFormatError("unrecognized model file %s" % path)


def _check_schema(model_schema, data_schema):
    pairs = list(zip(model_schema.attributes, data_schema.attributes))
    for a, b in pairs:
        if a != b:
            raise DataFormatError("incompatible attribute %r" % a.name)
    if len(model_schema.attributes) != len(data_schema.attributes):
        raise DataFormatError("attribute count mismatch: model %d, data %d"
                              % (len(model_schema.attributes),
                                 len(data_schema.attributes)))
    if model_schema.class_attribute != data_schema.class_attribute:
        raise DataFormatError("incompatible attribute %r"
                              % model_schema.class_attribute.name)


def cmd_predict(args):
    model = load_model(args.model)
    dataset = _load_dataset(args)
    _check_schema(model.schema, dataset.schema)
    x, _, _ = dataset.matrix
    dist = model.predict_matrix(x)
    classes = model.schema.class_names
    records = []
    for i in range(len(dataset)):
        d = dist[i]
        records.append({"index": i, "predicted": classes[int(d.argmax())],
                        "probabilities": {c: float(p) for c, p in zip(classes, d)}})
    if args.format == "json":
        _emit(json.dumps(records, indent=2) + "\n", args.out)
    elif args.format == "csv":
        header = ["index", "predicted"] + ["p_%s" % c for c in classes]
        lines = [",".join(header)]
        for r in records:
            lines.append(",".join([str(r["index"]), r["predicted"]]
                                  + [repr(r["probabilities"][c]) for c in classes]))
        _emit("\n".join(lines) + "\n", args.out)
    else:
        lines = []
        for r in records:
            probs = " ".join("%s=%.4f" % (c, r["probabilities"][c]) for c in classes)
            lines.append("%d: %s (%s)" % (r["index"], r["predicted"], probs))
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


COMMANDS = {"train": cmd_train, "evaluate": cmd_evaluate,
            "compare": cmd_compare, "predict": cmd_predict}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print("usage error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        if isinstance(exc, DataFormatError):
            print("data error: %s" % exc, file=sys.stderr)
            return EXIT_DATA
        print("usage error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except IOErrorWithPath as exc:
        print("io error: %s" % exc, file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
