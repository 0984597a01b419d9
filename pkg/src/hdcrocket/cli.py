"""Command-line entry point: ``hdcrocket <command> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .benchmark import BenchmarkConfig, run_benchmark
from .datasets import (
    SyntheticConfig,
    generate_synthetic,
    load_ucr_tsv,
    save_ucr_tsv,
    select_challenging_subset,
    train_test_split,
)
from .encoding import transform_batch
from .persistence import load_model, save_model
from .pipeline import (
    DEFAULT_SCALES,
    derive_seeds,
    evaluate,
    fit_pipeline,
    oracle_eval,
    predict_labels,
    select_scale,
)
from .plan import fit_plan

log = logging.getLogger("hdcrocket")


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(",") if v.strip())


def _emit(obj) -> None:
    print(json.dumps(obj))


def cmd_synth(args) -> None:
    cfg = SyntheticConfig(length=args.length, a=args.a, noise_std=args.noise_std, seed=args.seed)
    ds = generate_synthetic(cfg)
    if args.challenging:
        plan = fit_plan(ds.series, derive_seeds(args.seed)[0])
        ds = select_challenging_subset(ds, transform_batch(ds.series, plan, None, "ppv"))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    tr, te = train_test_split(ds, args.test_fraction, args.seed)
    train_path = out / f"{ds.name}_TRAIN.tsv"
    test_path = out / f"{ds.name}_TEST.tsv"
    save_ucr_tsv(ds.subset(tr), train_path)
    save_ucr_tsv(ds.subset(te), test_path)
    _emit({"train": str(train_path), "test": str(test_path), "n_train": len(tr), "n_test": len(te)})


def cmd_fit(args) -> None:
    train = load_ucr_tsv(args.train)
    model = fit_pipeline(train, args.scale, args.seed, args.mode)
    save_model(model, args.out)
    _emit({"model": str(args.out), "mode": model.mode, "scale": model.scale, "alpha": model.ridge.alpha})


def cmd_predict(args) -> None:
    model = load_model(args.model)
    data = load_ucr_tsv(args.data)
    pred, _ = predict_labels(model, data.series)
    lines = "\n".join(model.classes[p] for p in pred) + "\n"
    if args.out:
        Path(args.out).write_text(lines, encoding="utf-8")
        _emit({"predictions": str(args.out), "n": int(len(pred))})
    else:
        sys.stdout.write(lines)


def cmd_eval(args) -> None:
    train = load_ucr_tsv(args.train)
    test = load_ucr_tsv(args.test)
    candidates = args.candidates or DEFAULT_SCALES
    if args.oracle:
        best, accs = oracle_eval(train, test, candidates, args.seed)
        _emit({"mode": "oracle", "scale": best, "accuracy": accs[best],
               "accuracy_per_scale": {f"{s:g}": a for s, a in accs.items()},
               "note": "scale chosen on the test set"})
        return
    mode = args.mode
    scale = args.scale
    if args.auto_scale:
        scale = select_scale(train, candidates, args.folds, args.seed).scale
        mode = "hdc"
    model = fit_pipeline(train, scale, args.seed, mode)
    res = evaluate(model, test)
    _emit({"mode": model.mode, "scale": model.scale, "accuracy": res.accuracy,
           "recall": [None if np.isnan(r) else float(r) for r in res.recall],
           "confusion": res.confusion.tolist(), "classes": list(model.classes)})


def cmd_bench(args) -> None:
    cfg = BenchmarkConfig(
        modes=tuple(m.strip() for m in args.modes.split(",") if m.strip()),
        scales=_floats(args.scales),
        seed=args.seed,
        folds=args.folds,
        candidates=args.candidates or DEFAULT_SCALES,
    )
    report = run_benchmark(args.dir, cfg, args.csv, args.json)
    _emit({"rows": len(report.rows), "failures": len(report.failures), "aggregate": report.aggregate()})


def cmd_select_scale(args) -> None:
    train = load_ucr_tsv(args.train)
    sel = select_scale(train, args.candidates or DEFAULT_SCALES, args.folds, args.seed)
    _emit({"scale": sel.scale, "wins": {f"{s:g}": w for s, w in sel.wins.items()}})


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hdcrocket", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="write the synthetic peak dataset as train/test files")
    p.add_argument("--length", type=int, default=500)
    p.add_argument("--a", type=float, default=0.03)
    p.add_argument("--noise-std", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--challenging", action="store_true")
    p.add_argument("--test-fraction", type=float, default=0.2)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("fit", help="fit a pipeline and save it")
    p.add_argument("--train", required=True)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--mode", choices=("hdc", "ppv"), default="hdc")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("predict", help="predict labels with a saved model")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("eval", help="fit on --train and report accuracy on --test")
    p.add_argument("--train", required=True)
    p.add_argument("--test", required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--scale", type=float, default=1.0)
    group.add_argument("--auto-scale", action="store_true")
    group.add_argument("--oracle", action="store_true")
    p.add_argument("--mode", choices=("hdc", "ppv"), default="hdc")
    p.add_argument("--candidates", type=_floats)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("bench", help="benchmark every train/test pair in a directory")
    p.add_argument("--dir", required=True)
    p.add_argument("--modes", default="ppv,hdc")
    p.add_argument("--scales", default="1")
    p.add_argument("--candidates", type=_floats)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv")
    p.add_argument("--json")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("select-scale", help="choose the scale by k-fold cross-validation")
    p.add_argument("--train", required=True)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--candidates", type=_floats)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_select_scale)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        args.func(args)
    except Exception as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        print(f"error: {json.dumps(err)}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
