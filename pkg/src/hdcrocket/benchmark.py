"""Benchmark sweeps over directories of train/test file pairs."""

from __future__ import annotations

import csv
import json
import logging
import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .datasets import TimeSeriesDataset, load_ucr_tsv
from .pipeline import (
    DEFAULT_SCALES,
    PipelineModel,
    evaluate,
    fit_pipeline,
    oracle_eval,
    select_scale,
)
from .ridge import predict

__all__ = [
    "CSV_COLUMNS",
    "BenchmarkConfig",
    "BenchmarkRow",
    "BenchmarkReport",
    "discover_pairs",
    "time_inference",
    "run_benchmark",
]

log = logging.getLogger(__name__)

CSV_COLUMNS = ("dataset", "mode", "scale", "accuracy", "fit_s", "transform_s", "predict_s")
_SUFFIXES = (".tsv", ".txt", ".csv")


@dataclass
class BenchmarkConfig:
    modes: tuple[str, ...] = ("ppv", "hdc")
    scales: tuple[float, ...] = (1.0,)
    seed: int = 0
    folds: int = 10
    candidates: tuple[float, ...] = DEFAULT_SCALES


@dataclass
class BenchmarkRow:
    dataset: str
    mode: str
    scale: float | None
    accuracy: float
    fit_s: float = math.nan
    transform_s: float = math.nan
    predict_s: float = math.nan

    @property
    def variant(self) -> str:
        if self.mode == "hdc":
            return f"hdc_s{self.scale:g}"
        return self.mode


@dataclass
class BenchmarkReport:
    rows: list[BenchmarkRow] = field(default_factory=list)
    failures: list[dict] = field(default_factory=list)

    def aggregate(self) -> dict:
        """Mean, worst and best accuracy per variant, skipping failed rows."""
        groups: dict[str, list[float]] = {}
        for row in self.rows:
            groups.setdefault(row.variant, [])
            if not math.isnan(row.accuracy):
                groups[row.variant].append(row.accuracy)
        out = {}
        for variant, accs in groups.items():
            if accs:
                out[variant] = {
                    "n": len(accs),
                    "mean": float(np.mean(accs)),
                    "worst": float(np.min(accs)),
                    "best": float(np.max(accs)),
                }
            else:
                out[variant] = {"n": 0, "mean": None, "worst": None, "best": None}
        return out

    def write_csv(self, path) -> None:
        with Path(path).open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for row in self.rows:
                writer.writerow([_cell(getattr(row, c)) for c in CSV_COLUMNS])

    def to_json(self) -> dict:
        return {
            "aggregate": self.aggregate(),
            "rows": [{k: _json_value(v) for k, v in asdict(r).items()} for r in self.rows],
            "failures": self.failures,
            "notes": {"oracle": "scale chosen on the test set; upper-bound diagnostic"},
        }

    def write_json(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2), encoding="utf-8")


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return "" if math.isnan(value) else repr(value)
    return value


def _json_value(value):
    if isinstance(value, float) and math.isnan(value):
        return None
    return value


def discover_pairs(directory) -> list[tuple[str, Path, Path]]:
    """Find ``<name>_TRAIN.<ext>`` files with a matching ``_TEST`` file."""
    pairs = []
    for train in sorted(Path(directory).rglob("*_TRAIN*")):
        if train.suffix not in _SUFFIXES:
            continue
        name = train.name[: train.name.index("_TRAIN")]
        test = train.with_name(train.name.replace("_TRAIN", "_TEST"))
        if test.exists():
            pairs.append((name, train, test))
        else:
            log.warning("no test file for %s", train)
    return pairs


def time_inference(model: PipelineModel, X) -> tuple[np.ndarray, float, float]:
    """Predicted labels plus wall-clock transform and predict seconds."""
    t0 = time.perf_counter()
    Y = model.descriptors(X)
    t1 = time.perf_counter()
    labels, _ = predict(model.ridge, model.standardizer, Y)
    t2 = time.perf_counter()
    return labels, t1 - t0, t2 - t1


def _fixed_row(name, train, test, mode, scale, seed) -> BenchmarkRow:
    t0 = time.perf_counter()
    model = fit_pipeline(train, scale, seed, mode)
    fit_s = time.perf_counter() - t0
    model.encoding  # built before the timed inference
    _, transform_s, predict_s = time_inference(model, test.series)
    acc = evaluate(model, test).accuracy
    return BenchmarkRow(name, mode, model.scale, acc, fit_s, transform_s, predict_s)


def _dataset_rows(name, train: TimeSeriesDataset, test: TimeSeriesDataset,
                  cfg: BenchmarkConfig) -> list[BenchmarkRow]:
    rows = []
    for mode in cfg.modes:
        if mode == "ppv":
            rows.append(_fixed_row(name, train, test, "ppv", 0.0, cfg.seed))
        elif mode == "hdc":
            for s in cfg.scales:
                rows.append(_fixed_row(name, train, test, "hdc", float(s), cfg.seed))
        elif mode == "auto":
            t0 = time.perf_counter()
            chosen = select_scale(train, cfg.candidates, cfg.folds, cfg.seed).scale
            select_s = time.perf_counter() - t0
            row = _fixed_row(name, train, test, "hdc", chosen, cfg.seed)
            row.mode = "auto"
            row.fit_s += select_s
            rows.append(row)
        elif mode == "oracle":
            t0 = time.perf_counter()
            best, accs = oracle_eval(train, test, cfg.candidates, cfg.seed)
            rows.append(BenchmarkRow(name, "oracle", best, accs[best], time.perf_counter() - t0))
        else:
            raise ValueError(f"unknown benchmark mode {mode!r}")
    return rows


def _expected_rows(cfg: BenchmarkConfig) -> list[tuple[str, float | None]]:
    out = []
    for mode in cfg.modes:
        if mode == "hdc":
            out.extend(("hdc", float(s)) for s in cfg.scales)
        else:
            out.append((mode, None))
    return out


def run_benchmark(dataset_dir, config: BenchmarkConfig | None = None,
                  csv_path=None, json_path=None) -> BenchmarkReport:
    """Run every requested mode on each dataset pair under ``dataset_dir``.

    A dataset that fails to load or fit contributes rows with NaN accuracy
    and an entry in ``failures``; the sweep continues.
    """
    cfg = config or BenchmarkConfig()
    report = BenchmarkReport()
    for name, train_path, test_path in discover_pairs(dataset_dir):
        log.info("benchmarking %s", name)
        try:
            train = load_ucr_tsv(train_path, name)
            test = load_ucr_tsv(test_path, name)
            report.rows.extend(_dataset_rows(name, train, test, cfg))
        except Exception as exc:  # noqa: BLE001 - recorded per dataset
            log.warning("dataset %s failed: %s", name, exc)
            report.failures.append({"dataset": name, "error": type(exc).__name__, "message": str(exc)})
            for mode, scale in _expected_rows(cfg):
                report.rows.append(BenchmarkRow(name, mode, scale, math.nan))
    if csv_path is not None:
        report.write_csv(csv_path)
    if json_path is not None:
        report.write_json(json_path)
    return report
