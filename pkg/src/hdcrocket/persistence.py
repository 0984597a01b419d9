"""Versioned single-file model container.

Layout: 8-byte magic, little-endian uint64 manifest length, UTF-8 JSON
manifest, then raw little-endian float64 arrays back to back. The
manifest records each array's name, shape and byte offset.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .encoding import PhaseVector
from .errors import CorruptFile, VersionMismatch
from .pipeline import PipelineModel
from .plan import N_FEATURES, DilationSchedule, TransformPlan
from .ridge import RidgeModel, Standardizer

__all__ = ["FORMAT_VERSION", "MAGIC", "save_model", "load_model"]

MAGIC = b"HDCRKT\x00\x01"
FORMAT_VERSION = 1
_F8 = np.dtype("<f8")


def _arrays(model: PipelineModel) -> dict[str, np.ndarray]:
    return {
        "biases": model.plan.biases,
        "phases": model.phases.theta,
        "mean": model.standardizer.mean,
        "scale": model.standardizer.scale,
        "weights": model.ridge.weights,
        "intercepts": model.ridge.intercepts,
        "alphas": model.ridge.alphas,
    }


def save_model(model: PipelineModel, path) -> None:
    arrays = _arrays(model)
    entries = []
    offset = 0
    for name, arr in arrays.items():
        nbytes = arr.size * _F8.itemsize
        entries.append({"name": name, "shape": list(arr.shape), "offset": offset})
        offset += nbytes
    manifest = {
        "format_version": FORMAT_VERSION,
        "mode": model.mode,
        "scale": model.scale,
        "seed": model.seed,
        "plan_seed": model.plan.seed,
        "phase_seed": model.phases.seed,
        "input_length": model.plan.input_length,
        "n_features": N_FEATURES,
        "dim": model.phases.dim,
        "dilations": model.plan.schedule.dilations.tolist(),
        "features_per_dilation": model.plan.schedule.features_per_dilation.tolist(),
        "alpha": model.ridge.alpha,
        "classes": list(model.ridge.classes),
        "arrays": entries,
        "data_bytes": offset,
    }
    header = json.dumps(manifest).encode("utf-8")
    with Path(path).open("wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<Q", len(header)))
        fh.write(header)
        for arr in arrays.values():
            fh.write(np.ascontiguousarray(arr, dtype=_F8).tobytes())


def _read_manifest(blob: bytes):
    if len(blob) < len(MAGIC) + 8 or blob[: len(MAGIC)] != MAGIC:
        raise CorruptFile("not a model file (bad magic)")
    (hlen,) = struct.unpack_from("<Q", blob, len(MAGIC))
    start = len(MAGIC) + 8
    if start + hlen > len(blob):
        raise CorruptFile("truncated manifest")
    try:
        manifest = json.loads(blob[start : start + hlen].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CorruptFile(f"unreadable manifest: {exc}") from None
    if not isinstance(manifest, dict):
        raise CorruptFile("manifest is not an object")
    return manifest, blob[start + hlen :]


def load_model(path) -> PipelineModel:
    blob = Path(path).read_bytes()
    manifest, data = _read_manifest(blob)
    version = manifest.get("format_version")
    if version != FORMAT_VERSION:
        raise VersionMismatch(f"model format {version!r}, expected {FORMAT_VERSION}")
    try:
        if len(data) != manifest["data_bytes"]:
            raise CorruptFile(
                f"array section has {len(data)} bytes, manifest says {manifest['data_bytes']}"
            )
        arrays = {}
        for entry in manifest["arrays"]:
            shape = tuple(int(n) for n in entry["shape"])
            count = int(np.prod(shape, dtype=np.int64))
            off = int(entry["offset"])
            if off < 0 or off + count * _F8.itemsize > len(data):
                raise CorruptFile(f"array {entry['name']} runs past end of file")
            arrays[entry["name"]] = (
                np.frombuffer(data, dtype=_F8, count=count, offset=off).astype(np.float64).reshape(shape)
            )
        D = int(manifest["dim"])
        n_classes = len(manifest["classes"])
        expected = {
            "biases": (int(manifest["n_features"]),),
            "phases": (D,),
            "mean": (int(manifest["n_features"]),),
            "scale": (int(manifest["n_features"]),),
            "weights": (n_classes, int(manifest["n_features"])),
            "intercepts": (n_classes,),
        }
        for name, shape in expected.items():
            if name not in arrays or arrays[name].shape != shape:
                got = arrays[name].shape if name in arrays else None
                raise CorruptFile(f"array {name} has shape {got}, manifest implies {shape}")
        if manifest["n_features"] != N_FEATURES:
            raise CorruptFile(f"feature count {manifest['n_features']} != {N_FEATURES}")

        schedule = DilationSchedule(
            np.array(manifest["dilations"], dtype=np.int64),
            np.array(manifest["features_per_dilation"], dtype=np.int64),
        )
        plan = TransformPlan(int(manifest["input_length"]), schedule, arrays["biases"], manifest["plan_seed"])
        phases = PhaseVector(arrays["phases"], manifest["phase_seed"])
        st = Standardizer(arrays["mean"], arrays["scale"])
        ridge = RidgeModel(
            arrays["weights"],
            arrays["intercepts"],
            float(manifest["alpha"]),
            arrays["alphas"],
            tuple(manifest["classes"]),
        )
        scale = manifest["scale"]
        return PipelineModel(
            plan,
            phases,
            None if scale is None else float(scale),
            manifest["mode"],
            st,
            ridge,
            manifest["seed"],
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, (CorruptFile, VersionMismatch)):
            raise
        raise CorruptFile(f"inconsistent manifest: {exc}") from None
