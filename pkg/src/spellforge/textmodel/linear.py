"""Multi-head linear model over hashed n-gram features.

Three heads share one feature space: a softmax type classifier, four
sigmoid-bounded status regressors, and sixteen 3-class effect-cell
classifiers. Training is plain mini-batch SGD, deterministic under its
seed; all arithmetic runs in float64 and the finished model is stored as
float32 blocks.
"""

from __future__ import annotations

import json
import struct
import zlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import expit, logsumexp

from ..core import RawPrediction, SpellTypeRegistry
from ..dataset import Example, validate_labels
from .features import DIM, extract_features

MAGIC = b"SPFM"
FORMAT_VERSION = 1

N_STATUSES = 4
N_CELLS = 16
N_CELL_CLASSES = 3


class TrainingDivergedError(Exception):
    pass


class ModelFormatError(Exception):
    pass


@dataclass(frozen=True)
class TrainingMeta:
    seed: int
    epochs: int
    batch: int
    learning_rate: float
    loss_trace: tuple[float, ...]


@dataclass(eq=False)
class LinearSpellModel:
    model_id: str
    dim: int
    n_types: int
    bounds: tuple[float, float, float, float]
    type_w: np.ndarray
    type_b: np.ndarray
    status_w: np.ndarray
    status_b: np.ndarray
    effect_w: np.ndarray
    effect_b: np.ndarray
    meta: TrainingMeta

    def blocks(self) -> tuple[np.ndarray, ...]:
        return (
            self.type_w,
            self.type_b,
            self.status_w,
            self.status_b,
            self.effect_w,
            self.effect_b,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinearSpellModel):
            return NotImplemented
        return (
            self.model_id == other.model_id
            and self.dim == other.dim
            and self.n_types == other.n_types
            and self.bounds == other.bounds
            and self.meta == other.meta
            and all(a.tobytes() == b.tobytes() for a, b in zip(self.blocks(), other.blocks()))
        )


# ---------------------------------------------------------------------------
# forward pass + gradients (float64, shared by training and the grad check)


class HeadWeights:
    """Float64 working weights for all three heads."""

    def __init__(self, dim: int, n_types: int):
        self.dim = dim
        self.n_types = n_types
        self.type_w = np.zeros((n_types, dim))
        self.type_b = np.zeros(n_types)
        self.status_w = np.zeros((N_STATUSES, dim))
        self.status_b = np.zeros(N_STATUSES)
        self.effect_w = np.zeros((N_CELLS * N_CELL_CLASSES, dim))
        self.effect_b = np.zeros(N_CELLS * N_CELL_CLASSES)

    @staticmethod
    def from_model(model: "LinearSpellModel") -> "HeadWeights":
        weights = HeadWeights(model.dim, model.n_types)
        weights.type_w = model.type_w.astype(np.float64)
        weights.type_b = model.type_b.astype(np.float64)
        weights.status_w = model.status_w.astype(np.float64)
        weights.status_b = model.status_b.astype(np.float64)
        weights.effect_w = model.effect_w.astype(np.float64)
        weights.effect_b = model.effect_b.astype(np.float64)
        return weights


@dataclass
class PreparedBatch:
    """Densified slice of the dataset over its active feature columns."""

    active: np.ndarray  # (K,) feature column indices
    x: np.ndarray  # (B, K) feature values
    y_type: np.ndarray  # (B,)
    y_status: np.ndarray  # (B, 4) targets normalized to [0, 1]
    y_cell: np.ndarray  # (B, 16) class indices 0..2 for cell values -1/0/+1


def prepare_batch(
    features: list[dict[int, float]],
    y_type: np.ndarray,
    y_status: np.ndarray,
    y_cell: np.ndarray,
) -> PreparedBatch:
    active = np.unique(
        np.concatenate([np.fromiter(f.keys(), dtype=np.int64) for f in features])
    )
    x = np.zeros((len(features), active.size))
    for row, feats in enumerate(features):
        columns = np.searchsorted(active, np.fromiter(feats.keys(), dtype=np.int64))
        x[row, columns] = np.fromiter(feats.values(), dtype=np.float64)
    return PreparedBatch(active=active, x=x, y_type=y_type, y_status=y_status, y_cell=y_cell)


def _forward(weights: HeadWeights, batch: PreparedBatch):
    z_type = batch.x @ weights.type_w[:, batch.active].T + weights.type_b
    z_status = batch.x @ weights.status_w[:, batch.active].T + weights.status_b
    z_effect = batch.x @ weights.effect_w[:, batch.active].T + weights.effect_b
    return z_type, z_status, z_effect


def batch_loss(weights: HeadWeights, batch: PreparedBatch) -> tuple[float, float, float]:
    """(type cross-entropy, status mse, mean effect cross-entropy) for a batch."""
    z_type, z_status, z_effect = _forward(weights, batch)
    size = batch.x.shape[0]
    log_p = z_type - logsumexp(z_type, axis=1, keepdims=True)
    ce_type = float(-log_p[np.arange(size), batch.y_type].mean())
    s = expit(z_status)
    mse = float(((s - batch.y_status) ** 2).mean())
    z_cells = z_effect.reshape(size, N_CELLS, N_CELL_CLASSES)
    log_pc = z_cells - logsumexp(z_cells, axis=2, keepdims=True)
    picked = np.take_along_axis(log_pc, batch.y_cell[:, :, None], axis=2)[:, :, 0]
    ce_effect = float(-picked.mean())
    return ce_type, mse, ce_effect


def batch_loss_and_grads(weights: HeadWeights, batch: PreparedBatch):
    """Total loss plus gradients restricted to the batch's active columns.

    Gradient keys: (type_w, type_b, status_w, status_b, effect_w, effect_b),
    with weight grads shaped (heads, len(active)).
    """
    z_type, z_status, z_effect = _forward(weights, batch)
    size = batch.x.shape[0]

    log_p = z_type - logsumexp(z_type, axis=1, keepdims=True)
    p = np.exp(log_p)
    ce_type = float(-log_p[np.arange(size), batch.y_type].mean())
    d_type = p.copy()
    d_type[np.arange(size), batch.y_type] -= 1.0
    d_type /= size

    s = expit(z_status)
    diff = s - batch.y_status
    mse = float((diff**2).mean())
    d_status = 2.0 * diff * s * (1.0 - s) / diff.size

    z_cells = z_effect.reshape(size, N_CELLS, N_CELL_CLASSES)
    log_pc = z_cells - logsumexp(z_cells, axis=2, keepdims=True)
    pc = np.exp(log_pc)
    picked = np.take_along_axis(log_pc, batch.y_cell[:, :, None], axis=2)[:, :, 0]
    ce_effect = float(-picked.mean())
    d_cells = pc.copy()
    one_hot = np.zeros_like(pc)
    np.put_along_axis(one_hot, batch.y_cell[:, :, None], 1.0, axis=2)
    d_cells -= one_hot
    d_cells /= size * N_CELLS
    d_effect = d_cells.reshape(size, N_CELLS * N_CELL_CLASSES)

    grads = {
        "type_w": d_type.T @ batch.x,
        "type_b": d_type.sum(axis=0),
        "status_w": d_status.T @ batch.x,
        "status_b": d_status.sum(axis=0),
        "effect_w": d_effect.T @ batch.x,
        "effect_b": d_effect.sum(axis=0),
    }
    return ce_type + mse + ce_effect, grads


# ---------------------------------------------------------------------------
# training


def _prepare_dataset(examples, bounds, dim):
    features = [extract_features(e.prompt, dim) for e in examples]
    y_type = np.array([e.type_index for e in examples], dtype=np.int64)
    scale = np.array(bounds, dtype=np.float64)
    y_status = np.array([e.status_raws for e in examples], dtype=np.float64) / scale
    y_cell = np.array(
        [[value + 1 for row in e.effects.rows for value in row] for e in examples],
        dtype=np.int64,
    )
    return features, y_type, y_status, y_cell


def _dataset_loss(weights, features, y_type, y_status, y_cell, chunk=256) -> float:
    total = np.zeros(3)
    count = len(features)
    for start in range(0, count, chunk):
        stop = min(start + chunk, count)
        batch = prepare_batch(
            features[start:stop], y_type[start:stop], y_status[start:stop], y_cell[start:stop]
        )
        terms = batch_loss(weights, batch)
        total += np.array(terms) * (stop - start)
    return float(total.sum() / count)


def train(
    examples: list[Example],
    seed: int,
    epochs: int = 50,
    batch: int = 32,
    learning_rate: float = 0.1,
    dim: int = DIM,
    registry: SpellTypeRegistry | None = None,
    bounds: tuple[float, float, float, float] = (4.0, 4.0, 4.0, 4.0),
    model_id: str | None = None,
) -> LinearSpellModel:
    """Fit the three heads with seeded mini-batch SGD.

    The shuffle order is the only stochastic element, so identical inputs
    and seed reproduce the model bit for bit. The recorded loss trace holds
    the full-dataset combined loss before training and after each epoch.
    """
    if not examples:
        raise ValueError("training set is empty")
    registry = registry or SpellTypeRegistry.default()
    for position, example in enumerate(examples):
        violations = validate_labels(example, registry, bounds)
        if violations:
            raise ValueError(f"example {position}: {'; '.join(violations)}")
    features, y_type, y_status, y_cell = _prepare_dataset(examples, bounds, dim)
    weights = HeadWeights(dim, len(registry))
    rng = np.random.default_rng(seed)
    count = len(examples)
    trace = [_dataset_loss(weights, features, y_type, y_status, y_cell)]
    for epoch in range(epochs):
        order = rng.permutation(count)
        for start in range(0, count, batch):
            rows = order[start : start + batch]
            mini = prepare_batch(
                [features[r] for r in rows], y_type[rows], y_status[rows], y_cell[rows]
            )
            loss, grads = batch_loss_and_grads(weights, mini)
            if not np.isfinite(loss):
                raise TrainingDivergedError(
                    f"non-finite loss at epoch {epoch}, batch offset {start}"
                )
            weights.type_w[:, mini.active] -= learning_rate * grads["type_w"]
            weights.type_b -= learning_rate * grads["type_b"]
            weights.status_w[:, mini.active] -= learning_rate * grads["status_w"]
            weights.status_b -= learning_rate * grads["status_b"]
            weights.effect_w[:, mini.active] -= learning_rate * grads["effect_w"]
            weights.effect_b -= learning_rate * grads["effect_b"]
        trace.append(_dataset_loss(weights, features, y_type, y_status, y_cell))
    return LinearSpellModel(
        model_id=model_id or f"spellforge-linear-d{dim}-seed{seed}",
        dim=dim,
        n_types=len(registry),
        bounds=tuple(float(b) for b in bounds),  # type: ignore[arg-type]
        type_w=weights.type_w.astype(np.float32),
        type_b=weights.type_b.astype(np.float32),
        status_w=weights.status_w.astype(np.float32),
        status_b=weights.status_b.astype(np.float32),
        effect_w=weights.effect_w.astype(np.float32),
        effect_b=weights.effect_b.astype(np.float32),
        meta=TrainingMeta(
            seed=seed,
            epochs=epochs,
            batch=batch,
            learning_rate=learning_rate,
            loss_trace=tuple(trace),
        ),
    )


# ---------------------------------------------------------------------------
# prediction and evaluation


def predict_raw(model: LinearSpellModel, prompt: str) -> RawPrediction:
    """Deterministic decode: softmax type, sigmoid-scaled statuses, argmax cells."""
    features = extract_features(prompt, model.dim)
    idx = np.fromiter(features.keys(), dtype=np.int64)
    val = np.fromiter(features.values(), dtype=np.float64)

    z_type = model.type_w[:, idx].astype(np.float64) @ val + model.type_b
    z_type -= z_type.max()
    probs = np.exp(z_type)
    probs /= probs.sum()

    z_status = model.status_w[:, idx].astype(np.float64) @ val + model.status_b
    statuses = expit(z_status) * np.array(model.bounds)

    z_effect = model.effect_w[:, idx].astype(np.float64) @ val + model.effect_b
    cells = z_effect.reshape(N_CELLS, N_CELL_CLASSES).argmax(axis=1) - 1

    return RawPrediction(
        type_probs=tuple(float(p) for p in probs),
        status_raws=tuple(float(s) for s in statuses),  # type: ignore[arg-type]
        effect_cells=tuple(int(c) for c in cells),
        bounds=model.bounds,
    )


def evaluate(model: LinearSpellModel, test_set: list[Example]) -> dict:
    """Accuracy and error metrics over a labeled set."""
    if not test_set:
        raise ValueError("test set is empty")
    type_hits = 0
    abs_err = np.zeros(N_STATUSES)
    cell_hits = np.zeros(N_CELLS)
    for example in test_set:
        pred = predict_raw(model, example.prompt)
        if pred.argmax_type() == example.type_index:
            type_hits += 1
        abs_err += np.abs(np.array(pred.status_raws) - np.array(example.status_raws))
        label_cells = [value for row in example.effects.rows for value in row]
        cell_hits += np.array(pred.effect_cells) == np.array(label_cells)
    count = len(test_set)
    per_cell = cell_hits / count
    return {
        "type_accuracy": type_hits / count,
        "status_mae": tuple((abs_err / count).tolist()),
        "effect_cell_accuracy": tuple(per_cell.tolist()),
        "effect_macro_accuracy": float(per_cell.mean()),
    }


# ---------------------------------------------------------------------------
# serialization: SPFM container, little-endian, CRC32 tail


def save_model(model: LinearSpellModel, path: str | Path) -> None:
    buffer = bytearray()
    buffer += MAGIC
    buffer += struct.pack("<H", FORMAT_VERSION)
    buffer += struct.pack("<IIII", model.dim, model.n_types, N_STATUSES, N_CELLS)
    buffer += struct.pack("<4d", *model.bounds)
    meta = json.dumps(
        {
            "model_id": model.model_id,
            "seed": model.meta.seed,
            "epochs": model.meta.epochs,
            "batch": model.meta.batch,
            "learning_rate": model.meta.learning_rate,
            "loss_trace": list(model.meta.loss_trace),
        }
    ).encode("utf-8")
    buffer += struct.pack("<I", len(meta))
    buffer += meta
    for block in model.blocks():
        buffer += np.ascontiguousarray(block, dtype="<f4").tobytes()
    buffer += struct.pack("<I", zlib.crc32(bytes(buffer)))
    Path(path).write_bytes(bytes(buffer))


def load_model(path: str | Path) -> LinearSpellModel:
    data = Path(path).read_bytes()
    if len(data) < 10 or data[:4] != MAGIC:
        raise ModelFormatError("not a spellforge model")
    if len(data) < 4 + 2 + 16 + 32 + 4 + 4:
        raise ModelFormatError("truncated model file")
    (version,) = struct.unpack_from("<H", data, 4)
    if version != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported model format version {version}")
    stored_crc = struct.unpack_from("<I", data, len(data) - 4)[0]
    if zlib.crc32(data[:-4]) != stored_crc:
        raise ModelFormatError("model file checksum mismatch")
    offset = 6
    dim, n_types, n_statuses, n_cells = struct.unpack_from("<IIII", data, offset)
    offset += 16
    if n_statuses != N_STATUSES or n_cells != N_CELLS:
        raise ModelFormatError(f"unexpected head shape ({n_statuses} statuses, {n_cells} cells)")
    bounds = struct.unpack_from("<4d", data, offset)
    offset += 32
    (meta_len,) = struct.unpack_from("<I", data, offset)
    offset += 4
    if offset + meta_len > len(data) - 4:
        raise ModelFormatError("truncated model file")
    try:
        meta_raw = json.loads(data[offset : offset + meta_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ModelFormatError(f"corrupt model metadata: {exc}") from exc
    offset += meta_len
    shapes = [
        (n_types, dim),
        (n_types,),
        (N_STATUSES, dim),
        (N_STATUSES,),
        (N_CELLS * N_CELL_CLASSES, dim),
        (N_CELLS * N_CELL_CLASSES,),
    ]
    expected = sum(int(np.prod(shape)) for shape in shapes) * 4
    if len(data) - 4 - offset != expected:
        raise ModelFormatError("truncated model file")
    blocks = []
    for shape in shapes:
        size = int(np.prod(shape)) * 4
        block = np.frombuffer(data, dtype="<f4", count=int(np.prod(shape)), offset=offset)
        blocks.append(block.reshape(shape).copy())
        offset += size
    return LinearSpellModel(
        model_id=str(meta_raw["model_id"]),
        dim=int(dim),
        n_types=int(n_types),
        bounds=tuple(float(b) for b in bounds),  # type: ignore[arg-type]
        type_w=blocks[0],
        type_b=blocks[1],
        status_w=blocks[2],
        status_b=blocks[3],
        effect_w=blocks[4],
        effect_b=blocks[5],
        meta=TrainingMeta(
            seed=int(meta_raw["seed"]),
            epochs=int(meta_raw["epochs"]),
            batch=int(meta_raw["batch"]),
            learning_rate=float(meta_raw["learning_rate"]),
            loss_trace=tuple(float(x) for x in meta_raw["loss_trace"]),
        ),
    )
