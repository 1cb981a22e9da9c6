"""Single-qubit dressed circuit: linear embedding, encoded forward pass, decision rule."""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import kernels, qsim
from .errors import InvalidInputError


class Label(enum.Enum):
    PLUS = "+"
    MINUS = "-"

    @property
    def qubit(self):
        """Label-qubit basis index: 0 for PLUS, 1 for MINUS."""
        return 0 if self is Label.PLUS else 1

    def flipped(self):
        return Label.MINUS if self is Label.PLUS else Label.PLUS


@dataclass(frozen=True, eq=False)
class ModelParams:
    """Embedding weights ``w`` (length d) and rotation angles ``theta``."""

    w: np.ndarray
    theta: tuple

    def __post_init__(self):
        w = np.array(self.w, dtype=np.float64).reshape(-1)
        theta = tuple(float(t) for t in self.theta)
        if w.size < 1:
            raise InvalidInputError("w must have at least one entry")
        if len(theta) != 3:
            raise InvalidInputError(f"theta must have 3 angles, got {len(theta)}")
        if not (np.all(np.isfinite(w)) and all(math.isfinite(t) for t in theta)):
            raise InvalidInputError("model parameters must be finite")
        w.setflags(write=False)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "theta", theta)

    @property
    def dim(self):
        return self.w.size

    @classmethod
    def zeros(cls, d):
        return cls(np.zeros(d), (0.0, 0.0, 0.0))

    @classmethod
    def random(cls, d, rng, w_range=(-0.1, 0.1), theta_range=(-math.pi, math.pi)):
        w = rng.uniform(w_range[0], w_range[1], size=d)
        theta = rng.uniform(theta_range[0], theta_range[1], size=3)
        return cls(w, tuple(theta))

    def as_vector(self):
        """Flattened ``[w..., theta1, theta2, theta3]``."""
        return np.concatenate([self.w, np.asarray(self.theta)])

    @classmethod
    def from_vector(cls, v, d=None):
        v = np.asarray(v, dtype=np.float64)
        d = v.size - 3 if d is None else d
        if v.size != d + 3:
            raise InvalidInputError(f"parameter vector has {v.size} entries, expected {d + 3}")
        return cls(v[:d], tuple(v[d:]))

    def rotation(self):
        return qsim.su2_matrix(*self.theta)


@dataclass(frozen=True)
class Prediction:
    label: Label
    p_minus: float


def _features(x):
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    if x.size < 1:
        raise InvalidInputError("feature vector is empty")
    return x


def embed(x, w):
    """Scalar phase ``sum_i w_i x_i``."""
    x, w = _features(x), np.asarray(w, dtype=np.float64).reshape(-1)
    if x.size != w.size:
        raise InvalidInputError(f"feature length {x.size} does not match weight length {w.size}")
    return float(np.dot(x, w))


def forward(x, p: ModelParams):
    return qsim.su2_rotate(qsim.prepare_encoded_state(embed(x, p.w)), *p.theta)


def decide(p_minus):
    # A tie at exactly 0.5 resolves to PLUS.
    return Label.PLUS if p_minus >= 0.5 else Label.MINUS


def predict(x, p: ModelParams) -> Prediction:
    pm = qsim.prob_minus(forward(x, p))
    return Prediction(decide(pm), pm)


def _check_matrix(X, d):
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2 or X.shape[1] != d:
        raise InvalidInputError(f"expected features of dimension {d}, got shape {X.shape}")
    return X


def batch_prob_minus(X, p: ModelParams):
    """``P_-`` for every row of ``X`` through the compiled kernel."""
    return kernels.batch_prob_minus(_check_matrix(X, p.dim), p.w, p.rotation())


def predict_labels(X, p: ModelParams):
    return [decide(pm) for pm in batch_prob_minus(X, p)]


def accuracy(samples: Sequence, p: ModelParams):
    """Fraction of ``(x, Label)`` pairs whose predicted label matches."""
    samples = list(samples)
    if not samples:
        raise InvalidInputError("accuracy needs at least one sample")
    X = np.array([np.asarray(x, dtype=np.float64) for x, _ in samples])
    predicted = predict_labels(X, p)
    hits = sum(pred is label for pred, (_, label) in zip(predicted, samples))
    return hits / len(samples)


@dataclass(frozen=True, eq=False)
class FeatureScaling:
    """Per-feature min-max map to [0, 1], fitted on training features."""

    minimum: np.ndarray
    maximum: np.ndarray

    @classmethod
    def fit(cls, X):
        X = np.asarray(X, dtype=np.float64)
        return cls(X.min(axis=0), X.max(axis=0))

    def apply(self, X):
        span = np.asarray(self.maximum) - np.asarray(self.minimum)
        span = np.where(span > 0, span, 1.0)
        return (np.asarray(X, dtype=np.float64) - self.minimum) / span

    def to_json(self):
        return {"min": [float(v) for v in self.minimum], "max": [float(v) for v in self.maximum]}

    @classmethod
    def from_json(cls, doc):
        return cls(np.asarray(doc["min"], dtype=np.float64), np.asarray(doc["max"], dtype=np.float64))


def model_document(p: ModelParams, classes, scaling=None):
    doc = {
        "w": [float(v) for v in p.w],
        "theta": [float(t) for t in p.theta],
        "classes": [int(c) for c in classes],
        "feature_dim": p.dim,
    }
    if scaling is not None:
        doc["scaling"] = scaling.to_json()
    return doc


def save_model(path, p: ModelParams, classes, scaling=None):
    Path(path).write_text(json.dumps(model_document(p, classes, scaling), indent=2) + "\n")


def load_model(path):
    """Read a model file; returns ``(params, classes, scaling_or_None)``."""
    try:
        doc = json.loads(Path(path).read_text())
        p = ModelParams(doc["w"], doc["theta"])
        classes = tuple(int(c) for c in doc["classes"])
        feature_dim = int(doc["feature_dim"])
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InvalidInputError(f"cannot read model {path}: {exc}") from exc
    if feature_dim != p.dim:
        raise InvalidInputError(f"model feature_dim {feature_dim} does not match len(w) = {p.dim}")
    if len(classes) != 2:
        raise InvalidInputError("model must name exactly two classes")
    scaling = FeatureScaling.from_json(doc["scaling"]) if doc.get("scaling") else None
    return p, classes, scaling
