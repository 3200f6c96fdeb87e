"""Synthetic bivariate tasks and evaluation metrics.

Classification problems are defined by analytic discriminants d(x1, x2);
the label is the sign of d with ties going to +1.  Inputs are always
drawn i.i.d. uniform on [-1, 1]^2.  Regression problems map inputs to a
scalar target directly.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .network import Network, forward_batch, predict_class

__all__ = [
    "Sample",
    "ProblemSpec",
    "Dataset",
    "PROBLEMS",
    "CLASSIFICATION_PROBLEMS",
    "REGRESSION_PROBLEMS",
    "get_problem",
    "label",
    "generate_dataset",
    "accuracy",
    "mse",
    "save_dataset",
    "load_dataset",
]


class Sample(NamedTuple):
    x: np.ndarray
    y: float


@dataclass(frozen=True)
class ProblemSpec:
    """A named task: `fn` is the discriminant (classification) or the
    target function (regression), vectorized over an (n, 2) array."""

    name: str
    kind: str  # "classification" | "regression"
    fn: Callable[[np.ndarray], np.ndarray]


def _disk(x: np.ndarray, cx: float, cy: float, r: float) -> np.ndarray:
    return r - np.hypot(x[..., 0] - cx, x[..., 1] - cy)


def _ring(x: np.ndarray) -> np.ndarray:
    return 0.2 - np.abs(np.hypot(x[..., 0], x[..., 1]) - 0.55)


def _face(x: np.ndarray) -> np.ndarray:
    # thin ring plus two disjoint dots; the ring width sits below what a
    # six-unit monotone net can band-fit and the dots punish models that
    # cannot localize off-axis structure
    ring = 0.135 - np.abs(np.hypot(x[..., 0], x[..., 1]) - 0.45)
    eyes = np.maximum(_disk(x, -0.38, 0.76, 0.2), _disk(x, 0.38, 0.76, 0.2))
    return np.maximum(ring, eyes)


_CLASSIFICATION = {
    # order-1 .. order-3 boundaries
    "p1": lambda x: x[..., 0] - x[..., 1],
    "p2": lambda x: x[..., 1] - (2.0 * x[..., 0] ** 2 - 0.5),
    "p3": lambda x: x[..., 1] - 2.5 * x[..., 0] ** 3 + x[..., 0],
    # higher-order regions
    "p4": lambda x: _disk(x, 0.2, 0.1, 0.45),
    "p5": lambda x: np.maximum(_disk(x, -0.45, -0.45, 0.35), _disk(x, 0.45, 0.45, 0.35)),
    "p6": _ring,
    # stripe frequency picked so the band count exceeds what a six-unit
    # monotone staircase can fit, while staying a single odd harmonic
    # (2q-1 = 5) for the periodic activations
    "p7": lambda x: np.sin(2.5 * np.pi * (x[..., 0] - x[..., 1])),
    "p8": _face,
}

_REGRESSION = {
    "mean": lambda x: (x[..., 0] + x[..., 1]) / 2.0,
    "quarter-sum-squares": lambda x: (x[..., 0] ** 2 + x[..., 1] ** 2) / 4.0,
    "product": lambda x: x[..., 0] * x[..., 1],
}

CLASSIFICATION_PROBLEMS = tuple(_CLASSIFICATION)
REGRESSION_PROBLEMS = tuple(_REGRESSION)

PROBLEMS: dict[str, ProblemSpec] = {
    **{name: ProblemSpec(name, "classification", fn) for name, fn in _CLASSIFICATION.items()},
    **{name: ProblemSpec(name, "regression", fn) for name, fn in _REGRESSION.items()},
}


def get_problem(name: str) -> ProblemSpec:
    try:
        return PROBLEMS[name.lower()]
    except KeyError:
        raise ValueError(f"unknown problem {name!r}; choose from {sorted(PROBLEMS)}") from None


def label(problem: ProblemSpec | str, x):
    """Target for one input or a batch: sign of the discriminant (ties to
    +1) for classification, the function value for regression."""
    spec = get_problem(problem) if isinstance(problem, str) else problem
    x = np.asarray(x, dtype=float)
    values = spec.fn(x)
    if spec.kind == "classification":
        values = np.where(values >= 0.0, 1.0, -1.0)
    if np.ndim(values) == 0:
        return float(values)
    return values


@dataclass
class Dataset:
    problem: str
    kind: str
    x: np.ndarray  # (n, 2)
    y: np.ndarray  # (n,)
    seed: int | None = None

    def __len__(self) -> int:
        return self.x.shape[0]

    def __getitem__(self, i: int) -> Sample:
        return Sample(self.x[i], float(self.y[i]))


def generate_dataset(problem: ProblemSpec | str, n: int, seed: int) -> Dataset:
    """n i.i.d. uniform inputs on [-1, 1]^2 with their labels, seeded."""
    spec = get_problem(problem) if isinstance(problem, str) else problem
    if n < 1:
        raise ValueError("dataset size must be positive")
    rng = np.random.default_rng(seed)
    x = rng.uniform(-1.0, 1.0, (n, 2))
    return Dataset(problem=spec.name, kind=spec.kind, x=x, y=label(spec, x), seed=seed)


def accuracy(model: Network, dataset: Dataset) -> float:
    """Fraction of test samples whose hard decision matches the label."""
    if dataset.kind != "classification":
        raise ValueError(f"accuracy needs a classification dataset, got {dataset.kind!r}")
    predictions = predict_class(forward_batch(model, dataset.x))
    return float(np.mean(predictions == dataset.y))


def mse(model: Network, dataset: Dataset) -> float:
    """Mean squared error of the soft decisions against the targets."""
    residual = dataset.y - forward_batch(model, dataset.x)
    return float(np.mean(residual**2))


def save_dataset(dataset: Dataset, path, manifest_path=None) -> None:
    """CSV rows x1,x2,y plus a sidecar JSON manifest."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x1", "x2", "y"])
        for (x1, x2), y in zip(dataset.x, dataset.y):
            writer.writerow([format(x1, ".17g"), format(x2, ".17g"), format(y, ".17g")])
    manifest = {
        "schema": 1,
        "problem": dataset.problem,
        "kind": dataset.kind,
        "n": len(dataset),
        "seed": dataset.seed,
    }
    if manifest_path is None:
        manifest_path = str(path) + ".manifest.json"
    with open(manifest_path, "w") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")


def load_dataset(path, manifest_path=None) -> Dataset:
    if manifest_path is None:
        manifest_path = str(path) + ".manifest.json"
    with open(manifest_path) as fh:
        manifest = json.load(fh)
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if rows[0] != ["x1", "x2", "y"]:
        raise ValueError(f"unexpected header {rows[0]!r} in {path}")
    data = np.array([[float(a), float(b), float(c)] for a, b, c in rows[1:]])
    return Dataset(
        problem=manifest["problem"],
        kind=manifest["kind"],
        x=data[:, :2],
        y=data[:, 2],
        seed=manifest.get("seed"),
    )
