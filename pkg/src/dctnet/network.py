"""The two-layer model: forward pass with trace capture, initialization,
class decision, and JSON serialization.

Layer shapes follow the bias-in-front convention: hidden_weights has one
column per hidden neuron with the bias in row 0, output_weights is a
single column with the bias at index 0.  Hidden and output nonlinearities
are either per-neuron adaptive coefficient rows (the trainable model and
the frozen-sigmoid benchmark) or a shared fixed function (ReLU / sigmoid
benchmarks).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .activations import AdaptiveActivation, FixedActivation, identity_init, sigmoid_dct_init
from .basis import BasisConfig, DctCoefficients, basis_angle

__all__ = [
    "ForwardTrace",
    "Network",
    "MODEL_KINDS",
    "forward",
    "forward_batch",
    "predict_class",
    "init_network",
    "init_benchmark",
    "initial_weights",
    "save_model",
    "load_model",
    "HIDDEN_DIRECTIONS",
]

MODEL_KINDS = ("enn", "relu", "sigm", "fdct")

#: Hidden-weight columns (bias, w1, w2) cycled at initialization; the first
#: four axis/diagonal orientations, extended by the two remaining diagonals
#: so six neurons still start with distinct orientations.
HIDDEN_DIRECTIONS = (
    (0.0, 0.0, 1.0),
    (0.0, 1.0, 0.0),
    (0.0, 1.0, -1.0),
    (0.0, -1.0, 1.0),
    (0.0, 1.0, 1.0),
    (0.0, -1.0, -1.0),
)


@dataclass
class ForwardTrace:
    """Intermediate signals of one forward pass, kept for the update step."""

    s0: np.ndarray  # input with prepended 1, length m0 + 1
    z1: np.ndarray  # hidden pre-activations, length m1
    s1: np.ndarray  # hidden outputs with prepended 1, length m1 + 1
    z2: float       # output pre-activation
    y_hat: float


@dataclass
class Network:
    """Two-layer model; one of coeffs/fixed must be set per layer."""

    m0: int
    m1: int
    basis: BasisConfig
    hidden_weights: np.ndarray                     # (m0 + 1, m1)
    output_weights: np.ndarray                     # (m1 + 1,)
    hidden_coeffs: np.ndarray | None = None        # (m1, q // 2)
    output_coeffs: np.ndarray | None = None        # (q // 2,)
    hidden_fixed: FixedActivation | None = None
    output_fixed: FixedActivation | None = None
    trainable_activations: bool = True

    def __post_init__(self) -> None:
        self.hidden_weights = np.asarray(self.hidden_weights, dtype=float)
        self.output_weights = np.asarray(self.output_weights, dtype=float)
        if self.hidden_weights.shape != (self.m0 + 1, self.m1):
            raise ValueError(f"hidden_weights shape {self.hidden_weights.shape} != {(self.m0 + 1, self.m1)}")
        if self.output_weights.shape != (self.m1 + 1,):
            raise ValueError(f"output_weights shape {self.output_weights.shape} != {(self.m1 + 1,)}")
        if (self.hidden_coeffs is None) == (self.hidden_fixed is None):
            raise ValueError("exactly one of hidden_coeffs / hidden_fixed must be set")
        if (self.output_coeffs is None) == (self.output_fixed is None):
            raise ValueError("exactly one of output_coeffs / output_fixed must be set")
        if self.hidden_coeffs is not None:
            self.hidden_coeffs = np.asarray(self.hidden_coeffs, dtype=float)
            if self.hidden_coeffs.shape != (self.m1, self.basis.n_coeffs):
                raise ValueError(f"hidden_coeffs shape {self.hidden_coeffs.shape} != {(self.m1, self.basis.n_coeffs)}")
        if self.output_coeffs is not None:
            self.output_coeffs = np.asarray(self.output_coeffs, dtype=float)
            if self.output_coeffs.shape != (self.basis.n_coeffs,):
                raise ValueError(f"output_coeffs shape {self.output_coeffs.shape} != {(self.basis.n_coeffs,)}")
        if self.trainable_activations and self.hidden_coeffs is None:
            raise ValueError("trainable activations require coefficient parameterization")

    @property
    def kind(self) -> str:
        if self.hidden_fixed is not None:
            return "relu" if self.hidden_fixed.kind == "relu" else "sigm"
        return "enn" if self.trainable_activations else "fdct"

    def copy(self) -> "Network":
        return Network(
            m0=self.m0,
            m1=self.m1,
            basis=self.basis,
            hidden_weights=self.hidden_weights.copy(),
            output_weights=self.output_weights.copy(),
            hidden_coeffs=None if self.hidden_coeffs is None else self.hidden_coeffs.copy(),
            output_coeffs=None if self.output_coeffs is None else self.output_coeffs.copy(),
            hidden_fixed=self.hidden_fixed,
            output_fixed=self.output_fixed,
            trainable_activations=self.trainable_activations,
        )

    def hidden_activation(self, index: int):
        """Activation of hidden neuron `index` (0-based)."""
        if not 0 <= index < self.m1:
            raise IndexError(f"hidden neuron index {index} out of range [0, {self.m1})")
        if self.hidden_fixed is not None:
            return self.hidden_fixed
        coeffs = DctCoefficients(self.hidden_coeffs[index].copy(), self.basis)
        return AdaptiveActivation(coeffs)

    def output_activation(self):
        if self.output_fixed is not None:
            return self.output_fixed
        return AdaptiveActivation(DctCoefficients(self.output_coeffs.copy(), self.basis))


def forward(model: Network, x) -> ForwardTrace:
    """One forward pass, keeping every intermediate the update rules need."""
    x = np.asarray(x, dtype=float)
    if x.shape != (model.m0,):
        raise ValueError(f"input shape {x.shape} != ({model.m0},)")
    s0 = np.empty(model.m0 + 1)
    s0[0] = 1.0
    s0[1:] = x
    z1 = model.hidden_weights.T @ s0
    if model.hidden_coeffs is not None:
        angles = np.multiply.outer(basis_angle(z1, model.basis.n), model.basis.harmonics())
        hidden_out = np.einsum("kq,kq->k", model.hidden_coeffs, np.cos(angles))
    else:
        hidden_out = model.hidden_fixed(z1)
    s1 = np.empty(model.m1 + 1)
    s1[0] = 1.0
    s1[1:] = hidden_out
    z2 = float(model.output_weights @ s1)
    if model.output_coeffs is not None:
        y_hat = float(np.cos(model.basis.harmonics() * basis_angle(z2, model.basis.n)) @ model.output_coeffs)
    else:
        y_hat = float(model.output_fixed(z2))
    return ForwardTrace(s0=s0, z1=z1, s1=s1, z2=z2, y_hat=y_hat)


def forward_batch(model: Network, inputs) -> np.ndarray:
    """Vectorized soft decisions for an (n, m0) input array."""
    pts = np.asarray(inputs, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != model.m0:
        raise ValueError(f"inputs shape {pts.shape} incompatible with m0 = {model.m0}")
    z1 = model.hidden_weights[0] + pts @ model.hidden_weights[1:]          # (n, m1)
    if model.hidden_coeffs is not None:
        angles = np.multiply.outer(basis_angle(z1, model.basis.n), model.basis.harmonics())
        hidden_out = np.einsum("nkq,kq->nk", np.cos(angles), model.hidden_coeffs)
    else:
        hidden_out = model.hidden_fixed(z1)
    z2 = model.output_weights[0] + hidden_out @ model.output_weights[1:]    # (n,)
    if model.output_coeffs is not None:
        angles = np.multiply.outer(basis_angle(z2, model.basis.n), model.basis.harmonics())
        return np.cos(angles) @ model.output_coeffs
    return model.output_fixed(z2)


def predict_class(y_hat):
    """Hard decision: +1 for y_hat >= 0, else -1."""
    arr = np.asarray(y_hat)
    labels = np.where(arr >= 0.0, 1.0, -1.0)
    if arr.ndim == 0:
        return float(labels)
    return labels


def initial_weights(m0: int, m1: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Shared weight initialization: oriented hidden columns, small uniform
    output weights (bias included).  All model kinds start from the same
    weights for a given seed so comparisons isolate the activations.
    """
    if m0 != 2:
        raise ValueError("the hidden direction set is defined for two inputs")
    if m1 < 1:
        raise ValueError("need at least one hidden neuron")
    hidden = np.empty((m0 + 1, m1))
    for k in range(m1):
        hidden[:, k] = HIDDEN_DIRECTIONS[k % len(HIDDEN_DIRECTIONS)]
    rng = np.random.default_rng(seed)
    output = rng.uniform(-0.5, 0.5, m1 + 1)
    return hidden, output


def init_network(m0: int = 2, m1: int = 6, basis: BasisConfig = BasisConfig(), seed: int = 0) -> Network:
    """Fully adaptive model: identity-shaped activations everywhere."""
    hidden_w, output_w = initial_weights(m0, m1, seed)
    ident = identity_init(basis).coeffs.values
    return Network(
        m0=m0,
        m1=m1,
        basis=basis,
        hidden_weights=hidden_w,
        output_weights=output_w,
        hidden_coeffs=np.tile(ident, (m1, 1)),
        output_coeffs=ident.copy(),
        trainable_activations=True,
    )


def init_benchmark(
    kind: str,
    task: str,
    m0: int = 2,
    m1: int = 6,
    basis: BasisConfig = BasisConfig(),
    seed: int = 0,
) -> Network:
    """Benchmark with frozen activations; output picked for the task."""
    if kind not in ("relu", "sigm", "fdct"):
        raise ValueError(f"unknown benchmark kind {kind!r}")
    if task not in ("classification", "regression"):
        raise ValueError(f"unknown task {task!r}")
    hidden_w, output_w = initial_weights(m0, m1, seed)
    common = dict(m0=m0, m1=m1, basis=basis, hidden_weights=hidden_w, output_weights=output_w)
    if kind == "fdct":
        # the frozen-coefficient benchmark keeps its periodic sigmoid at
        # every unit, output included; only relu/sigm swap the output by task
        sig = sigmoid_dct_init(basis).coeffs.values
        return Network(
            hidden_coeffs=np.tile(sig, (m1, 1)),
            output_coeffs=sig.copy(),
            trainable_activations=False,
            **common,
        )
    hidden_fixed = FixedActivation("relu" if kind == "relu" else "sigmoid")
    output_fixed = FixedActivation("sigmoid" if task == "classification" else "identity")
    return Network(
        hidden_fixed=hidden_fixed,
        output_fixed=output_fixed,
        trainable_activations=False,
        **common,
    )


def save_model(model: Network, path) -> None:
    """Flat JSON snapshot; numbers keep full round-trip precision."""
    doc = {
        "schema": 1,
        "kind": model.kind,
        "m0": model.m0,
        "m1": model.m1,
        "n": model.basis.n,
        "q": model.basis.q,
        "hidden_weights": model.hidden_weights.flatten(order="F").tolist(),
        "output_weights": model.output_weights.tolist(),
        "hidden_coeffs": None if model.hidden_coeffs is None else model.hidden_coeffs.tolist(),
        "output_coeffs": None if model.output_coeffs is None else model.output_coeffs.tolist(),
        "hidden_fixed": None if model.hidden_fixed is None else model.hidden_fixed.kind,
        "output_fixed": None if model.output_fixed is None else model.output_fixed.kind,
        "trainable_activations": model.trainable_activations,
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def load_model(path) -> Network:
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("schema") != 1:
        raise ValueError(f"unsupported model schema {doc.get('schema')!r}")
    m0, m1 = doc["m0"], doc["m1"]
    basis = BasisConfig(n=doc["n"], q=doc["q"])
    hidden_w = np.array(doc["hidden_weights"]).reshape((m0 + 1, m1), order="F")
    return Network(
        m0=m0,
        m1=m1,
        basis=basis,
        hidden_weights=hidden_w,
        output_weights=np.array(doc["output_weights"]),
        hidden_coeffs=None if doc["hidden_coeffs"] is None else np.array(doc["hidden_coeffs"]),
        output_coeffs=None if doc["output_coeffs"] is None else np.array(doc["output_coeffs"]),
        hidden_fixed=None if doc["hidden_fixed"] is None else FixedActivation(doc["hidden_fixed"]),
        output_fixed=None if doc["output_fixed"] is None else FixedActivation(doc["output_fixed"]),
        trainable_activations=doc["trainable_activations"],
    )
