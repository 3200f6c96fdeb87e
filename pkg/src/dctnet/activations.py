"""Activation functions: cosine-series adaptive units plus the fixed
benchmark nonlinearities (ReLU, centered sigmoid, identity).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .basis import BasisConfig, DctCoefficients, analyze, synthesize, synthesize_slope

__all__ = [
    "AdaptiveActivation",
    "FixedActivation",
    "FIXED_KINDS",
    "centered_sigmoid",
    "identity_init",
    "sigmoid_dct_init",
    "write_curve_csv",
]

FIXED_KINDS = ("relu", "sigmoid", "identity")

#: Slope of the centered sigmoid benchmark; near-saturates at |z| = 1.
SIGMOID_SLOPE = 4.0


def centered_sigmoid(z, slope: float = SIGMOID_SLOPE):
    """Zero-centered logistic 2 / (1 + exp(-slope z)) - 1, range (-1, 1)."""
    return 2.0 / (1.0 + np.exp(-slope * np.asarray(z, dtype=float))) - 1.0


@dataclass(frozen=True)
class AdaptiveActivation:
    """A nonlinearity parameterized by retained-harmonic coefficients."""

    coeffs: DctCoefficients

    def __call__(self, z):
        return synthesize(self.coeffs, z)

    def derivative(self, z):
        return synthesize_slope(self.coeffs, z)


@dataclass(frozen=True)
class FixedActivation:
    """One of the non-trainable benchmark nonlinearities."""

    kind: str

    def __post_init__(self) -> None:
        if self.kind not in FIXED_KINDS:
            raise ValueError(f"unknown fixed activation {self.kind!r}, expected one of {FIXED_KINDS}")

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        if self.kind == "relu":
            return np.maximum(0.0, z)
        if self.kind == "sigmoid":
            return centered_sigmoid(z)
        return z

    def derivative(self, z):
        z = np.asarray(z, dtype=float)
        if self.kind == "relu":
            # subgradient choice: slope 0 at the kink
            return np.where(z > 0.0, 1.0, 0.0)
        if self.kind == "sigmoid":
            s = centered_sigmoid(z)
            return SIGMOID_SLOPE / 2.0 * (1.0 - s * s)
        return np.ones_like(z)


def identity_init(config: BasisConfig) -> AdaptiveActivation:
    """Best retained-harmonic approximation of f(x) = x on the grid."""
    return AdaptiveActivation(analyze(config.sample_grid(), config.q))


def sigmoid_dct_init(config: BasisConfig, slope: float = SIGMOID_SLOPE) -> AdaptiveActivation:
    """Retained-harmonic approximation of the centered sigmoid.

    The result agrees with the analytic sigmoid inside [-1, 1] up to the
    truncation residual but is periodic outside instead of saturating.
    """
    if slope <= 0:
        raise ValueError(f"slope must be positive, got {slope}")
    return AdaptiveActivation(analyze(centered_sigmoid(config.sample_grid(), slope), config.q))


def write_curve_csv(activation, path, lo: float = -4.0, hi: float = 4.0, count: int = 801) -> None:
    """Export an activation curve as z,value rows over [lo, hi]."""
    if count < 2:
        raise ValueError("need at least two curve samples")
    z = np.linspace(lo, hi, count)
    values = np.asarray(activation(z), dtype=float)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["z", "value"])
        for zi, vi in zip(z, values):
            writer.writerow([format(zi, ".17g"), format(vi, ".17g")])
