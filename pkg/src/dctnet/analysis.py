"""Explainability exports: per-neuron bumps, decision and response maps,
activation curves, and redundancy detection.

A bump is the surface one hidden neuron paints over the input square: its
affine map composed with its activation.  The model's response surface is
the output activation applied to the bias plus output-weighted bump sum,
and the decision map is the sign of that surface.

Grids cover [-1, 1]^2 with `resolution` points per axis (odd defaults
include 0 and the borders exactly); flattened values are row-major with
x2 varying fastest.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .basis import basis_angle
from .network import Network, forward_batch, predict_class

__all__ = [
    "GridMap",
    "RedundantPair",
    "ActivationReport",
    "grid_points",
    "bump",
    "decision_map",
    "response_surface",
    "redundancy_report",
    "activation_report",
    "write_grid_csv",
    "write_grid_pgm",
    "write_activation_report",
]

DEFAULT_RESOLUTION = 201


@dataclass
class GridMap:
    """Values of a scalar field sampled on the [-1, 1]^2 grid."""

    resolution: int
    values: np.ndarray  # (resolution, resolution), [i, j] at (x1_i, x2_j)

    def __post_init__(self) -> None:
        if self.resolution < 2:
            raise ValueError("resolution must be at least 2")
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.resolution, self.resolution):
            raise ValueError(f"values shape {self.values.shape} != {(self.resolution, self.resolution)}")

    def axis(self) -> np.ndarray:
        return np.linspace(-1.0, 1.0, self.resolution)

    def flat(self) -> np.ndarray:
        """Row-major values, x2 varying fastest."""
        return self.values.ravel()


def grid_points(resolution: int) -> np.ndarray:
    """(resolution^2, 2) points in row-major order, x2 fastest."""
    axis = np.linspace(-1.0, 1.0, resolution)
    x1, x2 = np.meshgrid(axis, axis, indexing="ij")
    return np.stack([x1.ravel(), x2.ravel()], axis=-1)


def bump(model: Network, k: int, resolution: int = DEFAULT_RESOLUTION) -> GridMap:
    """Surface of hidden neuron k (1-based) over the input square."""
    if not 1 <= k <= model.m1:
        raise IndexError(f"hidden neuron index {k} out of range [1, {model.m1}]")
    pts = grid_points(resolution)
    weights = model.hidden_weights[:, k - 1]
    z = weights[0] + pts @ weights[1:]
    values = np.asarray(model.hidden_activation(k - 1)(z), dtype=float)
    return GridMap(resolution, values.reshape(resolution, resolution))


def response_surface(model: Network, resolution: int = DEFAULT_RESOLUTION) -> GridMap:
    """Raw soft decision y_hat over the grid."""
    values = forward_batch(model, grid_points(resolution))
    return GridMap(resolution, values.reshape(resolution, resolution))


def decision_map(model: Network, resolution: int = DEFAULT_RESOLUTION) -> GridMap:
    """Hard decision (+1 / -1) over the grid."""
    values = predict_class(forward_batch(model, grid_points(resolution)))
    return GridMap(resolution, values.reshape(resolution, resolution))


@dataclass(frozen=True)
class RedundantPair:
    """Two hidden neurons with nearly identical bumps."""

    first: int               # 1-based neuron indices
    second: int
    correlation: float
    weight_sign_product: int
    cancelling: bool


def redundancy_report(
    model: Network, resolution: int = DEFAULT_RESOLUTION, tol: float = 0.01
) -> list[RedundantPair]:
    """Pairs whose mean-removed bump grids correlate above 1 - tol.

    A near-duplicate pair whose output weights have opposite signs is
    flagged cancelling: the two branches erase each other in the output
    sum, a sign that fewer neurons would do.
    """
    if not 0.0 < tol < 1.0:
        raise ValueError(f"tol must be in (0, 1), got {tol}")
    grids = np.stack([bump(model, k + 1, resolution).flat() for k in range(model.m1)])
    centered = grids - grids.mean(axis=1, keepdims=True)
    norms = np.linalg.norm(centered, axis=1)
    out_w = model.output_weights[1:]
    pairs = []
    for j in range(model.m1):
        for k in range(j + 1, model.m1):
            if norms[j] < 1e-12 or norms[k] < 1e-12:
                continue  # flat bump, correlation undefined
            corr = float(centered[j] @ centered[k] / (norms[j] * norms[k]))
            if corr >= 1.0 - tol:
                sign = int(np.sign(out_w[j] * out_w[k]))
                pairs.append(
                    RedundantPair(
                        first=j + 1,
                        second=k + 1,
                        correlation=corr,
                        weight_sign_product=sign,
                        cancelling=sign < 0,
                    )
                )
    return pairs


@dataclass
class ActivationReport:
    """Curves for every unit, with operating ranges when a dataset is given."""

    z: np.ndarray
    hidden_curves: np.ndarray          # (m1, len(z))
    output_curve: np.ndarray           # (len(z),)
    hidden_ranges: list[tuple[float, float]] = field(default_factory=list)
    output_range: tuple[float, float] | None = None


def activation_report(
    model: Network,
    dataset=None,
    lo: float = -4.0,
    hi: float = 4.0,
    count: int = 801,
) -> ActivationReport:
    """Evaluate every activation over [lo, hi]; observe z ranges on data."""
    z = np.linspace(lo, hi, count)
    hidden_curves = np.stack(
        [np.asarray(model.hidden_activation(k)(z), dtype=float) for k in range(model.m1)]
    )
    output_curve = np.asarray(model.output_activation()(z), dtype=float)
    report = ActivationReport(z=z, hidden_curves=hidden_curves, output_curve=output_curve)
    if dataset is not None:
        pts = np.asarray(dataset.x, dtype=float)
        z1 = model.hidden_weights[0] + pts @ model.hidden_weights[1:]
        report.hidden_ranges = [(float(z1[:, k].min()), float(z1[:, k].max())) for k in range(model.m1)]
        if model.hidden_coeffs is not None:
            angles = np.multiply.outer(basis_angle(z1, model.basis.n), model.basis.harmonics())
            hidden_out = np.einsum("nkq,kq->nk", np.cos(angles), model.hidden_coeffs)
        else:
            hidden_out = model.hidden_fixed(z1)
        z2 = model.output_weights[0] + hidden_out @ model.output_weights[1:]
        report.output_range = (float(z2.min()), float(z2.max()))
    return report


def write_grid_csv(grid: GridMap, path) -> None:
    """Rows x1,x2,value in row-major order (x2 fastest)."""
    axis = grid.axis()
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x1", "x2", "value"])
        for i in range(grid.resolution):
            for j in range(grid.resolution):
                writer.writerow(
                    [format(axis[i], ".17g"), format(axis[j], ".17g"), format(grid.values[i, j], ".17g")]
                )


def write_grid_pgm(grid: GridMap, path) -> None:
    """8-bit binary PGM; image rows scan x2 from +1 down, columns x1 up.

    Values map affinely from [min, max] to [0, 255]; the raw range is kept
    in the comment line so the mapping inverts exactly.
    """
    vmin = float(grid.values.min())
    vmax = float(grid.values.max())
    if vmax > vmin:
        scaled = np.round((grid.values - vmin) / (vmax - vmin) * 255.0)
    else:
        scaled = np.zeros_like(grid.values)
    image = scaled.T[::-1, :].astype(np.uint8)  # row = x2 descending, col = x1 ascending
    header = (
        f"P5\n# min={format(vmin, '.17g')} max={format(vmax, '.17g')}\n"
        f"{grid.resolution} {grid.resolution}\n255\n"
    )
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(image.tobytes())


def write_activation_report(report: ActivationReport, out_dir) -> list[str]:
    """One z,value CSV per unit plus an operating-range CSV; returns paths."""
    from pathlib import Path

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    def _write_curve(name: str, curve: np.ndarray) -> None:
        path = out / name
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["z", "value"])
            for zi, vi in zip(report.z, curve):
                writer.writerow([format(zi, ".17g"), format(vi, ".17g")])
        written.append(str(path))

    for k, curve in enumerate(report.hidden_curves, start=1):
        _write_curve(f"activation_hidden_{k}.csv", curve)
    _write_curve("activation_output.csv", report.output_curve)

    if report.hidden_ranges or report.output_range is not None:
        path = out / "operating_ranges.csv"
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["unit", "z_min", "z_max"])
            for k, (zmin, zmax) in enumerate(report.hidden_ranges, start=1):
                writer.writerow([f"hidden_{k}", format(zmin, ".17g"), format(zmax, ".17g")])
            if report.output_range is not None:
                writer.writerow(
                    ["output", format(report.output_range[0], ".17g"), format(report.output_range[1], ".17g")]
                )
        written.append(str(path))
    return written
