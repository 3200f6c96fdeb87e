"""Cosine basis functions and the truncated transform behind the adaptive
activations.

A univariate function f on [-1, 1] sampled at the N points x_n = 2n/N - 1
is expanded in the type-II cosine basis

    c_k[n] = cos(pi * k * (2n + 1) / (2N)),    k = 0 .. N-1,

which is orthogonal on that grid.  Only the odd harmonics k = 2q - 1 are
retained (Q/2 of them, q = 1 .. Q/2).  The continuous extension of a
retained basis function is

    cos_basis(q, x, N) = cos(pi * (2q-1) * (N(x+1) + 1) / (2N)),

whose value at x_n is exactly c_{2q-1}[n].  Every function synthesized
from the retained set is periodic in x with period 4, bounded by the sum
of absolute coefficient values, and antisymmetric about x = -1/N (the
half-sample phase inside the basis shifts the odd-symmetry center away
from 0 by one grid step).

Normalization gains (1/sqrt(N) for k = 0, sqrt(2/N) otherwise) are folded
into the stored coefficients, so synthesis is a plain weighted sum of
cos_basis values and analysis is the matching grid inner product.  Analysis is a direct
O(N^2) summation by design: at N = 512 a fast transform buys nothing and
the naive sum is self-evidently correct.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "BasisConfig",
    "DctCoefficients",
    "basis_angle",
    "cos_basis",
    "sin_basis",
    "synthesize",
    "synthesize_slope",
    "analyze",
    "full_spectrum",
    "truncation_tail",
    "write_coeffs_csv",
    "read_coeffs_csv",
]


@dataclass(frozen=True)
class BasisConfig:
    """Grid length and coefficient budget for one activation function.

    `n` is the number of grid samples; `q` is the total harmonic budget,
    of which only the odd half (q // 2 coefficients) is ever stored.
    """

    n: int = 512
    q: int = 12

    def __post_init__(self) -> None:
        if self.q < 2 or self.q % 2 != 0:
            raise ValueError(f"coefficient budget must be even and >= 2, got {self.q}")
        if self.n < self.q:
            raise ValueError(f"grid length {self.n} must be >= coefficient budget {self.q}")

    @property
    def n_coeffs(self) -> int:
        return self.q // 2

    def harmonics(self) -> np.ndarray:
        """Retained harmonic indices 1, 3, ..., q - 1."""
        return np.arange(1, self.q, 2, dtype=float)

    def sample_grid(self) -> np.ndarray:
        """Analysis grid x_n = 2n/N - 1, n = 0 .. N-1."""
        return 2.0 * np.arange(self.n) / self.n - 1.0


@dataclass(frozen=True)
class DctCoefficients:
    """Folded-gain coefficients of the retained odd harmonics.

    values[i] weights harmonic 2(i+1) - 1; all values must be finite.
    """

    values: np.ndarray
    config: BasisConfig

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if vals.shape != (self.config.n_coeffs,):
            raise ValueError(
                f"expected {self.config.n_coeffs} coefficients, got shape {vals.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("coefficients must be finite")


def basis_angle(x, n: int):
    """Phase u(x) such that the q-th basis function is cos((2q-1) * u(x))."""
    x = np.asarray(x, dtype=float)
    return (np.pi / (2.0 * n)) * (n * (x + 1.0) + 1.0)


def cos_basis(q, x, n: int):
    """Continuous basis function of harmonic 2q - 1 on the length-n grid."""
    return np.cos((2.0 * np.asarray(q, dtype=float) - 1.0) * basis_angle(x, n))


def sin_basis(q, x, n: int):
    """Quadrature companion of cos_basis; appears in every slope formula."""
    return np.sin((2.0 * np.asarray(q, dtype=float) - 1.0) * basis_angle(x, n))


def synthesize(coeffs: DctCoefficients, x):
    """Evaluate sum_q F_q cos_basis(q, x) at scalar or array x."""
    u = basis_angle(x, coeffs.config.n)
    angles = np.multiply.outer(u, coeffs.config.harmonics())
    return np.cos(angles) @ coeffs.values


def synthesize_slope(coeffs: DctCoefficients, x):
    """Derivative of synthesize with respect to x.

    d/dx cos_basis(q, x) = -(pi/2) (2q-1) sin_basis(q, x), so the slope is
    -(pi/2) sum_q F_q (2q-1) sin_basis(q, x).
    """
    h = coeffs.config.harmonics()
    u = basis_angle(x, coeffs.config.n)
    angles = np.multiply.outer(u, h)
    return -(np.pi / 2.0) * (np.sin(angles) @ (coeffs.values * h))


@lru_cache(maxsize=8)
def _analysis_matrix(n: int) -> np.ndarray:
    # Orthonormal row k: g_k * cos(pi k (2j+1) / (2n)); direct summation oracle.
    k = np.arange(n, dtype=float)[:, None]
    j = np.arange(n, dtype=float)[None, :]
    m = np.cos(np.pi * k * (2.0 * j + 1.0) / (2.0 * n))
    gains = np.full(n, np.sqrt(2.0 / n))
    gains[0] = np.sqrt(1.0 / n)
    return gains[:, None] * m


def full_spectrum(samples) -> np.ndarray:
    """All n orthonormal transform coefficients of a length-n sample vector."""
    s = np.asarray(samples, dtype=float)
    if s.ndim != 1:
        raise ValueError("samples must be a 1-D vector")
    return _analysis_matrix(s.size) @ s


def analyze(samples, q: int, n: int | None = None) -> DctCoefficients:
    """Project grid samples onto the retained odd harmonics.

    Computes the full length-n transform by direct summation, keeps the
    coefficients at harmonics 1, 3, ..., q-1 with the normalization gain
    folded in, and returns them ordered by increasing harmonic.
    """
    s = np.asarray(samples, dtype=float)
    if s.ndim != 1:
        raise ValueError("samples must be a 1-D vector")
    if n is not None and s.size != n:
        raise ValueError(f"expected {n} samples, got {s.size}")
    config = BasisConfig(n=s.size, q=q)
    spectrum = full_spectrum(s)
    odd = np.arange(1, q, 2)
    values = np.sqrt(2.0 / s.size) * spectrum[odd]
    return DctCoefficients(values=values, config=config)


def truncation_tail(samples, q: int, n: int | None = None) -> float:
    """Root-sum-square of the transform coefficients analyze discards.

    By Parseval this equals the grid 2-norm of the projection residual,
    so it upper-bounds the max grid error of synthesize(analyze(f)).
    """
    s = np.asarray(samples, dtype=float)
    if s.ndim != 1:
        raise ValueError("samples must be a 1-D vector")
    if n is not None and s.size != n:
        raise ValueError(f"expected {n} samples, got {s.size}")
    BasisConfig(n=s.size, q=q)  # reuse the budget validation
    spectrum = full_spectrum(s)
    keep = np.zeros(s.size, dtype=bool)
    keep[np.arange(1, q, 2)] = True
    return float(np.sqrt(np.sum(spectrum[~keep] ** 2)))


def write_coeffs_csv(coeffs: DctCoefficients, path) -> None:
    """One row per coefficient, columns harmonic,value, full precision."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["harmonic", "value"])
        for harmonic, value in zip(coeffs.config.harmonics(), coeffs.values):
            writer.writerow([int(harmonic), format(value, ".17g")])


def read_coeffs_csv(path, n: int = 512) -> DctCoefficients:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if rows[0] != ["harmonic", "value"]:
        raise ValueError(f"unexpected header {rows[0]!r} in {path}")
    values = [float(value) for _, value in rows[1:]]
    return DctCoefficients(values=np.array(values), config=BasisConfig(n=n, q=2 * len(values)))
