#!/usr/bin/env python3
"""Regenerate the frozen reference vectors under tests/golden/.

The oracle route is scipy's orthonormal type-II DCT, deliberately distinct
from the package's own direct-summation analysis, so the goldens stay
independent of the code they check.  Scalar reference values are written
to golden_scalars.json with full precision.
"""

import json
from pathlib import Path

import numpy as np
from scipy.fft import dct as scipy_dct

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"

N = 512
Q = 12
GRID = 2.0 * np.arange(N) / N - 1.0


def oracle_analyze(samples: np.ndarray, q: int) -> tuple[np.ndarray, float]:
    """Odd-harmonic folded coefficients and discarded-coefficient RSS."""
    spectrum = scipy_dct(samples, type=2, norm="ortho")
    odd = np.arange(1, q, 2)
    coeffs = np.sqrt(2.0 / samples.size) * spectrum[odd]
    keep = np.zeros(samples.size, dtype=bool)
    keep[odd] = True
    tail = float(np.sqrt(np.sum(spectrum[~keep] ** 2)))
    return coeffs, tail


def oracle_synth(coeffs: np.ndarray, x: np.ndarray) -> np.ndarray:
    harmonics = 2.0 * np.arange(1, coeffs.size + 1) - 1.0
    angles = np.multiply.outer(np.pi * (N * (x + 1.0) + 1.0) / (2.0 * N), harmonics)
    return np.cos(angles) @ coeffs


def write_coeff_csv(path: Path, coeffs: np.ndarray) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("harmonic,value\n")
        for i, value in enumerate(coeffs):
            fh.write(f"{2 * i + 1},{format(value, '.17g')}\n")


def main() -> None:
    GOLDEN.mkdir(parents=True, exist_ok=True)
    scalars = {}

    ramp_coeffs, ramp_tail = oracle_analyze(GRID, Q)
    write_coeff_csv(GOLDEN / "ramp_coeffs_n512_q12.csv", ramp_coeffs)
    scalars["ramp_tail_q12"] = ramp_tail
    scalars["ramp_tail_q20"] = oracle_analyze(GRID, 20)[1]

    dense = np.linspace(-1.0, 1.0, 4001)
    inner = dense[np.abs(dense) <= 0.9]
    scalars["identity_eval_at_0"] = float(oracle_synth(ramp_coeffs, np.zeros(1))[0])
    scalars["identity_max_dev_inner"] = float(np.max(np.abs(oracle_synth(ramp_coeffs, inner) - inner)))
    scalars["identity_max_dev_full"] = float(np.max(np.abs(oracle_synth(ramp_coeffs, dense) - dense)))

    sigmoid = 2.0 / (1.0 + np.exp(-4.0 * GRID)) - 1.0
    sig_coeffs, sig_tail = oracle_analyze(sigmoid, Q)
    write_coeff_csv(GOLDEN / "sigmoid4_coeffs_n512_q12.csv", sig_coeffs)
    scalars["sigmoid4_tail_q12"] = sig_tail
    sig_dense = 2.0 / (1.0 + np.exp(-4.0 * dense)) - 1.0
    scalars["sigmoid4_max_dev_full"] = float(np.max(np.abs(oracle_synth(sig_coeffs, dense) - sig_dense)))

    with open(GOLDEN / "golden_scalars.json", "w") as fh:
        json.dump(scalars, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote goldens to {GOLDEN}")
    for key, value in sorted(scalars.items()):
        print(f"  {key} = {value:.17g}")


if __name__ == "__main__":
    main()
