import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("numeric", deadline=None, max_examples=200)
settings.load_profile("numeric")

GOLDEN_DIR = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def golden_scalars() -> dict:
    with open(GOLDEN_DIR / "golden_scalars.json") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return GOLDEN_DIR


def random_adaptive_model(rng: np.random.Generator, m1: int = 6, coeff_scale: float = 0.7):
    """A model with random weights and coefficients, for property tests."""
    from dctnet import init_network

    model = init_network(m1=m1, seed=int(rng.integers(1 << 31)))
    model.hidden_weights = rng.uniform(-1.0, 1.0, model.hidden_weights.shape)
    model.output_weights = rng.uniform(-1.0, 1.0, model.output_weights.shape)
    model.hidden_coeffs = rng.uniform(-coeff_scale, coeff_scale, model.hidden_coeffs.shape)
    model.output_coeffs = rng.uniform(-coeff_scale, coeff_scale, model.output_coeffs.shape)
    return model
