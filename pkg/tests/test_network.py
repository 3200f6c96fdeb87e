"""Model construction, forward pass, and serialization."""

import numpy as np
import pytest

from dctnet.activations import FixedActivation, identity_init
from dctnet.basis import BasisConfig
from dctnet.network import (
    HIDDEN_DIRECTIONS,
    Network,
    forward,
    forward_batch,
    init_benchmark,
    init_network,
    load_model,
    predict_class,
    save_model,
)
from tests.conftest import random_adaptive_model

CFG = BasisConfig()


def example_discriminator(output_fixed: bool = True) -> Network:
    """Single neuron wired to separate x1 > x2 from x1 < x2.

    Hidden weights (0, 1, -1), one retained coefficient -1, pass-through
    output: the soft decision is sin(pi/2 (x1 - x2) + pi/(2N)).
    """
    coeffs = np.zeros((1, CFG.n_coeffs))
    coeffs[0, 0] = -1.0
    return Network(
        m0=2,
        m1=1,
        basis=CFG,
        hidden_weights=np.array([[0.0], [1.0], [-1.0]]),
        output_weights=np.array([0.0, 1.0]),
        hidden_coeffs=coeffs,
        output_fixed=FixedActivation("identity"),
        trainable_activations=False,
    )


class TestForward:
    def test_dimension_mismatch_rejected(self):
        model = init_network(seed=0)
        with pytest.raises(ValueError):
            forward(model, np.array([0.1, 0.2, 0.3]))

    def test_deterministic_trace(self):
        model = init_network(seed=1)
        x = np.array([0.25, -0.4])
        a = forward(model, x)
        b = forward(model, x)
        assert a.y_hat == b.y_hat and a.z2 == b.z2
        np.testing.assert_array_equal(a.z1, b.z1)
        np.testing.assert_array_equal(a.s1, b.s1)

    def test_trace_regenerates_from_s0(self):
        """Replaying the layer arithmetic from s0 reproduces the trace."""
        rng = np.random.default_rng(17)
        from dctnet.basis import basis_angle

        for _ in range(50):
            model = random_adaptive_model(rng)
            x = rng.uniform(-1, 1, 2)
            tr = forward(model, x)
            z1 = model.hidden_weights.T @ tr.s0
            np.testing.assert_array_equal(z1, tr.z1)
            angles = np.multiply.outer(basis_angle(z1, CFG.n), CFG.harmonics())
            s1 = np.einsum("kq,kq->k", model.hidden_coeffs, np.cos(angles))
            np.testing.assert_array_equal(s1, tr.s1[1:])
            z2 = float(model.output_weights @ tr.s1)
            assert z2 == tr.z2

    def test_zero_output_coefficients_zero_everywhere(self):
        model = init_network(seed=0)
        model.output_coeffs = np.zeros_like(model.output_coeffs)
        rng = np.random.default_rng(0)
        for _ in range(20):
            assert forward(model, rng.uniform(-1, 1, 2)).y_hat == 0.0

    def test_example_discriminator(self):
        model = example_discriminator()
        y = forward(model, np.array([1.0, 0.0])).y_hat
        assert y == pytest.approx(1.0, abs=1e-5)
        rng = np.random.default_rng(5)
        for _ in range(100):
            x = rng.uniform(-1, 1, 2)
            expected = np.sin(np.pi / 2 * (x[0] - x[1]) + np.pi / (2 * CFG.n))
            assert forward(model, x).y_hat == pytest.approx(expected, abs=1e-12)

    def test_batch_matches_scalar(self):
        rng = np.random.default_rng(23)
        for kind in ("enn", "relu", "sigm", "fdct"):
            if kind == "enn":
                model = init_network(seed=3)
            else:
                model = init_benchmark(kind, "classification", seed=3)
            pts = rng.uniform(-1, 1, (40, 2))
            batch = forward_batch(model, pts)
            single = np.array([forward(model, p).y_hat for p in pts])
            np.testing.assert_allclose(batch, single, atol=1e-14)


class TestPredictClass:
    def test_reference_points(self):
        assert predict_class(0.7) == 1.0
        assert predict_class(-0.3) == -1.0
        assert predict_class(0.0) == 1.0  # tie goes positive

    def test_antisymmetry_off_zero(self):
        rng = np.random.default_rng(9)
        y = rng.uniform(-1, 1, 100)
        y = y[y != 0]
        np.testing.assert_array_equal(predict_class(-y), -predict_class(y))


class TestInit:
    def test_direction_columns(self):
        model4 = init_network(m1=4, seed=0)
        for k in range(4):
            np.testing.assert_array_equal(model4.hidden_weights[:, k], HIDDEN_DIRECTIONS[k])
        model6 = init_network(m1=6, seed=0)
        np.testing.assert_array_equal(model6.hidden_weights[:, 4], HIDDEN_DIRECTIONS[4])
        np.testing.assert_array_equal(model6.hidden_weights[:, 5], HIDDEN_DIRECTIONS[5])

    def test_same_seed_identical(self):
        a = init_network(seed=11)
        b = init_network(seed=11)
        np.testing.assert_array_equal(a.output_weights, b.output_weights)
        np.testing.assert_array_equal(a.hidden_coeffs, b.hidden_coeffs)
        c = init_network(seed=12)
        assert not np.array_equal(a.output_weights, c.output_weights)

    def test_output_weights_within_half(self):
        model = init_network(seed=4)
        assert np.all(np.abs(model.output_weights) <= 0.5)

    def test_identity_shaped_activations(self):
        model = init_network(seed=0)
        ident = identity_init(CFG).coeffs.values
        for k in range(model.m1):
            np.testing.assert_array_equal(model.hidden_coeffs[k], ident)
        np.testing.assert_array_equal(model.output_coeffs, ident)

    def test_requires_two_inputs(self):
        with pytest.raises(ValueError):
            init_network(m0=3)

    def test_benchmark_kinds(self):
        relu = init_benchmark("relu", "classification", seed=0)
        assert relu.kind == "relu" and relu.output_fixed.kind == "sigmoid"
        relu_reg = init_benchmark("relu", "regression", seed=0)
        assert relu_reg.output_fixed.kind == "identity"
        sigm = init_benchmark("sigm", "classification", seed=0)
        assert sigm.kind == "sigm" and sigm.hidden_fixed.kind == "sigmoid"
        fdct = init_benchmark("fdct", "classification", seed=0)
        assert fdct.kind == "fdct" and not fdct.trainable_activations
        with pytest.raises(ValueError):
            init_benchmark("enn", "classification")
        with pytest.raises(ValueError):
            init_benchmark("relu", "ranking")

    def test_benchmarks_share_weights_with_adaptive(self):
        a = init_network(seed=7)
        for kind in ("relu", "sigm", "fdct"):
            b = init_benchmark(kind, "classification", seed=7)
            np.testing.assert_array_equal(a.hidden_weights, b.hidden_weights)
            np.testing.assert_array_equal(a.output_weights, b.output_weights)


class TestNearAffineAtInit:
    def test_deviation_bounded_by_propagated_truncation(self):
        """At initialization the model tracks the affine map its weights
        define, up to the ramp truncation error pushed through one layer."""
        dense = np.linspace(-3.0, 3.0, 6001)
        ident = identity_init(CFG)
        ramp_err = np.abs(ident(dense) - dense)

        def dev_within(radius: float) -> float:
            mask = np.abs(dense) <= radius + 1e-9
            return float(ramp_err[mask].max())

        slope_cap = float(
            np.pi / 2 * np.abs(ident.coeffs.values) @ CFG.harmonics()
        )
        rng = np.random.default_rng(31)
        for _ in range(100):
            model = init_network(seed=int(rng.integers(1 << 31)))
            x = rng.uniform(-0.3, 0.3, 2)
            tr = forward(model, x)
            z1_bound = float(np.abs(tr.z1).max())
            z2_affine = float(model.output_weights[0] + model.output_weights[1:] @ tr.z1)
            hidden_dev = dev_within(z1_bound) * float(np.abs(model.output_weights[1:]).sum())
            bound = slope_cap * hidden_dev + dev_within(abs(z2_affine))
            assert abs(tr.y_hat - z2_affine) <= bound + 1e-12


class TestSerialization:
    def test_round_trip_bit_exact(self, tmp_path):
        rng = np.random.default_rng(2)
        model = random_adaptive_model(rng)
        p1, p2 = tmp_path / "m1.json", tmp_path / "m2.json"
        save_model(model, p1)
        loaded = load_model(p1)
        save_model(loaded, p2)
        assert p1.read_bytes() == p2.read_bytes()
        np.testing.assert_array_equal(loaded.hidden_weights, model.hidden_weights)
        np.testing.assert_array_equal(loaded.output_coeffs, model.output_coeffs)
        x = np.array([0.3, -0.7])
        assert forward(loaded, x).y_hat == forward(model, x).y_hat

    def test_round_trip_benchmarks(self, tmp_path):
        for kind in ("relu", "sigm", "fdct"):
            model = init_benchmark(kind, "regression", seed=5)
            path = tmp_path / f"{kind}.json"
            save_model(model, path)
            loaded = load_model(path)
            assert loaded.kind == model.kind
            x = np.array([-0.2, 0.9])
            assert forward(loaded, x).y_hat == forward(model, x).y_hat

    def test_schema_is_flat_and_versioned(self, tmp_path):
        import json

        model = init_network(seed=0)
        path = tmp_path / "m.json"
        save_model(model, path)
        doc = json.loads(path.read_text())
        assert doc["schema"] == 1
        assert doc["kind"] == "enn"
        for key in ("m0", "m1", "n", "q", "hidden_weights", "output_weights", "hidden_coeffs", "output_coeffs"):
            assert key in doc
        assert len(doc["hidden_weights"]) == (model.m0 + 1) * model.m1


class TestValidation:
    def test_shape_mismatches_rejected(self):
        with pytest.raises(ValueError):
            Network(
                m0=2,
                m1=2,
                basis=CFG,
                hidden_weights=np.zeros((3, 3)),
                output_weights=np.zeros(3),
                hidden_coeffs=np.zeros((2, 6)),
                output_coeffs=np.zeros(6),
            )

    def test_activation_exactly_one_kind(self):
        with pytest.raises(ValueError):
            Network(
                m0=2,
                m1=1,
                basis=CFG,
                hidden_weights=np.zeros((3, 1)),
                output_weights=np.zeros(2),
                hidden_coeffs=np.zeros((1, 6)),
                hidden_fixed=FixedActivation("relu"),
                output_coeffs=np.zeros(6),
            )
