import math

import numpy as np
import pytest

from crgauss.embed import (
    PoleError,
    QuadraticForm,
    SamplingError,
    defining_residual,
    random_quadratic_form,
    sample_hypersurface,
    sample_points,
    sphere_residual,
    webster_map,
)

Z0 = QuadraticForm(np.zeros((3, 3)))
Z1SQ = QuadraticForm(np.diag([1, 0, 0]))
E1 = np.array([1, 0, 0], dtype=complex)
PT = np.array([1 / math.sqrt(3), 0, 0], dtype=complex)


def test_defining_residual_examples():
    assert defining_residual(Z0, E1) == 0
    assert defining_residual(Z1SQ, PT) == pytest.approx(0, abs=1e-15)
    assert defining_residual(Z0, np.zeros(3)) == -1


def test_webster_map_examples():
    z = np.array([0.3, 0.1j, -0.5])
    np.testing.assert_array_equal(webster_map(Z0, z), [0.3, 0.1j, -0.5, 0])
    np.testing.assert_allclose(webster_map(Z1SQ, PT), [math.sqrt(3) / 2, 0, 0, 0.5], atol=1e-15)
    with pytest.raises(PoleError) as err:
        webster_map(Z1SQ, E1)
    assert err.value.bz == 1


def test_pole_detected_inside_a_batch():
    with pytest.raises(PoleError):
        webster_map(Z1SQ, np.array([PT, E1]))


def test_sphere_residual_examples():
    assert sphere_residual(Z0, E1) == 0
    assert sphere_residual(Z1SQ, PT) == pytest.approx(0, abs=1e-15)
    with pytest.raises(PoleError):
        sphere_residual(Z1SQ, E1)


def test_scaled_residual_identity(rng):
    Q = random_quadratic_form(3, rng)
    z = 1.5 * (rng.standard_normal((10_000, 3)) + 1j * rng.standard_normal((10_000, 3))) / 2
    lhs = sphere_residual(Q, z)
    rhs = defining_residual(Q, z) / np.abs(1 - Q(z)) ** 2
    scale = np.maximum(1.0, np.abs(lhs))
    assert np.max(np.abs(lhs - rhs) / scale) <= 1e-12


def test_sample_hypersurface_examples(rng):
    d = np.array([0.6, 0.8j, 0])
    np.testing.assert_allclose(sample_hypersurface(Z0, d, rng), d, atol=1e-15)
    np.testing.assert_allclose(sample_hypersurface(Z1SQ, E1, rng), PT, atol=1e-15)
    with pytest.raises(ValueError):
        sample_hypersurface(Z0, np.zeros(3), rng)


def test_negative_radicand_triggers_resample(rng):
    Q = QuadraticForm(np.diag([-0.6, 0, 0]))
    z = sample_hypersurface(Q, E1, rng)
    # E1 has radicand 1 - 1.2 < 0, so the returned point comes from a fresh ray
    assert abs(z[1]) + abs(z[2]) > 0
    assert abs(defining_residual(Q, z)) <= 1e-12


def test_sampling_gives_up():
    Q = QuadraticForm(np.diag([-0.6, 0, 0]))
    with pytest.raises(SamplingError):
        sample_hypersurface(Q, E1, np.random.default_rng(0), max_resamples=0)
    # every ray is rejected when the floor is unreachable
    with pytest.raises(SamplingError):
        sample_points(Z0, 10, np.random.default_rng(0), s_floor=math.inf, max_resamples=3)


def test_points_lie_on_the_hypersurface(rng):
    for _ in range(5):
        Q = random_quadratic_form(3, rng)
        z = sample_points(Q, 10_000, rng)
        assert np.max(np.abs(defining_residual(Q, z))) <= 1e-12
        assert np.max(np.abs(sphere_residual(Q, z))) <= 1e-9


def test_sampling_is_reproducible():
    Q = random_quadratic_form(3, np.random.default_rng(1))
    a = sample_points(Q, 100, np.random.default_rng(5))
    b = sample_points(Q, 100, np.random.default_rng(5))
    np.testing.assert_array_equal(a, b)


def test_random_form_respects_norm_bound(rng):
    for n in (1, 2, 5):
        Q = random_quadratic_form(n, rng, max_norm=0.3)
        assert 0 < Q.norm() <= 0.3 + 1e-15
        np.testing.assert_array_equal(Q.B, Q.B.T)


def test_quadratic_form_validation_and_json():
    with pytest.raises(ValueError):
        QuadraticForm(np.array([[0, 1], [0, 0]]))
    with pytest.raises(ValueError):
        QuadraticForm(np.zeros((2, 3)))
    Q = QuadraticForm(np.array([[0.1, 0.2j], [0.2j, -0.3]]))
    back = QuadraticForm.from_json(Q.to_json())
    np.testing.assert_array_equal(back.B, Q.B)
    with pytest.raises(ValueError):
        QuadraticForm.from_json({"n": 3, "B": Q.to_json()["B"]})
    assert Q([1, 1]) == pytest.approx(0.1 + 0.4j - 0.3)
