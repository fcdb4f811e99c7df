import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from mgpmix import (HueslerReiss, MgpPoint, density_oracle, face_log_density, face_mass,
                    face_masses, log_density, log_density_dense)
from mgpmix.density import hr_log_exponent_density

from conftest import exchangeable_variogram, triangular_logistic


def test_singleton_face_value(logistic_model):
    p = MgpPoint((2,), [0.0])
    assert log_density(logistic_model, p) == pytest.approx(np.log((1 / 3) / logistic_model.ell_one),
                                                           rel=1e-14)
    assert np.exp(log_density(logistic_model, p)) == pytest.approx(0.15869, abs=1e-4)
    # a * exp(-y) / l(1) on the singleton face
    q = MgpPoint((2,), [1.5])
    assert log_density(logistic_model, q) == pytest.approx(np.log(1 / 3) - 1.5 - np.log(logistic_model.ell_one))


def test_off_support_is_minus_inf(any_model):
    # all coordinates non-positive
    assert log_density(any_model, MgpPoint((0, 1, 2), [-0.1, -2.0, -1e-9])) == -np.inf
    # support that is not a signature
    assert log_density(any_model, MgpPoint((0,), [1.0])) == -np.inf
    assert log_density(any_model, MgpPoint((0, 2), [1.0, 0.5])) == -np.inf
    assert density_oracle(any_model, MgpPoint((0, 2), [1.0, 0.5])) == 0.0


def test_mgp_point_validation():
    with pytest.raises(ValueError):
        MgpPoint((0, 1), [1.0])
    with pytest.raises(ValueError):
        MgpPoint((0, 1), [1.0, -np.inf])
    p = MgpPoint.from_dense([-np.inf, 0.3, 1.0])
    assert p.support == (1, 2)
    np.testing.assert_array_equal(p.to_dense(3), [-np.inf, 0.3, 1.0])


def _grid_points(sig, n, seed):
    rng = np.random.default_rng(seed)
    vals = rng.uniform(-3, 3, size=(n, len(sig)))
    vals[:, rng.integers(len(sig), size=n) if len(sig) > 1 else 0] = 0.0
    vals[np.arange(n), rng.integers(len(sig), size=n)] = rng.uniform(0.01, 4, n)
    return vals


@pytest.mark.parametrize("fixture", ["logistic_model", "hr_model", "mixed_model"])
def test_closed_form_matches_oracle(request, fixture):
    model = request.getfixturevalue(fixture)
    tol = 1e-6
    for i, sig in enumerate(set(model.signatures)):
        for vals in _grid_points(sig, 6, i):
            p = MgpPoint(sig, vals)
            exact = np.exp(log_density(model, p))
            oracle = density_oracle(model, p)
            assert abs(exact - oracle) <= tol * max(1.0, exact)


def test_oracle_does_not_depend_on_masses():
    a = triangular_logistic()
    b = triangular_logistic(masses=[0.6, 0.3, 0.1])
    for sig, vals in [((0, 1, 2), [0.3, -0.5, 1.2]), ((1, 2), [-1.0, 0.4]), ((2,), [2.0])]:
        p = MgpPoint(sig, vals)
        assert density_oracle(a, p) == pytest.approx(density_oracle(b, p), rel=1e-7)
        assert log_density(a, p) == pytest.approx(log_density(b, p), rel=1e-13)


def test_dense_matches_points(mixed_model):
    rows = np.array([[0.5, 1.0, -np.inf, -np.inf],
                     [-np.inf, 0.2, -1.0, -np.inf],
                     [-np.inf, 0.2, -1.0, 0.3],
                     [0.5, -np.inf, -np.inf, -np.inf],
                     [-0.5, -1.0, -np.inf, -np.inf]])
    dense = log_density_dense(mixed_model, rows)
    for row, val in zip(rows, dense):
        assert val == pytest.approx(log_density(mixed_model, MgpPoint.from_dense(row)), rel=1e-14)
    assert dense[3] == -np.inf and dense[4] == -np.inf


def test_duplicate_signature_terms_add(mixed_model):
    # the face {1,2} collects columns 0 and 2
    vals = np.array([[0.4, -0.2]])
    total = face_log_density(mixed_model, (0, 1), vals)[0]
    assert np.isfinite(total)
    assert face_mass(mixed_model, 0) == pytest.approx(mixed_model.weights[0] + mixed_model.weights[2])
    assert sum(face_masses(mixed_model).values()) == pytest.approx(1.0, abs=1e-12)


def test_singleton_face_normalization(any_model):
    val, _ = integrate.quad(lambda y: np.exp(log_density(any_model, MgpPoint((2,), [y]))), 0, np.inf)
    assert val == pytest.approx(any_model.weights[2], abs=1e-9)


def test_pair_face_normalization(any_model):
    def f(y2, y1):
        return np.exp(face_log_density(any_model, (1, 2), [[y1, y2]])[0])

    # region max(y) > 0 split into y1 > 0 and {y1 <= 0, y2 > 0}
    a, _ = integrate.dblquad(f, 0, 40, -40, 40, epsabs=1e-8)
    b, _ = integrate.dblquad(f, -40, 0, 0, 40, epsabs=1e-8)
    assert a + b == pytest.approx(any_model.weights[1], abs=1e-4)


@given(st.lists(st.floats(-5, 5), min_size=3, max_size=3), st.sampled_from([0, 1, 2]))
@settings(max_examples=50, deadline=None)
def test_hr_anchor_invariance(x, anchor):
    g = np.array([[0.0, 0.8, 1.5], [0.8, 0.0, 1.1], [1.5, 1.1, 0.0]])
    fam = HueslerReiss(g)
    base = hr_log_exponent_density(np.array(x), fam)
    assert hr_log_exponent_density(np.array(x), fam, anchor=anchor) == pytest.approx(base, abs=1e-10)


def test_hr_bivariate_exponent_density_closed_form():
    # lambda(x) for d = 2: exp(-x2) * phi((x1 - x2 + g/2) / sqrt(g)) / sqrt(g)
    g = 0.9
    fam = HueslerReiss(exchangeable_variogram(2, g))
    x = np.array([0.3, -0.4])
    z = (x[0] - x[1] + g / 2) / np.sqrt(g)
    expected = -x[1] - 0.5 * z * z - 0.5 * np.log(2 * np.pi * g)
    assert hr_log_exponent_density(x, fam) == pytest.approx(expected, rel=1e-13)


@given(st.lists(st.floats(-3, 3), min_size=3, max_size=3), st.floats(0, 5))
@settings(max_examples=50, deadline=None)
def test_shift_decay(any_model, vals, c):
    vals = np.array(vals)
    vals[np.argmax(vals)] = abs(vals.max()) + 0.01
    base = face_log_density(any_model, (0, 1, 2), vals[None])[0]
    moved = face_log_density(any_model, (0, 1, 2), (vals + c)[None])[0]
    assert moved == pytest.approx(base - c, abs=1e-9)
