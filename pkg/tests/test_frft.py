import cmath
import math

import numpy as np
import pytest

from synth.errors import DimensionError, FormError, ResourceError
from synth.frft import (
    FrftParams,
    frft_angle,
    frft_apply,
    frft_bundle,
    frft_coefficients,
    frft_matrix,
    frft_order,
    frft_phase_map,
)
from synth.funcsynth import FunctionSpec, check_unitarity_lemma, interp_coefficients
from synth.matcore import dft_matrix, max_abs, spectral_function_oracle, unitarity_residual


# ---- coefficients ----

def test_coefficients_at_zero_are_identity():
    assert np.allclose(frft_coefficients(0.0).alpha, [1, 0, 0, 0], atol=1e-12)


def test_coefficients_at_quarter_period_are_shift():
    assert np.allclose(frft_coefficients(math.pi / 2).alpha, [0, 1, 0, 0], atol=1e-12)


def test_coefficients_at_half_period_are_square():
    assert np.allclose(frft_coefficients(math.pi).alpha, [0, 0, 1, 0], atol=1e-12)


@pytest.mark.parametrize("x", np.linspace(-5, 5, 11))
def test_coefficients_sum_to_one(x):
    assert abs(np.sum(frft_coefficients(x).alpha) - 1) <= 1e-12


@pytest.mark.parametrize("x", [-1.3, 0.2, 2.9])
def test_coefficients_are_2pi_periodic(x):
    a = frft_coefficients(x).alpha
    b = frft_coefficients(x + 2 * math.pi).alpha
    assert max_abs(a - b) <= 1e-12


@pytest.mark.parametrize("x", np.linspace(-2 * math.pi, 2 * math.pi, 41))
def test_closed_forms_match_independent_interpolation(x):
    # nodes 1, i, -1, -i; samples written out instead of going through FunctionSpec.frft
    samples = [1, cmath.exp(1j * x), cmath.exp(2j * x), cmath.exp(-1j * x)]
    interp = interp_coefficients(FunctionSpec.from_samples(samples), 4, 1).alpha
    assert max_abs(frft_coefficients(x).alpha - interp) <= 1e-10


@pytest.mark.parametrize("x", np.linspace(-2 * math.pi, 2 * math.pi, 41))
def test_closed_forms_give_unitary_mixing_block(x):
    report = check_unitarity_lemma(frft_coefficients(x))
    assert report.max_row_norm_deviation <= 1e-10
    assert report.max_offdiag_inner <= 1e-10


def test_phase_map():
    x = 0.7
    phases = frft_phase_map(x)
    assert phases[1] == pytest.approx(1)
    assert phases[1j] == pytest.approx(cmath.exp(1j * x))
    assert phases[-1] == pytest.approx(cmath.exp(2j * x))
    assert phases[-1j] == pytest.approx(cmath.exp(-1j * x))


def test_order_angle_conversion():
    assert frft_order(math.pi / 2) == pytest.approx(1.0)
    assert frft_angle(1.0) == pytest.approx(math.pi / 2)
    assert FrftParams.from_order(3, 0.5).x == pytest.approx(math.pi / 4)
    assert FrftParams(3, math.pi).order == pytest.approx(2.0)


def test_bundle_shapes():
    bundle = frft_bundle(0.3)
    assert (bundle.m, bundle.mu) == (4, 2)
    assert unitarity_residual(bundle.M) <= 1e-10


# ---- params ----

def test_params_validation():
    with pytest.raises(DimensionError):
        FrftParams(0, 0.1)
    with pytest.raises(ResourceError):
        FrftParams(11, 0.1)
    with pytest.raises(FormError):
        FrftParams(3, float("nan"))


# ---- apply / matrix ----

def test_apply_zero_angle_is_identity(random_state):
    psi = random_state(8)
    assert max_abs(frft_apply(FrftParams(3, 0.0), psi) - psi) <= 1e-9


def test_apply_quarter_period_on_basis_state():
    e0 = np.zeros(8, dtype=complex)
    e0[0] = 1
    out = frft_apply(FrftParams(3, math.pi / 2), e0)
    assert max_abs(out - np.full(8, 2**-1.5)) <= 1e-9


def test_apply_matches_oracle(random_state):
    F3 = dft_matrix(3)
    expected = spectral_function_oracle(F3, FunctionSpec.frft(math.pi / 4))
    params = FrftParams(3, math.pi / 4)
    for _ in range(20):
        psi = random_state(8)
        assert max_abs(frft_apply(params, psi) - expected @ psi) <= 1e-8


def test_apply_rejects_wrong_size():
    with pytest.raises(DimensionError):
        frft_apply(FrftParams(3, 0.2), np.ones(4) / 2)


def test_acceptance_grid_on_f3(random_state):
    F3 = dft_matrix(3)
    for x in np.linspace(-3, 3, 10):
        expected = spectral_function_oracle(F3, FunctionSpec.frft(x))
        params = FrftParams(3, x)
        for _ in range(20):
            psi = random_state(8)
            assert max_abs(frft_apply(params, psi) - expected @ psi) <= 1e-8


def test_matrix_is_additive(rng):
    for _ in range(25):
        x, y = rng.uniform(-3, 3, size=2)
        lhs = frft_matrix(FrftParams(3, x)) @ frft_matrix(FrftParams(3, y))
        assert max_abs(lhs - frft_matrix(FrftParams(3, x + y))) <= 1e-7


def test_matrix_is_unitary(rng):
    for x in rng.uniform(-4, 4, size=50):
        assert unitarity_residual(frft_matrix(FrftParams(3, x))) <= 1e-8


def test_matrix_half_period_is_f3_squared():
    F3 = dft_matrix(3)
    assert max_abs(frft_matrix(FrftParams(3, math.pi)) - F3 @ F3) <= 1e-8


@pytest.mark.parametrize("x", [-2.0, -0.4, 0.3, 1.1, 2.7])
def test_small_register_goes_through_extension(x):
    F2 = dft_matrix(2)
    expected = spectral_function_oracle(F2, FunctionSpec.frft(x))
    assert max_abs(frft_matrix(FrftParams(2, x)) - expected) <= 1e-8


def test_single_qubit():
    H = dft_matrix(1)
    assert max_abs(frft_matrix(FrftParams(1, math.pi / 2)) - H) <= 1e-8
    expected = spectral_function_oracle(H, FunctionSpec.frft(0.6))
    assert max_abs(frft_matrix(FrftParams(1, 0.6)) - expected) <= 1e-8
