import numpy as np
import pytest

from synth.matcore import dft_matrix


def _random_unitary(rng, dim):
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases[np.newaxis, :]


def _random_state(rng, dim):
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def dft():
    return dft_matrix


@pytest.fixture
def random_unitary(rng):
    return lambda dim: _random_unitary(rng, dim)


@pytest.fixture
def random_state(rng):
    return lambda dim: _random_state(rng, dim)
