import numpy as np
import pytest

from qsle import bell_state, ghz_state, w_state


@pytest.fixture
def bell():
    return bell_state()


@pytest.fixture
def ghz3():
    return ghz_state(3)


@pytest.fixture
def w3():
    return w_state(3)


def random_unitary(d, rng):
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_hermitian(d, rng):
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (z + z.conj().T) / 2
