import numpy as np
import pytest
from hypothesis import settings

from rhoengine import hermitian_from_matrix

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]])
SZ = np.diag([1.0, -1.0]).astype(complex)


def rand_herm(dim, rng, label=""):
    Z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return hermitian_from_matrix(0.5 * (Z + Z.conj().T), label=label)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def paulis():
    return tuple(hermitian_from_matrix(M, label=l) for M, l in ((SX, "sx"), (SY, "sy"), (SZ, "sz")))
