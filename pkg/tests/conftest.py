import numpy as np
import pytest

B_MAX = 2.0 * np.sqrt(2.0)

#: q values exercised by the oracle-agreement and self-consistency suites
AGREEMENT_QS = (0.1, 0.5, 0.9, 1.1, 2.0, 5.0)
#: q values of the six region scans
SCAN_QS = (0.1, 0.5, 0.9, 1.5, 2.0, 5.0)


def interior_grid(nb=7, nv=7):
    """Data points strictly inside the feasible domain, away from every boundary."""
    points = []
    for u in np.linspace(0.1, 0.9, nb):
        b = B_MAX * u
        floor = B_MAX * b
        for v in np.linspace(0.1, 0.9, nv):
            points.append((b, floor + v * (8.0 - floor)))
    return points


def random_density(rng, dim=4):
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = a @ a.conj().T
    return rho / np.real(np.trace(rho))


def random_unitary(rng, dim=2):
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    qmat, r = np.linalg.qr(a)
    d = np.diagonal(r)
    return qmat * (d / np.abs(d))


def random_hermitian(rng, dim=4):
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return 0.5 * (a + a.conj().T)


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
