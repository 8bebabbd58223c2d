import numpy as np
import scipy.linalg as sla

from nhqm.integrate import rk4_adaptive, schrodinger_rhs


def test_scalar_exponential():
    y = rk4_adaptive(lambda t, y: 0.7 * y, [1.0], 0.0, 3.0)
    assert abs(y[0] - np.exp(2.1)) < 1e-9 * np.exp(2.1)


def test_matches_matrix_exponential():
    rng = np.random.default_rng(1)
    H = rng.normal(size=(4, 4)) + 0.3j * rng.normal(size=(4, 4))
    y0 = rng.normal(size=4) + 0j
    y = rk4_adaptive(schrodinger_rhs(H), y0, 0.0, 2.0)
    ref = sla.expm(-2j * H) @ y0
    assert np.linalg.norm(y - ref) <= 1e-9 * np.linalg.norm(ref)


def test_zero_span_returns_copy():
    y0 = np.array([1 + 1j])
    y = rk4_adaptive(lambda t, y: y, y0, 1.0, 1.0)
    assert y is not y0 and y[0] == y0[0]
