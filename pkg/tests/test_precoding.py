import math

import numpy as np
import pytest

from xlmimo.errors import DivergenceError, InvalidArgumentError, SingularGramError
from xlmimo.precoding import (neumann_inverse, spectral_radius_estimate, zf_exact, zf_neumann,
                              zf_residual)


def cgauss(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)


def users(k=8, n=256, seed=0):
    return cgauss(np.random.default_rng(seed), (k, n))


def test_exact_identity():
    np.testing.assert_allclose(zf_exact(np.eye(4)).weights, np.eye(4), atol=1e-15)


@pytest.mark.parametrize("shape", [(1, 3), (4, 64), (8, 256), (5, 5)])
def test_exact_residual(shape):
    h = users(*shape, seed=sum(shape))
    assert zf_residual(h, zf_exact(h)) < 1e-9


def test_exact_matches_least_squares_path():
    h = users(4, 64, seed=7)
    w = zf_exact(h).weights
    # minimum-norm solution of H W = I via SVD-based lstsq
    ref, *_ = np.linalg.lstsq(h, np.eye(4), rcond=None)
    np.testing.assert_allclose(w, ref, atol=1e-9)


def test_exact_rejects_rank_deficient():
    h = users(3, 10)
    h[2] = h[0]
    with pytest.raises(SingularGramError):
        zf_exact(h)
    with pytest.raises(SingularGramError):
        zf_exact(users(5, 3))


def test_neumann_diagonal_gram_is_exact_at_order_zero():
    # orthogonal user channels: rows of a scaled unitary
    q, _ = np.linalg.qr(cgauss(np.random.default_rng(1), (32, 32)))
    h = np.diag([1.0, 2.0, 0.5, 3.0]) @ q[:4]
    w0 = zf_neumann(h, 0).weights
    assert np.linalg.norm(w0 - zf_exact(h).weights) < 1e-12


def test_neumann_error_strictly_decreasing():
    h = users()
    exact = zf_exact(h).weights
    errs = [np.linalg.norm(zf_neumann(h, order).weights - exact) for order in range(7)]
    assert np.all(np.diff(errs) < 0)


def test_neumann_residual_geometric_decay():
    h = users(seed=3)
    rho = spectral_radius_estimate(h @ h.conj().T)
    assert rho < 1
    res = [zf_residual(h, zf_neumann(h, order)) for order in range(1, 7)]
    ratios = np.array(res[1:]) / np.array(res[:-1])
    assert np.all(ratios <= rho + 0.1)


def test_neumann_reaches_exact_beyond_critical_order():
    h = users(seed=4)
    rho = spectral_radius_estimate(h @ h.conj().T)
    assert rho < 0.9
    order = math.ceil(math.log(1e-6) / math.log(rho))
    diff = zf_neumann(h, order).weights - zf_exact(h).weights
    assert np.linalg.norm(diff) / np.linalg.norm(zf_exact(h).weights) < 1e-6


def test_spectral_radius_estimate_matches_eigenvalues():
    h = users(seed=5)
    a = h @ h.conj().T
    b = np.eye(8) - a / np.real(np.diag(a))[:, None]
    ref = np.max(np.abs(np.linalg.eigvals(b)))
    assert spectral_radius_estimate(a) == pytest.approx(ref, rel=1e-3)


def test_neumann_diverges_for_correlated_users():
    rng = np.random.default_rng(6)
    base = cgauss(rng, (1, 256))
    h = base + 0.05 * cgauss(rng, (8, 256))
    rho = spectral_radius_estimate(h @ h.conj().T)
    assert rho >= 1
    with pytest.raises(DivergenceError):
        zf_neumann(h, 3)


def test_neumann_argument_checks():
    with pytest.raises(InvalidArgumentError):
        neumann_inverse(np.eye(2), -1)
    with pytest.raises(InvalidArgumentError):
        neumann_inverse(np.array([[0.0, 1.0], [1.0, 2.0]]), 1)


def test_precoder_metadata():
    p = zf_neumann(users(), 4)
    assert p.method == "neumann" and p.order == 4 and p.n_streams == 8
    assert zf_exact(users()).method == "exact"
