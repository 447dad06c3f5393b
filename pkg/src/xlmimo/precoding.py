"""
Zero-forcing precoders.

The low-complexity variant replaces ``(H H^H)^-1`` by a truncated Neumann
series around the diagonal of the Gram matrix ``A = H H^H``::

    A^-1 = sum_n (I - D^-1 A)^n D^-1,   D = diag(A)

which converges when the spectral radius of ``I - D^-1 A`` is below one.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .channels import as_matrix
from .errors import DivergenceError, InvalidArgumentError, SingularGramError

POWER_ITERATIONS = 100


@dataclass(frozen=True)
class Precoder:
    weights: np.ndarray
    method: str
    order: int | None = None

    @property
    def n_streams(self) -> int:
        return self.weights.shape[1]


def _check_full_row_rank(h: np.ndarray) -> None:
    if h.shape[0] > h.shape[1]:
        raise SingularGramError(f"more streams ({h.shape[0]}) than transmit antennas ({h.shape[1]})")
    sv = np.linalg.svd(h, compute_uv=False)
    if sv[0] == 0 or sv[-1] <= 1e-12 * sv[0]:
        raise SingularGramError("channel does not have full row rank")


def zf_exact(h) -> Precoder:
    """``W = H^H (H H^H)^-1`` via a Cholesky solve of the Gram matrix."""
    m = as_matrix(h)
    _check_full_row_rank(m)
    gram = m @ m.conj().T
    c = scipy.linalg.cho_factor(gram)
    w = m.conj().T @ scipy.linalg.cho_solve(c, np.eye(len(gram)))
    return Precoder(w, "exact")


def spectral_radius_estimate(a: np.ndarray, iterations: int = POWER_ITERATIONS, seed: int = 0) -> float:
    """Power-iteration estimate of the spectral radius of ``I - D^-1 A``.

    Iterates on the Hermitian similar matrix ``I - D^-1/2 A D^-1/2``.
    """
    d = np.real(np.diag(a))
    s = 1.0 / np.sqrt(d)
    b = np.eye(len(a)) - s[:, None] * a * s[None, :]
    v = np.random.default_rng(seed).standard_normal(len(a)) + 0j
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(iterations):
        u = b @ v
        lam = np.linalg.norm(u)
        if lam == 0:
            return 0.0
        v = u / lam
    return float(lam)


def neumann_inverse(a: np.ndarray, order: int, check: bool = True) -> np.ndarray:
    """Truncated Neumann approximation of ``A^-1`` with ``order + 1`` terms."""
    if int(order) != order or order < 0:
        raise InvalidArgumentError(f"order must be a non-negative integer, got {order}")
    d = np.real(np.diag(a))
    if np.any(np.abs(d) <= 1e-300):
        raise InvalidArgumentError("Gram matrix has a zero diagonal entry")
    if check:
        rho = spectral_radius_estimate(a)
        if rho >= 1.0:
            raise DivergenceError(f"Neumann series does not contract (spectral radius ~ {rho:.3f})")
    d_inv = np.diag(1.0 / d)
    b = np.eye(len(a)) - a / d[:, None]
    term = d_inv.astype(complex)
    total = term.copy()
    for _ in range(int(order)):
        term = b @ term
        total += term
    return total


def zf_neumann(h, order: int) -> Precoder:
    """Zero-forcing with the Gram inverse replaced by ``order + 1`` Neumann terms."""
    m = as_matrix(h)
    gram = m @ m.conj().T
    w = m.conj().T @ neumann_inverse(gram, order)
    return Precoder(w, "neumann", int(order))


def zf_residual(h, p: Precoder) -> float:
    """``||H W - I||_F``."""
    m = as_matrix(h)
    return float(np.linalg.norm(m @ p.weights - np.eye(m.shape[0])))
