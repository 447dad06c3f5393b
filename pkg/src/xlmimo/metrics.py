"""Degrees-of-freedom and capacity metrics for channel matrices."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .channels import as_matrix
from .em import DEFAULT_WAVE, WaveParams
from .errors import InvalidArgumentError, UndefinedMetricError

DEFAULT_RANK_THRESHOLD = 1e-10
_NEGLIGIBLE_GAIN = 1e-290


@dataclass(frozen=True)
class EdofReport:
    edof: float
    trace_R: float
    frobenius_R: float
    rank: int
    singular_values: np.ndarray


def _gram(h: np.ndarray) -> np.ndarray:
    # the smaller Gram shares all nonzero eigenvalues with H H^H
    return h @ h.conj().T if h.shape[0] <= h.shape[1] else h.conj().T @ h


def edof_value(h) -> float:
    """``(tr R / ||R||_F)^2`` with ``R = H H^H``, without a decomposition."""
    m = as_matrix(h)
    if m.size == 0 or not np.all(np.isfinite(m)):
        raise InvalidArgumentError("EDoF needs a non-empty finite matrix")
    r = _gram(m)
    fro2 = float(np.sum(r.real**2 + r.imag**2))
    if fro2 == 0:
        raise UndefinedMetricError("EDoF of the all-zero matrix is undefined")
    return float(np.trace(r).real ** 2 / fro2)


def edof(h, rank_threshold: float = DEFAULT_RANK_THRESHOLD) -> EdofReport:
    """Effective degrees of freedom of a channel and its singular spectrum."""
    m = as_matrix(h)
    value = edof_value(m)
    r = _gram(m)
    sv = np.linalg.svd(m, compute_uv=False)
    rank = int(np.count_nonzero(sv >= rank_threshold * sv[0]))
    return EdofReport(value, float(np.trace(r).real), float(np.linalg.norm(r)), rank, sv)


def dof_rank(h, rel_threshold: float = DEFAULT_RANK_THRESHOLD) -> int:
    """Number of singular values at or above ``rel_threshold * sigma_max``."""
    if not 0 < rel_threshold < 1:
        raise InvalidArgumentError(f"threshold must lie in (0, 1), got {rel_threshold}")
    sv = np.linalg.svd(as_matrix(h), compute_uv=False)
    if sv.size == 0 or sv[0] == 0:
        return 0
    return int(np.count_nonzero(sv >= rel_threshold * sv[0]))


def dof_approx(kind: Literal["linear", "surface"], size_tx: float, size_rx: float,
               distance: float, w: WaveParams = DEFAULT_WAVE) -> float:
    """Paraxial DoF estimate with unit proportionality constant.

    ``linear``: lengths, ``L_T L_R / (lambda d)``.
    ``surface``: areas, ``A_T A_R / (lambda d)^2``.
    Only meaningful when ``distance`` is large next to the apertures.
    """
    if min(size_tx, size_rx, distance) <= 0:
        raise InvalidArgumentError("sizes and distance must be positive")
    if kind == "linear":
        return size_tx * size_rx / (w.wavelength * distance)
    if kind == "surface":
        return size_tx * size_rx / (w.wavelength * distance) ** 2
    raise InvalidArgumentError(f"unknown kind {kind!r}")


def waterfilling(gains: np.ndarray, total_power: float) -> np.ndarray:
    """Power per eigenmode maximizing ``sum log2(1 + p_i g_i)``.

    ``gains`` are the effective SNR gains ``sigma_i^2 / noise``.
    """
    g = np.asarray(gains, dtype=float)
    p = np.zeros_like(g)
    if total_power <= 0:
        raise InvalidArgumentError("total power must be positive")
    pos = np.flatnonzero(g > _NEGLIGIBLE_GAIN)
    if pos.size == 0:
        return p
    order = pos[np.argsort(-g[pos])]
    inv = 1.0 / g[order]  # ascending water floors
    # budget needed to raise the water to floor k is sum_j j * (floor_j - floor_{j-1});
    # written with non-negative gaps to avoid cancellation
    gaps = np.diff(inv)
    needed = np.concatenate([[0.0], np.cumsum(np.arange(1, inv.size) * gaps)])
    active = int(np.count_nonzero(needed < total_power))
    fill = (total_power - needed[active - 1]) / active
    p[order[:active]] = fill + (inv[active - 1] - inv[:active])
    return p


def capacity_waterfilling(h, total_power: float, noise_power: float) -> float:
    """Eigenmode capacity in bits per channel use under water-filling."""
    if total_power <= 0 or noise_power <= 0:
        raise InvalidArgumentError("powers must be positive")
    sv = np.linalg.svd(as_matrix(h), compute_uv=False)
    gains = sv**2 / noise_power
    p = waterfilling(gains, total_power)
    return float(np.sum(np.log2(1.0 + p * gains)))
