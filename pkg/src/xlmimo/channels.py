"""
Channel-matrix assembly.

Rows index receive elements and columns transmit elements. Polarized
(dyadic) matrices use three consecutive rows/columns per element in x, y, z
order. NLoS draws come from a Philox counter stream keyed by the seed, so a
coefficient's value depends only on ``(seed, lattice indices)`` and not on
the order in which blocks are generated.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .em import DEFAULT_WAVE, WaveParams, dyadic_green_matrix, patch_offsets, scalar_green_matrix
from .errors import DegenerateSpectrumError, InvalidArgumentError, SingularityError
from .geometry import ArrayGeometry, as_point

Provenance = Literal["los", "nlos", "hybrid"]

DEFAULT_QUADRATURE = 3
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(48)


@dataclass(frozen=True)
class ChannelMatrix:
    entries: np.ndarray
    polarized: bool = False
    provenance: Provenance = "los"

    def __post_init__(self):
        h = np.array(self.entries, dtype=complex, copy=True)
        if h.ndim != 2 or h.size == 0:
            raise InvalidArgumentError(f"channel must be a non-empty matrix, got shape {h.shape}")
        if not np.all(np.isfinite(h)):
            raise InvalidArgumentError("channel entries must be finite")
        if self.polarized and (h.shape[0] % 3 or h.shape[1] % 3):
            raise InvalidArgumentError("polarized channel dimensions must be multiples of 3")
        h.setflags(write=False)
        object.__setattr__(self, "entries", h)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    @property
    def polarizations(self) -> int:
        return 3 if self.polarized else 1

    @property
    def n_rx(self) -> int:
        return self.shape[0] // self.polarizations

    @property
    def n_tx(self) -> int:
        return self.shape[1] // self.polarizations

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)


def as_matrix(h) -> np.ndarray:
    return h.entries if isinstance(h, ChannelMatrix) else np.asarray(h, dtype=complex)


# ---------------------------------------------------------------------------
# LoS
# ---------------------------------------------------------------------------

def _quadrature_points(g: ArrayGeometry, order: int) -> np.ndarray:
    """Sample points per element, shape ``(n, q, 3)``."""
    if g.kind == "point":
        return g.positions[:, None, :]
    offs = patch_offsets(g.patch_side, order)
    return g.positions[:, None, :] + offs @ g.orientation[:, :2].T


def _check_disjoint(tx: ArrayGeometry, rx: ArrayGeometry) -> None:
    d = np.linalg.norm(rx.positions[:, None, :] - tx.positions[None, :, :], axis=-1)
    hit = np.argwhere(d <= 1e-12)
    if len(hit):
        i, j = hit[0]
        raise SingularityError(f"receive element {i} coincides with transmit element {j}")


def los_channel_scalar(tx: ArrayGeometry, rx: ArrayGeometry, w: WaveParams = DEFAULT_WAVE,
                       quadrature_order: int = DEFAULT_QUADRATURE) -> ChannelMatrix:
    """Scalar Green's-function LoS channel, ``H[i, j] = g(rx_i, tx_j)``."""
    _check_disjoint(tx, rx)
    pr = _quadrature_points(rx, quadrature_order)
    pt = _quadrature_points(tx, quadrature_order)
    k = scalar_green_matrix(pr.reshape(-1, 3), pt.reshape(-1, 3), w)
    k = k.reshape(len(rx), pr.shape[1], len(tx), pt.shape[1]).mean(axis=(1, 3))
    return ChannelMatrix(k, polarized=False, provenance="los")


def los_channel_dyadic(tx: ArrayGeometry, rx: ArrayGeometry, w: WaveParams = DEFAULT_WAVE,
                       quadrature_order: int = DEFAULT_QUADRATURE) -> ChannelMatrix:
    """Fully polarized LoS channel built from 3x3 dyadic Green's blocks."""
    _check_disjoint(tx, rx)
    pr = _quadrature_points(rx, quadrature_order)
    pt = _quadrature_points(tx, quadrature_order)
    qr, qt = pr.shape[1], pt.shape[1]
    g = dyadic_green_matrix(pr.reshape(-1, 3), pt.reshape(-1, 3), w)
    if qr > 1 or qt > 1:
        g = g.reshape(len(rx), qr, 3, len(tx), qt, 3).mean(axis=(1, 4))
    return ChannelMatrix(g.reshape(3 * len(rx), 3 * len(tx)), polarized=True, provenance="los")


# ---------------------------------------------------------------------------
# NLoS: Fourier plane-wave series
# ---------------------------------------------------------------------------

def lattice_points(size_x: float, size_y: float, w: WaveParams = DEFAULT_WAVE) -> np.ndarray:
    """Integer pairs ``(l, m)`` with ``(l/Lx)^2 + (m/Ly)^2 <= 1/wavelength^2``."""
    if size_x < w.wavelength or size_y < w.wavelength:
        raise DegenerateSpectrumError(
            f"aperture {size_x:g} x {size_y:g} is smaller than one wavelength")
    ax = size_x / w.wavelength
    ay = size_y / w.wavelength
    ls = np.arange(-math.floor(ax), math.floor(ax) + 1)
    ms = np.arange(-math.floor(ay), math.floor(ay) + 1)
    gl, gm = np.meshgrid(ls, ms, indexing="ij")
    keep = (gl / ax) ** 2 + (gm / ay) ** 2 <= 1.0 + 1e-12
    return np.column_stack([gl[keep], gm[keep]])


def _isotropic_cell_weights(lattice: np.ndarray, size_x: float, size_y: float,
                            w: WaveParams) -> np.ndarray:
    """Integral of ``1/gamma`` over each lattice cell clipped to the unit disk.

    ``gamma = sqrt(1 - kx^2 - ky^2)`` in wavenumber-normalized units; the
    density is uniform over the hemisphere of directions.
    """
    hx = w.wavelength / size_x
    hy = w.wavelength / size_y
    x1 = np.clip((lattice[:, 0] - 0.5) * hx, -1.0, 1.0)
    x2 = np.clip((lattice[:, 0] + 0.5) * hx, -1.0, 1.0)
    y1 = (lattice[:, 1] - 0.5) * hy
    y2 = (lattice[:, 1] + 0.5) * hy
    half = (x2 - x1)[:, None] / 2
    x = half * _GL_NODES[None, :] + ((x1 + x2) / 2)[:, None]
    a = np.sqrt(np.clip(1.0 - x**2, 0.0, None))
    safe = np.where(a > 0, a, 1.0)
    inner = np.arcsin(np.clip(y2[:, None] / safe, -1, 1)) - np.arcsin(np.clip(y1[:, None] / safe, -1, 1))
    inner = np.where(a > 0, inner, 0.0)
    return (half[:, 0] * (inner * _GL_WEIGHTS).sum(axis=1))


@dataclass(frozen=True)
class ScatteringSpectrum:
    """Angular power profile over the receive and transmit wavevector lattices.

    ``variance[a, b]`` is the variance of the Fourier coefficient coupling
    receive lattice point ``rx_lattice[a]`` with transmit lattice point
    ``tx_lattice[b]``.
    """

    rx_size: tuple[float, float]
    tx_size: tuple[float, float]
    rx_lattice: np.ndarray
    tx_lattice: np.ndarray
    variance: np.ndarray

    def __post_init__(self):
        var = np.array(self.variance, dtype=float, copy=True)
        if var.shape != (len(self.rx_lattice), len(self.tx_lattice)):
            raise InvalidArgumentError("variance table does not match the lattices")
        if not np.all(np.isfinite(var)) or np.any(var <= 0):
            raise InvalidArgumentError("variances must be finite and strictly positive")
        var.setflags(write=False)
        object.__setattr__(self, "variance", var)

    @classmethod
    def isotropic(cls, rx_size: Sequence[float], tx_size: Sequence[float],
                  w: WaveParams = DEFAULT_WAVE) -> "ScatteringSpectrum":
        """Isotropic scattering normalized to unit mean entry power."""
        rx_lat = lattice_points(*rx_size, w)
        tx_lat = lattice_points(*tx_size, w)
        wr = _isotropic_cell_weights(rx_lat, *rx_size, w)
        wt = _isotropic_cell_weights(tx_lat, *tx_size, w)
        var = np.outer(wr / wr.sum(), wt / wt.sum())
        return cls(tuple(rx_size), tuple(tx_size), rx_lat, tx_lat, var)

    @classmethod
    def for_arrays(cls, tx: ArrayGeometry, rx: ArrayGeometry,
                   w: WaveParams = DEFAULT_WAVE) -> "ScatteringSpectrum":
        return cls.isotropic(rx.aperture(), tx.aperture(), w)

    @property
    def n_coefficients(self) -> int:
        return self.variance.size


def _blocks_per_row(n_cols: int) -> int:
    # Philox4x64 emits 4 words per counter step; each complex draw needs 2.
    return -(-2 * n_cols // 4)


def complex_gaussian_rows(seed: int, n_cols: int, row_start: int, row_stop: int) -> np.ndarray:
    """Unit-variance circular complex Gaussians for rows ``[row_start, row_stop)``.

    Row ``r`` always reads the same counter range of the seed's Philox
    stream, so any partition of rows yields identical values.
    """
    if int(seed) != seed or seed < 0:
        raise InvalidArgumentError(f"seed must be a non-negative integer, got {seed}")
    bpr = _blocks_per_row(n_cols)
    bg = np.random.Philox(key=int(seed))
    if row_start:
        bg.advance(row_start * bpr)
    raw = bg.random_raw((row_stop - row_start) * bpr * 4)
    raw = raw.reshape(row_stop - row_start, bpr * 4)[:, : 2 * n_cols]
    u = ((raw >> np.uint64(11)).astype(float) + 0.5) * 2.0**-53
    u1, u2 = u[:, 0::2], u[:, 1::2]
    return np.sqrt(-np.log(u1)) * np.exp(2j * np.pi * u2)


def _planewave_matrix(g: ArrayGeometry, lattice: np.ndarray, size: tuple[float, float],
                      w: WaveParams) -> np.ndarray:
    loc = g.local_coordinates()
    kx = 2 * np.pi * lattice[:, 0] / size[0]
    ky = 2 * np.pi * lattice[:, 1] / size[1]
    kz = np.sqrt(np.clip(w.k0**2 - kx**2 - ky**2, 0.0, None))
    phase = np.outer(loc[:, 0], kx) + np.outer(loc[:, 1], ky) + np.outer(loc[:, 2], kz)
    return np.exp(1j * phase)


def nlos_fourier_planewave(tx: ArrayGeometry, rx: ArrayGeometry,
                           spectrum: ScatteringSpectrum | None = None, seed: int = 0,
                           w: WaveParams = DEFAULT_WAVE, row_block: int = 4096) -> ChannelMatrix:
    """Random NLoS channel as a finite Fourier plane-wave series.

    ``H = A_r C A_t^H`` where the columns of ``A_r``/``A_t`` are discretized
    plane waves over the receive/transmit lattices and ``C`` holds
    independent complex Gaussian coefficients with the spectrum's variances.
    When ``spectrum`` is omitted an isotropic one is derived from the array
    apertures (bounding box plus one element cell, so that no two elements
    alias under the periodic series).
    """
    if not (tx.is_planar() and rx.is_planar()):
        raise InvalidArgumentError("Fourier plane-wave channel requires planar arrays")
    if spectrum is None:
        spectrum = ScatteringSpectrum.for_arrays(tx, rx, w)
    n_r, n_t = spectrum.variance.shape
    coeff = np.empty((n_r, n_t), dtype=complex)
    for start in range(0, n_r, row_block):
        stop = min(start + row_block, n_r)
        coeff[start:stop] = complex_gaussian_rows(seed, n_t, start, stop)
    coeff *= np.sqrt(spectrum.variance)
    a_r = _planewave_matrix(rx, spectrum.rx_lattice, spectrum.rx_size, w)
    a_t = _planewave_matrix(tx, spectrum.tx_lattice, spectrum.tx_size, w)
    h = a_r @ coeff @ a_t.conj().T
    return ChannelMatrix(h, polarized=False, provenance="nlos")


# ---------------------------------------------------------------------------
# NLoS: array-response superposition
# ---------------------------------------------------------------------------

def direction(azimuth: float, elevation: float) -> np.ndarray:
    """Unit vector for azimuth (from +x toward +y) and elevation (above XY-plane)."""
    ce = math.cos(elevation)
    return np.array([ce * math.cos(azimuth), ce * math.sin(azimuth), math.sin(elevation)])


@dataclass(frozen=True)
class Path:
    """One propagation path.

    Near-regime paths need ``scatterer``. Far-regime paths need ``aod`` and,
    when a receive array is given, ``aoa``; both as ``(azimuth, elevation)``
    pairs pointing from the array toward the scatterer.
    """

    gain: complex
    regime: Literal["near", "far"] = "far"
    scatterer: tuple | None = None
    aoa: tuple | None = None
    aod: tuple | None = None

    def __post_init__(self):
        if not np.isfinite(complex(self.gain)):
            raise InvalidArgumentError("path gain must be finite")
        if self.regime == "near" and self.scatterer is None:
            raise InvalidArgumentError("near-regime path needs a scatterer position")
        if self.regime == "far" and self.aod is None:
            raise InvalidArgumentError("far-regime path needs an angle of departure")
        if self.regime not in ("near", "far"):
            raise InvalidArgumentError(f"unknown regime {self.regime!r}")


PathSet = Sequence[Path]


def array_response(g: ArrayGeometry, path: Path, side: Literal["tx", "rx"],
                   w: WaveParams = DEFAULT_WAVE) -> np.ndarray:
    """Per-element propagation phases of ``path``, referenced to the array center."""
    offs = g.positions - g.center
    if path.regime == "far":
        angles = path.aod if side == "tx" else path.aoa
        if angles is None:
            raise InvalidArgumentError(f"far-regime path lacks the {side} angle")
        return np.exp(1j * w.k0 * offs @ direction(*angles))
    s = as_point(path.scatterer)
    dist = np.linalg.norm(g.positions - s, axis=1)
    if np.any(dist <= 1e-12):
        raise SingularityError("scatterer coincides with an array element")
    ref = np.linalg.norm(g.center - s)
    return np.exp(-1j * w.k0 * (dist - ref))


def nlos_array_response(tx: ArrayGeometry, paths: PathSet, rx: ArrayGeometry | None = None,
                        w: WaveParams = DEFAULT_WAVE) -> ChannelMatrix:
    """Gain-weighted sum of rank-one path contributions.

    Without a receive array the result is a single row (one receive antenna).
    """
    if not paths:
        raise InvalidArgumentError("path set must not be empty")
    n_rx = 1 if rx is None else len(rx)
    h = np.zeros((n_rx, len(tx)), dtype=complex)
    for p in paths:
        a_t = array_response(tx, p, "tx", w)
        a_r = np.ones(1) if rx is None else array_response(rx, p, "rx", w)
        h += complex(p.gain) * np.outer(a_r, a_t)
    return ChannelMatrix(h, polarized=False, provenance="nlos")


# ---------------------------------------------------------------------------
# Hybrid
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HybridSpec:
    k_factor: float
    normalization: Literal["unit-power", "raw"] = "unit-power"

    def __post_init__(self):
        if not self.k_factor >= 0:
            raise InvalidArgumentError(f"Rician factor must be non-negative, got {self.k_factor}")
        if self.normalization not in ("unit-power", "raw"):
            raise InvalidArgumentError(f"unknown normalization {self.normalization!r}")


def normalize_power(h, target: float | None = None) -> np.ndarray:
    """Scale ``h`` so that its squared Frobenius norm is ``target`` (default: entry count)."""
    m = as_matrix(h)
    fro = np.linalg.norm(m)
    if fro == 0:
        raise InvalidArgumentError("cannot normalize an all-zero channel")
    target = m.size if target is None else target
    return m * (math.sqrt(target) / fro)


def hybrid_channel(h_los: ChannelMatrix, h_nlos: ChannelMatrix, spec: HybridSpec) -> ChannelMatrix:
    """Rician combination ``sqrt(K/(K+1)) H_los + sqrt(1/(K+1)) H_nlos``.

    In ``unit-power`` mode both inputs are first scaled to mean entry power
    one, so the result has expected mean entry power one as well.
    """
    if h_los.shape != h_nlos.shape or h_los.polarized != h_nlos.polarized:
        raise InvalidArgumentError(
            f"LoS {h_los.shape} and NLoS {h_nlos.shape} channels must share shape and polarization")
    if spec.normalization == "unit-power":
        los, nlos = normalize_power(h_los), normalize_power(h_nlos)
    else:
        los, nlos = h_los.entries, h_nlos.entries
    k = spec.k_factor
    if math.isinf(k):
        a, b = 1.0, 0.0
    else:
        a, b = math.sqrt(k / (k + 1.0)), math.sqrt(1.0 / (k + 1.0))
    return ChannelMatrix(a * los + b * nlos, polarized=h_los.polarized, provenance="hybrid")


def rician_channel(tx: ArrayGeometry, rx: ArrayGeometry, k_factor: float, seed: int = 0,
                    w: WaveParams = DEFAULT_WAVE) -> ChannelMatrix:
    """Scalar LoS plus Fourier plane-wave NLoS combined at Rician factor ``k_factor``."""
    return hybrid_channel(los_channel_scalar(tx, rx, w),
                          nlos_fourier_planewave(tx, rx, seed=seed, w=w),
                          HybridSpec(k_factor))
