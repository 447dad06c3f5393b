"""
Free-space electromagnetic kernels.

Time convention is ``exp(+j w t)``, so an outgoing spherical wave carries
``exp(-j k0 R)``. Physical constants (impedance, current normalization) are
set to one; they scale every channel entry uniformly.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, SingularityError
from .geometry import as_point

# Lower edge of the Fresnel zone in units of sqrt(D^3 / wavelength).
FRESNEL_COEFFICIENT = 0.62

_COINCIDENT_TOL = 1e-12


@dataclass(frozen=True)
class WaveParams:
    wavelength: float = 1.0

    def __post_init__(self):
        if not self.wavelength > 0:
            raise InvalidArgumentError(f"wavelength must be positive, got {self.wavelength}")

    @property
    def k0(self) -> float:
        return 2.0 * math.pi / self.wavelength


DEFAULT_WAVE = WaveParams()


class FieldRegion(enum.Enum):
    RADIATIVE_NEAR_FIELD = "radiative_near_field"
    FRESNEL = "fresnel"
    FAR_FIELD = "far_field"


def _separation(r, s):
    d = np.asarray(r, dtype=float) - np.asarray(s, dtype=float)
    dist = np.linalg.norm(d, axis=-1)
    if np.any(dist <= _COINCIDENT_TOL):
        raise SingularityError("Green's function evaluated at coincident points")
    return d, dist


def scalar_green(r, s, w: WaveParams = DEFAULT_WAVE) -> complex:
    """``exp(-j k0 R) / (4 pi R)`` between observation ``r`` and source ``s``."""
    _, dist = _separation(as_point(r), as_point(s))
    return complex(np.exp(-1j * w.k0 * dist) / (4.0 * np.pi * dist))


def dyadic_green(r, s, w: WaveParams = DEFAULT_WAVE) -> np.ndarray:
    """3x3 free-space dyadic Green's function ``(I + grad grad / k0^2) g``."""
    return dyadic_green_matrix(as_point(r)[None], as_point(s)[None], w)[0, :, 0, :]


def scalar_green_matrix(rx: np.ndarray, tx: np.ndarray, w: WaveParams = DEFAULT_WAVE) -> np.ndarray:
    """Scalar kernel for every (rx, tx) pair, shape ``(n_rx, n_tx)``."""
    _, dist = _separation(rx[:, None, :], tx[None, :, :])
    return np.exp(-1j * w.k0 * dist) / (4.0 * np.pi * dist)


def dyadic_green_matrix(rx: np.ndarray, tx: np.ndarray, w: WaveParams = DEFAULT_WAVE) -> np.ndarray:
    """Dyadic kernel for every (rx, tx) pair, shape ``(n_rx, 3, n_tx, 3)``."""
    d, dist = _separation(rx[:, None, :], tx[None, :, :])
    u = d / dist[..., None]
    kr = w.k0 * dist
    g = np.exp(-1j * kr) / (4.0 * np.pi * dist)
    inv = 1.0 / kr
    a = g * (1.0 - 1j * inv - inv**2)
    b = g * (1.0 - 3j * inv - 3.0 * inv**2)
    out = -b[:, :, None, None] * (u[..., :, None] * u[..., None, :])
    out[..., 0, 0] += a
    out[..., 1, 1] += a
    out[..., 2, 2] += a
    return out.transpose(0, 2, 1, 3)


def rayleigh_distance(aperture: float, w: WaveParams = DEFAULT_WAVE) -> float:
    """Far-field boundary ``2 D^2 / wavelength``."""
    if not aperture > 0:
        raise InvalidArgumentError(f"aperture must be positive, got {aperture}")
    return 2.0 * aperture**2 / w.wavelength


def fresnel_distance(aperture: float, w: WaveParams = DEFAULT_WAVE) -> float:
    """Boundary between the radiative near field and the Fresnel zone."""
    if not aperture > 0:
        raise InvalidArgumentError(f"aperture must be positive, got {aperture}")
    return FRESNEL_COEFFICIENT * math.sqrt(aperture**3 / w.wavelength)


def classify_region(aperture: float, distance: float, w: WaveParams = DEFAULT_WAVE) -> FieldRegion:
    """Field region of a receiver at ``distance`` from an aperture of size ``aperture``.

    Distances exactly on a boundary belong to the farther region.
    """
    if not distance > 0:
        raise InvalidArgumentError(f"distance must be positive, got {distance}")
    if distance >= rayleigh_distance(aperture, w):
        return FieldRegion.FAR_FIELD
    if distance >= fresnel_distance(aperture, w):
        return FieldRegion.FRESNEL
    return FieldRegion.RADIATIVE_NEAR_FIELD


def response_model(tx, rx_element, rx_center, region: FieldRegion,
                   w: WaveParams = DEFAULT_WAVE) -> complex:
    """Complex response from a point source under one of the three wave models.

    Near field uses the exact per-element distance for amplitude and phase;
    Fresnel keeps the exact phase but takes the amplitude at the array center;
    far field uses the center distance plus a planar phase ramp along the
    direction of incidence.
    """
    tx = as_point(tx)
    re = as_point(rx_element)
    rc = as_point(rx_center)
    _, d_el = _separation(re, tx)
    _, d_c = _separation(rc, tx)
    k0 = w.k0
    if region is FieldRegion.RADIATIVE_NEAR_FIELD:
        amp, path = 1.0 / (4 * np.pi * d_el), d_el
    elif region is FieldRegion.FRESNEL:
        amp, path = 1.0 / (4 * np.pi * d_c), d_el
    elif region is FieldRegion.FAR_FIELD:
        incident = (rc - tx) / d_c
        amp, path = 1.0 / (4 * np.pi * d_c), d_c + incident @ (re - rc)
    else:
        raise InvalidArgumentError(f"unknown region {region!r}")
    return complex(amp * np.exp(-1j * k0 * path))


def patch_offsets(side: float, order: int) -> np.ndarray:
    """Midpoint-rule nodes of a ``order`` x ``order`` split of a square patch (local 2D)."""
    if order < 1:
        raise InvalidArgumentError("quadrature order must be >= 1")
    t = ((np.arange(order) + 0.5) / order - 0.5) * side
    gx, gy = np.meshgrid(t, t)
    return np.column_stack([gx.ravel(), gy.ravel()])
