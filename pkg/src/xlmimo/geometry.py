"""
Antenna-array geometry builders.

All lengths are in units of the free-space wavelength. An array is stored as
an ordered ``(n, 3)`` table of element centers plus a local frame whose first
two columns span the array plane and whose third column is the plane normal.
Planar arrays are ordered row-major starting from the most negative local
``(x, y)`` corner, i.e. the local x index runs fastest.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np
from scipy.spatial.transform import Rotation

from .errors import InvalidArgumentError

ElementKind = Literal["point", "patch"]

X_AXIS = (1.0, 0.0, 0.0)
Y_AXIS = (0.0, 1.0, 0.0)
Z_AXIS = (0.0, 0.0, 1.0)

_UNIT_TOL = 1e-9


def as_point(p) -> np.ndarray:
    """Validate a 3-vector and return it as a float array."""
    arr = np.asarray(p, dtype=float)
    if arr.shape != (3,):
        raise InvalidArgumentError(f"expected a 3-vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError(f"non-finite coordinates {arr}")
    return arr


def _unit_axis(axis) -> np.ndarray:
    a = as_point(axis)
    if abs(np.linalg.norm(a) - 1.0) > _UNIT_TOL:
        raise InvalidArgumentError(f"rotation axis must be unit length, |axis|={np.linalg.norm(a)}")
    return a


def rotation_matrix(axis, theta: float) -> np.ndarray:
    """Right-handed rotation by ``theta`` radians about a unit ``axis``."""
    a = _unit_axis(axis)
    return Rotation.from_rotvec(float(theta) * a).as_matrix()


@dataclass(frozen=True)
class ArrayGeometry:
    """Immutable element layout of an antenna array.

    Attributes
    ----------
    positions : ndarray, shape (n, 3)
        Element centers in the global frame.
    kind : {"point", "patch"}
        Element model. Patch elements are square with side ``patch_side``
        lying in the array plane; only their centers are stored here.
    orientation : ndarray, shape (3, 3)
        Rotation mapping local coordinates to global ones.
    center : ndarray, shape (3,)
    shape : tuple of int
        ``(n_x, n_y)`` for planar grids, ``(n,)`` for linear arrays.
    """

    positions: np.ndarray
    kind: ElementKind = "point"
    orientation: np.ndarray = field(default_factory=lambda: np.eye(3))
    center: np.ndarray = field(default_factory=lambda: np.zeros(3))
    shape: tuple = ()
    patch_side: float | None = None

    def __post_init__(self):
        pos = np.array(self.positions, dtype=float, copy=True).reshape(-1, 3)
        if not np.all(np.isfinite(pos)):
            raise InvalidArgumentError("element positions must be finite")
        rot = np.array(self.orientation, dtype=float, copy=True)
        if rot.shape != (3, 3) or not np.allclose(rot.T @ rot, np.eye(3), atol=1e-12) \
                or abs(np.linalg.det(rot) - 1.0) > 1e-12:
            raise InvalidArgumentError("orientation must be a proper rotation matrix")
        if self.kind not in ("point", "patch"):
            raise InvalidArgumentError(f"unknown element kind {self.kind!r}")
        if self.kind == "patch" and not (self.patch_side and self.patch_side > 0):
            raise InvalidArgumentError("patch elements need a positive patch_side")
        if len(np.unique(np.round(pos, 12), axis=0)) != len(pos):
            raise InvalidArgumentError("element positions must be pairwise distinct")
        center = as_point(self.center).copy()
        for arr in (pos, rot, center):
            arr.setflags(write=False)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "orientation", rot)
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "shape", tuple(self.shape) or (len(pos),))

    def __len__(self) -> int:
        return len(self.positions)

    @property
    def n_elements(self) -> int:
        return len(self.positions)

    @property
    def normal(self) -> np.ndarray:
        return self.orientation[:, 2]

    def local_coordinates(self) -> np.ndarray:
        """Element positions expressed in the array's own frame."""
        return (self.positions - self.center) @ self.orientation

    def extent(self) -> tuple[float, float]:
        """Side lengths of the element bounding box in the local plane."""
        loc = self.local_coordinates()
        return float(np.ptp(loc[:, 0])), float(np.ptp(loc[:, 1]))

    def aperture(self) -> tuple[float, float]:
        """Physical side lengths: bounding box plus one element cell per axis.

        The cell is the smallest gap between distinct element coordinates
        along that axis, or ``patch_side`` (else 0) when all elements share it.
        """
        loc = self.local_coordinates()
        sides = []
        for axis in (0, 1):
            u = np.unique(np.round(loc[:, axis], 9))
            cell = float(np.min(np.diff(u))) if u.size > 1 else float(self.patch_side or 0.0)
            sides.append(float(np.ptp(loc[:, axis])) + cell)
        return sides[0], sides[1]

    def is_planar(self, tol: float = 1e-9) -> bool:
        return bool(np.all(np.abs(self.local_coordinates()[:, 2]) <= tol))

    def distance_matrix(self) -> np.ndarray:
        d = self.positions[:, None, :] - self.positions[None, :, :]
        return np.linalg.norm(d, axis=-1)


@dataclass(frozen=True)
class SurfaceSpec:
    """Parameters of a uniform planar array.

    The grid lies in the local XY-plane, is rotated by ``rotation_angle``
    about ``rotation_axis`` through ``center`` and then placed at ``center``.
    """

    n_x: int
    n_y: int
    spacing: float
    center: tuple = (0.0, 0.0, 0.0)
    rotation_axis: tuple = X_AXIS
    rotation_angle: float = 0.0

    def __post_init__(self):
        if int(self.n_x) != self.n_x or int(self.n_y) != self.n_y or self.n_x < 1 or self.n_y < 1:
            raise InvalidArgumentError(f"grid size must be positive integers, got {self.n_x}x{self.n_y}")
        if not self.spacing > 0 or not math.isfinite(self.spacing):
            raise InvalidArgumentError(f"spacing must be positive, got {self.spacing}")
        as_point(self.center)
        _unit_axis(self.rotation_axis)

    @classmethod
    def square(cls, n: int, side: float, **kwargs) -> "SurfaceSpec":
        """``n`` x ``n`` grid whose outermost elements span ``side``.

        A single-element grid keeps ``spacing = side`` as a placeholder.
        """
        if side <= 0:
            raise InvalidArgumentError(f"side must be positive, got {side}")
        spacing = side / (n - 1) if n > 1 else float(side)
        return cls(n_x=n, n_y=n, spacing=spacing, **kwargs)

    @property
    def side_x(self) -> float:
        return (self.n_x - 1) * self.spacing

    @property
    def side_y(self) -> float:
        return (self.n_y - 1) * self.spacing


def _line_offsets(n: int, spacing: float) -> np.ndarray:
    return (np.arange(n) - (n - 1) / 2.0) * spacing


def build_ula(n: int, spacing: float, center=(0.0, 0.0, 0.0), axis=X_AXIS) -> ArrayGeometry:
    """Uniform linear array of ``n`` elements centered at ``center``."""
    if int(n) != n or n < 1:
        raise InvalidArgumentError(f"n must be a positive integer, got {n}")
    if not spacing > 0:
        raise InvalidArgumentError(f"spacing must be positive, got {spacing}")
    a = _unit_axis(axis)
    c = as_point(center)
    pos = c + _line_offsets(int(n), spacing)[:, None] * a
    # local x along the array axis
    helper = np.array(Z_AXIS) if abs(a[2]) < 0.9 else np.array(X_AXIS)
    ey = np.cross(helper, a)
    ey /= np.linalg.norm(ey)
    frame = np.column_stack([a, ey, np.cross(a, ey)])
    return ArrayGeometry(pos, "point", frame, c, (int(n),))


def build_upa(spec: SurfaceSpec, kind: ElementKind = "point",
              patch_side: float | None = None) -> ArrayGeometry:
    """Uniform planar array described by ``spec``.

    For ``kind="patch"`` the patch side defaults to the grid spacing.
    """
    if kind == "patch" and patch_side is None:
        patch_side = spec.spacing
    xs = _line_offsets(spec.n_x, spec.spacing)
    ys = _line_offsets(spec.n_y, spec.spacing)
    gx, gy = np.meshgrid(xs, ys)  # rows follow y, x runs fastest
    local = np.column_stack([gx.ravel(), gy.ravel(), np.zeros(gx.size)])
    rot = rotation_matrix(spec.rotation_axis, spec.rotation_angle)
    c = as_point(spec.center)
    pos = local @ rot.T + c
    return ArrayGeometry(pos, kind, rot, c, (spec.n_x, spec.n_y), patch_side)


def rotate_surface(g: ArrayGeometry, axis, theta: float) -> ArrayGeometry:
    """Rigidly rotate ``g`` about ``axis`` through its center."""
    rot = rotation_matrix(axis, theta)
    pos = (g.positions - g.center) @ rot.T + g.center
    return ArrayGeometry(pos, g.kind, rot @ g.orientation, g.center, g.shape, g.patch_side)


def translate(g: ArrayGeometry, offset) -> ArrayGeometry:
    off = as_point(offset)
    return ArrayGeometry(g.positions + off, g.kind, g.orientation, g.center + off, g.shape, g.patch_side)


def cap_as_dense_upa(side: float, max_spacing: float = 0.25, center=(0.0, 0.0, 0.0)) -> ArrayGeometry:
    """Approximate a continuous square aperture by a dense point grid.

    The grid covers ``side`` x ``side`` with ``ceil(side / max_spacing) + 1``
    elements per dimension. ``max_spacing`` above a quarter wavelength is
    rejected as too coarse to stand in for a continuous surface.
    """
    if not side > 0:
        raise InvalidArgumentError(f"side must be positive, got {side}")
    if not 0 < max_spacing <= 0.25:
        raise InvalidArgumentError(
            f"max_spacing must lie in (0, 0.25] wavelengths, got {max_spacing}")
    n = math.ceil(side / max_spacing - 1e-12) + 1
    return build_upa(SurfaceSpec(n, n, side / (n - 1), tuple(as_point(center))))


def stack_points(points: Sequence) -> ArrayGeometry:
    """Collection of isolated point antennas (e.g. single-antenna users)."""
    pos = np.array([as_point(p) for p in points])
    return ArrayGeometry(pos, "point", np.eye(3), pos.mean(axis=0), (len(pos),))
