"""Rectangular 2D coordinate lattices and second-order finite differences.

Grid axes are always the *last two* axes of a field array, so fields with
leading component indices (vectors, tensors) pass through the same stencil
routines unchanged.

A periodic axis stores its full period inclusively: the last point is the
same physical point as the first (closed-string convention), so an axis of
``n`` points carries ``n - 1`` unique values and wrapped stencils identify
index ``n - 1`` with index ``0``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class GridSpec:
    """Uniform 2D lattice: names, origin, spacing, sizes, periodicity."""

    coord_names: tuple[str, str]
    origin: tuple[float, float]
    spacing: tuple[float, float]
    dims: tuple[int, int]
    periodic: tuple[bool, bool] = (False, False)

    def __post_init__(self):
        if len(self.coord_names) != 2:
            raise DomainError("GridSpec is two-dimensional")
        for h in self.spacing:
            if not h > 0:
                raise DomainError("grid spacing must be positive")
        for n in self.dims:
            if n < 5:
                raise DomainError("grid needs at least 5 points per axis "
                                  "(second-order stencils)")

    def axis(self, i: int) -> np.ndarray:
        return self.origin[i] + self.spacing[i] * np.arange(self.dims[i])

    def points(self) -> np.ndarray:
        """Coordinate arrays stacked as shape (2, n1, n2)."""
        a0, a1 = self.axis(0), self.axis(1)
        x0, x1 = np.meshgrid(a0, a1, indexing="ij")
        return np.stack([x0, x1])

    def cell_centers(self) -> np.ndarray:
        """Midpoints of all grid cells, shape (2, n1-1, n2-1)."""
        x = self.points()
        return 0.25 * (x[:, :-1, :-1] + x[:, 1:, :-1] + x[:, :-1, 1:] + x[:, 1:, 1:])

    def interior(self, arr: np.ndarray, width: int = 1) -> np.ndarray:
        """Trim ``width`` layers from each non-periodic edge (view)."""
        sl = [slice(None)] * arr.ndim
        for ax in (0, 1):
            if not self.periodic[ax]:
                sl[arr.ndim - 2 + ax] = slice(width, -width)
        return arr[tuple(sl)]

    def refined(self, factor: int = 2) -> "GridSpec":
        """Same extent, ``factor`` times finer spacing."""
        dims = tuple((n - 1) * factor + 1 for n in self.dims)
        spacing = tuple(h / factor for h in self.spacing)
        return replace(self, dims=dims, spacing=spacing)

    @property
    def extent(self) -> tuple[float, float]:
        return tuple((n - 1) * h for n, h in zip(self.dims, self.spacing))


def _ax(arr: np.ndarray, axis: int) -> int:
    return arr.ndim - 2 + axis


def _take(arr, axis, sl):
    idx = [slice(None)] * arr.ndim
    idx[axis] = sl
    return arr[tuple(idx)]


def diff1(arr: np.ndarray, h: float, axis: int, periodic: bool = False) -> np.ndarray:
    """First derivative along a grid axis, O(h^2) everywhere.

    Central differences in the interior; wrapped central on a periodic axis
    (duplicate endpoint convention); one-sided 3-point at non-periodic ends.
    """
    a = _ax(arr, axis)
    out = np.empty_like(arr, dtype=float)
    n = arr.shape[a]
    if periodic:
        core = _take(arr, a, slice(0, n - 1))
        d = (np.roll(core, -1, axis=a) - np.roll(core, 1, axis=a)) / (2.0 * h)
        idx = [slice(None)] * arr.ndim
        idx[a] = slice(0, n - 1)
        out[tuple(idx)] = d
        idx[a] = n - 1
        first = [slice(None)] * d.ndim
        first[a] = 0
        out[tuple(idx)] = d[tuple(first)]
        return out
    mid = (_take(arr, a, slice(2, n)) - _take(arr, a, slice(0, n - 2))) / (2.0 * h)
    idx = [slice(None)] * arr.ndim
    idx[a] = slice(1, n - 1)
    out[tuple(idx)] = mid
    idx[a] = 0
    out[tuple(idx)] = (-3.0 * _take(arr, a, 0) + 4.0 * _take(arr, a, 1)
                       - _take(arr, a, 2)) / (2.0 * h)
    idx[a] = n - 1
    out[tuple(idx)] = (3.0 * _take(arr, a, n - 1) - 4.0 * _take(arr, a, n - 2)
                       + _take(arr, a, n - 3)) / (2.0 * h)
    return out


def diff2(arr: np.ndarray, h: float, axis: int, periodic: bool = False) -> np.ndarray:
    """Second derivative along a grid axis, compact 3-point stencil, O(h^2)."""
    a = _ax(arr, axis)
    out = np.empty_like(arr, dtype=float)
    n = arr.shape[a]
    h2 = h * h
    if periodic:
        core = _take(arr, a, slice(0, n - 1))
        d = (np.roll(core, -1, axis=a) - 2.0 * core + np.roll(core, 1, axis=a)) / h2
        idx = [slice(None)] * arr.ndim
        idx[a] = slice(0, n - 1)
        out[tuple(idx)] = d
        idx[a] = n - 1
        first = [slice(None)] * d.ndim
        first[a] = 0
        out[tuple(idx)] = d[tuple(first)]
        return out
    mid = (_take(arr, a, slice(2, n)) - 2.0 * _take(arr, a, slice(1, n - 1))
           + _take(arr, a, slice(0, n - 2))) / h2
    idx = [slice(None)] * arr.ndim
    idx[a] = slice(1, n - 1)
    out[tuple(idx)] = mid
    idx[a] = 0
    out[tuple(idx)] = (2.0 * _take(arr, a, 0) - 5.0 * _take(arr, a, 1)
                       + 4.0 * _take(arr, a, 2) - _take(arr, a, 3)) / h2
    idx[a] = n - 1
    out[tuple(idx)] = (2.0 * _take(arr, a, n - 1) - 5.0 * _take(arr, a, n - 2)
                       + 4.0 * _take(arr, a, n - 3) - _take(arr, a, n - 4)) / h2
    return out


def gradient(arr: np.ndarray, grid: GridSpec) -> np.ndarray:
    """Both first derivatives, stacked on a new leading axis (2, ...)."""
    return np.stack([
        diff1(arr, grid.spacing[0], 0, grid.periodic[0]),
        diff1(arr, grid.spacing[1], 1, grid.periodic[1]),
    ])


def to_cell_centers(arr: np.ndarray) -> np.ndarray:
    """Average of the four cell corners (midpoint value to O(h^2))."""
    return 0.25 * (arr[..., :-1, :-1] + arr[..., 1:, :-1]
                   + arr[..., :-1, 1:] + arr[..., 1:, 1:])


def cell_center_gradient(arr: np.ndarray, grid: GridSpec) -> np.ndarray:
    """Gradient evaluated at cell centers, shape (2, ..., n1-1, n2-1)."""
    h0, h1 = grid.spacing
    d0 = ((arr[..., 1:, :-1] - arr[..., :-1, :-1])
          + (arr[..., 1:, 1:] - arr[..., :-1, 1:])) / (2.0 * h0)
    d1 = ((arr[..., :-1, 1:] - arr[..., :-1, :-1])
          + (arr[..., 1:, 1:] - arr[..., 1:, :-1])) / (2.0 * h1)
    return np.stack([d0, d1])


def sup_norm(arr: np.ndarray) -> float:
    return float(np.max(np.abs(arr))) if arr.size else 0.0


def l2_norm(arr: np.ndarray, grid: GridSpec | None = None) -> float:
    """Grid-weighted L2 norm, sqrt(sum v^2 h1 h2) when a grid is given."""
    w = grid.spacing[0] * grid.spacing[1] if grid is not None else 1.0
    return float(np.sqrt(np.sum(np.square(arr)) * w))
