"""Uniform phase-space grids, quadrature, finite differences and Gaussian blur.

Fields are stored row-major as ``values[iy, ix]`` so that rows follow the
``y`` quadrature and columns the ``x`` quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.ndimage import convolve1d

from .errors import GridTooSmall, KernelExceedsGrid, ResolutionBudget

MIN_POINTS = 16
DEFAULT_N = 512
N_MAX = 4096
DEFAULT_MARGIN = 6.0


@dataclass(frozen=True)
class PhaseGrid:
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    nx: int
    ny: int

    def __post_init__(self):
        if self.nx < MIN_POINTS or self.ny < MIN_POINTS:
            raise ValueError(f"grid needs at least {MIN_POINTS} points per axis, got {self.nx}x{self.ny}")
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise ValueError("grid bounds must satisfy x_max > x_min and y_max > y_min")

    @classmethod
    def square(cls, extent: float, n: int = DEFAULT_N) -> "PhaseGrid":
        """Symmetric grid ``[-extent, extent]^2`` with ``n`` points per axis."""
        return cls(-extent, extent, -extent, extent, n, n)

    @property
    def hx(self) -> float:
        return (self.x_max - self.x_min) / (self.nx - 1)

    @property
    def hy(self) -> float:
        return (self.y_max - self.y_min) / (self.ny - 1)

    @property
    def cell_area(self) -> float:
        return self.hx * self.hy

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.hx * np.arange(self.nx)

    @property
    def y(self) -> np.ndarray:
        return self.y_min + self.hy * np.arange(self.ny)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.ny, self.nx)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Coordinate arrays ``(X, Y)`` shaped like a field."""
        return np.meshgrid(self.x, self.y, indexing="xy")

    def metadata(self) -> dict:
        return {
            "x_min": self.x_min, "x_max": self.x_max,
            "y_min": self.y_min, "y_max": self.y_max,
            "nx": self.nx, "ny": self.ny,
            "hx": self.hx, "hy": self.hy,
        }


@dataclass(frozen=True)
class WignerField:
    grid: PhaseGrid
    values: np.ndarray
    blur_skipped: bool = field(default=False, compare=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != self.grid.shape:
            raise ValueError(f"values shape {values.shape} does not match grid {self.grid.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("field contains non-finite values")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def with_values(self, values: np.ndarray) -> "WignerField":
        return replace(self, values=values, blur_skipped=False)

    def __add__(self, other: "WignerField") -> "WignerField":
        _check_same_grid(self, other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other: "WignerField") -> "WignerField":
        _check_same_grid(self, other)
        return self.with_values(self.values - other.values)

    def __mul__(self, scalar: float) -> "WignerField":
        return self.with_values(self.values * scalar)

    __rmul__ = __mul__


def _check_same_grid(a: WignerField, b: WignerField) -> None:
    if a.grid != b.grid:
        raise ValueError("fields live on different grids")


def integrate(field: WignerField) -> float:
    """Lattice quadrature ``sum(W) * hx * hy``."""
    return float(field.values.sum() * field.grid.cell_area)


def _second_difference(values: np.ndarray, h: float, axis: int) -> np.ndarray:
    v = np.moveaxis(values, axis, 0)
    out = np.empty_like(v)
    out[1:-1] = v[2:] - 2.0 * v[1:-1] + v[:-2]
    # one-sided second-order stencils on the boundary ring
    out[0] = 2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]
    out[-1] = 2.0 * v[-1] - 5.0 * v[-2] + 4.0 * v[-3] - v[-4]
    return np.moveaxis(out, 0, axis) / (h * h)


def _require_stencil(grid: PhaseGrid) -> None:
    if grid.nx < 5 or grid.ny < 5:
        raise GridTooSmall(f"stencils need at least 5 points per axis, got {grid.nx}x{grid.ny}")


def hessian(field: WignerField) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Second derivatives ``(W_xx, W_yy, W_xy)`` by second-order differences.

    The mixed derivative reduces to the 4-point cross stencil in the
    interior.
    """
    _require_stencil(field.grid)
    g = field.grid
    v = field.values
    wxx = _second_difference(v, g.hx, axis=1)
    wyy = _second_difference(v, g.hy, axis=0)
    wx = np.gradient(v, g.hx, axis=1, edge_order=2)
    wxy = np.gradient(wx, g.hy, axis=0, edge_order=2)
    return wxx, wyy, wxy


def laplacian(field: WignerField) -> WignerField:
    _require_stencil(field.grid)
    g = field.grid
    lap = _second_difference(field.values, g.hx, axis=1) + _second_difference(field.values, g.hy, axis=0)
    return field.with_values(lap)


def gradient(field: WignerField) -> tuple[np.ndarray, np.ndarray]:
    """First derivatives ``(W_x, W_y)``, central in the interior."""
    _require_stencil(field.grid)
    g = field.grid
    return (np.gradient(field.values, g.hx, axis=1, edge_order=2),
            np.gradient(field.values, g.hy, axis=0, edge_order=2))


def gaussian_kernel(sigma: float, h: float) -> np.ndarray:
    """Sampled Gaussian truncated at 6 sigma, renormalized to unit sum."""
    half = int(math.ceil(6.0 * sigma / h))
    t = h * np.arange(-half, half + 1)
    w = np.exp(-0.5 * (t / sigma) ** 2)
    return w / w.sum()


def convolve_gaussian(field: WignerField, sigma: float) -> WignerField:
    """Separable blur with a per-axis Gaussian of standard deviation ``sigma``.

    Axes whose spacing exceeds ``2 * sigma`` are left untouched and the
    result carries ``blur_skipped=True``. Outside the grid the field is
    taken to be zero.
    """
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    if sigma == 0:
        return field
    g = field.grid
    half_extent = 0.5 * min(g.x_max - g.x_min, g.y_max - g.y_min)
    if 6.0 * sigma > half_extent:
        raise KernelExceedsGrid(f"6*sigma = {6 * sigma:.4g} exceeds half the grid extent {half_extent:.4g}")
    values = field.values
    skipped = False
    for axis, h in ((1, g.hx), (0, g.hy)):
        if sigma < 0.5 * h:
            skipped = True
            continue
        values = convolve1d(values, gaussian_kernel(sigma, h), axis=axis, mode="constant", cval=0.0)
    return WignerField(g, values, blur_skipped=skipped)


def resample_scaled(state, grid: PhaseGrid, scale: float) -> WignerField:
    """Evaluate ``W(x/scale, y/scale) / scale**2`` exactly from the state's evaluator."""
    if scale <= 0:
        raise ValueError("scale must be positive")
    transform = np.eye(2) / scale
    return WignerField(grid, state.sample(grid, transform) / scale**2)


def auto_grid(
    radius: float, n: int = DEFAULT_N, transform=None, n_max: int = N_MAX, floor: int = MIN_POINTS
) -> PhaseGrid:
    """Square-ish grid holding a state of phase-space radius ``radius``.

    ``radius`` already includes the tail margin.  With a linear map ``T``
    (field evaluated as ``W(T v)``) the extent becomes the bounding box of
    the pre-image ellipse and the spacing shrinks with the largest
    frequency stretch, so that ``n`` points resolve the unmapped state on
    ``[-radius, radius]^2``.

    ``n`` is capped at ``n_max`` per axis; ``floor`` (the count the
    unmapped state needs to resolve its shortest fringe) is not: if the
    mapped floor exceeds ``n_max`` the fringes would alias, and
    :class:`ResolutionBudget` is raised instead.
    """
    if transform is None:
        if floor > n_max:
            raise ResolutionBudget(f"resolving the shortest fringe needs {floor} points per axis, above n_max = {n_max}")
        return PhaseGrid.square(radius, min(n, n_max))
    t = np.asarray(transform, dtype=float)
    t_inv = np.linalg.inv(t)
    sizes = []
    for axis in range(2):
        extent = radius * np.linalg.norm(t_inv[axis, :])
        stretch = np.linalg.norm(t[:, axis])
        def count(points: int) -> int:
            h = 2.0 * radius / (points - 1) / stretch
            return int(math.ceil(2.0 * extent / h - 1e-9)) + 1
        if count(max(floor, 2)) > n_max:
            raise ResolutionBudget(
                f"resolving the shortest fringe needs {count(max(floor, 2))} points along "
                f"{'xy'[axis]}, above n_max = {n_max}"
            )
        sizes.append((extent, min(max(count(n), MIN_POINTS), n_max)))
    (ex, nx), (ey, ny) = sizes
    return PhaseGrid(-ex, ex, -ey, ey, nx, ny)
