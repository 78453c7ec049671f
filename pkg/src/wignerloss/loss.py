"""Pure-loss channel acting on Wigner functions, and its eta-derivative.

The channel with transmissivity ``eta`` maps

    W_eta(v) = int W(u) exp(-|v - sqrt(eta) u|^2 / (1 - eta)) du / (pi (1 - eta)),

which factorizes exactly into a rescaling ``W(v / sqrt(eta)) / eta``
followed by a per-axis Gaussian blur of variance ``(1 - eta) / 2``.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.ndimage import map_coordinates

from .errors import BlurUnderResolved
from .phase_space import (
    PhaseGrid,
    WignerField,
    DEFAULT_N,
    N_MAX,
    convolve_gaussian,
    gradient,
    laplacian,
    resample_scaled,
)


def check_eta(eta: float) -> float:
    eta = float(eta)
    if not (0.0 < eta <= 1.0):
        raise ValueError(f"quantum efficiency must lie in (0, 1], got {eta}")
    return eta


def blur_sigma(eta: float) -> float:
    """Per-axis standard deviation of the loss kernel."""
    return math.sqrt((1.0 - check_eta(eta)) / 2.0)


def apply_loss(state, grid: PhaseGrid | None, eta: float) -> WignerField:
    """Wigner function of ``state`` after a loss channel of efficiency ``eta``."""
    eta = check_eta(eta)
    if grid is None:
        grid = lossy_grid(state, eta)
    if eta == 1.0:
        return WignerField(grid, state.sample(grid))
    sigma = blur_sigma(eta)
    h = max(grid.hx, grid.hy)
    if sigma < 0.5 * h:
        raise BlurUnderResolved(
            f"loss blur sigma = {sigma:.3g} is below half the grid spacing {h:.3g}; refine the grid"
        )
    scaled = resample_scaled(state, grid, math.sqrt(eta))
    return convolve_gaussian(scaled, sigma)


def loss_field(field: WignerField, eta: float) -> WignerField:
    """Loss channel applied to an already sampled field.

    The rescaling step has no analytic evaluator to call, so ``field`` is
    bilinearly interpolated at ``v / sqrt(eta)`` (zero outside the grid).
    Accuracy is first order in the spacing; the analytic route
    :func:`apply_loss` is used for every reported metric.
    """
    eta = check_eta(eta)
    if eta == 1.0:
        return field
    g = field.grid
    xs, ys = g.mesh()
    scale = math.sqrt(eta)
    cols = (xs / scale - g.x_min) / g.hx
    rows = (ys / scale - g.y_min) / g.hy
    scaled = map_coordinates(field.values, [rows, cols], order=1, mode="constant", cval=0.0) / eta
    return convolve_gaussian(field.with_values(np.asarray(scaled)), blur_sigma(eta))


def lossy_grid(state, eta: float, n: int = DEFAULT_N, n_max: int = N_MAX) -> PhaseGrid:
    """Default grid of ``state`` refined until the spacing is at most the loss blur width."""
    grid = state.default_grid(n, n_max)
    if check_eta(eta) == 1.0:
        return grid
    # The error threshold is sigma >= h/2, but a Gaussian sampled that
    # coarsely has a discrete variance 14% short of sigma^2 (aliasing decays
    # like exp(-2 pi^2 sigma^2 / h^2)); at h <= sigma it is below 1e-6.
    target = blur_sigma(eta)
    # States may raise n (fine fringes) and squeezes shape the two axes
    # differently, so refine from the realized point count until the
    # coarser axis resolves the blur or the cap is reached.
    for _ in range(8):
        ratio = max(grid.hx, grid.hy) / target
        current = max(grid.nx, grid.ny)
        if ratio <= 1.0 or current >= n_max:
            break
        n = max(n + 1, int(math.ceil(current * ratio)) + 1)
        grid = state.default_grid(n, n_max)
    return _pad_for_blur(grid, eta, n_max)


def _pad_for_blur(grid: PhaseGrid, eta: float, n_max: int) -> PhaseGrid:
    """Widen axes too narrow to hold the blurred tails, keeping the spacing.

    The lossy field reaches about ``hypot(sqrt(eta) * e, 6 sigma)`` along an
    axis of half-width ``e``; this only bites on the compressed axis of a
    strongly squeezed state.
    """
    sigma = blur_sigma(eta)
    axes = []
    for lo, hi, count, h in ((grid.x_min, grid.x_max, grid.nx, grid.hx), (grid.y_min, grid.y_max, grid.ny, grid.hy)):
        half = 0.5 * (hi - lo)
        need = math.hypot(math.sqrt(eta) * half, 6.0 * sigma)
        if need > half:
            half = need
            count = min(int(math.ceil(2.0 * need / h - 1e-9)) + 1, n_max)
        axes.append((half, count))
    (ex, nx), (ey, ny) = axes
    if (nx, ny) == (grid.nx, grid.ny):
        return grid
    return PhaseGrid(-ex, ex, -ey, ey, nx, ny)


def decay_rate(field: WignerField, eta: float) -> WignerField:
    """``dW/deta = -(1/eta) [1 + (x d_x + y d_y)/2 + laplacian/4] W``.

    ``field`` is taken to be ``W(., ., eta)``; derivatives are second-order
    central differences.
    """
    eta = check_eta(eta)
    xs, ys = field.grid.mesh()
    wx, wy = gradient(field)
    lap = laplacian(field).values
    rhs = field.values + 0.5 * (xs * wx + ys * wy) + 0.25 * lap
    return field.with_values(-rhs / eta)


def negativity_derivative(field: WignerField, eta: float) -> float:
    """``dV_neg/deta = (1 / (4 eta)) * integral of the Laplacian over {W < 0}``."""
    eta = check_eta(eta)
    mask = field.values < 0
    if not mask.any():
        return 0.0
    lap = laplacian(field).values
    return float(lap[mask].sum() * field.grid.cell_area / (4.0 * eta))
