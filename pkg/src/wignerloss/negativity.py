"""Negativity volume of Wigner fields and its degradation under loss."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .loss import apply_loss, check_eta, lossy_grid
from .phase_space import DEFAULT_N, PhaseGrid, WignerField
from .squeeze import SqueezedState, SqueezeParams, d_coefficients, optimal_squeeze
from .states import StateSpec, build_field

POLICIES = ("none", "analytic_once", "per_eta_optimized")


@dataclass(frozen=True)
class NegativityResult:
    v_neg: float
    negative_cell_count: int
    min_value: float


def negativity_volume(field: WignerField) -> NegativityResult:
    """``V_neg = -sum_{W < 0} W * hx * hy``.

    The full-grid form ``sum (|W| - W) / 2`` is computed alongside and must
    agree to rounding.
    """
    values = field.values
    mask = values < 0
    area = field.grid.cell_area
    region = -float(values[mask].sum()) * area + 0.0  # avoid -0.0 for empty regions
    full = float(((np.abs(values) - values) / 2.0).sum()) * area
    if abs(region - full) > 1e-12 * max(1.0, abs(region)):
        raise AssertionError(f"negativity quadratures disagree: {region!r} vs {full!r}")
    return NegativityResult(region, int(mask.sum()), float(values.min()))


def lossy_negativity(state: StateSpec, eta: float, n: int = DEFAULT_N, grid: PhaseGrid | None = None) -> float:
    eta = check_eta(eta)
    if grid is None:
        grid = lossy_grid(state, eta, n)
    return negativity_volume(apply_loss(state, grid, eta)).v_neg


def analytic_presqueeze(state: StateSpec, n: int = DEFAULT_N, grid: PhaseGrid | None = None) -> SqueezeParams:
    """Small-loss optimal squeeze of the lossless state."""
    return optimal_squeeze(d_coefficients(build_field(state, grid or state.default_grid(n))))


def negativity_curve(state: StateSpec, etas, squeeze_policy: str = "none", n: int = DEFAULT_N,
                     config=None, grid: PhaseGrid | None = None):
    """``[(eta, V_neg)]`` of ``state`` sent through losses ``etas``.

    ``analytic_once`` pre-squeezes with the lossless small-loss optimum;
    ``per_eta_optimized`` searches the squeeze numerically at every eta
    (re-gridding every candidate, so ``grid`` is ignored there).  A fixed
    ``grid`` replaces the auto-sized ones for the other two policies.
    """
    etas = [check_eta(e) for e in etas]
    if any(b < a for a, b in zip(etas, etas[1:])):
        raise ValueError("etas must be sorted ascending")
    if squeeze_policy not in POLICIES:
        raise ValueError(f"unknown squeeze policy {squeeze_policy!r}; choose from {POLICIES}")
    if squeeze_policy == "per_eta_optimized":
        from .optimize import OptimizeConfig, optimize_squeeze_at_loss

        config = config or OptimizeConfig(n=n)
        return [(eta, optimize_squeeze_at_loss(state, eta, config).v_neg) for eta in etas]
    if squeeze_policy == "analytic_once":
        state = SqueezedState(state, analytic_presqueeze(state, n, grid))
    return [(eta, lossy_negativity(state, eta, n, grid)) for eta in etas]


def taylor_estimate(v_neg_at_1: float, v: float, eta: float) -> float:
    """First-order small-loss model ``V_neg(1) - (1 - eta) * dV/deta``."""
    return v_neg_at_1 - (1.0 - eta) * v


__all__ = [
    "NegativityResult",
    "POLICIES",
    "analytic_presqueeze",
    "lossy_negativity",
    "negativity_curve",
    "negativity_volume",
    "taylor_estimate",
]
