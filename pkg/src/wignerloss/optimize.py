"""Numerical search for the pre-squeeze that keeps the most negativity at finite loss."""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import NumericalError
from .loss import apply_loss, check_eta, lossy_grid
from .negativity import analytic_presqueeze, negativity_volume
from .phase_space import DEFAULT_N
from .squeeze import SqueezedState, SqueezeParams
from .states import StateSpec

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class OptimizeConfig:
    r_max: float = 2.0
    restarts: int = 5
    tol: float = 1e-5
    max_evals: int = 400
    seed: int = 0
    n: int = DEFAULT_N
    n_max: int = 2048

    def __post_init__(self):
        if not self.r_max > 0:
            raise ValueError("r_max must be positive")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.restarts < 1 or self.max_evals < 1:
            raise ValueError("restarts and max_evals must be at least 1")

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class OptimumRecord:
    params: SqueezeParams
    v_neg: float
    evals: int
    converged: bool


class SqueezeObjective:
    """``V_neg`` after loss of the state pre-squeezed by ``(r, phi)``, memoized.

    Every candidate is re-gridded so that strongly squeezed candidates are
    not clipped by a grid sized for the unsqueezed state.
    """

    def __init__(self, state: StateSpec, eta: float, n: int = DEFAULT_N, n_max: int = 2048):
        self.state = state
        self.eta = check_eta(eta)
        self.n = n
        self.n_max = n_max
        self.evals = 0
        self._cache: dict[tuple[float, float], float] = {}

    def __call__(self, r: float, phi: float) -> float:
        params = SqueezeParams(max(r, 0.0), phi)
        key = (round(params.r, 12), round(params.phi, 12) % round(math.pi, 12))
        if key in self._cache:
            return self._cache[key]
        self.evals += 1
        candidate = SqueezedState(self.state, params) if params.r > 0 else self.state
        try:
            grid = lossy_grid(candidate, self.eta, self.n, self.n_max)
            value = negativity_volume(apply_loss(candidate, grid, self.eta)).v_neg
        except NumericalError as exc:
            log.debug("candidate r=%.4g phi=%.4g rejected: %s", params.r, params.phi, exc)
            value = 0.0
        self._cache[key] = value
        return value


def seed_points(state: StateSpec, config: OptimizeConfig) -> list[tuple[float, float]]:
    """Unsqueezed start, the small-loss analytic optimum, then random draws."""
    seeds = [(0.0, 0.0)]
    try:
        p = analytic_presqueeze(state, config.n)
        seeds.append((p.r, p.phi))
    except NumericalError as exc:
        log.info("no analytic seed: %s", exc)
    rng = np.random.default_rng(config.seed)
    while len(seeds) < config.restarts:
        seeds.append((float(rng.uniform(0.0, config.r_max)), float(rng.uniform(0.0, math.pi))))
    return seeds


def optimize_squeeze_at_loss(state: StateSpec, eta: float, config: OptimizeConfig | None = None) -> OptimumRecord:
    """Maximize the post-loss negativity over pre-squeeze ``(r, phi)`` by multi-start Nelder-Mead."""
    config = config or OptimizeConfig()
    objective = SqueezeObjective(state, eta, config.n, config.n_max)
    seeds = seed_points(state, config)
    r_hi = max([config.r_max] + [r for r, _ in seeds])

    best_x, best_v, converged = (0.0, 0.0), -1.0, False
    for r0, phi0 in seeds:
        v0 = objective(r0, phi0)
        if v0 > best_v:
            best_x, best_v, converged = (r0, phi0), v0, False
        if eta == 1.0:
            continue  # squeezing cannot change the lossless negativity
        dr = 0.15 if r0 + 0.15 <= r_hi else -0.15
        simplex = np.array([[r0, phi0], [r0 + dr, phi0], [r0, phi0 + 0.3]])
        res = minimize(
            lambda p: -objective(p[0], p[1]),
            np.array([r0, phi0]),
            method="Nelder-Mead",
            bounds=[(0.0, r_hi), (None, None)],
            options={"initial_simplex": simplex, "maxfev": config.max_evals, "fatol": config.tol, "xatol": 1e-4},
        )
        if -res.fun > best_v:
            best_x, best_v, converged = (float(res.x[0]), float(res.x[1])), float(-res.fun), bool(res.success)
        elif -res.fun == best_v:
            converged = converged or bool(res.success)
    if eta == 1.0:
        converged = True
    params = SqueezeParams(max(best_x[0], 0.0), best_x[1])
    return OptimumRecord(params=params, v_neg=best_v, evals=objective.evals, converged=converged)


def optimal_r_curve(states, eta: float, config: OptimizeConfig | None = None):
    """``[(param, r_numeric, r_analytic)]`` over a family of states."""
    config = config or OptimizeConfig()
    families = {s.family for s in states}
    if len(families) > 1:
        raise ValueError(f"states must come from a single family, got {sorted(families)}")
    rows = []
    for state in states:
        record = optimize_squeeze_at_loss(state, eta, config)
        try:
            r_analytic = analytic_presqueeze(state, config.n).r
        except NumericalError:
            r_analytic = float("nan")
        rows.append((state.param, record.params.r, r_analytic))
    return rows
