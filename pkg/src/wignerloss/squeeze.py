"""Squeeze transforms and the optimal pre-squeezing of a Wigner function.

A squeeze with magnitude ``r`` along orientation ``phi`` maps
``W_sq(v) = W(M v)`` with ``M = U^T S U``, ``U`` the rotation by ``phi``
and ``S = diag(e^r, e^-r)``.  Because ``M`` is symmetric with unit
determinant,

    M^2 = cosh(2r) 1 + sinh(2r) (cos(2 phi) sigma_3 + sin(2 phi) sigma_1),

so the Laplacian integral over the negative region of the squeezed field
is ``Tr(M^2 L) / 4`` with ``L`` the Hessian of ``W`` integrated over
``{W < 0}``.  Its Pauli components are the d-coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateFlat, UnboundedSqueeze
from .phase_space import DEFAULT_N, N_MAX, PhaseGrid, WignerField, auto_grid, hessian
from .states import StateSpec

DEGENERACY_RTOL = 1e-9
PSD_RTOL = 1e-6


@dataclass(frozen=True)
class SqueezeParams:
    r: float = 0.0
    phi: float = 0.0
    degenerate: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.r < 0:
            raise ValueError("squeeze magnitude r must be non-negative")
        phi = float(self.phi) % math.pi
        object.__setattr__(self, "phi", 0.0 if phi >= math.pi else phi)  # -1e-18 % pi rounds to pi

    @property
    def matrix(self) -> np.ndarray:
        return squeeze_matrix(self.r, self.phi)


def squeeze_matrix(r: float, phi: float) -> np.ndarray:
    c, s = math.cos(phi), math.sin(phi)
    u = np.array([[c, s], [-s, c]])
    return u.T @ np.diag([math.exp(r), math.exp(-r)]) @ u


@dataclass(frozen=True)
class SqueezedState(StateSpec):
    """``base`` pre-squeezed by ``params``; evaluation composes linear maps."""

    base: StateSpec
    params: SqueezeParams
    family = "squeezed"

    @property
    def radius(self):
        return self.base.radius * math.exp(self.params.r)

    def wigner(self, x, y):
        m = self.params.matrix
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return self.base.wigner(m[0, 0] * x + m[0, 1] * y, m[1, 0] * x + m[1, 1] * y)

    def sample(self, grid, transform=None):
        if self.params.r == 0.0:
            return self.base.sample(grid, transform)
        m = self.params.matrix
        if transform is not None:
            m = m @ np.asarray(transform, dtype=float)
        return self.base.sample(grid, m)

    def default_grid(self, n: int = DEFAULT_N, n_max: int = N_MAX) -> PhaseGrid:
        return auto_grid(
            self.base.radius,
            self.base.resolution(n),
            transform=self.params.matrix,
            n_max=n_max,
            floor=self.base.fringe_floor(),
        )

    def describe(self):
        return {**self.base.describe(), "squeeze_r": self.params.r, "squeeze_phi": self.params.phi}

    @property
    def param(self):
        return self.base.param


def apply_squeeze(state: StateSpec, params: SqueezeParams, grid: PhaseGrid | None = None) -> WignerField:
    squeezed = SqueezedState(state, params)
    if grid is None:
        grid = squeezed.default_grid()
    return WignerField(grid, squeezed.sample(grid))


@dataclass(frozen=True)
class DCoefficients:
    d0: float
    d1: float
    d3: float

    @property
    def anisotropy(self) -> float:
        return math.hypot(self.d1, self.d3)

    def satisfies_psd(self, rtol: float = PSD_RTOL) -> bool:
        return self.d0 >= 0 and self.d0**2 >= self.d1**2 + self.d3**2 - rtol * self.d0**2


def d_coefficients(field: WignerField) -> DCoefficients:
    """Pauli components of the Hessian integrated over ``{W < 0}``."""
    wxx, wyy, wxy = hessian(field)
    mask = field.values < 0
    area = field.grid.cell_area
    return DCoefficients(
        d0=float((wxx[mask] + wyy[mask]).sum() * area),
        d1=float(2.0 * wxy[mask].sum() * area),
        d3=float((wxx[mask] - wyy[mask]).sum() * area),
    )


def optimal_squeeze(d: DCoefficients) -> SqueezeParams:
    """Squeeze minimizing the small-loss vulnerability.

    ``exp(4r) = (d0 + rho) / (d0 - rho)`` and
    ``(cos 2phi, sin 2phi) = -(d3, d1) / rho`` with ``rho = hypot(d1, d3)``.
    """
    if not d.d0 > 0:
        raise DegenerateFlat(f"d0 = {d.d0:.3g}: the negative region carries no curvature")
    rho = d.anisotropy
    if rho < DEGENERACY_RTOL * d.d0:
        return SqueezeParams(0.0, 0.0, degenerate=True)
    if d.d0 - rho <= DEGENERACY_RTOL * d.d0:
        raise UnboundedSqueeze(f"d0 = {d.d0:.6g} <= |(d1, d3)| = {rho:.6g}: optimal squeeze diverges")
    r = 0.25 * math.log((d.d0 + rho) / (d.d0 - rho))
    phi = 0.5 * math.atan2(-d.d1 / rho, -d.d3 / rho)
    return SqueezeParams(r, phi)


def squeezed_vulnerability(d: DCoefficients, params: SqueezeParams) -> float:
    r2, p2 = 2.0 * params.r, 2.0 * params.phi
    return 0.25 * (d.d0 * math.cosh(r2) + (d.d3 * math.cos(p2) + d.d1 * math.sin(p2)) * math.sinh(r2))


def minimal_vulnerability(d: DCoefficients) -> float:
    return 0.25 * math.sqrt(max(d.d0**2 - d.d1**2 - d.d3**2, 0.0))


def vulnerability(field: WignerField) -> float:
    """``dV_neg/deta`` at ``eta = 1``: a quarter of the Laplacian integral over ``{W < 0}``."""
    return d_coefficients(field).d0 / 4.0


@dataclass(frozen=True)
class VulnerabilityReport:
    d: DCoefficients
    v_org: float
    v_sqz: float
    params: SqueezeParams
    degenerate: bool

    def as_dict(self) -> dict:
        return {
            "d0": self.d.d0, "d1": self.d.d1, "d3": self.d.d3,
            "v_org": self.v_org, "v_sqz": self.v_sqz,
            "r_opt": self.params.r, "phi_opt": self.params.phi,
            "degenerate": self.degenerate,
        }


def vulnerability_report(field: WignerField) -> VulnerabilityReport:
    d = d_coefficients(field)
    params = optimal_squeeze(d)
    return VulnerabilityReport(
        d=d,
        v_org=d.d0 / 4.0,
        v_sqz=squeezed_vulnerability(d, params),
        params=params,
        degenerate=params.degenerate,
    )
