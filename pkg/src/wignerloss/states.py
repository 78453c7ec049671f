"""Wigner-function evaluators for the single-mode states used throughout.

Convention: vacuum ``W(x, y) = exp(-x^2 - y^2) / pi`` (variance 1/2 per
quadrature), coherent amplitudes are real and displace along ``+x`` so that
``|alpha>`` is centred at ``x = sqrt(2) * alpha``.

Every state exposes two evaluation paths:

* ``wigner(x, y)`` -- pointwise on arbitrary coordinate arrays;
* ``sample(grid, transform)`` -- the lattice values ``W(T @ (x, y))``,
  which the loss and squeeze pipelines use.  States given by Fock
  coefficients implement it through the wavefunction, which is much
  cheaper than summing ``|m><n|`` kernels at every node.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .errors import OrderTooLarge, TruncationBudget
from .phase_space import DEFAULT_MARGIN, DEFAULT_N, MIN_POINTS, N_MAX, PhaseGrid, WignerField, auto_grid

FOCK_MAX = 200
BANANA_ALPHA_MAX = 8.0
POINTS_PER_WAVELENGTH = 24
# Below this the strict-sign sums are off by more than ~1% and, far below
# it, fringes alias; grids that cannot reach it raise ResolutionBudget.
MIN_POINTS_PER_WAVELENGTH = 16
GOLDEN_FRACTION = (math.sqrt(5.0) - 1.0) / 2.0


def laguerre(n: int, t, alpha: float = 0.0):
    """Generalized Laguerre polynomial ``L_n^(alpha)(t)`` by the three-term recurrence."""
    t = np.asarray(t, dtype=float)
    prev = np.ones_like(t)
    if n == 0:
        return prev
    cur = 1.0 + alpha - t
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - t) * cur - (k + alpha) * prev) / (k + 1)
    return cur


def fock_wigner(n: int, x, y):
    """Wigner function of ``|n>``: ``(-1)^n / pi * L_n(2 r^2) * exp(-r^2)``.

    The recurrence runs on ``exp(-t/2) L_k(t)`` which is bounded by one,
    so nothing overflows at large radius.
    """
    if n < 0:
        raise ValueError("Fock index must be non-negative")
    if n > FOCK_MAX:
        raise OrderTooLarge(f"n = {n} exceeds the supported maximum {FOCK_MAX}")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    t = 2.0 * (x * x + y * y)
    prev = np.exp(-0.5 * t)
    cur = prev
    if n > 0:
        cur = (1.0 - t) * prev
        for k in range(1, n):
            prev, cur = cur, ((2 * k + 1 - t) * cur - k * prev) / (k + 1)
    sign = -1.0 if n % 2 else 1.0
    return sign * cur / np.pi


def coherent_wigner(alpha: float, x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return np.exp(-(x - math.sqrt(2.0) * alpha) ** 2 - y * y) / np.pi


def cat_wigner(alpha: float, x, y):
    """Even cat ``|alpha> + |-alpha>``: two half-weight Gaussians plus fringes."""
    if alpha <= 0:
        raise ValueError("cat amplitude must be positive")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    s = math.sqrt(2.0) * alpha
    w_minus = np.exp(-y * y - (x - s) ** 2) / (2 * np.pi)
    w_plus = np.exp(-y * y - (x + s) ** 2) / (2 * np.pi)
    w_int = np.exp(-y * y - x * x) * np.cos(2.0 * s * y) / np.pi
    return (w_minus + w_plus + w_int) / (1.0 + math.exp(-2.0 * alpha * alpha))


def kernel_sum_wigner(coefficients, x, y):
    """Pure-state Wigner function ``sum_mn c_m c_n^* W_{|m><n|}(x, y)``.

    For ``m = n + k`` the kernel is
    ``(-1)^n / pi * sqrt(n!/m!) * (sqrt(2) (x - i y))^k * L_n^(k)(2 r^2) * exp(-r^2)``.
    The normalized products ``sqrt(n!/m!) t^(k/2) L_n^(k)(t) exp(-t/2)`` obey
    a stable recurrence in ``n``; its seed is formed in log space.
    """
    c = np.asarray(coefficients, dtype=complex)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    t = 2.0 * (x * x + y * y)
    phase = np.exp(-1j * np.arctan2(y, x))  # unit phase of x - iy
    n_max = len(c) - 1
    total = np.zeros(np.broadcast(x, y).shape)
    with np.errstate(divide="ignore"):
        log_t = np.log(t)
    for k in range(n_max + 1):
        if k == 0:
            g0 = np.exp(-0.5 * t)
        else:
            with np.errstate(invalid="ignore"):
                g0 = np.where(t > 0, np.exp(0.5 * k * log_t - 0.5 * t - 0.5 * gammaln(k + 1)), 0.0)
        acc = c[k] * np.conj(c[0]) * g0
        prev, cur = np.zeros_like(g0), g0
        for n in range(0, n_max - k):
            nxt = ((2 * n + 1 + k - t) * cur - math.sqrt(n * (n + k)) * prev) / math.sqrt((n + 1) * (n + k + 1))
            prev, cur = cur, nxt
            sign = -1.0 if (n + 1) % 2 else 1.0
            acc = acc + sign * c[n + 1 + k] * np.conj(c[n + 1]) * cur
        weight = 1.0 if k == 0 else 2.0
        total += weight * np.real(acc * phase**k)
    return total / np.pi


def hermite_functions_sum(coefficients, q):
    """Wavefunction ``psi(q) = sum_n c_n psi_n(q)`` with normalized Hermite functions."""
    c = np.asarray(coefficients, dtype=complex)
    q = np.asarray(q, dtype=float)
    prev = np.zeros_like(q)
    cur = np.pi**-0.25 * np.exp(-0.5 * q * q)
    psi = c[0] * cur
    for n in range(len(c) - 1):
        prev, cur = cur, math.sqrt(2.0 / (n + 1)) * q * cur - math.sqrt(n / (n + 1)) * prev
        psi = psi + c[n + 1] * cur
    return psi


def rotate_coefficients(coefficients, theta: float):
    """Coefficients of the state whose Wigner function is ``W(R(theta) v)``."""
    c = np.asarray(coefficients, dtype=complex)
    return c * np.exp(-1j * theta * np.arange(len(c)))


def _lattice_wigner(coefficients, radius: float, grid: PhaseGrid, transform) -> np.ndarray:
    """``W(T v)`` on the grid lattice from the wavefunction.

    ``T = c * K * L`` with ``K`` a rotation and ``L`` lower triangular
    ``[[s, 0], [g, 1/s]]``.  The rotation acts on the Fock coefficients,
    ``L`` is a chirp followed by a dilation of the wavefunction, and the
    remaining Wigner integral is a trapezoid sum whose step is fine enough
    to avoid aliasing.
    """
    t = np.eye(2) if transform is None else np.asarray(transform, dtype=float)
    det = np.linalg.det(t)
    if det <= 0:
        raise ValueError("transform must preserve orientation")
    scale = math.sqrt(det)
    b = t / scale
    col = b[:, 1]
    inv_s = float(np.hypot(col[0], col[1]))
    s = 1.0 / inv_s
    u1, u2 = col / inv_s
    rot = np.array([[u2, u1], [-u1, u2]])
    lower = rot.T @ b
    g = lower[1, 0]
    theta = math.atan2(-u1, u2)
    c_rot = rotate_coefficients(coefficients, theta)

    hx = scale * grid.hx
    x0 = scale * grid.x_min
    yv = scale * grid.y
    p_max = s * radius + abs(g) * radius
    h_target = 0.8 * np.pi / (p_max + np.max(np.abs(yv)))
    m = max(1, int(math.ceil(hx / h_target)))
    hs = hx / m
    k_max = int(math.ceil((radius / s) / hs))
    # psi2 on the fine lattice q_l = x0 + (l - k_max) * hs
    n_fine = m * (grid.nx - 1) + 2 * k_max + 1
    q = x0 + (np.arange(n_fine) - k_max) * hs
    psi = math.sqrt(s) * np.exp(-0.5j * g * s * q * q) * hermite_functions_sum(c_rot, s * q)

    centre = m * np.arange(grid.nx)[:, None] + k_max
    k = np.arange(k_max + 1)[None, :]
    f = np.conj(psi[centre + k]) * psi[centre - k]
    f[:, 1:] *= 2.0
    sk = hs * np.arange(k_max + 1)
    out = np.empty(grid.shape)
    chunk = max(1, int(2**24 // max(1, k_max + 1)))
    for j0 in range(0, grid.ny, chunk):
        e = np.exp(2j * np.outer(sk, yv[j0:j0 + chunk]))
        out[j0:j0 + chunk, :] = np.real(f @ e).T
    return out * hs / np.pi


class StateSpec:
    """Common surface of every state family."""

    family = "state"

    @property
    def radius(self) -> float:
        """Phase-space radius holding the state including a 6-unit tail margin."""
        raise NotImplementedError

    def wigner(self, x, y):
        raise NotImplementedError

    def __call__(self, x, y):
        return self.wigner(x, y)

    def sample(self, grid: PhaseGrid, transform=None) -> np.ndarray:
        xs, ys = grid.mesh()
        if transform is not None:
            t = np.asarray(transform, dtype=float)
            xs, ys = t[0, 0] * xs + t[0, 1] * ys, t[1, 0] * xs + t[1, 1] * ys
        return self.wigner(xs, ys)

    @property
    def wavelength(self) -> float | None:
        """Shortest oscillation period of ``W``, if the family has a known one."""
        return None

    def resolution(self, n: int = DEFAULT_N) -> int:
        """``n``, raised so that the shortest wavelength gets enough samples."""
        lam = self.wavelength
        if lam is None:
            return n
        return max(n, int(math.ceil(2.0 * self.radius * POINTS_PER_WAVELENGTH / lam)) + 1)

    def fringe_floor(self) -> int:
        """Fewest points per axis that still resolve the shortest wavelength."""
        lam = self.wavelength
        if lam is None:
            return MIN_POINTS
        return max(MIN_POINTS, int(math.ceil(2.0 * self.radius * MIN_POINTS_PER_WAVELENGTH / lam)) + 1)

    def default_grid(self, n: int = DEFAULT_N, n_max: int = N_MAX) -> PhaseGrid:
        return auto_grid(self.radius, self.resolution(n), n_max=n_max, floor=self.fringe_floor())

    def describe(self) -> dict:
        return {"family": self.family}

    @property
    def param(self) -> float:
        """Scalar used as the sweep coordinate of the family."""
        return 0.0


@dataclass(frozen=True)
class Vacuum(StateSpec):
    family = "vacuum"

    @property
    def radius(self):
        return 1.0 + DEFAULT_MARGIN

    def wigner(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return np.exp(-x * x - y * y) / np.pi


@dataclass(frozen=True)
class Coherent(StateSpec):
    alpha: float
    family = "coherent"

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError("coherent amplitude must be non-negative")

    @property
    def radius(self):
        return math.sqrt(2.0) * self.alpha + DEFAULT_MARGIN

    def wigner(self, x, y):
        return coherent_wigner(self.alpha, x, y)

    def describe(self):
        return {"family": self.family, "alpha": self.alpha}

    @property
    def param(self):
        return self.alpha


@dataclass(frozen=True)
class Fock(StateSpec):
    n: int
    family = "fock"

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("Fock index must be non-negative")
        if self.n > FOCK_MAX:
            raise OrderTooLarge(f"n = {self.n} exceeds the supported maximum {FOCK_MAX}")

    @property
    def radius(self):
        return math.sqrt(2.0 * self.n + 1.0) + DEFAULT_MARGIN

    @property
    def wavelength(self):
        return math.pi / math.sqrt(2.0 * self.n + 1.0)

    def wigner(self, x, y):
        return fock_wigner(self.n, x, y)

    def describe(self):
        return {"family": self.family, "n": self.n}

    @property
    def param(self):
        return float(self.n)


@dataclass(frozen=True)
class Cat(StateSpec):
    alpha: float
    family = "cat"

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("cat amplitude must be positive")

    @property
    def radius(self):
        return math.sqrt(2.0) * self.alpha + DEFAULT_MARGIN

    @property
    def wavelength(self):
        return math.pi / (math.sqrt(2.0) * self.alpha)

    def resolution(self, n: int = DEFAULT_N) -> int:
        # Fringe zeros are rows y = const, half a wavelength apart.  A spacing
        # commensurate with them puts every zero at the same offset inside its
        # cell and biases the strict-sign sums; a golden-ratio fractional part
        # spreads the offsets evenly.
        n = super().resolution(n)
        for _ in range(400):
            cells = 0.5 * self.wavelength * (n - 1) / (2.0 * self.radius)
            if abs(cells % 1.0 - GOLDEN_FRACTION) < 0.03:
                break
            n += 1
        return n

    def wigner(self, x, y):
        return cat_wigner(self.alpha, x, y)

    def describe(self):
        return {"family": self.family, "alpha": self.alpha}

    @property
    def param(self):
        return self.alpha


class _FockExpansion(StateSpec):
    """States stored as a finite list of Fock amplitudes."""

    @property
    def coefficients(self) -> np.ndarray:
        raise NotImplementedError

    def wigner(self, x, y):
        return kernel_sum_wigner(self.coefficients, x, y)

    def sample(self, grid, transform=None, method: str = "wavefunction"):
        if method == "kernel":
            return super().sample(grid, transform)
        return _lattice_wigner(self.coefficients, self.radius, grid, transform)


@dataclass(frozen=True)
class FockSuperposition(_FockExpansion):
    amplitudes: tuple
    family = "superposition"

    def __post_init__(self):
        c = np.asarray(self.amplitudes, dtype=complex)
        if c.ndim != 1 or len(c) == 0:
            raise ValueError("need a non-empty list of amplitudes")
        if abs(np.sum(np.abs(c) ** 2) - 1.0) > 1e-9:
            raise ValueError("amplitudes must have unit norm")
        object.__setattr__(self, "amplitudes", tuple(complex(a) for a in c))

    @property
    def coefficients(self):
        return np.asarray(self.amplitudes, dtype=complex)

    @property
    def radius(self):
        top = max(i for i, a in enumerate(self.amplitudes) if a != 0)
        return math.sqrt(2.0 * top + 1.0) + DEFAULT_MARGIN

    def describe(self):
        return {"family": self.family, "dimension": len(self.amplitudes)}


def banana_cutoff(alpha: float) -> int:
    return int(math.ceil(alpha * alpha + 8.0 * alpha + 12.0))


@dataclass(frozen=True)
class Banana(_FockExpansion):
    """Kerr-evolved coherent state ``exp(-i gamma n^2) |alpha>``."""

    alpha: float
    gamma: float
    extra_cutoff: int = field(default=0, compare=False)
    family = "banana"

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("banana amplitude must be positive")
        if self.gamma < 0:
            raise ValueError("Kerr factor must be non-negative")
        if self.alpha > BANANA_ALPHA_MAX:
            raise TruncationBudget(f"alpha = {self.alpha} exceeds the Fock truncation budget ({BANANA_ALPHA_MAX})")

    @classmethod
    def from_R(cls, alpha: float, R: float) -> "Banana":
        return cls(alpha, R / alpha**2)

    @property
    def R(self) -> float:
        return self.alpha**2 * self.gamma

    @property
    def cutoff(self) -> int:
        return banana_cutoff(self.alpha) + self.extra_cutoff

    @property
    def coefficients(self):
        n = np.arange(self.cutoff + 1)
        log_mag = -0.5 * self.alpha**2 + n * math.log(self.alpha) - 0.5 * gammaln(n + 1)
        return np.exp(log_mag) * np.exp(-1j * self.gamma * n.astype(float) ** 2)

    @property
    def radius(self):
        return math.sqrt(2.0) * self.alpha + DEFAULT_MARGIN

    def describe(self):
        return {"family": self.family, "alpha": self.alpha, "gamma": self.gamma, "R": self.R}

    @property
    def param(self):
        return self.alpha


def banana_wigner(alpha: float, gamma: float, x, y):
    return Banana(alpha, gamma).wigner(x, y)


def build_field(state: StateSpec, grid: PhaseGrid | None = None) -> WignerField:
    """Sample the state on ``grid`` (auto-sized when omitted)."""
    if grid is None:
        grid = state.default_grid()
    return WignerField(grid, state.sample(grid))
