"""Closed-form solution of the weakly dissipative Hunter-Saxton system.

Given initial slope v0x, density rho0, a sign kappa and rate lam on the unit
circle, the Lagrangian flow map and the fields along it have explicit
formulas in terms of the rescaled time tau = (1 - exp(-lam*t))/lam, valid
while the common denominator stays away from zero.  The initial data is
normalized so the quarter-energy c(0) = (1/4) * integral(v0x^2 + kappa*rho0^2)
equals one.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import Breakdown, NonMonotoneFlow
from .grid import PeriodicGrid
from .transform import OutOfRange, TimeMapParams, tau as time_map, tau_inverse

BREAKDOWN_THRESHOLD = 1e-8


@dataclass
class HSExactData:
    grid: PeriodicGrid
    v0x: np.ndarray
    rho0: np.ndarray
    kappa: int
    lam: float

    def __post_init__(self):
        if self.grid.L != 1.0:
            raise ValueError("closed-form solution is stated on the unit circle")
        if self.kappa not in (1, -1):
            raise ValueError(f"kappa must be +1 or -1, got {self.kappa}")
        if not self.lam > 0:
            raise ValueError(f"lam must be positive, got {self.lam}")
        self.v0x = self.grid.check_field(self.v0x)
        self.rho0 = self.grid.check_field(self.rho0)
        mbar = self.grid.mean(self.v0x)
        if abs(mbar) > 1e-12:
            raise ValueError(f"v0x must have zero mean (periodic v0), got {mbar:.3e}")
        c0 = self.c0()
        if abs(c0 - 1.0) > 1e-10:
            raise ValueError(f"initial quarter-energy must be 1, got {c0!r}")

    def c0(self):
        return 0.25 * self.grid.mean(self.v0x**2 + self.kappa * self.rho0**2)

    @classmethod
    def normalized(cls, grid, v0x, rho0, kappa, lam):
        """Rescale (v0x, rho0) by a common factor so that c(0) = 1."""
        v0x = grid.check_field(v0x)
        rho0 = grid.check_field(rho0)
        c0 = 0.25 * grid.mean(v0x**2 + kappa * rho0**2)
        if c0 <= 0:
            raise ValueError(f"cannot normalize data with quarter-energy {c0:.3e}")
        s = 1.0 / math.sqrt(c0)
        return cls(grid, s * v0x, s * rho0, kappa, lam)

    def tau(self, t):
        return time_map(t, TimeMapParams(self.lam, p=1))


def _flow_integrand(data, tl):
    c, s = math.cos(tl), math.sin(tl)
    return (c + 0.5 * data.v0x * s) ** 2 + data.kappa * 0.25 * data.rho0**2 * s**2


def flow_map(data, t):
    """Particle positions phi(t, x_j): cumulative integral of the closed-form
    flow derivative, phi(0, x) = x."""
    return data.grid.cumulative_integral(_flow_integrand(data, data.tau(t)))


def _denominator(data, tl):
    c, s = math.cos(tl), math.sin(tl)
    return (2.0 * c + data.v0x * s) ** 2 + data.kappa * data.rho0**2 * s**2


def exact_along_flow(data, t):
    """Fields v_x and rho evaluated along the flow, as functions of the
    Lagrangian label x.  Raises Breakdown when the denominator (nearly)
    vanishes, which is the closed-form signature of wave breaking."""
    tl = data.tau(t)
    D = _denominator(data, tl)
    dmin = float(np.min(D))
    if dmin < BREAKDOWN_THRESHOLD:
        raise Breakdown(t, dmin)
    pref = math.exp(-data.lam * t)
    num_v = 4.0 * math.cos(2 * tl) * data.v0x + math.sin(2 * tl) * (
        data.v0x**2 + data.kappa * data.rho0**2 - 4.0
    )
    vx = pref * num_v / D
    rho = pref * 4.0 * data.rho0 / D
    return vx, rho


def c_of_t(data, t):
    """Quarter-energy c(t) = exp(-2*lam*t) * c(0) via the energy identity."""
    return math.exp(-2.0 * data.lam * t)


def _first_root_tau(a):
    """First tau > 0 where 2 cos(tau) + a sin(tau) vanishes, per node."""
    return 0.5 * math.pi + np.arctan(0.5 * np.asarray(a))


def breakdown_time(data, t_max=None):
    """First t at which the denominator vanishes at some node, or None if
    that never happens before the tau horizon (or before t_max).

    Found in closed form rather than by bisection: the denominator is a sum
    of squares whose zeros touch without a sign change, so a bracketing
    search cannot see them.  For kappa = -1 the denominator factors as
    (2 cos tau + (v0x + rho0) sin tau)(2 cos tau + (v0x - rho0) sin tau); for
    kappa = +1 it only vanishes at nodes where rho0 = 0, through the factor
    2 cos tau + v0x sin tau.
    """
    if data.kappa == -1:
        roots = np.concatenate([
            _first_root_tau(data.v0x + data.rho0),
            _first_root_tau(data.v0x - data.rho0),
        ])
    else:
        flat = np.abs(data.rho0) < 1e-13
        if not np.any(flat):
            return None
        roots = _first_root_tau(data.v0x[flat])
    tau_star = float(np.min(roots))
    try:
        t_star = tau_inverse(tau_star, TimeMapParams(data.lam, p=1))
    except OutOfRange:
        return None  # tau saturates before the first root: no breakdown
    if t_max is not None and t_star > t_max:
        return None
    return t_star


def eulerian_reconstruct(grid, phi, f_at_phi):
    """Resample Lagrangian data (phi(x_j), f(phi(x_j))) onto the Eulerian grid.

    Cubic-spline interpolation with a periodic closure over the monotone
    graph; requires phi strictly increasing over one period.
    """
    phi = grid.check_field(phi)
    f_at_phi = grid.check_field(f_at_phi)
    ext = np.append(phi, phi[0] + grid.L)
    if np.any(np.diff(ext) <= 0):
        raise NonMonotoneFlow("flow map samples are not strictly increasing")
    spline = CubicSpline(ext, np.append(f_at_phi, f_at_phi[0]),
                         bc_type="periodic")
    # pull every evaluation point into the window the spline covers
    pts = ext[0] + np.mod(grid.x - ext[0], grid.L)
    return spline(pts)


def oracle_mean_velocity(data, t):
    """Eulerian mean of the closed-form velocity, integral(phi_t * phi_x).

    phi_t is the analytic t-derivative of the flow-map integrand (chain rule
    through tau, dtau/dt = exp(-lam*t)) integrated in x; phi_x is the
    integrand itself.
    """
    tl = data.tau(t)
    c, s = math.cos(tl), math.sin(tl)
    dtau = math.exp(-data.lam * t)
    g = _flow_integrand(data, tl)
    gt = dtau * (
        2.0 * (c + 0.5 * data.v0x * s) * (-s + 0.5 * data.v0x * c)
        + data.kappa * 0.5 * data.rho0**2 * s * c
    )
    phit = data.grid.cumulative_integral(gt)
    return data.grid.mean(phit * g) * data.grid.L


def gauge_shift(data, t, order=64):
    """Accumulated spatial shift A(t) = integral of the oracle mean velocity
    over [0, t], by fixed-order Gauss-Legendre quadrature."""
    if t == 0:
        return 0.0
    nodes, weights = np.polynomial.legendre.leggauss(order)
    s = 0.5 * t * (nodes + 1.0)
    w = 0.5 * t * weights
    return float(sum(wi * oracle_mean_velocity(data, si) for si, wi in zip(s, w)))
