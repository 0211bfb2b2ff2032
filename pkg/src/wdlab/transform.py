"""Exponential time-rescaling between dissipative and non-dissipative runs.

The map tau(t) = (1 - exp(-p*lam*t)) / (p*lam) sends dissipative time t to
non-dissipative time; p = 1 covers the b-family variants, p = 2 the Novikov
equation.  Fields map by the pointwise prefactor exp(-lam*t) in both cases.
lam = 0 is handled as the identity map so the non-dissipative system is the
lam -> 0 member of the same interface.
"""

import math
from dataclasses import dataclass

import numpy as np

from .equations import TwoComponentState
from .errors import OutOfRange


@dataclass(frozen=True)
class TimeMapParams:
    lam: float
    p: int = 1

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError(f"lam must be >= 0, got {self.lam}")
        if self.p not in (1, 2):
            raise ValueError(f"rescaling order p must be 1 or 2, got {self.p}")

    @property
    def horizon(self):
        """Supremum of the image of tau, 1/(p*lam)."""
        return math.inf if self.lam == 0 else 1.0 / (self.p * self.lam)


def tau(t, params):
    """Rescaled time (1 - exp(-p*lam*t)) / (p*lam); strictly increasing,
    bounded by 1/(p*lam).  Evaluated via expm1 so lam -> 0 degrades to t."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    a = params.p * params.lam
    if a == 0:
        return float(t)
    return -math.expm1(-a * t) / a


def tau_inverse(s, params):
    """Inverse map -ln(1 - p*lam*s) / (p*lam) on [0, 1/(p*lam))."""
    if s < 0:
        raise ValueError(f"s must be >= 0, got {s}")
    a = params.p * params.lam
    if a == 0:
        return float(s)
    if s >= 1.0 / a:
        raise OutOfRange(f"s={s} is at or beyond the horizon 1/(p*lam)={1.0 / a}")
    return -math.log1p(-a * s) / a


def decay_factor(t, params):
    """Pointwise solution scaling exp(-lam*t) (same for p = 1 and p = 2)."""
    return math.exp(-params.lam * t)


def map_solution(u_at_tau, t, params):
    """Scale a non-dissipative solution evaluated at time tau(t) into the
    dissipative solution at time t.  Accepts an array or a TwoComponentState."""
    c = decay_factor(t, params)
    if isinstance(u_at_tau, TwoComponentState):
        return TwoComponentState(c * u_at_tau.m, c * u_at_tau.sigma)
    return c * np.asarray(u_at_tau, dtype=float)


def existence_time(S, lam, p=1):
    """Dissipative lifespan implied by a non-dissipative lifespan S.

    Returns +inf when S >= 1/(p*lam) (the dissipative solution is global),
    otherwise -ln(1 - p*lam*S) / (p*lam).
    """
    if not S > 0:
        raise ValueError(f"S must be positive, got {S}")
    params = TimeMapParams(lam, p)
    if lam == 0:
        return float(S)
    if S >= params.horizon:
        return math.inf
    return tau_inverse(S, params)
