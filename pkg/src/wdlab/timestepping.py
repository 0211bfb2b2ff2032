"""Fixed-step classical RK4 integration with snapshots and blow-up detection."""

from dataclasses import dataclass, field

import numpy as np

from .equations import TwoComponentState, make_rhs, velocity_of_state
from .errors import ConfigError

DEFAULT_BLOWUP_THRESHOLD = 1e6

COMPLETED = "completed"
BLOWUP = "blowup"


@dataclass
class IntegratorConfig:
    dt: float
    t_end: float
    snapshot_times: list = field(default_factory=list)
    blowup_threshold: float = DEFAULT_BLOWUP_THRESHOLD
    dealias_enabled: bool = True

    def __post_init__(self):
        if not 0 < self.dt <= self.t_end:
            raise ConfigError(f"need 0 < dt <= t_end, got dt={self.dt}, t_end={self.t_end}")
        if self.blowup_threshold <= 0:
            raise ConfigError("blowup_threshold must be positive")
        for t in self.snapshot_times:
            if not 0 <= t <= self.t_end:
                raise ConfigError(f"snapshot time {t} outside [0, {self.t_end}]")


@dataclass
class Trajectory:
    times: list
    states: list  # TwoComponentState per snapshot
    velocities: list  # velocity field per snapshot
    termination: str = COMPLETED
    t_detect: float = None

    @property
    def blew_up(self):
        return self.termination == BLOWUP

    def state_at(self, t, tol=1e-9):
        for tk, s in zip(self.times, self.states):
            if abs(tk - t) <= tol:
                return s
        raise KeyError(f"no snapshot at t={t}")

    def velocity_at(self, t, tol=1e-9):
        for tk, v in zip(self.times, self.velocities):
            if abs(tk - t) <= tol:
                return v
        raise KeyError(f"no snapshot at t={t}")


def default_dt(grid, v0):
    """CFL-style step heuristic, capped at 1e-3."""
    vmax = max(1.0, float(np.max(np.abs(v0))))
    return min(1e-3, 0.5 * grid.dx / vmax)


def rk4_step(f, y, dt):
    """One classical Runge-Kutta-4 step of y' = f(y)."""
    k1 = f(y)
    k2 = f(y + 0.5 * dt * k1)
    k3 = f(y + 0.5 * dt * k2)
    k4 = f(y + dt * k3)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _slope_max(grid, v):
    return float(np.max(np.abs(grid.deriv(v, 1))))


def _check_state(grid, y, spec, threshold):
    """Velocity field and blow-up flag for a stacked state."""
    if not np.all(np.isfinite(y)):
        return None, True
    v = velocity_of_state(grid, TwoComponentState(y[0], y[1]), spec)
    if not np.all(np.isfinite(v)) or _slope_max(grid, v) > threshold:
        return v, True
    return v, False


def integrate(grid, initial, spec, config):
    """RK4 integration with snapshots at integer multiples of dt.

    Every requested snapshot time must be an integer multiple of dt (to
    1e-9 absolute).  Blow-up (slope above threshold or non-finite values)
    terminates the trajectory normally with termination = "blowup".
    """
    dt = config.dt
    nsteps = int(round(config.t_end / dt))
    if abs(nsteps * dt - config.t_end) > 1e-9:
        raise ConfigError(f"t_end={config.t_end} is not a multiple of dt={dt}")
    snap_steps = {}
    for t in config.snapshot_times:
        k = int(round(t / dt))
        if abs(k * dt - t) > 1e-9:
            raise ConfigError(f"snapshot time {t} is not a multiple of dt={dt}")
        snap_steps[k] = t

    f = make_rhs(grid, spec, dealias=config.dealias_enabled)
    y = initial.stacked().astype(float)
    traj = Trajectory([], [], [])

    v, bad = _check_state(grid, y, spec, config.blowup_threshold)
    if bad:
        traj.termination = BLOWUP
        traj.t_detect = 0.0
        return traj
    if 0 in snap_steps:
        _record(traj, grid, snap_steps[0], y, spec)

    for i in range(1, nsteps + 1):
        y = rk4_step(f, y, dt)
        t = i * dt
        v, bad = _check_state(grid, y, spec, config.blowup_threshold)
        if bad:
            traj.termination = BLOWUP
            traj.t_detect = t
            return traj
        if i in snap_steps:
            _record(traj, grid, snap_steps[i], y, spec, v)
    return traj


def integrate_to_times(grid, initial, spec, base_dt, times,
                       blowup_threshold=DEFAULT_BLOWUP_THRESHOLD,
                       dealias_enabled=True):
    """Integrate with steps <= base_dt, landing exactly on every target time.

    Each segment between consecutive targets is covered by full base_dt
    steps plus one shortened final step, so no temporal interpolation is
    ever needed.
    """
    times = list(times)
    if any(t < 0 for t in times) or any(b < a for a, b in zip(times, times[1:])):
        raise ConfigError("target times must be sorted and nonnegative")
    if base_dt <= 0:
        raise ConfigError("base_dt must be positive")

    f = make_rhs(grid, spec, dealias=dealias_enabled)
    y = initial.stacked().astype(float)
    traj = Trajectory([], [], [])
    t = 0.0
    for target in times:
        seg = target - t
        if seg > 1e-12:
            nfull = int(seg / base_dt + 1e-6)
            rem = seg - nfull * base_dt
            steps = [base_dt] * nfull
            if rem > 1e-12 * max(1.0, base_dt):
                steps.append(rem)
            for h in steps:
                y = rk4_step(f, y, h)
                t += h
                _, bad = _check_state(grid, y, spec, blowup_threshold)
                if bad:
                    traj.termination = BLOWUP
                    traj.t_detect = t
                    return traj
        t = target
        _record(traj, grid, target, y, spec)
    return traj


def _record(traj, grid, t, y, spec, v=None):
    state = TwoComponentState.from_stacked(y)
    if v is None:
        v = velocity_of_state(grid, state, spec)
    traj.times.append(t)
    traj.states.append(state)
    traj.velocities.append(v)
