"""Adaptive integration of the regularized flow with dense output.

The vector field is the symplectic gradient of the pullback Hamiltonian K,
differentiated with dual numbers; integration is delegated to an embedded
high-order Runge-Kutta pair (DOP853) with dense output.  Energy drift |K| is
monitored at every accepted step; optionally the state is projected back onto
K = 0 along the gradient whenever the drift passes half the tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DriftExceeded, SingularityApproach, StepFailure
from .regularization import KParams, RegState, k_gradient

__all__ = ["IntegratorOptions", "Trajectory", "k_rhs", "integrate"]


@dataclass(frozen=True)
class IntegratorOptions:
    rtol: float = 1e-11
    atol: float = 1e-12
    k_drift_tol: float = 1e-8
    project: bool = False
    z_min: float = 1e-6
    max_step: float = math.inf


def k_rhs(params: KParams):
    """Right-hand side (z1', z2', w1', w2') of the regularized flow."""
    mu, d = params.mu, params.d

    def rhs(_t, y):
        _, g = k_gradient(RegState(y[0], y[1], y[2], y[3]), params)
        return (g[2], g[3], -g[0], -g[1])

    return rhs


@dataclass
class Trajectory:
    """Time-stamped solution with dense output and an event log.

    ``segments`` holds (t_lo, t_hi, dense) triples covering the integration
    span (t_lo/t_hi in integration order, which may be decreasing).
    """

    times: np.ndarray
    states: np.ndarray
    params: KParams
    k_drift: float
    segments: List[Tuple[float, float, object]] = field(default_factory=list)
    events: List[Tuple[str, float, np.ndarray]] = field(default_factory=list)

    @property
    def t0(self) -> float:
        return float(self.times[0])

    @property
    def t1(self) -> float:
        return float(self.times[-1])

    def state(self, t: float) -> np.ndarray:
        for lo, hi, dense in self.segments:
            if min(lo, hi) - 1e-12 <= t <= max(lo, hi) + 1e-12:
                return np.asarray(dense(t), dtype=float)
        raise ValueError(f"t = {t} outside trajectory span [{self.t0}, {self.t1}]")

    def state_reg(self, t: float) -> RegState:
        return RegState.from_array(self.state(t))

    def sample(self, n: int) -> Tuple[np.ndarray, np.ndarray]:
        ts = np.linspace(self.t0, self.t1, n)
        return ts, np.array([self.state(t) for t in ts])


def _project_to_level(y: np.ndarray, params: KParams) -> np.ndarray:
    """Newton steps along grad K back to the zero level set."""
    out = np.array(y, dtype=float)
    for _ in range(4):
        k, g = k_gradient(RegState.from_array(out), params)
        n2 = float(g @ g)
        if n2 == 0.0 or abs(k) < 1e-15:
            break
        out -= k * g / n2
    return out


def integrate(rs: RegState, params: KParams, t_span: Tuple[float, float],
              options: IntegratorOptions = IntegratorOptions()) -> Trajectory:
    """Integrate the regularized flow over ``t_span`` (forward or backward).

    Raises SingularityApproach when |z| falls below ``options.z_min`` (the
    chart boundary at q = infinity), DriftExceeded when |K| exceeds the drift
    tolerance without projection enabled, StepFailure on integrator failure.
    """
    rhs = k_rhs(params)
    z_min2 = options.z_min ** 2

    def hit_singularity(_t, y):
        return y[0] * y[0] + y[1] * y[1] - z_min2

    hit_singularity.terminal = True

    t_cur = float(t_span[0])
    t_end = float(t_span[1])
    y_cur = rs.as_array()
    all_t: List[np.ndarray] = []
    all_y: List[np.ndarray] = []
    segments = []
    events = []
    drift = 0.0
    half_tol = 0.5 * options.k_drift_tol

    for _chunk in range(256):
        sol = solve_ivp(rhs, (t_cur, t_end), y_cur, method="DOP853",
                        rtol=options.rtol, atol=options.atol,
                        dense_output=True, events=[hit_singularity],
                        max_step=options.max_step)
        if sol.status == -1:
            raise StepFailure(sol.message)
        k_vals = np.abs([k_gradient(RegState.from_array(y), params)[0]
                         for y in sol.y.T])
        cut = None
        if options.project:
            over = np.nonzero(k_vals > half_tol)[0]
            if over.size and over[0] > 0:
                cut = int(over[0])
            elif over.size:
                cut = 1
        upto = cut + 1 if cut is not None else len(sol.t)
        all_t.append(sol.t[:upto])
        all_y.append(sol.y[:, :upto].T)
        segments.append((float(sol.t[0]), float(sol.t[upto - 1]), sol.sol))
        drift = max(drift, float(np.max(k_vals[:upto])))
        if sol.status == 1:  # singularity event fired
            t_ev = float(sol.t_events[0][0])
            y_ev = sol.y_events[0][0]
            events.append(("singularity", t_ev, np.array(y_ev)))
            traj = Trajectory(np.concatenate(all_t), np.vstack(all_y), params,
                              drift, segments, events)
            exc = SingularityApproach(f"|z| reached {options.z_min} at t = {t_ev}")
            exc.trajectory = traj
            raise exc
        if cut is None:
            break
        t_cur = float(sol.t[cut])
        y_cur = _project_to_level(sol.y[:, cut], params)
        events.append(("projection", t_cur, np.array(y_cur)))
        if t_cur == t_end:
            break
    times = np.concatenate(all_t)
    states = np.vstack(all_y)
    traj = Trajectory(times, states, params, drift, segments, events)
    if not options.project and drift > options.k_drift_tol:
        raise DriftExceeded(f"|K| drift {drift} exceeds {options.k_drift_tol}")
    return traj
