"""Rotating-frame dynamics of the planar circular restricted three-body problem.

Mass convention (follows the source problem statement, which is the REVERSE of
the common astrodynamics convention): ``mu`` is the mass fraction of the
*Earth*, which sits at ``(1 - mu, 0)``; the Moon has mass ``1 - mu`` and sits
at ``(-mu, 0)``.  Nondimensional units: primary separation 1, total mass 1,
frame angular speed 1.

Two coordinate frames are supported:

* ``Frame.ORIGINAL`` -- center of mass at the origin, Earth at ``(1-mu, 0)``,
  Moon at ``(-mu, 0)``.
* ``Frame.CENTERED`` -- translated by ``s = 1/2 - mu`` so the Earth sits at
  ``(1/2, 0)`` and the Moon at ``(-1/2, 0)``.  The Hamiltonian in this frame
  is defined as the exact pullback of the original one under the translation
  ``(q, p) -> (q - (s, 0), p)``; because the rotational term ``p1 q2 - p2 q1``
  is translation sensitive, the centered Hamiltonian carries an extra
  ``-(1/2 - mu) p2`` term.  Energies and critical values agree between frames
  by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import brentq

from .errors import CollisionSingularity, ConvergenceFailure, NonFiniteInput

__all__ = [
    "Frame",
    "PhaseState",
    "FixComponent",
    "LagrangeData",
    "primary_positions",
    "translate",
    "evaluate_H",
    "hamiltonian_vector_field",
    "effective_potential",
    "lagrange_points",
    "rho",
    "fix_component",
]


class Frame(Enum):
    ORIGINAL = "original"
    CENTERED = "centered"


@dataclass(frozen=True)
class PhaseState:
    """Point (q, p) of phase space in the rotating frame."""

    q1: float
    q2: float
    p1: float
    p2: float

    def as_array(self) -> np.ndarray:
        return np.array([self.q1, self.q2, self.p1, self.p2], dtype=float)

    @staticmethod
    def from_array(y) -> "PhaseState":
        return PhaseState(float(y[0]), float(y[1]), float(y[2]), float(y[3]))


class FixComponent(Enum):
    LEFT_OF_MOON = "left_of_moon"
    BETWEEN = "between"
    RIGHT_OF_EARTH = "right_of_earth"
    NOT_FIXED = "not_fixed"


@dataclass(frozen=True)
class LagrangeData:
    """The five Lagrange points with momenta, sorted by energy value.

    ``points[i]`` is L(i+1); sorting is by ``values`` with ties kept in a
    stable order (the triangular pair L4/L5 always has equal values, which is
    reported rather than broken artificially).
    """

    points: tuple
    values: tuple
    frame: Frame
    mu: float

    @property
    def ties(self):
        out = []
        for i in range(4):
            if math.isclose(self.values[i], self.values[i + 1], rel_tol=0.0, abs_tol=1e-13):
                out.append((i + 1, i + 2))
        return tuple(out)


def primary_positions(mu: float, frame: Frame):
    """Return (earth, moon) positions as complex numbers in the given frame."""
    if frame is Frame.ORIGINAL:
        return complex(1.0 - mu, 0.0), complex(-mu, 0.0)
    return complex(0.5, 0.0), complex(-0.5, 0.0)


def translate(state: PhaseState, mu: float, src: Frame, dst: Frame) -> PhaseState:
    """Exact change of frame; momenta are unchanged."""
    if src is dst:
        return state
    s = 0.5 - mu
    if src is Frame.ORIGINAL:  # to centered
        return PhaseState(state.q1 - s, state.q2, state.p1, state.p2)
    return PhaseState(state.q1 + s, state.q2, state.p1, state.p2)


def _check_finite(state: PhaseState):
    if not all(map(math.isfinite, (state.q1, state.q2, state.p1, state.p2))):
        raise NonFiniteInput(f"non-finite phase state {state}")


def _distances(q1, q2, mu, frame):
    e, m = primary_positions(mu, frame)
    r_e = math.hypot(q1 - e.real, q2 - e.imag)
    r_m = math.hypot(q1 - m.real, q2 - m.imag)
    return r_e, r_m


def evaluate_H(state: PhaseState, mu: float, frame: Frame = Frame.ORIGINAL) -> float:
    """Rotating-frame energy 1/2|p|^2 + p1 q2 - p2 q1 - mu/rE - (1-mu)/rM.

    A primary with zero mass contributes no potential term (and no
    singularity), so the ``mu = 0`` limit is the rotating Kepler problem.
    """
    _check_finite(state)
    q1, q2, p1, p2 = state.q1, state.q2, state.p1, state.p2
    r_e, r_m = _distances(q1, q2, mu, frame)
    if mu > 0.0 and r_e == 0.0:
        raise CollisionSingularity("state coincides with the Earth")
    if mu < 1.0 and r_m == 0.0:
        raise CollisionSingularity("state coincides with the Moon")
    h = 0.5 * (p1 * p1 + p2 * p2) + p1 * q2 - p2 * q1
    if frame is Frame.CENTERED:
        h -= (0.5 - mu) * p2
    if mu > 0.0:
        h -= mu / r_e
    if mu < 1.0:
        h -= (1.0 - mu) / r_m
    return h


def hamiltonian_vector_field(state: PhaseState, mu: float, frame: Frame = Frame.ORIGINAL) -> np.ndarray:
    """Symplectic gradient (dH/dp, -dH/dq) from closed-form derivatives."""
    _check_finite(state)
    q1, q2, p1, p2 = state.q1, state.q2, state.p1, state.p2
    e, m = primary_positions(mu, frame)
    r_e, r_m = _distances(q1, q2, mu, frame)
    if mu > 0.0 and r_e == 0.0:
        raise CollisionSingularity("state coincides with the Earth")
    if mu < 1.0 and r_m == 0.0:
        raise CollisionSingularity("state coincides with the Moon")
    gx = 0.0
    gy = 0.0
    if mu > 0.0:
        re3 = r_e ** 3
        gx += mu * (q1 - e.real) / re3
        gy += mu * q2 / re3
    if mu < 1.0:
        rm3 = r_m ** 3
        gx += (1.0 - mu) * (q1 - m.real) / rm3
        gy += (1.0 - mu) * q2 / rm3
    dh_dp1 = p1 + q2
    dh_dp2 = p2 - q1
    if frame is Frame.CENTERED:
        dh_dp2 -= 0.5 - mu
    dh_dq1 = -p2 + gx
    dh_dq2 = p1 + gy
    return np.array([dh_dp1, dh_dp2, -dh_dq1, -dh_dq2])


def effective_potential(q1: float, q2: float, mu: float, frame: Frame = Frame.ORIGINAL) -> float:
    """Zero-velocity energy V(q) - |q_rot|^2/2; equals H at states with zero
    inertial velocity.  ``q_rot`` is measured from the rotation center."""
    r_e, r_m = _distances(q1, q2, mu, frame)
    if (mu > 0.0 and r_e == 0.0) or (mu < 1.0 and r_m == 0.0):
        raise CollisionSingularity("effective potential at a primary")
    x0 = 0.5 - mu if frame is Frame.CENTERED else 0.0
    u = -0.5 * ((q1 + x0) ** 2 + q2 * q2)
    if mu > 0.0:
        u -= mu / r_e
    if mu < 1.0:
        u -= (1.0 - mu) / r_m
    return u


def _axis_gradient(x: float, mu: float):
    """d/dx of the effective potential on the q2 = 0 axis (original frame),
    and its derivative.  Strictly decreasing between singularities."""
    a = 1.0 - mu  # Earth position
    b = -mu       # Moon position
    dxe = x - a
    dxm = x - b
    f = mu * dxe / abs(dxe) ** 3 + (1.0 - mu) * dxm / abs(dxm) ** 3 - x
    df = -2.0 * mu / abs(dxe) ** 3 - 2.0 * (1.0 - mu) / abs(dxm) ** 3 - 1.0
    return f, df


def _collinear_root(lo: float, hi: float, mu: float) -> float:
    """Root of the axis gradient in (lo, hi) by bracketed bisection plus a
    Newton polish; the gradient is monotone on each interval."""
    f = lambda x: _axis_gradient(x, mu)[0]
    span = hi - lo
    a, b = lo + 1e-12 * span, hi - 1e-12 * span
    # expand inward until the bracket is sign-changing
    for _ in range(60):
        if f(a) > 0.0 > f(b):
            break
        if f(a) <= 0.0:
            a = lo + 0.5 * (a - lo)
        if f(b) >= 0.0:
            b = hi - 0.5 * (hi - b)
    else:
        raise ConvergenceFailure(f"could not bracket collinear point in ({lo}, {hi})")
    x = brentq(f, a, b, xtol=1e-15, rtol=8.9e-16)
    for _ in range(8):
        fx, dfx = _axis_gradient(x, mu)
        if abs(fx) <= 1e-14:
            break
        x -= fx / dfx
    if abs(_axis_gradient(x, mu)[0]) > 1e-13:
        raise ConvergenceFailure("collinear Newton polish did not reach 1e-14")
    return x


def lagrange_points(mu: float, frame: Frame = Frame.ORIGINAL) -> LagrangeData:
    """Locate L1..L5 and their energies, sorted by increasing energy.

    Parameters
    ----------
    mu : float
        Earth mass fraction, strictly inside (0, 1).
    frame : Frame
        Frame in which the returned states are expressed.

    Returns
    -------
    LagrangeData
        Points carry the equilibrium momentum p = (-q2, q1) (original-frame
        values), so the Hamiltonian vector field vanishes there.

    Notes
    -----
    Collinear points come from bracketed root finding on the three axis
    intervals; the triangular points are the exact equilateral configuration
    (the center of mass at the origin makes them critical with no iteration).
    Values satisfy H(L4) = H(L5) for every mu; ties are reported, not broken.
    """
    if not 0.0 < mu < 1.0:
        raise ConvergenceFailure(f"lagrange_points requires 0 < mu < 1, got {mu}")
    x_e = 1.0 - mu
    x_m = -mu
    big = 8.0
    roots = [
        _collinear_root(x_m, x_e, mu),     # between the primaries
        _collinear_root(x_e, x_e + big, mu),
        _collinear_root(x_m - big, x_m, mu),
    ]
    candidates = []
    for x in roots:
        st = PhaseState(x, 0.0, 0.0, x)
        candidates.append((evaluate_H(st, mu, Frame.ORIGINAL), st))
    for sign in (+1.0, -1.0):
        q1, q2 = 0.5 - mu, sign * math.sqrt(3.0) / 2.0
        st = PhaseState(q1, q2, -q2, q1)
        candidates.append((evaluate_H(st, mu, Frame.ORIGINAL), st))
    candidates.sort(key=lambda t: t[0])
    pts, vals = [], []
    for h, st in candidates:
        if np.linalg.norm(hamiltonian_vector_field(st, mu, Frame.ORIGINAL)) > 1e-12:
            raise ConvergenceFailure("critical point failed the gradient bound")
        if frame is Frame.CENTERED:
            st = translate(st, mu, Frame.ORIGINAL, Frame.CENTERED)
        pts.append(st)
        vals.append(h)
    return LagrangeData(points=tuple(pts), values=tuple(vals), frame=frame, mu=mu)


def rho(state: PhaseState) -> PhaseState:
    """Anti-symplectic reflection about the primaries' axis:
    (q1, q2, p1, p2) -> (q1, -q2, -p1, p2).  Frame independent."""
    return PhaseState(state.q1, -state.q2, -state.p1, state.p2)


def fix_component(point, mu: float, frame: Frame = Frame.ORIGINAL, tol: float = 1e-12) -> FixComponent:
    """Classify a point of Fix(rho) by its axis position relative to the
    primaries.

    ``point`` may be a PhaseState (then both q2 = 0 and p1 = 0 are required
    within ``tol``) or a bare position pair (then only q2 = 0 is required).
    """
    if isinstance(point, PhaseState):
        q1, q2 = point.q1, point.q2
        if abs(point.p1) > tol:
            return FixComponent.NOT_FIXED
    else:
        q1, q2 = float(point[0]), float(point[1])
    if abs(q2) > tol:
        return FixComponent.NOT_FIXED
    e, m = primary_positions(mu, frame)
    if q1 > e.real:
        return FixComponent.RIGHT_OF_EARTH
    if q1 < m.real:
        return FixComponent.LEFT_OF_MOON
    if q1 in (e.real, m.real):
        return FixComponent.NOT_FIXED
    return FixComponent.BETWEEN
