"""Rotating Kepler limit: period arithmetic and the radial collision oracle.

At zero Earth mass the rotating problem is integrable; its collision orbits
are rectilinear ellipses whose line rotates at unit rate in the co-rotating
frame.  A symmetric consecutive collision orbit is one whose apoapsis lands
on the axis component left of the Moon with zero axis-parallel velocity, and
these are available in closed form up to one smooth quadrature for the
regularized time.  They anchor the shooting and continuation machinery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.integrate import quad

from .errors import DomainError
from .regularization import Primary, RegState, fiber_radius

__all__ = [
    "kepler_period",
    "PeriodicityResult",
    "kepler_periodicity",
    "RadialCollisionOracle",
]

TWO_PI = 2.0 * math.pi


def kepler_period(d: float) -> float:
    """Period T = sqrt(pi / (2 d^3)) of the closed-form criterion.

    Taken verbatim as printed; requires d > 0.
    """
    if d <= 0.0:
        raise DomainError(f"period formula needs d > 0, got {d}")
    return math.sqrt(math.pi / (2.0 * d ** 3))


@dataclass(frozen=True)
class PeriodicityResult:
    periodic: bool
    period: float
    ratio: float
    fraction: Optional[Fraction]


def kepler_periodicity(d: float, tolerance: float = 1e-12,
                       max_denominator: int = 1000) -> PeriodicityResult:
    """Test whether T(d) is a rational multiple of the frame period 2 pi.

    Rationality is detected by continued fractions (best rational
    approximation with bounded denominator) within ``tolerance``.
    """
    period = kepler_period(d)
    ratio = period / TWO_PI
    frac = Fraction(ratio).limit_denominator(max_denominator)
    if abs(ratio - float(frac)) <= tolerance:
        return PeriodicityResult(True, period, ratio, frac)
    return PeriodicityResult(False, period, ratio, None)


class RadialCollisionOracle:
    """Closed-form symmetric Moon-collision orbits of the regularized
    rotating Kepler problem (mu = 0) at energy d < -3/2 + epsilon regime.

    The orbit launches from the collision, reaches apoapsis r = 2a
    (a = -1/(2d)) at physical half-period pi a^{3/2}, and is symmetric when
    the apoapsis points along the negative axis.  ``j`` counts extra full
    radial periods before the aligned apoapsis; each j gives a distinct
    orbit.  All states are reported in the Birkhoff chart of the centered
    frame, on the branch selected by the launch angle.
    """

    def __init__(self, d: float, j: int = 0):
        if d >= 0.0:
            raise DomainError("bound orbits require d < 0")
        self.d = d
        self.j = j
        self.a = -1.0 / (2.0 * d)
        self.t_half = math.pi * self.a ** 1.5
        self.t_period = 2.0 * self.t_half
        self.e_apex = math.pi * (1 + 2 * j)
        t_apex = self.t_half + j * self.t_period
        self.t_apex = t_apex
        self.theta0 = (math.pi + t_apex) % TWO_PI
        self.psi = (self.theta0 / 2.0 + math.pi / 2.0) % TWO_PI

    # -- physical-frame elements -------------------------------------------------
    def physical_time(self, ecc: float) -> float:
        return self.a ** 1.5 * (ecc - math.sin(ecc))

    def q_centered(self, ecc: float) -> complex:
        r = self.a * (1.0 - math.cos(ecc))
        theta = self.theta0 - self.physical_time(ecc)
        return r * complex(math.cos(theta), math.sin(theta)) - 0.5

    def momentum(self, ecc: float) -> complex:
        rdot = math.sin(ecc) / (math.sqrt(self.a) * (1.0 - math.cos(ecc)))
        theta = self.theta0 - self.physical_time(ecc)
        return rdot * complex(math.cos(theta), math.sin(theta))

    def reg_time(self, ecc: float) -> float:
        """Regularized time via the smooth quadrature
        tau = sqrt(a) * integral dE / |q_c(E) - 1/2|."""
        f = lambda e: 1.0 / abs(self.q_centered(e) - 0.5)
        val, _err = quad(f, 0.0, ecc, limit=200)
        return math.sqrt(self.a) * val

    # -- Birkhoff-chart trajectory ------------------------------------------------
    def seed(self):
        """(psi, tau) launching data for the shooter, Moon fiber."""
        return self.psi, self.reg_time(self.e_apex)

    def start_state(self) -> RegState:
        r = fiber_radius(Primary.MOON, 0.0)
        return RegState.from_complex(complex(-0.5, 0.0),
                                     r * complex(math.cos(self.psi), math.sin(self.psi)))

    def branch_track(self, n: int = 600):
        """Sampled (tau_like E grid, z, w) along the chord, tracking the
        double-cover branch continuously from the collision."""
        eccs = np.linspace(1e-6, self.e_apex, n)
        zs = np.empty(n, dtype=complex)
        ws = np.empty(n, dtype=complex)
        w_seed = self.start_state().w
        prev = None
        for i, ecc in enumerate(eccs):
            qc = self.q_centered(ecc)
            disc = np.sqrt(complex(qc * qc - 0.25))
            roots = (qc + disc, qc - disc)
            if prev is None:
                # choose the lift whose fiber direction matches the seed
                best = None
                for z in roots:
                    zb2 = np.conj(z) ** 2
                    w = self.momentum(ecc) * (zb2 - 0.25) / (2.0 * zb2)
                    err = abs(w - w_seed)
                    if best is None or err < best[0]:
                        best = (err, z, w)
                _, z, w = best
            else:
                z = min(roots, key=lambda r: abs(r - prev))
                zb2 = np.conj(z) ** 2
                w = self.momentum(ecc) * (zb2 - 0.25) / (2.0 * zb2)
            zs[i], ws[i] = z, w
            prev = z
        return eccs, zs, ws

    def apex_state(self) -> RegState:
        """Chord endpoint on the fixed locus of the axis reflection: z real
        (left of the Moon), w = 0."""
        _, zs, _ = self.branch_track()
        qc = self.q_centered(self.e_apex)
        disc = np.sqrt(complex(qc * qc - 0.25))
        z = min((qc + disc, qc - disc), key=lambda r: abs(r - zs[-1]))
        return RegState(float(z.real), float(z.imag), 0.0, 0.0)
