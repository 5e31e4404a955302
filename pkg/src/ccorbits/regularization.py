"""Birkhoff and Moser regularization of the restricted three-body problem.

The Birkhoff chart uses two complex coordinates (z, w); the position map

    b(z) = (z^2 + 1/4) / (2 z)

is a branched double cover of the centered configuration plane with branch
points z = +1/2 (Earth) and z = -1/2 (Moon).  Its cotangent lift sends

    (z, w)  ->  ( (z^2 + 1/4)/(2z),  2 conj(z)^2 w / (conj(z)^2 - 1/4) ).

The regularized Hamiltonian at energy level d is *defined* as the pullback

    K = |q - 1/2| |q + 1/2| (H(q, p) - d)

through that lift, with H the centered-frame Hamiltonian.  The poles of the
momentum map at z = +-1/2 cancel algebraically against the distance factors;
``evaluate_K`` uses the cancelled closed form, which is finite everywhere
except z = 0 (the image of q = infinity).  The explicit formula printed in
the source material differs from this pullback by the term
(1 - 2 mu) Re(z)/|z| (its potential terms pair mu with the opposite branch
point); it is kept as a cross-check variant.

On the collision fibers the pullback gives

    K(+1/2, w) = |w|^2/8 - mu,        K(-1/2, w) = |w|^2/8 - (1 - mu),

so the Earth fiber has radius 2 sqrt(2 mu) and the Moon fiber radius
2 sqrt(2 (1 - mu)) at every energy level.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .dual import Dual4, dsqrt, seed_state
from .dynamics import Frame, PhaseState
from .errors import (
    BirkhoffSingularity,
    ChartSingularity,
    NonFiniteInput,
    NonUnitQuaternion,
)

__all__ = [
    "RegState",
    "MoserState",
    "KParams",
    "KVariant",
    "Primary",
    "birkhoff_position",
    "birkhoff_map",
    "birkhoff_preimage",
    "deck",
    "rho1",
    "rho2",
    "k_value",
    "evaluate_K",
    "k_gradient",
    "K_vector_field",
    "fiber_radius",
    "stereographic",
    "frame_matrix",
    "moser_map",
    "moser_birkhoff",
    "moser_birkhoff_shifted",
    "quaternion_cover",
    "quaternion_rotation",
    "QUAT_FRAME_FIX",
]

_SING_TOL = 1e-13


class Primary(Enum):
    EARTH = "earth"
    MOON = "moon"


class KVariant(Enum):
    PULLBACK = "pullback"
    DISPLAYED = "displayed"


@dataclass(frozen=True)
class RegState:
    """Birkhoff-chart point; z = z1 + i z2 (position), w = w1 + i w2 (momentum)."""

    z1: float
    z2: float
    w1: float
    w2: float

    @property
    def z(self) -> complex:
        return complex(self.z1, self.z2)

    @property
    def w(self) -> complex:
        return complex(self.w1, self.w2)

    @staticmethod
    def from_complex(z: complex, w: complex) -> "RegState":
        return RegState(z.real, z.imag, w.real, w.imag)

    def as_array(self) -> np.ndarray:
        return np.array([self.z1, self.z2, self.w1, self.w2], dtype=float)

    @staticmethod
    def from_array(y) -> "RegState":
        return RegState(float(y[0]), float(y[1]), float(y[2]), float(y[3]))


@dataclass(frozen=True)
class KParams:
    """Mass ratio and energy level entering the regularized Hamiltonian."""

    mu: float
    d: float


@dataclass(frozen=True)
class MoserState:
    """Point of T*S^2 embedded in R^3 x R^3: x on the unit sphere, xi
    a covector identified with a vector orthogonal to x."""

    x: np.ndarray
    xi: np.ndarray

    @property
    def fiber_complex(self) -> complex:
        """Fiber value in the moving frame of the trivialization.  At the
        north pole the frame limits to the identity, so this is xi1 + i xi2."""
        x3 = self.x[2]
        if x3 > 1.0 - 1e-12:
            return complex(self.xi[0], self.xi[1])
        base = complex(self.x[0], self.x[1]) / (1.0 - x3)
        c = frame_matrix(base) @ self.xi
        return complex(c[0], c[1])


def _check_z(z: complex):
    if abs(z) < _SING_TOL:
        raise BirkhoffSingularity("z = 0 corresponds to q = infinity")


def birkhoff_position(z: complex) -> complex:
    """The branched double cover b(z) = (z^2 + 1/4)/(2z)."""
    _check_z(z)
    return (z * z + 0.25) / (2.0 * z)


def birkhoff_map(rs: RegState) -> PhaseState:
    """Cotangent-lifted chart map to the centered frame.

    The momentum component has poles on the collision fibers, so z = +-1/2 is
    excluded here (the flow itself is regular there; use ``evaluate_K`` /
    ``K_vector_field`` for on-fiber quantities).
    """
    z, w = rs.z, rs.w
    _check_z(z)
    zb2 = z.conjugate() ** 2
    if abs(zb2 - 0.25) < _SING_TOL:
        raise BirkhoffSingularity("momentum map has a pole at z = +-1/2")
    q = (z * z + 0.25) / (2.0 * z)
    p = 2.0 * zb2 * w / (zb2 - 0.25)
    return PhaseState(q.real, q.imag, p.real, p.imag)


def birkhoff_preimage(q: complex, branch: int = 0) -> complex:
    """One of the two z with b(z) = q; ``branch`` selects the root, and the
    two roots are deck images of each other."""
    disc = cmath.sqrt(q * q - 0.25)
    z = q + disc if branch == 0 else q - disc
    if abs(z) < _SING_TOL:
        z = q - disc if branch == 0 else q + disc
    return z


def deck(rs: RegState) -> RegState:
    """Symplectic deck transformation of the double cover:
    (z, w) -> (1/(4z), -4 conj(z)^2 w)."""
    z, w = rs.z, rs.w
    _check_z(z)
    return RegState.from_complex(1.0 / (4.0 * z), -4.0 * z.conjugate() ** 2 * w)


def rho1(rs: RegState) -> RegState:
    """Anti-symplectic lift of the axis reflection fixing R x iR:
    (z, w) -> (conj z, -conj w)."""
    return RegState(rs.z1, -rs.z2, -rs.w1, rs.w2)


def rho2(rs: RegState) -> RegState:
    """The other anti-symplectic lift: (z, w) -> (1/(4 conj z), 4 z^2 conj w)."""
    z, w = rs.z, rs.w
    _check_z(z)
    return RegState.from_complex(1.0 / (4.0 * z.conjugate()), 4.0 * z * z * w.conjugate())


# ---------------------------------------------------------------------------
# regularized Hamiltonian

def k_value(z, w, mu: float, d: float, variant: KVariant = KVariant.PULLBACK):
    """K on complex inputs; accepts scalars or numpy arrays.

    PULLBACK is the defining closed form (distance factors cancelled against
    the momentum poles once, by hand); DISPLAYED transcribes the explicit
    printed expression with the same cancellation applied to its rotation
    term.  Both are finite at z = +-1/2 and differ by (1-2mu) Re(z)/|z|.
    """
    z = np.asarray(z, dtype=complex) if not np.isscalar(z) else z
    az2 = (z * np.conj(z)).real
    if np.any(np.asarray(az2) < _SING_TOL**2):
        raise BirkhoffSingularity("z = 0 corresponds to q = infinity")
    az = np.sqrt(az2)
    zme = ((z - 0.5) * np.conj(z - 0.5)).real
    zpl = ((z + 0.5) * np.conj(z + 0.5)).real
    wb = np.conj(w)
    kin = 0.5 * az2 * (w * wb).real
    dterm = -d * zme * zpl / (4.0 * az2)
    if variant is KVariant.PULLBACK:
        pot = -(mu * zpl + (1.0 - mu) * zme) / (2.0 * az)
        f = z * (z * z + (1.0 - 2.0 * mu) * z + 0.25) * (np.conj(z) ** 2 - 0.25)
        rot = (f * wb).imag / (4.0 * az2)
    else:
        pot = -(mu * zme + (1.0 - mu) * zpl) / (2.0 * az)
        t1 = z * wb * (z + 0.5) * zpl * (np.conj(z) - 0.5)
        t2 = -2.0 * mu * z * z * wb * (np.conj(z) ** 2 - 0.25)
        rot = (t1 + t2).imag / (4.0 * az2)
    return kin + pot + rot + dterm


def evaluate_K(rs: RegState, params: KParams, variant: KVariant = KVariant.PULLBACK) -> float:
    if not all(map(math.isfinite, (rs.z1, rs.z2, rs.w1, rs.w2))):
        raise NonFiniteInput(f"non-finite regularized state {rs}")
    return float(k_value(rs.z, rs.w, params.mu, params.d, variant))


def _k_real(z1, z2, w1, w2, mu, d):
    """Pullback K written in real arithmetic, generic over float / Dual4."""
    az2 = z1 * z1 + z2 * z2
    az = dsqrt(az2)
    zme = (z1 - 0.5) * (z1 - 0.5) + z2 * z2
    zpl = (z1 + 0.5) * (z1 + 0.5) + z2 * z2
    # F = z (z^2 + (1-2mu) z + 1/4) (conj(z)^2 - 1/4)
    a_r = z1 * z1 - z2 * z2
    a_i = 2.0 * z1 * z2
    c = 1.0 - 2.0 * mu
    b_r = a_r + c * z1 + 0.25
    b_i = a_i + c * z2
    cz_r = z1 * b_r - z2 * b_i
    cz_i = z1 * b_i + z2 * b_r
    d_r = a_r - 0.25
    d_i = -a_i
    f_r = cz_r * d_r - cz_i * d_i
    f_i = cz_r * d_i + cz_i * d_r
    rot = (f_i * w1 - f_r * w2) / (4.0 * az2)
    pot = -(mu * zpl + (1.0 - mu) * zme) / (2.0 * az)
    dterm = -d * (zme * zpl) / (4.0 * az2)
    return 0.5 * az2 * (w1 * w1 + w2 * w2) + pot + rot + dterm


def k_gradient(rs: RegState, params: KParams):
    """(K, dK/d(z1,z2,w1,w2)) of the pullback variant via dual numbers."""
    if rs.z1 * rs.z1 + rs.z2 * rs.z2 < _SING_TOL**2:
        raise BirkhoffSingularity("z = 0 corresponds to q = infinity")
    zz1, zz2, ww1, ww2 = seed_state(rs.z1, rs.z2, rs.w1, rs.w2)
    k = _k_real(zz1, zz2, ww1, ww2, params.mu, params.d)
    return k.v, np.array(k.grad)


def K_vector_field(rs: RegState, params: KParams) -> np.ndarray:
    """Hamiltonian vector field of the pullback K in (z1, z2, w1, w2) order."""
    _, g = k_gradient(rs, params)
    return np.array([g[2], g[3], -g[0], -g[1]])


def fiber_radius(primary: Primary, mu: float) -> float:
    """|w| on the collision fiber over the given primary (pullback K)."""
    mass = mu if primary is Primary.EARTH else 1.0 - mu
    return 2.0 * math.sqrt(2.0 * mass)


# ---------------------------------------------------------------------------
# Moser side

def stereographic(x: complex) -> np.ndarray:
    """Inverse stereographic projection onto the unit sphere; 0 maps to the
    south pole and infinity to the north pole."""
    n2 = (x * x.conjugate()).real
    return np.array([2.0 * x.real, 2.0 * x.imag, n2 - 1.0]) / (1.0 + n2)


def frame_matrix(x: complex) -> np.ndarray:
    """Orthogonal matrix carrying the tangent plane at stereographic(x) to
    the horizontal coordinate plane; degenerates at x = 0 (south pole)."""
    x1, x2 = x.real, x.imag
    n2 = x1 * x1 + x2 * x2
    if n2 < 1e-26:
        raise ChartSingularity("frame matrix undefined at the south pole")
    den = n2 * n2 + n2
    return np.array([
        [2.0 * x2 * x2 + n2 * n2 - n2, -2.0 * x1 * x2, -2.0 * n2 * x1],
        [-2.0 * x1 * x2, 2.0 * x1 * x1 + n2 * n2 - n2, -2.0 * n2 * x2],
        [2.0 * n2 * x1, 2.0 * n2 * x2, n2 * n2 - n2],
    ]) / den


def _tphi(x: complex, xi: complex) -> MoserState:
    """Cotangent lift of the inverse stereographic projection, with the fiber
    reconstructed from the moving-frame value."""
    n2 = (x * x.conjugate()).real
    c = -(n2 + 1.0) / (2.0 * n2) * x * x * xi.conjugate()
    eta = frame_matrix(x).T @ np.array([c.real, c.imag, 0.0])
    return MoserState(x=stereographic(x), xi=eta)


def moser_map(ps: PhaseState) -> MoserState:
    """Switch base and fiber, then lift through the stereographic chart.

    Expects coordinates already translated so the regularized primary sits at
    the origin.  The switched base point is x = -p; p = 0 (south-pole chart)
    is excluded.
    """
    x = complex(-ps.p1, -ps.p2)
    if abs(x) < 1e-13:
        raise ChartSingularity("moser_map undefined at p = 0 (south pole)")
    return _tphi(x, complex(ps.q1, ps.q2))


def moser_birkhoff_shifted(zp: complex, w: complex, which: Primary) -> MoserState:
    """Composition of the Moser map with the shifted Birkhoff chart around
    the given primary's branch point.

    The chart coordinate zp is z - 1/2 for the Earth and z + 1/2 for the
    Moon; the image is translated so the primary sits at the origin.  The
    composed formulas below keep the numerator of the position exactly
    quadratic in zp, which avoids the catastrophic cancellation the
    unshifted chart suffers near the fiber.  At zp = 0 the closed-form limit
    is (north pole, -w^2/8) for the Earth chart and (north pole, +w^2/8) for
    the Moon chart.
    """
    zb = zp.conjugate()
    if which is Primary.EARTH:
        if zp == 0:
            c = -w * w / 8.0
            return MoserState(x=np.array([0.0, 0.0, 1.0]),
                              xi=np.array([c.real, c.imag, 0.0]))
        q = zp * zp / (2.0 * zp + 1.0)
        p = (4.0 * zb * zb + 4.0 * zb + 1.0) * w / (2.0 * zb * zb + 2.0 * zb)
    else:
        if zp == 0:
            c = w * w / 8.0
            return MoserState(x=np.array([0.0, 0.0, 1.0]),
                              xi=np.array([c.real, c.imag, 0.0]))
        q = zp * zp / (2.0 * zp - 1.0)
        p = (4.0 * zb * zb - 4.0 * zb + 1.0) * w / (2.0 * zb * zb - 2.0 * zb)
    return _tphi(-p, q)


def moser_birkhoff(rs: RegState, which: Primary) -> MoserState:
    """Same as :func:`moser_birkhoff_shifted` but on a global chart state."""
    off = 0.5 if which is Primary.EARTH else -0.5
    return moser_birkhoff_shifted(complex(rs.z1 - off, rs.z2), rs.w, which)


# ---------------------------------------------------------------------------
# quaternion double cover of the unit cotangent bundle

# Rotates the jk-plane by pi/4; chosen so the preimages of the two reference
# Legendrian circles land in the span of {1, i, j}.
QUAT_FRAME_FIX = np.array([
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 1.0 / math.sqrt(2.0), -1.0 / math.sqrt(2.0)],
    [0.0, 0.0, 1.0 / math.sqrt(2.0), 1.0 / math.sqrt(2.0)],
])


def quaternion_rotation(qt: np.ndarray) -> np.ndarray:
    """SO(3) matrix of v -> q v q^{-1} for a unit quaternion (1, i, j, k)."""
    a, b, c, d = qt
    return np.array([
        [1 - 2 * (c * c + d * d), 2 * (b * c - d * a), 2 * (b * d + c * a)],
        [2 * (b * c + d * a), 1 - 2 * (b * b + d * d), 2 * (c * d - b * a)],
        [2 * (b * d - c * a), 2 * (c * d + b * a), 1 - 2 * (b * b + c * c)],
    ])


def quaternion_cover(qt, apply_frame_fix: bool = True):
    """Double cover S^3 -> U*S^2: send q to the unit-cotangent point whose
    associated rotation matrix has columns (v, p, v x p).

    Returns (p, v): base point p on S^2 and unit covector v at p.  Antipodal
    quaternions map to the same point.  With ``apply_frame_fix`` the input is
    first rotated by :data:`QUAT_FRAME_FIX`.
    """
    qt = np.asarray(qt, dtype=float)
    if qt.shape != (4,):
        raise NonUnitQuaternion("quaternion must be a 4-vector")
    n = float(np.linalg.norm(qt))
    if abs(n - 1.0) > 1e-12:
        raise NonUnitQuaternion(f"|q| = {n} is not within 1e-12 of 1")
    if apply_frame_fix:
        qt = QUAT_FRAME_FIX @ qt
    r = quaternion_rotation(qt / np.linalg.norm(qt))
    v = r[:, 0]
    p = r[:, 1]
    return p, v
