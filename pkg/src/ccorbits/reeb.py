"""Closed-form Reeb dynamics on S^1 x S^2 and crossing-form index computation.

The contact form is alpha = cos(theta) d eta + sin^2(theta) d phi in
coordinates (eta on the circle factor, spherical angles theta, phi).  The
Reeb field rotates eta at rate 2 cos(theta)/(1 + cos^2 theta) and phi at rate
1/(1 + cos^2 theta) while preserving theta, so chords between meridians of
{eta = 0} x S^2 solve in closed form.

Index computation follows the crossing-form recipe for a path of 4x4
symplectic matrices written in blocks (A, B; C, D): crossings are the times
where C(t) has kernel, each contributes the signature of
Gamma(t) v = <A(t) v, P Cdot(t) v> on ker C(t), with endpoint crossings
weighted one half.  The weight P accounts for the non-unit coefficient of
the symplectic form (here 2 dx ^ dy + dz ^ d eta, so P = diag(2, 1)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .errors import DegenerateCrossing, IrregularPath, UnsupportedChord

__all__ = [
    "S1S2State",
    "Chord",
    "SymplecticPath",
    "reeb_field",
    "reeb_flow",
    "enumerate_chords",
    "linearized_flow",
    "psi_path",
    "robbin_salamon_index",
]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class S1S2State:
    """Point of S^1 x S^2: circle angle eta, polar angle theta, azimuth phi.

    theta is folded into [0, pi]; at the poles phi is quotiented away and
    stored as 0.
    """

    eta: float
    theta: float
    phi: float

    def normalized(self) -> "S1S2State":
        eta = self.eta % TWO_PI
        theta = self.theta % TWO_PI
        phi = self.phi
        if theta > math.pi:
            theta = TWO_PI - theta
            phi = phi + math.pi
        phi = phi % TWO_PI
        if theta < 1e-14 or math.pi - theta < 1e-14:
            phi = 0.0
        return S1S2State(eta, theta, phi)

    def embed(self) -> np.ndarray:
        """(cos eta, sin eta, sphere point) in R^5; useful for comparisons."""
        st, ct = math.sin(self.theta), math.cos(self.theta)
        return np.array([
            math.cos(self.eta), math.sin(self.eta),
            st * math.cos(self.phi), st * math.sin(self.phi), ct,
        ])


def reeb_field(s: S1S2State) -> np.ndarray:
    """Rates (d eta, d theta, d phi) of the Reeb flow at s."""
    c = math.cos(s.theta)
    den = 1.0 + c * c
    return np.array([2.0 * c / den, 0.0, 1.0 / den])


def reeb_flow(t: float, s: S1S2State) -> S1S2State:
    """Time-t Reeb flow; exact, theta is constant along flow lines."""
    c = math.cos(s.theta)
    den = 1.0 + c * c
    return S1S2State(s.eta + 2.0 * c / den * t, s.theta, s.phi + t / den).normalized()


@dataclass(frozen=True)
class Chord:
    """Reeb chord between the reference meridian and the meridian at azimuth
    phi0, with its crossing-form index when the chord is equatorial.

    family 1 starts at azimuth 0, family 2 at azimuth pi; for chords between
    the same meridian (phi0 = 0) the duration is k pi with k >= 1 and the
    index is k + 1/2.  ``winding`` is the eta-winding number (0 for the
    homotopically trivial chords).
    """

    family: int
    k: int
    duration: float
    start: S1S2State
    end: S1S2State
    index: Optional[Fraction]
    winding: int = 0


def _equatorial_chord(family: int, k: int, phi0: float, compute_index: bool) -> Chord:
    phi_s = 0.0 if family == 1 else math.pi
    duration = phi0 + k * math.pi
    start = S1S2State(0.0, math.pi / 2.0, phi_s).normalized()
    end = reeb_flow(duration, start)
    idx = robbin_salamon_index(psi_path(duration)) if compute_index else None
    return Chord(family, k, duration, start, end, idx)


def enumerate_chords(phi0: float, action_bound: float, homotopy: str = "trivial",
                     compute_index: bool = True) -> list:
    """All Reeb chords from the meridian at azimuth 0 to the meridian at
    azimuth ``phi0``, with duration (= action) up to ``action_bound``.

    ``homotopy='trivial'`` keeps chords with zero eta-winding; the closed-form
    flow then forces theta = pi/2 and the solutions are the two equatorial
    families.  ``homotopy='all'`` adds the nonzero-winding solutions
    cos(theta) = pi m / (phi0 + j pi); these are exploratory output (their
    linearized path is not equatorial and no index is attached).
    """
    if action_bound <= 0.0:
        raise ValueError("action_bound must be positive")
    if not 0.0 <= phi0 < math.pi:
        raise ValueError("phi0 must lie in [0, pi)")
    if homotopy not in ("trivial", "all"):
        raise ValueError("homotopy must be 'trivial' or 'all'")
    chords = []
    k = 1 if phi0 == 0.0 else 0
    while phi0 + k * math.pi <= action_bound + 1e-12:
        for family in (1, 2):
            chords.append(_equatorial_chord(family, k, phi0, compute_index))
        k += 1
    if homotopy == "all":
        j = 0
        while phi0 + j * math.pi <= 2.0 * action_bound + 1e-12:
            span = phi0 + j * math.pi
            if span > 0.0:
                m = 1
                while math.pi * m < span:
                    for sm in (m, -m):
                        c = math.pi * sm / span
                        t = span * (1.0 + c * c)
                        if t <= action_bound + 1e-12:
                            theta = math.acos(c)
                            for family, phi_s in ((1, 0.0), (2, math.pi)):
                                start = S1S2State(0.0, theta, phi_s).normalized()
                                chords.append(Chord(family, j, t, start,
                                                    reeb_flow(t, start), None, sm))
                    m += 1
            j += 1
    chords.sort(key=lambda ch: (ch.duration, abs(ch.winding), ch.family))
    return chords


def linearized_flow(t: float, along: Optional[Chord] = None) -> np.ndarray:
    """Linearized Reeb flow along an equatorial chord, in the Cartesian frame
    (x, z, y, eta) adapted to the reference Lagrangian plane."""
    if along is not None and abs(along.start.theta - math.pi / 2.0) > 1e-12:
        raise UnsupportedChord("linearized flow is available for equatorial chords only")
    ct, st = math.cos(t), math.sin(t)
    return np.array([
        [ct, 0.0, -st, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [st, 0.0, ct, 0.0],
        [0.0, 2.0 * t, 0.0, 1.0],
    ])


@dataclass
class SymplecticPath:
    """Sampled path of symplectic 4x4 matrices with 2x2 block decomposition
    (A, B; C, D) and form-weight P.

    ``fn`` evaluates the path exactly at arbitrary times when available;
    otherwise refinement falls back to linear interpolation of the samples.
    """

    times: np.ndarray
    matrices: np.ndarray
    weight: np.ndarray = field(default_factory=lambda: np.diag([2.0, 1.0]))
    fn: Optional[Callable[[float], np.ndarray]] = None

    def form_matrix(self) -> np.ndarray:
        j = np.zeros((4, 4))
        j[:2, 2:] = self.weight
        j[2:, :2] = -self.weight
        return j

    def at(self, t: float) -> np.ndarray:
        if self.fn is not None:
            return self.fn(t)
        i = int(np.searchsorted(self.times, t, side="right")) - 1
        i = min(max(i, 0), len(self.times) - 2)
        t0, t1 = self.times[i], self.times[i + 1]
        lam = 0.0 if t1 == t0 else (t - t0) / (t1 - t0)
        return (1.0 - lam) * self.matrices[i] + lam * self.matrices[i + 1]

    def validate(self, tol: float = 1e-10):
        j = self.form_matrix()
        for m in self.matrices:
            if np.max(np.abs(m.T @ j @ m - j)) > tol:
                raise IrregularPath("path matrix violates symplecticity")


def psi_path(duration: float, samples_per_pi: int = 256) -> SymplecticPath:
    """SymplecticPath of the equatorial linearized flow over [0, duration]."""
    n = max(8, int(samples_per_pi * duration / math.pi) + 1)
    ts = np.linspace(0.0, duration, n)
    return SymplecticPath(times=ts,
                          matrices=np.array([linearized_flow(t) for t in ts]),
                          fn=linearized_flow)


def _det_c(path: SymplecticPath, t: float) -> float:
    c = path.at(t)[2:, :2]
    return c[0, 0] * c[1, 1] - c[0, 1] * c[1, 0]


def _crossing_signature(path: SymplecticPath, t: float,
                        ker_tol: float, degeneracy_tol: float, h: float = 1e-6) -> int:
    m = path.at(t)
    a, c = m[:2, :2], m[2:, :2]
    u, sing, vt = np.linalg.svd(c)
    kernel = [vt[i] for i in range(2) if sing[i] <= ker_tol]
    if not kernel:
        return 0
    t0, t1 = path.times[0], path.times[-1]
    ta, tb = max(t - h, t0), min(t + h, t1)
    cdot = (path.at(tb)[2:, :2] - path.at(ta)[2:, :2]) / (tb - ta)
    p = path.weight
    dim = len(kernel)
    gamma = np.empty((dim, dim))
    for i, ui in enumerate(kernel):
        for j, uj in enumerate(kernel):
            gamma[i, j] = (a @ ui) @ (p @ (cdot @ uj))
    gamma = 0.5 * (gamma + gamma.T)
    eig = np.linalg.eigvalsh(gamma)
    if np.any(np.abs(eig) < degeneracy_tol):
        raise DegenerateCrossing(
            f"crossing form eigenvalue {eig} below tolerance at t = {t}")
    return int(np.sum(eig > 0) - np.sum(eig < 0))


def robbin_salamon_index(path: SymplecticPath, convention: str = "half-endpoints",
                         det_tol: float = 1e-9, degeneracy_tol: float = 1e-9) -> Fraction:
    """Crossing-form index of a symplectic path relative to the vertical
    Lagrangian (kernel of the lower-left block).

    Crossings are located from sign changes and near-zero dips of det C(t)
    (bisection / local minimization to 1e-12 in t); each interior crossing
    contributes the full signature of the crossing form, the endpoints half.
    """
    if convention != "half-endpoints":
        raise ValueError("only the half-endpoint convention is supported")
    path.validate()
    ts = path.times
    if np.max(np.abs(path.matrices - path.matrices[0])) < 1e-12:
        # constant path: no isolated crossings, index 0 by convention
        return Fraction(0)
    dets = np.array([_det_c(path, t) for t in ts])
    scale = max(float(np.max(np.abs(dets))), 1.0)
    below = np.abs(dets) <= det_tol * scale
    if np.all(below):
        raise DegenerateCrossing("det C vanishes along the whole path")
    crossings = []  # (time, endpoint-flag)
    # contiguous runs of near-zero samples
    i = 0
    n = len(ts)
    while i < n:
        if below[i]:
            j = i
            while j + 1 < n and below[j + 1]:
                j += 1
            if i == 0:
                crossings.append((float(ts[0]), True))
            elif j == n - 1:
                crossings.append((float(ts[-1]), True))
            else:
                crossings.append((0.5 * (float(ts[i]) + float(ts[j])), False))
            i = j + 1
        else:
            i += 1
    # clean sign changes between above-tolerance samples, refined by bisection
    for i in range(n - 1):
        if below[i] or below[i + 1]:
            continue
        if dets[i] * dets[i + 1] < 0.0:
            a, b = float(ts[i]), float(ts[i + 1])
            fa = dets[i]
            for _ in range(80):
                m = 0.5 * (a + b)
                fm = _det_c(path, m)
                if fa * fm <= 0.0:
                    b = m
                else:
                    a, fa = m, fm
                if b - a < 1e-12:
                    break
            crossings.append((0.5 * (a + b), False))
    crossings.sort(key=lambda c: c[0])
    merged = []
    for t, at_end in crossings:
        if merged and abs(t - merged[-1][0]) < 1e-9:
            continue
        merged.append((t, at_end))
    total = Fraction(0)
    for t, at_end in merged:
        sig = _crossing_signature(path, t, ker_tol=math.sqrt(det_tol) * scale,
                                  degeneracy_tol=degeneracy_tol)
        total += (Fraction(1, 2) if at_end else Fraction(1)) * sig
    return total
