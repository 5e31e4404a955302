"""Finite chain complexes over GF(2) for the chord homology on S^1 x S^2.

The complex has two generators in every degree: Reeb-chord generators away
from degrees 0 and 1, and the critical points of a Morse function on the
circle of constant chords in degrees 0 (minima) and 1 (maxima).  Grading puts
the chord of iteration k >= 1 in degree k + 1 (crossing-form index k + 1/2,
shifted by one half); the time-reversed chords mirror into degrees <= -1 with
negative action.  Acyclicity of the unreduced complex forces every boundary
matrix to be the 2x2 all-ones matrix over GF(2), and the free involution
swapping the two generators per degree makes the quotient complex have one
generator per degree with vanishing boundary.

Degree windows truncate the unbounded complex; the two boundary degrees of a
window see a missing adjacent boundary map and are flagged unreliable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional

import numpy as np

from .errors import BoundaryInconsistency, InvalidWindow, NotEquivariant, NotFree

__all__ = [
    "GeneratorKind",
    "Generator",
    "F2Complex",
    "gf2_rank",
    "build_rfc",
    "forced_boundary",
    "homology",
    "equivariant_quotient",
]


class GeneratorKind(Enum):
    CHORD = "chord"
    CONST_MAX = "const_max"
    CONST_MIN = "const_min"


@dataclass(frozen=True)
class Generator:
    label: str
    degree: int
    action: float
    kind: GeneratorKind


@dataclass
class F2Complex:
    """Graded generators with boundary matrices over GF(2).

    ``boundary[i]`` is the matrix of d_i : C_i -> C_{i-1} (rows indexed by
    the degree i-1 generators, columns by the degree i ones), present for
    i_min < i <= i_max.  ``involution[i]`` is a degree-preserving permutation
    of the generator indices in degree i.
    """

    i_min: int
    i_max: int
    generators: Dict[int, List[Generator]]
    boundary: Dict[int, np.ndarray] = field(default_factory=dict)
    involution: Optional[Dict[int, np.ndarray]] = None

    def degrees(self):
        return range(self.i_min, self.i_max + 1)

    def dim(self, i: int) -> int:
        return len(self.generators.get(i, []))

    def check_boundary_squares_to_zero(self):
        for i in self.degrees():
            if i in self.boundary and (i + 1) in self.boundary:
                prod = (self.boundary[i] @ self.boundary[i + 1]) % 2
                if np.any(prod):
                    raise BoundaryInconsistency(f"d_{i} d_{i+1} != 0")

    def check_involution(self):
        if self.involution is None:
            raise NotFree("no involution attached")
        for i in self.degrees():
            perm = self.involution[i]
            if np.any(perm == np.arange(len(perm))):
                raise NotFree(f"involution fixes a generator in degree {i}")
            if np.any(perm[perm] != np.arange(len(perm))):
                raise NotFree(f"involution is not an involution in degree {i}")
        for i, mat in self.boundary.items():
            p_dom = _perm_matrix(self.involution[i])
            p_cod = _perm_matrix(self.involution[i - 1])
            if np.any((p_cod @ mat) % 2 != (mat @ p_dom) % 2):
                raise NotEquivariant(f"involution does not commute with d_{i}")


def _perm_matrix(perm: np.ndarray) -> np.ndarray:
    n = len(perm)
    m = np.zeros((n, n), dtype=np.uint8)
    m[perm, np.arange(n)] = 1
    return m


def gf2_rank(mat: np.ndarray) -> int:
    """Rank over GF(2) by Gaussian elimination with XOR row updates."""
    m = (np.asarray(mat, dtype=np.uint8) % 2).copy()
    rows, cols = m.shape
    rank = 0
    for c in range(cols):
        pivot = None
        for r in range(rank, rows):
            if m[r, c]:
                pivot = r
                break
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        for r in range(rows):
            if r != rank and m[r, c]:
                m[r] ^= m[rank]
        rank += 1
        if rank == rows:
            break
    return rank


def build_rfc(i_min: int, i_max: int) -> F2Complex:
    """Generators of the chord complex on a degree window, with the free
    involution swapping the two generators of each degree.

    Degree 1 holds the two Morse maxima of the constant-chord circle, degree
    0 the two minima; degree i >= 2 holds the two chords of iteration i - 1
    (action (i-1) pi) and degree i <= -1 the two reversed chords of action
    i pi.
    """
    if not (i_min <= 0 < 1 <= i_max):
        raise InvalidWindow(f"window [{i_min}, {i_max}] must contain degrees 0 and 1")
    gens: Dict[int, List[Generator]] = {}
    invol: Dict[int, np.ndarray] = {}
    for i in range(i_min, i_max + 1):
        if i == 0:
            pair = [Generator("const-1", 0, 0.0, GeneratorKind.CONST_MIN),
                    Generator("const-2", 0, 0.0, GeneratorKind.CONST_MIN)]
        elif i == 1:
            pair = [Generator("const+1", 1, 0.0, GeneratorKind.CONST_MAX),
                    Generator("const+2", 1, 0.0, GeneratorKind.CONST_MAX)]
        else:
            k = i - 1 if i >= 2 else i
            pair = [Generator(f"g1k{k}", i, k * math.pi, GeneratorKind.CHORD),
                    Generator(f"g2k{k}", i, k * math.pi, GeneratorKind.CHORD)]
        gens[i] = pair
        invol[i] = np.array([1, 0])
    return F2Complex(i_min=i_min, i_max=i_max, generators=gens, involution=invol)


def forced_boundary(cx: F2Complex) -> F2Complex:
    """Fill in the boundary forced by acyclicity: every generator maps to the
    sum of both generators one degree below."""
    ones = np.ones((2, 2), dtype=np.uint8)
    for i in range(cx.i_min + 1, cx.i_max + 1):
        if cx.dim(i) != 2 or cx.dim(i - 1) != 2:
            raise InvalidWindow("forced boundary requires two generators per degree")
        cx.boundary[i] = ones.copy()
    cx.check_boundary_squares_to_zero()
    return cx


def homology(cx: F2Complex):
    """GF(2) homology ranks per degree.

    Returns a dict degree -> (rank, reliable); the window-boundary degrees
    are flagged unreliable because one of their adjacent boundary maps is
    truncated away.
    """
    cx.check_boundary_squares_to_zero()
    out = {}
    for i in cx.degrees():
        dim = cx.dim(i)
        rank_in = gf2_rank(cx.boundary[i]) if i in cx.boundary else 0
        rank_out = gf2_rank(cx.boundary[i + 1]) if (i + 1) in cx.boundary else 0
        kernel = dim - rank_in
        reliable = cx.i_min < i < cx.i_max
        out[i] = (kernel - rank_out, reliable)
    return out


def equivariant_quotient(cx: F2Complex) -> F2Complex:
    """Quotient by the free involution: generators become orbits, and the
    boundary descends to the GF(2) sum over orbit representatives."""
    cx.check_involution()
    gens: Dict[int, List[Generator]] = {}
    reps: Dict[int, List[int]] = {}
    orbit_of: Dict[int, np.ndarray] = {}
    for i in cx.degrees():
        perm = cx.involution[i]
        n = len(perm)
        orbit = -np.ones(n, dtype=int)
        rep_list = []
        for a in range(n):
            if orbit[a] < 0:
                orbit[a] = orbit[perm[a]] = len(rep_list)
                rep_list.append(a)
        reps[i] = rep_list
        orbit_of[i] = orbit
        gens[i] = [
            Generator(f"[{cx.generators[i][a].label}]", i,
                      cx.generators[i][a].action, cx.generators[i][a].kind)
            for a in rep_list
        ]
    quo = F2Complex(i_min=cx.i_min, i_max=cx.i_max, generators=gens)
    for i, mat in cx.boundary.items():
        rows = len(reps[i - 1])
        cols = len(reps[i])
        q = np.zeros((rows, cols), dtype=np.uint8)
        for col, a in enumerate(reps[i]):
            for b in range(mat.shape[0]):
                if mat[b, a]:
                    q[orbit_of[i - 1][b], col] ^= 1
        quo.boundary[i] = q
    quo.check_boundary_squares_to_zero()
    return quo
