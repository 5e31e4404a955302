"""Forward-mode dual numbers with a fixed four-slot gradient.

Used to differentiate the regularized Hamiltonian exactly; no numerical
differencing happens on integration hot paths.  The gradient slots follow the
state ordering (z1, z2, w1, w2).
"""

from __future__ import annotations

import math

__all__ = ["Dual4", "seed_state", "dsqrt"]


class Dual4:
    __slots__ = ("v", "g0", "g1", "g2", "g3")

    def __init__(self, v, g0=0.0, g1=0.0, g2=0.0, g3=0.0):
        self.v = v
        self.g0 = g0
        self.g1 = g1
        self.g2 = g2
        self.g3 = g3

    def __repr__(self):
        return f"Dual4({self.v}, grad=({self.g0}, {self.g1}, {self.g2}, {self.g3}))"

    def __add__(self, o):
        if isinstance(o, Dual4):
            return Dual4(self.v + o.v, self.g0 + o.g0, self.g1 + o.g1,
                         self.g2 + o.g2, self.g3 + o.g3)
        return Dual4(self.v + o, self.g0, self.g1, self.g2, self.g3)

    __radd__ = __add__

    def __neg__(self):
        return Dual4(-self.v, -self.g0, -self.g1, -self.g2, -self.g3)

    def __sub__(self, o):
        if isinstance(o, Dual4):
            return Dual4(self.v - o.v, self.g0 - o.g0, self.g1 - o.g1,
                         self.g2 - o.g2, self.g3 - o.g3)
        return Dual4(self.v - o, self.g0, self.g1, self.g2, self.g3)

    def __rsub__(self, o):
        return Dual4(o - self.v, -self.g0, -self.g1, -self.g2, -self.g3)

    def __mul__(self, o):
        if isinstance(o, Dual4):
            a, b = self.v, o.v
            return Dual4(a * b,
                         self.g0 * b + a * o.g0, self.g1 * b + a * o.g1,
                         self.g2 * b + a * o.g2, self.g3 * b + a * o.g3)
        return Dual4(self.v * o, self.g0 * o, self.g1 * o, self.g2 * o, self.g3 * o)

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, Dual4):
            inv = 1.0 / o.v
            q = self.v * inv
            return Dual4(q,
                         (self.g0 - q * o.g0) * inv, (self.g1 - q * o.g1) * inv,
                         (self.g2 - q * o.g2) * inv, (self.g3 - q * o.g3) * inv)
        inv = 1.0 / o
        return Dual4(self.v * inv, self.g0 * inv, self.g1 * inv,
                     self.g2 * inv, self.g3 * inv)

    def __rtruediv__(self, o):
        inv = 1.0 / self.v
        q = o * inv
        s = -q * inv
        return Dual4(q, s * self.g0, s * self.g1, s * self.g2, s * self.g3)

    @property
    def grad(self):
        return (self.g0, self.g1, self.g2, self.g3)


def dsqrt(x):
    """Square root for floats and Dual4 alike."""
    if isinstance(x, Dual4):
        r = math.sqrt(x.v)
        s = 0.5 / r
        return Dual4(r, s * x.g0, s * x.g1, s * x.g2, s * x.g3)
    return math.sqrt(x)


def seed_state(z1, z2, w1, w2):
    """Dual seeds for the four state coordinates."""
    return (Dual4(z1, 1.0, 0.0, 0.0, 0.0),
            Dual4(z2, 0.0, 1.0, 0.0, 0.0),
            Dual4(w1, 0.0, 0.0, 1.0, 0.0),
            Dual4(w2, 0.0, 0.0, 0.0, 1.0))
