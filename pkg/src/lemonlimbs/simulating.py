"""Pairs of m_3 cycles that imitate a periodic cycle of the doubling map.

For a cycle {t_1 < ... < t_q} of m_2 with combinatorics sigma, the q + 1 cycles
of m_3 realizing sigma are numbered O_0..O_q by how many of their points lie in
[0, 1/2).  The marked angle t = t_k is simulated by x-points from O_k and
y-points from O_{k-1}; the arcs I_i = [x_i, y_i] are the plateaus of a monotone
projection of the circle that turns m_3 into m_2.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .angles import Angle, Orbit, format_angle_list, forward_orbit
from .combinatorics import (
    Permutation,
    combinatorics,
    degree,
    enumerate_realizations,
    permutation_of_points,
)
from .errors import NotM2Combinatorics

HALF = Fraction(1, 2)


def is_m2_combinatorics(sigma: Permutation) -> bool:
    q = sigma.size
    if q == 1:
        return True
    d = degree(sigma)
    if d == 1:
        return sigma(q) < sigma(1)
    if d == 2:
        return sigma(q) > sigma(1)
    return False


def realizations_ordered(sigma: Permutation) -> list:
    """O_0..O_q: the m_3 realizations of sigma indexed by their count in [0, 1/2)."""
    if not is_m2_combinatorics(sigma):
        raise NotM2Combinatorics(f"{sigma} is not the combinatorics of a doubling cycle")
    q = sigma.size
    orbits = enumerate_realizations(sigma, 3)
    by_count = {o.count_below(HALF): o for o in orbits}
    assert sorted(by_count) == list(range(q + 1)), "deployment counts are not 0..q"
    return [by_count[i] for i in range(q + 1)]


@dataclass(frozen=True)
class SimulatingPair:
    t: Angle
    k: int
    orbit_t: Orbit
    ox: Orbit
    oy: Orbit
    x_k: Angle
    y_k: Angle
    yprime_k: Angle
    xprime_k: Angle

    @property
    def q(self) -> int:
        return len(self.orbit_t)

    @property
    def sigma(self) -> Permutation:
        return combinatorics(self.orbit_t)

    def interval(self, i: int) -> tuple:
        """Endpoints (x_i, y_i) of the i-th arc, 1-based."""
        return self.ox[i - 1], self.oy[i - 1]

    def intervals(self) -> list:
        return [self.interval(i) for i in range(1, self.q + 1)]

    def record(self) -> str:
        return (
            f"t={self.t} k={self.k} x={self.x_k} y={self.y_k} "
            f"x'={self.xprime_k} y'={self.yprime_k} "
            f"Ox={format_angle_list(self.ox)} Oy={format_angle_list(self.oy)}"
        )


def simulating_pair(t) -> SimulatingPair:
    t = Angle.of(t)
    orb = forward_orbit(2, t)
    k = orb.index(t)
    levels = realizations_ordered(combinatorics(orb))
    ox, oy = levels[k], levels[k - 1]
    x, y = ox[k - 1], oy[k - 1]
    third = Fraction(1, 3)
    return SimulatingPair(t, k, orb, ox, oy, x, y, y - third, x + third)


def interlaces(sp: SimulatingPair) -> bool:
    pts = []
    for x, y in sp.intervals():
        pts.extend([x.value, y.value])
    if any(a >= b for a, b in zip(pts, pts[1:])):
        return False
    return sp.x_k.value < HALF <= sp.y_k.value


def interval_lengths_ok(sp: SimulatingPair) -> bool:
    """|I_{sigma^i(k)}| == 3^(i-1) / (3^q - 1) for i = 1..q, exactly."""
    q, sigma = sp.q, sp.sigma
    j = sp.k
    for i in range(1, q + 1):
        j = sigma(j)
        x, y = sp.interval(j)
        if y.value - x.value != Fraction(3 ** (i - 1), 3**q - 1):
            return False
    return True


def primed_order_ok(sp: SimulatingPair) -> bool:
    x, yp, xp, y = sp.x_k.value, sp.yprime_k.value, sp.xprime_k.value, sp.y_k.value
    return x < yp < HALF < xp < y


@dataclass(frozen=True)
class Projection:
    """Value of the projection as a dyadic bracket [lo, hi].

    ``lo == hi`` when the value is known exactly; ``plateau`` is set when the
    angle sits on a collapsed arc.
    """

    lo: Fraction
    hi: Fraction
    plateau: bool = False

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    def contains(self, value) -> bool:
        return self.lo <= Fraction(value) <= self.hi


def _outside_third(sp: SimulatingPair) -> Fraction:
    # exactly one of 1/3, 2/3 lies outside I_k; the projection sends it to 1/2
    x, y = sp.x_k.value, sp.y_k.value
    return Fraction(2, 3) if x <= Fraction(1, 3) <= y else Fraction(1, 3)


def project_angle(sp: SimulatingPair, theta, depth: int = 64) -> Projection:
    """Monotone projection of the circle collapsing each I_i to t_i.

    Binary digits of the image are read off the m_3 itinerary of theta with
    respect to the cut [0, h) | [h, 1), where h is the preimage of 0 outside
    I_k.  The walk stops early on entering an arc I_i, on reaching 0, or on
    closing a cycle, and then the value is exact.
    """
    theta = Angle.of(theta)
    h = _outside_third(sp)
    arcs = [(x.value, y.value, t.value) for (x, y), t in zip(sp.intervals(), sp.orbit_t)]
    phi = theta.value
    bits = 0
    seen: dict = {}
    for n in range(depth + 1):
        scale = 2**n
        for lo, hi, tv in arcs:
            if lo <= phi <= hi:
                v = (bits + tv) / scale
                return Projection(v, v, plateau=True)
        if phi == 0:
            v = Fraction(bits, scale)
            return Projection(v, v)
        if phi in seen:
            n0, bits0 = seen[phi]
            span = n - n0
            block = bits - bits0 * 2**span
            v = (bits0 + Fraction(block, 2**span - 1)) / 2**n0
            return Projection(v, v)
        seen[phi] = (n, bits)
        if n == depth:
            return Projection(Fraction(bits, scale), Fraction(bits + 1, scale))
        bits = 2 * bits + (1 if phi >= h else 0)
        phi = (3 * phi) % 1
    raise AssertionError("unreachable")


def project_orbit(sp: SimulatingPair, orbit, depth: int = 64) -> list:
    return [project_angle(sp, a, depth) for a in orbit]


def rotated_orbit(orbit: Orbit) -> Orbit:
    return orbit.shifted(HALF)


def complementary_angle(t) -> Angle | None:
    t = Angle.of(t)
    orb = forward_orbit(2, t)
    if degree(combinatorics(orb)) != 1:
        return None
    q, k = len(orb), orb.index(t)
    return orb[q - k]


def nothird_failures(sigma: Permutation, k: int) -> list:
    """Indices j not in {k-1, k} whose O_j misses the open arc ]x_k, y_k[."""
    levels = realizations_ordered(sigma)
    x, y = levels[k][k - 1].value, levels[k - 1][k - 1].value
    bad = []
    for j, orb in enumerate(levels):
        if j in (k - 1, k):
            continue
        if not any(x < a.value < y for a in orb):
            bad.append(j)
    return bad


def verify_nothird(sigma: Permutation, k: int) -> bool:
    return not nothird_failures(sigma, k)


def simulating_set(sp: SimulatingPair) -> frozenset:
    return frozenset(sp.ox.angles) | frozenset(sp.oy.angles)


def rotated_simulating_set(sp: SimulatingPair) -> frozenset:
    return frozenset(a + HALF for a in simulating_set(sp))


def union_degree(t, s) -> int:
    """Degree of m_3 on the simulating set of t joined with the half-turn of that of s."""
    pts = sorted(simulating_set(simulating_pair(t)) | rotated_simulating_set(simulating_pair(s)))
    perm = permutation_of_points(pts, lambda a: Angle(3 * a.num, a.den))
    return degree(perm)
