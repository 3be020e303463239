"""Dynamical wakes of a cubic, membership in the main renormalization locus, and
classification of the co-landing orbit.

A wake is the region cut off by two co-landing rays R(x_i), R(y_i) that does
not contain the critical point 0.  It is represented as a polygon: the ray
polylines from a large equipotential down to the common landing point,
closed by the arc of that equipotential spanning the angles between them.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from shapely.geometry import Point, Polygon

from .angles import Angle, Orbit, mul_map
from .combinatorics import all_cycles, dynamically_reducible
from .errors import NoConvergence, NotInLimb, RayFailure
from .numerics import (
    COLAND_TOL,
    CubicMap,
    RayTrace,
    coland_test,
    find_periodic,
    landing_point,
    trace_ray,
    yoccoz_check,
)
from .simulating import SimulatingPair, simulating_pair

BOUNDARY_MARGIN = 1e-4
REPEL_MARGIN = 1e-6
FAR_POTENTIAL = 8.0
ARC_POINTS = 256


def _arc_length(lo: Angle, hi: Angle) -> float:
    return float((hi.value - lo.value) % 1)


def _wake_polygon(P: CubicMap, lo: RayTrace, hi: RayTrace, landing: complex) -> Polygon:
    """Region between the rays lo and hi containing the angles running counterclockwise from lo to hi."""
    inward = [z for z, _ in lo.points] + [landing]
    outward = [z for z, _ in reversed(hi.points)]
    span = _arc_length(lo.angle, hi.angle)
    start = float(hi.angle)
    s = max(lo.points[0][1], hi.points[0][1])
    # far arc runs clockwise from hi back to lo, inside the sector (lo, hi)
    arc = [cmath.exp(complex(s, 2 * math.pi * (start - span * j / ARC_POINTS))) - P.a for j in range(1, ARC_POINTS)]
    ring = inward + outward + arc
    poly = Polygon([(z.real, z.imag) for z in ring])
    if not poly.is_valid:
        poly = poly.buffer(0)
    return poly


@dataclass(frozen=True)
class Wake:
    lo: Angle
    hi: Angle
    landing: complex
    polygon: Polygon = field(repr=False)

    def contains(self, z: complex) -> bool:
        return self.polygon.contains(Point(z.real, z.imag))

    def boundary_distance(self, z: complex) -> float:
        return self.polygon.exterior.distance(Point(z.real, z.imag))


@dataclass(frozen=True)
class WakeSystem:
    """Wakes W_1..W_q of the simulating pair of t, and the sub-wake W'_k."""

    P: CubicMap
    sp: SimulatingPair
    traces: dict = field(repr=False)
    wakes: tuple = ()
    subwake: Wake | None = None

    @property
    def landing_points(self) -> list:
        return [w.landing for w in self.wakes]

    def wake_index(self, z: complex) -> int | None:
        """1-based index of the wake containing z, if any."""
        for i, w in enumerate(self.wakes, start=1):
            if w.contains(z):
                return i
        return None

    def boundary_distance(self, z: complex) -> float:
        dists = [w.boundary_distance(z) for w in self.wakes]
        if self.subwake is not None:
            dists.append(self.subwake.boundary_distance(z))
        return min(dists)


def _traced(P: CubicMap, theta: Angle, **kw) -> RayTrace:
    tr = trace_ray(P, theta, s_start=FAR_POTENTIAL, **kw)
    if tr.status == "Broken" or not tr.points:
        raise RayFailure(f"ray {theta} is broken")
    return tr


def build_wakes(P: CubicMap, t, s_end: float = 1e-6, **kw) -> WakeSystem:
    sp = simulating_pair(t)
    traces = {}
    wakes = []
    for i, (x, y) in enumerate(sp.intervals(), start=1):
        res = coland_test(P, x, y, sp.q, **kw)
        if res.kind != "CoLand":
            raise NotInLimb(f"rays {x} and {y} do not co-land: {res}")
        traces[x] = _traced(P, x, s_end=s_end)
        traces[y] = _traced(P, y, s_end=s_end)
        wakes.append(Wake(x, y, res.z1, _wake_polygon(P, traces[x], traces[y], res.z1)))
    yp, xp = sp.yprime_k, sp.xprime_k
    res = coland_test(P, yp, xp, **kw)
    if res.kind != "CoLand":
        raise NotInLimb(f"rays {yp} and {xp} do not co-land: {res}")
    traces[yp] = _traced(P, yp, s_end=s_end)
    traces[xp] = _traced(P, xp, s_end=s_end)
    sub = Wake(yp, xp, res.z1, _wake_polygon(P, traces[yp], traces[xp], res.z1))
    return WakeSystem(P, sp, traces, tuple(wakes), sub)


@dataclass(frozen=True)
class LrenVerdict:
    kind: str  # InLocus | Escaped | Inconclusive
    n: int | None = None
    which: str = ""
    detail: str = ""

    def __str__(self):
        if self.kind == "Escaped":
            return f"Escaped n={self.n} critical={self.which} {self.detail}".strip()
        if self.kind == "Inconclusive":
            return f"Inconclusive {self.detail}".strip()
        return "InLocus"


RECURRENCE_TOL = 1e-9


def critical_orbit(P: CubicMap, z: complex, n: int, tol: float = RECURRENCE_TOL) -> list:
    """z, P(z), ..., P^n(z); None from the first escaping point on.

    Once the orbit comes back within tol of an earlier point it is continued
    along that cycle exactly.  Rounding would otherwise push a critical orbit
    off a repelling cycle it lands on.
    """
    R = P.escape_radius()
    orbit = [complex(z)]
    while len(orbit) <= n:
        w = orbit[-1]
        if abs(w) > R:
            return orbit + [None] * (n + 1 - len(orbit))
        w = P(w)
        for j, u in enumerate(orbit):
            if abs(w - u) <= tol * max(1.0, abs(u)):
                cycle = orbit[j:]
                while len(orbit) <= n:
                    orbit.append(cycle[(len(orbit) - j) % len(cycle)])
                return orbit
        orbit.append(w)
    return orbit


def _escape_step(orbit: list) -> int | None:
    for n, z in enumerate(orbit):
        if z is None:
            return n
    return None


def lren_membership(
    P: CubicMap,
    t,
    n_max: int = 100,
    boundary_margin: float = BOUNDARY_MARGIN,
    wakes: WakeSystem | None = None,
) -> LrenVerdict:
    """Orbit test for the main renormalization locus of the limb of t.

    The orbit of 0 must stay outside every closed wake, and every q-th
    iterate of -2a must stay in W_k minus the closed sub-wake W'_k.
    """
    sp = simulating_pair(t)
    orbits = {
        "omega1": critical_orbit(P, 0j, n_max),
        "omega2": critical_orbit(P, -2 * P.a, sp.q * n_max),
    }
    for name, orbit in orbits.items():
        n = _escape_step(orbit)
        if n is not None:
            return LrenVerdict("Escaped", n, name, "to-infinity")
    if wakes is None:
        try:
            wakes = build_wakes(P, t)
        except (NotInLimb, RayFailure) as exc:
            return LrenVerdict("Inconclusive", detail=str(exc).replace(" ", "-"))
    sp = wakes.sp
    lam = find_periodic(P, sp.q, wakes.wakes[sp.k - 1].landing).multiplier
    if abs(lam) <= 1 + REPEL_MARGIN:
        return LrenVerdict("Inconclusive", detail="co-landing-orbit-not-repelling")
    for n, z in enumerate(orbits["omega1"]):
        if wakes.boundary_distance(z) <= boundary_margin:
            return LrenVerdict("Inconclusive", n, "omega1", "near-wake-boundary")
        if wakes.wake_index(z) is not None:
            return LrenVerdict("Escaped", n, "omega1", "entered-wake")
    home = wakes.wakes[sp.k - 1]
    for n, z in enumerate(orbits["omega2"][:: sp.q]):
        if wakes.boundary_distance(z) <= boundary_margin:
            return LrenVerdict("Inconclusive", n, "omega2", "near-wake-boundary")
        if not home.contains(z) or wakes.subwake.contains(z):
            return LrenVerdict("Escaped", n, "omega2", "left-wake")
    return LrenVerdict("InLocus")


def _rotation_at(angles: list, p: int) -> Angle | None:
    pts = sorted(angles)
    pos = {a: i for i, a in enumerate(pts)}
    shifts = set()
    for i, a in enumerate(pts):
        img = a
        for _ in range(p):
            img = mul_map(3, img)
        if img not in pos:
            return None
        shifts.add((pos[img] - i) % len(pts))
    if len(shifts) != 1:
        return None
    return Angle(shifts.pop(), len(pts))


@dataclass(frozen=True)
class OrbitReport:
    period: int
    merged: bool
    third_cycle_detected: bool
    multiplier: complex
    yoccoz_ok: bool
    rotation: Angle | None = None
    ray_cycles: int = 2
    third_cycle: Orbit | None = None
    reducible: bool | None = None

    def __str__(self):
        third = "none" if self.third_cycle is None else str(self.third_cycle)
        return (
            f"period={self.period} merged={str(self.merged).lower()} "
            f"third_cycle={third} multiplier={self.multiplier.real:.17g},{self.multiplier.imag:.17g} "
            f"rotation={self.rotation} cycles={self.ray_cycles} yoccoz_ok={str(self.yoccoz_ok).lower()}"
        )


def _detect_third_cycle(P: CubicMap, sp: SimulatingPair, points: list, tol: float) -> Orbit | None:
    used = set(sp.ox.angles) | set(sp.oy.angles)
    arcs = [(x.value, y.value) for x, y in sp.intervals()]
    for orb in all_cycles(3, sp.q):
        if used.intersection(orb.angles):
            continue
        if any(lo < u.value < hi for u in orb for lo, hi in arcs):
            continue
        try:
            z = landing_point(P, orb[0]).z
        except NoConvergence:
            continue
        if min(abs(z - w) for w in points) < tol:
            return orb
    return None


def classify_coland_orbit(P: CubicMap, t, wakes: WakeSystem | None = None, coland_tol: float = COLAND_TOL) -> OrbitReport:
    """Period, merging, third cycle and Yoccoz consistency of the co-landing orbit {z_i}."""
    if wakes is None:
        wakes = build_wakes(P, t)
    sp = wakes.sp
    pts = wakes.landing_points
    distinct = []
    for z in pts:
        if all(abs(z - w) > coland_tol for w in distinct):
            distinct.append(z)
    p = len(distinct)
    zk = pts[sp.k - 1]
    lam = find_periodic(P, p, zk).multiplier
    third = _detect_third_cycle(P, sp, distinct, coland_tol) if p == sp.q else None
    at_zk = [a for (x, y), z in zip(sp.intervals(), pts) if abs(z - zk) <= coland_tol for a in (x, y)]
    if third is not None:
        at_zk.extend(u for u in third if abs(landing_point(P, u).z - zk) <= coland_tol)
    cycles = 2 + (third is not None)
    rot = _rotation_at(at_zk, p)
    ok = False
    if rot is not None and abs(lam) > 1:
        ok = yoccoz_check(lam, rot, cycles, 3, period=p)
    merged = p < sp.q
    reducible = dynamically_reducible(sp.sigma) is not None if merged else None
    return OrbitReport(p, merged, third is not None, lam, ok, rot, cycles, third, reducible)


def _critical_orbit_system(a: complex, b: complex, central: tuple, peripheral: tuple):
    """Residuals and Jacobian of P^m1(0) = P^n1(0), P^m2(-2a) = P^n2(-2a) in (a, b)."""
    out, jac = [], []
    for start, (m, n) in ((0, central), (1, peripheral)):
        z = -2 * a if start else 0j
        za, zb = (-2.0 + 0j if start else 0j), 0j
        seq = [(z, za, zb)]
        for _ in range(max(m, n)):
            pz = 3 * z * z + 6 * a * z
            z, za, zb = z * z * (z + 3 * a) + b, pz * za + 3 * z * z, pz * zb + 1
            seq.append((z, za, zb))
        (z1, a1, b1), (z2, a2, b2) = seq[m], seq[n]
        out.append(z1 - z2)
        jac.append((a1 - a2, b1 - b2))
    return out, jac


def solve_critical_orbits(seed: tuple, central: tuple, peripheral: tuple, tol: float = 1e-14, max_iter: int = 100) -> tuple:
    """Newton in (a, b) on prescribed relations for the orbits of 0 and -2a.

    ``central = (m, n)`` imposes P^m(0) = P^n(0); ``peripheral`` does the
    same for -2a.
    """
    a, b = complex(seed[0]), complex(seed[1])
    for _ in range(max_iter):
        (f1, f2), ((j11, j12), (j21, j22)) = _critical_orbit_system(a, b, central, peripheral)
        det = j11 * j22 - j12 * j21
        if det == 0 or not math.isfinite(abs(det)):
            break
        da = (f1 * j22 - f2 * j12) / det
        db = (j11 * f2 - j21 * f1) / det
        a, b = a - da, b - db
        if not (math.isfinite(abs(a)) and math.isfinite(abs(b))) or abs(a) + abs(b) > 1e4:
            break
        if abs(da) + abs(db) <= tol * max(1.0, abs(a) + abs(b)):
            return a, b
    raise NoConvergence(f"critical-orbit Newton from {seed} did not converge")


def critical_residuals(P: CubicMap, central: tuple, peripheral: tuple) -> tuple:
    (f1, f2), _ = _critical_orbit_system(P.a, P.b, central, peripheral)
    return abs(f1), abs(f2)


def _exact_preperiod(P: CubicMap, z: complex, m: int, n: int, tol: float = 1e-8) -> bool:
    """Whether z has exact preperiod n and exact period m - n."""
    orbit = [z]
    for _ in range(m):
        orbit.append(P(orbit[-1]))
    per = m - n
    if any(abs(orbit[n + d] - orbit[n]) <= tol for d in range(1, per)):
        return False
    return n == 0 or abs(orbit[n - 1 + per] - orbit[n - 1]) > tol


def critically_finite_candidates(central: tuple, peripheral: tuple, grid: int = 7, span_a: float = 1.2, span_b: float = 2.0) -> list:
    """Distinct roots of the critical-orbit relations from a coarse grid of real and complex seeds."""
    seeds = []
    for re_a in np.linspace(-span_a, span_a, grid):
        for re_b in np.linspace(-span_b, span_b, grid):
            seeds.append((complex(re_a), complex(re_b)))
    for re_a in np.linspace(-span_a, span_a, grid):
        for im_a in np.linspace(-span_a, span_a, grid):
            for re_b in np.linspace(-span_b, span_b, grid):
                seeds.append((complex(re_a, im_a), complex(re_b, 0.3 * im_a)))
    found = []
    for seed in seeds:
        try:
            a, b = solve_critical_orbits(seed, central, peripheral)
        except NoConvergence:
            continue
        if abs(a) < 1e-6:
            continue
        P = CubicMap(a, b)
        if not (_exact_preperiod(P, 0j, *central) and _exact_preperiod(P, -2 * a, *peripheral)):
            continue
        if all(abs(a - a2) + abs(b - b2) > 1e-8 for a2, b2 in found):
            found.append((a, b))
    found.sort(key=lambda ab: (abs(ab[0].imag) + abs(ab[1].imag), round(ab[0].real, 9), round(ab[1].real, 9)))
    return found


CHEB_CENTRAL = (3, 2)  # 0 -> b -> fixed point
BASILICA_PERIPHERAL = (2, 0)  # -2a of period 2


def make_chebyshev_basilica() -> CubicMap:
    """Cubic whose central class is z^2 - 2 and whose peripheral class is z^2 - 1, in the limb of 1/3.

    Among the roots of the critical-orbit relations, the one returned has rays
    1/4 and 5/8 co-landing on a repelling fixed point, and sends 0 onto the
    landing point of the fixed ray 0 (the Chebyshev beta point).  The mirror
    root under z -> -conj(z) shares the first property but not the second.
    """
    for a, b in critically_finite_candidates(CHEB_CENTRAL, BASILICA_PERIPHERAL):
        P = CubicMap(a, b)
        res = coland_test(P, "1/4", "5/8", 2)
        if res.kind != "CoLand":
            continue
        fixed = find_periodic(P, 1, res.z1)
        if abs(fixed.z - res.z1) > 1e-8 or abs(fixed.multiplier) <= 1:
            continue
        try:
            beta = landing_point(P, "0").z
        except NoConvergence:
            continue
        if abs(beta - P.iterate(0j, 2)) < COLAND_TOL:
            return P
    raise NoConvergence("no Chebyshev-basilica root with co-landing rays 1/4, 5/8")


def scan_critically_finite(central: tuple, peripheral: tuple, n_seeds: int = 6000, rng_seed: int = 2) -> list:
    """Roots of the critical-orbit relations from uniformly random seeds."""
    rng = np.random.default_rng(rng_seed)
    found = []
    for _ in range(n_seeds):
        seed = (complex(*rng.uniform(-1.2, 1.2, 2)), complex(*rng.uniform(-2.5, 2.5, 2)))
        try:
            a, b = solve_critical_orbits(seed, central, peripheral)
        except NoConvergence:
            continue
        P = CubicMap(a, b)
        if abs(a) < 1e-6 or not (_exact_preperiod(P, 0j, *central) and _exact_preperiod(P, -2 * a, *peripheral)):
            continue
        if all(abs(a - a2) + abs(b - b2) > 1e-8 for a2, b2 in found):
            found.append((a, b))
    return found


# located by scan_critically_finite((4, 0), (4, 0)) and filtered by classify/lren
MERGING_SEED = (-0.10182614713586 - 0.34985182497774j, -0.21546485253036 - 1.03759975818945j)


def make_merging_example(t="1/5", seed: tuple = MERGING_SEED) -> CubicMap:
    """Superattracting cubic in the limb of 1/5 whose period-4 co-landing orbit merges into period 2.

    Both critical points have period 4; 0 has the combinatorics of the
    period-4 satellite centre c ~ -1.3107 of the Mandelbrot set.
    """
    sp = simulating_pair(t)
    a, b = solve_critical_orbits(seed, (sp.q, 0), (sp.q, 0))
    P = CubicMap(a, b)
    res = coland_test(P, sp.x_k, sp.y_k, sp.q)
    if res.kind != "CoLand" or find_periodic(P, sp.q, res.z1).period >= sp.q:
        raise NoConvergence(f"seed {seed} does not lead to a merging cubic")
    return P
