"""Floating-point dynamics of monic centered cubics z^3 + 3a z^2 + b.

External rays are followed downward in potential by Newton continuation on
P^n(z) = W, where W is the inverse Boettcher coordinate pushed n levels up and
n is chosen so that |W| is large.  Angles are multiplied exactly before they
are turned into floats, so deep levels keep full angular precision.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .angles import Angle, mul_map, period as angle_period
from .errors import NoConvergence, NonRepelling

# defaults shared by the numerical routines
POTENTIAL_TOL = 1e-9
ROOT_TOL = 1e-12
COLAND_TOL = 1e-6
SEPARATION_FLOOR = 1e-3
PARABOLIC_GUARD = 1e-4
LEVEL_LOG_RADIUS = 18.0  # log|W| at which the Boettcher map is replaced by its expansion
ESCAPE_RADIUS = 1e10
LINEAR_CHECK = 0.3
TAIL_CLOSE = 1e-3
LINEAR_FLOOR = 1e-10  # below this the tail sits on the periodic point to rounding


@dataclass(frozen=True)
class CubicMap:
    a: complex
    b: complex = 0j

    def __call__(self, z):
        return z * z * (z + 3 * self.a) + self.b

    def derivative(self, z):
        return 3 * z * (z + 2 * self.a)

    @property
    def critical_points(self) -> tuple:
        return 0j, -2 * self.a

    @property
    def critical_values(self) -> tuple:
        return self.b, 4 * self.a**3 + self.b

    @property
    def cocritical_points(self) -> tuple:
        return -3 * self.a, self.a

    def iterate(self, z, n: int):
        for _ in range(n):
            z = self(z)
        return z

    def iterate_with_derivative(self, z, n: int):
        dz = 1.0
        for _ in range(n):
            dz = dz * self.derivative(z)
            z = self(z)
        return z, dz

    def escape_radius(self) -> float:
        return max(ESCAPE_RADIUS, 100.0 * (1 + abs(self.a) + abs(self.b)))


def eval_map(P: CubicMap, z):
    return P(z)


def eval_derivative(P: CubicMap, z):
    return P.derivative(z)


def green(P: CubicMap, z, max_iter: int = 2000) -> float:
    """Escape rate log|phi(z)|; zero when z does not escape within max_iter steps."""
    R = P.escape_radius()
    n = 0
    while abs(z) <= R:
        if n >= max_iter:
            return 0.0
        z = P(z)
        n += 1
    # log|phi(w)| = log|w| + sum 3^-(m+1) log|1 + 3a/w_m + b/w_m^3|
    total, w, scale = math.log(abs(z)), z, 1.0 / 3.0
    while abs(w) < 1e80:
        total += scale * math.log(abs(1 + 3 * P.a / w + P.b / w**3))
        w = P(w)
        scale /= 3.0
    return total / 3.0**n


def _level_for(s: float) -> int:
    n = 0
    while s * 3.0**n < LEVEL_LOG_RADIUS:
        n += 1
    return n


def _pushed_target(P: CubicMap, s: float, theta: Angle, n: int) -> complex:
    frac = mul_map(3**n, theta) if n else theta
    T = cmath.exp(complex(s * 3.0**n, 2 * math.pi * float(frac)))
    # invert phi(w) = w + a - a^2/w + O(1/w^2)
    return T - P.a + P.a * P.a / T


def ray_point(P: CubicMap, theta: Angle, s: float, guess: complex, max_newton: int = 60, _depth: int = 0) -> complex:
    """Point of potential s on the ray of angle theta, by Newton from ``guess``.

    If Newton on the deep iterate stalls (typically next to a critical
    point), the point is recovered as the preimage, nearest to ``guess``, of
    the matching point on the image ray.
    """
    n = _level_for(s)
    W = _pushed_target(P, s, theta, n)
    z = complex(guess)
    for _ in range(max_newton):
        w, dw = P.iterate_with_derivative(z, n) if n else (z, 1.0)
        if dw == 0:
            break
        step = (w - W) / dw
        z -= step
        if not math.isfinite(z.real) or not math.isfinite(z.imag):
            break
        if abs(step) <= 1e-15 * max(1.0, abs(z)):
            return z
    if n == 0 or _depth >= 3:
        raise NoConvergence("ray Newton did not settle")
    image = ray_point(P, mul_map(3, theta), 3 * s, P(complex(guess)), max_newton, _depth + 1)
    return _pullback(P, image, guess)


@dataclass
class RayTrace:
    angle: Angle
    points: list = field(default_factory=list)  # (z, s) pairs, potential decreasing
    landing: complex | None = None
    status: str = "MaxStepsReached"

    @property
    def tail(self) -> complex:
        return self.points[-1][0]

    def tail_movement(self, steps: int) -> float:
        if len(self.points) <= steps:
            return math.inf
        return abs(self.points[-1][0] - self.points[-1 - steps][0])


def trace_ray(
    P: CubicMap,
    theta,
    s_start: float = 8.0,
    s_end: float = 1e-8,
    steps_per_division: int = 24,
    land_tol: float = 1e-3,
    jump_ratio: float = 25.0,
) -> RayTrace:
    """Follow the external ray from potential s_start down to s_end.

    A division is a drop of potential by a factor 3.  The trace is marked
    Broken when Newton fails or a step is wildly longer than the previous
    one, which is how rays run into precritical points.
    """
    theta = Angle.of(theta)
    trace = RayTrace(theta)
    s, j = s_start, 0
    z = cmath.exp(complex(s, 2 * math.pi * float(theta))) - P.a
    prev_step = None
    while True:
        try:
            z_new = ray_point(P, theta, s, z)
        except NoConvergence:
            trace.status = "Broken"
            return trace
        step = abs(z_new - z) if trace.points else None
        if step is not None and prev_step is not None and step > jump_ratio * prev_step and step > 1e-9:
            trace.status = "Broken"
            return trace
        trace.points.append((z_new, s))
        prev_step, z = step, z_new
        if s <= s_end:
            break
        j += 1
        # potentials sit exactly on the grid s_start * 3^(-j/steps)
        s = s_start * 3.0 ** (-j / steps_per_division)
    if trace.tail_movement(steps_per_division) < land_tol:
        trace.status = "Landed"
        trace.landing = trace.tail
    return trace


@dataclass(frozen=True)
class PeriodicPoint:
    z: complex
    multiplier: complex
    period: int


def exact_period(P: CubicMap, z: complex, q: int, tol: float = 1e-8) -> int:
    for d in range(1, q + 1):
        if q % d == 0 and abs(P.iterate(z, d) - z) <= tol * max(1.0, abs(z)):
            return d
    return q


def find_periodic(P: CubicMap, q: int, guess, tol: float = ROOT_TOL, max_iter: int = 400) -> PeriodicPoint:
    """Newton on P^q(z) - z; the multiplier is that of P^q at the root."""
    z = complex(guess)
    for _ in range(max_iter):
        w, dw = P.iterate_with_derivative(z, q)
        F = w - z
        if abs(F) <= tol * max(1.0, abs(z)):
            return PeriodicPoint(z, dw, exact_period(P, z, q))
        if dw == 1:
            break
        z = z - F / (dw - 1)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)) or abs(z) > 1e8:
            break
    raise NoConvergence(f"no period-{q} point near {guess}")


def preimages(P: CubicMap, w: complex) -> list:
    """The three solutions of P(z) = w."""
    return [complex(r) for r in np.roots([1.0, 3 * P.a, 0.0, P.b - w])]


def _pullback(P: CubicMap, target: complex, guess: complex) -> complex:
    # solving the cubic directly stays accurate next to a critical point, where Newton crawls
    z = min(preimages(P, target), key=lambda r: abs(r - guess))
    for _ in range(3):
        d = P.derivative(z)
        if abs(d) < 1e-6:
            break
        z_new = z - (P(z) - target) / d
        if abs(P(z_new) - target) >= abs(P(z) - target):
            break
        z = z_new
    return z


@dataclass(frozen=True)
class Landing:
    angle: Angle
    z: complex
    multiplier: complex | None  # of the periodic point reached, None if not refined
    tail: complex


def _preperiod_split(theta: Angle) -> int:
    e, den = 0, theta.den
    while den % 3 == 0:
        den //= 3
        e += 1
    return e


def _refine_chain(P: CubicMap, chain: list, s_end: float, refine_radius: float, trace_kw: dict) -> Landing:
    traces = [trace_ray(P, a, s_end=s_end, **trace_kw) for a in chain]
    if any(tr.status == "Broken" for tr in traces):
        raise RayBroken("ray broken before reaching the Julia set")
    p = angle_period(3, chain[-1])
    tr = traces[-1]
    pt = find_periodic(P, p, tr.tail)
    if abs(pt.z - tr.tail) > refine_radius:
        raise NoConvergence("Newton left the neighbourhood of the ray tail")
    # one period up the ray must sit where the linearization puts it
    back = p * trace_kw.get("steps_per_division", 24)
    if len(tr.points) > back and abs(tr.tail - pt.z) > LINEAR_FLOOR:
        d1 = tr.tail - pt.z
        d0 = tr.points[-1 - back][0] - pt.z
        if abs(d0 - pt.multiplier * d1) > LINEAR_CHECK * abs(d0):
            raise NoConvergence("ray tail not yet attracted to the periodic point")
    # parabolic points are approached too slowly for the distance test
    if abs(tr.tail - pt.z) > TAIL_CLOSE and abs(pt.multiplier - 1) >= PARABOLIC_GUARD:
        raise NoConvergence("ray tail still far from the periodic point")
    z = pt.z
    for tr in reversed(traces[:-1]):
        z = _pullback(P, z, tr.tail)
        if abs(z - tr.tail) > refine_radius:
            raise NoConvergence("pull-back left the neighbourhood of the ray tail")
    mult = pt.multiplier if len(chain) == 1 else None
    return Landing(chain[0], z, mult, traces[0].tail)


class RayBroken(NoConvergence):
    pass


def landing_point(
    P: CubicMap,
    theta,
    s_end: float = 1e-8,
    refine_radius: float = 0.25,
    deepen: tuple = (1e-4, 1e-8, 1e-16, 1e-24),
    **trace_kw,
) -> Landing:
    """Landing point of R(theta) for rational theta, polished by Newton.

    Periodic angles are refined to a periodic point of matching period;
    strictly preperiodic ones are pulled back from the landing point of their
    first periodic image along the tails of the intermediate rays.  When the
    tail is still too far from the landing point the trace is redone at
    smaller potentials.
    """
    theta = Angle.of(theta)
    chain = [theta]
    for _ in range(_preperiod_split(theta)):
        chain.append(mul_map(3, chain[-1]))
    last = None
    for factor in (1.0,) + tuple(deepen):
        try:
            return _refine_chain(P, chain, s_end * factor, refine_radius, trace_kw)
        except RayBroken as exc:
            # a break at the first depth is real; deeper traces may only lose precision
            if last is None:
                raise
            last = exc
            break
        except NoConvergence as exc:
            last = exc
    raise last


@dataclass(frozen=True)
class ColandResult:
    kind: str  # CoLand | Distinct | Inconclusive
    z1: complex | None = None
    z2: complex | None = None
    reason: str = ""

    @property
    def z(self):
        return self.z1

    def __str__(self):
        if self.kind == "CoLand":
            return f"CoLand {fmt_complex(self.z1)}"
        if self.kind == "Distinct":
            return f"Distinct {fmt_complex(self.z1)} {fmt_complex(self.z2)}"
        return f"Inconclusive {self.reason}".strip()


def coland_test(
    P: CubicMap,
    theta1,
    theta2,
    q: int | None = None,
    coland_tol: float = COLAND_TOL,
    separation_floor: float = SEPARATION_FLOOR,
    **kw,
) -> ColandResult:
    """Decide whether two rational rays land at one point.

    ``q`` is accepted for interface symmetry; the period used for refinement
    is read off each angle.
    """
    try:
        l1 = landing_point(P, theta1, **kw)
        l2 = landing_point(P, theta2, **kw)
    except NoConvergence as exc:
        return ColandResult("Inconclusive", reason=str(exc).replace(" ", "-"))
    gap = abs(l1.z - l2.z)
    parabolic = any(m is not None and abs(m - 1) < PARABOLIC_GUARD for m in (l1.multiplier, l2.multiplier))
    if gap < coland_tol:
        if parabolic:
            return ColandResult("Inconclusive", l1.z, l2.z, "parabolic")
        return ColandResult("CoLand", l1.z, l2.z)
    if gap > separation_floor:
        return ColandResult("Distinct", l1.z, l2.z)
    return ColandResult("Inconclusive", l1.z, l2.z, "gap-between-tolerances")


def yoccoz_check(multiplier, rotation, cycles: int, degree: int, period: int = 1, slack: float = 1e-9) -> bool:
    """Yoccoz inequality for a point of the given period with ``cycles`` ray cycles.

    It is applied to the period-th iterate, a map of degree ``degree**period``
    fixing the point, with combinatorial rotation number ``rotation``.
    """
    lam = complex(multiplier)
    if abs(lam) <= 1:
        raise NonRepelling(f"|multiplier| = {abs(lam)} <= 1")
    rot = Angle.of(rotation)
    target = 2 * math.pi * rot.num / rot.den
    L = complex(math.log(abs(lam)), cmath.phase(lam))
    # choose the branch of log closest to the combinatorial rotation
    L = complex(L.real, L.imag + 2 * math.pi * round((target - L.imag) / (2 * math.pi)))
    lhs = abs(L - 1j * target) ** 2 / L.real
    rhs = 2 * period * math.log(degree) / (cycles * rot.den)
    return lhs <= rhs * (1 + slack)


def normal_form_shifts(c2: complex, c1: complex) -> tuple:
    """Both roots h of 3h^2 + 2 c2 h + c1 = 0 (the critical points of the cubic)."""
    disc = cmath.sqrt(4 * c2 * c2 - 12 * c1)
    return (-2 * c2 + disc) / 6, (-2 * c2 - disc) / 6


def to_normal_form(c2: complex, c1: complex, c0: complex, root: int = 0) -> tuple:
    """Conjugate z^3 + c2 z^2 + c1 z + c0 by z -> z + h into z^3 + 3a z^2 + b.

    The chosen critical point h becomes 0.  Returns (CubicMap, h).
    """
    h = normal_form_shifts(c2, c1)[root]
    a = (3 * h + c2) / 3
    b = h**3 + c2 * h * h + c1 * h + c0 - h
    return CubicMap(complex(a), complex(b)), h


def fmt_complex(z: complex) -> str:
    return f"{z.real:.17g},{z.imag:.17g}"


def parse_complex(text: str) -> complex:
    re_, im = text.split(",")
    return complex(float(re_), float(im))
