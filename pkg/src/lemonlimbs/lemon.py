"""The one-parameter slice P_a(z) = z^3 + 3a z^2 with a superattracting fixed point at 0.

The free critical point is omega_2 = -2a.  Inside the main hyperbolic
component H_0 it lies in the immediate basin of 0, and kappa(a) is its
position in the internal Boettcher coordinate beta_a (normalized by
beta_a'(0) = 3a).  Outside the connectedness locus the co-critical point a
escapes and Phi(a) = phi_a(a) is its external Boettcher coordinate.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .angles import Angle, is_periodic, mul_map, period as angle_period
from .errors import ContinuationFailure, NoConvergence, NotInBasin, WrongLimb
from .numerics import (
    ROOT_TOL,
    ColandResult,
    CubicMap,
    RayTrace,
    coland_test,
    exact_period,
)
from .simulating import simulating_pair

KAPPA_TERMS = 64
BASIN_ITER = 20000
START_RADIUS = 0.5
POLISH_RADIUS = 0.05
A0 = -2j / 3  # lift of kappa = 1 on the boundary of the main component


@dataclass(frozen=True)
class LemonParam:
    a: complex

    @property
    def map(self) -> CubicMap:
        return CubicMap(complex(self.a), 0j)

    @property
    def free_critical(self) -> complex:
        return -2 * self.a

    @property
    def cocritical(self) -> complex:
        return complex(self.a)


def lemon_map(a: complex) -> CubicMap:
    return CubicMap(complex(a), 0j)


def in_basin(a: complex, max_iter: int = BASIN_ITER) -> bool:
    """Whether the orbit of -2a converges to the fixed critical point 0."""
    a = complex(a)
    if a == 0:
        return True
    z = -2 * a
    small = 1e-6 * min(1.0, abs(a))
    for _ in range(max_iter):
        z = z * z * (z + 3 * a)
        if abs(z) < small:
            return True
        if abs(z) > 1e6 * (1 + abs(a)):
            return False
    return False


def _kappa_log(a: complex, with_derivative: bool = False):
    """log kappa(a) (and d/da of it) from the product form of beta_a along the orbit of -2a."""
    # beta(z) = 3a z prod_{n>=0} (1 + z_n/(3a))^(2^-(n+1)); the n = 0 factor at z = -2a is 1/3
    logk = cmath.log(-6 * a * a) - 0.5 * math.log(3.0)
    dlog = 2 / a
    w, dw = 4 * a**3, 12 * a * a
    weight = 0.25
    for _ in range(KAPPA_TERMS):
        u = 1 + w / (3 * a)
        if u == 0 or not math.isfinite(abs(u)):
            raise NotInBasin("orbit of the free critical point hits the co-critical point")
        logk += weight * cmath.log(u)
        if with_derivative:
            dlog += weight * (dw / (3 * a) - w / (3 * a * a)) / u
            dw = (3 * w * w + 6 * a * w) * dw + 3 * w * w
        w = w * w * (w + 3 * a)
        weight *= 0.5
        if abs(w) < 1e-300:
            break
    return (logk, dlog) if with_derivative else logk


def internal_kappa(a: complex) -> complex:
    """Internal Boettcher position of the free critical point.

    Raises NotInBasin when -2a is not attracted to 0.  Capture components
    (where -2a reaches the basin only after leaving the immediate basin) are
    not told apart from the main component.
    """
    a = complex(a)
    if a == 0:
        return 0j
    if not in_basin(a):
        raise NotInBasin(f"-2a does not converge to 0 for a = {a}")
    k = cmath.exp(_kappa_log(a))
    # near parabolic boundary points 1 - |kappa| underflows, so only a clear excess is rejected
    if abs(k) > 1 + 1e-9:
        raise NotInBasin(f"|kappa| = {abs(k)} >= 1 for a = {a}")
    return k


def _solve_kappa(target: complex, guess: complex, tol: float = 1e-14, max_iter: int = 60) -> complex:
    a = complex(guess)
    log_target = cmath.log(target)
    for _ in range(max_iter):
        logk, dlog = _kappa_log(a, with_derivative=True)
        diff = logk - log_target
        # logs of kappa agree only modulo 2 pi i
        diff -= 2j * math.pi * round(diff.imag / (2 * math.pi))
        step = diff / dlog
        a -= step
        if not math.isfinite(abs(a)):
            break
        if abs(step) <= tol * max(1.0, abs(a)):
            if not in_basin(a):
                break
            return a
    raise NoConvergence(f"kappa Newton failed near {guess}")


def _continue(path, a: complex, min_step: float = 1e-9) -> complex:
    """Follow kappa(a) = path(s) for s from 0 to 1 with adaptive step halving."""
    s, h = 0.0, 1.0 / 32
    while s < 1.0:
        h = min(h, 1.0 - s)
        try:
            a_new = _solve_kappa(path(s + h), a)
        except (NoConvergence, NotInBasin):
            a_new = None
        if a_new is None or abs(a_new - a) > 0.05:
            h /= 2
            if h < min_step:
                raise ContinuationFailure(f"step collapsed at s = {s}")
            continue
        a, s = a_new, s + h
        h *= 1.5
    return a


def _start_point() -> complex:
    # kappa(-iy) is real and increasing on 0 < y < 2/3
    lo, hi = 1e-6, 2 / 3 - 1e-9
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if internal_kappa(-1j * mid).real < START_RADIUS:
            lo = mid
        else:
            hi = mid
    return _solve_kappa(START_RADIUS, -0.5j * (lo + hi))


def _parabolic_step_data(a: complex, z: complex, q: int):
    w, wz, wzz, wa, wza = z, 1.0 + 0j, 0j, 0j, 0j
    for _ in range(q):
        pw = 3 * w * w + 6 * a * w
        pww = 6 * w + 6 * a
        wzz = pww * wz * wz + pw * wzz
        wza = (pww * wa + 6 * w) * wz + pw * wza
        wa = pw * wa + 3 * w * w
        wz = pw * wz
        w = w * w * (w + 3 * a)
    return w, wz, wzz, wa, wza


def parabolic_solve(a: complex, z: complex, q: int, tol: float = 1e-14, max_iter: int = 80) -> tuple:
    """Newton in (a, z) for P_a^q(z) = z with (P_a^q)'(z) = 1."""
    a, z = complex(a), complex(z)
    for _ in range(max_iter):
        w, wz, wzz, wa, wza = _parabolic_step_data(a, z, q)
        f1, f2 = w - z, wz - 1
        det = (wz - 1) * wza - wa * wzz
        if det == 0 or not math.isfinite(abs(det)):
            break
        dz = (-f1 * wza + f2 * wa) / det
        da = (-(wz - 1) * f2 + wzz * f1) / det
        z += dz
        a += da
        if abs(dz) + abs(da) <= tol * max(1.0, abs(z) + abs(a)):
            return a, z
    raise NoConvergence("parabolic Newton did not converge")


def _gate_seed(a: complex, q: int, max_iter: int = BASIN_ITER) -> complex | None:
    """Point of the free critical orbit lingering longest near a period-q point of multiplier ~1."""
    P = lemon_map(a)
    z = -2 * a
    best, best_val = None, math.inf
    R = 1e6 * (1 + abs(a))
    for _ in range(max_iter):
        w, dw = P.iterate_with_derivative(z, q)
        if abs(dw - 1) < 0.5:
            val = abs(w - z)
            if val < best_val:
                best, best_val = z, val
        z = P(z)
        if abs(z) > R or abs(z) < 1e-12:
            break
    return best


def parabolic_polish(a: complex, q: int, radius: float = POLISH_RADIUS) -> tuple | None:
    """Nearby parameter with a period-q point of multiplier exactly 1, or None."""
    seed = _gate_seed(a, q)
    if seed is None:
        return None
    try:
        a1, z1 = parabolic_solve(a, seed, q)
    except NoConvergence:
        return None
    if abs(a1 - a) > radius or exact_period(lemon_map(a1), z1, q) != q:
        return None
    return a1, z1


@dataclass(frozen=True)
class BoundaryPoint:
    t: Angle
    a: complex
    raw: complex  # last point reached by the continuation inside H_0
    radius: float  # |kappa| at ``raw``
    method: str  # "polished" or "continuation"
    error_estimate: float


def boundary_param(t, resolution: float = 1e-8, max_depth: int = 12) -> BoundaryPoint:
    """Boundary point a(t) of H_0 where kappa tends to exp(2 pi i t).

    The level set kappa = r exp(2 pi i s) is followed from a(0) = -2i/3 (at
    radius START_RADIUS) around to s = t and then outward with
    r = 1 - 10^-e.  For angles periodic under doubling the boundary point is a
    parabolic parameter, which the continuation only approaches slowly, so
    the endpoint is polished by Newton on the parabolic condition.
    """
    t = Angle.of(t)
    a = _start_point()
    turn = float(t)
    if turn:
        a = _continue(lambda s: START_RADIUS * cmath.exp(2j * math.pi * turn * s), a)
    phase = cmath.exp(2j * math.pi * turn)
    history = [a]
    r_prev = START_RADIUS
    for e in range(1, max_depth + 1):
        r = 1 - 10.0**-e
        if r <= r_prev:
            continue
        try:
            a = _continue(lambda s, r0=r_prev, r1=r: (r0 + (r1 - r0) * s) * phase, a)
        except ContinuationFailure:
            break
        history.append(a)
        r_prev = r
        if not is_periodic(2, t) and len(history) >= 3 and abs(history[-1] - history[-2]) < resolution:
            break
    raw = history[-1]
    estimate = abs(history[-1] - history[-2]) if len(history) > 1 else math.inf
    if is_periodic(2, t):
        q = angle_period(2, t)
        polished = parabolic_polish(raw, q)
        if polished is not None:
            return BoundaryPoint(t, polished[0], raw, r_prev, "polished", ROOT_TOL)
    if estimate > resolution:
        raise ContinuationFailure(
            f"continuation for t = {t} stalled at |kappa| = {r_prev} with step {estimate:.3g}"
        )
    return BoundaryPoint(t, raw, raw, r_prev, "continuation", estimate)


def _param_level(s: float) -> int:
    n = 1
    while s * 3.0**n < 18.0:
        n += 1
    return n


def param_ray_point(xi: Angle, s: float, guess: complex, max_newton: int = 60) -> complex:
    """Parameter a with Phi(a) = exp(s + 2 pi i xi), by Newton from ``guess``."""
    n = _param_level(s)
    W = cmath.exp(complex(s * 3.0**n, 2 * math.pi * float(mul_map(3**n, xi))))
    a = complex(guess)
    for _ in range(max_newton):
        z, dz = a, 1.0 + 0j
        for _ in range(n):
            dz = (3 * z * z + 6 * a * z) * dz + 3 * z * z
            z = z * z * (z + 3 * a)
        # phi_a^(-1)(W) = W - a + a^2/W + O(1/W^2)
        F = z - (W - a + a * a / W)
        dF = dz + 1 - 2 * a / W
        if dF == 0:
            raise NoConvergence("vanishing derivative on parameter ray")
        step = F / dF
        a -= step
        if not math.isfinite(abs(a)):
            raise NoConvergence("parameter ray Newton diverged")
        if abs(step) <= 1e-15 * max(1.0, abs(a)):
            return a
    raise NoConvergence("parameter ray Newton did not settle")


def _landing_period(xi: Angle) -> int | None:
    image = mul_map(3, xi)
    return angle_period(3, image) if is_periodic(3, image) else None


def param_ray(
    xi,
    s_end: float = 1e-5,
    s_start: float = 8.0,
    steps_per_division: int = 24,
    land_tol: float = 1e-3,
    jump_ratio: float = 25.0,
    polish: bool = True,
) -> RayTrace:
    """Parameter ray of angle xi, followed from s_start down to s_end.

    Status is Broken or Landed/MaxStepsReached as for dynamic rays.  When
    3*xi is periodic the ray tail approaches a parabolic parameter; the
    landing estimate is then the nearby root of the parabolic condition.
    """
    xi = Angle.of(xi)
    trace = RayTrace(xi)
    a = cmath.exp(complex(s_start, 2 * math.pi * float(xi))) / 4 ** (1 / 3)
    s, j, prev_step = s_start, 0, None
    while True:
        try:
            a_new = param_ray_point(xi, s, a)
        except NoConvergence:
            trace.status = "Broken"
            return trace
        step = abs(a_new - a) if trace.points else None
        if step is not None and prev_step is not None and step > jump_ratio * prev_step and step > 1e-9:
            trace.status = "Broken"
            return trace
        trace.points.append((a_new, s))
        prev_step, a = step, a_new
        if s <= s_end:
            break
        j += 1
        s = s_start * 3.0 ** (-j / steps_per_division)
    trace.landing = trace.tail
    q = _landing_period(xi)
    if polish and q is not None:
        polished = parabolic_polish(trace.tail, q)
        if polished is not None:
            trace.landing = polished[0]
            trace.status = "Landed"
            return trace
    if trace.tail_movement(steps_per_division) < land_tol:
        trace.status = "Landed"
    else:
        trace.landing = None
    return trace


@dataclass(frozen=True)
class LimbVerdict:
    kind: str  # CoLand | Distinct | Inconclusive
    representative: complex | None  # a or -a, whichever satisfies the co-landing
    result: ColandResult

    @property
    def in_limb(self) -> bool:
        return self.kind == "CoLand"

    def __str__(self):
        rep = "" if self.representative is None else f" a={self.representative.real:.17g},{self.representative.imag:.17g}"
        return f"{self.result}{rep}"


def is_in_limb(a: complex, t, **kw) -> LimbVerdict:
    """Whether the rays R(x_k), R(y_k) of the simulating pair of t co-land for P_a or P_{-a}.

    P_a and P_{-a} are conjugate by z -> -z, which turns every ray by 1/2, so
    both representatives are tried.
    """
    sp = simulating_pair(t)
    a = complex(a)
    results = []
    for rep in (a, -a) if a != 0 else (a,):
        res = coland_test(lemon_map(rep), sp.x_k, sp.y_k, sp.q, **kw)
        if res.kind == "CoLand":
            return LimbVerdict("CoLand", rep, res)
        results.append(res)
    kinds = {r.kind for r in results}
    kind = "Distinct" if kinds == {"Distinct"} else "Inconclusive"
    return LimbVerdict(kind, None, results[0])


def _center_residual(a: complex, q: int):
    w, dw = -2 * a, -2.0 + 0j
    for _ in range(q):
        dw = (3 * w * w + 6 * a * w) * dw + 3 * w * w
        w = w * w * (w + 3 * a)
    return w + 2 * a, dw + 2


def center_newton(seed: complex, q: int, tol: float = ROOT_TOL, max_iter: int = 200) -> complex:
    a = complex(seed)
    for _ in range(max_iter):
        F, dF = _center_residual(a, q)
        if dF == 0:
            break
        step = F / dF
        a -= step
        if not math.isfinite(abs(a)) or abs(a) > 1e6:
            break
        if abs(step) <= tol * max(1.0, abs(a)):
            if abs(_center_residual(a, q)[0]) <= 1e3 * tol * max(1.0, abs(a)):
                return a
            break
    raise NoConvergence(f"center Newton from {seed} did not converge")


def center_candidates(q: int) -> list:
    """All roots a != 0 of P_a^q(-2a) = -2a, as polynomial roots polished by Newton."""
    a_poly = np.polynomial.Polynomial([0, 1])
    w = -2 * a_poly
    for _ in range(q):
        w = w * w * (w + 3 * a_poly)
    roots = (w + 2 * a_poly).roots()
    out = []
    for r in roots:
        if abs(r) < 1e-8:
            continue
        try:
            a = center_newton(r, q)
        except NoConvergence:
            continue
        if exact_period(lemon_map(a), -2 * a, q) == q and all(abs(a - b) > 1e-9 for b in out):
            out.append(a)
    return out


def find_center(t, newton_seed: complex | None = None, **kw) -> complex:
    """Parameter in L_0(t) whose free critical point has exact period q.

    Without a seed every root of the center equation is tried in turn.
    The returned representative is the one for which the rays of the
    simulating pair co-land.
    """
    t = Angle.of(t)
    q = angle_period(2, t)
    if newton_seed is None:
        for a in sorted(center_candidates(q), key=lambda c: (round(c.real, 9), round(c.imag, 9))):
            verdict = is_in_limb(a, t, **kw)
            if verdict.in_limb:
                return verdict.representative
        raise NoConvergence(f"no center of period {q} lies in the limb of {t}")
    a = center_newton(newton_seed, q)
    if exact_period(lemon_map(a), -2 * a, q) != q:
        raise WrongLimb(f"converged to {a}, where -2a does not have exact period {q}")
    verdict = is_in_limb(a, t, **kw)
    if not verdict.in_limb:
        raise WrongLimb(f"center {a} is not in the limb of {t} ({verdict.result})")
    return verdict.representative
