"""Partner angles of the quadratic minor lamination, orbit portraits and third cycles."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .angles import Angle, Orbit, forward_orbit, period
from .combinatorics import (
    Permutation,
    all_cycles,
    combinatorics,
    degree,
    dynamically_reducible,
    enumerate_realizations,
)
from .errors import AmbiguousThirdCycle, NotPrimitive, ZeroAngle
from .simulating import project_angle, simulating_pair


def _crosses(a: float, b: float, ends: np.ndarray) -> bool:
    if len(ends) == 0:
        return False
    inside_c = (ends[:, 0] > a) & (ends[:, 0] < b)
    inside_d = (ends[:, 1] > a) & (ends[:, 1] < b)
    return bool(np.any(inside_c != inside_d))


@lru_cache(maxsize=None)
def partner_chords(q: int) -> tuple:
    """All partner pairs of period <= q, as (Angle, Angle) with the smaller first.

    Periods are processed in increasing order.  Within a period the smallest
    unpaired angle is joined to the next unpaired angle whose chord crosses
    none of the chords drawn so far.
    """
    if q <= 1:
        return ()
    chords = list(partner_chords(q - 1))
    n = 2**q - 1
    todo = [Angle(p, n) for p in range(1, n) if period(2, Angle(p, n)) == q]
    ends = [(float(a), float(b)) for a, b in chords]
    while todo:
        a = todo.pop(0)
        arr = np.array(ends, dtype=float).reshape(-1, 2)
        for j, b in enumerate(todo):
            if not _crosses(float(a), float(b), arr):
                todo.pop(j)
                chords.append((a, b))
                ends.append((float(a), float(b)))
                break
        else:
            raise AssertionError(f"no partner found for {a}")
    return tuple(chords)


def partner_table(q: int) -> list:
    """Partner pairs of exact period q, sorted by first angle."""
    return sorted((a, b) for a, b in partner_chords(q) if period(2, a) == q)


@lru_cache(maxsize=None)
def _partner_lookup(q: int) -> dict:
    out = {}
    for a, b in partner_table(q):
        out[a] = b
        out[b] = a
    return out


def m_partner(t) -> Angle:
    t = Angle.of(t)
    if t.num == 0:
        raise ZeroAngle("the angle 0 has no partner")
    return _partner_lookup(period(2, t))[t]


def partner_pair_in_orbit(orbit: Orbit) -> tuple | None:
    """1-based indices (i, j) of the unique partner pair inside the orbit, if any."""
    if len(orbit) < 2:
        return None
    for i, a in enumerate(orbit.angles, start=1):
        b = m_partner(a)
        if b in orbit:
            return tuple(sorted((i, orbit.index(b))))
    return None


def _union_classes(pairs) -> list:
    parent: dict = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in pairs:
        parent[find(a)] = find(b)
    groups: dict = {}
    for x in list(parent):
        groups.setdefault(find(x), set()).add(x)
    return sorted((tuple(sorted(g)) for g in groups.values()), key=lambda g: g[0])


def _arcs_of(cls) -> list:
    pts = sorted(cls)
    if len(pts) < 2:
        return []
    out = []
    for a, b in zip(pts, pts[1:] + pts[:1]):
        length = (b.value - a.value) % 1
        out.append((length, a, b))
    return out


@dataclass(frozen=True)
class Portrait:
    """Formal orbit portrait of the landing points of a doubling cycle.

    ``kind`` is one of trivial, primitive, satellite.  ``classes`` groups the
    angles landing together; ``cycles`` counts cycles of rays, ``ray_period``
    is the period of a single ray divided by that of its landing point.
    """

    kind: str
    classes: tuple
    cycles: int = 1
    ray_period: int = 1
    rotation: Angle | None = None
    characteristic_arc: tuple | None = None
    landing_period: int = field(default=0)

    def __str__(self):
        body = ",".join("{" + ",".join(str(a) for a in c) + "}" for c in self.classes)
        arc = "" if self.characteristic_arc is None else f" arc=({self.characteristic_arc[0]},{self.characteristic_arc[1]})"
        rot = "" if self.rotation is None else f" rot={self.rotation}"
        return f"kind={self.kind} period={self.landing_period} classes={{{body}}}{rot}{arc}"


def _portrait_from_classes(kind: str, classes, q: int) -> Portrait:
    size = len(classes[0])
    angles = [a for c in classes for a in c]
    n_cycles = len({forward_orbit(2, a).angles for a in angles})
    r = size // n_cycles
    rotation = None
    if kind == "satellite":
        cls = sorted(classes[0])
        p = len(classes)
        img = cls[0]
        for _ in range(p):
            img = Angle(2 * img.num, img.den)
        rotation = Angle(cls.index(img), len(cls))
    arcs = [arc for c in classes for arc in _arcs_of(c)]
    char = None
    if arcs:
        _, a, b = min(arcs, key=lambda x: x[0])
        char = (a, b)
    return Portrait(kind, tuple(classes), n_cycles, r, rotation, char, len(classes))


def _propagate(a: Angle, b: Angle, q: int) -> list:
    pairs = []
    for _ in range(q):
        pairs.append((a, b))
        a, b = Angle(2 * a.num, a.den), Angle(2 * b.num, b.den)
    return pairs


def portrait_for_limb(orbit: Orbit, limb) -> Portrait:
    """Portrait of the landing points of ``orbit`` for a generic parameter in the limb.

    The limb is given by a partner pair.  Among the wakes bounded by an orbit
    angle and its partner, the innermost one containing the limb decides.
    """
    lo, hi = sorted(Angle.of(x) for x in limb)
    q = len(orbit)
    best = None
    for t in orbit:
        if t.num == 0:
            continue
        u = m_partner(t)
        a, b = sorted((t, u))
        if a.value <= lo.value and hi.value <= b.value:
            if best is None or b.value - a.value < best[1].value - best[0].value:
                best = (a, b, t, u)
    if best is None:
        return Portrait("trivial", tuple((a,) for a in orbit.angles), 1, 1, None, None, q)
    _, _, t, u = best
    classes = _union_classes(_propagate(t, u, q))
    kind = "satellite" if u in orbit else "primitive"
    return _portrait_from_classes(kind, classes, q)


@dataclass(frozen=True)
class MergePrediction:
    merged_period: int
    ray_period: int
    rotation: Angle
    portrait: Portrait

    def __str__(self):
        return f"merged_period={self.merged_period} r={self.ray_period} rot={self.rotation} {self.portrait}"


def predict_merging(sigma: Permutation) -> MergePrediction | None:
    """Satellite portrait into which the landing points of the sigma-cycle can merge."""
    cert = dynamically_reducible(sigma)
    if cert is None:
        return None
    (orbit,) = enumerate_realizations(sigma, 2)
    classes = sorted((tuple(sorted(orbit[i - 1] for i in cyc)) for cyc in cert.cycles), key=lambda c: c[0])
    portrait = _portrait_from_classes("satellite", classes, sigma.size)
    return MergePrediction(cert.p, cert.r, cert.rotation, portrait)


def _partner_map(portrait: Portrait, orbit: Orbit) -> dict:
    out = {}
    for cls in portrait.classes:
        mine = [a for a in cls if a in orbit]
        other = [a for a in cls if a not in orbit]
        out[mine[0]] = other[0]
    return out


def _unlinked(a, b) -> bool:
    pts = sorted(x.value for x in b)
    gaps = {sum(1 for y in pts if y < x.value) % len(pts) for x in a}
    return len(gaps) == 1


def third_cycle_candidates(t, limb) -> list:
    """All m_3 cycles projecting onto the partner cycle, compatible with the x/y pattern."""
    sp = simulating_pair(t)
    portrait = portrait_for_limb(sp.orbit_t, limb)
    if portrait.kind != "primitive":
        raise NotPrimitive(f"limb {limb} gives a {portrait.kind} portrait")
    partner = _partner_map(portrait, sp.orbit_t)
    target = {b.value: a for a, b in partner.items()}
    q = sp.q
    used = set(sp.ox.angles) | set(sp.oy.angles)
    arcs = [(x.value, y.value) for x, y in sp.intervals()]
    found = []
    for orb in all_cycles(3, q):
        if used.intersection(orb.angles):
            continue
        if any(lo < u.value < hi for u in orb for lo, hi in arcs):
            continue
        attach = {}
        for u in orb:
            pr = project_angle(sp, u, depth=2 * q)
            if not pr.exact or pr.lo not in target:
                break
            attach[target[pr.lo]] = u
        if len(attach) != q:
            continue
        groups = []
        for i, ti in enumerate(sp.orbit_t, start=1):
            x, y = sp.interval(i)
            groups.append((x, y, attach[ti]))
        if all(_unlinked(g, h) for g in groups for h in groups if g is not h):
            found.append(orb)
    return found


def third_cycle(t, limb) -> Orbit | None:
    found = third_cycle_candidates(t, limb)
    if len(found) > 1:
        raise AmbiguousThirdCycle(f"{len(found)} candidate cycles")
    if not found:
        return None
    orb = found[0]
    assert degree(combinatorics(orb)) in (1, 2)
    return orb
