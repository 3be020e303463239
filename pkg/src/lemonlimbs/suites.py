"""Exhaustive self-checks over all doubling cycles up to a given period.

Each suite returns a SuiteResult; ``ok`` is False as soon as any instance
fails, and ``failures`` lists the first few offenders.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .angles import Angle, period
from .combinatorics import count_realizations, degree, enumerate_realizations, m2_combinatorics
from .errors import DomainError, NonRepelling
from .laminations import _crosses, partner_chords, partner_table
from .simulating import (
    interlaces,
    interval_lengths_ok,
    primed_order_ok,
    realizations_ordered,
    rotated_orbit,
    simulating_pair,
    verify_nothird,
)

MAX_REPORTED = 5


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)
    unit: str = "cases"

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, what) -> None:
        self.failures.append(what)

    def __str__(self):
        if self.ok:
            return f"OK {self.checked} {self.unit} checked"
        shown = " ".join(str(f).replace(" ", "") for f in self.failures[:MAX_REPORTED])
        return f"FAIL {len(self.failures)} of {self.checked} {self.unit} failed: {shown}"


def periodic_doubling_angles(max_period: int):
    """Every angle of exact period q <= max_period under doubling, q >= 1."""
    for q in range(1, max_period + 1):
        n = 2**q - 1
        for p in range(n):
            a = Angle(p, n)
            if period(2, a) == q:
                yield a


def realize_counts(max_period: int) -> SuiteResult:
    res = SuiteResult("realize-counts", unit="combinatorics")
    for q in range(1, max_period + 1):
        for sigma in m2_combinatorics(q):
            res.checked += 1
            n3 = len(enumerate_realizations(sigma, 3))
            n2 = len(enumerate_realizations(sigma, 2))
            if not (n3 == count_realizations(sigma, 3) == q + 1 and n2 == count_realizations(sigma, 2) == 1):
                res.fail(f"{sigma}:m3={n3},m2={n2}")
    return res


def interlace(max_period: int) -> SuiteResult:
    """Interlacing, deployment counts, primed-angle order and arc lengths of every simulating pair."""
    res = SuiteResult("interlace", unit="pairs")
    for t in periodic_doubling_angles(max_period):
        res.checked += 1
        try:
            sp = simulating_pair(t)
        except (DomainError, AssertionError) as exc:
            res.fail(f"{t}:{exc}")
            continue
        # for t = 0 the marked arc ends at 1/2 itself, so the primed angles have no strict order
        primed = primed_order_ok(sp) if t.num else True
        if not (interlaces(sp) and primed and interval_lengths_ok(sp)):
            res.fail(str(t))
    return res


def nothird(max_period: int) -> SuiteResult:
    res = SuiteResult("nothird", unit="pairs")
    for q in range(1, max_period + 1):
        for sigma in m2_combinatorics(q):
            for k in range(1, q + 1):
                res.checked += 1
                if not verify_nothird(sigma, k):
                    res.fail(f"{sigma}:k={k}")
    return res


def invol(max_period: int) -> SuiteResult:
    """Half-turn of O_k is O_(q-k) for rotation cycles and never for 0 < k < q otherwise."""
    res = SuiteResult("invol", unit="orbits")
    for q in range(1, max_period + 1):
        for sigma in m2_combinatorics(q):
            levels = realizations_ordered(sigma)
            rotation_type = degree(sigma) == 1
            for k in range(q + 1):
                if not rotation_type and k in (0, q):
                    continue
                res.checked += 1
                same = rotated_orbit(levels[k]) == levels[q - k]
                if same != rotation_type:
                    res.fail(f"{sigma}:k={k}")
    return res


PERIOD4_TABLE = [(1, 2), (3, 4), (6, 9), (7, 8), (11, 12), (13, 14)]
PERIOD5_TABLE = [
    (1, 2), (3, 4), (5, 6), (7, 8), (9, 10), (11, 12), (13, 18), (14, 17),
    (15, 16), (19, 20), (21, 22), (23, 24), (25, 26), (27, 28), (29, 30),
]


def partner_tables(max_period: int) -> SuiteResult:
    """Reference tables for periods 4 and 5, plus involution and non-crossing up to max_period."""
    import numpy as np

    res = SuiteResult("partner-tables", unit="pairs")
    for q, table in ((4, PERIOD4_TABLE), (5, PERIOD5_TABLE)):
        if q > max_period:
            continue
        got = [(a.num * (2**q - 1) // a.den, b.num * (2**q - 1) // b.den) for a, b in partner_table(q)]
        if got != table:
            res.fail(f"table{q}")
    chords = partner_chords(max_period)
    ends = np.array([(float(a), float(b)) for a, b in chords]).reshape(-1, 2)
    seen = {}
    for i, (a, b) in enumerate(chords):
        res.checked += 1
        if period(2, a) != period(2, b) or a in seen or b in seen:
            res.fail(f"{a}-{b}")
        seen[a], seen[b] = b, a
        others = np.delete(ends, i, axis=0)
        if _crosses(float(a), float(b), others):
            res.fail(f"cross:{a}-{b}")
    for t in periodic_doubling_angles(max_period):
        if t.num and t not in seen:
            res.fail(f"unpaired:{t}")
    return res


def yoccoz(max_period: int) -> SuiteResult:
    """Yoccoz inequality at the co-landing point of every lemon-limb centre of period <= min(max_period, 3)."""
    from .lemon import center_candidates, lemon_map
    from .numerics import NoConvergence, coland_test, find_periodic, yoccoz_check

    res = SuiteResult("yoccoz", unit="centres")
    for q in range(2, min(max_period, 3) + 1):
        angles = [t for t in periodic_doubling_angles(q) if period(2, t) == q]
        for a in center_candidates(q):
            P = lemon_map(a)
            for t in angles:
                sp = simulating_pair(t)
                r = coland_test(P, sp.x_k, sp.y_k, q)
                if r.kind != "CoLand":
                    continue
                res.checked += 1
                try:
                    pt = find_periodic(P, q, r.z1)
                    if not yoccoz_check(pt.multiplier, 0, 2, 3, period=q):
                        res.fail(f"{t}@{a:.6g}")
                except (NoConvergence, NonRepelling) as exc:
                    res.fail(f"{t}@{a:.6g}:{type(exc).__name__}")
                break
    return res


SUITES = {
    "realize-counts": realize_counts,
    "interlace": interlace,
    "nothird": nothird,
    "invol": invol,
    "partner-tables": partner_tables,
    "yoccoz": yoccoz,
}
