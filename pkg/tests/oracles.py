"""Brute-force reference computations, written without the package's own helpers.

Everything here works on plain Fractions in [0, 1) so that the checks in the
test-suite do not share code paths with the implementation under test.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

HALF = Fraction(1, 2)


def orbit_of(k: int, x: Fraction) -> tuple:
    pts = [x]
    y = (k * x) % 1
    while y != x:
        pts.append(y)
        y = (k * y) % 1
    return tuple(sorted(pts))


@lru_cache(maxsize=None)
def cycles(k: int, q: int) -> tuple:
    """All cycles of exact period q of t -> k t, each a sorted tuple."""
    n = k**q - 1
    found = set()
    for p in range(n):
        orb = orbit_of(k, Fraction(p, n))
        if len(orb) == q:
            found.add(orb)
    return tuple(sorted(found))


def one_line(points, k: int) -> tuple:
    """One-line form of the permutation induced by t -> k t on the sorted points."""
    pts = sorted(points)
    return tuple(pts.index((k * p) % 1) + 1 for p in pts)


def cyclic_descents(images: tuple) -> int:
    n = len(images)
    return sum(1 for i in range(n) if images[i] > images[(i + 1) % n])


@lru_cache(maxsize=None)
def realizations(images: tuple, k: int) -> list:
    return [c for c in cycles(k, len(images)) if one_line(c, k) == images]


def ordered_realizations(images: tuple) -> dict:
    """m_3 realizations keyed by how many of their points lie in [0, 1/2)."""
    out = {}
    for c in realizations(images, 3):
        j = sum(1 for a in c if a < HALF)
        assert j not in out, "two realizations with the same count below 1/2"
        out[j] = c
    return out


def interlacing_pairs(t: Fraction) -> list:
    """Every ordered pair (X, Y) of m_3 realizations of the doubling cycle of t with
    x_1 < y_1 < x_2 < ... < y_q and x_k < 1/2 <= y_k, where t is the k-th point."""
    orb = orbit_of(2, t)
    k = orb.index(t) + 1
    images = one_line(orb, 2)
    reals = realizations(images, 3)
    out = []
    for X in reals:
        for Y in reals:
            merged = [v for pair in zip(X, Y) for v in pair]
            if all(a < b for a, b in zip(merged, merged[1:])) and X[k - 1] < HALF <= Y[k - 1]:
                out.append((X, Y))
    return out


def doubling_periodic(max_period: int) -> list:
    out = []
    for q in range(1, max_period + 1):
        for c in cycles(2, q):
            out.extend(c)
    return sorted(out)


def chords_cross(a: tuple, b: tuple) -> bool:
    """Endpoints of two chords of the circle strictly interleave."""
    (a0, a1), (b0, b1) = sorted(a), sorted(b)
    return (a0 < b0 < a1 < b1) or (b0 < a0 < b1 < a1)
