"""Cyclic permutations attached to periodic orbits of m_k, and their realizations.

Points are numbered 1..q in increasing order on [0, 1).  The combinatorics of a
cycle is the permutation sigma with m_k(t_i) = t_sigma(i).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .angles import Angle, Orbit
from .errors import DegreeTooHigh, InstanceTooLarge, OverlappingOrbits

# largest k**q - 1 the brute-force enumerator will scan by default (k = 3, q = 12)
DEFAULT_SCAN_LIMIT = 3**12 - 1


@dataclass(frozen=True)
class Permutation:
    """Permutation of {1..n} stored in one-line form: images[i-1] = sigma(i)."""

    images: tuple

    def __post_init__(self):
        images = tuple(int(x) for x in self.images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a permutation: {images}")
        object.__setattr__(self, "images", images)

    @property
    def size(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        # (self * other)(i) = self(other(i))
        return Permutation(tuple(self(other(i)) for i in range(1, other.size + 1)))

    def __pow__(self, n: int) -> "Permutation":
        result = Permutation(tuple(range(1, self.size + 1)))
        for _ in range(n):
            result = self * result
        return result

    def inverse(self) -> "Permutation":
        inv = [0] * self.size
        for i, j in enumerate(self.images, start=1):
            inv[j - 1] = i
        return Permutation(tuple(inv))

    def cycles(self) -> list:
        seen, out = set(), []
        for start in range(1, self.size + 1):
            if start in seen:
                continue
            cyc, i = [], start
            while i not in seen:
                seen.add(i)
                cyc.append(i)
                i = self(i)
            out.append(tuple(cyc))
        return out

    def is_cyclic(self) -> bool:
        return len(self.cycles()) == 1

    def conjugate_by_rotation(self, m: int) -> "Permutation":
        """rho^-m sigma rho^m where rho(i) = i + 1 mod n."""
        n = self.size
        return Permutation(tuple((self((i - 1 + m) % n + 1) - 1 - m) % n + 1 for i in range(1, n + 1)))

    def __str__(self):
        cycles = [c for c in self.cycles() if len(c) > 1] or [(1,)]
        sep = "" if self.size < 10 else " "
        return "".join("(" + sep.join(str(i) for i in c) + ")" for c in cycles)


class CyclicPerm(Permutation):
    def __post_init__(self):
        super().__post_init__()
        if not self.is_cyclic():
            raise ValueError(f"{self.images} is not a single cycle")


def parse_permutation(text: str, size: int | None = None) -> Permutation:
    """Accept cycle notation "(1243)", "(1 2 4 3)(5 6)" or one-line "[2,4,1,3]" / "2 4 1 3"."""
    text = text.strip()
    if text.startswith("("):
        groups = re.findall(r"\(([^)]*)\)", text)
        cycles = []
        for g in groups:
            g = g.strip()
            if re.search(r"[\s,]", g):
                cycles.append([int(x) for x in re.split(r"[\s,]+", g) if x])
            else:
                cycles.append([int(ch) for ch in g])
        n = max([size or 0] + [max(c) for c in cycles if c])
        images = list(range(1, n + 1))
        for c in cycles:
            for a, b in zip(c, c[1:] + c[:1]):
                images[a - 1] = b
        return Permutation(tuple(images))
    body = text.strip("[]")
    return Permutation(tuple(int(x) for x in re.split(r"[\s,]+", body) if x))


def parse_cyclic(text: str) -> CyclicPerm:
    return CyclicPerm(parse_permutation(text).images)


def permutation_of_points(values, image_of) -> Permutation:
    position = {v: i for i, v in enumerate(values, start=1)}
    return Permutation(tuple(position[image_of(v)] for v in values))


def combinatorics(orbit: Orbit) -> CyclicPerm:
    k = orbit.map_base
    perm = permutation_of_points(orbit.angles, lambda a: Angle(k * a.num, a.den))
    return CyclicPerm(perm.images)


def degree(sigma: Permutation) -> int:
    """Number of cyclic descents sigma(i) > sigma(i+1), with q+1 read as 1.

    The one-point cycle is given degree 1: the identity of a single point is
    realized by a rotation, never by a map of degree 0.
    """
    q = sigma.size
    if q == 1:
        return 1
    return sum(1 for i in range(1, q + 1) if sigma(i) > sigma(i % q + 1))


def rotation_number(sigma: Permutation) -> Angle | None:
    q = sigma.size
    shift = (sigma(1) - 1) % q
    if all(sigma(i) == (i - 1 + shift) % q + 1 for i in range(1, q + 1)):
        return Angle(shift, q)
    return None


def count_realizations(sigma: Permutation, k: int) -> int:
    q, d = sigma.size, degree(sigma)
    if d > k:
        raise DegreeTooHigh(f"degree {d} exceeds {k}")
    if sigma(q) > sigma(1):
        return comb(q + k - d, q)
    return comb(q + k - d - 1, q)


@lru_cache(maxsize=None)
def _cycles_by_combinatorics(k: int, q: int) -> dict:
    """All exact-period-q cycles of m_k as sorted numerator tuples over k**q - 1."""
    n = k**q - 1
    seen = bytearray(n if n > 0 else 1)
    table: dict = {}
    for p in range(max(n, 1)):
        if seen[p]:
            continue
        cyc, x = [], p
        while True:
            seen[x] = 1
            cyc.append(x)
            x = x * k % n if n > 1 else 0
            if x == p:
                break
        if len(cyc) != q:
            continue
        cyc.sort()
        perm = permutation_of_points(cyc, lambda v: v * k % n if n > 1 else 0)
        table.setdefault(perm.images, []).append(tuple(cyc))
    return table


def enumerate_realizations(sigma: Permutation, k: int, limit: int = DEFAULT_SCAN_LIMIT) -> list:
    """Every m_k cycle with combinatorics sigma, found by scanning all p/(k^q - 1).

    The orbits come back sorted by their smallest angle.
    """
    q = sigma.size
    n = k**q - 1
    if n > limit:
        raise InstanceTooLarge(f"k**q - 1 = {n} exceeds scan limit {limit}")
    found = _cycles_by_combinatorics(k, q).get(sigma.images, [])
    denom = max(n, 1)
    return sorted((Orbit(tuple(Angle(v, denom) for v in cyc), k) for cyc in found), key=lambda o: o.angles)


def all_cycles(k: int, q: int, limit: int = DEFAULT_SCAN_LIMIT) -> list:
    n = k**q - 1
    if n > limit:
        raise InstanceTooLarge(f"k**q - 1 = {n} exceeds scan limit {limit}")
    denom = max(n, 1)
    out = []
    for cycs in _cycles_by_combinatorics(k, q).values():
        out.extend(Orbit(tuple(Angle(v, denom) for v in cyc), k) for cyc in cycs)
    return sorted(out, key=lambda o: o.angles)


def m2_combinatorics(q: int) -> list:
    """Distinct combinatorics of period-q cycles of doubling, as CyclicPerms."""
    return [CyclicPerm(images) for images in sorted(_cycles_by_combinatorics(2, q))]


def union_combinatorics(orbits) -> Permutation:
    pts = []
    for orb in orbits:
        pts.extend(orb.angles)
    if len(set(pts)) != len(pts):
        raise OverlappingOrbits("orbits share an angle")
    k = orbits[0].map_base
    return permutation_of_points(sorted(pts), lambda a: Angle(k * a.num, a.den))


def _unlinked(a, b, n: int) -> bool:
    """Whether the point sets a and b of {1..n} (on a circle) are unlinked."""
    b_sorted = sorted(b)
    # a must fit in one gap between cyclically consecutive points of b
    gaps = set()
    for x in a:
        gaps.add(sum(1 for y in b_sorted if y < x) % len(b_sorted))
    return len(gaps) == 1


def _cycle_rotation(perm: Permutation, cycle) -> Fraction | None:
    support = sorted(cycle)
    r = len(support)
    pos = {v: i for i, v in enumerate(support)}
    shift = (pos[perm(support[0])] - 0) % r
    if all(pos[perm(v)] == (i + shift) % r for i, v in enumerate(support)):
        return Fraction(shift, r)
    return None


@dataclass(frozen=True)
class ReductionCertificate:
    p: int
    r: int
    rotation: Angle
    cycles: tuple

    def __str__(self):
        body = "".join("(" + "".join(str(i) for i in c) + ")" for c in self.cycles)
        return f"p={self.p} r={self.r} rot={self.rotation} cycles={body}"


def reduction_certificates(sigma: Permutation) -> list:
    """Every divisor p < q for which sigma^p splits into p unlinked rotation cycles."""
    q = sigma.size
    out = []
    for p in range(1, q):
        if q % p:
            continue
        r = q // p
        power = sigma**p
        cycles = power.cycles()
        if len(cycles) != p or any(len(c) != r for c in cycles):
            continue
        rots = {_cycle_rotation(power, c) for c in cycles}
        if len(rots) != 1 or None in rots:
            continue
        if all(_unlinked(a, b, q) for a in cycles for b in cycles if a is not b):
            rot = rots.pop()
            out.append(ReductionCertificate(p, r, Angle(rot), tuple(tuple(sorted(c)) for c in cycles)))
    return out


def dynamically_reducible(sigma: Permutation) -> ReductionCertificate | None:
    certs = reduction_certificates(sigma)
    assert len(certs) <= 1, f"several reductions for {sigma}: {certs}"
    return certs[0] if certs else None
