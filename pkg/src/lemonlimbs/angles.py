"""Exact rational angles on the circle R/Z and the maps theta -> k*theta."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from math import gcd

from .errors import PreperiodicAngle, ZeroDenominator


@total_ordering
class Angle:
    """A rational point of the circle, stored reduced with 0 <= num < den."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        if den == 0:
            raise ZeroDenominator("angle with zero denominator")
        value = Fraction(num, den) % 1
        self.num = value.numerator
        self.den = value.denominator

    @classmethod
    def of(cls, value) -> "Angle":
        if isinstance(value, Angle):
            return value
        if isinstance(value, str):
            return cls.parse(value)
        value = Fraction(value)
        return cls(value.numerator, value.denominator)

    @classmethod
    def parse(cls, text: str) -> "Angle":
        text = text.strip()
        if "/" in text:
            p, q = text.split("/", 1)
            return cls(int(p), int(q))
        return cls(Fraction(text))

    @property
    def value(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __float__(self):
        return self.num / self.den

    def __add__(self, other):
        return Angle.of(self.value + Fraction(_plain(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Angle.of(self.value - Fraction(_plain(other)))

    def __rsub__(self, other):
        return Angle.of(Fraction(_plain(other)) - self.value)

    def __eq__(self, other):
        if isinstance(other, Angle):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.value == other
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, Angle):
            return self.value < other.value
        if isinstance(other, (int, Fraction)):
            return self.value < other
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __str__(self):
        return f"{self.num}/{self.den}" if self.num else "0"

    def __repr__(self):
        return f"Angle({self.num}, {self.den})"


def _plain(x):
    return x.value if isinstance(x, Angle) else x


def angle_new(p: int, q: int) -> Angle:
    return Angle(p, q)


def mul_map(k: int, theta: Angle) -> Angle:
    return Angle(k * theta.num, theta.den)


def is_periodic(k: int, theta: Angle) -> bool:
    # periodic exactly when the reduced denominator is prime to k
    return gcd(theta.den, k) == 1


def period(k: int, theta: Angle) -> int:
    """Exact period of ``theta`` under multiplication by ``k``."""
    if not is_periodic(k, theta):
        raise PreperiodicAngle(f"{theta} is not periodic under m_{k}")
    if theta.den == 1:
        return 1
    n, power = 1, k % theta.den
    while power != 1:
        power = power * k % theta.den
        n += 1
    # the multiplicative order of k mod den is the period of every reduced p/den
    return n


@dataclass(frozen=True)
class Orbit:
    """A periodic cycle of ``m_base``, angles sorted increasingly in [0, 1)."""

    angles: tuple
    map_base: int = 2

    def __post_init__(self):
        object.__setattr__(self, "angles", tuple(sorted(Angle.of(a) for a in self.angles)))

    def __len__(self):
        return len(self.angles)

    def __iter__(self):
        return iter(self.angles)

    def __getitem__(self, i):
        return self.angles[i]

    def __contains__(self, theta):
        return Angle.of(theta) in self.angles

    @property
    def period(self) -> int:
        return len(self.angles)

    def index(self, theta) -> int:
        """1-based position of ``theta`` in the sorted orbit."""
        return self.angles.index(Angle.of(theta)) + 1

    def shifted(self, delta) -> "Orbit":
        return Orbit(tuple(a + delta for a in self.angles), self.map_base)

    def count_below(self, bound) -> int:
        return sum(1 for a in self.angles if a.value < bound)

    def __str__(self):
        return format_angle_list(self.angles)


def forward_orbit(k: int, theta: Angle) -> Orbit:
    q = period(k, theta)
    pts, t = [], theta
    for _ in range(q):
        pts.append(t)
        t = mul_map(k, t)
    return Orbit(tuple(pts), k)


def format_angle_list(angles) -> str:
    return "{" + ",".join(str(a) for a in angles) + "}"


def parse_angle_list(text: str) -> list:
    body = text.strip().strip("{}[]()")
    if not body:
        return []
    return [Angle.parse(tok) for tok in body.split(",")]


def cyclically_between(lo: Angle, x: Angle, hi: Angle) -> bool:
    """True when ``x`` lies on the open arc running counterclockwise from lo to hi."""
    a, b, c = lo.value, x.value, hi.value
    if a < c:
        return a < b < c
    return b > a or b < c
