"""Simulating orbits, lemon limbs and renormalization checks for cubic polynomials."""
from .angles import Angle, Orbit, forward_orbit, mul_map, period
from .combinatorics import count_realizations, degree, dynamically_reducible, enumerate_realizations
from .errors import DomainError
from .laminations import m_partner, partner_table, portrait_for_limb, predict_merging, third_cycle
from .lemon import boundary_param, find_center, internal_kappa, is_in_limb, lemon_map, param_ray
from .numerics import CubicMap, coland_test, landing_point, trace_ray, yoccoz_check
from .renorm import classify_coland_orbit, lren_membership, make_chebyshev_basilica, make_merging_example
from .simulating import simulating_pair

__version__ = "0.1.0"

__all__ = [
    "Angle",
    "Orbit",
    "forward_orbit",
    "mul_map",
    "period",
    "count_realizations",
    "degree",
    "dynamically_reducible",
    "enumerate_realizations",
    "DomainError",
    "m_partner",
    "partner_table",
    "portrait_for_limb",
    "predict_merging",
    "third_cycle",
    "boundary_param",
    "find_center",
    "internal_kappa",
    "is_in_limb",
    "lemon_map",
    "param_ray",
    "CubicMap",
    "coland_test",
    "landing_point",
    "trace_ray",
    "yoccoz_check",
    "classify_coland_orbit",
    "lren_membership",
    "make_chebyshev_basilica",
    "make_merging_example",
    "simulating_pair",
]
