"""Python access to the fueter library.

Reports come back as plain dicts.
"""

import json

from ._fueter import (
    FueterError,
    QFunction,
    Quaternion,
    cf_integral,
    choose_epsilon,
    epsilon_threshold,
    extension_truth,
    kernel_series_partial_sum,
    polynomial_from_json,
    radius_certificate,
    zoo,
    zoo_names,
)
from . import _fueter

__all__ = [
    "FueterError",
    "QFunction",
    "Quaternion",
    "cf_integral",
    "check_regular",
    "choose_epsilon",
    "epsilon_threshold",
    "extend",
    "extension_truth",
    "kernel_series_partial_sum",
    "polynomial_from_json",
    "radius_certificate",
    "taylor",
    "zoo",
    "zoo_names",
]


def check_regular(f, radius=1.0, samples=1000, seed=1, tol=1e-6):
    """Max |dbar f| over seeded points of the ball of the given radius."""
    return json.loads(_fueter._check_regular(f, radius, samples, seed, tol))


def taylor(f, center=None, order=10):
    """Taylor table in the first variable; radius_estimate is "inf" for polynomials."""
    return json.loads(_fueter._taylor(f, center or Quaternion(), order))


def extend(f, delta=0.3, kappa=0.1, c=1.0, u_radius=0.7, order=10, seed=1):
    """Boundary-extension pipeline on the model domain."""
    return json.loads(_fueter._extend(f, delta, kappa, c, u_radius, order, seed))
