"""Ready-made moving-maxima coefficient rules.

Each builder assigns signature-pattern weights to lattice locations by a
simple geometric rule and returns an ``M4Spec`` covering exactly the
locations you pass in. They are handy for demos, tests and as templates for
writing your own rules: a rule is nothing more than a function from a
location to an (L x n_lags) weight matrix summing to one.
"""
from __future__ import annotations

from typing import Iterable

import numpy as np

from .core import Location
from .m4 import M4Spec


def _as_locations(locations: Iterable) -> tuple:
    out = []
    for loc in locations:
        if isinstance(loc, Location):
            out.append(loc)
        else:
            i, j = loc
            out.append(Location(int(i), int(j)))
    return tuple(out)


def even_parity_field(locations: Iterable) -> M4Spec:
    """Single pattern, lags {1, 2}; weights split by coordinate parity.

    Locations with both coordinates even get weights (1/2, 1/2); every other
    location gets (1/4, 3/4). Identical-weight locations are totally
    dependent; a both-even location next to an odd one is not.
    """
    locs = _as_locations(locations)
    coeffs = {}
    for loc in locs:
        if loc.i % 2 == 0 and loc.j % 2 == 0:
            coeffs[loc] = np.array([[0.5, 0.5]])
        else:
            coeffs[loc] = np.array([[0.25, 0.75]])
    return M4Spec(L=1, m_min=1, m_max=2, coeffs=coeffs)


def diagonal_split_field(locations: Iterable) -> M4Spec:
    """Single pattern, lags {1, 2}; weights split by side of the diagonal.

    Locations with i <= j get (1/4, 3/4); locations below the diagonal
    (i > j) get the mirrored (3/4, 1/4).
    """
    locs = _as_locations(locations)
    coeffs = {}
    for loc in locs:
        if loc.i <= loc.j:
            coeffs[loc] = np.array([[0.25, 0.75]])
        else:
            coeffs[loc] = np.array([[0.75, 0.25]])
    return M4Spec(L=1, m_min=1, m_max=2, coeffs=coeffs)


def two_pattern_parity_field(locations: Iterable) -> M4Spec:
    """Two patterns, lags {1, 2, 3}; weights split by odd-odd parity.

    Locations with both coordinates odd get the flat patterns
    (1/12, 1/12, 1/12) and (1/4, 1/4, 1/4); every other location gets the
    ramped (1/18, 1/9, 1/6) and flat (2/9, 2/9, 2/9). A second pattern makes
    extreme episodes come in more than one shape.
    """
    locs = _as_locations(locations)
    odd = np.array([[1 / 12, 1 / 12, 1 / 12], [1 / 4, 1 / 4, 1 / 4]])
    other = np.array([[1 / 18, 1 / 9, 1 / 6], [2 / 9, 2 / 9, 2 / 9]])
    coeffs = {}
    for loc in locs:
        if loc.i % 2 == 1 and loc.j % 2 == 1:
            coeffs[loc] = odd.copy()
        else:
            coeffs[loc] = other.copy()
    return M4Spec(L=2, m_min=1, m_max=3, coeffs=coeffs)
