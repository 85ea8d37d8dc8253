"""Shared fixtures: the three demo fields, random spec generation, station fixture."""
from __future__ import annotations

import csv

import numpy as np
import pytest

from regmado import (
    DependenceQuery,
    Location,
    M4Spec,
    Region,
    simulate_m4,
)
from regmado.fields import (
    diagonal_split_field,
    even_parity_field,
    two_pattern_parity_field,
)

# ----------------------------------------------------------------------------
# The three ready-made fields with the region pairs used throughout the tests.
# Known closed-form constants (derived by hand from the coefficient rules):
#   even-parity pair:        eps_x = 5/4, eps_y = 1,    nu(1,1) = 1/36
#   diagonal-split pair:     eps_x = 1,   eps_y = 3/2,  nu(1,1) = 1/20
#   two-pattern-parity pair: eps_x = 1,   eps_y = 10/9
# ----------------------------------------------------------------------------


def even_parity_case():
    x = Region([Location(2, 1), Location(2, 2)])
    y = Region([Location(3, 3), Location(3, 4)])
    spec = even_parity_field(x.locations + y.locations)
    return spec, x, y


def diagonal_split_case():
    x = Region([Location(1, 1)])
    y = Region([Location(3, 2), Location(3, 3), Location(4, 3)])
    spec = diagonal_split_field(x.locations + y.locations)
    return spec, x, y


def two_pattern_case():
    x = Region([Location(2, 1), Location(2, 2)])
    y = Region([Location(2, 3), Location(3, 3)])
    spec = two_pattern_parity_field(x.locations + y.locations)
    return spec, x, y


ALL_CASES = {
    "even-parity": even_parity_case,
    "diagonal-split": diagonal_split_case,
    "two-pattern": two_pattern_case,
}

# Displayed closed forms of the joint exponent function for the three cases,
# plus the within-region extremal coefficients (independent oracles: these are
# hand-reductions of sum-of-lagwise-maxima over the coefficient rules).
V_ORACLES = {
    "even-parity": (
        lambda a, b: 0.25 * max(2 / a, 1 / b) + 0.75 * max(1 / a, 1 / b),
        1.25,
        1.0,
    ),
    "diagonal-split": (
        lambda a, b: 0.25 * max(1 / a, 3 / b) + 0.75 * max(1 / a, 1 / b),
        1.0,
        1.5,
    ),
    "two-pattern": (
        lambda a, b: max(1 / (18 * a), 1 / (12 * b))
        + (1 / 9) * max(1 / a, 1 / b)
        + (1 / 6) * max(1 / a, 1 / b)
        + max(2 / (3 * a), 3 / (4 * b)),
        1.0,
        10 / 9,
    ),
}


def closed_form_nu(case: str, alpha: float, beta: float) -> float:
    """Madogram via the displayed V, independent of the library's evaluator."""
    V, eps_x, eps_y = V_ORACLES[case]
    v = V(alpha, beta)
    c = 0.5 * (eps_x / (alpha + eps_x) + eps_y / (beta + eps_y))
    return v / (1.0 + v) - c


@pytest.fixture(scope="session")
def even_parity():
    return even_parity_case()


@pytest.fixture(scope="session")
def diagonal_split():
    return diagonal_split_case()


@pytest.fixture(scope="session")
def two_pattern():
    return two_pattern_case()


@pytest.fixture(scope="session")
def even_parity_panel_100k(even_parity):
    """One big panel of the even-parity field, shared by the slow tests."""
    spec, x, y = even_parity
    return simulate_m4(spec, x.locations + y.locations, 100_000, seed=4242)


@pytest.fixture(scope="session")
def consistency_medians(diagonal_split):
    """Median |estimate - truth| of the rank-based estimator per sample size.

    20 seeds per T on the diagonal-split pair at equal exponents 1; shared by
    the consistency property test and the acceptance criterion.
    """
    from regmado import analytic_madogram, empirical_margin_estimate

    spec, x, y = diagonal_split
    locs = x.locations + y.locations
    q = DependenceQuery(1.0, 1.0)
    truth = analytic_madogram(spec, x, y, q).nu
    medians = {}
    for T in (100, 1000, 10_000):
        errors = []
        for s in range(20):
            panel = simulate_m4(spec, locs, T, seed=1000 + s)
            errors.append(abs(empirical_margin_estimate(panel, x, y, q).nu_hat - truth))
        medians[T] = float(np.median(errors))
    return medians


# ----------------------------------------------------------------------------
# Random specs / regions / queries for the property sweeps.
# ----------------------------------------------------------------------------


def random_spec(rng: np.random.Generator, n_locations: int | None = None) -> tuple:
    """A random valid field spec and its covered locations."""
    L = int(rng.integers(1, 4))
    m_min = int(rng.integers(-2, 2))
    m_max = m_min + int(rng.integers(0, 3))
    width = m_max - m_min + 1
    n = n_locations or int(rng.integers(2, 7))
    points = set()
    while len(points) < n:
        points.add((int(rng.integers(-5, 6)), int(rng.integers(-5, 6))))
    locations = [Location(i, j) for i, j in sorted(points)]
    coeffs = {}
    for loc in locations:
        a = rng.random((L, width)) + 1e-3
        a /= a.sum()
        coeffs[loc] = a
    return M4Spec(L, m_min, m_max, coeffs), locations


def random_regions(rng: np.random.Generator, locations) -> tuple[Region, Region]:
    """Split covered locations into two disjoint non-empty regions."""
    n = len(locations)
    k = int(rng.integers(1, n))
    order = rng.permutation(n)
    x = Region([locations[i] for i in order[:k]])
    y = Region([locations[i] for i in order[k:]])
    return x, y


def random_query(rng: np.random.Generator) -> DependenceQuery:
    alpha, beta = 10 ** rng.uniform(-0.7, 1.3, size=2)
    return DependenceQuery(float(alpha), float(beta))


# ----------------------------------------------------------------------------
# Synthetic station fixture: 5 stations, 38 years (1944-1981). FAJAO, LCOMP
# and CFELG are strictly increasing transforms of one shared field draw
# (common-factor dependence); PENAM and BCMOU come from an independent draw.
# ----------------------------------------------------------------------------

STATIONS_DEPENDENT = ("FAJAO", "LCOMP", "CFELG")
STATIONS_INDEPENDENT = ("PENAM", "BCMOU")
FIXTURE_YEARS = tuple(range(1944, 1982))


def station_fixture_rows():
    base = simulate_m4(
        even_parity_field([Location(0, 0)]), [Location(0, 0)], len(FIXTURE_YEARS), seed=90
    ).rows[:, 0]
    other = simulate_m4(
        even_parity_field([Location(0, 0), Location(1, 0)]),
        [Location(0, 0), Location(1, 0)],
        len(FIXTURE_YEARS),
        seed=91,
    ).rows
    columns = {
        "FAJAO": 40.0 * base**0.25,
        "LCOMP": 5.0 + 60.0 * base**0.2,
        "CFELG": 30.0 * base**0.3,
        "PENAM": 45.0 * other[:, 0] ** 0.25,
        "BCMOU": 55.0 * other[:, 1] ** 0.22,
    }
    return columns


def write_station_fixture(path) -> None:
    columns = station_fixture_rows()
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["station_id", "station_name", "year", "value"])
        for sid, values in columns.items():
            for year, value in zip(FIXTURE_YEARS, values):
                writer.writerow([sid, sid.title(), year, f"{value:.6f}"])


@pytest.fixture(scope="session")
def station_fixture(tmp_path_factory):
    path = tmp_path_factory.mktemp("stations") / "annual_maxima.csv"
    write_station_fixture(path)
    return path
