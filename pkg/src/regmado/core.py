"""Shared domain types: lattice locations, regions, observation panels, result grids.

Everything here is immutable after construction and safe to share across
threads; the operations are pure functions of their inputs.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

import numpy as np

UNIT_FRECHET = "unit-frechet"
RAW = "raw"

GRID_KINDS = (
    "analytic",
    "estimated-known-margins",
    "estimated-empirical-margins",
)


@dataclass(frozen=True, order=True)
class Location:
    """A point of the integer lattice. Hashable, so usable as a lookup key."""

    i: int
    j: int

    def __post_init__(self) -> None:
        if not (isinstance(self.i, (int, np.integer)) and isinstance(self.j, (int, np.integer))):
            raise ValueError(f"lattice coordinates must be integers, got ({self.i!r}, {self.j!r})")

    def __str__(self) -> str:
        return f"({self.i},{self.j})"


@dataclass(frozen=True)
class Region:
    """An ordered, duplicate-free collection of lattice locations.

    Parameters
    ----------
    locations : sequence of Location
        Non-empty, no duplicates; order is preserved as given.
    label : str, optional
        Short display name (e.g. a station-group tag).
    """

    locations: Tuple[Location, ...]
    label: Optional[str] = None

    def __init__(self, locations: Iterable[Location], label: Optional[str] = None):
        locs = tuple(locations)
        if not locs:
            raise ValueError("a region needs at least one location")
        seen = set()
        for loc in locs:
            if not isinstance(loc, Location):
                raise ValueError(f"region entries must be Location, got {loc!r}")
            if loc in seen:
                raise ValueError(f"duplicate location {loc} in region")
            seen.add(loc)
        object.__setattr__(self, "locations", locs)
        object.__setattr__(self, "label", label)

    def __len__(self) -> int:
        return len(self.locations)

    def __str__(self) -> str:
        return self.label or ";".join(str(loc) for loc in self.locations)

    def overlap(self, other: "Region") -> Tuple[Location, ...]:
        """Locations shared with another region (empty tuple if disjoint)."""
        mine = set(self.locations)
        return tuple(loc for loc in other.locations if loc in mine)


def require_disjoint(x: Region, y: Region) -> None:
    """Raise if the two regions share any location, listing the overlap."""
    shared = x.overlap(y)
    if shared:
        listing = ", ".join(str(loc) for loc in shared)
        raise ValueError(f"regions must be disjoint; shared locations: {listing}")


@dataclass(frozen=True)
class DependenceQuery:
    """A pair of positive exponents: ``alpha`` for region x, ``beta`` for region y."""

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if not (self.alpha > 0 and np.isfinite(self.alpha)):
            raise ValueError(f"alpha must be a positive finite real, got {self.alpha}")
        if not (self.beta > 0 and np.isfinite(self.beta)):
            raise ValueError(f"beta must be a positive finite real, got {self.beta}")


@dataclass(frozen=True, eq=False)
class Panel:
    """T replications of observations at a fixed set of locations.

    ``rows`` is a T x L matrix: row t holds replication t, column order matches
    ``locations``. ``margin`` records whether the columns are on the unit
    Frechet scale or raw (unknown marginals). Entries must be finite and
    strictly positive; panels are dense -- missing data is resolved before a
    Panel exists.
    """

    locations: Tuple[Location, ...]
    rows: np.ndarray
    margin: str

    def __init__(self, locations: Iterable[Location], rows: np.ndarray, margin: str):
        locs = tuple(locations)
        if len(set(locs)) != len(locs):
            raise ValueError("panel locations contain duplicates")
        if margin not in (UNIT_FRECHET, RAW):
            raise ValueError(f"margin must be {UNIT_FRECHET!r} or {RAW!r}, got {margin!r}")
        arr = np.array(rows, dtype=float)
        if arr.ndim != 2:
            raise ValueError(f"rows must be a 2-d matrix, got shape {arr.shape}")
        if arr.shape[0] < 1:
            raise ValueError("a panel needs at least one replication")
        if arr.shape[1] != len(locs):
            raise ValueError(
                f"row width {arr.shape[1]} does not match {len(locs)} locations"
            )
        if not np.all(np.isfinite(arr)):
            raise ValueError("panel entries must all be finite")
        if not np.all(arr > 0):
            raise ValueError("panel entries must all be strictly positive")
        arr.flags.writeable = False
        object.__setattr__(self, "locations", locs)
        object.__setattr__(self, "rows", arr)
        object.__setattr__(self, "margin", margin)

    @property
    def T(self) -> int:
        return self.rows.shape[0]

    def column_index(self, location: Location) -> int:
        try:
            return self.locations.index(location)
        except ValueError:
            raise ValueError(f"location {location} is not in the panel") from None

    def column(self, location: Location) -> np.ndarray:
        return self.rows[:, self.column_index(location)]


def region_maxima(panel: Panel, region: Region) -> np.ndarray:
    """Per-replication maximum over a region's columns.

    Returns a length-T vector whose entry t is the maximum of row t restricted
    to the region's locations. Raises if the region mentions a location the
    panel does not carry, naming it.
    """
    cols = [panel.column_index(loc) for loc in region.locations]
    return panel.rows[:, cols].max(axis=1)


@dataclass(frozen=True, eq=False)
class MadogramGrid:
    """Madogram values over an (alpha, beta) grid, with provenance.

    ``values[a, b]`` corresponds to ``alphas[a]``, ``betas[b]`` and always lies
    in [0, 1/2]. ``kind`` says how the values were obtained; ``seed`` and ``T``
    carry simulation provenance when applicable.
    """

    alphas: np.ndarray
    betas: np.ndarray
    values: np.ndarray
    kind: str
    region_x: Region
    region_y: Region
    seed: Optional[int] = None
    T: Optional[int] = None

    def __post_init__(self) -> None:
        alphas = np.asarray(self.alphas, dtype=float)
        betas = np.asarray(self.betas, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if alphas.ndim != 1 or alphas.size == 0 or betas.ndim != 1 or betas.size == 0:
            raise ValueError("alpha and beta grids must be non-empty 1-d arrays")
        if np.any(alphas <= 0) or np.any(betas <= 0):
            raise ValueError("grid exponents must be positive")
        if values.shape != (alphas.size, betas.size):
            raise ValueError(
                f"values shape {values.shape} does not match grid "
                f"({alphas.size}, {betas.size})"
            )
        if self.kind not in GRID_KINDS:
            raise ValueError(f"kind must be one of {GRID_KINDS}, got {self.kind!r}")
        if np.any(values < 0.0) or np.any(values > 0.5):
            raise ValueError("madogram values must lie in [0, 1/2]")
        for arr in (alphas, betas, values):
            arr.flags.writeable = False
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "betas", betas)
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class EstimateWithError:
    """A madogram point estimate with its normal-approximation error report.

    ``sigma2_hat`` is ``gamma_hat / 2 - nu_hat**2`` clipped at zero from below
    and ``ci95 = nu_hat +/- 1.96 * sqrt(sigma2_hat / T)``. ``approximate_ci``
    marks estimates whose interval uses a plug-in variance outside the proved
    known-margin theory.
    """

    nu_hat: float
    gamma_hat: float
    sigma2_hat: float
    T: int
    ci95: Tuple[float, float]
    approximate_ci: bool = False

    def __post_init__(self) -> None:
        if not (0.0 <= self.nu_hat <= 0.5):
            raise ValueError(f"nu_hat must lie in [0, 1/2], got {self.nu_hat}")
        if self.gamma_hat < 0 or self.sigma2_hat < 0:
            raise ValueError("gamma_hat and sigma2_hat must be non-negative")
        if self.T < 2:
            raise ValueError("error reports need T >= 2 replications")
        expected_sigma2 = max(0.5 * self.gamma_hat - self.nu_hat**2, 0.0)
        if abs(self.sigma2_hat - expected_sigma2) > 1e-12:
            raise ValueError("sigma2_hat inconsistent with gamma_hat and nu_hat")
        half = 1.96 * np.sqrt(self.sigma2_hat / self.T)
        if abs(self.ci95[0] - (self.nu_hat - half)) > 1e-12 or abs(
            self.ci95[1] - (self.nu_hat + half)
        ) > 1e-12:
            raise ValueError("ci95 inconsistent with nu_hat, sigma2_hat and T")

    @classmethod
    def from_moments(
        cls, nu_hat: float, gamma_hat: float, T: int, approximate_ci: bool = False
    ) -> "EstimateWithError":
        """Assemble the report from the two sample moments."""
        sigma2 = max(0.5 * gamma_hat - nu_hat**2, 0.0)
        half = 1.96 * np.sqrt(sigma2 / T)
        return cls(
            nu_hat=float(nu_hat),
            gamma_hat=float(gamma_hat),
            sigma2_hat=float(sigma2),
            T=int(T),
            ci95=(float(nu_hat - half), float(nu_hat + half)),
            approximate_ci=approximate_ci,
        )

    def covers(self, value: float) -> bool:
        return self.ci95[0] <= value <= self.ci95[1]
