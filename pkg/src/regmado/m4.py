"""Moving-maxima (M4) max-stable random fields on the integer lattice.

An M4 field is defined by a finite family of signature patterns: non-negative
coefficients ``a[l, m]`` attached to each lattice location, summing to one
over all patterns l and lags m. The field value at a location is the maximum
of ``a[l, m] * X[l, 1 - m]`` over patterns and lags, where the ``X`` are
independent unit Frechet innovations shared by every location of one field
draw -- that sharing is what creates spatial dependence.

The module provides the simulator, the exponent (dependence) function V, the
extremal coefficients, and the closed-form generalized madogram derived from
them, plus the independence / total-dependence reference values.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, Mapping, Sequence, Tuple

import numpy as np

from .core import (
    UNIT_FRECHET,
    DependenceQuery,
    Location,
    Panel,
    Region,
    require_disjoint,
)

# Substreams: field draw t of a run seeded with s uses PCG64 seeded by the
# SeedSequence entropy pool of [s, t], so draws are reproducible in isolation
# and may run in any order or in parallel.
RNG_NAME = "numpy PCG64, SeedSequence([seed, replication]) substreams"


def replication_rng(seed: int, replication: int) -> np.random.Generator:
    """Independent generator for one replication of a seeded run."""
    if seed < 0 or replication < 0:
        raise ValueError("seed and replication index must be non-negative")
    return np.random.default_rng([seed, replication])


def substream_seed(seed: int, replication: int) -> int:
    """Derive an integer seed for a nested seeded run (one per replication)."""
    if seed < 0 or replication < 0:
        raise ValueError("seed and replication index must be non-negative")
    return int(np.random.SeedSequence([seed, replication]).generate_state(1, np.uint64)[0])


def sample_unit_frechet(uniform):
    """Map Uniform(0,1) draws to unit Frechet via the inverse CDF.

    The unit Frechet CDF is ``F(z) = exp(-1/z)``, so the quantile function is
    ``-1 / log(u)``. Accepts a scalar or an array; every entry must lie
    strictly inside (0, 1).
    """
    u = np.asarray(uniform, dtype=float)
    if np.any(u <= 0.0) or np.any(u >= 1.0):
        raise ValueError("uniform draws must lie strictly inside (0, 1)")
    out = -1.0 / np.log(u)
    return float(out) if np.isscalar(uniform) else out


def unit_frechet_cdf(z):
    """CDF of the unit Frechet distribution, ``exp(-1/z)`` for z > 0."""
    return np.exp(-1.0 / np.asarray(z, dtype=float))


@dataclass(frozen=True, eq=False)
class M4Spec:
    """Signature-pattern coefficients of one M4 field.

    Parameters
    ----------
    L : int
        Number of signature patterns (>= 1).
    m_min, m_max : int
        Inclusive lag range; one field draw needs innovations for exactly
        these lags and no time dimension beyond them.
    coeffs : mapping Location -> ndarray of shape (L, m_max - m_min + 1)
        Non-negative coefficients summing to one (tolerance 1e-12) at every
        location. A failing sum is a user error, not renormalized.
    """

    L: int
    m_min: int
    m_max: int
    coeffs: Mapping[Location, np.ndarray]

    def __init__(self, L: int, m_min: int, m_max: int, coeffs: Mapping[Location, np.ndarray]):
        if L < 1:
            raise ValueError(f"need at least one signature pattern, got L={L}")
        if m_min > m_max:
            raise ValueError(f"empty lag range: m_min={m_min} > m_max={m_max}")
        width = m_max - m_min + 1
        frozen: Dict[Location, np.ndarray] = {}
        for loc, a in coeffs.items():
            if not isinstance(loc, Location):
                raise ValueError(f"coefficient keys must be Location, got {loc!r}")
            arr = np.array(a, dtype=float)
            if arr.shape != (L, width):
                raise ValueError(
                    f"coefficients at {loc} have shape {arr.shape}, expected ({L}, {width})"
                )
            if np.any(arr < 0):
                raise ValueError(f"negative coefficient at {loc}")
            total = arr.sum()
            if abs(total - 1.0) > 1e-12:
                raise ValueError(
                    f"coefficients at {loc} sum to {total!r}, must be 1 within 1e-12"
                )
            arr.flags.writeable = False
            frozen[loc] = arr
        object.__setattr__(self, "L", int(L))
        object.__setattr__(self, "m_min", int(m_min))
        object.__setattr__(self, "m_max", int(m_max))
        object.__setattr__(self, "coeffs", frozen)

    @property
    def n_lags(self) -> int:
        return self.m_max - self.m_min + 1

    def coeff_array(self, locations: Sequence[Location]) -> np.ndarray:
        """Coefficients stacked as (len(locations), L, n_lags), validating coverage."""
        rows = []
        for loc in locations:
            if loc not in self.coeffs:
                raise ValueError(f"no coefficients for location {loc} in this field spec")
            rows.append(self.coeffs[loc])
        return np.stack(rows)

    def to_dict(self) -> dict:
        """JSON-ready form: keys L, m_min, m_max and a list of location entries."""
        return {
            "L": self.L,
            "m_min": self.m_min,
            "m_max": self.m_max,
            "entries": [
                {"location": [loc.i, loc.j], "coeffs": arr.tolist()}
                for loc, arr in self.coeffs.items()
            ],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "M4Spec":
        try:
            entries = doc["entries"]
            coeffs = {
                Location(int(e["location"][0]), int(e["location"][1])): np.array(e["coeffs"])
                for e in entries
            }
            return cls(int(doc["L"]), int(doc["m_min"]), int(doc["m_max"]), coeffs)
        except (KeyError, IndexError, TypeError) as exc:
            raise ValueError(f"malformed field spec document: {exc}") from exc


def load_spec_json(path) -> M4Spec:
    """Read an M4 field spec from a JSON file (see ``M4Spec.to_dict``)."""
    with open(path, "r", encoding="utf-8") as fh:
        return M4Spec.from_dict(json.load(fh))


def dump_spec_json(spec: M4Spec, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(spec.to_dict(), fh, indent=2)


@dataclass(frozen=True)
class AnalyticMadogram:
    """Closed-form madogram value together with its building blocks.

    ``nu = V_joint / (1 + V_joint) - c`` where ``V_joint`` is the joint
    exponent function at (alpha, ..., alpha, beta, ..., beta) and the
    centering ``c`` combines the within-region extremal coefficients:
    ``c = (eps_x/(alpha+eps_x) + eps_y/(beta+eps_y)) / 2``.
    """

    nu: float
    V_joint: float
    eps_x: float
    eps_y: float
    c: float
    alpha: float
    beta: float

    def __post_init__(self) -> None:
        c = 0.5 * (
            self.eps_x / (self.alpha + self.eps_x) + self.eps_y / (self.beta + self.eps_y)
        )
        if abs(self.c - c) > 1e-12:
            raise ValueError("centering term inconsistent with extremal coefficients")
        nu = self.V_joint / (1.0 + self.V_joint) - self.c
        if abs(self.nu - nu) > 1e-12:
            raise ValueError("nu inconsistent with V_joint and centering term")
        if not (0.0 <= self.nu <= 0.5):
            raise ValueError(f"nu must lie in [0, 1/2], got {self.nu}")


def simulate_m4(
    spec: M4Spec, locations: Sequence[Location], T: int, seed: int
) -> Panel:
    """Draw T independent fields at the given locations.

    Each replication draws a fresh L x n_lags innovation matrix of independent
    unit Frechet variables; all locations of that replication share it. The
    result is a unit-Frechet panel, deterministic in ``seed``, with one
    substream per replication (see ``replication_rng``).
    """
    locs = tuple(locations)
    if T < 1:
        raise ValueError(f"need at least one replication, got T={T}")
    A = spec.coeff_array(locs)  # (n_loc, L, n_lags)
    rows = np.empty((T, len(locs)))
    shape = (spec.L, spec.n_lags)
    tiny = np.finfo(float).tiny
    for t in range(T):
        u = replication_rng(seed, t).random(shape)
        # keep the draw inside the open interval (0,1)
        innovations = sample_unit_frechet(np.maximum(u, tiny))
        rows[t] = (A * innovations).max(axis=(1, 2))
    return Panel(locs, rows, margin=UNIT_FRECHET)


def analytic_V(
    spec: M4Spec, locations: Sequence[Location], z: Sequence[float]
) -> float:
    """Exponent function of the field's finite-dimensional law.

    ``V(z) = sum over (l, m) of max_i a[l, m, x_i] / z_i``; the joint CDF at z
    is ``exp(-V(z))``. Homogeneous of order -1: ``V(t z) = V(z) / t``.
    """
    locs = tuple(locations)
    zs = np.asarray(z, dtype=float)
    if zs.ndim != 1 or zs.size != len(locs):
        raise ValueError(
            f"need one threshold per location: got {zs.size} values for {len(locs)} locations"
        )
    if np.any(zs <= 0):
        raise ValueError("thresholds must be strictly positive")
    A = spec.coeff_array(locs)  # (n_loc, L, n_lags)
    return float((A / zs[:, None, None]).max(axis=0).sum())


def extremal_coefficient(spec: M4Spec, region: Region) -> float:
    """Extremal coefficient of a region: V at (1, ..., 1).

    Ranges from 1 (total dependence within the region) to the region size
    (independence).
    """
    return analytic_V(spec, region.locations, np.ones(len(region)))


def analytic_madogram(
    spec: M4Spec, x: Region, y: Region, q: DependenceQuery
) -> AnalyticMadogram:
    """Closed-form generalized madogram between two disjoint regions.

    Evaluates the joint exponent function at alpha over x's coordinates and
    beta over y's, converts via ``V/(1+V)``, and subtracts the centering term
    built from the two within-region extremal coefficients.
    """
    require_disjoint(x, y)
    k, s = len(x), len(y)
    z = np.concatenate([np.full(k, q.alpha), np.full(s, q.beta)])
    V_joint = analytic_V(spec, x.locations + y.locations, z)
    eps_x = extremal_coefficient(spec, x)
    eps_y = extremal_coefficient(spec, y)
    c = 0.5 * (eps_x / (q.alpha + eps_x) + eps_y / (q.beta + eps_y))
    nu = V_joint / (1.0 + V_joint) - c
    # the exact value is always in [0, 1/2]; strip sub-tolerance rounding noise
    if nu < 0.0 or nu > 0.5:
        if nu < -1e-12 or nu > 0.5 + 1e-12:
            raise ValueError(f"madogram value {nu} escapes [0, 1/2]; spec is inconsistent")
        nu = min(max(nu, 0.0), 0.5)
    return AnalyticMadogram(
        nu=nu, V_joint=V_joint, eps_x=eps_x, eps_y=eps_y, c=c,
        alpha=q.alpha, beta=q.beta,
    )


def analytic_grid(
    spec: M4Spec,
    x: Region,
    y: Region,
    alphas: Sequence[float],
    betas: Sequence[float],
):
    """Closed-form madogram over an (alpha, beta) grid, as a MadogramGrid."""
    from .core import MadogramGrid

    alphas = np.asarray(alphas, dtype=float)
    betas = np.asarray(betas, dtype=float)
    values = np.empty((alphas.size, betas.size))
    for a, alpha in enumerate(alphas):
        for b, beta in enumerate(betas):
            values[a, b] = analytic_madogram(spec, x, y, DependenceQuery(alpha, beta)).nu
    return MadogramGrid(
        alphas=alphas, betas=betas, values=values, kind="analytic",
        region_x=x, region_y=y,
    )


def reference_independent(eps_x: float, eps_y: float, alpha: float) -> float:
    """Madogram at exponent ``alpha`` for both regions when their maxima are independent.

    Depends on the regions only through their extremal coefficients.
    """
    _check_reference_args(eps_x, eps_y, alpha)
    eps_sum = eps_x + eps_y
    return eps_sum / (alpha + eps_sum) - _centering_equal_exponent(eps_x, eps_y, alpha)


def reference_total_dependence(eps_x: float, eps_y: float, alpha: float) -> float:
    """Same as ``reference_independent`` but for totally dependent region maxima."""
    _check_reference_args(eps_x, eps_y, alpha)
    eps_top = max(eps_x, eps_y)
    return eps_top / (alpha + eps_top) - _centering_equal_exponent(eps_x, eps_y, alpha)


def _centering_equal_exponent(eps_x: float, eps_y: float, alpha: float) -> float:
    return 0.5 * (eps_x / (alpha + eps_x) + eps_y / (alpha + eps_y))


def _check_reference_args(eps_x: float, eps_y: float, alpha: float) -> None:
    # allow summation rounding just below the theoretical floor of 1
    if eps_x < 1 - 1e-9 or eps_y < 1 - 1e-9:
        raise ValueError("extremal coefficients are never below 1")
    if alpha <= 0:
        raise ValueError("alpha must be positive")


def madogram_from_extremal(
    eps_x: float, eps_y: float, eps_union: float, alpha: float
) -> float:
    """Equal-exponent madogram from the three extremal coefficients alone."""
    _check_reference_args(eps_x, eps_y, alpha)
    if eps_union < max(eps_x, eps_y) - 1e-9:
        raise ValueError("the union coefficient cannot be below either region's")
    return eps_union / (alpha + eps_union) - _centering_equal_exponent(eps_x, eps_y, alpha)


def epsilon_relation(
    eps_x: float, eps_y: float, eps_union: float, alpha: float
) -> Tuple[float, float]:
    """Dependence ratios between the events {M(x) <= u} and {M(y) <= u}.

    Returns ``(eps1, eps2) = (eps_union / eps_y, eps_union / (eps_x + eps_y))``
    and verifies that reconstructing the equal-exponent madogram through
    either ratio agrees with the direct extremal-coefficient route to 1e-12.
    """
    _check_reference_args(eps_x, eps_y, alpha)
    if eps_union < max(eps_x, eps_y) - 1e-9:
        raise ValueError("the union coefficient cannot be below either region's")
    eps1 = eps_union / eps_y
    eps2 = eps_union / (eps_x + eps_y)
    c = _centering_equal_exponent(eps_x, eps_y, alpha)
    direct = madogram_from_extremal(eps_x, eps_y, eps_union, alpha)
    via_eps1 = (eps_y * eps1) / (alpha + eps_y * eps1) - c
    via_eps2 = ((eps_x + eps_y) * eps2) / (alpha + (eps_x + eps_y) * eps2) - c
    if abs(via_eps1 - direct) > 1e-12 or abs(via_eps2 - direct) > 1e-12:
        raise ValueError("madogram reconstructions through the ratios disagree")
    return eps1, eps2
