"""Moving-maxima fields: sampling, exponent function, closed-form madogram."""
import math

import numpy as np
import pytest
from scipy import stats

from regmado import (
    DependenceQuery,
    Location,
    M4Spec,
    Panel,
    Region,
    analytic_V,
    analytic_madogram,
    dump_spec_json,
    epsilon_relation,
    extremal_coefficient,
    known_margin_estimate,
    load_spec_json,
    madogram_from_extremal,
    reference_independent,
    reference_total_dependence,
    region_maxima,
    sample_unit_frechet,
    simulate_m4,
    unit_frechet_cdf,
)
from regmado.m4 import replication_rng

from conftest import ALL_CASES, V_ORACLES, random_query, random_regions, random_spec


# ---------------------------------------------------------------------------
# unit Frechet sampling
# ---------------------------------------------------------------------------


def test_sample_unit_frechet_known_points():
    assert sample_unit_frechet(math.exp(-1.0)) == pytest.approx(1.0, abs=1e-12)
    assert sample_unit_frechet(math.exp(-0.5)) == pytest.approx(2.0, abs=1e-12)
    # frozen from the inverse CDF; round-trips through F to full precision
    out = sample_unit_frechet(0.9)
    assert out == pytest.approx(9.491221581029905, abs=1e-9)
    assert math.exp(-1.0 / out) == pytest.approx(0.9, abs=1e-12)


def test_sample_unit_frechet_rejects_closed_endpoints():
    for bad in (0.0, 1.0, -0.5, 2.0):
        with pytest.raises(ValueError):
            sample_unit_frechet(bad)


# ---------------------------------------------------------------------------
# spec validation and JSON round trip
# ---------------------------------------------------------------------------


def test_spec_requires_unit_mass():
    loc = Location(0, 0)
    M4Spec(1, 1, 2, {loc: [[0.25, 0.75]]})
    with pytest.raises(ValueError, match="sum"):
        M4Spec(1, 1, 2, {loc: [[0.25, 0.74]]})
    with pytest.raises(ValueError, match="negative"):
        M4Spec(1, 1, 2, {loc: [[-0.25, 1.25]]})
    with pytest.raises(ValueError, match="shape"):
        M4Spec(1, 1, 2, {loc: [[1.0]]})
    with pytest.raises(ValueError):
        M4Spec(0, 1, 2, {})
    with pytest.raises(ValueError):
        M4Spec(1, 3, 2, {})


def test_spec_json_round_trip(tmp_path, two_pattern):
    spec, _, _ = two_pattern
    path = tmp_path / "spec.json"
    dump_spec_json(spec, path)
    back = load_spec_json(path)
    assert back.L == spec.L and back.m_min == spec.m_min and back.m_max == spec.m_max
    assert set(back.coeffs) == set(spec.coeffs)
    for loc in spec.coeffs:
        np.testing.assert_array_equal(back.coeffs[loc], spec.coeffs[loc])


# ---------------------------------------------------------------------------
# exponent function V and extremal coefficients
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("case", sorted(ALL_CASES))
def test_analytic_V_matches_closed_form(case):
    spec, x, y = ALL_CASES[case]()
    V_display, _, _ = V_ORACLES[case]
    locs = x.locations + y.locations
    k, s = len(x), len(y)
    for alpha in (0.5, 1.0, 2.0, 5.0):
        for beta in (0.5, 1.0, 2.0, 5.0):
            z = [alpha] * k + [beta] * s
            assert analytic_V(spec, locs, z) == pytest.approx(
                V_display(alpha, beta), abs=1e-12
            )


def test_analytic_V_single_location_at_one(even_parity):
    spec, x, _ = even_parity
    assert analytic_V(spec, [x.locations[0]], [1.0]) == pytest.approx(1.0, abs=1e-12)


def test_analytic_V_scaling_halves(even_parity):
    spec, x, y = even_parity
    locs = x.locations + y.locations
    z = np.array([1.0, 2.0, 0.5, 3.0])
    assert analytic_V(spec, locs, 2 * z) == pytest.approx(
        analytic_V(spec, locs, z) / 2.0, abs=1e-12
    )


def test_analytic_V_errors(even_parity):
    spec, x, y = even_parity
    with pytest.raises(ValueError, match="one threshold per location"):
        analytic_V(spec, x.locations, [1.0])
    with pytest.raises(ValueError, match=r"\(7,7\)"):
        analytic_V(spec, [Location(7, 7)], [1.0])
    with pytest.raises(ValueError, match="positive"):
        analytic_V(spec, [x.locations[0]], [0.0])


def test_homogeneity_order_minus_one_random_sweep():
    # V(t z) = V(z) / t, which is the computable form of the copula's
    # max-stability C(u)**t = C(u**t)
    rng = np.random.default_rng(77)
    for _ in range(100):
        spec, locs = random_spec(rng)
        z = rng.uniform(0.2, 5.0, size=len(locs))
        t = rng.uniform(0.2, 5.0)
        assert analytic_V(spec, locs, t * z) == pytest.approx(
            analytic_V(spec, locs, z) / t, abs=1e-12
        )


def test_extremal_coefficients_of_demo_fields(even_parity, diagonal_split, two_pattern):
    spec1, x1, y1 = even_parity
    assert extremal_coefficient(spec1, x1) == pytest.approx(1.25, abs=1e-12)
    assert extremal_coefficient(spec1, y1) == pytest.approx(1.0, abs=1e-12)
    spec2, _, y2 = diagonal_split
    assert extremal_coefficient(spec2, y2) == pytest.approx(1.5, abs=1e-12)
    spec3, x3, y3 = two_pattern
    assert extremal_coefficient(spec3, x3) == pytest.approx(1.0, abs=1e-12)
    assert extremal_coefficient(spec3, y3) == pytest.approx(10 / 9, abs=1e-12)


def test_extremal_coefficient_bounds_random():
    rng = np.random.default_rng(13)
    for _ in range(50):
        spec, locs = random_spec(rng)
        region = Region(locs)
        eps = extremal_coefficient(spec, region)
        assert 1.0 - 1e-12 <= eps <= len(region) + 1e-12
    single = Region([locs[0]])
    assert extremal_coefficient(spec, single) == pytest.approx(1.0, abs=1e-12)


# ---------------------------------------------------------------------------
# simulation
# ---------------------------------------------------------------------------


def test_degenerate_pattern_reproduces_the_innovation():
    locs = [Location(0, 0), Location(5, 5)]
    spec = M4Spec(1, 1, 1, {loc: np.array([[1.0]]) for loc in locs})
    panel = simulate_m4(spec, locs, 50, seed=9)
    # total dependence: all locations equal the single shared innovation
    np.testing.assert_array_equal(panel.rows[:, 0], panel.rows[:, 1])
    expected = np.array(
        [sample_unit_frechet(replication_rng(9, t).random((1, 1)))[0, 0] for t in range(50)]
    )
    np.testing.assert_array_equal(panel.rows[:, 0], expected)


def test_simulation_deterministic_in_seed(even_parity):
    spec, x, y = even_parity
    locs = x.locations + y.locations
    a = simulate_m4(spec, locs, 200, seed=21)
    b = simulate_m4(spec, locs, 200, seed=21)
    np.testing.assert_array_equal(a.rows, b.rows)
    c = simulate_m4(spec, locs, 200, seed=22)
    assert not np.array_equal(a.rows, c.rows)


def test_simulation_names_uncovered_location(even_parity):
    spec, _, _ = even_parity
    with pytest.raises(ValueError, match=r"\(8,8\)"):
        simulate_m4(spec, [Location(8, 8)], 5, seed=0)
    with pytest.raises(ValueError, match="replication"):
        simulate_m4(spec, [Location(2, 1)], 0, seed=0)


def test_simulated_margins_are_unit_frechet(even_parity):
    spec, x, y = even_parity
    locs = x.locations + y.locations
    panel = simulate_m4(spec, locs, 10_000, seed=42)
    for col in range(len(locs)):
        ks = stats.kstest(panel.rows[:, col], unit_frechet_cdf).statistic
        assert ks < 0.02


def test_simulated_joint_cdf_matches_exponent_function(even_parity):
    spec, x, y = even_parity
    locs = x.locations + y.locations
    panel = simulate_m4(spec, locs, 10_000, seed=11)
    mx, my = region_maxima(panel, x), region_maxima(panel, y)
    empirical = np.mean((mx <= 2.0) & (my <= 2.0))
    analytic = math.exp(-analytic_V(spec, locs, [2.0] * len(locs)))
    assert empirical == pytest.approx(analytic, abs=0.02)


# ---------------------------------------------------------------------------
# closed-form madogram
# ---------------------------------------------------------------------------


def test_analytic_madogram_known_values(even_parity, diagonal_split):
    spec1, x1, y1 = even_parity
    am = analytic_madogram(spec1, x1, y1, DependenceQuery(1, 1))
    assert am.nu == pytest.approx(1 / 36, abs=1e-12)
    assert am.V_joint == pytest.approx(1.25, abs=1e-12)
    spec2, x2, y2 = diagonal_split
    am2 = analytic_madogram(spec2, x2, y2, DependenceQuery(1, 1))
    assert am2.nu == pytest.approx(0.05, abs=1e-12)
    assert am2.V_joint == pytest.approx(1.5, abs=1e-12)


def test_analytic_madogram_total_dependence_is_zero():
    # two locations carrying the same single pattern: maxima coincide
    locs = [Location(0, 0), Location(1, 1)]
    spec = M4Spec(1, 1, 2, {loc: np.array([[0.3, 0.7]]) for loc in locs})
    am = analytic_madogram(
        spec, Region([locs[0]]), Region([locs[1]]), DependenceQuery(1.7, 1.7)
    )
    assert am.eps_x == pytest.approx(1.0, abs=1e-12)
    assert am.eps_y == pytest.approx(1.0, abs=1e-12)
    assert am.nu == pytest.approx(0.0, abs=1e-12)


def test_analytic_madogram_rejects_overlap(even_parity):
    spec, x, _ = even_parity
    y = Region([Location(2, 2), Location(3, 3)])
    with pytest.raises(ValueError, match=r"\(2,2\)"):
        analytic_madogram(spec, x, y, DependenceQuery(1, 1))


def test_analytic_madogram_bounds_random_sweep():
    rng = np.random.default_rng(303)
    for _ in range(200):
        spec, locs = random_spec(rng)
        x, y = random_regions(rng, locs)
        am = analytic_madogram(spec, x, y, random_query(rng))
        assert 0.0 <= am.nu <= 0.5
        assert 1.0 - 1e-12 <= am.eps_x <= len(x) + 1e-12
        assert 1.0 - 1e-12 <= am.eps_y <= len(y) + 1e-12


# ---------------------------------------------------------------------------
# reference values and extremal-coefficient routes
# ---------------------------------------------------------------------------


def test_reference_independent_arithmetic():
    assert reference_independent(1.0, 1.0, 1.0) == pytest.approx(1 / 6, abs=1e-12)
    assert reference_independent(1.0, 1.0, 1e12) == pytest.approx(0.0, abs=1e-9)


def test_reference_independent_matches_disjoint_support_spec():
    # x-locations live in pattern 1, y-locations in pattern 2: the maxima use
    # disjoint innovation sets, hence are independent
    ax1, ax2 = Location(0, 0), Location(0, 1)
    by = Location(3, 3)
    coeffs = {
        ax1: np.array([[0.5, 0.5], [0.0, 0.0]]),
        ax2: np.array([[0.25, 0.75], [0.0, 0.0]]),
        by: np.array([[0.0, 0.0], [0.3, 0.7]]),
    }
    spec = M4Spec(2, 1, 2, coeffs)
    x, y = Region([ax1, ax2]), Region([by])
    eps_x = extremal_coefficient(spec, x)
    assert eps_x == pytest.approx(1.25, abs=1e-12)
    for alpha in (0.3, 1.0, 2.5, 10.0):
        am = analytic_madogram(spec, x, y, DependenceQuery(alpha, alpha))
        assert am.nu == pytest.approx(reference_independent(eps_x, 1.0, alpha), abs=1e-12)


def test_reference_independent_monte_carlo():
    # two fields drawn from disjoint innovation banks, glued into one panel
    loc_a, loc_b = Location(0, 0), Location(9, 9)
    spec = M4Spec(1, 1, 2, {loc_a: np.array([[0.5, 0.5]]), loc_b: np.array([[0.5, 0.5]])})
    T = 20_000
    za = simulate_m4(spec, [loc_a], T, seed=71).rows[:, 0]
    zb = simulate_m4(spec, [loc_b], T, seed=72).rows[:, 0]
    panel = Panel([loc_a, loc_b], np.column_stack([za, zb]), margin="unit-frechet")
    est = known_margin_estimate(
        panel, Region([loc_a]), Region([loc_b]), DependenceQuery(1, 1)
    )
    bound = 3 * math.sqrt(est.sigma2_hat / T)
    assert abs(est.nu_hat - 1 / 6) < bound


def test_reference_total_dependence_arithmetic():
    for alpha in (0.2, 1.0, 5.0):
        assert reference_total_dependence(2.0, 2.0, alpha) == pytest.approx(0.0, abs=1e-12)
    assert reference_total_dependence(1.0, 2.0, 1.0) == pytest.approx(1 / 12, abs=1e-12)


def test_total_dependence_never_exceeds_independence():
    grid = np.linspace(1.0, 5.0, 9)
    alphas = (0.2, 0.5, 1.0, 2.0, 5.0, 20.0)
    for ex in grid:
        for ey in grid:
            for alpha in alphas:
                assert reference_total_dependence(ex, ey, alpha) <= reference_independent(
                    ex, ey, alpha
                ) + 1e-15


def test_dependence_ordering_on_random_specs():
    rng = np.random.default_rng(404)
    for _ in range(100):
        spec, locs = random_spec(rng)
        x, y = random_regions(rng, locs)
        alpha = float(10 ** rng.uniform(-0.7, 1.3))
        eps_x = extremal_coefficient(spec, x)
        eps_y = extremal_coefficient(spec, y)
        nu = analytic_madogram(spec, x, y, DependenceQuery(alpha, alpha)).nu
        assert reference_total_dependence(eps_x, eps_y, alpha) - 1e-12 <= nu
        assert nu <= reference_independent(eps_x, eps_y, alpha) + 1e-12


def test_equal_exponent_routes_agree():
    rng = np.random.default_rng(505)
    for _ in range(100):
        spec, locs = random_spec(rng)
        x, y = random_regions(rng, locs)
        alpha = float(10 ** rng.uniform(-0.7, 1.3))
        nu_direct = analytic_madogram(spec, x, y, DependenceQuery(alpha, alpha)).nu
        eps_x = extremal_coefficient(spec, x)
        eps_y = extremal_coefficient(spec, y)
        eps_u = analytic_V(spec, x.locations + y.locations, np.ones(len(locs)))
        assert madogram_from_extremal(eps_x, eps_y, eps_u, alpha) == pytest.approx(
            nu_direct, abs=1e-12
        )


def test_epsilon_relation_values(even_parity):
    assert epsilon_relation(1.0, 1.0, 2.0, 1.0) == pytest.approx((2.0, 1.0), abs=1e-12)
    # even-parity pair: eps_x = 5/4, eps_y = 1, union = 5/4, both routes 1/36
    eps1, eps2 = epsilon_relation(1.25, 1.0, 1.25, 1.0)
    c = 0.5 * (1.25 / 2.25 + 0.5)
    via1 = (1.0 * eps1) / (1.0 + 1.0 * eps1) - c
    via2 = (2.25 * eps2) / (1.0 + 2.25 * eps2) - c
    assert via1 == pytest.approx(1 / 36, abs=1e-12)
    assert via2 == pytest.approx(1 / 36, abs=1e-12)
    spec, x, y = even_parity
    assert analytic_madogram(spec, x, y, DependenceQuery(1, 1)).nu == pytest.approx(
        1 / 36, abs=1e-12
    )


def test_epsilon_relation_second_ratio_range():
    rng = np.random.default_rng(606)
    for _ in range(100):
        eps_x, eps_y = rng.uniform(1.0, 5.0, size=2)
        eps_u = rng.uniform(max(eps_x, eps_y), eps_x + eps_y)
        _, eps2 = epsilon_relation(eps_x, eps_y, eps_u, float(rng.uniform(0.2, 20)))
        assert 0.5 - 1e-12 <= eps2 <= 1.0 + 1e-12


def test_epsilon_relation_rejects_bad_union():
    with pytest.raises(ValueError):
        epsilon_relation(2.0, 1.0, 1.5, 1.0)
    with pytest.raises(ValueError):
        epsilon_relation(0.5, 1.0, 1.5, 1.0)
