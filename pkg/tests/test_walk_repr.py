import math

import pytest

from exploration import exact_connectivity_dp
from model_core import CapacityError, DegenerateParameterError, GraphParams, endpoint_probabilities
from oracle_brute import brute_connectivity
from walk_repr import (
    MonotonicityProfile,
    conditional_nonneg_prob,
    connectivity_via_walk,
    endpoint_marginals,
    monotonicity_profile,
)

ENUMERABLE = [(n, m) for n in range(1, 17) for m in range(1, 17) if n * m <= 16]


@pytest.mark.parametrize("m, p", [(1, 0.5), (3, 0.4), (8, 0.05)])
def test_single_left_vertex_conditional_is_one(m, p):
    assert conditional_nonneg_prob(GraphParams(n=1, m=m, p=p)) == pytest.approx(1.0, rel=1e-12)


def test_conditional_two_by_two():
    assert conditional_nonneg_prob(GraphParams(n=2, m=2, p=0.5)) == pytest.approx(20 / 27, rel=1e-12)


def test_connectivity_via_walk_two_by_two():
    result = connectivity_via_walk(GraphParams(n=2, m=2, p=0.5))
    assert result.prefactor == pytest.approx(27 / 64, rel=1e-14)
    assert result.total == pytest.approx(0.3125, rel=1e-12)
    assert set(result.to_dict()) == {"conditional", "prefactor", "endpoint_a", "endpoint_b", "total"}


@pytest.mark.parametrize("m, p", [(2, 0.5), (5, 0.3)])
def test_single_left_vertex_total(m, p):
    assert connectivity_via_walk(GraphParams(n=1, m=m, p=p)).total == pytest.approx(p**m, rel=1e-12)


@pytest.mark.parametrize("n, m", ENUMERABLE)
def test_walk_matches_enumeration(n, m):
    for p in [round(0.1 * t, 1) for t in range(1, 10)]:
        gp = GraphParams(n=n, m=m, p=p)
        assert abs(connectivity_via_walk(gp).total - brute_connectivity(gp)) <= 1e-10


def test_walk_matches_exploration_dp():
    gp = GraphParams(n=40, m=60, p=0.12)
    assert connectivity_via_walk(gp).total == pytest.approx(exact_connectivity_dp(gp), rel=1e-9)


@pytest.mark.slow
@pytest.mark.parametrize("n, m", [(20, 20), (40, 60), (60, 40)])
@pytest.mark.parametrize("p", [0.05, 0.1, 0.2])
def test_walk_matches_exploration_dp_grid(n, m, p):
    gp = GraphParams(n=n, m=m, p=p)
    assert connectivity_via_walk(gp).total == pytest.approx(exact_connectivity_dp(gp), rel=1e-9)


@pytest.mark.parametrize("n, m, p", [(1, 1, 0.5), (5, 7, 0.2), (30, 45, 0.1), (60, 60, 0.05), (60, 1, 0.9)])
def test_endpoint_marginals_match_closed_forms(n, m, p):
    gp = GraphParams(n=n, m=m, p=p)
    lattice_a, lattice_b = endpoint_marginals(gp)
    closed_a, closed_b = endpoint_probabilities(gp)
    assert lattice_a == pytest.approx(closed_a, rel=1e-10)
    assert lattice_b == pytest.approx(closed_b, rel=1e-10)
    assert closed_a == pytest.approx(math.exp(-m + m * math.log(m) - math.lgamma(m + 1)), rel=1e-12)


@pytest.mark.parametrize("n, m", [(5, 5), (10, 20), (30, 30)])
def test_conditional_factor_is_monotone_in_p(n, m):
    profile = monotonicity_profile(n, m, [0.05 * t for t in range(1, 20)])
    assert profile.monotone, f"first violation at index {profile.first_violation}"
    assert len(profile.values) == 19


def test_monotonicity_profile_reports_first_violation():
    profile = MonotonicityProfile(n=2, m=2, ps=[0.1, 0.2, 0.3], values=[0.5, 0.6, 0.55], slack=1e-10)
    assert profile.first_violation == 2
    assert not profile.monotone


@pytest.mark.parametrize("p", [0.0, 1.0])
def test_walk_rejects_degenerate_p(p):
    with pytest.raises(DegenerateParameterError):
        conditional_nonneg_prob(GraphParams(n=3, m=3, p=p))


def test_walk_state_budget():
    with pytest.raises(CapacityError):
        conditional_nonneg_prob(GraphParams(n=10, m=10, p=0.5), budget=99)


@pytest.mark.parametrize("n, m, p", [(50, 10, 0.99), (30, 30, 0.9), (10, 50, 0.99), (2, 2, 0.999)])
def test_conditional_and_total_stay_in_unit_interval_near_p_one(n, m, p):
    gp = GraphParams(n=n, m=m, p=p)
    value = conditional_nonneg_prob(gp)
    assert 0.0 <= value <= 1.0
    result = connectivity_via_walk(gp)
    assert 0.0 <= result.conditional <= 1.0
    assert 0.0 <= result.total <= 1.0
    assert result.total == pytest.approx(exact_connectivity_dp(gp), rel=1e-9)
