import math

import numpy as np
import pytest

from model_core import (
    CapacityError,
    DegenerateParameterError,
    DomainError,
    GraphParams,
    check_state_budget,
    closed_form_connectivity,
    endpoint_probabilities,
    expectation_curves,
    extended_beta,
    log_binom,
    poisson_pmf,
    prefactor,
    walk_params,
)


@pytest.mark.parametrize(
    "k, lam, expected",
    [
        (0, 0.0, 1.0),
        (3, 0.0, 0.0),
        (1, 1.0, math.exp(-1.0)),
        (2, 2.0, 2.0 * math.exp(-2.0)),
    ],
)
def test_poisson_pmf_small_values(k, lam, expected):
    assert poisson_pmf(k, lam) == pytest.approx(expected, rel=1e-14, abs=0.0)


def test_poisson_pmf_large_arguments_stay_finite():
    # lam^k / k! overflows doubles long before the product does
    value = poisson_pmf(500, 500.0)
    assert value == pytest.approx(1.0 / math.sqrt(2.0 * math.pi * 500.0), rel=1e-3)


@pytest.mark.parametrize("k, lam", [(-1, 1.0), (1.5, 1.0), (2, -0.5), (2, math.inf), (2, math.nan)])
def test_poisson_pmf_rejects_bad_input(k, lam):
    with pytest.raises(DomainError):
        poisson_pmf(k, lam)


def test_graph_params_validation():
    with pytest.raises(DomainError):
        GraphParams(n=0, m=3, p=0.5)
    with pytest.raises(DomainError):
        GraphParams(n=2, m=3, p=1.5)
    with pytest.raises(DomainError):
        GraphParams(n=2, m=3, p=math.nan)
    # DomainError doubles as ValueError for callers that only know the builtin
    with pytest.raises(ValueError):
        GraphParams(n=2, m=-1, p=0.5)


def test_graph_params_from_c():
    gp = GraphParams.from_c(10, 30, 4.0)
    assert gp.p == pytest.approx(0.1)
    assert gp.c == pytest.approx(4.0)
    assert gp.to_dict() == {"n": 10, "m": 30, "p": pytest.approx(0.1), "c": pytest.approx(4.0)}


def test_walk_params_two_by_two():
    wp = walk_params(GraphParams(n=2, m=2, p=0.5))
    np.testing.assert_allclose(wp.alpha, [4 / 3, 2 / 3], rtol=1e-14)
    np.testing.assert_allclose(wp.beta, [4 / 3, 2 / 3], rtol=1e-14)


def test_walk_params_single_left_vertex():
    wp = walk_params(GraphParams(n=1, m=5, p=0.3))
    np.testing.assert_allclose(wp.alpha, [5.0], rtol=1e-14)
    assert wp.beta.size == 5
    assert wp.beta.sum() == pytest.approx(1.0, rel=1e-14)


@pytest.mark.parametrize("n, m, p", [(2, 2, 0.5), (7, 3, 0.01), (40, 60, 0.12), (100, 100, 0.9)])
def test_walk_params_telescope(n, m, p):
    wp = walk_params(GraphParams(n=n, m=m, p=p))
    assert wp.alpha.sum() == pytest.approx(m, rel=1e-12)
    assert wp.beta.sum() == pytest.approx(n, rel=1e-12)


@pytest.mark.parametrize("p", [0.0, 1.0])
def test_walk_params_rejects_degenerate_p(p):
    with pytest.raises(DegenerateParameterError):
        walk_params(GraphParams(n=3, m=3, p=p))


def test_extended_beta_continues_geometric_law():
    gp = GraphParams(n=4, m=3, p=0.2)
    extended = extended_beta(gp, 10)
    np.testing.assert_allclose(extended[:3], walk_params(gp).beta, rtol=1e-14)
    np.testing.assert_allclose(extended[1:] / extended[:-1], 0.8, rtol=1e-12)


def test_expectation_curves_endpoints():
    gp = GraphParams(n=12, m=9, p=0.2)
    curves = expectation_curves(gp)
    assert curves.mu[-1] == pytest.approx(gp.m, rel=1e-12)
    assert curves.eta[-1] == pytest.approx(gp.n, rel=1e-12)
    assert np.all(np.diff(curves.mu) > 0)
    np.testing.assert_allclose(curves.drift, curves.es - np.arange(1, gp.n + 1))


def test_prefactor_two_by_two():
    gp = GraphParams(n=2, m=2, p=0.5)
    assert prefactor(gp, 1) == pytest.approx(27 / 64, rel=1e-14)
    assert prefactor(gp, 2) == pytest.approx(81 / 256, rel=1e-14)


def test_prefactor_degenerate():
    assert prefactor(GraphParams(n=3, m=4, p=1.0), 2) == 1.0
    assert prefactor(GraphParams(n=3, m=4, p=0.0), 2) == 0.0


def test_endpoint_probabilities():
    a, b = endpoint_probabilities(GraphParams(n=2, m=2, p=0.5))
    assert a == pytest.approx(2.0 * math.exp(-2.0))
    assert b == pytest.approx(2.0 * math.exp(-2.0))


def test_log_binom():
    assert float(log_binom(5, 2)) == pytest.approx(math.log(10.0))
    assert float(log_binom(200, 100)) == pytest.approx(math.log(math.comb(200, 100)), rel=1e-12)
    assert log_binom(3, 4) == -np.inf
    assert log_binom(3, -1) == -np.inf


def test_closed_form_connectivity():
    assert closed_form_connectivity(GraphParams(n=1, m=1, p=1.0)) == 1.0
    assert closed_form_connectivity(GraphParams(n=1, m=1, p=0.0)) == 0.0
    with pytest.raises(DomainError):
        closed_form_connectivity(GraphParams(n=1, m=1, p=0.5))


def test_check_state_budget():
    check_state_budget(GraphParams(n=4, m=5, p=0.5), 20)
    with pytest.raises(CapacityError):
        check_state_budget(GraphParams(n=4, m=6, p=0.5), 20)


@pytest.mark.parametrize("lam", [0.1, 1.0, 10.0, 100.0])
def test_poisson_pmf_sums_to_one(lam):
    upper = int(lam + 20 * math.sqrt(lam) + 30)
    total = math.fsum(poisson_pmf(k, lam) for k in range(upper + 1))
    assert abs(total - 1.0) < 1e-12


def test_poisson_pmf_finite_at_ten_thousand():
    value = poisson_pmf(10**4, 1e4)
    assert math.isfinite(value)
    assert value == pytest.approx(1.0 / math.sqrt(2.0 * math.pi * 1e4), rel=1e-4)


@pytest.mark.parametrize("n, m, p", [(50, 50, 0.06), (20, 30, 0.1), (10, 5, 0.3)])
def test_es_increases_with_mu(n, m, p):
    curves = expectation_curves(GraphParams(n=n, m=m, p=p))
    assert np.all(np.diff(curves.mu) > 0)
    assert np.all(np.diff(curves.es) > 0)
