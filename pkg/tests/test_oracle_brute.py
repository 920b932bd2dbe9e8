from fractions import Fraction

import pytest

from model_core import CapacityError, GraphParams
from oracle_brute import BipartiteGraph, brute_connectivity, edge_count_profile, is_connected
from settings import get_settings


@pytest.mark.parametrize(
    "n, m, rows, expected",
    [
        (1, 1, (0b1,), True),
        (2, 2, (0b01, 0b10), False),
        (2, 2, (0b11, 0b10), True),
        (1, 2, (0b01,), False),
        (3, 1, (0b1, 0b1, 0b1), True),
    ],
)
def test_is_connected(n, m, rows, expected):
    assert is_connected(BipartiteGraph(n=n, m=m, rows=rows)) is expected


def test_from_matrix_matches_rows():
    g = BipartiteGraph.from_matrix([[1, 1, 0], [0, 0, 1]])
    assert g.rows == (0b011, 0b100)
    assert g.edge_count == 3
    assert g.left_neighbors(2) == 0b10
    assert not is_connected(g)


def test_bipartite_graph_rejects_wide_rows():
    with pytest.raises(ValueError):
        BipartiteGraph(n=1, m=2, rows=(0b100,))
    with pytest.raises(ValueError):
        BipartiteGraph(n=2, m=2, rows=(0b1,))


def test_profile_two_by_two():
    counts = edge_count_profile(2, 2).counts
    assert counts == (0, 0, 0, 4, 1)


def test_profile_one_by_two():
    assert edge_count_profile(1, 2).counts == (0, 0, 1)


def test_profile_three_by_two():
    assert edge_count_profile(3, 2).counts[4] == 12


@pytest.mark.parametrize(
    "n, m",
    [(n, m) for n in range(1, 13) for m in range(1, 13) if n * m <= 12],
)
def test_spanning_tree_coefficient(n, m):
    assert edge_count_profile(n, m).spanning_tree_count == n ** (m - 1) * m ** (n - 1)


def test_profile_total_matches_complete_graph():
    profile = edge_count_profile(3, 3)
    assert profile.counts[-1] == 1
    assert profile.to_dict()["counts"] == list(profile.counts)


@pytest.mark.parametrize(
    "n, m, p, expected",
    [
        (1, 1, 0.5, 0.5),
        (2, 2, 0.5, 0.3125),
        (2, 1, 0.3, 0.09),
        (3, 3, 0.0, 0.0),
        (3, 3, 1.0, 1.0),
    ],
)
def test_brute_connectivity_values(n, m, p, expected):
    assert brute_connectivity(GraphParams(n=n, m=m, p=p)) == pytest.approx(expected, abs=1e-15)


def test_brute_connectivity_exact_rational():
    value = brute_connectivity(GraphParams(n=2, m=2, p=Fraction(1, 2)))
    assert value == Fraction(5, 16)
    value = brute_connectivity(GraphParams(n=2, m=3, p=Fraction(1, 3)))
    assert isinstance(value, Fraction)
    assert float(value) == pytest.approx(brute_connectivity(GraphParams(n=2, m=3, p=1 / 3)), rel=1e-14)


def test_capacity_bound():
    with pytest.raises(CapacityError):
        edge_count_profile(5, 5)


def test_capacity_bound_from_environment(monkeypatch):
    monkeypatch.setenv("BRUTE_MAX_EDGES", "4")
    get_settings.cache_clear()
    with pytest.raises(CapacityError):
        brute_connectivity(GraphParams(n=2, m=3, p=0.5))
    assert brute_connectivity(GraphParams(n=2, m=2, p=0.5)) == pytest.approx(0.3125)


@pytest.mark.parametrize("n, m", [(1, 1), (2, 2), (3, 2), (2, 5), (4, 4)])
def test_brute_connectivity_nondecreasing_in_p(n, m):
    grid = [t / 10 for t in range(11)]
    values = [brute_connectivity(GraphParams(n=n, m=m, p=p)) for p in grid]
    assert values[0] == 0.0
    assert values[-1] == 1.0
    for lower, upper in zip(values, values[1:]):
        assert lower <= upper
