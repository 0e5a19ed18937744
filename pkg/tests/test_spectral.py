import math

import networkx as nx
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from treeroute.graph_core import (
    complete_graph,
    cycle_graph,
    disjoint_union,
    graph_from_edges,
    petersen_graph,
)
from treeroute.spectral import (
    ExpansionPreconditionError,
    JoinednessError,
    SpectralReport,
    check_lower_bound,
    expansion_audit,
    joined_bound,
    mixing_audit,
    second_eigenvalue,
)

from conftest import nx_random_regular


def nx_lambda(g) -> float:
    """Oracle: networkx's own adjacency spectrum."""
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    vals = np.sort(np.real(nx.adjacency_spectrum(h)))
    return max(abs(vals[-2]), abs(vals[0]))


@pytest.mark.parametrize(
    "g, expected", [(complete_graph(4), 1.0), (cycle_graph(4), 2.0), (petersen_graph(), 2.0)]
)
def test_small_spectra(g, expected):
    rep = second_eigenvalue(g)
    assert rep.lambda_hat == pytest.approx(expected, abs=1e-6)
    assert rep.lambda_hat == pytest.approx(nx_lambda(g), abs=1e-6)


def test_c4_flagged_bipartite():
    assert second_eigenvalue(cycle_graph(4)).degenerate


def test_irregular_graph_flagged():
    g = graph_from_edges(4, [(0, 1), (1, 2), (1, 3)])
    rep = second_eigenvalue(g)
    assert not rep.regular
    assert rep.d == pytest.approx(1.5)


def test_iterative_matches_dense():
    g = nx_random_regular(2100, 6, seed=4)
    rep = second_eigenvalue(g)
    assert rep.method == "iterative"
    dense = np.linalg.eigvalsh(g.adjacency_matrix(sparse=False))
    assert rep.lambda_hat == pytest.approx(max(abs(dense[-2]), abs(dense[0])), abs=1e-5)


# Lemma 3.2 lower bound


def test_petersen_lower_bound():
    rep = second_eigenvalue(petersen_graph())
    assert math.sqrt(3 * 7 / 9) == pytest.approx(math.sqrt(21) / 3)
    assert check_lower_bound(rep)


def test_k4_lower_bound_equality():
    assert check_lower_bound(second_eigenvalue(complete_graph(4)))


def test_fabricated_report_fails_bound():
    rep = SpectralReport(10, 3, 0.5, "dense", 1e-6)
    assert not check_lower_bound(rep)


# mixing


def test_k4_mixing_clean():
    assert mixing_audit(complete_graph(4), 1.0, samples=500, seed=0).ok


def test_mixing_random_cubic():
    g = nx_random_regular(100, 3, seed=1)
    lam = nx_lambda(g)
    assert mixing_audit(g, lam, samples=1000, seed=1).ok
    forced = mixing_audit(g, 0.0, samples=1000, seed=1)
    assert not forced.ok and forced.violations
    assert forced.violation_count >= len(forced.violations)


# joinedness


def test_petersen_vacuously_joined():
    assert joined_bound(petersen_graph(), second_eigenvalue(petersen_graph())) == 7


def test_random_20_regular_joined():
    g = nx_random_regular(500, 20, seed=3)
    rep = second_eigenvalue(g)
    m = joined_bound(g, rep, samples=10_000, seed=3)
    assert m == math.ceil(rep.lambda_hat * 25)


def test_disjoint_triangles_not_joined():
    g = disjoint_union(cycle_graph(3), cycle_graph(3))
    rep = SpectralReport(6, 2, 0.5, "dense", 1e-6)
    with pytest.raises(JoinednessError):
        joined_bound(g, rep, samples=50)


# expansion


def test_complete_graph_expands():
    g = complete_graph(50)
    assert expansion_audit(g, range(50), range(50), 2, 2, 50, 1)


def test_random_host_expands_into_half():
    g = nx_random_regular(1000, 30, seed=8)
    rng = np.random.default_rng(8)
    y = set(rng.choice(1000, size=500, replace=False).tolist())
    x = [v for v in range(1000) if g.degree_into(v, y) >= 12]
    assert len(x) > 600
    assert expansion_audit(g, x, y, 12, 10, 500, 5, seed=8)


def test_star_does_not_expand():
    star = graph_from_edges(10, [(0, i) for i in range(1, 10)])
    audit = expansion_audit(star, range(1, 10), range(10), 1, 2, 200, 3, seed=0)
    assert not audit and len(audit.witness) >= 1


def test_expansion_precondition_names_vertex():
    star = graph_from_edges(10, [(0, i) for i in range(1, 10)])
    with pytest.raises(ExpansionPreconditionError) as err:
        expansion_audit(star, range(10), {0}, 1, 2, 10, 3)
    assert err.value.vertex == 0


# properties


@given(st.integers(0, 2**31), st.sampled_from([(12, 3), (16, 4), (20, 5), (30, 6)]))
def test_relabel_invariance(seed, nd):
    n, d = nd
    g = nx_random_regular(n, d, seed)
    perm = np.random.default_rng(seed).permutation(n).tolist()
    a = second_eigenvalue(g).lambda_hat
    b = second_eigenvalue(g.relabel(perm)).lambda_hat
    assert a == pytest.approx(b, abs=1e-9)


@given(st.integers(0, 2**31), st.sampled_from([(12, 3), (20, 4), (30, 6)]))
def test_lambda_below_degree(seed, nd):
    n, d = nd
    g = nx_random_regular(n, d, seed)
    rep = second_eigenvalue(g)
    assert rep.lambda_hat <= d + 1e-9
    if rep.lambda_hat > d - 1e-6:
        assert rep.degenerate


@given(st.integers(0, 2**31), st.integers(0, 2**31))
def test_exact_lambda_never_violates_mixing(gseed, sseed):
    g = nx_random_regular(40, 5, gseed)
    assert mixing_audit(g, second_eigenvalue(g).lambda_hat, samples=200, seed=sseed).ok
