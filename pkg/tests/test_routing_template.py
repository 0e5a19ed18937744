import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from treeroute.graph_core import is_valid_path_factor, verify_constructible
from treeroute.routing_template import (
    TemplateError,
    build_template,
    route,
    template_construction_sequence,
)
from treeroute.sorting_network import PROVIDERS, ComparisonNetwork, figure1_network


def census(n_reg, depth, k):
    return n_reg * (depth * k * (k - 1) + (depth + 1) * k)


def check_route(t, phi):
    f = route(t, phi)
    wanted = [(t.A[j], t.B[phi[j]]) for j in range(t.n_reg)]
    ok, msg = is_valid_path_factor(t.graph, f, wanted)
    assert ok, msg
    assert {len(p) - 1 for p in f.paths} == {t.ell}
    assert f.target_set == frozenset(range(t.graph.n))
    return f


def test_two_register_template():
    t = build_template(2, 2)
    assert t.depth == 1 and t.graph.n == 12 and t.ell == 5
    assert len(t.gadgets) == 1
    assert not set(t.A) & set(t.B)


def contains(path, piece):
    s = ",".join(map(str, path))
    return ",".join(map(str, piece)) in s or ",".join(map(str, piece[::-1])) in s


def test_identity_uses_parallel_pair():
    t = build_template(2, 2)
    f = check_route(t, [0, 1])
    g = t.gadgets[0]
    assert any(contains(p, g.P2) for p in f.paths)
    assert any(contains(p, g.Q2) for p in f.paths)


def test_reversal_crosses():
    t = build_template(2, 2)
    f = check_route(t, [1, 0])
    assert [p[-1] for p in f.paths] == [t.B[1], t.B[0]]
    g = t.gadgets[0]
    assert any(contains(p, g.P1) for p in f.paths)
    assert any(contains(p, g.Q1) for p in f.paths)


def test_figure3_template_and_wiring():
    t = build_template(4, 2, provider=figure1_network())
    assert len(t.gadgets) == t.network.size == 5
    assert all(len(set(g.P1) | set(g.Q1)) == 4 for g in t.gadgets)
    assert t.graph.n == census(4, 4, 2)
    check_route(t, [3, 0, 1, 2])


def test_figure3_construction_sequence():
    t = build_template(4, 2, provider=figure1_network())
    seq = template_construction_sequence(t)
    assert verify_constructible(t.graph, set(t.A) | set(t.B), seq, 2, 8)[0]


def test_empty_network_is_connectors_only():
    t = build_template(3, 2, provider=ComparisonNetwork(3, ()), check_sorting=False)
    seq = template_construction_sequence(t)
    assert len(seq) == 3
    assert all(p[0] in t.A for p in seq)


def test_padding_reaches_requested_ell():
    t = build_template(2, 2, ell=9)
    assert t.ell == 9 and t.graph.n == 2 * 10
    for phi in ([0, 1], [1, 0]):
        check_route(t, phi)


def test_unreachable_ell_reports_neighbours():
    with pytest.raises(TemplateError, match=r"\[5, 7\]"):
        build_template(2, 2, ell=6)


def test_k_rounded_up():
    assert build_template(2, 4).k == 6


def test_non_sorting_network_rejected():
    with pytest.raises(TemplateError):
        build_template(3, 2, provider=ComparisonNetwork(3, (((0, 1),),)))


def test_non_bijective_phi_rejected():
    with pytest.raises(TemplateError):
        route(build_template(3, 2), [0, 0, 1])


def test_mapping_phi():
    t = build_template(3, 2)
    f = route(t, {t.A[0]: t.B[2], t.A[1]: t.B[0], t.A[2]: t.B[1]})
    assert [p[-1] for p in f.paths] == [t.B[2], t.B[0], t.B[1]]


@pytest.mark.parametrize("n_reg", [2, 3, 4, 5])
def test_exhaustive_routing(n_reg):
    t = build_template(n_reg, 2)
    for phi in itertools.permutations(range(n_reg)):
        check_route(t, list(phi))


@pytest.mark.parametrize("provider", sorted(PROVIDERS))
@pytest.mark.parametrize("k", [2, 6])
@pytest.mark.parametrize("n_reg", range(2, 9))
def test_census_and_constructibility(provider, k, n_reg):
    t = build_template(n_reg, k, provider=PROVIDERS[provider])
    assert t.unpadded_size == t.graph.n == census(n_reg, t.depth, k)
    assert t.graph.n // n_reg - 1 == t.ell
    assert t.graph.max_degree <= 4
    seq = template_construction_sequence(t)
    ok, msg = verify_constructible(t.graph, set(t.A) | set(t.B), seq, k, 4 * k)
    assert ok, msg


@given(st.integers(2, 10), st.sampled_from([2, 6]), st.data())
def test_random_bijections_route(n_reg, k, data):
    t = build_template(n_reg, k)
    phi = data.draw(st.permutations(range(n_reg)))
    check_route(t, list(phi))
