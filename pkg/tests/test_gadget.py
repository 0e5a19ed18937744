from collections import Counter
from dataclasses import replace

import pytest

from treeroute.gadget import (
    GadgetError,
    build_gadget,
    cycle_edges,
    gadget_construction_sequence,
    verify_gadget,
)
from treeroute.graph_core import Graph, graph_from_edges, verify_constructible

VALID_K = [2, 6, 10, 14, 18, 22, 26, 30]


def u(i):
    return i - 1


def v(k, i):
    return k + i - 1


def test_k2_is_c4():
    g = build_gadget(2)
    assert g.graph.n == 4 and g.graph.is_regular() and g.graph.num_edges == 4
    assert all(len(p) == 2 for p in (g.P1, g.P2, g.Q1, g.Q2))


def test_k6_cycle_matches_listed_order():
    k = 6
    g = build_gadget(k)
    listed = [u(1), u(2), v(k, 4), v(k, 3), u(5), u(6), v(k, 5), v(k, 6), u(4), u(3), v(k, 1), v(k, 2)]
    expected = {frozenset(e) for e in zip(listed, listed[1:] + listed[:1])}
    assert {frozenset(e) for e in cycle_edges(k)} == expected
    assert g.graph.n == 60 and g.graph.max_degree == 3
    assert len(g.P1) == 30


@pytest.mark.parametrize("k", [3, 4, 5, 7, 8, 1, 0])
def test_bad_k_rejected(k):
    with pytest.raises(GadgetError):
        build_gadget(k)


def test_k6_verifies():
    assert verify_gadget(build_gadget(6)).ok


def test_deleted_p1_edge_breaks_path_validity():
    g = build_gadget(6)
    a, b = g.P1[0], g.P1[1]
    edges = [e for e in g.graph.edges() if set(e) != {a, b}]
    broken = replace(g, graph=graph_from_edges(g.graph.n, edges))
    assert verify_gadget(broken).first_failure == "paths valid"


def test_swapped_outputs_break_endpoint_pattern():
    g = build_gadget(6)
    swapped = replace(g, v_out1=g.v_out2, v_out2=g.v_out1)
    assert verify_gadget(swapped).first_failure == "(iv) endpoints"


def test_k2_sequence_is_two_halves():
    g = build_gadget(2)
    seq = gadget_construction_sequence(g, g.v_in1)
    assert [len(p) - 1 for p in seq] == [2, 2]


@pytest.mark.parametrize("which", ["v_in1", "v_in2"])
def test_k6_sequence_lengths(which):
    g = build_gadget(6)
    z = getattr(g, which)
    seq = gadget_construction_sequence(g, z)
    assert [len(p) - 1 for p in seq] == [6, 6, 13, 13, 13, 13]
    assert seq[0][0] == z
    assert verify_constructible(g.graph, {z}, seq, 6, 13)[0]


def test_sequence_needs_input_terminal():
    g = build_gadget(6)
    with pytest.raises(GadgetError):
        gadget_construction_sequence(g, g.v_out1)


@pytest.mark.parametrize("k", VALID_K[1:])
def test_degree_histogram(k):
    g = build_gadget(k)
    hist = Counter(g.graph.degree(x) for x in range(g.graph.n))
    assert set(hist) == {2, 3}
    # every attached path adds two degree-3 endpoints on the base cycle
    assert hist[3] == 2 * (k - 2)
    assert g.graph.num_edges == g.graph.n + (k - 2)


@pytest.mark.parametrize("k", VALID_K)
def test_pair_partitions(k):
    g = build_gadget(k)
    everything = set(range(g.graph.n))
    for p, q in ((g.P1, g.Q1), (g.P2, g.Q2)):
        assert not set(p) & set(q)
        assert set(p) | set(q) == everything


@pytest.mark.parametrize("k", VALID_K[1:])
def test_each_attached_path_used_once_per_pair(k):
    g = build_gadget(k)
    for p, q in ((g.P1, g.Q1), (g.P2, g.Q2)):
        used = {frozenset(e) for path in (p, q) for e in zip(path, path[1:])}
        for attached in g.attachments:
            inner = {frozenset(e) for e in zip(attached, attached[1:])}
            assert inner <= used


@pytest.mark.parametrize("k", VALID_K)
@pytest.mark.parametrize("which", ["v_in1", "v_in2"])
def test_constructible_both_terminals(k, which):
    g = build_gadget(k)
    z = getattr(g, which)
    assert verify_constructible(g.graph, {z}, gadget_construction_sequence(g, z), k, 2 * k + 1)[0]
