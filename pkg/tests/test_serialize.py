import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from treeroute import serialize as io
from treeroute.graph_core import graph_from_edges, path_graph
from treeroute.sorting_network import build_odd_even_mergesort


def test_dumps_is_canonical():
    a = io.dumps({"b": 1, "a": [1, 2]})
    b = io.dumps({"a": [1, 2], "b": 1})
    assert a == b and a.endswith("\n")
    assert json.loads(a)["schema"] == "v1"


def test_loads_reports_position():
    with pytest.raises(io.FormatError) as err:
        io.loads('{"n": 3,\n "edges": [1, }')
    assert err.value.line == 2 and err.value.column is not None


def test_wrong_schema_rejected():
    with pytest.raises(io.FormatError, match="schema"):
        io.loads('{"schema": "v9"}')


def test_non_graph_document():
    with pytest.raises(io.FormatError):
        io.graph_from_dict({"edges": []})


def test_write_atomic_leaves_no_temp(tmp_path):
    target = tmp_path / "out.json"
    io.write_atomic(target, "first")
    io.write_atomic(target, "second")
    assert target.read_text() == "second"
    assert [p.name for p in tmp_path.iterdir()] == ["out.json"]


def test_network_round_trip():
    net = build_odd_even_mergesort(6)
    assert io.network_from_dict(io.loads(io.dumps(io.network_to_dict(net)))) == net


def test_dot_colours_paths():
    text = io.to_dot(path_graph(3), [(0, 1)], {0: "a"})
    assert text.startswith("graph G {")
    assert '0 [label="a"]' in text
    assert "0 -- 1 [color=red];" in text and "1 -- 2;" in text


def test_parse_int_list():
    assert io.parse_int_list("4, 1,2,3") == [4, 1, 2, 3]
    with pytest.raises(io.FormatError):
        io.parse_int_list("1,x")


@st.composite
def graphs(draw):
    n = draw(st.integers(1, 15))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), max_size=30)) if pairs else []
    return graph_from_edges(n, edges)


@given(graphs())
def test_graph_round_trip(g):
    text = io.dumps(io.graph_to_dict(g))
    back = io.graph_from_dict(io.loads(text))
    assert back == g
    assert io.dumps(io.graph_to_dict(back)) == text
