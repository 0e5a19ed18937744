import sys

import networkx as nx
import pytest
from hypothesis import HealthCheck, settings

from treeroute.graph_core import Graph, graph_from_edges

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def nx_random_regular(n: int, d: int, seed: int) -> Graph:
    """Independent host supply for oracle comparisons."""
    h = nx.random_regular_graph(d, n, seed=seed)
    return graph_from_edges(n, h.edges())


@pytest.fixture
def c4() -> Graph:
    return graph_from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.report_lines():
        terminalreporter.write_line(line)
