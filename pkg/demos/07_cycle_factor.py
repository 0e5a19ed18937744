"""
Cycle factors
=============

Cover every vertex of a host by disjoint cycles of one fixed length: chains
through the host supply most of each cycle and the routing template closes
them up.
"""

from collections import Counter

from treeroute.graph_core import complete_graph
from treeroute.pipeline import (
    PipelineConfig,
    cycle_factor,
    cycle_factor_traced,
    generate_random_regular,
    verify_cycle_factor,
)

g = generate_random_regular(1200, 40, seed=13)
cycles, trace = cycle_factor_traced(g, 150, PipelineConfig(seed=13))
print("route:", trace["route"], "plan:", trace["plan"])
print("cycle lengths:", Counter(len(c) for c in cycles))
print("verified:", verify_cycle_factor(g, cycles, 150))

# Small dense hosts use a direct search.
k30 = complete_graph(30)
small = cycle_factor(k30, 6)
print("K30 into 6-cycles:", small)
print("verified:", verify_cycle_factor(k30, small, 6))
