"""
The comparator gadget
=====================

A gadget stands in for one comparator. It has two inputs and two outputs,
and it splits into two paths in two ways: one crossing, one parallel.
"""

from collections import Counter

from treeroute.gadget import build_gadget, gadget_construction_sequence, verify_gadget
from treeroute.graph_core import verify_constructible

# k = 2 is just a 4-cycle.
g2 = build_gadget(2)
print("k=2 edges:", g2.graph.edges())

# k = 6 has 60 vertices.
g = build_gadget(6)
print(f"k=6: {g.graph.n} vertices, {g.graph.num_edges} edges")
print("terminals:", g.terminals)
print("degree histogram:", dict(sorted(Counter(g.graph.degree(v) for v in range(g.graph.n)).items())))

# The crossing pair joins in1 -> out2 and in2 -> out1.
print("P1:", g.P1[0], "->", g.P1[-1], "| Q1:", g.Q1[0], "->", g.Q1[-1])
print("P2:", g.P2[0], "->", g.P2[-1], "| Q2:", g.Q2[0], "->", g.Q2[-1])

report = verify_gadget(g)
for name, msg in report.messages.items():
    print(f"  {name:20s} {report.checks[name]!s:5s} {msg}")

# The gadget can be grown path by path from either input.
seq = gadget_construction_sequence(g, g.v_in1)
print("construction lengths:", [len(p) - 1 for p in seq])
print("constructible:", verify_constructible(g.graph, {g.v_in1}, seq, 6, 13))

# The smallest gadget is too sparse to reach degree 3.
print("k=2 report:", verify_gadget(g2).first_failure)
