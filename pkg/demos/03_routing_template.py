"""
Routing through a template
==========================

Replace each comparator of a sorting network by a gadget. Any bijection from
the sources to the sinks then becomes a family of equal-length disjoint
paths covering the whole template.
"""

import itertools

from treeroute.graph_core import is_valid_path_factor
from treeroute.routing_template import build_template, route, template_construction_sequence
from treeroute.serialize import to_dot
from treeroute.sorting_network import figure1_network

t = build_template(4, 2, provider=figure1_network())
print(f"{t.graph.n} vertices, {len(t.gadgets)} gadgets, path length {t.ell}")
print("sources:", t.A, "sinks:", t.B)

# Send source 1 to sink 4, 2 to 1, 3 to 2 and 4 to 3.
phi = [3, 0, 1, 2]
factor = route(t, phi)
for j, p in enumerate(factor.paths):
    print(f"  A{j + 1} -> B{phi[j] + 1}: {len(p) - 1} edges")

# Every bijection works.
ok = all(
    is_valid_path_factor(t.graph, route(t, list(p)), [(t.A[j], t.B[p[j]]) for j in range(4)])[0]
    for p in itertools.permutations(range(4))
)
print("all 24 bijections routed:", ok)

# The template is grown from its terminals by short paths.
seq = template_construction_sequence(t)
print(f"{len(seq)} construction paths, lengths {min(len(p) for p in seq) - 1}..{max(len(p) for p in seq) - 1}")

# Padding stretches every line equally.
long = build_template(4, 2, ell=40, provider=figure1_network())
print("padded:", long.graph.n, "vertices, path length", long.ell)

with open("template.dot", "w") as fh:
    fh.write(to_dot(t.graph, factor.paths, name="template"))
print("wrote template.dot")
