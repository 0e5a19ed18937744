"""
Extendable subgraphs
====================

Grow a subgraph leaf by leaf, roll it back and connect vertices by paths of
an exact length, checking the expansion condition after each move.
"""

from treeroute.embedder import (
    ExtendableState,
    connect,
    embed_tree,
    extend_leaf,
    extract_bare_paths,
    hall_matching,
    is_extendable,
    rollback,
)
from treeroute.graph_core import complete_graph, graph_from_edges
from treeroute.pipeline import generate_random_regular, generate_tree

# On a tiny host every state can be checked exhaustively.
host = complete_graph(12)
st = ExtendableState.from_vertices(host, [0, 1], 4, 1)
print("start extendable:", is_extendable(st))

extend_leaf(st, 0, "a")
extend_leaf(st, st.embedding["a"], "b")
print("after two leaves:", sorted(st.s.edges), is_extendable(st)[0])

rollback(st, st.embedding["b"])
print("after rollback:", sorted(st.s.edges))

_, p = connect(st, 0, 1, 4, lemma_bounds=False)
print("0 to 1 in exactly 4 steps:", p, is_extendable(st)[0])

# On a larger host the audit samples sets instead.
g = generate_random_regular(400, 12, seed=3)
st = ExtendableState.from_vertices(g, [0], 6, 2, audit="sampled", seed=3)
t = generate_tree("random_bounded", 40, 3, seed=3)
embed_tree(st, t, 0, 0)
images = [st.embedding[v] for v in range(t.n)]
print("tree edges kept:", all(g.has_edge(images[a], images[b]) for a, b in t.edges()))

# Perfect matchings come with a certificate when they fail.
bip = graph_from_edges(6, [(0, 3), (1, 3), (2, 4), (2, 5)])
print("matching or violator:", hall_matching(bip, [0, 1, 2], [3, 4, 5]))

# Long bare paths are what the routing step needs from the tree.
spider = generate_tree("spider", 31, 3)
print("bare paths of length 3 in a spider:", len(extract_bare_paths(spider, 3)))
