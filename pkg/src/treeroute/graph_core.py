"""Undirected simple graphs on dense integer vertex ids, plus paths and subgraphs.

Vertices are ``0..n-1``.  A :class:`Graph` is immutable once built; a
:class:`Subgraph` is the mutable bookkeeping object used while embedding.
Paths are plain tuples of vertex ids.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

Path = tuple[int, ...]


class GraphError(ValueError):
    """Raised for malformed graphs, paths and subgraph updates."""


class Graph:
    """Immutable undirected simple graph with sorted adjacency lists."""

    __slots__ = ("n", "adj", "_nbr_sets", "_m")

    def __init__(self, n: int, adj: Sequence[Sequence[int]]):
        self.n = n
        self.adj: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(a)) for a in adj)
        self._nbr_sets = tuple(frozenset(a) for a in self.adj)
        self._m = sum(len(a) for a in self.adj) // 2

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self._m})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __len__(self) -> int:
        return self.n

    @property
    def num_edges(self) -> int:
        return self._m

    def edges(self) -> list[tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v``, in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def neighbor_set(self, v: int) -> frozenset[int]:
        return self._nbr_sets[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._nbr_sets[u]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def degrees(self) -> np.ndarray:
        return np.fromiter((len(a) for a in self.adj), dtype=np.int64, count=self.n)

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    @property
    def min_degree(self) -> int:
        return min((len(a) for a in self.adj), default=0)

    def is_regular(self) -> bool:
        return self.n == 0 or self.max_degree == self.min_degree

    def degree_into(self, v: int, vertex_set: set[int] | frozenset[int]) -> int:
        return sum(1 for w in self.adj[v] if w in vertex_set)

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for w in self.adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def adjacency_matrix(self, sparse: bool = True):
        rows = [u for u in range(self.n) for _ in self.adj[u]]
        cols = [w for u in range(self.n) for w in self.adj[u]]
        a = sp.csr_matrix(
            (np.ones(len(rows), dtype=np.float64), (rows, cols)), shape=(self.n, self.n)
        )
        return a if sparse else a.toarray()

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph with vertex ``v`` renamed to ``perm[v]``."""
        return graph_from_edges(self.n, [(perm[u], perm[v]) for u, v in self.edges()])

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph on ``vertices``; returns it with the local-to-global id list."""
        order = sorted(set(vertices))
        index = {v: i for i, v in enumerate(order)}
        edges = [
            (index[u], index[w])
            for u in order
            for w in self.adj[u]
            if w in index and u < w
        ]
        return graph_from_edges(len(order), edges), order


def graph_from_edges(n: int, edge_list: Iterable[Sequence[int]]) -> Graph:
    """Build a simple graph, deduplicating parallel pairs.

    >>> graph_from_edges(4, [(0, 1), (1, 0)]).num_edges
    1
    """
    if n < 0:
        raise GraphError(f"vertex count must be non-negative, got {n}")
    adj: list[set[int]] = [set() for _ in range(n)]
    for pair in edge_list:
        u, v = int(pair[0]), int(pair[1])
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u}, {v}) has an endpoint outside [0, {n})")
        if u == v:
            raise GraphError(f"edge ({u}, {v}) is a loop")
        adj[u].add(v)
        adj[v].add(u)
    return Graph(n, adj)


def complete_graph(n: int) -> Graph:
    return graph_from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def cycle_graph(n: int) -> Graph:
    return graph_from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return graph_from_edges(n, [(i, i + 1) for i in range(n - 1)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return graph_from_edges(10, outer + spokes + inner)


def disjoint_union(*graphs: Graph) -> Graph:
    edges = []
    offset = 0
    for g in graphs:
        edges.extend((u + offset, v + offset) for u, v in g.edges())
        offset += g.n
    return graph_from_edges(offset, edges)


def external_neighborhood(g: Graph, u_set: Iterable[int]) -> set[int]:
    """``N(U)``: vertices adjacent to ``U`` that are not in ``U``."""
    u_set = set(u_set)
    out: set[int] = set()
    for u in u_set:
        out.update(g.adj[u])
    return out - u_set


def neighborhood(g: Graph, u_set: Iterable[int]) -> set[int]:
    """``Γ(U)``: union of the neighbourhoods, which may meet ``U`` itself."""
    out: set[int] = set()
    for u in u_set:
        out.update(g.adj[u])
    return out


# ---------------------------------------------------------------------------
# paths


def path_length(p: Sequence[int]) -> int:
    return len(p) - 1


def path_edges(p: Sequence[int]) -> list[tuple[int, int]]:
    return [(min(a, b), max(a, b)) for a, b in zip(p, p[1:])]


def path_problem(g: Graph | None, p: Sequence[int]) -> str | None:
    """Describe why ``p`` is not a path (of ``g`` when given), or return None."""
    if len(p) == 0:
        return "empty path"
    if len(set(p)) != len(p):
        return "repeated vertex"
    if g is not None:
        for a, b in zip(p, p[1:]):
            if not (0 <= a < g.n and 0 <= b < g.n) or not g.has_edge(a, b):
                return f"non-edge ({a}, {b})"
    return None


def is_path(g: Graph | None, p: Sequence[int]) -> bool:
    return path_problem(g, p) is None


# ---------------------------------------------------------------------------
# factors and matchings


@dataclass
class PathFactor:
    """Vertex-disjoint paths expected to cover ``target_set``."""

    paths: list[Path]
    target_set: frozenset[int]

    def endpoint_pairs(self) -> list[tuple[int, int]]:
        return [(p[0], p[-1]) for p in self.paths]


@dataclass
class Matching:
    pairs: list[tuple[int, int]]

    def __len__(self) -> int:
        return len(self.pairs)

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)

    def is_valid(self, g: Graph) -> bool:
        ends = [v for pair in self.pairs for v in pair]
        return len(ends) == len(set(ends)) and all(g.has_edge(a, b) for a, b in self.pairs)


def is_valid_path_factor(
    g: Graph,
    f: PathFactor,
    endpoint_constraint: Sequence[tuple[int, int]] | None = None,
) -> tuple[bool, str]:
    """Check disjointness, coverage, path validity and optional endpoint pairs.

    Returns ``(ok, diagnostic)``; the diagnostic names the first violation.
    """
    seen: set[int] = set()
    for i, p in enumerate(f.paths):
        problem = path_problem(g, p)
        if problem is not None:
            return False, f"path {i}: {problem}"
        overlap = seen.intersection(p)
        if overlap:
            return False, f"disjointness: path {i} reuses vertex {min(overlap)}"
        seen.update(p)
    if seen != set(f.target_set):
        missing = set(f.target_set) - seen
        if missing:
            return False, f"coverage: vertex {min(missing)} not covered"
        return False, f"coverage: vertex {min(seen - set(f.target_set))} outside target set"
    if endpoint_constraint is not None:
        wanted = {frozenset(pair) for pair in endpoint_constraint}
        got = [frozenset((p[0], p[-1])) for p in f.paths]
        if len(wanted) != len(endpoint_constraint) or len(got) != len(wanted):
            return False, "endpoints: constraint count differs from path count"
        for i, ends in enumerate(got):
            if ends not in wanted:
                return False, f"endpoints: path {i} joins {sorted(ends)}"
    return True, "ok"


# ---------------------------------------------------------------------------
# subgraphs


class Subgraph:
    """Mutable subgraph ``S`` of an ambient graph.

    Stored as an adjacency dict so that ``d_S(v)`` and leaf removal are O(1).
    """

    __slots__ = ("adj",)

    def __init__(self, adj: dict[int, set[int]] | None = None):
        self.adj: dict[int, set[int]] = adj if adj is not None else {}

    @classmethod
    def edgeless(cls, vertices: Iterable[int]) -> "Subgraph":
        """``I(X)``."""
        return cls({v: set() for v in vertices})

    def copy(self) -> "Subgraph":
        return Subgraph({v: set(ns) for v, ns in self.adj.items()})

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Subgraph) and self.adj == other.adj

    def __repr__(self) -> str:
        return f"Subgraph(|V|={len(self.adj)}, |E|={len(self.edges)})"

    def __len__(self) -> int:
        return len(self.adj)

    def __contains__(self, v: int) -> bool:
        return v in self.adj

    @property
    def vertices(self):
        return self.adj.keys()

    @property
    def edges(self) -> set[tuple[int, int]]:
        return {(u, w) for u, ns in self.adj.items() for w in ns if u < w}

    def degree(self, v: int) -> int:
        ns = self.adj.get(v)
        return 0 if ns is None else len(ns)

    @property
    def max_degree(self) -> int:
        return max((len(ns) for ns in self.adj.values()), default=0)

    def add_vertex(self, v: int) -> None:
        self.adj.setdefault(v, set())

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise GraphError(f"loop at {u}")
        if v in self.adj.get(u, ()):
            raise GraphError(f"edge ({u}, {v}) already in subgraph")
        self.adj.setdefault(u, set()).add(v)
        self.adj.setdefault(v, set()).add(u)

    def add_path(self, p: Sequence[int], g: Graph | None = None) -> "Subgraph":
        """``S + P`` in place; internal vertices of ``p`` must be new to ``S``."""
        problem = path_problem(g, p)
        if problem is not None:
            raise GraphError(f"invalid path: {problem}")
        for v in p[1:-1]:
            if v in self.adj:
                raise GraphError(f"internal vertex {v} already in subgraph")
        for a, b in zip(p, p[1:]):
            if b in self.adj.get(a, ()):
                raise GraphError(f"edge ({a}, {b}) already in subgraph")
        for a, b in zip(p, p[1:]):
            self.add_edge(a, b)
        self.add_vertex(p[0])
        return self

    def remove_leaf(self, v: int) -> int:
        """Drop a vertex of ``S``-degree at most 1; return its former neighbour or -1."""
        ns = self.adj.get(v)
        if ns is None:
            raise GraphError(f"vertex {v} not in subgraph")
        if len(ns) > 1:
            raise GraphError(f"vertex {v} has degree {len(ns)} in subgraph, not a leaf")
        parent = -1
        if ns:
            parent = next(iter(ns))
            self.adj[parent].discard(v)
        del self.adj[v]
        return parent

    def remove_path_interior(self, p: Sequence[int]) -> "Subgraph":
        """Undo :meth:`add_path` for a path whose internal vertices were new."""
        for a, b in zip(p, p[1:]):
            self.adj[a].discard(b)
            self.adj[b].discard(a)
        for v in p[1:-1]:
            del self.adj[v]
        return self


def verify_constructible(
    g: Graph,
    a_set: Iterable[int],
    seq: Sequence[Sequence[int]],
    len_lo: int | None = None,
    len_hi: int | None = None,
) -> tuple[bool, str]:
    """Check that ``seq`` witnesses ``g`` being ``A``-path-constructible.

    Clauses: (i) the paths are edge-disjoint and their edges are exactly
    ``E(g)``; (ii) internal vertices of each path avoid ``A`` and all earlier
    paths; (iii) some endpoint of each path lies in ``A`` or an earlier path.
    The optional window bounds every path length.
    """
    placed = set(a_set)
    used: set[tuple[int, int]] = set()
    for i, p in enumerate(seq):
        problem = path_problem(g, p)
        if problem is not None:
            return False, f"path {i}: {problem}"
        length = len(p) - 1
        if len_lo is not None and length < len_lo or len_hi is not None and length > len_hi:
            return False, f"length window: path {i} has length {length}"
        for e in path_edges(p):
            if e in used:
                return False, f"clause (i): path {i} reuses edge {e}"
            used.add(e)
        for v in p[1:-1]:
            if v in placed:
                return False, f"clause (ii): path {i} passes through placed vertex {v}"
        if p[0] not in placed and p[-1] not in placed:
            return False, f"clause (iii): path {i} has no placed endpoint"
        placed.update(p)
    if len(used) != g.num_edges:
        missing = next(e for e in g.edges() if e not in used)
        return False, f"clause (i): edge {missing} not covered"
    return True, "ok"
