"""Extendability engine: checking, leaf extension, rollback, connection, tree embedding.

A subgraph ``S`` of the host ``G`` with ``Δ(S) <= D`` is ``(D, m)``-extendable
when every ``U`` with ``1 <= |U| <= 2m`` satisfies

    |Γ(U) \\ V(S)| >= (D - 1)|U| - Σ_{u ∈ U ∩ V(S)} (d_S(u) - 1),

where ``Γ(U)`` is the union of the neighbourhoods of ``U`` (it may meet ``U``).
Audits come in three tiers: ``exact`` enumerates every admissible ``U``
(tiny hosts only), ``sampled`` tests random ``U`` and can only refute, and
``none`` trusts the calling lemma and checks nothing.

Vertices that must not be used by later extensions (reserved sets, pools)
are simply members of ``S`` with no edges, exactly as ``I(X)`` is used in
the proofs.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Hashable, Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .graph_core import Graph, Matching, Path, Subgraph, is_path

EXACT_MAX_N = 18
EXACT_MAX_M = 3
AUDIT_TIERS = ("exact", "sampled", "none")


class PreconditionError(ValueError):
    pass


class OversizedInstance(PreconditionError):
    pass


class NoExtension(RuntimeError):
    def __init__(self, message: str, anchor: int | None = None, audit_log=None, partial=None):
        super().__init__(message)
        self.anchor = anchor
        self.audit_log = list(audit_log or [])
        self.partial = dict(partial or {})


class ConnectFailure(RuntimeError):
    def __init__(
        self, message: str, frontier_sizes: tuple[int, int] = (0, 0), exhaustive: bool = False
    ):
        super().__init__(message)
        self.frontier_sizes = frontier_sizes
        # True when the fallback search finished without hitting its budget
        self.exhaustive = exhaustive


@dataclass
class ExtendableState:
    """Host graph, the current subgraph ``S`` and a partial embedding into it."""

    host: Graph
    s: Subgraph
    d_cap: int
    m: int
    embedding: dict = field(default_factory=dict)
    audit: str = "exact"
    sample_budget: int = 200
    seed: int = 0
    rng: np.random.Generator = field(init=False, repr=False)
    inverse: dict = field(init=False, repr=False)

    def __post_init__(self):
        if self.d_cap < 3:
            raise PreconditionError(f"D must be at least 3, got {self.d_cap}")
        if self.m < 1:
            raise PreconditionError(f"m must be positive, got {self.m}")
        if self.audit not in AUDIT_TIERS:
            raise PreconditionError(f"unknown audit tier {self.audit!r}")
        self.rng = np.random.default_rng(self.seed)
        self.inverse = {}
        for key, v in self.embedding.items():
            if v in self.inverse:
                raise PreconditionError(f"embedding not injective at host vertex {v}")
            if v not in self.s:
                raise PreconditionError(f"embedded vertex {v} is not in S")
            self.inverse[v] = key

    @classmethod
    def from_vertices(cls, host: Graph, vertices: Iterable[int], d_cap: int, m: int, **kw):
        """State with ``S = I(vertices)``."""
        return cls(host, Subgraph.edgeless(vertices), d_cap, m, **kw)

    def snapshot(self) -> tuple[dict, dict]:
        return {v: frozenset(ns) for v, ns in self.s.adj.items()}, dict(self.embedding)

    def assign(self, key: Hashable, v: int) -> None:
        if key in self.embedding and self.embedding[key] != v:
            raise PreconditionError(f"target {key!r} already embedded at {self.embedding[key]}")
        owner = self.inverse.get(v)
        if owner is not None and owner != key:
            raise PreconditionError(f"host vertex {v} already hosts {owner!r}")
        self.embedding[key] = v
        self.inverse[v] = key

    def unassign_vertex(self, v: int) -> None:
        key = self.inverse.pop(v, None)
        if key is not None:
            del self.embedding[key]


# extendability checks


@lru_cache(maxsize=64)
def _combos(n: int, r: int) -> np.ndarray:
    return np.array(list(itertools.combinations(range(n), r)), dtype=np.intp).reshape(-1, r)


def _masks(state: ExtendableState) -> tuple[np.ndarray, int, np.ndarray]:
    n = state.host.n
    nbr = np.zeros(n, dtype=np.uint64)
    for v in range(n):
        bits = 0
        for w in state.host.adj[v]:
            bits |= 1 << w
        nbr[v] = bits
    s_bits = 0
    for v in state.s.vertices:
        s_bits |= 1 << v
    return nbr, s_bits, np.array([state.s.degree(v) if v in state.s else 0 for v in range(n)])


def _check_exact_size(state: ExtendableState) -> None:
    if state.host.n > EXACT_MAX_N or state.m > EXACT_MAX_M:
        raise OversizedInstance(
            f"exact mode needs |V| <= {EXACT_MAX_N} and m <= {EXACT_MAX_M}, "
            f"got |V|={state.host.n}, m={state.m}"
        )


def _exact(state: ExtendableState, sufficient: bool) -> tuple[bool, list[int] | None]:
    _check_exact_size(state)
    n = state.host.n
    if state.s.max_degree > state.d_cap:
        return False, None
    nbr, s_bits, deg_s = _masks(state)
    in_s = np.array([v in state.s for v in range(n)])
    # Def 3.5 rewritten per vertex: need Σ_u w(u) with w(u) = D - d_S(u) on S, D - 1 off S
    weight = np.where(in_s, state.d_cap - deg_s, state.d_cap - 1)
    outside = np.uint64(~s_bits & ((1 << n) - 1))
    for r in range(1, min(2 * state.m, n) + 1):
        combos = _combos(n, r)
        gamma = np.bitwise_or.reduce(nbr[combos], axis=1) & outside
        if sufficient:
            u_bits = np.bitwise_or.reduce(np.left_shift(np.uint64(1), combos.astype(np.uint64)), axis=1)
            gamma &= ~u_bits
            need = state.d_cap * r
        else:
            need = weight[combos].sum(axis=1)
        bad = np.flatnonzero(np.bitwise_count(gamma) < need)
        if bad.size:
            return False, combos[bad[0]].tolist()
    return True, None


def _sampled(
    state: ExtendableState, budget: int, rng: np.random.Generator, s: Subgraph | None = None
) -> tuple[bool, list[int] | None]:
    s = state.s if s is None else s
    if s.max_degree > state.d_cap:
        return False, None
    host = state.host
    top = min(2 * state.m, host.n)
    for _ in range(budget):
        r = int(rng.integers(1, top + 1))
        u = rng.choice(host.n, size=r, replace=False).tolist()
        gamma: set[int] = set()
        for x in u:
            gamma.update(host.adj[x])
        free = sum(1 for w in gamma if w not in s.adj)
        need = sum(state.d_cap - s.degree(x) if x in s.adj else state.d_cap - 1 for x in u)
        if free < need:
            return False, sorted(u)
    return True, None


def is_extendable(
    state: ExtendableState, mode: str = "exact", budget: int | None = None, seed: int | None = None
) -> tuple[bool, list[int] | None]:
    """Decide (exact) or try to refute (sampled) ``(D, m)``-extendability of ``state.s``.

    Returns ``(verdict, witness)`` where a failing witness is the offending ``U``
    (``None`` if the failure is the degree cap).
    """
    if mode == "exact":
        return _exact(state, sufficient=False)
    if mode == "sampled":
        rng = np.random.default_rng(state.seed if seed is None else seed)
        return _sampled(state, budget or state.sample_budget, rng)
    raise PreconditionError(f"unknown mode {mode!r}")


def check_expansion_condition(state: ExtendableState) -> bool:
    """The sufficient condition ``|N(U) \\ V(S)| >= D|U|`` for every admissible ``U``."""
    return _exact(state, sufficient=True)[0]


def _audit(state: ExtendableState) -> bool:
    if state.audit == "exact":
        return _exact(state, sufficient=False)[0]
    if state.audit == "sampled":
        return _sampled(state, state.sample_budget, state.rng)[0]
    return True


def _audit_subgraph(state: ExtendableState, s: Subgraph) -> bool:
    if state.audit == "none":
        return True
    saved, state.s = state.s, s
    try:
        return _audit(state)
    finally:
        state.s = saved


# leaf extension and rollback


def candidate_order(state: ExtendableState, anchor: int) -> list[int]:
    """Host neighbours of ``anchor`` outside ``S``: fewest ``S``-neighbours first, ties random."""
    adj = state.s.adj
    cands = [w for w in state.host.adj[anchor] if w not in adj]
    if not cands:
        return []
    load = [sum(1 for x in state.host.adj[w] if x in adj) for w in cands]
    ties = state.rng.random(len(cands))
    order = sorted(range(len(cands)), key=lambda i: (load[i], ties[i]))
    return [cands[i] for i in order]


def extend_leaf(state: ExtendableState, anchor: int, new_target: Hashable) -> ExtendableState:
    """Hang a new leaf off ``anchor`` and embed ``new_target`` there."""
    if anchor not in state.s:
        raise PreconditionError(f"anchor {anchor} is not in S")
    if state.s.degree(anchor) >= state.d_cap:
        raise PreconditionError(f"anchor {anchor} already has S-degree {state.d_cap}")
    if new_target in state.embedding:
        raise PreconditionError(f"target {new_target!r} is already embedded")
    log: list[tuple[int, bool]] = []
    for w in candidate_order(state, anchor):
        state.s.add_edge(anchor, w)
        if _audit(state):
            state.assign(new_target, w)
            return state
        state.s.remove_leaf(w)
        log.append((w, False))
    raise NoExtension(f"no neighbour of {anchor} keeps S extendable", anchor, log)


def rollback(state: ExtendableState, leaf: int) -> ExtendableState:
    """Remove a leaf of ``S`` together with its embedding entry."""
    if leaf not in state.s:
        raise PreconditionError(f"vertex {leaf} is not in S")
    if state.s.degree(leaf) != 1:
        raise PreconditionError(f"vertex {leaf} has S-degree {state.s.degree(leaf)}, not a leaf")
    state.s.remove_leaf(leaf)
    state.unassign_vertex(leaf)
    return state


def _undo(state: ExtendableState, added: list[int]) -> None:
    for v in reversed(added):
        rollback(state, v)
    added.clear()


# connecting


def hop_depth(m: int, d_cap: int) -> int:
    """``ceil(log(2m) / log(D - 1))``, the tree depth that reaches ``m`` vertices."""
    return max(1, math.ceil(math.log(2 * m) / math.log(d_cap - 1) - 1e-12))


class _Probe:
    """Embedding key for temporary exploration vertices."""

    __slots__ = ("i",)

    def __init__(self, i: int):
        self.i = i

    def __repr__(self) -> str:
        return f"probe{self.i}"


def _probe_extend(state: ExtendableState, anchor: int, added: list[int], parent: dict) -> int:
    probe = _Probe(len(added))
    extend_leaf(state, anchor, probe)
    w = state.embedding[probe]
    parent[w] = anchor
    added.append(w)
    return w


def _grow(state, root, depth, cap, branch, added, parent) -> list[int]:
    """BFS tree of leaf extensions from ``root``; returns its deepest level."""
    level = [root]
    size = 1
    for _ in range(depth):
        nxt: list[int] = []
        for x in level:
            kids = 0
            while kids < branch and size < cap and state.s.degree(x) < state.d_cap:
                try:
                    nxt.append(_probe_extend(state, x, added, parent))
                except NoExtension:
                    break
                kids += 1
                size += 1
        if not nxt:
            return []
        level = nxt
    return level


def _trace(parent: dict, v: int, root: int) -> list[int]:
    out = [v]
    while v != root:
        v = parent[v]
        out.append(v)
    return out


def connect(
    state: ExtendableState,
    a: int,
    b: int,
    ell: int,
    *,
    lemma_bounds: bool = True,
    keys: Sequence[Hashable] | None = None,
    retries: int = 3,
    tree_cap: int | None = None,
    search_budget: int = 200_000,
) -> tuple[ExtendableState, Path]:
    """Find an ``a,b``-path of length exactly ``ell`` with fresh internal vertices.

    The a-side is padded first, then trees of leaf extensions are grown from
    the padded end and from ``b`` until their deepest levels can be joined by
    a host edge; everything off the chosen path is rolled back.  When tree
    growth keeps failing (short lengths, crowded hosts) a depth-first search
    with distance pruning takes over.  ``keys`` (length ``ell - 1``) embeds
    the internal vertices.

    ``lemma_bounds`` enforces the length and size hypotheses of the
    connecting lemma; degree bounds on ``a`` and ``b`` are always enforced.
    """
    s, D, m = state.s, state.d_cap, state.m
    if a not in s or b not in s:
        raise PreconditionError("both endpoints must already be in S")
    if a == b:
        raise PreconditionError("endpoints must be distinct")
    for v in (a, b):
        if s.degree(v) > D / 2:
            raise PreconditionError(f"endpoint {v} has S-degree {s.degree(v)} > D/2")
    if ell < 1:
        raise PreconditionError("length must be positive")
    if keys is not None and len(keys) != ell - 1:
        raise PreconditionError(f"need {ell - 1} keys for the internal vertices, got {len(keys)}")
    h = hop_depth(m, D)
    if lemma_bounds:
        if ell < 2 * h + 1:
            raise PreconditionError(f"length {ell} is below the lower bound {2 * h + 1}")
        room = state.host.n - 10 * D * m - (ell - 2 * h - 1)
        if len(s) > room:
            raise PreconditionError(f"|S|={len(s)} exceeds the size budget {room}")
    if ell == 1:
        if not state.host.has_edge(a, b) or b in s.adj[a]:
            raise ConnectFailure(f"{a} and {b} are not joined by a free host edge", exhaustive=True)
        path: Path = (a, b)
        trial = s.copy()
        trial.add_edge(a, b)
        if not _audit_subgraph(state, trial):
            raise ConnectFailure("the edge ab breaks extendability", exhaustive=True)
        s.add_edge(a, b)
        return state, path

    cap = tree_cap if tree_cap is not None else max(4, min(2 * m + 2, 64))
    big_h = min(ell - 1, 2 * h)
    hb = big_h // 2
    ha = big_h - hb
    pad = ell - 1 - big_h
    sizes = (0, 0)
    for _ in range(max(1, retries)):
        path, sizes = _tree_attempt(state, a, b, pad, ha, hb, cap)
        if path is not None:
            _commit(state, path, keys)
            return state, path
    path, complete = _search(state, a, b, ell, search_budget)
    if path is not None:
        _commit(state, path, keys)
        return state, path
    raise ConnectFailure(f"no {a},{b}-path of length {ell} found", sizes, complete)


def _tree_attempt(state, a, b, pad, ha, hb, cap):
    added: list[int] = []
    parent: dict[int, int] = {}
    try:
        chain = [a]
        for _ in range(pad):
            try:
                chain.append(_probe_extend(state, chain[-1], added, parent))
            except NoExtension:
                return None, (0, 0)
        end = chain[-1]
        branch = max(1, state.d_cap - 1)
        front_b = _grow(state, b, hb, cap, branch, added, parent)
        front_a = _grow(state, end, ha, cap, branch, added, parent)
        sizes = (len(front_a), len(front_b))
        if not front_a or not front_b:
            return None, sizes
        fb = set(front_b)
        edges = sorted((x, y) for x in front_a for y in state.host.adj[x] if y in fb)
        if not edges:
            return None, sizes
    finally:
        _undo(state, added)
    for x, y in edges:
        left = chain[:-1] + _trace(parent, x, end)[::-1]
        right = _trace(parent, y, b)
        path = tuple(left + right)
        if len(set(path)) != len(path):
            continue
        trial = state.s.copy()
        trial.add_path(path)
        if _audit_subgraph(state, trial):
            return path, sizes
    return None, sizes


def _search(
    state: ExtendableState, a: int, b: int, ell: int, budget: int
) -> tuple[Path | None, bool]:
    host, adj = state.host, state.s.adj
    # distance to b through vertices outside S
    dist = {b: 0}
    queue = deque([b])
    while queue:
        x = queue.popleft()
        if dist[x] >= ell:
            continue
        for w in host.adj[x]:
            if w not in dist and w not in adj:
                dist[w] = dist[x] + 1
                queue.append(w)
    path = [a]
    on_path = {a}
    steps = 0

    def dfs(x: int, left: int) -> bool:
        nonlocal steps
        steps += 1
        if steps > budget:
            return False
        if left == 1:
            if host.has_edge(x, b) and b not in state.s.adj.get(x, ()):
                path.append(b)
                trial = state.s.copy()
                trial.add_path(path)
                if _audit_subgraph(state, trial):
                    return True
                path.pop()
            return False
        for w in candidate_order(state, x):
            if w in on_path or dist.get(w, ell + 1) > left - 1:
                continue
            path.append(w)
            on_path.add(w)
            if dfs(w, left - 1):
                return True
            path.pop()
            on_path.discard(w)
        return False

    found = dfs(a, ell)
    return (tuple(path) if found else None), steps <= budget


def _commit(state: ExtendableState, path: Path, keys) -> None:
    state.s.add_path(path)
    if keys is not None:
        for key, v in zip(keys, path[1:-1]):
            state.assign(key, v)


# tree embedding


def bfs_order(t: Graph, root: int) -> tuple[list[int], dict[int, int]]:
    order, parent = [root], {root: -1}
    i = 0
    while i < len(order):
        x = order[i]
        i += 1
        for y in t.adj[x]:
            if y not in parent:
                parent[y] = x
                order.append(y)
    return order, parent


def embed_tree(
    state: ExtendableState,
    t: Graph,
    root: int,
    image: int,
    *,
    keys: Sequence[Hashable] | None = None,
    lemma_bounds: bool = True,
) -> ExtendableState:
    """Embed the tree ``t`` with ``root ↦ image`` by breadth-first leaf extensions.

    ``keys[v]`` names target vertex ``v`` in the embedding (default ``v``).
    On failure everything added here is rolled back and the partial map is
    attached to the raised :class:`NoExtension`.
    """
    key = (lambda v: v) if keys is None else (lambda v: keys[v])
    if image not in state.s:
        raise PreconditionError(f"image {image} is not in S")
    if t.n == 0:
        raise PreconditionError("empty tree")
    if t.num_edges != t.n - 1 or not t.is_connected():
        raise PreconditionError("target is not a tree")
    if lemma_bounds:
        if t.max_degree > state.d_cap / 2:
            raise PreconditionError(f"Δ(T)={t.max_degree} exceeds D/2")
        room = state.host.n - (2 * state.d_cap + 3) * state.m
        if len(state.s) + t.n > room:
            raise PreconditionError(f"|S|+|T|={len(state.s) + t.n} exceeds {room}")
    root_key = key(root)
    fresh_root = root_key not in state.embedding
    state.assign(root_key, image)
    order, parent = bfs_order(t, root)
    added: list[int] = []
    placed = {root: image}
    try:
        for x in order[1:]:
            anchor = placed[parent[x]]
            try:
                extend_leaf(state, anchor, key(x))
            except (NoExtension, PreconditionError) as exc:
                raise NoExtension(
                    f"could not embed target {key(x)!r} next to host vertex {anchor}: {exc}",
                    anchor,
                    getattr(exc, "audit_log", None),
                    {key(v): placed[v] for v in placed},
                ) from exc
            placed[x] = state.embedding[key(x)]
            added.append(placed[x])
    except NoExtension:
        _undo(state, added)
        if fresh_root:
            state.embedding.pop(root_key, None)
            if state.inverse.get(image) == root_key:
                del state.inverse[image]
        raise
    return state


# matchings


@dataclass(frozen=True)
class HallViolator:
    """``S ⊆ A`` whose neighbourhood in ``B`` is smaller than ``S``."""

    s_set: tuple[int, ...]
    neighbors: tuple[int, ...]

    def verify(self, g: Graph, b_set: Iterable[int]) -> bool:
        bs = set(b_set)
        nb = {w for v in self.s_set for w in g.adj[v] if w in bs}
        return len(nb) < len(self.s_set)


def hall_matching(g: Graph, a_set: Iterable[int], b_set: Iterable[int]) -> Matching | HallViolator:
    """Perfect matching of ``g[A, B]`` or a Hall violator from the alternating cut."""
    a_list = sorted(set(a_set))
    b_list = sorted(set(b_set))
    if len(a_list) != len(b_list):
        raise PreconditionError(f"|A|={len(a_list)} and |B|={len(b_list)} differ")
    if set(a_list) & set(b_list):
        raise PreconditionError("A and B must be disjoint")
    if not a_list:
        return Matching([])
    b_index = {v: j for j, v in enumerate(b_list)}
    rows, cols = [], []
    for i, v in enumerate(a_list):
        for w in g.adj[v]:
            j = b_index.get(w)
            if j is not None:
                rows.append(i)
                cols.append(j)
    bi = csr_matrix(
        (np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(len(a_list), len(b_list))
    )
    match = maximum_bipartite_matching(bi, perm_type="column")
    if np.all(match >= 0):
        return Matching([(a_list[i], b_list[int(j)]) for i, j in enumerate(match)])
    mate_of_b = {int(j): i for i, j in enumerate(match) if j >= 0}
    start = int(np.flatnonzero(match < 0)[0])
    seen_a, seen_b = {start}, set()
    queue = deque([start])
    while queue:
        i = queue.popleft()
        for j in bi.indices[bi.indptr[i] : bi.indptr[i + 1]]:
            j = int(j)
            if j in seen_b:
                continue
            seen_b.add(j)
            i2 = mate_of_b[j]  # maximality: every reachable B vertex is matched
            if i2 not in seen_a:
                seen_a.add(i2)
                queue.append(i2)
    return HallViolator(
        tuple(sorted(a_list[i] for i in seen_a)), tuple(sorted(b_list[j] for j in seen_b))
    )


# bare paths


def bare_path_bound(n: int, leaves: int, k: int) -> float:
    return n / (k + 1) - (2 * leaves - 2)


def extract_bare_paths(t: Graph, k: int) -> list[Path]:
    """Chop the maximal degree-2 chains of the tree ``t`` into disjoint bare paths of length ``k``.

    Every vertex of a returned path has degree 2 in ``t``.
    """
    if k < 1:
        raise PreconditionError("k must be positive")
    if t.n == 0 or t.num_edges != t.n - 1 or not t.is_connected():
        raise PreconditionError("input is not a tree")
    deg = [t.degree(v) for v in range(t.n)]
    seen: set[int] = set()
    chains: list[list[int]] = []
    for v in range(t.n):
        if deg[v] != 2 or v in seen:
            continue
        comp = [v]
        seen.add(v)
        stack = [v]
        while stack:
            x = stack.pop()
            for w in t.adj[x]:
                if deg[w] == 2 and w not in seen:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        ends = sorted(x for x in comp if sum(1 for w in t.adj[x] if deg[w] == 2) <= 1)
        chain = [ends[0]]
        prev = -1
        while True:
            nxt = [w for w in t.adj[chain[-1]] if deg[w] == 2 and w != prev]
            if not nxt:
                break
            prev = chain[-1]
            chain.append(nxt[0])
        chains.append(chain)
    paths: list[Path] = []
    for chain in chains:
        for start in range(0, len(chain) - k, k + 1):
            paths.append(tuple(chain[start : start + k + 1]))
    if t.n >= 2:
        leaves = sum(1 for d in deg if d == 1)
        bound = bare_path_bound(t.n, leaves, k)
        assert len(paths) >= bound, f"{len(paths)} bare paths, bound {bound}"
    return paths


def is_bare(t: Graph, p: Sequence[int]) -> bool:
    return is_path(t, p) and all(t.degree(v) == 2 for v in p)


__all__ = [
    "AUDIT_TIERS",
    "ConnectFailure",
    "ExtendableState",
    "HallViolator",
    "NoExtension",
    "OversizedInstance",
    "PreconditionError",
    "bare_path_bound",
    "bfs_order",
    "candidate_order",
    "check_expansion_condition",
    "connect",
    "embed_tree",
    "extend_leaf",
    "extract_bare_paths",
    "hall_matching",
    "hop_depth",
    "is_bare",
    "is_extendable",
    "rollback",
]
