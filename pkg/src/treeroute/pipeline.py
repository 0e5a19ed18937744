"""End-to-end spanning-tree embedding and cycle factors at desk scale.

The proof strategy, step by step:

0. cut ``k`` long bare paths out of the target tree, leaving a forest ``T'``;
1. set aside random vertex sets ``R0..R4`` and a reserve for the chain pool;
2. embed a routing template whose terminals are ``R3`` (sources) and ``R4``
   (sinks);
3. embed ``T'``;
4. join the two ends of every removed bare path to ``R1`` and ``R2`` by
   paths of length ``t'``;
5. run ``k`` vertex-disjoint paths through every remaining vertex, one level
   at a time, from ``R1`` to ``R3``, and match ``R2`` to ``R4``;
6. route the induced pairing of ``R3`` and ``R4`` through the template.

At this scale each level of the chain holds exactly one vertex per register,
so the chain is grown in lock-step (a fresh perfect matching between
consecutive levels each round) and repaired with Pósa rotations, rather
than by matching pre-sampled levels.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields
from typing import Iterable, Sequence

import networkx as nx
import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .embedder import (
    ConnectFailure,
    ExtendableState,
    HallViolator,
    NoExtension,
    PreconditionError,
    bfs_order,
    candidate_order,
    rollback,
    _audit,
    connect,
    embed_tree,
    extract_bare_paths,
    hall_matching,
    hop_depth,
)
from .graph_core import Graph, Subgraph, cycle_graph, graph_from_edges, path_graph
from .routing_template import (
    RoutingTemplate,
    TemplateError,
    build_template,
    route,
    template_construction_sequence,
)
from .sorting_network import get_provider
from .spectral import second_eigenvalue

DEFAULT_SEED = 20240611


class PipelineError(RuntimeError):
    """A step of the pipeline failed; ``step`` names it and ``trace`` holds progress."""

    def __init__(self, step: str, message: str, trace: dict | None = None):
        super().__init__(f"{step}: {message}")
        self.step = step
        self.trace = trace or {}


class BarePathDeficit(PipelineError):
    def __init__(self, message: str, trace: dict | None = None):
        super().__init__("step0", message, trace)


class SamplingError(PipelineError):
    def __init__(self, message: str, worst: tuple | None = None, trace: dict | None = None):
        super().__init__("step1", message, trace)
        self.worst = worst


@dataclass
class PipelineConfig:
    """Explicit knobs replacing the asymptotic constant hierarchy.

    ``None`` fields are derived from the host: ``m = max(2, ceil(λn/d))``,
    ``t_prime = max(2h + 1, 2 ceil(ln n))`` with ``h`` the connecting depth,
    ``num_levels`` fills ``pool_fraction`` of the host with chain vertices.
    """

    D: int = 8
    m: int | None = None
    k_gadget: int = 2
    registers: int = 4
    t_prime: int | None = None
    num_levels: int | None = None
    network: str = "odd-even"
    pool_fraction: float = 0.6
    pool_reserve: float = 0.4
    r0_fraction: float = 0.05
    band_lo: float = 0.5
    band_hi: float = 2.0
    band_min_expected: float = 8.0
    residual_min: float = 0.15
    seed: int = DEFAULT_SEED
    audit: str = "none"
    sample_retries: int = 50
    step_retries: int = 4
    rotation_budget: int = 400
    fallback: bool = True

    def __post_init__(self):
        if self.D < 3:
            raise PreconditionError("D must be at least 3")
        if self.registers < 2:
            raise PreconditionError("need at least two registers")
        for name in ("pool_fraction", "pool_reserve", "r0_fraction"):
            if not 0 <= getattr(self, name) < 1:
                raise PreconditionError(f"{name} must lie in [0, 1)")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "PipelineConfig":
        known = {f.name: f for f in fields(cls)}
        unknown = sorted(set(data) - set(known))
        if unknown:
            raise PreconditionError(f"unknown config keys: {unknown}")
        return cls(**data)

    @classmethod
    def parse(cls, text: str) -> "PipelineConfig":
        """Flat ``key = value`` lines; ``#`` starts a comment; values are JSON literals or bare strings."""
        data = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise PreconditionError(f"line {lineno}: expected key = value")
            key, value = (part.strip() for part in line.split("=", 1))
            try:
                data[key] = json.loads(value)
            except json.JSONDecodeError:
                data[key] = value
        return cls.from_dict(data)


@dataclass
class EmbeddingResult:
    map: list[int]
    trace: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"map": list(self.map), "trace": self.trace}


# generators


def generate_random_regular(n: int, d: int, seed: int = DEFAULT_SEED) -> Graph:
    """A random ``d``-regular simple graph from the pairing model.

    Points are paired one at a time, rejecting pairs that would create a loop
    or a repeated edge, restarting when stuck (Steger–Wormald).
    """
    if n * d % 2:
        raise PreconditionError("n*d must be even")
    if not 0 <= d < n:
        raise PreconditionError("need 0 <= d < n")
    try:
        h = nx.random_regular_graph(d, n, seed=seed)
    except nx.NetworkXError as exc:
        raise PipelineError("gen-host", str(exc)) from exc
    g = graph_from_edges(n, h.edges())
    assert g.is_regular() and g.max_degree == d
    return g


TREE_KINDS = ("path", "caterpillar", "broom", "random_bounded", "spider")


def generate_tree(kind: str, n: int, delta_cap: int, seed: int = DEFAULT_SEED) -> Graph:
    """Target trees.

    ``caterpillar`` hangs ``n // 10`` leaves off the first stretch of its spine
    and leaves the rest bare; ``broom`` is a handle path ending in a complete
    ``(delta_cap - 1)``-ary bristle tree on a quarter of the vertices;
    ``spider`` has ``delta_cap`` legs of near-equal length; ``random_bounded``
    attaches each new vertex to a uniform earlier vertex of spare degree.
    """
    if n < 1:
        raise PreconditionError("n must be positive")
    if delta_cap < 2:
        raise PreconditionError("delta_cap must be at least 2")
    rng = np.random.default_rng(seed)
    edges: list[tuple[int, int]] = []
    if kind == "path":
        edges = [(i, i + 1) for i in range(n - 1)]
    elif kind == "spider":
        legs = min(delta_cap, n - 1)
        if legs < 1:
            return Graph(1, [[]])
        base, extra = divmod(n - 1, legs)
        nxt = 1
        for leg in range(legs):
            prev = 0
            for _ in range(base + (1 if leg < extra else 0)):
                edges.append((prev, nxt))
                prev = nxt
                nxt += 1
    elif kind == "caterpillar":
        if delta_cap < 3:
            raise PreconditionError("a caterpillar with leaves needs delta_cap >= 3")
        leaves = n // 10
        spine = n - leaves
        edges = [(i, i + 1) for i in range(spine - 1)]
        window = min(spine, 2 * leaves)
        room = {i: delta_cap - (1 if i in (0, spine - 1) else 2) for i in range(window)}
        hosts = [i for i in range(window) for _ in range(max(0, min(room[i], 1)))]
        if leaves > len(hosts):
            raise PreconditionError("caterpillar does not fit under the degree cap")
        chosen = sorted(rng.choice(hosts, size=leaves, replace=False).tolist())
        for j, i in enumerate(chosen):
            edges.append((i, spine + j))
    elif kind == "broom":
        if delta_cap < 3:
            raise PreconditionError("a broom needs delta_cap >= 3")
        bristles = n // 4
        handle = n - bristles
        edges = [(i, i + 1) for i in range(handle - 1)]
        queue = [handle - 1]
        nxt = handle
        head = 0
        while nxt < n:
            parent = queue[head]
            head += 1
            for _ in range(delta_cap - 1):
                if nxt >= n:
                    break
                edges.append((parent, nxt))
                queue.append(nxt)
                nxt += 1
    elif kind == "random_bounded":
        deg = [0] * n
        open_ = [0]
        for v in range(1, n):
            i = int(rng.integers(len(open_)))
            u = open_[i]
            edges.append((u, v))
            deg[u] += 1
            deg[v] += 1
            if deg[u] >= delta_cap:
                open_[i] = open_[-1]
                open_.pop()
            open_.append(v)
    else:
        raise PreconditionError(f"unknown tree kind {kind!r}; choose from {TREE_KINDS}")
    t = graph_from_edges(n, edges)
    if t.max_degree > delta_cap:
        raise PreconditionError(f"{kind} on {n} vertices exceeds Δ={delta_cap}")
    return t


# Step 1


@dataclass
class ReservedSets:
    R: list[list[int]]
    levels: list[list[int]]
    checked: dict

    def all_vertices(self) -> set[int]:
        out = set()
        for part in self.R:
            out.update(part)
        for part in self.levels:
            out.update(part)
        return out

    def to_dict(self) -> dict:
        return {"R": self.R, "levels": self.levels, "checked": self.checked}


def _split(total: int, parts: int) -> list[int]:
    base, extra = divmod(total, parts)
    return [base + (1 if i < extra else 0) for i in range(parts)]


def sample_reserved_sets(
    g: Graph,
    cfg: PipelineConfig,
    sizes: Sequence[int] | None = None,
    level_sizes: Sequence[int] | None = None,
    rng: np.random.Generator | None = None,
    r2_from_r4: bool = False,
) -> ReservedSets:
    """Disjoint random ``R0..R4`` (``sizes``) and levels ``V_1..`` (``level_sizes``).

    Sizes default to ``r0_fraction * n`` for ``R0``, ``registers`` for
    ``R1..R4`` and ``round(pool_reserve * registers)`` for each of
    ``num_levels`` levels.

    Resampled until every vertex's degree into each set lies in
    ``[band_lo, band_hi] * d|X|/n`` (skipped for sets whose expected degree is
    below ``band_min_expected``) and every vertex keeps at least
    ``residual_min * d`` neighbours outside all of them.  With ``r2_from_r4``
    the set ``R2`` is drawn as distinct neighbours of ``R4``, so that the two
    can be perfectly matched.
    """
    rng = np.random.default_rng(cfg.seed) if rng is None else rng
    n = g.n
    if sizes is None:
        sizes = [int(cfg.r0_fraction * n)] + [cfg.registers] * 4
    if level_sizes is None:
        per_level = max(1, round(cfg.pool_reserve * cfg.registers))
        level_sizes = [per_level] * (cfg.num_levels or 0)
    degs = g.degrees()
    d = float(degs.mean()) if n else 0.0
    total = sum(sizes) + sum(level_sizes)
    if total >= n:
        raise SamplingError(f"reserved sizes sum to {total}, host has {n} vertices")
    worst = None
    for attempt in range(cfg.sample_retries):
        perm = rng.permutation(n).tolist()
        parts: list[list[int]] = []
        pos = 0
        for s in list(sizes) + list(level_sizes):
            parts.append(perm[pos : pos + s])
            pos += s
        if r2_from_r4 and len(sizes) >= 5:
            parts, ok = _redraw_r2(g, parts, rng)
            if not ok:
                worst = ("R2", None, "no distinct neighbours for R4")
                continue
        member = np.full(n, -1)
        for idx, part in enumerate(parts):
            member[part] = idx
        counts = np.zeros((n, len(parts)), dtype=np.int64)
        for v in range(n):
            for w in g.adj[v]:
                if member[w] >= 0:
                    counts[v, member[w]] += 1
        checked = {}
        bad = None
        for idx, part in enumerate(parts):
            expect = d * len(part) / n
            name = f"R{idx}" if idx < len(sizes) else f"V{idx - len(sizes) + 1}"
            if expect < cfg.band_min_expected:
                checked[name] = "unchecked"
                continue
            lo, hi = cfg.band_lo * expect, cfg.band_hi * expect
            col = counts[:, idx]
            out = np.flatnonzero((col < lo) | (col > hi))
            checked[name] = [lo, hi]
            if out.size and bad is None:
                v = int(out[0])
                bad = (name, v, int(col[v]), lo, hi)
        residual = degs - counts.sum(axis=1)
        low = np.flatnonzero(residual < cfg.residual_min * d)
        if bad is None and low.size:
            v = int(low[0])
            bad = ("residual", v, int(residual[v]), cfg.residual_min * d, None)
        if bad is None:
            checked["attempts"] = attempt + 1
            return ReservedSets(parts[: len(sizes)], parts[len(sizes) :], checked)
        worst = bad
    raise SamplingError(f"no acceptable sample in {cfg.sample_retries} tries; last violation {worst}", worst)


def _redraw_r2(g: Graph, parts: list[list[int]], rng) -> tuple[list[list[int]], bool]:
    taken = set()
    for idx, part in enumerate(parts):
        if idx != 2:
            taken.update(part)
    r2 = []
    for y in parts[4]:
        opts = [w for w in g.adj[y] if w not in taken]
        if not opts:
            return parts, False
        w = opts[int(rng.integers(len(opts)))]
        r2.append(w)
        taken.add(w)
    # vertices of the old R2 that are not reused go back to the free area
    parts = list(parts)
    parts[2] = r2
    return parts, True


# Step 2


def embed_template(
    state: ExtendableState,
    t: RoutingTemplate,
    v1: Sequence[int],
    v2: Sequence[int],
    tag: str = "tpl",
    backtrack_budget: int = 400,
) -> ExtendableState:
    """Embed the template with ``A ↦ v1`` and ``B ↦ v2`` following its construction sequence.

    Template vertex ``x`` ends up at ``state.embedding[(tag, x)]``.  A path
    with both endpoints placed is realised by :func:`connect`, one with a
    single placed endpoint by growing it leaf by leaf.  The connections in
    the template are short, so a failed one undoes the previous step and
    retries it with shuffled choices (chronological backtracking, at most
    ``backtrack_budget`` undos).
    """
    if len(v1) != t.n_reg or len(v2) != t.n_reg:
        raise PreconditionError("terminal lists must match the register count")
    for v in list(v1) + list(v2):
        if v not in state.s:
            raise PreconditionError(f"terminal {v} is not in S")
    fresh = t.graph.n - 2 * t.n_reg
    room = state.host.n - len(state.s)
    if fresh > room:
        raise PreconditionError(f"template needs {fresh} fresh vertices, host has {room}")
    for a, v in zip(t.A, v1):
        state.assign((tag, a), v)
    for b, v in zip(t.B, v2):
        state.assign((tag, b), v)
    seq = eager_sequence(template_construction_sequence(t), list(t.A) + list(t.B))
    ahead = _short_constraints(t, seq)
    done: list[tuple[str, list[int]]] = []
    tries = [0] * len(seq)
    undos = 0
    i = 0
    while i < len(seq):
        try:
            done.append(_template_step(state, seq[i], tag, tries[i] > 0, i, ahead))
            i += 1
        except (ConnectFailure, NoExtension) as exc:
            tries[i] = 0
            if not done or undos >= backtrack_budget:
                exc.progress = i
                raise
            _undo_step(state, *done.pop())
            undos += 1
            i -= 1
            tries[i] += 1
            # a step retried too often is given up, and the one before it retried
            while tries[i] > 3 and done:
                tries[i] = 0
                _undo_step(state, *done.pop())
                undos += 1
                i -= 1
                tries[i] += 1
    state.backtracks = undos
    return state


def eager_sequence(seq: Sequence[Sequence[int]], start: Iterable[int]) -> list[list[int]]:
    """Reorder a construction sequence so each path closing two placed vertices runs at once.

    Moving such a path earlier keeps the sequence valid: its interior avoids
    every earlier path anyway.  It shortens the window in which other steps
    can use up the few vertices a short connection needs.
    """
    placed = set(start)
    pending = [list(p) for p in seq]
    out: list[list[int]] = []
    while pending:
        i = next(i for i, p in enumerate(pending) if p[0] in placed or p[-1] in placed)
        out.append(pending.pop(i))
        placed.update(out[-1])
        moved = True
        while moved:
            moved = False
            for j, p in enumerate(pending):
                if p[0] in placed and p[-1] in placed:
                    out.append(pending.pop(j))
                    placed.update(out[-1])
                    moved = True
                    break
    return out


def _short_constraints(t: RoutingTemplate, seq) -> dict[int, list[tuple[int, int]]]:
    """For each vertex, the short connections it must later admit to already placed vertices."""
    when = {v: -1 for v in list(t.A) + list(t.B)}
    out: dict[int, list[tuple[int, int]]] = {}
    for i, p in enumerate(seq):
        x, y = p[0], p[-1]
        if x in when and y in when:
            if len(p) - 1 <= 3:
                late, early = (x, y) if when[x] > when[y] else (y, x)
                if when[late] >= 0:
                    out.setdefault(late, []).append((early, len(p) - 1))
        for v in p:
            when.setdefault(v, i)
    return out


def _can_reach(state: ExtendableState, w: int, z: int, ell: int) -> bool:
    # a path of length ell from a fresh w to z through vertices outside S
    adj, host = state.s.adj, state.host.adj
    near_z = {x for x in host[z] if x not in adj and x != w}
    if ell == 1:
        return state.host.has_edge(w, z)
    if ell == 2:
        return any(x in near_z for x in host[w])
    return any(x not in adj and x != z and any(y in near_z and y != x for y in host[x]) for x in host[w])


def _template_step(state: ExtendableState, p, tag: str, shuffle: bool, index: int, ahead=None):
    x, y = p[0], p[-1]
    hx, hy = state.embedding.get((tag, x)), state.embedding.get((tag, y))
    if hx is not None and hy is not None:
        if len(p) - 1 <= 3:
            return "path", _short_connect(state, p, hx, hy, tag, shuffle, ahead or {})
        _, path = connect(state, hx, hy, len(p) - 1, keys=[(tag, v) for v in p[1:-1]], lemma_bounds=False)
        return "path", list(path)
    if hx is None and hy is None:
        raise TemplateError(f"construction path {index} has no placed endpoint")
    q = p if hx is not None else p[::-1]
    cur = state.embedding[(tag, q[0])]
    added: list[int] = []
    for v in q[1:]:
        if state.s.degree(cur) >= state.d_cap:
            _undo_step(state, "leaves", added)
            raise NoExtension(f"vertex {cur} is saturated", anchor=cur)
        cands = candidate_order(state, cur)
        if shuffle:
            cands = [cands[j] for j in state.rng.permutation(len(cands))]
        needs = [(state.embedding[(tag, u)], ell) for u, ell in (ahead or {}).get(v, [])]
        if needs:
            cands = [w for w in cands if all(_can_reach(state, w, z, ell) for z, ell in needs)]
        for w in cands:
            state.s.add_edge(cur, w)
            if _audit(state):
                break
            state.s.remove_leaf(w)
        else:
            _undo_step(state, "leaves", added)
            raise NoExtension(f"no extension from {cur}", anchor=cur)
        state.assign((tag, v), w)
        added.append(w)
        cur = w
    return "leaves", added


def _short_connect(state, p, hx, hy, tag, shuffle, ahead) -> list[int]:
    """Enumerate the host paths of length 2 or 3 between ``hx`` and ``hy`` and take a good one.

    Interior vertices that later need short connections of their own are
    filtered by the same lookahead as leaf steps.
    """
    adj, host, ell = state.s.adj, state.host.adj, len(p) - 1
    if max(state.s.degree(hx), state.s.degree(hy)) >= state.d_cap:
        raise ConnectFailure(f"endpoint of {hx},{hy} is saturated", exhaustive=True)
    near_y = [w for w in host[hy] if w not in adj]
    if ell == 2:
        ny = set(near_y)
        paths = [[hx, w, hy] for w in host[hx] if w in ny]
    else:
        ny = set(near_y)
        paths = [[hx, x, y, hy] for x in host[hx] if x not in adj for y in host[x] if y in ny and y != x]
    needs = [[(state.embedding[(tag, u)], e) for u, e in ahead.get(v, [])] for v in p[1:-1]]
    paths = [q for q in paths if all(_can_reach(state, w, z, e) for w, nd in zip(q[1:-1], needs) for z, e in nd)]
    if shuffle:
        paths = [paths[j] for j in state.rng.permutation(len(paths))]
    else:
        load = {w: sum(1 for x in host[w] if x in adj) for q in paths for w in q[1:-1]}
        paths.sort(key=lambda q: sum(load[w] for w in q[1:-1]))
    for q in paths:
        state.s.add_path(q)
        if _audit(state):
            for v, w in zip(p[1:-1], q[1:-1]):
                state.assign((tag, v), w)
            return q
        state.s.remove_path_interior(q)
    raise ConnectFailure(f"no {hx},{hy}-path of length {ell} found", exhaustive=True)


def _undo_step(state: ExtendableState, kind: str, verts: list[int]) -> None:
    if kind == "leaves":
        for v in reversed(verts):
            rollback(state, v)
    else:
        state.s.remove_path_interior(verts)
        for v in verts[1:-1]:
            state.unassign_vertex(v)


def template_image(state: ExtendableState, t: RoutingTemplate, tag: str = "tpl") -> list[int]:
    return [state.embedding[(tag, x)] for x in range(t.graph.n)]


# Step 5


class ChainFailure(RuntimeError):
    pass


def _rotations(g: Graph, path: list[int], budget: int):
    """Pósa rotations with the first vertex fixed; yields rotated paths (including ``path``)."""
    seen = {path[-1]}
    queue = [path]
    head = 0
    yield path
    while head < len(queue) and len(queue) < budget:
        p = queue[head]
        head += 1
        end = p[-1]
        pos = {v: i for i, v in enumerate(p)}
        for w in sorted(g.adj[end]):
            s = pos.get(w)
            if s is None or s > len(p) - 3:
                continue
            q = p[: s + 1] + p[s + 1 :][::-1]
            if q[-1] in seen:
                continue
            seen.add(q[-1])
            queue.append(q)
            yield q
            if len(queue) >= budget:
                return


def _saturate(g: Graph, left: Sequence[int], right: Sequence[int]) -> dict[int, int]:
    """Maximum matching from ``left`` into ``right`` (preferring earlier ``right`` entries)."""
    col = {v: j for j, v in enumerate(right)}
    rows, cols = [], []
    for i, u in enumerate(left):
        for w in g.adj[u]:
            j = col.get(w)
            if j is not None:
                rows.append(i)
                cols.append(j)
    mat = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(len(left), len(right)))
    got = maximum_bipartite_matching(mat, perm_type="column")
    return {left[i]: right[j] for i, j in enumerate(got) if j >= 0}


def build_chain(
    g: Graph,
    starts: Sequence[int],
    pool: Iterable[int],
    ends: Sequence[int],
    levels: int,
    rng: np.random.Generator,
    rotation_budget: int = 400,
) -> tuple[list[list[int]], list[int], dict]:
    """Cover ``pool`` by ``len(starts)`` disjoint paths with ``levels`` pool vertices each.

    Path ``i`` starts at ``starts[i]`` and its last pool vertex is adjacent to
    a distinct vertex of ``ends``; returns the paths (start first, pool
    vertices after), the chosen end for each path, and counters.
    """
    k = len(starts)
    pool_list = sorted(set(pool))
    pool_set = set(pool_list)
    if len(pool_set) != k * levels:
        raise ChainFailure(f"pool has {len(pool_set)} vertices, need {k}*{levels}")
    # the final level is fixed up front: one pool neighbour per target
    order = [pool_list[j] for j in rng.permutation(len(pool_list))]
    held = set(_saturate(g, list(ends), order).values())
    if len(held) != k:
        raise ChainFailure("targets lack distinct pool neighbours")
    unused = pool_set - held
    free_deg = {v: sum(1 for w in g.adj[v] if w in unused) for v in pool_set}
    paths = [[s] for s in starts]
    stats = {"rotations": 0}

    def options(v: int) -> int:
        return sum(1 for w in g.adj[v] if w in unused)

    end_set = set(ends)
    last = [False]

    def pick(v: int) -> int | None:
        cands = [w for w in g.adj[v] if w in unused]
        if not cands:
            return None
        ties = rng.random(len(cands))
        # in the last round, vertices that see a target come first
        miss = [last[0] and not any(x in end_set for x in g.adj[w]) for w in cands]
        best = min(range(len(cands)), key=lambda i: (miss[i], free_deg[cands[i]], ties[i]))
        return cands[best]

    def take(w: int) -> None:
        unused.discard(w)
        for x in g.adj[w]:
            if x in free_deg:
                free_deg[x] -= 1

    def untake(w: int) -> None:
        unused.add(w)
        for x in g.adj[w]:
            if x in free_deg:
                free_deg[x] += 1

    def greedy_round() -> bool:
        ties = rng.random(k)
        for i in sorted(range(k), key=lambda i: (options(paths[i][-1]), ties[i])):
            w = pick(paths[i][-1])
            if w is None:
                for q in _rotations(g, paths[i], rotation_budget):
                    if q is not paths[i] and options(q[-1]):
                        paths[i] = q
                        stats["rotations"] += 1
                        w = pick(q[-1])
                        break
            if w is None:
                return False
            paths[i].append(w)
            take(w)
        return True

    def matched_round(final: bool) -> bool:
        # every path offers the unused neighbours of its rotated ends
        offers: list[dict[int, list[int]]] = []
        for p in paths:
            by_vertex: dict[int, list[int]] = {}
            for q in _rotations(g, p, rotation_budget):
                for u in g.adj[q[-1]]:
                    if u in unused and u not in by_vertex:
                        by_vertex[u] = q
            offers.append(by_vertex)
        spots = sorted(unused)
        index = {u: k + j for j, u in enumerate(spots)}
        attempts = [True, False] if final else [False]
        for need_target in attempts:
            aux_edges = [
                (i, index[u])
                for i, by_vertex in enumerate(offers)
                for u in by_vertex
                if not need_target or any(x in end_set for x in g.adj[u])
            ]
            aux = graph_from_edges(k + len(spots), aux_edges)
            match = hall_matching(aux, range(k), range(k, k + len(spots)))
            if isinstance(match, HallViolator):
                continue
            for i, j in match.pairs:
                u = spots[j - k]
                paths[i] = offers[i][u] + [u]
                take(u)
            stats["matched_rounds"] += 1
            return True
        return False

    stats["matched_rounds"] = 0
    for r in range(levels):
        last[0] = r == levels - 1
        if last[0]:
            for z in held:
                untake(z)
        before = [list(p) for p in paths]
        if not greedy_round():
            for p in paths:
                if len(p) > r + 1:
                    untake(p[-1])
            paths[:] = before
            if not matched_round(last[0]):
                raise ChainFailure(f"level {r + 1} cannot be matched with {len(unused)} vertices left")

    # choose a rotation of each path whose end sees a distinct target
    variants: list[dict[int, list[int]]] = []
    for p in paths:
        by_target: dict[int, list[int]] = {}
        for q in _rotations(g, p, rotation_budget):
            for x in g.adj[q[-1]]:
                if x in end_set and x not in by_target:
                    by_target[x] = q
        variants.append(by_target)
    index = {x: k + j for j, x in enumerate(ends)}
    aux_edges = [(i, index[x]) for i, vs in enumerate(variants) for x in vs]
    aux = graph_from_edges(2 * k, aux_edges)
    match = hall_matching(aux, range(k), range(k, 2 * k))
    if isinstance(match, HallViolator):
        raise ChainFailure(f"path ends cannot be matched into the targets: violator {match.s_set}")
    chosen = [0] * k
    for i, j in match.pairs:
        x = ends[j - k]
        chosen[i] = x
        paths[i] = variants[i][x]
    return paths, chosen, stats


# Steps 0-6


def _spectral_trace(g: Graph) -> dict:
    rep = second_eigenvalue(g)
    return {"lambda_hat": round(rep.lambda_hat, 9), "d": float(rep.d), "method": rep.method}


def _derive_m(g: Graph, lam: float, cfg: PipelineConfig) -> int:
    if cfg.m is not None:
        return cfg.m
    d = 2 * g.num_edges / g.n
    return max(2, math.ceil(lam * g.n / d))


@dataclass
class _Plan:
    k_reg: int
    template: RoutingTemplate
    t_prime: int
    levels: int
    bare_len: int
    bare: list[tuple[int, ...]]

    def to_dict(self) -> dict:
        return {
            "registers": self.k_reg,
            "template_vertices": self.template.graph.n,
            "template_ell": self.template.ell,
            "network_depth": self.template.depth,
            "t_prime": self.t_prime,
            "levels": self.levels,
            "bare_path_length": self.bare_len,
        }


def _plan(g: Graph, t: Graph, cfg: PipelineConfig, m: int) -> _Plan | None:
    """Pick registers and chain length so that the tree has enough bare paths.

    Registers are tried from ``cfg.registers`` down to 2; for each, the level
    count is the largest value up to the ``pool_fraction`` target for which
    ``k`` bare paths exist.  The largest chain pool wins; ties go to more
    registers.
    """
    n = g.n
    h = hop_depth(m, cfg.D)
    t_prime = cfg.t_prime or max(2 * h + 1, 2 * math.ceil(math.log(n)))
    provider = get_provider(cfg.network)
    best: _Plan | None = None
    for k_reg in range(cfg.registers, 1, -1):
        template = build_template(k_reg, cfg.k_gadget, provider=provider)
        fixed = 2 * t_prime + template.ell + 2

        def fits(levels: int):
            overhead = template.graph.n + 2 * k_reg + k_reg * (levels + 2 * (t_prime - 1))
            if overhead + 1 > n:
                return None
            bare = extract_bare_paths(t, fixed + levels)
            return bare if len(bare) >= k_reg else None

        target = cfg.num_levels or max(1, round(cfg.pool_fraction * n / k_reg))
        if cfg.num_levels:
            lo = hi = target
        else:
            lo, hi = 1, target
        if fits(lo) is None:
            continue
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if fits(mid) is None:
                hi = mid - 1
            else:
                lo = mid
        bare = fits(lo)
        pick = np.linspace(0, len(bare) - 1, k_reg).round().astype(int)
        plan = _Plan(k_reg, template, t_prime, lo, fixed + lo, [bare[i] for i in pick])
        if best is None or lo * k_reg > best.levels * best.k_reg:
            best = plan
    return best


def _forest_as_tree(t: Graph, removed: set[tuple[int, int]]) -> tuple[Graph, list[int], int]:
    """``T'`` plus dummy edges chaining its components; returns (tree, labels, dummy count)."""
    keep = [v for v in range(t.n)]
    adj = {v: [w for w in t.adj[v] if (min(v, w), max(v, w)) not in removed] for v in keep}
    comps: list[list[int]] = []
    seen: set[int] = set()
    for v in keep:
        if v in seen or (not adj[v] and _isolated_interior(t, v, removed)):
            continue
        comp, stack = [], [v]
        seen.add(v)
        while stack:
            x = stack.pop()
            comp.append(x)
            for w in adj[x]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(sorted(comp))
    labels = [v for comp in comps for v in comp]
    index = {v: i for i, v in enumerate(labels)}
    edges = [(index[u], index[w]) for u in labels for w in adj[u] if u < w]
    dummies = 0
    prev_out = None
    for comp in comps:
        by_deg = sorted(comp, key=lambda v: (len(adj[v]), v))
        in_v = by_deg[0]
        out_v = by_deg[1] if len(by_deg) > 1 else by_deg[0]
        if prev_out is not None:
            edges.append((index[prev_out], index[in_v]))
            dummies += 1
        prev_out = out_v
    return graph_from_edges(len(labels), edges), labels, dummies


def _isolated_interior(t: Graph, v: int, removed) -> bool:
    # interior vertices of removed bare paths lose both edges and leave T'
    return all((min(v, w), max(v, w)) in removed for w in t.adj[v]) and t.degree(v) == 2


def embed_spanning_tree(g: Graph, t: Graph, cfg: PipelineConfig | None = None) -> EmbeddingResult:
    """Embed the spanning tree ``t`` into the regular host ``g``.

    Raises :class:`PipelineError` (with ``step`` and ``trace``) on failure.
    """
    cfg = cfg or PipelineConfig()
    if t.n != g.n:
        raise PreconditionError(f"|T|={t.n} differs from |G|={g.n}")
    if t.num_edges != t.n - 1 or not t.is_connected():
        raise PreconditionError("target is not a tree")
    if not g.is_regular() or not g.is_connected():
        raise PreconditionError("host must be regular and connected")
    trace: dict = {"host": {"n": g.n, "d": g.max_degree, **_spectral_trace(g)}}
    m = _derive_m(g, trace["host"]["lambda_hat"], cfg)
    trace["m"] = m
    plan = _plan(g, t, cfg, m)
    if plan is None:
        if not cfg.fallback:
            raise BarePathDeficit("tree lacks enough bare paths for any register count", trace)
        trace["route"] = "many_leaves_fallback"
        return _with_retries(lambda rng, tr: many_leaves_fallback(g, t, cfg, rng, tr, m), cfg, trace)
    trace["route"] = "sorting_network"
    trace["plan"] = plan.to_dict()
    return _with_retries(lambda rng, tr: _run_steps(g, t, cfg, plan, m, rng, tr), cfg, trace)


def _with_retries(fn, cfg: PipelineConfig, trace: dict):
    failures = []
    for attempt in range(cfg.step_retries):
        rng = np.random.default_rng([cfg.seed, attempt])
        tr = {}
        try:
            result = fn(rng, tr)
        except PipelineError as exc:
            failures.append({"attempt": attempt, "step": exc.step, "error": str(exc)})
            continue
        trace["attempts"] = failures + [{"attempt": attempt, "ok": True}]
        trace["steps"] = tr
        result.trace = trace
        return result
    trace["attempts"] = failures
    last = failures[-1]
    raise PipelineError(last["step"], f"all {cfg.step_retries} attempts failed; last: {last['error']}", trace)


def _step(name: str):
    """Turn embedder failures inside a step into tagged pipeline errors."""

    class _Ctx:
        def __enter__(self):
            return self

        def __exit__(self, et, exc, tb):
            if exc is None or isinstance(exc, PipelineError):
                return False
            if isinstance(exc, (ConnectFailure, NoExtension, ChainFailure, PreconditionError, TemplateError)):
                raise PipelineError(name, str(exc)) from exc
            return False

    return _Ctx()


def _run_steps(g, t, cfg, plan: _Plan, m: int, rng, tr: dict) -> EmbeddingResult:
    n, k = g.n, plan.k_reg
    template = plan.template
    bare = plan.bare

    # Step 1
    pool_total = k * plan.levels
    reserve = int(cfg.pool_reserve * pool_total)
    with _step("step1"):
        sets = sample_reserved_sets(
            g,
            cfg,
            sizes=[int(cfg.r0_fraction * n), k, k, k, k],
            level_sizes=[s for s in _split(reserve, plan.levels) if s],
            rng=rng,
            r2_from_r4=True,
        )
    r0, r1, r2, r3, r4 = sets.R
    reserved_pool = sorted(v for lv in sets.levels for v in lv)
    tr["step1"] = {"sizes": [len(x) for x in sets.R], "reserved_pool": len(reserved_pool), "checked": sets.checked}

    state = ExtendableState(
        g,
        Subgraph.edgeless(sorted(set(r1) | set(r2) | set(r3) | set(r4) | set(reserved_pool))),
        cfg.D,
        m,
        audit=cfg.audit,
        seed=int(rng.integers(1 << 31)),
    )

    # Step 2
    with _step("step2"):
        embed_template(state, template, r3, r4)
    tr["step2"] = {"template_vertices": template.graph.n}

    # Step 3
    removed = {(min(a, b), max(a, b)) for p in bare for a, b in zip(p, p[1:])}
    forest, labels, dummies = _forest_as_tree(t, removed)
    free = [v for v in range(n) if v not in state.s]
    if not free:
        raise PipelineError("step3", "no free vertex left for the forest root")
    root_img = free[int(rng.integers(len(free)))]
    state.s.add_vertex(root_img)
    with _step("step3"):
        embed_tree(state, forest, 0, root_img, keys=[("T", v) for v in labels], lemma_bounds=False)
    tr["step3"] = {"forest_vertices": forest.n, "dummy_edges": dummies}

    # Step 4
    with _step("step4"):
        qs, qs2 = [], []
        for i, p in enumerate(bare):
            _, q = connect(
                state, state.embedding[("T", p[0])], r1[i], plan.t_prime,
                keys=[("Q", i, j) for j in range(plan.t_prime - 1)], lemma_bounds=False,
            )
            qs.append(q)
        for i, p in enumerate(bare):
            _, q = connect(
                state, state.embedding[("T", p[-1])], r2[i], plan.t_prime,
                keys=[("Q'", i, j) for j in range(plan.t_prime - 1)], lemma_bounds=False,
            )
            qs2.append(q)
    tr["step4"] = {"connections": 2 * k, "t_prime": plan.t_prime}

    # Step 5
    used = {v for v in state.s.vertices if state.s.degree(v) > 0}
    used |= set(r1) | set(r2) | set(r3) | set(r4)
    pool = [v for v in range(n) if v not in used]
    with _step("step5"):
        chains, x_of, stats = build_chain(g, r1, pool, r3, plan.levels, rng, cfg.rotation_budget)
        link = hall_matching(g, r2, r4)
        if isinstance(link, HallViolator):
            raise ChainFailure(f"R2 and R4 have no perfect matching: violator {link.s_set}")
    y_of_b = link.as_dict()
    _check_chain(g, chains, plan.levels, x_of)
    tr["step5"] = {
        "levels": plan.levels,
        "level_size": k,
        "leftover_absorbed": len(pool) - len(reserved_pool),
        "rotations": stats["rotations"],
    }

    # Step 6
    a_index = {v: j for j, v in enumerate(r3)}
    b_index = {v: j for j, v in enumerate(r4)}
    phi = [0] * k
    for i in range(k):
        phi[a_index[x_of[i]]] = b_index[y_of_b[r2[i]]]
    image = template_image(state, template)
    factor = route(template, phi)
    routed = {image[p[0]]: [image[v] for v in p] for p in factor.paths}
    tr["step6"] = {"phi": phi}

    # assemble
    mapping = [-1] * n
    for v in labels:
        mapping[v] = state.embedding[("T", v)]
    for i, p in enumerate(bare):
        host_path = (
            list(qs[i])
            + chains[i][1:]
            + routed[x_of[i]]
            + list(qs2[i][::-1])
        )
        if len(host_path) != len(p):
            raise PipelineError("assemble", f"bare path {i}: host path has {len(host_path)} vertices, need {len(p)}")
        for v, h in zip(p, host_path):
            mapping[v] = h
    ok, why = verify_embedding(g, t, mapping)
    if not ok:
        raise PipelineError("verify", why)
    return EmbeddingResult(mapping)


def _check_chain(g: Graph, chains: list[list[int]], levels: int, ends: list[int]) -> None:
    k = len(chains)
    for j in range(levels):
        layer = [c[j] for c in chains]
        nxt = [c[j + 1] for c in chains]
        if len(set(nxt)) != k or not all(g.has_edge(a, b) for a, b in zip(layer, nxt)):
            raise PipelineError("step5", f"levels {j} and {j + 1} are not perfectly matched")
    if len(set(ends)) != k or not all(g.has_edge(c[-1], x) for c, x in zip(chains, ends)):
        raise PipelineError("step5", "chain ends do not match the template sources bijectively")


def many_leaves_fallback(g, t, cfg, rng, tr: dict, m: int) -> EmbeddingResult:
    """Best-effort route for trees without long bare paths.

    Embed ``t`` minus its leaves while half as many random vertices as there
    are leaves are held back, then match each leaf (through its parent's
    image) to a distinct leftover vertex.
    """
    n = t.n
    leaves = [v for v in range(n) if t.degree(v) == 1]
    if n <= 2:
        if n == 1:
            return EmbeddingResult([0])
        u, w = g.edges()[0]
        return EmbeddingResult([u, w])
    leaf_set = set(leaves)
    core = [v for v in range(n) if v not in leaf_set]
    index = {v: i for i, v in enumerate(core)}
    core_tree = graph_from_edges(len(core), [(index[a], index[b]) for a, b in t.edges() if a in index and b in index])
    held = rng.permutation(n)[: len(leaves) // 2].tolist()
    state = ExtendableState(g, Subgraph.edgeless(sorted(held)), cfg.D, m, audit=cfg.audit, seed=int(rng.integers(1 << 31)))
    free = [v for v in range(n) if v not in state.s]
    root_img = free[int(rng.integers(len(free)))]
    state.s.add_vertex(root_img)
    with _step("fallback-core"):
        embed_tree(state, core_tree, 0, root_img, keys=core, lemma_bounds=False)
    used = {state.embedding[v] for v in core}
    leftovers = [v for v in range(n) if v not in used]
    # one auxiliary vertex per leaf, adjacent to the leftovers its parent sees
    parent = {leaf: t.adj[leaf][0] for leaf in leaves}
    offset = n
    aux_edges = []
    for j, leaf in enumerate(leaves):
        img = state.embedding[parent[leaf]]
        for w in g.adj[img]:
            if w not in used:
                aux_edges.append((offset + j, w))
    aux = graph_from_edges(n + len(leaves), aux_edges)
    with _step("fallback-leaves"):
        match = hall_matching(aux, [offset + j for j in range(len(leaves))], leftovers)
        if isinstance(match, HallViolator):
            raise ChainFailure(f"leaves cannot be matched: violator of size {len(match.s_set)}")
    mapping = [-1] * n
    for v in core:
        mapping[v] = state.embedding[v]
    for a, b in match.pairs:
        mapping[leaves[a - offset]] = b
    ok, why = verify_embedding(g, t, mapping)
    if not ok:
        raise PipelineError("verify", why)
    tr["fallback"] = {"leaves": len(leaves), "held_back": len(held)}
    return EmbeddingResult(mapping)


def verify_embedding(g: Graph, t: Graph, mapping: Sequence[int]) -> tuple[bool, str]:
    """Injectivity, totality, edge preservation and (for equal sizes) coverage."""
    if len(mapping) != t.n:
        return False, f"totality: map has {len(mapping)} entries for {t.n} tree vertices"
    for x, v in enumerate(mapping):
        if not 0 <= v < g.n:
            return False, f"totality: vertex {x} maps to {v}"
    seen: dict[int, int] = {}
    for x, v in enumerate(mapping):
        if v in seen:
            return False, f"injectivity: {seen[v]} and {x} both map to {v}"
        seen[v] = x
    for x, y in t.edges():
        if not g.has_edge(mapping[x], mapping[y]):
            return False, f"edge ({x},{y}) maps to non-edge ({mapping[x]},{mapping[y]})"
    if t.n == g.n and len(seen) != g.n:
        return False, "coverage: not spanning"
    return True, "ok"


# cycle factors


def cycle_factor(g: Graph, k_cycle: int, cfg: PipelineConfig | None = None) -> list[list[int]]:
    """Partition ``V(g)`` into vertex-disjoint cycles of length ``k_cycle``.

    With ``r = n / k_cycle`` registers: sources ``V1`` and sinks ``V2`` of a
    routing template, ``r`` chain paths from ``V2`` through every other vertex
    to ``V1``, then the template closes each chain into a cycle.  Lengths
    below the template's reach (or ``r < 2``) use a direct search that is
    only practical on small or dense hosts.
    """
    return cycle_factor_traced(g, k_cycle, cfg)[0]


def cycle_factor_traced(g: Graph, k_cycle: int, cfg: PipelineConfig | None = None):
    cfg = cfg or PipelineConfig()
    n = g.n
    if k_cycle < 3 or n % k_cycle:
        raise PreconditionError(f"k_cycle={k_cycle} must be at least 3 and divide n={n}")
    r = n // k_cycle
    trace: dict = {"host": {"n": n, "regular": g.is_regular()}, "k_cycle": k_cycle, "cycles": r}
    template = None
    if r >= 2:
        template = build_template(r, cfg.k_gadget, provider=get_provider(cfg.network))
        levels = k_cycle - template.ell - 1
        if levels < 1:
            template = None
    if template is None:
        trace["route"] = "direct"
        return _with_retries_cycles(lambda rng, tr: _direct_cycles(g, k_cycle, rng, tr), cfg, trace)
    if not g.is_regular() or not g.is_connected():
        raise PreconditionError("host must be regular and connected")
    trace["host"].update(_spectral_trace(g))
    m = _derive_m(g, trace["host"]["lambda_hat"], cfg)
    trace["route"] = "sorting_network"
    trace["plan"] = {
        "registers": r,
        "template_vertices": template.graph.n,
        "template_ell": template.ell,
        "network_depth": template.depth,
        "levels": levels,
    }
    return _with_retries_cycles(lambda rng, tr: _cycle_steps(g, cfg, template, levels, m, rng, tr), cfg, trace)


def _with_retries_cycles(fn, cfg, trace):
    failures = []
    for attempt in range(cfg.step_retries):
        rng = np.random.default_rng([cfg.seed, attempt])
        tr: dict = {}
        try:
            cycles = fn(rng, tr)
        except PipelineError as exc:
            failures.append({"attempt": attempt, "step": exc.step, "error": str(exc)})
            continue
        trace["attempts"] = failures + [{"attempt": attempt, "ok": True}]
        trace["steps"] = tr
        return cycles, trace
    trace["attempts"] = failures
    last = failures[-1]
    raise PipelineError(last["step"], f"all {cfg.step_retries} attempts failed; last: {last['error']}", trace)


def _cycle_steps(g, cfg, template: RoutingTemplate, levels: int, m: int, rng, tr) -> list[list[int]]:
    n, r = g.n, template.n_reg
    pool_total = r * levels
    reserve = int(cfg.pool_reserve * pool_total)
    with _step("sets"):
        sets = sample_reserved_sets(
            g, cfg, sizes=[r, r], level_sizes=[s for s in _split(reserve, levels) if s], rng=rng
        )
    v1, v2 = sets.R
    reserved_pool = sorted(v for lv in sets.levels for v in lv)
    state = ExtendableState(
        g, Subgraph.edgeless(sorted(set(v1) | set(v2) | set(reserved_pool))), cfg.D, m,
        audit=cfg.audit, seed=int(rng.integers(1 << 31)),
    )
    with _step("template"):
        embed_template(state, template, v1, v2)
    image = template_image(state, template)
    used = set(image)
    pool = [v for v in range(n) if v not in used]
    with _step("chain"):
        chains, x_of, stats = build_chain(g, v2, pool, v1, levels, rng, cfg.rotation_budget)
    _check_chain(g, chains, levels, x_of)
    a_index = {v: j for j, v in enumerate(v1)}
    b_index = {v: j for j, v in enumerate(v2)}
    phi = [0] * r
    for i in range(r):
        phi[a_index[x_of[i]]] = b_index[v2[i]]
    factor = route(template, phi)
    routed = {image[p[0]]: [image[v] for v in p] for p in factor.paths}
    cycles = []
    for i in range(r):
        # the template runs x -> y_i and the chain y_i -> pool -> x closes the cycle
        cyc = routed[x_of[i]] + chains[i][1:]
        cycles.append(cyc)
    ok, why = verify_cycle_factor(g, cycles, template.ell + levels + 1)
    if not ok:
        raise PipelineError("verify", why)
    tr.update({"template_vertices": template.graph.n, "levels": levels, "rotations": stats["rotations"], "phi": phi})
    return cycles


def _direct_cycles(g: Graph, k_cycle: int, rng, tr) -> list[list[int]]:
    """Greedy cycle packing with backtracking inside each cycle (small or dense hosts)."""
    n = g.n
    if k_cycle == n and n == g.num_edges and g.is_regular() and g.max_degree == 2 and g.is_connected():
        order, _ = bfs_order(g, 0)
        cyc = [0]
        prev, cur = -1, 0
        while len(cyc) < n:
            nxt = next(w for w in g.adj[cur] if w != prev)
            prev, cur = cur, nxt
            cyc.append(cur)
        tr["special"] = "host is a single cycle"
        return [cyc]
    left = set(range(n))
    cycles = []
    budget = 50_000
    while left:
        start = min(left, key=lambda v: (sum(1 for w in g.adj[v] if w in left), v))
        cyc = _find_cycle(g, start, k_cycle, left, rng, budget)
        if cyc is None:
            raise PipelineError("direct", f"no {k_cycle}-cycle through vertex {start} among {len(left)} vertices")
        cycles.append(cyc)
        left -= set(cyc)
    ok, why = verify_cycle_factor(g, cycles, k_cycle)
    if not ok:
        raise PipelineError("verify", why)
    return cycles


def _find_cycle(g, start, k, allowed, rng, budget) -> list[int] | None:
    path = [start]
    on = {start}
    steps = 0

    def dfs() -> bool:
        nonlocal steps
        steps += 1
        if steps > budget:
            return False
        v = path[-1]
        if len(path) == k:
            return g.has_edge(v, start)
        cands = [w for w in g.adj[v] if w in allowed and w not in on]
        # tighter vertices first keeps the leftover graph healthy
        ties = rng.random(len(cands))
        order = sorted(range(len(cands)), key=lambda i: (sum(1 for x in g.adj[cands[i]] if x in allowed and x not in on), ties[i]))
        for i in order:
            w = cands[i]
            path.append(w)
            on.add(w)
            if dfs():
                return True
            path.pop()
            on.discard(w)
        return False

    return list(path) if dfs() else None


def verify_cycle_factor(g: Graph, cycles: Sequence[Sequence[int]], k_cycle: int) -> tuple[bool, str]:
    seen: set[int] = set()
    for i, c in enumerate(cycles):
        if len(c) != k_cycle:
            return False, f"cycle {i} has length {len(c)}, expected {k_cycle}"
        for a, b in zip(c, list(c[1:]) + [c[0]]):
            if not g.has_edge(a, b):
                return False, f"cycle {i}: ({a},{b}) is not an edge"
        for v in c:
            if v in seen:
                return False, f"cycle {i}: vertex {v} reused"
            seen.add(v)
    if len(seen) != g.n:
        return False, f"cycles cover {len(seen)} of {g.n} vertices"
    return True, "ok"


__all__ = [
    "BarePathDeficit",
    "DEFAULT_SEED",
    "EmbeddingResult",
    "PipelineConfig",
    "PipelineError",
    "ReservedSets",
    "SamplingError",
    "TREE_KINDS",
    "build_chain",
    "cycle_factor",
    "cycle_factor_traced",
    "embed_spanning_tree",
    "embed_template",
    "generate_random_regular",
    "generate_tree",
    "many_leaves_fallback",
    "sample_reserved_sets",
    "template_image",
    "verify_cycle_factor",
    "verify_embedding",
]
