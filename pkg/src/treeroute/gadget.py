"""The comparison gadget: a bounded-degree graph that mimics one comparator.

``G_k`` is a ``2k``-cycle on ``U ∪ V`` with a long path hung between each
pair in ``S``.  Two in-terminals and two out-terminals are joined by a
crossing pair of paths (``P1``, ``Q1``) and a parallel pair (``P2``, ``Q2``);
each pair partitions the vertex set.

Vertex ids: ``u_1..u_k`` are ``0..k-1``, ``v_1..v_k`` are ``k..2k-1``,
then the internal vertices of each attachment path in the order ``S`` is
enumerated.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .graph_core import Graph, Path, graph_from_edges, path_problem, verify_constructible


class GadgetError(ValueError):
    pass


@dataclass(frozen=True)
class Gadget:
    k: int
    graph: Graph
    v_in1: int
    v_in2: int
    v_out1: int
    v_out2: int
    P1: Path
    P2: Path
    Q1: Path
    Q2: Path
    cycle: Path = field(repr=False)
    attachments: tuple[Path, ...] = field(repr=False)

    @property
    def terminals(self) -> dict[str, int]:
        return {
            "v_in1": self.v_in1,
            "v_in2": self.v_in2,
            "v_out1": self.v_out1,
            "v_out2": self.v_out2,
        }


def _u(i: int) -> int:
    return i - 1


def _v(k: int, i: int) -> int:
    return k + i - 1


def cycle_edges(k: int) -> list[tuple[int, int]]:
    """Edges of the base ``2k``-cycle, in the order they are listed in the construction."""
    u = _u
    v = lambda i: _v(k, i)  # noqa: E731
    edges = [(u(1), v(2)), (u(k), v(k - 1))]
    for i in range(1, k, 2):
        edges.append((u(i), u(i + 1)))
        edges.append((v(i), v(i + 1)))
    for i in range(2, k - 1, 2):
        edges.append((u(i), v(i + 2)))
    for i in range(3, k + 1, 2):
        edges.append((u(i), v(i - 2)))
    return edges


def _walk_cycle(k: int, edges: list[tuple[int, int]]) -> Path:
    nbrs: dict[int, list[int]] = {}
    for a, b in edges:
        nbrs.setdefault(a, []).append(b)
        nbrs.setdefault(b, []).append(a)
    if any(len(ns) != 2 for ns in nbrs.values()) or len(nbrs) != 2 * k:
        raise GadgetError("base edges do not form a 2-regular graph")
    start = _u(1)
    order = [start]
    prev, cur = start, min(nbrs[start])
    while cur != start:
        order.append(cur)
        a, b = nbrs[cur]
        prev, cur = cur, (b if a == prev else a)
    if len(order) != 2 * k:
        raise GadgetError("base edges do not form a single cycle")
    return tuple(order)


def build_gadget(k: int) -> Gadget:
    """Build ``G_k`` for ``k ≡ 2 (mod 4)``; ``k = 2`` gives the 4-cycle."""
    if k < 2 or k % 4 != 2:
        raise GadgetError(f"gadget needs k ≡ 2 (mod 4), got k={k}")
    u = _u
    v = lambda i: _v(k, i)  # noqa: E731
    base = cycle_edges(k)
    cycle = _walk_cycle(k, base)

    pairs = [(u(i), u(i + 1)) for i in range(2, k - 1, 2)]
    pairs += [(v(i), v(i + 1)) for i in range(2, k - 1, 2)]
    nxt = 2 * k
    attach: dict[tuple[int, int], Path] = {}
    edges = list(base)
    for a, b in pairs:
        inner = list(range(nxt, nxt + 2 * k))
        nxt += 2 * k
        p = (a, *inner, b)
        attach[(a, b)] = p
        edges.extend(zip(p, p[1:]))

    def seg(a: int, b: int) -> Path:
        if (a, b) in attach:
            return attach[(a, b)]
        return attach[(b, a)][::-1]

    p1: list[int] = [u(1)]
    q1: list[int] = [v(1)]
    p2: list[int] = [u(1)]
    q2: list[int] = [v(1)]
    for i in range(2, k - 1, 2):
        if i % 4 == 2:
            p1 += seg(v(i), v(i + 1))
            q1 += seg(u(i + 1), u(i))
        else:
            p1 += seg(u(i + 1), u(i))
            q1 += seg(v(i), v(i + 1))
        p2 += seg(u(i), u(i + 1))
        q2 += seg(v(i), v(i + 1))
    p1.append(v(k))
    q1.append(u(k))
    p2.append(u(k))
    q2.append(v(k))

    return Gadget(
        k=k,
        graph=graph_from_edges(nxt, edges),
        v_in1=u(1),
        v_in2=v(1),
        v_out1=u(k),
        v_out2=v(k),
        P1=tuple(p1),
        P2=tuple(p2),
        Q1=tuple(q1),
        Q2=tuple(q2),
        cycle=cycle,
        attachments=tuple(attach[pr] for pr in pairs),
    )


def gadget_construction_sequence(g: Gadget, z: int) -> list[Path]:
    """Paths building ``G_k`` from ``{z}``: the two halves of the cycle, then the attachments."""
    if z not in (g.v_in1, g.v_in2):
        raise GadgetError(f"vertex {z} is not an in-terminal")
    c = g.cycle
    i = c.index(z)
    n = len(c)
    half = n // 2
    first = tuple(c[(i + s) % n] for s in range(half + 1))
    second = tuple(c[(i - s) % n] for s in range(half + 1))
    return [first, second, *g.attachments]


@dataclass
class GadgetReport:
    checks: dict[str, bool]
    messages: dict[str, str]

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    @property
    def first_failure(self) -> str | None:
        for name, passed in self.checks.items():
            if not passed:
                return name
        return None


def verify_gadget(g: Gadget) -> GadgetReport:
    """Check the six gadget properties directly against ``g.graph``."""
    k = g.k
    graph = g.graph
    checks: dict[str, bool] = {}
    msgs: dict[str, str] = {}

    problems = {
        name: path_problem(graph, p)
        for name, p in (("P1", g.P1), ("P2", g.P2), ("Q1", g.Q1), ("Q2", g.Q2))
    }
    bad = {name: pr for name, pr in problems.items() if pr}
    checks["paths valid"] = not bad
    msgs["paths valid"] = "; ".join(f"{nm}: {pr}" for nm, pr in bad.items()) or "ok"

    want = 2 * k * (k - 1)
    checks["(i) size"] = graph.n == want
    msgs["(i) size"] = f"|V|={graph.n}, expected {want}"

    checks["(ii) max degree"] = graph.max_degree == 3
    msgs["(ii) max degree"] = f"Δ={graph.max_degree}, expected 3"

    seq_ok = True
    seq_msgs = []
    for z in (g.v_in1, g.v_in2):
        try:
            seq = gadget_construction_sequence(g, z)
        except GadgetError as exc:
            seq_ok, note = False, str(exc)
        else:
            seq_ok_z, note = verify_constructible(graph, {z}, seq, k, 2 * k + 1)
            seq_ok = seq_ok and seq_ok_z
        seq_msgs.append(f"z={z}: {note}")
    checks["(iii) constructible"] = seq_ok
    msgs["(iii) constructible"] = "; ".join(seq_msgs)

    ends = {
        "P1": (g.v_in1, g.v_out2),
        "Q1": (g.v_in2, g.v_out1),
        "P2": (g.v_in1, g.v_out1),
        "Q2": (g.v_in2, g.v_out2),
    }
    wrong = [
        nm
        for nm, (a, b) in ends.items()
        if (getattr(g, nm)[0], getattr(g, nm)[-1]) != (a, b)
    ]
    distinct = len({g.v_in1, g.v_in2, g.v_out1, g.v_out2}) == 4
    checks["(iv) endpoints"] = not wrong and distinct
    msgs["(iv) endpoints"] = f"wrong endpoints: {wrong}" if wrong else ("ok" if distinct else "terminals not distinct")

    everything = set(range(graph.n))
    part_ok = True
    for a, b in ((g.P1, g.Q1), (g.P2, g.Q2)):
        sa, sb = set(a), set(b)
        if sa & sb or sa | sb != everything:
            part_ok = False
    checks["(v) partition"] = part_ok
    msgs["(v) partition"] = "ok" if part_ok else "a path pair does not partition V"

    sizes = [len(g.P1), len(g.P2), len(g.Q1), len(g.Q2)]
    checks["(vi) path sizes"] = all(s == k * (k - 1) for s in sizes)
    msgs["(vi) path sizes"] = f"sizes={sizes}, expected {k * (k - 1)}"
    return GadgetReport(checks, msgs)


def degree_histogram(g: Gadget) -> Counter:
    return Counter(g.graph.degree(v) for v in range(g.graph.n))
