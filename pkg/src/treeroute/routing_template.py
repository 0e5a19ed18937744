"""Routing templates: sorting networks with every comparator replaced by a gadget.

Each register becomes a line of vertices running from ``A`` to ``B``.  At
each level a line either passes through a plain path on ``k(k-1)`` vertices
or enters a gadget together with its comparator partner.  Routing a
bijection ``A -> B`` simulates the network and picks, per gadget, the
crossing path pair on a swap and the parallel pair otherwise; the result is
a spanning family of equal-length paths.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .gadget import Gadget, build_gadget, gadget_construction_sequence
from .graph_core import (
    Graph,
    GraphError,
    Path,
    PathFactor,
    graph_from_edges,
    verify_constructible,
)
from .sorting_network import (
    ZERO_ONE_MAX,
    ComparisonNetwork,
    NetworkProvider,
    apply_network,
    build_odd_even_mergesort,
    is_sorting_network,
)

__all__ = [
    "GadgetCopy",
    "RoutingTemplate",
    "TemplateError",
    "build_template",
    "natural_ell",
    "route",
    "template_construction_sequence",
    "verify_constructible",
]


class TemplateError(ValueError):
    pass


@dataclass(frozen=True)
class GadgetCopy:
    level: int
    j1: int
    j2: int
    P1: Path
    P2: Path
    Q1: Path
    Q2: Path
    sequence: tuple[Path, ...] = field(repr=False)


@dataclass(frozen=True)
class RoutingTemplate:
    """Glued gadget graph with terminal lists ``A`` (sources) and ``B`` (sinks).

    Levels are numbered ``1..depth``; ``v_in[(i, j)]`` and ``v_out[(i, j)]``
    are the entry and exit of register ``j`` at level ``i``, with
    ``v_out[(0, j)] = A[j]`` and ``v_in[(depth + 1, j)] = B[j]``.
    ``connectors[(i, j)]`` runs from ``v_out[(i, j)]`` towards level ``i + 1``;
    the last connector of a line ends where its padding (if any) begins.
    """

    graph: Graph
    A: tuple[int, ...]
    B: tuple[int, ...]
    network: ComparisonNetwork
    k: int
    ell: int
    natural_ell: int
    v_in: Mapping[tuple[int, int], int] = field(repr=False)
    v_out: Mapping[tuple[int, int], int] = field(repr=False)
    gadgets: tuple[GadgetCopy, ...] = field(repr=False)
    pass_through: Mapping[tuple[int, int], Path] = field(repr=False)
    connectors: Mapping[tuple[int, int], Path] = field(repr=False)
    padding: Mapping[int, tuple[Path, ...]] = field(repr=False)

    @property
    def n_reg(self) -> int:
        return len(self.A)

    @property
    def depth(self) -> int:
        return self.network.depth

    @property
    def unpadded_size(self) -> int:
        return self.n_reg * (self.natural_ell + 1)


def gadget_size_k(k: int) -> int:
    """Round ``k`` up to the nearest value ``≡ 2 (mod 4)`` (at most +3)."""
    if k < 2:
        raise TemplateError(f"gadget parameter must be at least 2, got {k}")
    while k % 4 != 2:
        k += 1
    return k


def connector_length(i: int, depth: int, k: int) -> int:
    """Length of connector ``Q_{i,j}``: ``k`` at both ends of a line, ``k + 1`` between levels.

    The extra edge on interior connectors makes each line hold exactly
    ``depth * k(k-1) + (depth + 1) * k`` vertices.
    """
    if 1 <= i <= depth - 1:
        return k + 1
    return k


def natural_ell(depth: int, k: int) -> int:
    if depth == 0:
        return k
    return depth * k * (k - 1) + (depth + 1) * k - 1


def _split_length(total: int, lo: int, hi: int) -> list[int]:
    """Split ``total`` into near-equal parts, each in ``[lo, hi]``."""
    if total == 0:
        return []
    parts = -(-total // hi)
    if parts * lo > total:
        raise TemplateError(f"cannot split {total} into parts of length {lo}..{hi}")
    base, extra = divmod(total, parts)
    return [base + 1] * extra + [base] * (parts - extra)


def build_template(
    n_reg: int,
    k: int = 2,
    ell: int | None = None,
    provider: NetworkProvider | ComparisonNetwork = build_odd_even_mergesort,
    check_sorting: bool = True,
) -> RoutingTemplate:
    """Glue gadgets along a comparison network.

    ``provider`` is a network builder ``n -> ComparisonNetwork`` or a ready
    network.  When ``ell`` exceeds the natural line length, each line is
    extended before ``B`` by paths of length ``k..4k``.
    """
    if n_reg < 2:
        raise TemplateError(f"need at least two registers, got {n_reg}")
    k = gadget_size_k(k)
    net = provider if isinstance(provider, ComparisonNetwork) else provider(n_reg)
    if net.n != n_reg:
        raise TemplateError(f"network has {net.n} registers, expected {n_reg}")
    if check_sorting and n_reg <= ZERO_ONE_MAX and not is_sorting_network(net):
        raise TemplateError("network does not sort; routing would fail")
    depth = net.depth
    base_ell = natural_ell(depth, k)
    extra = 0
    if ell is not None:
        extra = ell - base_ell
        if extra < 0 or 0 < extra < k:
            options = sorted({base_ell, base_ell + k} | ({ell + (k - extra)} if extra > 0 else set()))
            raise TemplateError(
                f"ell={ell} is not reachable: natural length is {base_ell} and padding "
                f"adds at least {k}; nearest feasible values {options}"
            )
    pad_lengths = _split_length(extra, k, 4 * k)

    edges: list[tuple[int, int]] = []
    counter = [0]

    def fresh(count: int = 1) -> list[int]:
        start = counter[0]
        counter[0] += count
        return list(range(start, start + count))

    def add_path(p: Sequence[int]) -> None:
        edges.extend(zip(p, p[1:]))

    A = fresh(n_reg)
    B = fresh(n_reg)
    v_in: dict[tuple[int, int], int] = {}
    v_out: dict[tuple[int, int], int] = {}
    for j in range(n_reg):
        v_out[(0, j)] = A[j]
        v_in[(depth + 1, j)] = B[j]
    for i in range(1, depth + 1):
        for j in range(n_reg):
            v_in[(i, j)], v_out[(i, j)] = fresh(2)

    base = build_gadget(k)
    gadgets: list[GadgetCopy] = []
    pass_through: dict[tuple[int, int], Path] = {}
    for i, level in enumerate(net.levels, start=1):
        touched = set()
        for j1, j2 in level:
            touched.update((j1, j2))
            gadgets.append(_copy_gadget(base, i, j1, j2, v_in, v_out, fresh, add_path))
        for j in range(n_reg):
            if j not in touched:
                p = (v_in[(i, j)], *fresh(k * (k - 1) - 2), v_out[(i, j)])
                pass_through[(i, j)] = p
                add_path(p)

    connectors: dict[tuple[int, int], Path] = {}
    padding: dict[int, tuple[Path, ...]] = {}
    for j in range(n_reg):
        for i in range(depth + 1):
            length = connector_length(i, depth, k)
            start = v_out[(i, j)]
            if i == depth and pad_lengths:
                end = fresh()[0]
            else:
                end = v_in[(i + 1, j)]
            p = (start, *fresh(length - 1), end)
            connectors[(i, j)] = p
            add_path(p)
        pads = []
        cur = connectors[(depth, j)][-1]
        for idx, length in enumerate(pad_lengths):
            last = idx == len(pad_lengths) - 1
            end = B[j] if last else fresh()[0]
            p = (cur, *fresh(length - 1), end)
            pads.append(p)
            add_path(p)
            cur = end
        padding[j] = tuple(pads)

    graph = graph_from_edges(counter[0], edges)
    total_ell = graph.n // n_reg - 1
    if graph.n % n_reg or total_ell != base_ell + extra:
        raise TemplateError("internal error: line lengths are unequal")
    return RoutingTemplate(
        graph=graph,
        A=tuple(A),
        B=tuple(B),
        network=net,
        k=k,
        ell=total_ell,
        natural_ell=base_ell,
        v_in=v_in,
        v_out=v_out,
        gadgets=tuple(gadgets),
        pass_through=pass_through,
        connectors=connectors,
        padding=padding,
    )


def _copy_gadget(base: Gadget, i, j1, j2, v_in, v_out, fresh, add_path) -> GadgetCopy:
    ident = {
        base.v_in1: v_in[(i, j1)],
        base.v_out1: v_out[(i, j1)],
        base.v_in2: v_in[(i, j2)],
        base.v_out2: v_out[(i, j2)],
    }
    others = [v for v in range(base.graph.n) if v not in ident]
    ident.update(zip(others, fresh(len(others))))

    def m(p: Path) -> Path:
        return tuple(ident[v] for v in p)

    for a, b in base.graph.edges():
        add_path((ident[a], ident[b]))
    seq = tuple(m(p) for p in gadget_construction_sequence(base, base.v_in1))
    return GadgetCopy(i, j1, j2, m(base.P1), m(base.P2), m(base.Q1), m(base.Q2), seq)


def _phi_indices(t: RoutingTemplate, phi) -> list[int]:
    n = t.n_reg
    if isinstance(phi, Mapping):
        b_index = {b: j for j, b in enumerate(t.B)}
        try:
            idx = [b_index[phi[a]] for a in t.A]
        except KeyError as exc:
            raise TemplateError(f"phi is not a map A -> B (missing {exc})") from None
    else:
        idx = [int(x) for x in phi]
    if len(idx) != n or sorted(idx) != list(range(n)):
        raise TemplateError(f"phi {list(idx)} is not a bijection on {n} terminals")
    return idx


def _concat(parts: Sequence[Path]) -> Path:
    out = list(parts[0])
    for p in parts[1:]:
        if p[0] != out[-1]:
            raise GraphError("internal error: route segments do not join")
        out.extend(p[1:])
    return tuple(out)


def route(t: RoutingTemplate, phi) -> PathFactor:
    """Route bijection ``phi`` as a spanning family of ``ell``-length paths.

    ``phi`` is either a sequence of 0-based ``B`` indices (``phi[j]`` is the
    image of ``A[j]``) or a mapping from ``A`` vertices to ``B`` vertices.
    Paths are returned in ``A`` order.
    """
    idx = _phi_indices(t, phi)
    final, trace = apply_network(t.network, [x + 1 for x in idx])
    if final != list(range(1, t.n_reg + 1)):
        raise TemplateError("network failed to sort this input; cannot route")

    choice: dict[tuple[int, int], Path] = {}
    by_level: dict[int, list[GadgetCopy]] = {}
    for gc in t.gadgets:
        by_level.setdefault(gc.level, []).append(gc)
    for i, level in enumerate(t.network.levels, start=1):
        copies = {(gc.j1, gc.j2): gc for gc in by_level.get(i, [])}
        for (j1, j2), swapped in zip(level, trace[i - 1]):
            gc = copies[(j1, j2)]
            if swapped:
                choice[(i, j1)], choice[(i, j2)] = gc.P1, gc.Q1
            else:
                choice[(i, j1)], choice[(i, j2)] = gc.P2, gc.Q2

    out_register = {v: jj for (i, jj), v in t.v_out.items()}
    paths = []
    for j in range(t.n_reg):
        parts = [t.connectors[(0, j)]]
        r = j
        for i in range(1, t.depth + 1):
            seg = choice.get((i, r)) or t.pass_through[(i, r)]
            parts.append(seg)
            r = out_register[seg[-1]]
            parts.append(t.connectors[(i, r)])
        parts.extend(t.padding[r])
        paths.append(_concat(parts))
    return PathFactor(paths, frozenset(range(t.graph.n)))


def routing_endpoints(t: RoutingTemplate, phi) -> list[tuple[int, int]]:
    idx = _phi_indices(t, phi)
    return [(t.A[j], t.B[idx[j]]) for j in range(t.n_reg)]


def _pieces(chain: Path, lo: int, hi: int) -> list[Path]:
    lengths = _split_length(len(chain) - 1, lo, hi)
    out, pos = [], 0
    for length in lengths:
        out.append(chain[pos : pos + length + 1])
        pos += length
    return out


def template_construction_sequence(t: RoutingTemplate) -> list[Path]:
    """Paths building ``t.graph`` from ``A ∪ B``, level by level.

    Per level: connectors into the first register of each comparator, the
    gadget sequences (started at their first in-terminal), the remaining
    connectors into the level, and the pass-through paths.  A pass-through
    is merged with the connector feeding it and re-cut into pieces of length
    ``k..4k``.  The last connectors and padding follow.
    """
    k = t.k
    seq: list[Path] = []
    by_level: dict[int, list[GadgetCopy]] = {}
    for gc in t.gadgets:
        by_level.setdefault(gc.level, []).append(gc)
    for i, level in enumerate(t.network.levels, start=1):
        done = set()
        for j1, _ in level:
            seq.append(t.connectors[(i - 1, j1)])
            done.add(j1)
        for gc in sorted(by_level.get(i, []), key=lambda g: g.j1):
            seq.extend(gc.sequence)
        for j in range(t.n_reg):
            if j in done:
                continue
            q = t.connectors[(i - 1, j)]
            if (i, j) in t.pass_through:
                seq.extend(_pieces(_concat([q, t.pass_through[(i, j)]]), k, 4 * k))
            else:
                seq.append(q)
    for j in range(t.n_reg):
        seq.append(t.connectors[(t.depth, j)])
        seq.extend(t.padding[j])
    return seq
