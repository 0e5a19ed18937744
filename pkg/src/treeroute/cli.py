"""Command-line front end: ``treeroute <subcommand> ...``.

Exit status is 0 on success, 2 for bad input or violated preconditions and 3
when a construction step fails (the step is named on standard error).  JSON
goes to ``--out`` (written atomically); a short summary goes to stdout.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import serialize as io
from .embedder import ConnectFailure, NoExtension, PreconditionError
from .gadget import GadgetError, build_gadget, verify_gadget
from .graph_core import GraphError
from .pipeline import (
    DEFAULT_SEED,
    TREE_KINDS,
    PipelineConfig,
    PipelineError,
    cycle_factor_traced,
    embed_spanning_tree,
    generate_random_regular,
    generate_tree,
    verify_embedding,
)
from .routing_template import TemplateError, build_template, route
from .sorting_network import NetworkError, apply_network, get_provider, is_sorting_network
from .spectral import check_lower_bound, second_eigenvalue

EXIT_OK, EXIT_INPUT, EXIT_STEP = 0, 2, 3


class StepFailed(RuntimeError):
    def __init__(self, step: str, message: str):
        super().__init__(message)
        self.step = step


def _emit(args, payload: dict, summary: str) -> None:
    if getattr(args, "out", None):
        io.write_atomic(args.out, io.dumps(payload))
    print(summary)


def _dot(args, text: str) -> None:
    if getattr(args, "dot", None):
        io.write_atomic(args.dot, text)


def _network(args):
    if args.input:
        return io.network_from_dict(io.read_json(args.input))
    if args.n is None:
        raise PreconditionError("give --n or --in")
    return get_provider(args.builder)(args.n)


def cmd_network(args) -> int:
    net = _network(args)
    if args.action == "build":
        _emit(args, io.network_to_dict(net), f"registers: {net.n}, depth: {net.depth}, comparators: {net.size}")
    elif args.action == "verify":
        ok = is_sorting_network(net, mode=args.mode)
        _emit(args, {"sorting": ok, "depth": net.depth, "mode": args.mode}, f"sorting: {str(ok).lower()}, depth: {net.depth}")
    else:
        if not args.perm:
            raise PreconditionError("apply needs --perm")
        final, trace = apply_network(net, io.parse_int_list(args.perm))
        _emit(args, {"final": final, "swaps": trace}, "final: " + ",".join(map(str, final)))
    return EXIT_OK


def cmd_gadget(args) -> int:
    g = build_gadget(args.k)
    report = verify_gadget(g)
    payload = {
        "k": g.k,
        "graph": io.graph_to_dict(g.graph),
        "terminals": g.terminals,
        "paths": {name: list(getattr(g, name)) for name in ("P1", "P2", "Q1", "Q2")},
        "checks": report.checks,
    }
    labels = {v: name for name, v in g.terminals.items()}
    _dot(args, io.to_dot(g.graph, [g.P1, g.Q1], labels, name="gadget"))
    _emit(args, payload, f"gadget k={g.k}: {g.graph.n} vertices, {g.graph.num_edges} edges, verified: {str(report.ok).lower()}")
    return EXIT_OK


def cmd_route(args) -> int:
    t = build_template(args.registers, args.k, provider=get_provider(args.builder))
    images = io.parse_int_list(args.phi)
    if sorted(images) != list(range(1, args.registers + 1)):
        raise PreconditionError(f"--phi must be a permutation of 1..{args.registers}")
    factor = route(t, [x - 1 for x in images])
    payload = {
        "registers": t.n_reg,
        "k": t.k,
        "ell": t.ell,
        "phi": images,
        "A": list(t.A),
        "B": list(t.B),
        "graph": io.graph_to_dict(t.graph),
        "paths": io.paths_to_lists(factor.paths),
    }
    _dot(args, io.to_dot(t.graph, factor.paths, name="template"))
    pairs = ", ".join(f"{j + 1}->{x}" for j, x in enumerate(images))
    _emit(args, payload, f"routed {pairs}: {len(factor.paths)} paths of length {t.ell} on {t.graph.n} vertices")
    return EXIT_OK


def cmd_spectra(args) -> int:
    g = io.graph_from_dict(io.read_json(args.host))
    rep = second_eigenvalue(g)
    payload = {**rep.to_dict(), "lower_bound_holds": check_lower_bound(rep)}
    _emit(args, payload, f"lambda_hat: {rep.lambda_hat:.6f}, d: {float(rep.d):g}, method: {rep.method}, regular: {str(rep.regular).lower()}")
    return EXIT_OK


def cmd_gen_host(args) -> int:
    g = generate_random_regular(args.n, args.d, seed=args.seed)
    _emit(args, io.graph_to_dict(g), f"{args.d}-regular host on {args.n} vertices (seed {args.seed})")
    return EXIT_OK


def cmd_gen_tree(args) -> int:
    t = generate_tree(args.kind, args.n, args.max_deg, seed=args.seed)
    _emit(args, io.graph_to_dict(t), f"{args.kind} tree on {t.n} vertices, max degree {t.max_degree}")
    return EXIT_OK


def _config(args) -> PipelineConfig:
    cfg = PipelineConfig.parse(Path(args.config).read_text()) if args.config else PipelineConfig()
    if args.seed is not None:
        cfg.seed = args.seed
    return cfg


def cmd_embed(args) -> int:
    g = io.graph_from_dict(io.read_json(args.host))
    t = io.graph_from_dict(io.read_json(args.tree))
    try:
        result = embed_spanning_tree(g, t, _config(args))
    except PipelineError as exc:
        if args.out:
            io.write_atomic(args.out, io.dumps({"error": str(exc), "step": exc.step, "trace": exc.trace}))
        raise StepFailed(exc.step, str(exc)) from exc
    _emit(args, result.to_dict(), f"embedded {t.n}-vertex tree via {result.trace['route']}")
    return EXIT_OK


def cmd_verify(args) -> int:
    g = io.graph_from_dict(io.read_json(args.host))
    t = io.graph_from_dict(io.read_json(args.tree))
    mapping = io.read_json(args.map).get("map")
    if not isinstance(mapping, list):
        raise io.FormatError("map file has no 'map' list")
    ok, why = verify_embedding(g, t, [int(v) for v in mapping])
    print(f"valid: {str(ok).lower()} ({why})")
    return EXIT_OK if ok else EXIT_STEP


def cmd_cycle_factor(args) -> int:
    g = io.graph_from_dict(io.read_json(args.host))
    try:
        cycles, trace = cycle_factor_traced(g, args.k, _config(args))
    except PipelineError as exc:
        raise StepFailed(exc.step, str(exc)) from exc
    _emit(args, {"k": args.k, "cycles": io.paths_to_lists(cycles), "trace": trace}, f"{len(cycles)} cycles of length {args.k}")
    return EXIT_OK


def cmd_export_dot(args) -> int:
    data = io.read_json(args.input)
    source = io.read_json(args.graph) if args.graph else data.get("graph", data)
    g = io.graph_from_dict(source)
    paths = data.get("paths") or data.get("cycles") or []
    if isinstance(paths, dict):
        paths = list(paths.values())
    if data.get("cycles"):
        paths = [list(c) + [c[0]] for c in paths]
    text = io.to_dot(g, paths)
    if args.out:
        io.write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="treeroute", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("network", help="build, verify or apply a comparison network")
    s.add_argument("action", choices=("build", "verify", "apply"))
    s.add_argument("--builder", default="odd-even", help="odd-even | brickwall (default odd-even)")
    s.add_argument("--n", type=int, help="number of registers")
    s.add_argument("--in", dest="input", help="network JSON instead of a builder")
    s.add_argument("--mode", default="zero-one", choices=("zero-one", "perms"), help="verification oracle")
    s.add_argument("--perm", help="initial assignment for apply, e.g. 2,1,4,3")
    s.add_argument("--out", help="JSON output file")
    s.set_defaults(func=cmd_network)

    s = sub.add_parser("gadget", help="build and verify the comparator gadget")
    s.add_argument("--k", type=int, required=True, help="gadget size parameter (k ≡ 2 mod 4)")
    s.add_argument("--out", help="JSON output file")
    s.add_argument("--dot", help="DOT output with P1 and Q1 coloured")
    s.set_defaults(func=cmd_gadget)

    s = sub.add_parser("route", help="route a bijection through a routing template")
    s.add_argument("--registers", type=int, required=True)
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--builder", default="odd-even")
    s.add_argument("--phi", required=True, help="1-based images of A_1..A_n, e.g. 4,1,2,3")
    s.add_argument("--out", help="JSON output file")
    s.add_argument("--dot", help="DOT output, one colour per path")
    s.set_defaults(func=cmd_route)

    s = sub.add_parser("spectra", help="second eigenvalue report of a host graph")
    s.add_argument("--host", required=True, help="graph JSON")
    s.add_argument("--out", help="JSON output file")
    s.set_defaults(func=cmd_spectra)

    s = sub.add_parser("gen-host", help="random regular host graph")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"default {DEFAULT_SEED}")
    s.add_argument("--out", help="graph JSON output file")
    s.set_defaults(func=cmd_gen_host)

    s = sub.add_parser("gen-tree", help="target tree")
    s.add_argument("--kind", required=True, choices=TREE_KINDS)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--max-deg", type=int, default=3)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"default {DEFAULT_SEED}")
    s.add_argument("--out", help="graph JSON output file")
    s.set_defaults(func=cmd_gen_tree)

    s = sub.add_parser("embed", help="embed a spanning tree into a host")
    s.add_argument("--host", required=True)
    s.add_argument("--tree", required=True)
    s.add_argument("--config", help="flat key = value file of PipelineConfig fields")
    s.add_argument("--seed", type=int, help="overrides the config seed")
    s.add_argument("--out", help="embedding JSON output file")
    s.set_defaults(func=cmd_embed)

    s = sub.add_parser("verify", help="check an embedding map")
    s.add_argument("--host", required=True)
    s.add_argument("--tree", required=True)
    s.add_argument("--map", required=True, help="embedding JSON with a 'map' list")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("cycle-factor", help="partition a host into cycles of length k")
    s.add_argument("--host", required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--config", help="flat key = value file of PipelineConfig fields")
    s.add_argument("--seed", type=int, help="overrides the config seed")
    s.add_argument("--out", help="JSON output file")
    s.set_defaults(func=cmd_cycle_factor)

    s = sub.add_parser("export-dot", help="DOT rendering of a JSON artifact (graph, gadget, route, cycles)")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--graph", help="graph JSON for artifacts that carry none (cycle factors)")
    s.add_argument("--out", help="DOT file (stdout if omitted)")
    s.set_defaults(func=cmd_export_dot)
    return p


INPUT_ERRORS = (
    PreconditionError,
    io.FormatError,
    GraphError,
    GadgetError,
    NetworkError,
    TemplateError,
    OSError,
)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except StepFailed as exc:
        print(f"error: step {exc.step} failed: {exc}", file=sys.stderr)
        return EXIT_STEP
    except PipelineError as exc:
        print(f"error: step {exc.step} failed: {exc}", file=sys.stderr)
        return EXIT_STEP
    except (ConnectFailure, NoExtension) as exc:
        print(f"error: step failed: {exc}", file=sys.stderr)
        return EXIT_STEP
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
