"""JSON and DOT encodings shared by the command line.

Every JSON document carries ``"schema": "v1"``.  Output is written with
sorted keys and fixed separators so equal values give equal bytes, and files
are replaced atomically.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence

from .graph_core import Graph, graph_from_edges
from .sorting_network import ComparisonNetwork

SCHEMA = "v1"

# a small cycling palette for coloured paths in DOT output
PALETTE = ("red", "blue", "darkgreen", "orange", "purple", "brown", "magenta", "cyan")


class FormatError(ValueError):
    """Input that does not parse; ``line`` and ``column`` locate JSON syntax errors."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


def dumps(obj: dict) -> str:
    return json.dumps({"schema": SCHEMA, **obj}, sort_keys=True, separators=(",", ":")) + "\n"


def loads(text: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(data, dict):
        raise FormatError("expected a JSON object")
    schema = data.pop("schema", SCHEMA)
    if schema != SCHEMA:
        raise FormatError(f"unsupported schema {schema!r}")
    return data


def write_atomic(path: str | os.PathLike, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_json(path: str | os.PathLike) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text)


def graph_to_dict(g: Graph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.edges()]}


def graph_from_dict(data: dict) -> Graph:
    try:
        n = int(data["n"])
        edges = [(int(u), int(v)) for u, v in data["edges"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"not a graph document: {exc}") from None
    return graph_from_edges(n, edges)


def network_to_dict(net: ComparisonNetwork) -> dict:
    return net.to_dict()


def network_from_dict(data: dict) -> ComparisonNetwork:
    try:
        return ComparisonNetwork.from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"not a network document: {exc}") from None


def to_dot(
    g: Graph,
    paths: Sequence[Sequence[int]] = (),
    labels: dict[int, str] | None = None,
    name: str = "G",
) -> str:
    """Undirected DOT, one edge per line; edges on ``paths`` are coloured per path."""
    colour: dict[tuple[int, int], str] = {}
    for i, p in enumerate(paths):
        for a, b in zip(p, p[1:]):
            colour[(min(a, b), max(a, b))] = PALETTE[i % len(PALETTE)]
    lines = [f"graph {name} {{"]
    for v, text in sorted((labels or {}).items()):
        lines.append(f'  {v} [label="{text}"];')
    isolated = [v for v in range(g.n) if g.degree(v) == 0]
    for v in isolated:
        lines.append(f"  {v};")
    for u, v in g.edges():
        c = colour.get((u, v))
        lines.append(f"  {u} -- {v} [color={c}];" if c else f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def parse_int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise FormatError(f"expected comma-separated integers, got {text!r}") from None


def paths_to_lists(paths: Iterable[Sequence[int]]) -> list[list[int]]:
    return [list(map(int, p)) for p in paths]
