"""Flat text formats for graphs, hypergraphs, and colorings.

Formats (UTF-8, LF line endings):

* graph:      ``graph <n> <m>`` then m lines ``u v``
* hypergraph: ``hypergraph <n> <R> <m>`` then m lines of R vertex ids
* coloring:   lines ``u v c``
"""

from __future__ import annotations

from pathlib import Path

from .graphs import EdgeColoring, Graph, GraphError, LinearHypergraph


class FormatError(ValueError):
    pass


def _write(path, lines):
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8", newline="\n")


def write_graph(path, graph: Graph) -> None:
    lines = [f"graph {graph.n} {graph.m}"]
    lines += [f"{u} {v}" for u, v in graph.edges()]
    _write(path, lines)


def read_graph(path) -> Graph:
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError(f"{path}: empty graph file")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "graph":
        raise FormatError(f"{path}: expected 'graph <n> <m>' header, got {lines[0]!r}")
    n, m = int(head[1]), int(head[2])
    if len(lines) - 1 != m:
        raise FormatError(f"{path}: header promises {m} edges, found {len(lines) - 1}")
    edges = []
    for ln in lines[1:]:
        u, v = map(int, ln.split())
        edges.append((u, v))
    try:
        return Graph(n, edges)
    except GraphError as exc:
        raise FormatError(f"{path}: {exc}") from exc


def write_hypergraph(path, H: LinearHypergraph) -> None:
    lines = [f"hypergraph {H.n} {H.R} {H.m}"]
    lines += [" ".join(map(str, e)) for e in H.edges]
    _write(path, lines)


def read_hypergraph(path) -> LinearHypergraph:
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError(f"{path}: empty hypergraph file")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "hypergraph":
        raise FormatError(f"{path}: expected 'hypergraph <n> <R> <m>' header, got {lines[0]!r}")
    n, R, m = int(head[1]), int(head[2]), int(head[3])
    if len(lines) - 1 != m:
        raise FormatError(f"{path}: header promises {m} edges, found {len(lines) - 1}")
    edges = [tuple(map(int, ln.split())) for ln in lines[1:]]
    return LinearHypergraph(n, R, edges)


def write_coloring(path, coloring: EdgeColoring) -> None:
    lines = [f"{u} {v} {c}" for (u, v), c in sorted(coloring.colors.items())]
    _write(path, lines)


def read_coloring(path, t: int | None = None) -> EdgeColoring:
    text = Path(path).read_text(encoding="utf-8")
    colors = {}
    for ln in text.splitlines():
        if not ln.strip():
            continue
        parts = ln.split()
        if len(parts) != 3:
            raise FormatError(f"{path}: expected 'u v c' lines, got {ln!r}")
        u, v, c = map(int, parts)
        colors[(u, v)] = c
    if t is None:
        t = max(colors.values(), default=0)
    return EdgeColoring(t, colors)
