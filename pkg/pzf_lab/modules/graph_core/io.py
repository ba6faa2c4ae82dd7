"""Edge-list text format: header "n m" then m lines "u v", 0-indexed."""

from __future__ import annotations

from pathlib import Path
from typing import List, Tuple

from pzf_lab.core.errors import (
    DuplicateEdgeError,
    MalformedLineError,
    SelfLoopError,
    VertexRangeError,
)
from pzf_lab.modules.graph_core.graph import Graph


def _parse_pair(line: str, lineno: int) -> Tuple[int, int]:
    tokens = line.split()
    if len(tokens) != 2:
        raise MalformedLineError(f"Line {lineno}: expected two integers, got '{line}'")
    try:
        return int(tokens[0]), int(tokens[1])
    except ValueError as exc:
        raise MalformedLineError(f"Line {lineno}: expected two integers, got '{line}'") from exc


def parse_graph(text: str) -> Graph:
    lines = [
        (lineno, line.strip())
        for lineno, line in enumerate(text.splitlines(), start=1)
        if line.strip()
    ]
    if not lines:
        raise MalformedLineError("Empty graph text: missing 'n m' header")
    header_lineno, header = lines[0]
    n, m = _parse_pair(header, header_lineno)
    if n < 1 or m < 0:
        raise MalformedLineError(f"Line {header_lineno}: invalid header '{header}'")
    body = lines[1:]
    if len(body) != m:
        raise MalformedLineError(f"Header declares {m} edges but found {len(body)} edge lines")
    edges: List[Tuple[int, int]] = []
    seen: set[Tuple[int, int]] = set()
    for lineno, line in body:
        u, v = _parse_pair(line, lineno)
        if not (0 <= u < n and 0 <= v < n):
            raise VertexRangeError(f"Line {lineno}: vertex out of range 0..{n - 1} in '{line}'")
        if u == v:
            raise SelfLoopError(f"Line {lineno}: self-loop at vertex {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise DuplicateEdgeError(f"Line {lineno}: duplicate edge {key}")
        seen.add(key)
        edges.append(key)
    return Graph(n, edges)


def serialize_graph(graph: Graph) -> str:
    lines = [f"{graph.n} {graph.m}"]
    lines.extend(f"{u} {v}" for u, v in graph.edges())
    return "\n".join(lines)


def read_graph(path: Path) -> Graph:
    return parse_graph(Path(path).read_text(encoding="utf-8"))


def write_graph(path: Path, graph: Graph) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(serialize_graph(graph) + "\n", encoding="utf-8")
    return path
