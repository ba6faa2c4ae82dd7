from __future__ import annotations

from itertools import combinations
from typing import Dict, Iterator, List

import networkx as nx

from pzf_lab.core.errors import DisconnectedGraphError, InvalidParameterError
from pzf_lab.modules.graph_core.graph import Graph

ATLAS_MAX_N = 7


def is_connected(graph: Graph) -> bool:
    return nx.is_connected(graph.nx_graph)


def require_connected(graph: Graph) -> None:
    if not is_connected(graph):
        raise DisconnectedGraphError(
            f"Graph with {graph.n} vertices is disconnected; the process never completes"
        )


def eccentricities(graph: Graph) -> Dict[int, int]:
    require_connected(graph)
    return dict(nx.eccentricity(graph.nx_graph))


def radius(graph: Graph) -> int:
    require_connected(graph)
    return int(nx.radius(graph.nx_graph))


def center_vertices(graph: Graph) -> List[int]:
    """Vertices of minimum eccentricity in increasing order."""
    ecc = eccentricities(graph)
    best = min(ecc.values())
    return sorted(v for v, value in ecc.items() if value == best)


def connected_graphs(n: int, labeled: bool = True) -> Iterator[Graph]:
    """Every connected graph on ``n`` vertices.

    ``labeled=True`` enumerates edge subsets of K_n and keeps the connected ones;
    ``labeled=False`` yields one graph per isomorphism class from the atlas.
    """
    if n < 1:
        raise InvalidParameterError(f"n must be positive, got {n}")
    if not labeled:
        if n > ATLAS_MAX_N:
            raise InvalidParameterError(
                f"Isomorphism classes are available up to n={ATLAS_MAX_N}"
            )
        for atlas_graph in nx.graph_atlas_g():
            if atlas_graph.number_of_nodes() == n and nx.is_connected(atlas_graph):
                yield Graph.from_networkx(atlas_graph)
        return
    pairs = list(combinations(range(n), 2))
    for subset in range(1 << len(pairs)):
        # A connected graph needs at least n - 1 edges.
        if subset.bit_count() < n - 1:
            continue
        edges = [pairs[i] for i in range(len(pairs)) if subset >> i & 1]
        graph = Graph(n, edges)
        if is_connected(graph):
            yield graph


def is_path(graph: Graph) -> bool:
    return (
        graph.m == graph.n - 1
        and max(graph.degree, default=0) <= 2
        and is_connected(graph)
    )
