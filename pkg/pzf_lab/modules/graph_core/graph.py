from __future__ import annotations

import hashlib
from functools import cached_property
from typing import Iterable, List, Sequence, Tuple

import networkx as nx
import numpy as np

from pzf_lab.core.errors import (
    DuplicateEdgeError,
    InvalidParameterError,
    SelfLoopError,
    VertexRangeError,
)


class Graph:
    """Immutable simple undirected graph on vertices 0..n-1.

    Directed edges are numbered in CSR order: the edges leaving ``u`` occupy
    ``offsets[u]:offsets[u + 1]`` and follow ``adjacency[u]``. The forcing
    engine keys its per-edge random draws on this numbering.
    """

    def __init__(self, n: int, edges: Iterable[Tuple[int, int]]) -> None:
        if n < 1:
            raise InvalidParameterError(f"Graph needs at least one vertex, got n={n}")
        neighbors: List[set[int]] = [set() for _ in range(n)]
        for raw_u, raw_v in edges:
            u, v = int(raw_u), int(raw_v)
            if not (0 <= u < n and 0 <= v < n):
                raise VertexRangeError(f"Edge ({u}, {v}) outside vertex range 0..{n - 1}")
            if u == v:
                raise SelfLoopError(f"Self-loop at vertex {u}")
            if v in neighbors[u]:
                raise DuplicateEdgeError(f"Duplicate edge ({min(u, v)}, {max(u, v)})")
            neighbors[u].add(v)
            neighbors[v].add(u)
        self._n = n
        self._adjacency: Tuple[Tuple[int, ...], ...] = tuple(
            tuple(sorted(items)) for items in neighbors
        )
        self._degree: Tuple[int, ...] = tuple(len(items) for items in self._adjacency)

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> "Graph":
        relabeled = nx.convert_node_labels_to_integers(graph, ordering="sorted")
        return cls(relabeled.number_of_nodes(), relabeled.edges())

    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        return sum(self._degree) // 2

    @property
    def adjacency(self) -> Tuple[Tuple[int, ...], ...]:
        return self._adjacency

    @property
    def degree(self) -> Tuple[int, ...]:
        return self._degree

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self._adjacency[v]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.neighbor_masks[u] >> v & 1)

    def edges(self) -> List[Tuple[int, int]]:
        return [(u, v) for u in range(self._n) for v in self._adjacency[u] if u < v]

    @cached_property
    def neighbor_masks(self) -> Tuple[int, ...]:
        masks = []
        for items in self._adjacency:
            bits = 0
            for v in items:
                bits |= 1 << v
            masks.append(bits)
        return tuple(masks)

    @cached_property
    def offsets(self) -> np.ndarray:
        offsets = np.zeros(self._n + 1, dtype=np.int64)
        np.cumsum(self._degree, out=offsets[1:])
        offsets.setflags(write=False)
        return offsets

    @cached_property
    def edge_sources(self) -> np.ndarray:
        sources = np.repeat(np.arange(self._n, dtype=np.int64), self._degree)
        sources.setflags(write=False)
        return sources

    @cached_property
    def edge_targets(self) -> np.ndarray:
        targets = np.fromiter(
            (v for items in self._adjacency for v in items),
            dtype=np.int64,
            count=2 * self.m,
        )
        targets.setflags(write=False)
        return targets

    @cached_property
    def degree_array(self) -> np.ndarray:
        # Isolated vertices never force, a unit divisor keeps the step division finite.
        degrees = np.maximum(np.asarray(self._degree, dtype=np.float64), 1.0)
        degrees.setflags(write=False)
        return degrees

    def directed_edge_index(self, u: int, v: int) -> int:
        row = self._adjacency[u]
        position = int(np.searchsorted(row, v))
        if position >= len(row) or row[position] != v:
            raise InvalidParameterError(f"({u}, {v}) is not an edge")
        return int(self.offsets[u]) + position

    @cached_property
    def nx_graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self._n))
        graph.add_edges_from(self.edges())
        return nx.freeze(graph)

    @cached_property
    def fingerprint(self) -> str:
        digest = hashlib.sha256()
        digest.update(f"{self._n} {self.m}".encode())
        for u, v in self.edges():
            digest.update(f";{u} {v}".encode())
        return digest.hexdigest()[:16]

    def induced_subgraph(self, vertices: Sequence[int]) -> Tuple["Graph", Tuple[int, ...]]:
        """Return ``G[vertices]`` relabeled 0..k-1 and the original labels in order."""
        labels = tuple(sorted(set(int(v) for v in vertices)))
        if not labels:
            raise InvalidParameterError("Induced subgraph needs at least one vertex")
        index = {v: i for i, v in enumerate(labels)}
        edges = [
            (index[u], index[v])
            for u in labels
            for v in self._adjacency[u]
            if u < v and v in index
        ]
        return Graph(len(labels), edges), labels

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self._adjacency == other._adjacency

    def __hash__(self) -> int:
        return hash((self._n, self._adjacency))

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={self.m})"

    def __getstate__(self) -> dict:
        # Cached numpy and networkx views are rebuilt lazily after unpickling.
        return {"_n": self._n, "_adjacency": self._adjacency, "_degree": self._degree}

    def __setstate__(self, state: dict) -> None:
        self.__dict__.update(state)
