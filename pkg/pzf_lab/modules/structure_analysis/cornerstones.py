"""Cut vertices, disconnecting pairs and the balanced split value g."""

from __future__ import annotations

import logging
from typing import Iterator, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from pzf_lab.core.errors import InvalidParameterError
from pzf_lab.core.types import ColorState
from pzf_lab.modules.graph_core.graph import Graph
from pzf_lab.modules.graph_core.topology import require_connected
from pzf_lab.modules.pzf_engine.engine import expected_increase
from pzf_lab.modules.structure_analysis.schemas import (
    BoundaryProfile,
    CornerstoneReport,
    OneCornerstone,
    Split,
    TwoCornerstone,
)

logger = logging.getLogger(__name__)

BRUTE_FORCE_LIMIT = 20


def one_cornerstones(graph: Graph) -> List[int]:
    return sorted(nx.articulation_points(graph.nx_graph))


def _components(graph: Graph, removed: Sequence[int]) -> List[List[int]]:
    dropped = set(removed)
    remaining = graph.nx_graph.subgraph(v for v in range(graph.n) if v not in dropped)
    components = [sorted(part) for part in nx.connected_components(remaining)]
    return sorted(components, key=lambda part: part[0])


def _balanced(components: List[List[int]]) -> Split:
    """Split components into two sides minimizing the larger side (subset sum)."""
    sizes = [len(part) for part in components]
    total = sum(sizes)
    reach = np.zeros((len(sizes) + 1, total + 1), dtype=bool)
    reach[0, 0] = True
    for i, size in enumerate(sizes, start=1):
        reach[i] = reach[i - 1]
        reach[i, size:] |= reach[i - 1, : total + 1 - size]
    smaller = int(np.flatnonzero(reach[-1, : total // 2 + 1])[-1])
    s_set: List[int] = []
    t_set: List[int] = []
    remaining = smaller
    for i in range(len(sizes), 0, -1):
        if reach[i - 1, remaining]:
            t_set.extend(components[i - 1])
        else:
            s_set.extend(components[i - 1])
            remaining -= sizes[i - 1]
    return Split(value=total - smaller, s_set=sorted(s_set), t_set=sorted(t_set))


def cornerstone_split(graph: Graph, removed: Sequence[int]) -> Optional[Split]:
    """Best split of ``V - removed``, or None when the removal does not disconnect."""
    components = _components(graph, removed)
    if len(components) < 2:
        return None
    return _balanced(components)


def _default_split(graph: Graph, removed: Sequence[int]) -> Split:
    dropped = set(removed)
    rest = [v for v in range(graph.n) if v not in dropped]
    return Split(value=len(rest), s_set=[], t_set=rest)


def g_one(graph: Graph, v: int) -> int:
    split = cornerstone_split(graph, [v])
    return graph.n - 1 if split is None else split.value


def pair_eligible(graph: Graph, v: int, w: int) -> bool:
    """Adjacent or sharing a common neighbor."""
    return graph.has_edge(v, w) or bool(graph.neighbor_masks[v] & graph.neighbor_masks[w])


def g_two(graph: Graph, v: int, w: int) -> Optional[int]:
    if v == w:
        raise InvalidParameterError(f"g(v, w) needs two distinct vertices, got {v} twice")
    if not pair_eligible(graph, v, w):
        return None
    split = cornerstone_split(graph, [v, w])
    return graph.n - 2 if split is None else split.value


def eligible_pairs(graph: Graph) -> Iterator[Tuple[int, int]]:
    for v in range(graph.n):
        for w in range(v + 1, graph.n):
            if pair_eligible(graph, v, w):
                yield v, w


def best_cornerstone(graph: Graph) -> CornerstoneReport:
    """Global minimizer of g.

    Ties go to singles, then adjacent pairs, then distance-two pairs, then
    index order.
    """
    require_connected(graph)
    singles: List[OneCornerstone] = []
    pairs: List[TwoCornerstone] = []
    best_chosen: List[int] = []
    best_split: Optional[Split] = None
    best_rank: Tuple[int, int, int] = (graph.n + 1, 3, 2)
    best_is_cornerstone = False

    def consider(chosen: List[int], split: Optional[Split]) -> None:
        nonlocal best_chosen, best_split, best_rank, best_is_cornerstone
        candidate = split or _default_split(graph, chosen)
        distant = len(chosen) == 2 and not graph.has_edge(*chosen)
        rank = (candidate.value, len(chosen), int(distant))
        if rank < best_rank:
            best_chosen, best_split, best_rank = chosen, candidate, rank
            best_is_cornerstone = split is not None

    for v in range(graph.n):
        split = cornerstone_split(graph, [v])
        if split is not None:
            singles.append(OneCornerstone(vertex=v, g_value=split.value))
        consider([v], split)
    for v, w in eligible_pairs(graph):
        split = cornerstone_split(graph, [v, w])
        if split is not None:
            pairs.append(TwoCornerstone(pair=(v, w), g_value=split.value))
        consider([v, w], split)

    assert best_split is not None
    logger.debug("best cornerstone %s with g=%d", best_chosen, best_split.value)
    return CornerstoneReport(
        one_cornerstones=singles,
        two_cornerstones=pairs,
        chosen=best_chosen,
        value=best_split.value,
        s_set=best_split.s_set,
        t_set=best_split.t_set,
        is_cornerstone=best_is_cornerstone,
    )


def brute_force_g(graph: Graph, removed: Sequence[int]) -> int:
    """min over all 2-colorings (S, T) of V - removed with no S-T edge of max(|S|, |T|)."""
    dropped = set(removed)
    rest = [v for v in range(graph.n) if v not in dropped]
    if len(rest) > BRUTE_FORCE_LIMIT:
        raise InvalidParameterError(
            f"Brute force over {len(rest)} vertices exceeds limit {BRUTE_FORCE_LIMIT}"
        )
    index = {v: i for i, v in enumerate(rest)}
    edges = [(index[u], index[v]) for u, v in graph.edges() if u in index and v in index]
    best = len(rest)
    for side in range(1 << len(rest)):
        if any((side >> a & 1) != (side >> b & 1) for a, b in edges):
            continue
        size = side.bit_count()
        best = min(best, max(size, len(rest) - size))
    return best


def boundary_profile(graph: Graph, state: ColorState) -> BoundaryProfile:
    """Blue vertices with a white neighbor, white vertices with a blue neighbor."""
    bits = state.bits
    full = (1 << graph.n) - 1
    white = full & ~bits
    masks = graph.neighbor_masks
    active = [u for u in range(graph.n) if bits >> u & 1 and masks[u] & white]
    frontier = [v for v in range(graph.n) if white >> v & 1 and masks[v] & bits]
    return BoundaryProfile(
        active_blue=active,
        frontier=frontier,
        white_degree={u: (masks[u] & white).bit_count() for u in active},
    )


def double_increase_holds(graph: Graph, state: ColorState, tolerance: float = 1e-9) -> bool:
    """With at least 3 active blue and 3 frontier vertices: expected growth >= 2,
    or every active blue vertex but at most one has a single white neighbor and
    some white vertex touches all of them. Vacuously true otherwise."""
    profile = boundary_profile(graph, state)
    if len(profile.active_blue) < 3 or len(profile.frontier) < 3:
        return True
    if expected_increase(graph, state) >= 2.0 - tolerance:
        return True
    heavy = sum(1 for degree in profile.white_degree.values() if degree != 1)
    if heavy > 1:
        return False
    masks = graph.neighbor_masks
    return any(
        all(masks[w] >> u & 1 for u in profile.active_blue) for w in profile.frontier
    )
