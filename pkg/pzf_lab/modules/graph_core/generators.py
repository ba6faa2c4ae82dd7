from __future__ import annotations

import logging
from typing import List, Optional, Tuple

import networkx as nx
from tenacity import RetryError, Retrying, retry_if_exception_type, stop_after_attempt

from pzf_lab.config import DEFAULT_SEED
from pzf_lab.core.errors import DisconnectedGraphError, InvalidParameterError
from pzf_lab.core.registry import FamilyRegistry
from pzf_lab.core.utils import derive_seed
from pzf_lab.modules.graph_core.graph import Graph
from pzf_lab.modules.graph_core.schemas import GraphFamilySpec
from pzf_lab.modules.graph_core.topology import is_connected

logger = logging.getLogger(__name__)


def path_graph(n: int) -> Graph:
    return Graph.from_networkx(nx.path_graph(n))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise InvalidParameterError(f"cycle requires n >= 3, got {n}")
    return Graph.from_networkx(nx.cycle_graph(n))


def complete_graph(n: int) -> Graph:
    return Graph.from_networkx(nx.complete_graph(n))


def star_graph(leaves: int) -> Graph:
    """Center 0 joined to leaves 1..leaves."""
    return Graph.from_networkx(nx.star_graph(leaves))


def spider_graph(legs: int, length: int) -> Graph:
    """Center 0 with ``legs`` paths of ``length`` vertices each."""
    edges: List[Tuple[int, int]] = []
    for leg in range(legs):
        previous = 0
        for step in range(length):
            vertex = 1 + leg * length + step
            edges.append((previous, vertex))
            previous = vertex
    return Graph(1 + legs * length, edges)


def star_chain_graph(r: int, s: int) -> Graph:
    """2r+1 stars of ``s`` vertices with centers 0..2r joined in a path.

    Leaves of star i are ``2r + 1 + i * (s - 1) + j`` for j < s - 1.
    """
    if r < 1 or s < 1:
        raise InvalidParameterError(f"star_chain requires r >= 1 and s >= 1, got r={r}, s={s}")
    stars = 2 * r + 1
    edges: List[Tuple[int, int]] = [(i, i + 1) for i in range(stars - 1)]
    for i in range(stars):
        for j in range(s - 1):
            edges.append((i, stars + i * (s - 1) + j))
    return Graph(stars * s, edges)


def gnp_graph(n: int, p: float, seed: Optional[int] = None, retries: int = 100) -> Graph:
    """Connected G(n, p) sample; attempt ``a > 0`` reseeds with ``derive_seed(seed, a)``."""
    base_seed = DEFAULT_SEED if seed is None else seed
    if not 0.0 < p <= 1.0:
        raise InvalidParameterError(f"gnp requires 0 < p <= 1, got p={p}")

    def _sample(attempt: int) -> Graph:
        attempt_seed = base_seed if attempt == 0 else derive_seed(base_seed, attempt)
        graph = Graph.from_networkx(nx.gnp_random_graph(n, p, seed=attempt_seed))
        if not is_connected(graph):
            logger.debug("gnp n=%d p=%s attempt %d disconnected", n, p, attempt)
            raise DisconnectedGraphError(f"G({n}, {p}) sample disconnected")
        return graph

    attempts = 0
    try:
        for attempt in Retrying(
            stop=stop_after_attempt(retries),
            retry=retry_if_exception_type(DisconnectedGraphError),
        ):
            with attempt:
                attempts = attempt.retry_state.attempt_number
                graph = _sample(attempts - 1)
    except RetryError as exc:
        raise DisconnectedGraphError(
            f"G({n}, {p}) seed={base_seed} stayed disconnected after {retries} samples"
        ) from exc
    if attempts > 1:
        logger.warning("gnp n=%d p=%s connected after %d samples", n, p, attempts)
    return graph


def build_family_registry(gnp_retries: int = 100) -> FamilyRegistry:
    registry = FamilyRegistry()
    registry.register("path", lambda n, **_: path_graph(n))
    registry.register("cycle", lambda n, **_: cycle_graph(n))
    registry.register("complete", lambda n, **_: complete_graph(n))
    registry.register("star", lambda leaves, **_: star_graph(leaves))
    registry.register("spider", lambda legs, length, **_: spider_graph(legs, length))
    registry.register("star_chain", lambda r, s, **_: star_chain_graph(r, s))
    registry.register(
        "gnp",
        lambda n, p, seed=None, **_: gnp_graph(n, p, seed=seed, retries=gnp_retries),
    )
    return registry


def generate(spec: GraphFamilySpec, registry: Optional[FamilyRegistry] = None) -> Graph:
    registry = registry or build_family_registry()
    return registry.resolve(spec.family, **spec.params())
