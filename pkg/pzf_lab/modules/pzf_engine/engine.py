from __future__ import annotations

import logging
from typing import Callable, List, Optional, Tuple

import numpy as np

from pzf_lab.config import MAX_STEPS_FACTOR
from pzf_lab.core.contracts import ForcingRule
from pzf_lab.core.errors import InvalidParameterError, InvalidStartError, PreconditionError
from pzf_lab.core.types import ColorState, Trajectory
from pzf_lab.modules.graph_core.graph import Graph
from pzf_lab.modules.graph_core.topology import require_connected
from pzf_lab.modules.pzf_engine.randomness import EdgeStream
from pzf_lab.modules.pzf_engine.schemas import CoupledRun

logger = logging.getLogger(__name__)


class ProbabilisticRule:
    """Blue u forces white neighbor v with probability |N[u] ∩ B| / deg u."""

    rule_id = "pzf"

    def edge_probabilities(self, graph: Graph, blue: np.ndarray) -> np.ndarray:
        sources, targets = graph.edge_sources, graph.edge_targets
        blue_degree = np.bincount(
            sources, weights=blue[targets].astype(np.float64), minlength=graph.n
        )
        return (1.0 + blue_degree[sources]) / graph.degree_array[sources]


class ThinnedRule:
    """Scales another rule's probabilities by ``factor`` in [0, 1]."""

    def __init__(self, base: ForcingRule, factor: float) -> None:
        if not 0.0 <= factor <= 1.0:
            raise InvalidParameterError(f"factor must lie in [0, 1], got {factor}")
        self.base = base
        self.factor = factor
        self.rule_id = f"{base.rule_id}*{factor:g}"

    def edge_probabilities(self, graph: Graph, blue: np.ndarray) -> np.ndarray:
        return self.base.edge_probabilities(graph, blue) * self.factor


PZF_RULE = ProbabilisticRule()


def default_max_steps(graph: Graph) -> int:
    return MAX_STEPS_FACTOR * graph.n


def advance(
    graph: Graph,
    blue: np.ndarray,
    draws: np.ndarray,
    rule: ForcingRule = PZF_RULE,
) -> np.ndarray:
    """One synchronous step: v joins when some blue u has X_{(u,v),t} < P[u -> v]."""
    if graph.m == 0:
        return blue.copy()
    sources, targets = graph.edge_sources, graph.edge_targets
    active = blue[sources] & ~blue[targets]
    probabilities = rule.edge_probabilities(graph, blue)
    hits = targets[active & (draws < probabilities)]
    nxt = blue.copy()
    nxt[hits] = True
    return nxt


def force_probability(graph: Graph, state: ColorState, u: int, v: int) -> float:
    if not state.contains(u):
        raise PreconditionError(f"Forcing vertex {u} is not blue")
    if state.contains(v):
        raise PreconditionError(f"Target vertex {v} is already blue")
    if not graph.has_edge(u, v):
        raise PreconditionError(f"({u}, {v}) is not an edge")
    blue_neighbors = (graph.neighbor_masks[u] & state.bits).bit_count()
    return (1 + blue_neighbors) / graph.degree[u]


def blue_probability(graph: Graph, state: ColorState, v: int) -> float:
    if state.contains(v):
        raise PreconditionError(f"Vertex {v} is already blue")
    stay_white = 1.0
    for u in graph.neighbors(v):
        if state.contains(u):
            stay_white *= 1.0 - force_probability(graph, state, u, v)
    return min(max(1.0 - stay_white, 0.0), 1.0)


def expected_increase(graph: Graph, state: ColorState) -> float:
    """Expected number of white vertices that turn blue in one step."""
    return sum(
        blue_probability(graph, state, v)
        for v in range(graph.n)
        if not state.contains(v)
    )


def _check_start(graph: Graph, state: ColorState) -> None:
    if state.n != graph.n:
        raise InvalidStartError(f"State width {state.n} does not match graph order {graph.n}")
    if state.is_empty:
        raise InvalidStartError("Start set must be nonempty")


def step(graph: Graph, state: ColorState, stream: EdgeStream, t: int = 1) -> ColorState:
    _check_start(graph, state)
    draws = stream.draws(t, 2 * graph.m)
    return ColorState.from_mask(advance(graph, state.to_mask(), draws))


def run_until(
    graph: Graph,
    start: np.ndarray,
    seed: int,
    max_steps: int,
    done: Callable[[np.ndarray], bool],
    rule: ForcingRule = PZF_RULE,
    record: Optional[List[np.ndarray]] = None,
    t0: int = 0,
) -> Tuple[Optional[int], np.ndarray]:
    """Step from ``start`` until ``done(blue)``; returns (steps or None, final mask).

    Draws for step ``k`` use counter ``t0 + k`` so callers can continue a stream.
    """
    stream = EdgeStream(seed)
    blue = start.copy()
    width = 2 * graph.m
    for t in range(max_steps + 1):
        if done(blue):
            return t, blue
        if t == max_steps:
            break
        blue = advance(graph, blue, stream.draws(t0 + t + 1, width), rule)
        if record is not None:
            record.append(blue)
    return None, blue


def propagation_time(graph: Graph, start: np.ndarray, seed: int, max_steps: int) -> Optional[int]:
    steps, _ = run_until(graph, start, seed, max_steps, lambda blue: bool(blue.all()))
    return steps


def run(
    graph: Graph,
    start: ColorState,
    seed: int,
    max_steps: Optional[int] = None,
) -> Trajectory:
    require_connected(graph)
    _check_start(graph, start)
    limit = default_max_steps(graph) if max_steps is None else max_steps
    masks: List[np.ndarray] = []
    steps, _ = run_until(
        graph, start.to_mask(), seed, limit, lambda blue: bool(blue.all()), record=masks
    )
    if steps is None:
        logger.warning("run seed=%d truncated after %d steps", seed, limit)
    states = [start] + [ColorState.from_mask(mask) for mask in masks]
    return Trajectory(seed=seed, states=states, terminated=steps is not None)


def _coupled(
    graph: Graph,
    lower: ColorState,
    upper: ColorState,
    seed: int,
    steps: int,
    lower_rule: ForcingRule,
) -> CoupledRun:
    _check_start(graph, lower)
    _check_start(graph, upper)
    stream = EdgeStream(seed)
    width = 2 * graph.m
    low, high = lower.to_mask(), upper.to_mask()
    low_states, high_states = [lower], [upper]
    first_violation = None if lower.issubset(upper) else 0
    for t in range(1, steps + 1):
        if low.all() and high.all():
            break
        draws = stream.draws(t, width)
        if not low.all():
            low = advance(graph, low, draws, lower_rule)
            low_states.append(ColorState.from_mask(low))
        if not high.all():
            high = advance(graph, high, draws, PZF_RULE)
            high_states.append(ColorState.from_mask(high))
        if first_violation is None and bool((low & ~high).any()):
            first_violation = t
    return CoupledRun(
        lower=Trajectory(seed=seed, states=low_states, terminated=bool(low.all())),
        upper=Trajectory(seed=seed, states=high_states, terminated=bool(high.all())),
        subset_ok=first_violation is None,
        first_violation=first_violation,
    )


def coupled_run(
    graph: Graph,
    s: ColorState,
    t: ColorState,
    seed: int,
    steps: int,
) -> CoupledRun:
    """Run from S and from T on identical draws; requires S ⊆ T."""
    if not s.issubset(t):
        raise InvalidStartError(f"Coupled run needs S ⊆ T, got S={s.label()} T={t.label()}")
    return _coupled(graph, s, t, seed, steps, PZF_RULE)


def coupled_rule_run(
    graph: Graph,
    start: ColorState,
    rule: ForcingRule,
    seed: int,
    steps: int,
) -> CoupledRun:
    """Run ``rule`` against the true process from the same start on identical draws.

    Any rule whose probabilities never exceed the true ones stays inside the
    true process on every path.
    """
    return _coupled(graph, start, start, seed, steps, rule)
