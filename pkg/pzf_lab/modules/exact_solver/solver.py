"""Exact expected propagation times over the monotone blue-set state space.

States are integer bitsets. Every transition only adds vertices, so solving
states in decreasing popcount order sees all strict supersets first and the
self-loop is removed algebraically:

    E[B] = (1 + sum_{A != {}} P(B -> B | A) * E[B | A]) / (1 - P(B -> B))
"""

from __future__ import annotations

import logging
from typing import Dict, List, Optional, Tuple

import numpy as np

from pzf_lab.core.errors import (
    InvalidParameterError,
    InvalidStartError,
    PreconditionError,
    SolverCapExceededError,
)
from pzf_lab.core.types import ColorState
from pzf_lab.modules.exact_solver.schemas import ExactTable, ReachProbability, ThrottlingResult
from pzf_lab.modules.graph_core.graph import Graph
from pzf_lab.modules.graph_core.topology import require_connected

logger = logging.getLogger(__name__)

DEFAULT_CAP = 16
HARD_CAP = 22
FRONTIER_CAP = 22
TIE_TOLERANCE = 1e-9


def check_cap(graph: Graph, cap: int = DEFAULT_CAP) -> None:
    if cap > HARD_CAP:
        raise InvalidParameterError(f"Solver cap {cap} is above the hard cap {HARD_CAP}")
    if graph.n > cap:
        raise SolverCapExceededError(graph.n, cap)


def popcounts(n: int) -> np.ndarray:
    counts = np.zeros(1, dtype=np.int8)
    for _ in range(n):
        counts = np.concatenate([counts, counts + 1])
    return counts


def frontier_probabilities(graph: Graph, bits: int) -> Tuple[List[int], List[float]]:
    """White vertices with a blue neighbor and their one-step blue probabilities."""
    masks = graph.neighbor_masks
    degree = graph.degree
    force: Dict[int, float] = {}
    frontier: List[int] = []
    probabilities: List[float] = []
    for v in range(graph.n):
        if bits >> v & 1 or not masks[v] & bits:
            continue
        stay_white = 1.0
        for u in graph.neighbors(v):
            if not bits >> u & 1:
                continue
            if u not in force:
                force[u] = (1 + (masks[u] & bits).bit_count()) / degree[u]
            stay_white *= 1.0 - force[u]
        frontier.append(v)
        probabilities.append(min(max(1.0 - stay_white, 0.0), 1.0))
    return frontier, probabilities


def _outcomes(
    graph: Graph, bits: int, frontier_cap: int = FRONTIER_CAP
) -> Tuple[np.ndarray, np.ndarray]:
    """Next-state bitsets and their probabilities, expanded by doubling."""
    frontier, probabilities = frontier_probabilities(graph, bits)
    forced = bits
    random_part = []
    for v, p in zip(frontier, probabilities):
        if p >= 1.0:
            forced |= 1 << v
        else:
            random_part.append((v, p))
    if len(random_part) > frontier_cap:
        raise InvalidParameterError(
            f"State {hex(bits)} has {len(random_part)} random frontier vertices, cap is {frontier_cap}"
        )
    states = np.array([forced], dtype=np.int64)
    weights = np.ones(1, dtype=np.float64)
    for v, p in random_part:
        states = np.concatenate([states, states | (1 << v)])
        weights = np.concatenate([weights * (1.0 - p), weights * p])
    return states, weights


def transition_distribution(graph: Graph, state: ColorState) -> List[Tuple[ColorState, float]]:
    if state.is_empty:
        raise InvalidStartError("Transition distribution needs a nonempty blue set")
    if state.is_full:
        raise PreconditionError("All vertices are blue; the chain has absorbed")
    states, weights = _outcomes(graph, state.bits)
    order = np.argsort(states, kind="stable")
    return [
        (ColorState(n=graph.n, bits=int(states[i])), float(weights[i])) for i in order
    ]


def exact_ept_table(
    graph: Graph,
    cap: int = DEFAULT_CAP,
    start: Optional[ColorState] = None,
    target: Optional[ColorState] = None,
    frontier_cap: int = FRONTIER_CAP,
) -> ExactTable:
    """Solve E[B] for every nonempty B (or every superset of ``start``).

    States containing ``target`` (default: all of V) are absorbing with E = 0.
    """
    check_cap(graph, cap)
    require_connected(graph)
    n = graph.n
    full = (1 << n) - 1
    target_bits = full if target is None else target.bits
    start_bits = None if start is None else start.bits
    if start is not None and start.is_empty:
        raise InvalidStartError("Start set must be nonempty")

    counts = popcounts(n)
    order = np.argsort(-counts, kind="stable")
    if start_bits is not None:
        order = order[(order & start_bits) == start_bits]
    values = np.full(1 << n, np.nan, dtype=np.float64)
    for raw in order:
        bits = int(raw)
        if bits == 0:
            continue
        if bits & target_bits == target_bits:
            values[bits] = 0.0
            continue
        states, weights = _outcomes(graph, bits, frontier_cap)
        moved = states != bits
        stay = float(weights[~moved].sum())
        values[bits] = (1.0 + float(weights[moved] @ values[states[moved]])) / (1.0 - stay)
    values.setflags(write=False)
    logger.debug("solved %d states for graph %s", len(order), graph.fingerprint)
    return ExactTable(
        n=n,
        graph_hash=graph.fingerprint,
        values=values,
        target_bits=target_bits,
        start_bits=start_bits,
    )


def exact_ept(graph: Graph, start: ColorState, cap: int = DEFAULT_CAP) -> float:
    return exact_ept_table(graph, cap, start=start).ept(start)


def exact_ept_target(
    graph: Graph, start: ColorState, target: ColorState, cap: int = DEFAULT_CAP
) -> float:
    """Expected steps until every vertex of ``target`` is blue."""
    return exact_ept_table(graph, cap, start=start, target=target).ept(start)


def exact_ept_graph(
    graph: Graph,
    cap: int = DEFAULT_CAP,
    tolerance: float = TIE_TOLERANCE,
    table: Optional[ExactTable] = None,
) -> Tuple[float, int]:
    """ept(G) = min over singleton starts; ties go to the lowest vertex."""
    if table is None:
        table = exact_ept_table(graph, cap)
    singles = np.array([table.values[1 << v] for v in range(graph.n)])
    best = float(singles.min())
    vertex = int(np.flatnonzero(singles <= best + tolerance)[0])
    return float(singles[vertex]), vertex


def exact_throttling(
    graph: Graph,
    cap: int = DEFAULT_CAP,
    tolerance: float = TIE_TOLERANCE,
    table: Optional[ExactTable] = None,
) -> ThrottlingResult:
    """min over nonempty B of |B| + E[B]; ties go to the smallest bitset."""
    if table is None:
        table = exact_ept_table(graph, cap)
    scores = popcounts(graph.n).astype(np.float64) + table.values
    scores[0] = np.inf
    best = float(np.nanmin(scores))
    bits = int(np.flatnonzero(scores <= best + tolerance)[0])
    return ThrottlingResult(value=float(scores[bits]), argmin=ColorState(n=graph.n, bits=bits))


def reach_curve(
    graph: Graph,
    start: ColorState,
    target: Optional[ColorState],
    horizon: int,
    cap: int = DEFAULT_CAP,
) -> List[float]:
    """P^(t)(G, start, target) for t = 0..horizon via a sparse state distribution."""
    check_cap(graph, cap)
    if start.is_empty:
        raise InvalidStartError("Start set must be nonempty")
    if horizon < 0:
        raise InvalidParameterError(f"horizon must be nonnegative, got {horizon}")
    full = (1 << graph.n) - 1
    target_bits = full if target is None else target.bits
    transitions: Dict[int, Tuple[np.ndarray, np.ndarray]] = {}
    distribution: Dict[int, float] = {start.bits: 1.0}

    def reached() -> float:
        total = sum(p for bits, p in distribution.items() if bits & target_bits == target_bits)
        return min(max(total, 0.0), 1.0)

    curve = [reached()]
    for _ in range(horizon):
        nxt: Dict[int, float] = {}
        for bits, mass in distribution.items():
            if bits == full:
                nxt[bits] = nxt.get(bits, 0.0) + mass
                continue
            if bits not in transitions:
                transitions[bits] = _outcomes(graph, bits)
            states, weights = transitions[bits]
            for state, weight in zip(states.tolist(), weights.tolist()):
                nxt[state] = nxt.get(state, 0.0) + mass * weight
        distribution = nxt
        curve.append(reached())
    return curve


def exact_reach_probability(
    graph: Graph,
    start: ColorState,
    target: Optional[ColorState],
    t: int,
    cap: int = DEFAULT_CAP,
) -> ReachProbability:
    return ReachProbability(t=t, value=reach_curve(graph, start, target, t, cap)[t])


def tail_sum_ept(
    graph: Graph,
    start: ColorState,
    target: Optional[ColorState] = None,
    cap: int = DEFAULT_CAP,
    tolerance: float = 1e-12,
    max_horizon: int = 4096,
) -> float:
    """ept(G, S, T) as the sum over l >= 0 of 1 - P^(l)(G, S, T)."""
    horizon = 64
    while True:
        curve = reach_curve(graph, start, target, horizon, cap)
        if 1.0 - curve[-1] <= tolerance or horizon >= max_horizon:
            break
        horizon *= 2
    return float(sum(1.0 - value for value in curve))


def one_step_growth(graph: Graph, state: ColorState) -> Tuple[float, float]:
    """Expected |B'| after one step and the ceiling |B| + |B|^2."""
    if state.is_full:
        return float(state.size), float(state.size + state.size**2)
    _, probabilities = frontier_probabilities(graph, state.bits)
    return state.size + float(sum(probabilities)), float(state.size + state.size**2)
