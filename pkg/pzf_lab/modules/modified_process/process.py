"""Instrumented seven-step modified forcing process.

1. choose the vertex or pair minimizing g and its split (S, T)
2. start from {v}
3. vertex order is the natural index order
4. run the true process until N[v] (and N[v'] for a pair) is blue
5. keep only v, v' and their neighbors blue
6. run the true process on G[T] until at most |S| + 3 of T is white
7. each step, on G[T] and G[S] at once, the lowest-index blue vertex with
   k white neighbors forces each with probability 1 (k = 1) or 4/(3k)

Phase 4 draws on ``seed`` itself, so it replays the true process from {v}.
Phases 6 and 7 use streams derived from the run seed.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from pzf_lab.core.errors import StallError
from pzf_lab.core.types import ColorState
from pzf_lab.core.utils import bits_to_mask, derive_seed
from pzf_lab.modules.bounds.formulas import step7_constant
from pzf_lab.modules.graph_core.graph import Graph
from pzf_lab.modules.graph_core.topology import require_connected
from pzf_lab.modules.modified_process.schemas import (
    CorpusSummary,
    ModifiedRunRecord,
    PhaseStat,
    SupermartingaleTrace,
)
from pzf_lab.modules.pzf_engine.engine import advance, default_max_steps, run_until
from pzf_lab.modules.pzf_engine.randomness import EdgeStream
from pzf_lab.modules.structure_analysis.cornerstones import best_cornerstone
from pzf_lab.modules.structure_analysis.schemas import CornerstoneReport

logger = logging.getLogger(__name__)

PHASE6_STREAM = 1
PHASE7_T_STREAM = 2
PHASE7_S_STREAM = 3


class LowestIndexRule:
    """Only the lowest-index blue vertex with white neighbors forces."""

    rule_id = "lowest-index"

    def edge_probabilities(self, graph: Graph, blue: np.ndarray) -> np.ndarray:
        sources, targets = graph.edge_sources, graph.edge_targets
        probabilities = np.zeros(sources.shape[0], dtype=np.float64)
        white_degree = np.bincount(
            sources, weights=(~blue[targets]).astype(np.float64), minlength=graph.n
        )
        eligible = np.flatnonzero(blue & (white_degree > 0))
        if eligible.size == 0:
            return probabilities
        u = int(eligible[0])
        k = int(white_degree[u])
        probability = 1.0 if k == 1 else 4.0 / (3.0 * k)
        probabilities[graph.offsets[u] : graph.offsets[u + 1]] = probability
        return probabilities


PHASE7_RULE = LowestIndexRule()


def has_frontier(graph: Graph, blue: np.ndarray) -> bool:
    if graph.m == 0:
        return False
    return bool((blue[graph.edge_sources] & ~blue[graph.edge_targets]).any())


def phase7_step(graph: Graph, state: ColorState, stream: EdgeStream, t: int = 1) -> ColorState:
    """One phase-7 step on an induced subgraph; identity when nothing can force."""
    draws = stream.draws(t, 2 * graph.m)
    return ColorState.from_mask(advance(graph, state.to_mask(), draws, PHASE7_RULE))


def _closed_neighborhood(graph: Graph, vertices: Sequence[int]) -> int:
    bits = 0
    for v in vertices:
        bits |= 1 << v | graph.neighbor_masks[v]
    return bits


class _Side:
    def __init__(
        self, graph: Graph, labels: Tuple[int, ...], blue_bits: int, stream: EdgeStream
    ) -> None:
        self.graph = graph
        self.labels = labels
        self.blue = np.array([bool(blue_bits >> v & 1) for v in labels], dtype=bool)
        self.stream = stream
        self.finished_at = 0

    @property
    def whites(self) -> int:
        return int((~self.blue).sum())

    @property
    def done(self) -> bool:
        return bool(self.blue.all())


def _induced(
    graph: Graph, vertices: List[int], blue_bits: int, stream: EdgeStream
) -> Optional[_Side]:
    if not vertices:
        return None
    sub, labels = graph.induced_subgraph(vertices)
    return _Side(sub, labels, blue_bits, stream)


def run_modified(
    graph: Graph,
    seed: int,
    strict: bool = False,
    max_steps: Optional[int] = None,
    report: Optional[CornerstoneReport] = None,
) -> ModifiedRunRecord:
    require_connected(graph)
    report = report or best_cornerstone(graph)
    limit = default_max_steps(graph) if max_steps is None else max_steps
    chosen, s_set, t_set = report.chosen, report.s_set, report.t_set
    record = {
        "chosen": chosen,
        "g_value": report.value,
        "s_set": s_set,
        "t_set": t_set,
        "seed": seed,
    }

    def stall(phase: int, diagnostic: str, **steps: int) -> ModifiedRunRecord:
        logger.error("modified run seed=%d stalled in phase %d: %s", seed, phase, diagnostic)
        if strict:
            raise StallError(f"Phase {phase} stalled: {diagnostic}")
        total = sum(steps.values())
        return ModifiedRunRecord(
            **record,
            **steps,
            total_steps=total,
            stalled=True,
            stall_phase=phase,
            diagnostic=diagnostic,
        )

    goal = _closed_neighborhood(graph, chosen)
    goal_mask = bits_to_mask(goal, graph.n)
    phase4, _ = run_until(
        graph,
        bits_to_mask(1 << chosen[0], graph.n),
        seed,
        limit,
        lambda blue: bool(blue[goal_mask].all()),
    )
    if phase4 is None:
        return stall(4, f"neighborhood of {chosen} not blue after {limit} steps")
    logger.debug("phase 4 finished after %d steps", phase4)

    # Phase 5: everything outside the closed neighborhoods turns white again.
    streams = EdgeStream(seed)
    t_side = _induced(graph, t_set, goal, streams.child(PHASE7_T_STREAM))
    s_side = _induced(graph, s_set, goal, streams.child(PHASE7_S_STREAM))

    threshold = len(s_set) + 3
    phase6 = 0
    if t_side is not None and t_side.whites > threshold:
        steps, blue = run_until(
            t_side.graph,
            t_side.blue,
            streams.child(PHASE6_STREAM).seed,
            limit,
            lambda blue: int((~blue).sum()) <= threshold or not has_frontier(t_side.graph, blue),
        )
        t_side.blue = blue
        if steps is None:
            return stall(
                6,
                f"G[T] kept more than {threshold} whites for {limit} steps",
                phase4_steps=phase4,
                phase6_steps=limit,
            )
        phase6 = steps
        if t_side.whites > threshold:
            return stall(
                6,
                f"G[T] has {t_side.whites} whites and no blue-white edge",
                phase4_steps=phase4,
                phase6_steps=phase6,
            )
    logger.debug("phase 6 finished after %d steps", phase6)

    sides = [side for side in (t_side, s_side) if side is not None]
    phase7 = 0
    while not all(side.done for side in sides):
        blocked = [
            side
            for side in sides
            if not side.done and not has_frontier(side.graph, side.blue)
        ]
        if blocked:
            return stall(
                7,
                f"side {list(blocked[0].labels)} has whites and no blue-white edge",
                phase4_steps=phase4,
                phase6_steps=phase6,
                phase7_steps=phase7,
            )
        if phase7 >= limit:
            return stall(
                7,
                f"not finished after {limit} steps",
                phase4_steps=phase4,
                phase6_steps=phase6,
                phase7_steps=phase7,
            )
        phase7 += 1
        for side in sides:
            if side.done:
                continue
            draws = side.stream.draws(phase7, 2 * side.graph.m)
            side.blue = advance(side.graph, side.blue, draws, PHASE7_RULE)
            if side.done:
                side.finished_at = phase7

    return ModifiedRunRecord(
        **record,
        phase4_steps=phase4,
        phase6_steps=phase6,
        phase7_steps=phase7,
        phase7_t_steps=t_side.finished_at if t_side else 0,
        phase7_s_steps=s_side.finished_at if s_side else 0,
        total_steps=phase4 + phase6 + phase7,
    )


def _corpus_worker(
    index: int, graph: Graph, seed: int, report: CornerstoneReport, max_steps: Optional[int]
) -> ModifiedRunRecord:
    return run_modified(graph, derive_seed(seed, index), max_steps=max_steps, report=report)


def run_corpus(
    graph: Graph,
    runs: int,
    seed: int,
    workers: int = 1,
    max_steps: Optional[int] = None,
) -> List[ModifiedRunRecord]:
    """``runs`` modified runs; run ``i`` uses ``derive_seed(seed, i)``."""
    report = best_cornerstone(graph)
    worker = partial(_corpus_worker, graph=graph, seed=seed, report=report, max_steps=max_steps)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(worker, range(runs), chunksize=64))
    return [worker(index) for index in range(runs)]


def records_frame(records: Sequence[ModifiedRunRecord]) -> pd.DataFrame:
    columns = [
        "seed",
        "phase4_steps",
        "phase6_steps",
        "phase7_steps",
        "phase7_t_steps",
        "phase7_s_steps",
        "total_steps",
        "stalled",
    ]
    return pd.DataFrame(
        [record.model_dump(include=set(columns)) for record in records], columns=columns
    )


def summarize_corpus(records: Sequence[ModifiedRunRecord], seed: int) -> CorpusSummary:
    frame = records_frame(records)
    first = records[0]

    def stat(column: str) -> PhaseStat:
        values = frame[column].astype(float)
        sem = float(values.sem()) if len(values) > 1 else 0.0
        return PhaseStat(mean=float(values.mean()), std_error=sem)

    return CorpusSummary(
        runs=len(records),
        seed=seed,
        chosen=first.chosen,
        s_size=len(first.s_set),
        t_size=len(first.t_set),
        stalled_runs=int(frame["stalled"].sum()),
        phase4=stat("phase4_steps"),
        phase6=stat("phase6_steps"),
        phase7=stat("phase7_steps"),
        total=stat("total_steps"),
    )


def phase7_supermartingale_trace(
    graph: Graph,
    start: ColorState,
    seed: int,
    runs: int,
    horizon: int,
) -> SupermartingaleTrace:
    """Batch means of C^(min(t, tau) - X_min(t, tau)) for t = 0..horizon.

    X is the blue count; tau is the step at which ``graph`` turns fully blue
    under the phase-7 rule from ``start``.
    """
    constant = step7_constant()
    width = 2 * graph.m
    values = np.empty((runs, horizon + 1), dtype=np.float64)
    for run in range(runs):
        stream = EdgeStream(seed).child(run)
        blue = start.to_mask()
        clock = 0
        values[run, 0] = constant ** (clock - int(blue.sum()))
        for t in range(1, horizon + 1):
            if not blue.all():
                blue = advance(graph, blue, stream.draws(t, width), PHASE7_RULE)
                clock = t
            values[run, t] = constant ** (clock - int(blue.sum()))
    std_errors = (
        values.std(axis=0, ddof=1) / np.sqrt(runs) if runs > 1 else np.zeros(horizon + 1)
    )
    return SupermartingaleTrace(
        constant=constant,
        runs=runs,
        means=values.mean(axis=0).tolist(),
        std_errors=std_errors.tolist(),
    )
