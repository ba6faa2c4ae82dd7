"""Seeded Monte Carlo estimates of propagation time.

Trial ``i`` always runs on ``derive_seed(seed, i)`` and results are gathered in
trial order, so estimates are bit-identical for any worker count.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from pzf_lab.core.errors import InvalidParameterError, InvalidStartError
from pzf_lab.core.types import ColorState
from pzf_lab.core.utils import derive_seed
from pzf_lab.modules.graph_core.graph import Graph
from pzf_lab.modules.graph_core.topology import center_vertices, require_connected
from pzf_lab.modules.mc_estimator.schemas import EstimateResult, GraphEstimate, TailEstimate
from pzf_lab.modules.pzf_engine.engine import default_max_steps, propagation_time

logger = logging.getLogger(__name__)

CHUNK_SIZE = 1024
TRUNCATED = -1

Chunk = Tuple[Graph, np.ndarray, int, int, int, int]


def _times_worker(chunk: Chunk) -> np.ndarray:
    graph, start, seed, first, count, max_steps = chunk
    times = np.empty(count, dtype=np.int64)
    for offset in range(count):
        steps = propagation_time(graph, start, derive_seed(seed, first + offset), max_steps)
        times[offset] = TRUNCATED if steps is None else steps
    return times


def _validate(graph: Graph, start: ColorState, trials: int) -> None:
    require_connected(graph)
    if start.n != graph.n:
        raise InvalidStartError(f"Start width {start.n} does not match graph order {graph.n}")
    if start.is_empty:
        raise InvalidStartError("Start set must be nonempty")
    if trials < 1:
        raise InvalidParameterError(f"trials must be at least 1, got {trials}")


def simulate_times(
    graph: Graph,
    start: ColorState,
    trials: int,
    seed: int,
    max_steps: Optional[int] = None,
    workers: int = 1,
) -> np.ndarray:
    """Propagation time of each trial in trial order; -1 marks a truncated trial."""
    _validate(graph, start, trials)
    limit = default_max_steps(graph) if max_steps is None else max_steps
    mask = start.to_mask()
    chunks: List[Chunk] = [
        (graph, mask, seed, first, min(CHUNK_SIZE, trials - first), limit)
        for first in range(0, trials, CHUNK_SIZE)
    ]
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_times_worker, chunks))
    else:
        parts = [_times_worker(chunk) for chunk in chunks]
    return np.concatenate(parts)


def summarize(
    times: np.ndarray, seed: int, max_steps: int, confidence: float = 0.95
) -> EstimateResult:
    """Normal-approximation interval; truncated trials count as ``max_steps``."""
    truncated = int((times == TRUNCATED).sum())
    observed = np.where(times == TRUNCATED, max_steps, times).astype(np.float64)
    trials = int(observed.size)
    mean = float(np.mean(observed))
    std_dev = float(np.std(observed, ddof=1)) if trials > 1 else 0.0
    half_width = float(stats.norm.ppf(0.5 + confidence / 2.0)) * std_dev / np.sqrt(trials)
    if truncated:
        logger.warning(
            "%d of %d trials hit max_steps=%d; estimate marked invalid",
            truncated,
            trials,
            max_steps,
        )
    return EstimateResult(
        mean=mean,
        std_dev=std_dev,
        trials=trials,
        ci_low=mean - half_width,
        ci_high=mean + half_width,
        confidence=confidence,
        seed=seed,
        max_steps=max_steps,
        truncated=truncated,
        valid=truncated == 0,
    )


def estimate_ept(
    graph: Graph,
    start: ColorState,
    trials: int,
    seed: int,
    max_steps: Optional[int] = None,
    confidence: float = 0.95,
    workers: int = 1,
) -> EstimateResult:
    limit = default_max_steps(graph) if max_steps is None else max_steps
    times = simulate_times(graph, start, trials, seed, limit, workers)
    return summarize(times, seed, limit, confidence)


def _wilson(count: int, trials: int, confidence: float) -> Tuple[float, float]:
    interval = stats.binomtest(count, trials).proportion_ci(
        confidence_level=confidence, method="wilson"
    )
    return float(interval.low), float(interval.high)


def estimate_tail(
    graph: Graph,
    start: ColorState,
    t: int,
    trials: int,
    seed: int,
    confidence: float = 0.95,
    workers: int = 1,
) -> TailEstimate:
    """Estimate 1 - P^(t)(G, S): the chance the process is still running at step t."""
    if t < 0:
        raise InvalidParameterError(f"t must be nonnegative, got {t}")
    times = simulate_times(graph, start, trials, seed, max_steps=t, workers=workers)
    count = int((times == TRUNCATED).sum())
    low, high = _wilson(count, trials, confidence)
    return TailEstimate(
        t=t,
        value=count / trials,
        ci_low=low,
        ci_high=high,
        trials=trials,
        confidence=confidence,
        seed=seed,
    )


def tail_curve(times: np.ndarray, horizon: int) -> np.ndarray:
    """Empirical tail 1 - P^(l) for l = 0..horizon from completed trial times."""
    if (times == TRUNCATED).any():
        raise InvalidParameterError("tail_curve needs untruncated trial times")
    return np.array([float(np.mean(times > step)) for step in range(horizon + 1)])


def candidate_starts(
    graph: Graph, seed: int, threshold: int = 64, sample: int = 8
) -> Tuple[List[int], bool]:
    """All vertices for small graphs, else one center vertex plus a seeded sample."""
    if graph.n <= threshold:
        return list(range(graph.n)), False
    center = center_vertices(graph)[0]
    others = np.array([v for v in range(graph.n) if v != center], dtype=np.int64)
    rng = np.random.default_rng(derive_seed(seed))
    picked = rng.choice(others, size=min(sample, others.size), replace=False)
    return sorted({center, *(int(v) for v in picked)}), True


def estimate_ept_graph(
    graph: Graph,
    trials_per_vertex: int,
    seed: int,
    max_steps: Optional[int] = None,
    confidence: float = 0.95,
    workers: int = 1,
    candidate_threshold: int = 64,
    candidate_sample: int = 8,
    candidates: Optional[Sequence[int]] = None,
) -> GraphEstimate:
    """Minimum-mean singleton start; vertex ``v`` runs on ``derive_seed(seed, v)``."""
    restricted = False
    if candidates is None:
        candidates, restricted = candidate_starts(
            graph, seed, candidate_threshold, candidate_sample
        )
    if restricted:
        logger.info("estimating %d of %d candidate starts", len(candidates), graph.n)
    best: Optional[EstimateResult] = None
    best_vertex = -1
    for v in candidates:
        result = estimate_ept(
            graph,
            ColorState.of(graph.n, [v]),
            trials_per_vertex,
            derive_seed(seed, v),
            max_steps=max_steps,
            confidence=confidence,
            workers=workers,
        )
        if best is None or result.mean < best.mean:
            best, best_vertex = result, v
    assert best is not None
    return GraphEstimate(
        result=best,
        vertex=best_vertex,
        candidates=list(candidates),
        restricted=restricted,
    )
