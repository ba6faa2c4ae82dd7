from __future__ import annotations

from typing import Optional

from pzf_lab.config import AppConfig
from pzf_lab.core.types import ColorState
from pzf_lab.modules.graph_core.graph import Graph
from pzf_lab.modules.mc_estimator.estimator import estimate_ept, estimate_ept_graph, estimate_tail
from pzf_lab.modules.mc_estimator.schemas import EstimateResult, GraphEstimate, TailEstimate


class MonteCarloService:
    def __init__(self, config: AppConfig, workers: Optional[int] = None) -> None:
        self.config = config
        self.workers = workers or config.estimator.workers

    def _trials(self, trials: Optional[int]) -> int:
        return trials if trials is not None else self.config.estimator.default_trials

    def _max_steps(self, graph: Graph, max_steps: Optional[int]) -> int:
        return max_steps if max_steps is not None else self.config.max_steps_for(graph.n)

    def estimate(
        self,
        graph: Graph,
        start: ColorState,
        seed: int,
        trials: Optional[int] = None,
        max_steps: Optional[int] = None,
    ) -> EstimateResult:
        return estimate_ept(
            graph,
            start,
            self._trials(trials),
            seed,
            max_steps=self._max_steps(graph, max_steps),
            confidence=self.config.estimator.confidence,
            workers=self.workers,
        )

    def tail(
        self,
        graph: Graph,
        start: ColorState,
        t: int,
        seed: int,
        trials: Optional[int] = None,
    ) -> TailEstimate:
        return estimate_tail(
            graph,
            start,
            t,
            self._trials(trials),
            seed,
            confidence=self.config.estimator.confidence,
            workers=self.workers,
        )

    def estimate_graph(
        self,
        graph: Graph,
        seed: int,
        trials: Optional[int] = None,
        max_steps: Optional[int] = None,
    ) -> GraphEstimate:
        estimator = self.config.estimator
        return estimate_ept_graph(
            graph,
            self._trials(trials),
            seed,
            max_steps=self._max_steps(graph, max_steps),
            confidence=estimator.confidence,
            workers=self.workers,
            candidate_threshold=estimator.candidate_threshold,
            candidate_sample=estimator.candidate_sample,
        )
