from __future__ import annotations

import logging
from typing import Optional, Tuple

from pzf_lab.config import AppConfig
from pzf_lab.core.errors import InvalidParameterError
from pzf_lab.core.types import ColorState
from pzf_lab.modules.exact_solver.schemas import ExactTable, ThrottlingResult
from pzf_lab.modules.exact_solver.solver import (
    exact_ept_graph,
    exact_ept_table,
    exact_throttling,
)
from pzf_lab.modules.graph_core.graph import Graph

logger = logging.getLogger(__name__)


class ExactSolverService:
    def __init__(self, config: AppConfig, cap_override: Optional[int] = None) -> None:
        self.config = config
        self.cap = self._resolve_cap(cap_override)

    def _resolve_cap(self, cap_override: Optional[int]) -> int:
        solver = self.config.solver
        if cap_override is None:
            return solver.default_cap
        if cap_override > solver.hard_cap:
            raise InvalidParameterError(
                f"--cap-override {cap_override} exceeds the hard cap {solver.hard_cap}"
            )
        if cap_override > solver.default_cap:
            logger.warning(
                "Exact-solver cap raised from %d to %d; runtime grows roughly 3^n",
                solver.default_cap,
                cap_override,
            )
        return cap_override

    def table(self, graph: Graph, start: Optional[ColorState] = None) -> ExactTable:
        return exact_ept_table(
            graph,
            cap=self.cap,
            start=start,
            frontier_cap=self.config.solver.frontier_cap,
        )

    def ept(self, graph: Graph, start: ColorState) -> float:
        return self.table(graph, start=start).ept(start)

    def ept_graph(self, graph: Graph, table: Optional[ExactTable] = None) -> Tuple[float, int]:
        return exact_ept_graph(
            graph,
            tolerance=self.config.solver.tolerance,
            table=table if table is not None else self.table(graph),
        )

    def throttling(self, graph: Graph) -> ThrottlingResult:
        return exact_throttling(
            graph, tolerance=self.config.solver.tolerance, table=self.table(graph)
        )
