from __future__ import annotations

import logging
import math
from typing import Dict, List, Optional

from pzf_lab.config import DEFAULT_SEED
from pzf_lab.core.errors import InvalidParameterError
from pzf_lab.core.types import ColorState
from pzf_lab.modules.bounds.formulas import (
    lower_bound_loglog,
    path_ept_closed_form,
    throttling_lower_bound,
    upper_bounds,
)
from pzf_lab.modules.bounds.schemas import BoundDirection, BoundEntry, BoundMode, BoundReport
from pzf_lab.modules.exact_solver.solver import (
    DEFAULT_CAP,
    TIE_TOLERANCE,
    exact_ept_table,
    exact_throttling,
)
from pzf_lab.modules.graph_core.graph import Graph
from pzf_lab.modules.graph_core.topology import center_vertices, is_path, radius
from pzf_lab.modules.mc_estimator.estimator import estimate_ept

logger = logging.getLogger(__name__)

MODE_ALIASES: Dict[str, BoundMode] = {
    "exact": "exact",
    "mc": "monte_carlo",
    "monte_carlo": "monte_carlo",
}


def _entry(
    name: str,
    bound: float,
    observed: float,
    direction: BoundDirection,
    mode: BoundMode,
    tolerance: float,
) -> BoundEntry:
    if direction == "upper":
        satisfied = observed <= bound + tolerance
    elif direction == "lower":
        satisfied = observed >= bound - tolerance
    else:
        satisfied = abs(observed - bound) <= tolerance
    return BoundEntry(
        name=name,
        bound_value=bound,
        observed_value=observed,
        satisfied=satisfied,
        mode=mode,
        direction=direction,
        tolerance=tolerance,
    )


def radius_ratio(graph: Graph, observed: float) -> Optional[float]:
    """observed / (r * ln(n / r)); None when the denominator vanishes."""
    r = radius(graph)
    if r < 1 or graph.n <= r:
        return None
    return observed / (r * math.log(graph.n / r))


def verify_bounds(
    graph: Graph,
    start: ColorState,
    mode: str = "exact",
    cap: int = DEFAULT_CAP,
    trials: int = 10_000,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
    max_steps: Optional[int] = None,
    confidence: float = 0.95,
    se_multiplier: float = 4.0,
    tolerance: float = TIE_TOLERANCE,
    graph_id: Optional[str] = None,
) -> BoundReport:
    if mode not in MODE_ALIASES:
        raise InvalidParameterError(f"Unknown bound mode '{mode}' (expected exact or mc)")
    resolved = MODE_ALIASES[mode]
    n, k = graph.n, start.size
    entries: List[BoundEntry] = []
    standard_error: Optional[float] = None

    if resolved == "exact":
        table = exact_ept_table(graph, cap)
        observed = table.ept(start)
        slack = tolerance
        throttling = exact_throttling(graph, tolerance=tolerance, table=table)
        entries.append(
            _entry(
                "throttling_loglog_lower",
                throttling_lower_bound(n),
                throttling.value,
                "lower",
                resolved,
                slack,
            )
        )
    else:
        estimate = estimate_ept(
            graph,
            start,
            trials,
            seed,
            max_steps=max_steps,
            confidence=confidence,
            workers=workers,
        )
        if not estimate.valid:
            logger.warning("bounds estimate has %d truncated trials", estimate.truncated)
        observed = estimate.mean
        standard_error = estimate.standard_error
        slack = se_multiplier * standard_error

    linear, ratio_bound = upper_bounds(n, k)
    entries.insert(0, _entry("linear_upper", linear, observed, "upper", resolved, slack))
    entries.insert(1, _entry("e_ratio_upper", ratio_bound, observed, "upper", resolved, slack))
    entries.insert(
        2,
        _entry("loglog_lower", lower_bound_loglog(n, k), observed, "lower", resolved, slack),
    )
    if n >= 3 and is_path(graph) and k == 1 and start.vertices()[0] in center_vertices(graph):
        entries.append(
            _entry(
                "path_closed_form",
                path_ept_closed_form(n),
                observed,
                "equal",
                resolved,
                slack,
            )
        )

    r = radius(graph)
    return BoundReport(
        graph_id=graph_id or graph.fingerprint,
        n=n,
        start=start.label(),
        mode=resolved,
        observed=observed,
        standard_error=standard_error,
        entries=entries,
        diagnostics={"radius": float(r), "radius_ratio": radius_ratio(graph, observed)},
    )
