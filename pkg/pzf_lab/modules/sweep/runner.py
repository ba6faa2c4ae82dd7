"""Parameter-grid sweeps of Monte Carlo ept with radius and bound ratios."""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional, Tuple

import pandas as pd

from pzf_lab import __version__
from pzf_lab.core.errors import InvalidParameterError
from pzf_lab.core.types import ColorState
from pzf_lab.core.utils import derive_seed
from pzf_lab.modules.bounds.formulas import lower_bound_loglog
from pzf_lab.modules.bounds.verification import radius_ratio
from pzf_lab.modules.graph_core.generators import build_family_registry, generate
from pzf_lab.modules.graph_core.schemas import FAMILY_PARAMS, PARAM_ALIASES, GraphFamilySpec
from pzf_lab.modules.graph_core.topology import center_vertices, radius
from pzf_lab.modules.mc_estimator.estimator import estimate_ept
from pzf_lab.modules.sweep.schemas import SWEEP_COLUMNS, SweepRow

logger = logging.getLogger(__name__)


def parse_grid(text: str) -> List[GraphFamilySpec]:
    """Expand "star_chain:r=2|4|8,s=8|16" into cells in row-major grid order."""
    family, _, body = text.strip().partition(":")
    family = family.strip()
    if family not in FAMILY_PARAMS:
        raise InvalidParameterError(f"Unknown graph family '{family}' in grid '{text}'")
    axes: Dict[str, List[str]] = {}
    for token in (item.strip() for item in body.split(",")):
        if not token:
            continue
        key, sep, values = token.partition("=")
        if not sep:
            raise InvalidParameterError(f"Grid axis '{token}' must look like name=v1|v2")
        key = PARAM_ALIASES.get(key.strip(), key.strip())
        axes[key] = [value.strip() for value in values.split("|") if value.strip()]
        if not axes[key]:
            raise InvalidParameterError(f"Grid axis '{key}' has no values")
    if not axes:
        raise InvalidParameterError(f"Grid '{text}' has no axes")
    cells = []
    for combo in itertools.product(*axes.values()):
        body = ",".join(f"{key}={value}" for key, value in zip(axes, combo))
        cells.append(GraphFamilySpec.parse(f"{family}:{body}"))
    return cells


def _ratio(numerator: float, denominator: float) -> Optional[float]:
    return numerator / denominator if denominator > 0 else None


def run_cell(
    task: Tuple[int, GraphFamilySpec, int, int, Optional[int], int],
) -> SweepRow:
    index, spec, trials, seed, max_steps_factor, gnp_retries = task
    graph = generate(spec, registry=build_family_registry(gnp_retries))
    start = center_vertices(graph)[0]
    cell_seed = derive_seed(seed, index)
    max_steps = None if max_steps_factor is None else max_steps_factor * graph.n
    estimate = estimate_ept(
        graph, ColorState.of(graph.n, [start]), trials, cell_seed, max_steps=max_steps
    )
    return SweepRow(
        family=spec.family,
        params=spec.label().partition(":")[2],
        start=start,
        trials=trials,
        seed=cell_seed,
        mean=estimate.mean,
        std=estimate.std_dev,
        ci_low=estimate.ci_low,
        ci_high=estimate.ci_high,
        radius=radius(graph),
        n=graph.n,
        radius_ratio=radius_ratio(graph, estimate.mean),
        linear_ratio=_ratio(estimate.mean, graph.n - 1),
        loglog_ratio=_ratio(estimate.mean, lower_bound_loglog(graph.n, 1)),
        valid=estimate.valid,
        version=__version__,
    )


def run_sweep(
    grid: str,
    trials: int,
    seed: int,
    workers: int = 1,
    max_steps_factor: Optional[int] = None,
    gnp_retries: int = 100,
) -> pd.DataFrame:
    """One row per cell in grid order; cell ``i`` estimates on ``derive_seed(seed, i)``."""
    cells = parse_grid(grid)
    tasks = [
        (index, spec, trials, seed, max_steps_factor, gnp_retries)
        for index, spec in enumerate(cells)
    ]
    logger.info("sweeping %d cells with %d trials each", len(tasks), trials)
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run_cell, tasks))
    else:
        rows = [run_cell(task) for task in tasks]
    return pd.DataFrame([row.model_dump() for row in rows], columns=SWEEP_COLUMNS)
