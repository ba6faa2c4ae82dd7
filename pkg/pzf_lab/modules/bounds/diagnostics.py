from __future__ import annotations

from collections import Counter
from typing import Dict, Tuple

from pzf_lab.core.errors import InvalidParameterError
from pzf_lab.core.types import ColorState
from pzf_lab.core.utils import bits_to_mask, derive_seed
from pzf_lab.modules.exact_solver.solver import DEFAULT_CAP, exact_ept
from pzf_lab.modules.graph_core.generators import path_graph, star_graph
from pzf_lab.modules.pzf_engine.engine import default_max_steps, run_until


def leaf_coloring_histogram(
    leaves: int,
    trials: int,
    seed: int,
    start_with_leaf: bool = False,
) -> Dict[int, int]:
    """Step at which the last leaf of a star turns blue, counted over trials.

    The start is the center, or leaf 1 when ``start_with_leaf``. Truncated
    trials are counted under key -1.
    """
    if leaves < 2:
        raise InvalidParameterError(f"Histogram needs at least 2 leaves, got {leaves}")
    graph = star_graph(leaves)
    start = bits_to_mask(1 << (1 if start_with_leaf else 0), graph.n)
    watched = leaves
    limit = default_max_steps(graph)
    counts: Counter[int] = Counter()
    for trial in range(trials):
        steps, _ = run_until(
            graph,
            start,
            derive_seed(seed, trial),
            limit,
            lambda blue: bool(blue[watched]),
        )
        counts[-1 if steps is None else steps] += 1
    return dict(sorted(counts.items()))


def path_prefix_tightness(n: int, k: int, cap: int = DEFAULT_CAP) -> Tuple[float, float]:
    """(exact ept of P_n from its first k vertices, n - k); the two agree."""
    if not 1 <= k <= n:
        raise InvalidParameterError(f"Expected 1 <= k <= n, got n={n}, k={k}")
    graph = path_graph(n)
    return exact_ept(graph, ColorState.of(n, range(k)), cap), float(n - k)
