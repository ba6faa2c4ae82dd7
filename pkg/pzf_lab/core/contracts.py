from __future__ import annotations

from typing import TYPE_CHECKING, Protocol

import numpy as np

if TYPE_CHECKING:
    from pzf_lab.modules.graph_core.graph import Graph


class ForcingRule(Protocol):
    """Per-step forcing probabilities on the directed edges of a graph.

    ``edge_probabilities`` returns one probability per directed edge in the
    graph's edge order; entries for edges that are not blue -> white are
    ignored by the engine.
    """

    rule_id: str

    def edge_probabilities(self, graph: "Graph", blue: np.ndarray) -> np.ndarray:
        ...
