from __future__ import annotations

from pathlib import Path
from typing import Optional

from pzf_lab.config import AppConfig
from pzf_lab.core.errors import InvalidParameterError
from pzf_lab.core.registry import FamilyRegistry
from pzf_lab.modules.graph_core.generators import build_family_registry, generate
from pzf_lab.modules.graph_core.graph import Graph
from pzf_lab.modules.graph_core.io import read_graph
from pzf_lab.modules.graph_core.schemas import GraphFamilySpec


class GraphService:
    def __init__(self, config: AppConfig, registry: Optional[FamilyRegistry] = None) -> None:
        self.config = config
        self.registry = registry or build_family_registry(
            gnp_retries=config.generators.gnp_retries
        )

    def generate(self, spec: GraphFamilySpec | str) -> Graph:
        if isinstance(spec, str):
            spec = GraphFamilySpec.parse(spec)
        return generate(spec, registry=self.registry)

    def load(self, graph: Optional[str] = None, file: Optional[Path] = None) -> Graph:
        if (graph is None) == (file is None):
            raise InvalidParameterError("Exactly one of a family spec or a graph file is required")
        if file is not None:
            return read_graph(file)
        return self.generate(graph)

    def family_ids(self) -> list[str]:
        return self.registry.list_ids()
