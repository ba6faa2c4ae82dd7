from __future__ import annotations

from typing import Any, Callable, Dict

from pzf_lab.core.errors import FamilyNotFoundError

FamilyFactory = Callable[..., Any]


class FamilyRegistry:
    def __init__(self) -> None:
        self._registry: Dict[str, FamilyFactory] = {}

    def register(self, family: str, factory: FamilyFactory) -> None:
        self._registry[family] = factory

    def has(self, family: str) -> bool:
        return family in self._registry

    def resolve(self, family: str, **kwargs: Any) -> Any:
        if family not in self._registry:
            raise FamilyNotFoundError(
                f"Graph family not found: {family} (known: {', '.join(self.list_ids())})"
            )
        return self._registry[family](**kwargs)

    def list_ids(self) -> list[str]:
        return sorted(self._registry.keys())
