"""Shared reduction types."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

from ..errors import MalformedError
from ..instances import Instance, Solution, instance_from_dict, instance_to_dict


@dataclass(frozen=True)
class Forwarded:
    """A forwarded instance together with the metadata its back-map needs.

    ``target`` is None when the source is answered without emitting anything.
    """

    reduction: str
    source: Instance
    target: Instance | None
    layout: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "reduction": self.reduction,
            "source": instance_to_dict(self.source),
            "target": instance_to_dict(self.target) if self.target is not None else None,
            "layout": self.layout,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Forwarded":
        try:
            target = data["target"]
            return cls(
                str(data["reduction"]),
                instance_from_dict(data["source"]),
                instance_from_dict(target) if target is not None else None,
                dict(data.get("layout") or {}),
            )
        except (KeyError, TypeError) as exc:
            raise MalformedError(f"malformed bundle: {exc}") from exc


@dataclass(frozen=True)
class Reduction:
    name: str
    source: str
    target: str
    forward_fn: Callable[..., Forwarded]
    back_fn: Callable[[Forwarded, Any], Solution]

    def forward(self, instance: Instance, **params: Any) -> Forwarded:
        return self.forward_fn(instance, **params)

    def back(self, fwd: Forwarded, solution: Solution | None) -> Solution:
        return self.back_fn(fwd, solution)
