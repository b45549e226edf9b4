"""Karp reductions as forward maps with solution back-maps."""
from __future__ import annotations

from typing import Any, Callable, Sequence

from ..circuit import DEFAULT_BUDGET
from ..instances import Instance, Solution, Verdict, brute_force, verify
from .base import Forwarded, Reduction
from .blichfeldt import (
    back_blichfeldt_to_pigeonhole,
    back_minkowski_to_blichfeldt,
    back_pigeonhole_to_blichfeldt,
    blichfeldt_to_pigeonhole,
    minkowski_to_blichfeldt,
    native_blichfeldt_to_pigeonhole,
    pigeonhole_to_blichfeldt,
)
from .collision import (
    back_collision_shrink,
    back_collision_to_weakcsis,
    back_weakcsis_to_collision,
    collision_shrink,
    collision_to_weakcsis,
    native_weakcsis_to_collision,
    weakcsis_to_collision,
)
from .csis import (
    back_csis_to_pigeonhole,
    back_pigeonhole_to_csis,
    csis_to_pigeonhole,
    encode_circuit,
    native_csis_to_pigeonhole,
    pigeonhole_to_csis,
)
from .dlog import back_dlog_to_pigeonhole, dlog_to_pigeonhole, native_dlog_to_pigeonhole

REDUCTIONS: dict[str, Reduction] = {
    r.name: r
    for r in (
        Reduction("pigeonhole_to_csis", "pigeonhole", "csis", pigeonhole_to_csis, back_pigeonhole_to_csis),
        Reduction("csis_to_pigeonhole", "csis", "pigeonhole", csis_to_pigeonhole, back_csis_to_pigeonhole),
        Reduction(
            "pigeonhole_to_blichfeldt", "pigeonhole", "blichfeldt", pigeonhole_to_blichfeldt, back_pigeonhole_to_blichfeldt
        ),
        Reduction(
            "blichfeldt_to_pigeonhole", "blichfeldt", "pigeonhole", blichfeldt_to_pigeonhole, back_blichfeldt_to_pigeonhole
        ),
        Reduction("collision_shrink", "collision", "collision", collision_shrink, back_collision_shrink),
        Reduction("collision_to_weakcsis", "collision", "weakcsis", collision_to_weakcsis, back_collision_to_weakcsis),
        Reduction("weakcsis_to_collision", "weakcsis", "collision", weakcsis_to_collision, back_weakcsis_to_collision),
        Reduction(
            "minkowski_to_blichfeldt", "minkowski", "blichfeldt", minkowski_to_blichfeldt, back_minkowski_to_blichfeldt
        ),
        Reduction("dlog_to_pigeonhole", "dlog", "pigeonhole", dlog_to_pigeonhole, back_dlog_to_pigeonhole),
    )
}

# Plain-arithmetic counterparts of the emitted circuits, keyed by reduction name.
NATIVE: dict[str, Callable[[Forwarded, Sequence[int]], tuple[int, ...]]] = {
    "csis_to_pigeonhole": native_csis_to_pigeonhole,
    "blichfeldt_to_pigeonhole": native_blichfeldt_to_pigeonhole,
    "weakcsis_to_collision": native_weakcsis_to_collision,
    "dlog_to_pigeonhole": native_dlog_to_pigeonhole,
}


def find(source: str, target: str) -> Reduction:
    for r in REDUCTIONS.values():
        if r.source == source and r.target == target:
            return r
    if source == target == "collision":
        return REDUCTIONS["collision_shrink"]
    raise KeyError(f"no reduction from {source} to {target}")


def solve_forwarded(fwd: Forwarded, budget: int = DEFAULT_BUDGET, threads: int = 1) -> Solution | None:
    """Brute-force the target and map the answer back to the source."""
    target_solution = None if fwd.target is None else brute_force(fwd.target, budget, threads)
    return REDUCTIONS[fwd.reduction].back(fwd, target_solution)


def roundtrip(
    reduction: str, instance: Instance, budget: int = DEFAULT_BUDGET, threads: int = 1, **params: Any
) -> tuple[Forwarded, Solution, Verdict]:
    fwd = REDUCTIONS[reduction].forward(instance, **params)
    sol = solve_forwarded(fwd, budget, threads)
    return fwd, sol, verify(instance, sol)


__all__ = [
    "Forwarded",
    "Reduction",
    "REDUCTIONS",
    "NATIVE",
    "find",
    "solve_forwarded",
    "roundtrip",
    "encode_circuit",
]
