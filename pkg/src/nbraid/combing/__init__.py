"""Exact word problems: combing for bordered braid groups, splitting for closed ones."""

from .bordered import (
    action,
    bordered_tower,
    boundary_word,
    comb,
    equal_bordered,
    invert_action,
    is_trivial_bordered,
    kernel_tower,
    level_generators,
    peripheral_check,
    relator_check,
)
from .closed import (
    ClosedSolver,
    ClosedSplitting,
    SectionError,
    closed_solver,
    equal_closed,
    is_trivial_closed,
    lambda_map,
    tau,
)
from .folding import NotInvertible, invert_automorphism
from .surface import DehnSolver, klein_normal_form, pi1_equal, pi1_is_trivial
from .tower import CombedForm, LevelError, SemidirectTower, SymbolError
from ..presentations import GroupSpec, Unsupported


def is_trivial(w, spec: GroupSpec) -> bool:
    """Dispatch on the family of ``spec``."""
    if spec.family == "bordered":
        return is_trivial_bordered(w, spec)
    if spec.family == "closed":
        return is_trivial_closed(w, spec)
    if spec.family == "surface":
        return pi1_is_trivial(w, spec.g)
    if spec.family == "free":
        return not w
    raise Unsupported(f"no exact solver for {spec}")


def equal(u, v, spec: GroupSpec) -> bool:
    return is_trivial(u * v.inverse(), spec)


__all__ = [
    "action",
    "bordered_tower",
    "boundary_word",
    "comb",
    "equal_bordered",
    "invert_action",
    "is_trivial_bordered",
    "kernel_tower",
    "level_generators",
    "peripheral_check",
    "relator_check",
    "ClosedSolver",
    "ClosedSplitting",
    "SectionError",
    "closed_solver",
    "equal_closed",
    "is_trivial_closed",
    "lambda_map",
    "tau",
    "NotInvertible",
    "invert_automorphism",
    "DehnSolver",
    "klein_normal_form",
    "pi1_equal",
    "pi1_is_trivial",
    "CombedForm",
    "LevelError",
    "SemidirectTower",
    "SymbolError",
    "is_trivial",
    "equal",
]
