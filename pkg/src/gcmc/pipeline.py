"""End-to-end driver: instance -> decomposition -> model -> solve -> rounder."""

from __future__ import annotations

from dataclasses import dataclass

from .decomposition import (FAMILY_REDUCED, TreeDecomposition,
                            build_tree_decomposition,
                            validate_tree_decomposition)
from .dp import ConstraintDP
from .graph import Instance
from .lp import LPModel, build_lp, make_family
from .rounding import Rounder
from .simplex import STATUS_OPTIMAL, SolverConfig, SolverResult, solve


class PipelineError(RuntimeError):
    pass


@dataclass
class Pipeline:
    instance: Instance
    td: TreeDecomposition
    dp: ConstraintDP
    family: list
    model: LPModel
    result: SolverResult

    @property
    def lp_value(self) -> float:
        return self.result.objective

    def rounder(self) -> Rounder:
        return Rounder(self.model, self.result.values)


def run_pipeline(instance: Instance, family_mode: str = FAMILY_REDUCED,
                 state_cap: int | None = None,
                 root_contains: int | None = None,
                 config: SolverConfig | None = None) -> Pipeline:
    td = build_tree_decomposition(instance.graph, root_contains=root_contains)
    validate_tree_decomposition(instance.graph, td)
    dp = ConstraintDP(instance.constraint, instance.graph, td,
                      state_cap=state_cap)
    family = make_family(instance, td, family_mode)
    model = build_lp(instance, td, dp, family)
    result = solve(model, config)
    if result.status != STATUS_OPTIMAL:
        raise PipelineError(f"solver finished with status {result.status}")
    return Pipeline(instance, td, dp, family, model, result)
