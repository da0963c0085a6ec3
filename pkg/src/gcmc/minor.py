"""Partition meta-algorithm: solve per part, on a deletion or contraction
of that part, and keep the best answer.

The partition is caller-supplied.  Independent-set parts are deleted
(solve on the induced remainder); vertex-cover and dominating-set parts
are contracted to a single vertex that is then forced into the solution.
Connectivity is not handled here.
"""

from __future__ import annotations

from dataclasses import dataclass

from .decomposition import FAMILY_REDUCED, build_tree_decomposition, \
    validate_tree_decomposition
from .dp import ConstraintDP
from .graph import (DOMINATING_SET, INDEPENDENT_SET, VERTEX_COVER,
                    ConstraintGraph, Instance, WeightFunction, cut_value,
                    is_feasible)
from .lp import LPModel, build_lp, make_family
from .rounding import Rounder, RoundingError
from .simplex import STATUS_OPTIMAL, solve

DEFAULT_TRIALS = 200


class MinorError(ValueError):
    pass


@dataclass(frozen=True)
class VertexPartition:
    parts: tuple

    @staticmethod
    def make(parts, n: int) -> "VertexPartition":
        norm = tuple(tuple(sorted(set(p))) for p in parts)
        flat = [u for p in norm for u in p]
        if not norm or any(not p for p in norm):
            raise MinorError("parts must be non-empty")
        if sorted(flat) != list(range(n)):
            raise MinorError("parts must exactly partition the vertex set")
        return VertexPartition(norm)

    @property
    def h(self) -> int:
        return len(self.parts)


@dataclass
class ContractedInstance:
    instance: Instance
    v_new: int
    origin: dict          # contracted vertex id -> tuple of original vertices


def contract_part(graph: ConstraintGraph, weights: WeightFunction, part,
                  constraint: str) -> ContractedInstance:
    """Collapse `part` to one fresh vertex, merging edges and adding weights."""
    part = set(part)
    if not part or not part <= set(graph.vertices):
        raise MinorError("part must be a non-empty subset of the vertices")
    outside = [u for u in graph.vertices if u not in part]
    remap = {u: i for i, u in enumerate(outside)}
    v_new = len(outside)
    for u in part:
        remap[u] = v_new
    edges = {
        (remap[u], remap[v]) for u, v in graph.edges
        if remap[u] != remap[v]
    }
    agg: dict[tuple[int, int], float] = {}
    for u, v in weights.pairs():
        a, b = remap[u], remap[v]
        if a == b:
            continue
        key = (min(a, b), max(a, b))
        agg[key] = agg.get(key, 0.0) + weights.get(u, v)
    inst = Instance.make(v_new + 1, sorted(edges),
                         [(u, v, w) for (u, v), w in sorted(agg.items())],
                         constraint)
    origin = {remap[u]: (u,) for u in outside}
    origin[v_new] = tuple(sorted(part))
    return ContractedInstance(inst, v_new, origin)


def force_root_vertex(model: LPModel, v: int) -> LPModel:
    """Fix to zero every column whose root state leaves v out."""
    td, dp = model.td, model.dp
    r = td.root
    if v not in td.bags[r]:
        raise MinorError(f"vertex {v} is not in the root bag")
    upper = model.upper.copy()
    for idx, key in enumerate(model.columns):
        if key[0] != "y" or r not in key[1]:
            continue
        si = key[2][key[1].index(r)]
        if v not in dp.required_set(r, dp.states(r)[si]):
            upper[idx] = 0.0
    return model.copy_with_bounds(upper=upper)


def _solve_forced(instance: Instance, v_new: int, family_mode: str,
                  state_cap):
    td = build_tree_decomposition(instance.graph, root_contains=v_new)
    validate_tree_decomposition(instance.graph, td)
    dp = ConstraintDP(instance.constraint, instance.graph, td,
                      state_cap=state_cap)
    model = build_lp(instance, td, dp, make_family(instance, td, family_mode))
    model = force_root_vertex(model, v_new)
    result = solve(model)
    if result.status != STATUS_OPTIMAL:
        raise MinorError(f"sub-instance solve failed: {result.status}")
    return model, result


def _expected_and_pick(rounder, seed: int, trials: int, value_of):
    """Exact expectation when enumerable, else an empirical mean; plus the
    best concrete sampled set under `value_of`."""
    try:
        outcomes = rounder.enumerate_outcomes()
        dp = rounder.dp
        expected = 0.0
        best = None
        for prob, assignment in outcomes:
            chosen = set()
            for i, si in assignment.items():
                chosen |= dp.required_set(i, dp.states(i)[si])
            val = value_of(chosen)
            expected += prob * val
            if best is None or val > best[0] + 1e-12:
                best = (val, chosen)
        return expected, True, best[1]
    except RoundingError:
        pass
    best = None
    total = 0.0
    for t in range(trials):
        run = rounder.round_once(seed + t)
        val = value_of(run.result)
        total += val
        if best is None or val > best[0] + 1e-12:
            best = (val, run.result)
    return total / trials, False, best[1]


def algorithm2(instance: Instance, partition: VertexPartition,
               family_mode: str = FAMILY_REDUCED, seed: int = 0,
               trials: int = DEFAULT_TRIALS, state_cap=None):
    """Best-of-parts solve; returns (vertex set, report dict)."""
    constraint = instance.constraint
    if constraint not in (INDEPENDENT_SET, VERTEX_COVER, DOMINATING_SET):
        raise MinorError(f"constraint {constraint!r} not supported here")
    G, c, n = instance.graph, instance.weights, instance.graph.n
    part_reports = []
    candidates = []
    for pi, part in enumerate(partition.parts):
        if constraint == INDEPENDENT_SET:
            keep = [u for u in G.vertices if u not in set(part)]
            sub_graph, remap = G.induced_subgraph(keep)
            back = {new: old for old, new in remap.items()}
            sub_w = [
                (remap[u], remap[v], c.get(u, v))
                for u, v in c.pairs() if u in remap and v in remap
            ]
            if sub_graph.n == 0:
                part_reports.append({
                    "part_index": pi, "part": list(part), "lp_value": 0.0,
                    "expected_value": 0.0, "exact": True, "solution": [],
                    "cut_value": 0.0,
                })
                candidates.append((0.0, pi, set()))
                continue
            sub = Instance.make(sub_graph.n, sub_graph.edges, sub_w, constraint)
            td = build_tree_decomposition(sub.graph)
            dp = ConstraintDP(constraint, sub.graph, td, state_cap=state_cap)
            model = build_lp(sub, td, dp, make_family(sub, td, family_mode))
            result = solve(model)
            if result.status != STATUS_OPTIMAL:
                raise MinorError(f"sub-instance solve failed: {result.status}")

            def value_of(chosen, back=back):
                return cut_value(c, {back[x] for x in chosen}, n)

            rounder = Rounder(model, result.values)
            expected, exact, best = _expected_and_pick(
                rounder, seed, trials, value_of)
            S = {back[x] for x in best}
        else:
            contracted = contract_part(G, c, part, constraint)
            model, result = _solve_forced(contracted.instance,
                                          contracted.v_new, family_mode,
                                          state_cap)

            def value_of(chosen, contracted=contracted):
                orig = set()
                for x in chosen:
                    orig |= set(contracted.origin[x])
                orig |= set(contracted.origin[contracted.v_new])
                return cut_value(c, orig, n)

            rounder = Rounder(model, result.values)
            expected, exact, best = _expected_and_pick(
                rounder, seed, trials, value_of)
            S = set()
            for x in best:
                S |= set(contracted.origin[x])
            S |= set(contracted.origin[contracted.v_new])
        value = cut_value(c, S, n)
        if not is_feasible(G, constraint, S):
            raise MinorError(f"part {pi} produced an infeasible set")
        part_reports.append({
            "part_index": pi,
            "part": list(part),
            "lp_value": result.objective,
            "expected_value": expected,
            "exact": exact,
            "solution": sorted(S),
            "cut_value": value,
        })
        candidates.append((expected, pi, S))
    best_expected, best_index, best_S = max(
        candidates, key=lambda t: (t[0], -t[1]))
    report = {
        "constraint": constraint,
        "h": partition.h,
        "guarantee_factor": 0.5 * (1.0 - 2.0 / partition.h),
        "best_part": best_index,
        "best_expected_value": best_expected,
        "solution": sorted(best_S),
        "cut_value": cut_value(c, best_S, n),
        "parts": part_reports,
    }
    return best_S, report
