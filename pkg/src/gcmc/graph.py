"""Constraint graphs, complete-graph edge weights and direct feasibility checks.

Everything here is decomposition-free: feasibility and cut values are
evaluated straight from the definitions, so the rest of the pipeline can be
tested against it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

INDEPENDENT_SET = "independent-set"
VERTEX_COVER = "vertex-cover"
DOMINATING_SET = "dominating-set"
CONNECTIVITY = "connectivity"

CONSTRAINT_KINDS = (INDEPENDENT_SET, VERTEX_COVER, DOMINATING_SET, CONNECTIVITY)


class InstanceError(ValueError):
    """Malformed instance data (bad vertices, duplicate pairs, ...)."""


def _norm_pair(u: int, v: int) -> tuple[int, int]:
    if u == v:
        raise InstanceError(f"self-pair ({u},{v}) not allowed")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class ConstraintGraph:
    """Undirected simple graph on vertices 0..n-1."""

    n: int
    edges: frozenset[tuple[int, int]]

    @staticmethod
    def from_edges(n: int, edges) -> "ConstraintGraph":
        if n < 0:
            raise InstanceError("vertex count must be non-negative")
        norm = set()
        for u, v in edges:
            p = _norm_pair(u, v)
            if p[0] < 0 or p[1] >= n:
                raise InstanceError(f"edge {p} out of range for n={n}")
            norm.add(p)
        return ConstraintGraph(n, frozenset(norm))

    @property
    def vertices(self) -> range:
        return range(self.n)

    def has_edge(self, u: int, v: int) -> bool:
        if u == v:
            return False
        return _norm_pair(u, v) in self.edges

    def neighbors(self, u: int) -> frozenset[int]:
        return self._adjacency()[u]

    def _adjacency(self):
        adj = getattr(self, "_adj_cache", None)
        if adj is None:
            tmp = [set() for _ in range(self.n)]
            for u, v in self.edges:
                tmp[u].add(v)
                tmp[v].add(u)
            adj = [frozenset(s) for s in tmp]
            object.__setattr__(self, "_adj_cache", adj)
        return adj

    def induced_edges(self, S) -> list[tuple[int, int]]:
        S = set(S)
        return [(u, v) for u, v in self.edges if u in S and v in S]

    def induced_subgraph(self, keep) -> tuple["ConstraintGraph", dict[int, int]]:
        """Induced subgraph on `keep`, renumbered densely.

        Returns the new graph and the old->new vertex map.
        """
        keep = sorted(set(keep))
        remap = {v: i for i, v in enumerate(keep)}
        edges = [
            (remap[u], remap[v]) for u, v in self.edges if u in remap and v in remap
        ]
        return ConstraintGraph.from_edges(len(keep), edges), remap


@dataclass(frozen=True)
class WeightFunction:
    """Sparse symmetric non-negative weights on unordered vertex pairs."""

    weights: dict[tuple[int, int], float] = field(default_factory=dict)

    @staticmethod
    def from_pairs(entries) -> "WeightFunction":
        w = {}
        for u, v, c in entries:
            p = _norm_pair(u, v)
            if p in w:
                raise InstanceError(f"duplicate weight entry for pair {p}")
            if c < 0:
                raise InstanceError(f"negative weight {c} on pair {p}")
            w[p] = float(c)
        return WeightFunction(w)

    def get(self, u: int, v: int) -> float:
        return self.weights.get(_norm_pair(u, v), 0.0)

    def pairs(self) -> list[tuple[int, int]]:
        """Pairs with nonzero weight, in canonical order."""
        return sorted(p for p, c in self.weights.items() if c > 0.0)

    def max_vertex(self) -> int:
        return max((p[1] for p in self.weights), default=-1)


def cut_value(weights: WeightFunction, S, n: int) -> float:
    """Total weight of pairs with exactly one endpoint in S."""
    S = set(S)
    for v in S:
        if not 0 <= v < n:
            raise InstanceError(f"vertex {v} out of range for n={n}")
    total = 0.0
    for (u, v), c in weights.weights.items():
        if v >= n:
            raise InstanceError(f"weight pair ({u},{v}) out of range for n={n}")
        if (u in S) != (v in S):
            total += c
    return total


def closed_neighborhood(graph: ConstraintGraph, S) -> set[int]:
    out = set(S)
    for u in S:
        out |= graph.neighbors(u)
    return out


def _is_connected_subset(graph: ConstraintGraph, S) -> bool:
    S = set(S)
    if len(S) <= 1:
        return True
    start = next(iter(S))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in graph.neighbors(u):
            if v in S and v not in seen:
                seen.add(v)
                stack.append(v)
    return seen == S


def is_feasible(graph: ConstraintGraph, constraint: str, S) -> bool:
    """Textbook feasibility check, no decomposition involved.

    Connectivity admits the empty set and singletons (at most one
    component in the induced subgraph).
    """
    S = set(S)
    for v in S:
        if not 0 <= v < graph.n:
            raise InstanceError(f"vertex {v} out of range")
    if constraint == INDEPENDENT_SET:
        return all(not (u in S and v in S) for u, v in graph.edges)
    if constraint == VERTEX_COVER:
        return all(u in S or v in S for u, v in graph.edges)
    if constraint == DOMINATING_SET:
        return closed_neighborhood(graph, S) == set(graph.vertices)
    if constraint == CONNECTIVITY:
        return _is_connected_subset(graph, S)
    raise InstanceError(f"unknown constraint kind: {constraint!r}")


@dataclass(frozen=True)
class Instance:
    graph: ConstraintGraph
    weights: WeightFunction
    constraint: str

    def __post_init__(self):
        if self.constraint not in CONSTRAINT_KINDS:
            raise InstanceError(f"unknown constraint kind: {self.constraint!r}")
        if self.weights.max_vertex() >= self.graph.n:
            raise InstanceError("weights reference vertices outside the graph")

    @staticmethod
    def make(n, edges, weight_entries, constraint) -> "Instance":
        return Instance(
            ConstraintGraph.from_edges(n, edges),
            WeightFunction.from_pairs(weight_entries),
            constraint,
        )

    def to_dict(self) -> dict:
        return {
            "n": self.graph.n,
            "edges": [list(e) for e in sorted(self.graph.edges)],
            "weights": [
                [u, v, c] for (u, v), c in sorted(self.weights.weights.items())
            ],
            "constraint": self.constraint,
        }

    @staticmethod
    def from_dict(data: dict) -> "Instance":
        try:
            n = int(data["n"])
            edges = [(int(u), int(v)) for u, v in data["edges"]]
            weights = [(int(u), int(v), float(c)) for u, v, c in data["weights"]]
            constraint = data["constraint"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InstanceError(f"malformed instance data: {exc}") from exc
        seen = set()
        for u, v in edges:
            p = _norm_pair(u, v)
            if p in seen:
                raise InstanceError(f"duplicate edge entry for pair {p}")
            seen.add(p)
        return Instance.make(n, edges, weights, constraint)

    @staticmethod
    def load(path) -> "Instance":
        with open(path) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise InstanceError(f"invalid JSON in {path}: {exc}") from exc
        return Instance.from_dict(data)
