"""Per-node state spaces and valid child-state combinations for the four
graph constraints, plus exact linear-objective optimization over them.

Each constraint defines, for every decomposition node i:
  states(i)            the canonical, ordered state space
  required_set(i, s)   the bag vertices a state forces into the solution
  child_combos(i, s)   valid (left, right) child-state pairs
  leaf_feasible(l, s)  whether a state is realizable at a leaf

Connectivity carries one extra sentinel state `DONE` per node beyond the
(subset, partition) states: it marks "the solution is a single nonempty
component living strictly below this node, disjoint from its bag".
Without it, connected solutions avoiding the root bag would be
unrepresentable and the DP would disagree with brute force.
"""

from __future__ import annotations

import itertools
import os

from .decomposition import TreeDecomposition
from .graph import (
    CONNECTIVITY,
    DOMINATING_SET,
    INDEPENDENT_SET,
    VERTEX_COVER,
    ConstraintGraph,
    closed_neighborhood,
    is_feasible,
)

DEFAULT_STATE_CAP = 5000

#: sentinel connectivity state, see module docstring
DONE = "done"


class StateSpaceError(RuntimeError):
    """State space exceeds the configured cap (width too large)."""


class InfeasibleSolutionError(ValueError):
    pass


def _state_cap(explicit: int | None) -> int:
    if explicit is not None:
        return explicit
    env = os.environ.get("GCMC_STATE_CAP")
    return int(env) if env else DEFAULT_STATE_CAP


def set_partitions(items):
    """All partitions of `items` into non-empty parts, as tuples of
    frozensets in canonical order."""
    items = sorted(items)
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for sub in set_partitions(rest):
        yield _canon_partition(sub + (frozenset([first]),))
        for k in range(len(sub)):
            merged = sub[:k] + (sub[k] | {first},) + sub[k + 1:]
            yield _canon_partition(merged)


def _canon_partition(parts) -> tuple[frozenset[int], ...]:
    return tuple(sorted((frozenset(p) for p in parts if p),
                        key=lambda p: tuple(sorted(p))))


def partition_satisfied(target, by) -> bool:
    """True iff every pair co-located in `target` gets merged by the
    transitive closure of co-location across the partitions in `by`."""
    parent: dict[int, int] = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for part in itertools.chain.from_iterable(by):
        part = list(part)
        for v in part[1:]:
            union(part[0], v)
    for part in target:
        part = list(part)
        for v in part[1:]:
            if find(part[0]) != find(v):
                return False
    return True


def _state_key(kind, state):
    if state is DONE:
        return (2,)
    if kind in (INDEPENDENT_SET, VERTEX_COVER):
        return (0, tuple(sorted(state)))
    if kind == CONNECTIVITY:
        b, parts = state
        return (0, tuple(sorted(b)), tuple(tuple(sorted(p)) for p in parts))
    b, y = state
    return (0, tuple(sorted(b)), tuple(sorted(y)))


def state_label(kind, state) -> str:
    """Stable human-readable encoding, used for debugging and LP export."""
    if state is DONE:
        return "done"
    if kind in (INDEPENDENT_SET, VERTEX_COVER):
        return "{" + ",".join(map(str, sorted(state))) + "}"
    if kind == CONNECTIVITY:
        b, parts = state
        ptxt = "|".join("{" + ",".join(map(str, sorted(p))) + "}" for p in parts)
        return "B{" + ",".join(map(str, sorted(b))) + "}P[" + ptxt + "]"
    b, y = state
    return ("B{" + ",".join(map(str, sorted(b))) + "}Y{"
            + ",".join(map(str, sorted(y))) + "}")


class ConstraintDP:
    """States, transitions and exact linear optimization for one instance."""

    def __init__(self, kind: str, graph: ConstraintGraph,
                 td: TreeDecomposition, state_cap: int | None = None):
        self.kind = kind
        self.graph = graph
        self.td = td
        self.state_cap = _state_cap(state_cap)
        self._states: dict[int, tuple] = {}
        self._sidx: dict[int, dict] = {}
        self._combos: dict[tuple[int, int], tuple] = {}
        for i in td.nodes:
            sts = sorted(self._enumerate(i), key=lambda s: _state_key(kind, s))
            if len(sts) > self.state_cap:
                raise StateSpaceError(
                    f"node {i}: {len(sts)} states exceeds cap {self.state_cap}")
            self._states[i] = tuple(sts)
            self._sidx[i] = {s: k for k, s in enumerate(sts)}

    # -- state spaces ------------------------------------------------------

    def _enumerate(self, i: int):
        bag = sorted(self.td.bags[i])
        at_root = i == self.td.root
        if self.kind == INDEPENDENT_SET:
            for r in range(len(bag) + 1):
                for comb in itertools.combinations(bag, r):
                    s = frozenset(comb)
                    if not self.graph.induced_edges(s):
                        yield s
        elif self.kind == VERTEX_COVER:
            inner = self.graph.induced_edges(bag)
            for r in range(len(bag) + 1):
                for comb in itertools.combinations(bag, r):
                    s = frozenset(comb)
                    if all(u in s or v in s for u, v in inner):
                        yield s
        elif self.kind == CONNECTIVITY:
            for r in range(len(bag) + 1):
                for comb in itertools.combinations(bag, r):
                    b = frozenset(comb)
                    if at_root:
                        yield (b, _canon_partition((b,)))
                    else:
                        for parts in set(set_partitions(b)):
                            yield (b, parts)
            yield DONE
        elif self.kind == DOMINATING_SET:
            subs = [frozenset(c) for r in range(len(bag) + 1)
                    for c in itertools.combinations(bag, r)]
            for b in subs:
                if at_root:
                    yield (b, frozenset())
                else:
                    for y in subs:
                        yield (b, y)
        else:
            raise ValueError(f"unknown constraint kind {self.kind!r}")

    def states(self, i: int) -> tuple:
        return self._states[i]

    def state_index(self, i: int, state) -> int:
        try:
            return self._sidx[i][state]
        except KeyError:
            raise InfeasibleSolutionError(
                f"state {state!r} not in state space of node {i}") from None

    def required_set(self, i: int, state) -> frozenset[int]:
        self.state_index(i, state)
        if state is DONE:
            return frozenset()
        if self.kind in (INDEPENDENT_SET, VERTEX_COVER):
            return state
        return state[0]

    # -- transitions -------------------------------------------------------

    def child_combos(self, i: int, state) -> tuple:
        """Valid (left-state, right-state) pairs for the children of i."""
        if not self.td.children[i]:
            raise ValueError(f"node {i} is a leaf")
        key = (i, self.state_index(i, state))
        if key not in self._combos:
            j1, j2 = self.td.children[i]
            pairs = tuple(
                (w1, w2)
                for w1 in self._states[j1]
                for w2 in self._states[j2]
                if self._combo_ok(i, state, w1, w2)
            )
            self._combos[key] = pairs
        return self._combos[key]

    def _combo_ok(self, i, state, w1, w2) -> bool:
        j1, j2 = self.td.children[i]
        xi = self.td.bags[i]
        if self.kind in (INDEPENDENT_SET, VERTEX_COVER):
            return (w1 & xi == state & self.td.bags[j1]
                    and w2 & xi == state & self.td.bags[j2])
        if self.kind == CONNECTIVITY:
            return self._conn_combo_ok(i, state, w1, w2)
        # dominating set
        bi, yi = state
        for j, w in ((j1, w1), (j2, w2)):
            if w[0] & xi != bi & self.td.bags[j]:
                return False
        vi = self.td.subtree_vertices(i)
        must = vi - yi
        allowed = ((self.td.subtree_vertices(j1) - w1[1])
                   | (self.td.subtree_vertices(j2) - w2[1])
                   | closed_neighborhood(self.graph, bi))
        return must <= allowed

    def _conn_combo_ok(self, i, state, w1, w2) -> bool:
        j1, j2 = self.td.children[i]
        if state is DONE:
            # exactly one child carries the finished component
            empty = (frozenset(), ())
            for carrier, other, jc in ((w1, w2, j1), (w2, w1, j2)):
                if other != empty:
                    continue
                if carrier is DONE:
                    return True
                bc, pc = carrier
                if bc and not (bc & self.td.bags[i]) and len(pc) == 1:
                    return True
            return False
        bi, pi = state
        xi = self.td.bags[i]
        parts_by = [_components_partition(self.graph, bi)]
        for j, w in ((j1, w1), (j2, w2)):
            if w is DONE:
                return False
            bj, pj = w
            if bi & self.td.bags[j] != bj & xi:
                return False
            if any(not (p & bi) for p in pj):
                return False
            parts_by.append(pj)
        return partition_satisfied(pi, parts_by)

    def leaf_feasible(self, leaf: int, state) -> bool:
        if self.td.children[leaf]:
            raise ValueError(f"node {leaf} is not a leaf")
        self.state_index(leaf, state)
        if self.kind in (INDEPENDENT_SET, VERTEX_COVER):
            return True
        if self.kind == CONNECTIVITY:
            if state is DONE:
                return False
            b, parts = state
            inner = ConstraintGraph.from_edges(
                self.graph.n, self.graph.induced_edges(b))
            return all(is_feasible(inner, CONNECTIVITY, p) for p in parts)
        b, y = state
        bag = self.td.bags[leaf]
        inner = ConstraintGraph.from_edges(
            self.graph.n, self.graph.induced_edges(bag))
        return (bag - y) <= closed_neighborhood(inner, b)

    # -- exact linear optimization ----------------------------------------

    def solve_linear_objective(self, f) -> tuple[set[int], float]:
        """Maximize sum of f over the feasible sets, exactly.

        f is a sequence indexed by vertex.  Tie-breaks follow canonical
        state order, so the result is deterministic.
        """
        NEG = float("-inf")
        value: dict[int, list[float]] = {}
        choice: dict[int, list] = {}
        for i in reversed(self.td.nodes):
            sts = self._states[i]
            vals = [NEG] * len(sts)
            picks = [None] * len(sts)
            if not self.td.children[i]:
                for k, s in enumerate(sts):
                    if self.leaf_feasible(i, s):
                        vals[k] = 0.0
            else:
                j1, j2 = self.td.children[i]
                xi = self.td.bags[i]
                for k, s in enumerate(sts):
                    for w1, w2 in self.child_combos(i, s):
                        k1 = self._sidx[j1][w1]
                        k2 = self._sidx[j2][w2]
                        if value[j1][k1] == NEG or value[j2][k2] == NEG:
                            continue
                        v = (value[j1][k1] + value[j2][k2]
                             + sum(f[u] for u in self.required_set(j1, w1) - xi)
                             + sum(f[u] for u in self.required_set(j2, w2) - xi))
                        if v > vals[k]:
                            vals[k] = v
                            picks[k] = (w1, w2)
            value[i] = vals
            choice[i] = picks
        r = self.td.root
        best_k, best_v = None, NEG
        for k, s in enumerate(self._states[r]):
            if value[r][k] == NEG:
                continue
            v = value[r][k] + sum(f[u] for u in self.required_set(r, s))
            if v > best_v:
                best_v, best_k = v, k
        if best_k is None:
            raise InfeasibleSolutionError("constraint admits no solution")
        solution: set[int] = set()
        stack = [(r, self._states[r][best_k])]
        while stack:
            i, s = stack.pop()
            solution |= self.required_set(i, s)
            if self.td.children[i]:
                w1, w2 = choice[i][self._sidx[i][s]]
                j1, j2 = self.td.children[i]
                stack.append((j1, w1))
                stack.append((j2, w2))
        return solution, best_v

    # -- solution -> states (Claim-style top-down extraction) --------------

    def states_of_solution(self, S) -> dict[int, object]:
        """States induced by a feasible set, one per node.

        The returned assignment is consistent (children pairs valid, leaves
        feasible) and reassembles to S.
        """
        S = set(S)
        if not is_feasible(self.graph, self.kind, S):
            raise InfeasibleSolutionError(f"{sorted(S)} violates {self.kind}")
        assign: dict[int, object] = {}
        for i in self.td.nodes:
            bag = self.td.bags[i]
            si = S & self.td.subtree_vertices(i)
            b = S & bag
            if self.kind in (INDEPENDENT_SET, VERTEX_COVER):
                assign[i] = frozenset(b)
            elif self.kind == CONNECTIVITY:
                if si and not b:
                    assign[i] = DONE
                elif i == self.td.root:
                    assign[i] = (frozenset(b), _canon_partition((b,)))
                else:
                    comps = _components(self.graph, si)
                    parts = _canon_partition(tuple(c & b for c in comps))
                    assign[i] = (frozenset(b), parts)
            else:
                y = frozenset() if i == self.td.root else \
                    bag - closed_neighborhood(self.graph, si)
                assign[i] = (frozenset(b), frozenset(y))
        self._verify_assignment(S, assign)
        return assign

    def _verify_assignment(self, S, assign):
        rebuilt: set[int] = set()
        for i in self.td.nodes:
            s = assign[i]
            self.state_index(i, s)
            rebuilt |= self.required_set(i, s)
            ch = self.td.children[i]
            if ch:
                if (assign[ch[0]], assign[ch[1]]) not in self.child_combos(i, s):
                    raise InfeasibleSolutionError(
                        f"extracted states invalid at node {i}")
            elif not self.leaf_feasible(i, s):
                raise InfeasibleSolutionError(
                    f"extracted state infeasible at leaf {i}")
        if rebuilt != set(S):
            raise InfeasibleSolutionError("extracted states do not cover S")


def _components(graph: ConstraintGraph, S):
    S = set(S)
    comps = []
    while S:
        start = S.pop()
        comp = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for v in graph.neighbors(u):
                if v in S:
                    S.discard(v)
                    comp.add(v)
                    stack.append(v)
        comps.append(frozenset(comp))
    return comps


def _components_partition(graph: ConstraintGraph, b):
    return _canon_partition(tuple(_components(graph, b)))
