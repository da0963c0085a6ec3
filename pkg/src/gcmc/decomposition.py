"""Rooted binary tree decompositions and the LP's node-set families.

Construction is heuristic: networkx's min-fill elimination gives a clique
tree, which is then rooted at a max-size bag (ties broken toward the tree
center to keep the depth small) and binarized.  Width is whatever min-fill
produces, not necessarily the true treewidth.
"""

from __future__ import annotations

import itertools
import json

import networkx as nx
from networkx.algorithms.approximation import treewidth_min_fill_in

from .graph import ConstraintGraph

FAMILY_FULL = "full"
FAMILY_REDUCED = "reduced"


class DecompositionError(ValueError):
    pass


class TreeDecomposition:
    """Rooted binary tree of bags.  Every node has 0 or 2 children."""

    def __init__(self, bags: dict[int, frozenset[int]], root: int,
                 children: dict[int, tuple[int, ...]]):
        self.bags = dict(bags)
        self.root = root
        self.children = {i: tuple(c) for i, c in children.items()}
        self.parent: dict[int, int | None] = {root: None}
        for i, ch in self.children.items():
            for c in ch:
                self.parent[c] = i
        self.nodes = self._order_by_depth()
        self.depth = {self.root: 0}
        for i in self.nodes[1:]:
            self.depth[i] = self.depth[self.parent[i]] + 1
        self.leaves = tuple(i for i in self.nodes if not self.children[i])
        self._subtree: dict[int, frozenset[int]] = {}
        self._tfam: dict[int, frozenset[int]] = {}

    def _order_by_depth(self) -> tuple[int, ...]:
        order = []
        queue = [self.root]
        while queue:
            i = queue.pop(0)
            order.append(i)
            queue.extend(self.children[i])
        return tuple(order)

    @property
    def width(self) -> int:
        return max(len(b) for b in self.bags.values()) - 1

    def path_to_root(self, i: int) -> list[int]:
        path = [i]
        while self.parent[path[-1]] is not None:
            path.append(self.parent[path[-1]])
        return path

    def subtree_vertices(self, i: int) -> frozenset[int]:
        """Union of bags at or below node i."""
        if i not in self.bags:
            raise DecompositionError(f"unknown node {i}")
        if i not in self._subtree:
            acc = set(self.bags[i])
            for c in self.children[i]:
                acc |= self.subtree_vertices(c)
            self._subtree[i] = frozenset(acc)
        return self._subtree[i]

    def path_family(self, i: int) -> frozenset[int]:
        """Root-to-i path nodes plus the children of every path node except i."""
        if i not in self.bags:
            raise DecompositionError(f"unknown node {i}")
        if i not in self._tfam:
            out = set()
            for k in self.path_to_root(i):
                out.add(k)
                if k != i:
                    out.update(self.children[k])
            self._tfam[i] = frozenset(out)
        return self._tfam[i]

    def highest_node(self, u: int) -> int:
        hosts = [i for i in self.nodes if u in self.bags[i]]
        if not hosts:
            raise DecompositionError(f"vertex {u} is in no bag")
        return min(hosts, key=lambda i: (self.depth[i], i))

    def lca(self, a: int, b: int) -> int:
        pa = set(self.path_to_root(a))
        for k in self.path_to_root(b):
            if k in pa:
                return k
        raise DecompositionError("nodes in different trees")

    def to_dict(self) -> dict:
        return {
            "root": self.root,
            "nodes": [
                {"id": i, "bag": sorted(self.bags[i]),
                 "children": list(self.children[i])}
                for i in self.nodes
            ],
        }

    def dump(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=1, sort_keys=True)


def build_tree_decomposition(graph: ConstraintGraph,
                             root_contains: int | None = None
                             ) -> TreeDecomposition:
    """Min-fill clique tree, rooted and binarized.

    `root_contains` forces the root bag to contain a given vertex (needed
    when a solution vertex is pinned at the root).  Otherwise the root is a
    max-size bag of minimum eccentricity, for a shallow tree.
    """
    g = nx.Graph()
    g.add_nodes_from(graph.vertices)
    g.add_edges_from(graph.edges)
    if graph.n == 0:
        return TreeDecomposition({0: frozenset()}, 0, {0: ()})
    _, tree = treewidth_min_fill_in(g)
    raw = list(tree.nodes())
    if not raw:
        raw = [frozenset(graph.vertices)]
        tree = nx.Graph()
        tree.add_node(raw[0])
    ecc = nx.eccentricity(tree) if len(raw) > 1 else {raw[0]: 0}
    if root_contains is not None:
        candidates = [b for b in raw if root_contains in b]
        if not candidates:
            raise DecompositionError(
                f"no bag contains vertex {root_contains}")
    else:
        maxlen = max(len(b) for b in raw)
        candidates = [b for b in raw if len(b) == maxlen]
    root_bag = min(candidates, key=lambda b: (ecc[b], tuple(sorted(b))))

    # orient away from the root bag
    order = [root_bag]
    par: dict = {root_bag: None}
    for b in order:
        for nb in tree.neighbors(b):
            if nb not in par:
                par[nb] = b
                order.append(nb)

    ids = {b: k for k, b in enumerate(order)}
    bags = {ids[b]: frozenset(b) for b in order}
    kids: dict[int, list[int]] = {ids[b]: [] for b in order}
    for b in order[1:]:
        kids[ids[par[b]]].append(ids[b])

    bags, children = _binarize(bags, kids, ids[root_bag])
    return TreeDecomposition(bags, ids[root_bag], children)


def _binarize(bags, kids, root):
    """Pad 1-child nodes with an empty-bag sibling; split >2 children
    through balanced chains of parent-bag copies."""
    bags = dict(bags)
    children: dict[int, tuple[int, ...]] = {}
    next_id = max(bags) + 1

    def fresh(bag) -> int:
        nonlocal next_id
        i = next_id
        next_id += 1
        bags[i] = frozenset(bag)
        return i

    def attach(i: int, ch: list[int]):
        nonlocal children
        if len(ch) == 0:
            children[i] = ()
        elif len(ch) == 1:
            pad = fresh(())
            children[pad] = ()
            children[i] = (ch[0], pad)
        elif len(ch) == 2:
            children[i] = tuple(ch)
        else:
            mid = len(ch) // 2
            left = fresh(bags[i])
            right = fresh(bags[i])
            children[i] = (left, right)
            attach(left, ch[:mid])
            attach(right, ch[mid:])

    for i in list(kids):
        attach(i, kids[i])
    for i in list(bags):
        children.setdefault(i, ())
    return bags, children


def validate_tree_decomposition(graph: ConstraintGraph,
                                td: TreeDecomposition) -> bool:
    """Edge coverage + per-vertex subtree connectivity + binary shape."""
    for i in td.nodes:
        if len(td.children[i]) not in (0, 2):
            return False
    covered = set()
    for b in td.bags.values():
        covered |= b
    if covered != set(graph.vertices):
        return False
    for u, v in graph.edges:
        if not any(u in b and v in b for b in td.bags.values()):
            return False
    for v in graph.vertices:
        hosts = {i for i in td.nodes if v in td.bags[i]}
        # connected iff every host except the shallowest has its parent hosted
        top = min(hosts, key=lambda i: (td.depth[i], i))
        for i in hosts:
            if i != top and td.parent[i] not in hosts:
                return False
    return True


def _chain_down(big: frozenset[int], small: frozenset[int], td) -> list[frozenset[int]]:
    """Sets linking big to small, dropping one node at a time (deepest first)."""
    out = [big]
    cur = set(big)
    drop = sorted(big - small, key=lambda k: (-td.depth[k], -k))
    for k in drop:
        cur.discard(k)
        out.append(frozenset(cur))
    return out


def variable_family(td: TreeDecomposition, mode: str = FAMILY_REDUCED,
                    pairs=(), full_cap: int = 1 << 16) -> list[frozenset[int]]:
    """Node-set family indexing the LP's joint-state variables.

    Reduced mode covers every path set T_i, the sibling-extension chains
    T_i -> T_i+{j} -> T_i+{j,j'}, and for each weighted vertex pair the
    one-node-at-a-time chains tying the pair's own set to the path sets of
    its endpoints' highest nodes.  Full mode enumerates all subsets of
    T_l1 | T_l2 over leaf pairs (tiny trees only).

    `pairs` holds (hi_u, hi_v) *decomposition node* pairs, one per weighted
    vertex pair.
    """
    fam: set[frozenset[int]] = {frozenset()}
    if mode == FAMILY_FULL:
        for l1, l2 in itertools.combinations_with_replacement(td.leaves, 2):
            ground = sorted(td.path_family(l1) | td.path_family(l2))
            if 2 ** len(ground) > full_cap:
                raise DecompositionError(
                    f"full family too large for ground set of {len(ground)} nodes")
            for r in range(len(ground) + 1):
                for comb in itertools.combinations(ground, r):
                    fam.add(frozenset(comb))
        return sorted(fam, key=lambda s: (len(s), tuple(sorted(s))))
    if mode != FAMILY_REDUCED:
        raise DecompositionError(f"unknown family mode {mode!r}")

    for i in td.nodes:
        ti = td.path_family(i)
        fam.add(ti)
        ch = td.children[i]
        if ch:
            fam.add(ti | {ch[0]})
            fam.add(ti | frozenset(ch))
    for a, b in pairs:
        i = td.lca(a, b)
        ti = td.path_family(i)
        q = frozenset({a, b})
        base = ti | q
        fam.update(_chain_down(base, q, td))
        fam.add(ti | {a})
        fam.add(ti | {b})
        fam.update(_chain_down(td.path_family(a), ti | {a}, td))
        fam.update(_chain_down(td.path_family(b), ti | {b}, td))
    return sorted(fam, key=lambda s: (len(s), tuple(sorted(s))))
