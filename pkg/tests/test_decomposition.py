import pytest
from hypothesis import given, settings, strategies as st

from gcmc.decomposition import (DecompositionError, build_tree_decomposition,
                                validate_tree_decomposition, variable_family)
from gcmc.graph import ConstraintGraph

from conftest import BY_NAME, NAMES


def _random_graph(n, data):
    edges = [
        (u, v) for u in range(n) for v in range(u + 1, n)
        if data.draw(st.booleans(), label=f"e{u}{v}")
    ]
    return ConstraintGraph.from_edges(n, edges)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.data())
def test_build_validates_on_random_graphs(n, data):
    g = _random_graph(n, data)
    td = build_tree_decomposition(g)
    validate_tree_decomposition(g, td)


def test_every_corpus_decomposition_validates():
    for name in NAMES:
        inst = BY_NAME[name]
        td = build_tree_decomposition(inst.graph)
        validate_tree_decomposition(inst.graph, td)
        # nodes are binary: zero or two children
        for i in td.nodes:
            assert len(td.children[i]) in (0, 2)


def test_root_contains_respected():
    g = ConstraintGraph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    for v in range(5):
        td = build_tree_decomposition(g, root_contains=v)
        assert v in td.bags[td.root]


def test_path_family_structure():
    g = ConstraintGraph.from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)])
    td = build_tree_decomposition(g)
    for i in td.nodes:
        fam = td.path_family(i)
        assert i in fam
        assert td.root in fam
        # every non-path member is a child of a path node
        path = set(td.path_to_root(i))
        for k in fam - path:
            assert td.parent[k] in path


def test_subtree_vertices_cover():
    g = ConstraintGraph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    td = build_tree_decomposition(g)
    assert td.subtree_vertices(td.root) == frozenset(range(4))
    for i in td.nodes:
        acc = set(td.bags[i])
        for c in td.children[i]:
            acc |= td.subtree_vertices(c)
        assert td.subtree_vertices(i) == frozenset(acc)


def test_highest_node_is_shallowest():
    g = ConstraintGraph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    td = build_tree_decomposition(g)
    for u in range(5):
        h = td.highest_node(u)
        assert u in td.bags[h]
        for i in td.nodes:
            if u in td.bags[i]:
                assert td.depth[h] <= td.depth[i]


def test_reduced_family_contains_required_sets():
    g = ConstraintGraph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    td = build_tree_decomposition(g)
    pairs = [(td.highest_node(0), td.highest_node(4))]
    fam = set(variable_family(td, "reduced", pairs))
    assert frozenset() in fam
    for i in td.nodes:
        assert td.path_family(i) in fam
        if td.children[i]:
            assert td.path_family(i) | set(td.children[i]) in fam
    a, b = pairs[0]
    assert frozenset({a, b}) in fam


def test_reduced_family_is_chain_connected():
    # adjacency big <-> big minus one node induces the consistency rows;
    # that relation must connect every member to the empty set, or some
    # column's mass would float free of the normalization
    for name in ("is-p5", "conn-diamond", "vc-grid23"):
        inst = BY_NAME[name]
        td = build_tree_decomposition(inst.graph)
        pairs = [
            (td.highest_node(u), td.highest_node(v))
            for u, v in inst.weights.pairs()
        ]
        fam = set(variable_family(td, "reduced", pairs))
        reached = {frozenset()}
        frontier = [frozenset()]
        while frontier:
            cur = frontier.pop()
            for other in fam:
                if other in reached:
                    continue
                small, big = sorted((cur, other), key=len)
                if len(big) == len(small) + 1 and small < big:
                    reached.add(other)
                    frontier.append(other)
        assert reached == fam


def test_full_family_is_all_subsets():
    g = ConstraintGraph.from_edges(3, [(0, 1), (1, 2)])
    td = build_tree_decomposition(g)
    fam = variable_family(td, "full", [])
    ground = frozenset(td.nodes)
    assert len(fam) == 2 ** len(ground)


def test_unknown_mode_rejected():
    g = ConstraintGraph.from_edges(2, [(0, 1)])
    td = build_tree_decomposition(g)
    with pytest.raises(DecompositionError):
        variable_family(td, "bogus", [])
