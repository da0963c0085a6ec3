import numpy as np
import pytest

from gcmc.graph import Instance, cut_value, is_feasible
from gcmc.minor import (MinorError, VertexPartition, algorithm2,
                        contract_part, force_root_vertex)
from gcmc.simplex import solve

from conftest import BY_NAME, PARTITION_CASES, opt_for, pipeline_for


def test_partition_validation():
    with pytest.raises(MinorError):
        VertexPartition.make([[0, 1]], 3)
    with pytest.raises(MinorError):
        VertexPartition.make([[0], [0, 1]], 2)
    with pytest.raises(MinorError):
        VertexPartition.make([[0], []], 1)
    p = VertexPartition.make([[2], [0, 1]], 3)
    assert p.h == 2


def test_contract_p3_middle_by_hand():
    inst = BY_NAME["is-p3-unit"]
    ci = contract_part(inst.graph, inst.weights, [1], "vertex-cover")
    # vertices 0,2 keep ids 0,1; the contracted vertex is 2
    assert ci.v_new == 2
    assert ci.origin == {0: (0,), 1: (2,), 2: (1,)}
    g = ci.instance.graph
    assert {tuple(sorted(e)) for e in g.edges} == {(0, 2), (1, 2)}
    w = ci.instance.weights
    assert w.get(0, 2) == inst.weights.get(0, 1)
    assert w.get(1, 2) == inst.weights.get(1, 2)
    assert w.get(0, 1) == inst.weights.get(0, 2)


def test_contract_whole_graph():
    inst = BY_NAME["is-p5"]
    ci = contract_part(inst.graph, inst.weights, list(range(5)),
                       "vertex-cover")
    assert ci.instance.graph.n == 1
    assert ci.instance.weights.pairs() == []


def test_contract_singleton_is_renaming():
    inst = BY_NAME["vc-c4"]
    ci = contract_part(inst.graph, inst.weights, [3], "vertex-cover")
    assert ci.instance.graph.n == 4
    assert len(ci.instance.graph.edges) == len(inst.graph.edges)
    total_before = sum(inst.weights.get(u, v)
                       for u, v in inst.weights.pairs())
    total_after = sum(ci.instance.weights.get(u, v)
                      for u, v in ci.instance.weights.pairs())
    assert total_before == total_after


def test_contraction_cut_identity_random_sets():
    rng = np.random.default_rng(5)
    for name, parts in PARTITION_CASES:
        inst = BY_NAME[name]
        n = inst.graph.n
        for part in parts:
            ci = contract_part(inst.graph, inst.weights, part,
                               inst.constraint)
            outside = [u for u in range(n) if u not in set(part)]
            back = {new: old for new, olds in ci.origin.items()
                    for old in olds if len(olds) == 1}
            for _ in range(50):
                keep = [u for u in outside if rng.random() < 0.5]
                T_new = {new for new, olds in ci.origin.items()
                         if len(olds) == 1 and olds[0] in keep}
                lhs = cut_value(ci.instance.weights, T_new | {ci.v_new},
                                ci.instance.graph.n)
                rhs = cut_value(inst.weights, set(keep) | set(part), n)
                assert abs(lhs - rhs) < 1e-9


def test_force_root_vertex():
    inst = BY_NAME["ds-p4"]
    from gcmc.minor import _solve_forced
    for part in ([0, 1], [2, 3]):
        ci = contract_part(inst.graph, inst.weights, part, inst.constraint)
        model, result = _solve_forced(ci.instance, ci.v_new, "reduced", None)
        rounder_model = model
        from gcmc.rounding import Rounder
        r = Rounder(rounder_model, result.values)
        for seed in range(200):
            assert ci.v_new in r.round_once(seed).result


def test_force_root_vertex_requires_bag_membership():
    pipe = pipeline_for("ds-p4")
    outside = [u for u in range(4) if u not in pipe.td.bags[pipe.td.root]]
    if outside:
        with pytest.raises(MinorError):
            force_root_vertex(pipe.model, outside[0])


def test_algorithm2_outputs_feasible_sets():
    for name, parts in PARTITION_CASES:
        inst = BY_NAME[name]
        partition = VertexPartition.make(parts, inst.graph.n)
        S, report = algorithm2(inst, partition)
        assert is_feasible(inst.graph, inst.constraint, S), name
        assert report["h"] == len(parts)
        assert report["cut_value"] == cut_value(inst.weights, S, inst.graph.n)
        assert all(p["exact"] for p in report["parts"]), name


def test_algorithm2_guarantee():
    for name, parts in PARTITION_CASES:
        inst = BY_NAME[name]
        _, opt = opt_for(name)
        partition = VertexPartition.make(parts, inst.graph.n)
        _, report = algorithm2(inst, partition)
        bound = report["guarantee_factor"] * opt
        assert report["best_expected_value"] >= bound - 1e-6, (name, report)


def test_algorithm2_single_part_degenerate():
    inst = BY_NAME["is-p3-unit"]
    S, report = algorithm2(inst, VertexPartition.make([[0, 1, 2]], 3))
    assert S == set()
    assert report["guarantee_factor"] <= 0


def test_algorithm2_rejects_connectivity():
    inst = BY_NAME["conn-p3"]
    with pytest.raises(MinorError):
        algorithm2(inst, VertexPartition.make([[0], [1], [2]], 3))


def test_deletion_and_union_claims():
    rng = np.random.default_rng(11)
    for name, parts in PARTITION_CASES:
        inst = BY_NAME[name]
        n = inst.graph.n
        h = len(parts)
        if h < 3:
            continue  # factor (1 - 2/h) is non-positive below h = 3
        for _ in range(200):
            mask = int(rng.integers(0, 2 ** n))
            S = {u for u in range(n) if mask >> u & 1}
            base = cut_value(inst.weights, S, n)
            best_del = max(
                cut_value(inst.weights, S - set(p), n) for p in parts)
            best_uni = max(
                cut_value(inst.weights, S | set(p), n) for p in parts)
            assert best_del >= (1 - 2 / h) * base - 1e-9
            assert best_uni >= (1 - 2 / h) * base - 1e-9
