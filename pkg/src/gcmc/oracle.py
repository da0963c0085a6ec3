"""Exhaustive ground truth and end-to-end certification.

Everything here is the slow-but-trusted side of a dual-route check: the
solver stack is never compared against itself, only against direct
enumeration of the feasible family.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Instance, cut_value, is_feasible
from .pipeline import run_pipeline
from .rounding import DEFAULT_ENUM_CAP, RoundingError

BRUTE_FORCE_LIMIT = 24


class OracleError(ValueError):
    pass


@dataclass
class OracleReport:
    name: str
    opt_value: float
    opt_set: tuple
    feasible_count: int
    lp_value: float
    expected_cut: float
    ratio: float
    exact: bool           # expectation computed in closed form, not sampled


def enumerate_feasible(instance: Instance):
    """Yield every feasible vertex set as a sorted tuple, in bitmask order."""
    n = instance.graph.n
    if n > BRUTE_FORCE_LIMIT:
        raise OracleError(f"refusing 2^{n} enumeration (limit {BRUTE_FORCE_LIMIT})")
    for mask in range(1 << n):
        S = {u for u in range(n) if mask >> u & 1}
        if is_feasible(instance.graph, instance.constraint, S):
            yield tuple(sorted(S))


def brute_force_opt(instance: Instance):
    """(best set, best value); ties broken by lowest bitmask encoding."""
    best_set, best_val = None, -1.0
    for S in enumerate_feasible(instance):
        val = cut_value(instance.weights, S, instance.graph.n)
        if best_set is None or val > best_val + 1e-12:
            best_set, best_val = S, val
    if best_set is None:
        raise OracleError("no feasible set; constraints here always admit one")
    return set(best_set), best_val


def certify_instance(instance: Instance, name: str = "instance",
                     family_mode: str = "reduced",
                     enum_cap: int = DEFAULT_ENUM_CAP,
                     mc_trials: int = 50_000,
                     mc_seed: int = 0) -> OracleReport:
    """Full pipeline against brute force; exact expectation when enumerable."""
    opt_set, opt = brute_force_opt(instance)
    feasible_count = sum(1 for _ in enumerate_feasible(instance))
    pipe = run_pipeline(instance, family_mode=family_mode)
    rounder = pipe.rounder()
    try:
        expected = rounder.exact_expected_cut(enum_cap)["expected_cut"]
        exact = True
    except RoundingError:
        runs = [rounder.round_once(mc_seed + t).value for t in range(mc_trials)]
        expected = float(np.mean(runs))
        exact = False
    ratio = 1.0 if opt <= 1e-12 else expected / opt
    return OracleReport(name, opt, tuple(sorted(opt_set)), feasible_count,
                        pipe.lp_value, expected, ratio, exact)


def _path_edges(n):
    return [(i, i + 1) for i in range(n - 1)]


def _cycle_edges(n):
    return _path_edges(n) + [(n - 1, 0)]


def _all_pair_weights(n, seed, lo=1, hi=9):
    rng = np.random.default_rng(seed)
    return [
        (u, v, int(rng.integers(lo, hi + 1)))
        for u in range(n) for v in range(u + 1, n)
    ]


def _edge_weights(edges, seed, lo=1, hi=9):
    rng = np.random.default_rng(seed)
    return [(u, v, int(rng.integers(lo, hi + 1))) for u, v in edges]


def corpus() -> list[tuple[str, Instance]]:
    """Named test instances: treewidth 1-3, n 1..9, all four constraints."""
    out = []

    def add(name, n, edges, weights, constraint):
        out.append((name, Instance.make(n, edges, weights, constraint)))

    grid23 = [(0, 1), (1, 2), (3, 4), (4, 5), (0, 3), (1, 4), (2, 5)]
    diamond = [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]
    star = [(0, 1), (0, 2), (0, 3)]
    tree9 = [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6), (3, 7), (4, 8)]

    add("is-single", 1, [], [], "independent-set")
    add("is-p3-unit", 3, _path_edges(3),
        [(0, 1, 1), (0, 2, 1), (1, 2, 1)], "independent-set")
    add("is-p5", 5, _path_edges(5), _all_pair_weights(5, 11), "independent-set")
    add("is-c5", 5, _cycle_edges(5), _all_pair_weights(5, 12), "independent-set")
    add("is-star", 4, star, _all_pair_weights(4, 13), "independent-set")
    add("is-diamond", 4, diamond, _all_pair_weights(4, 14), "independent-set")
    add("is-grid23", 6, grid23, _all_pair_weights(6, 15), "independent-set")
    add("is-tree9", 9, tree9, _edge_weights(tree9, 16), "independent-set")

    add("vc-p2", 2, _path_edges(2), [(0, 1, 3)], "vertex-cover")
    add("vc-p4", 4, _path_edges(4), _all_pair_weights(4, 21), "vertex-cover")
    add("vc-c4", 4, _cycle_edges(4), _all_pair_weights(4, 22), "vertex-cover")
    add("vc-diamond", 4, diamond, _all_pair_weights(4, 23), "vertex-cover")
    add("vc-grid23", 6, grid23, _all_pair_weights(6, 24), "vertex-cover")
    add("vc-zero", 3, _path_edges(3), [], "vertex-cover")

    add("ds-p3", 3, _path_edges(3), _all_pair_weights(3, 31), "dominating-set")
    add("ds-p4", 4, _path_edges(4), _all_pair_weights(4, 32), "dominating-set")
    add("ds-star", 4, star, _all_pair_weights(4, 33), "dominating-set")
    add("ds-c4", 4, _cycle_edges(4), _all_pair_weights(4, 34), "dominating-set")

    add("conn-p3", 3, _path_edges(3), _all_pair_weights(3, 41), "connectivity")
    add("conn-p4", 4, _path_edges(4), _all_pair_weights(4, 42), "connectivity")
    add("conn-c4", 4, _cycle_edges(4), _all_pair_weights(4, 43), "connectivity")
    add("conn-star", 4, star, _all_pair_weights(4, 44), "connectivity")
    add("conn-diamond", 4, diamond, _all_pair_weights(4, 45), "connectivity")

    add("is-p7-sparse", 7, _path_edges(7),
        _edge_weights(_path_edges(7) + [(0, 6), (2, 5)], 51),
        "independent-set")
    add("vc-p8-sparse", 8, _path_edges(8),
        _edge_weights(_path_edges(8) + [(1, 6)], 52), "vertex-cover")

    return out


def corpus_instance(name: str) -> Instance:
    for key, inst in corpus():
        if key == name:
            return inst
    raise OracleError(f"unknown corpus instance {name!r}")
