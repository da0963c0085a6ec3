"""Sparse LP over joint-state variables y(s(N)) and cut variables z_uv.

Pure equality rows plus [0,1] box bounds.  Invalid-combination and
infeasible-leaf variables are realized as upper-bound-0 fixings rather
than rows.  The empty node set gets a single column pinned to 1, which
makes the normalization row just another consistency row.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .decomposition import TreeDecomposition, variable_family
from .dp import ConstraintDP, state_label
from .graph import Instance


class ModelError(ValueError):
    pass


@dataclass
class LPModel:
    columns: list
    objective: np.ndarray
    rows: list            # (col_indices list, coefficients list, rhs)
    lower: np.ndarray
    upper: np.ndarray
    td: TreeDecomposition
    dp: ConstraintDP
    instance: Instance
    family: list
    col_index: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.col_index:
            self.col_index = {k: i for i, k in enumerate(self.columns)}

    @property
    def ncols(self) -> int:
        return len(self.columns)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def zcol(self, u: int, v: int) -> int:
        return self.col_index[("z", (min(u, v), max(u, v)))]

    def ycol(self, nodes: tuple, assignment: tuple) -> int:
        return self.col_index[("y", nodes, assignment)]

    def copy_with_bounds(self, lower=None, upper=None) -> "LPModel":
        return LPModel(
            self.columns,
            self.objective,
            self.rows,
            self.lower.copy() if lower is None else lower,
            self.upper.copy() if upper is None else upper,
            self.td, self.dp, self.instance, self.family, self.col_index,
        )


def make_family(instance: Instance, td: TreeDecomposition, mode: str):
    """Variable family for the instance's positively weighted pairs."""
    node_pairs = [
        (td.highest_node(u), td.highest_node(v))
        for u, v in instance.weights.pairs()
    ]
    return variable_family(td, mode, node_pairs)


def _assignment_ok(dp: ConstraintDP, nodes: tuple, assignment: tuple,
                   caches) -> bool:
    """False iff any consistency rule visible inside `nodes` is violated."""
    leaf_ok, pair_ok, left_ok, right_ok = caches
    pos = {k: p for p, k in enumerate(nodes)}
    for p, i in enumerate(nodes):
        ch = dp.td.children[i]
        if not ch:
            if not leaf_ok[i][assignment[p]]:
                return False
            continue
        j1, j2 = ch
        si = assignment[p]
        in1, in2 = j1 in pos, j2 in pos
        if in1 and in2:
            if (assignment[pos[j1]], assignment[pos[j2]]) not in pair_ok[i][si]:
                return False
        elif in1:
            if assignment[pos[j1]] not in left_ok[i][si]:
                return False
        elif in2:
            if assignment[pos[j2]] not in right_ok[i][si]:
                return False
    return True


def build_lp(instance: Instance, td: TreeDecomposition, dp: ConstraintDP,
             family=None) -> LPModel:
    if family is None:
        family = make_family(instance, td, "reduced")
    famset = {frozenset(s) for s in family}
    if frozenset() not in famset or frozenset({td.root}) not in famset:
        raise ModelError("family must contain the empty set and {root}")

    nstates = {i: len(dp.states(i)) for i in td.nodes}
    leaf_ok = {
        i: [dp.leaf_feasible(i, s) for s in dp.states(i)]
        for i in td.nodes if not td.children[i]
    }
    pair_ok, left_ok, right_ok = {}, {}, {}
    for i in td.nodes:
        if not td.children[i]:
            continue
        j1, j2 = td.children[i]
        pair_ok[i], left_ok[i], right_ok[i] = {}, {}, {}
        for si, s in enumerate(dp.states(i)):
            pairs = {
                (dp.state_index(j1, w1), dp.state_index(j2, w2))
                for w1, w2 in dp.child_combos(i, s)
            }
            pair_ok[i][si] = pairs
            left_ok[i][si] = {a for a, _ in pairs}
            right_ok[i][si] = {b for _, b in pairs}
    caches = (leaf_ok, pair_ok, left_ok, right_ok)

    columns = []
    upper_fix = []
    sets_sorted = [tuple(sorted(s)) for s in family]
    for nodes in sets_sorted:
        for assignment in itertools.product(*(range(nstates[k]) for k in nodes)):
            columns.append(("y", nodes, assignment))
            upper_fix.append(_assignment_ok(dp, nodes, assignment, caches))
    pairs = instance.weights.pairs()
    for p in pairs:
        columns.append(("z", p))

    ncols = len(columns)
    col_index = {k: i for i, k in enumerate(columns)}
    lower = np.zeros(ncols)
    upper = np.ones(ncols)
    for idx, ok in enumerate(upper_fix):
        if not ok:
            upper[idx] = 0.0
    empty_col = col_index[("y", (), ())]
    lower[empty_col] = 1.0

    rows = []
    # consistency rows: y(s(N)) = sum_{s(i)} y(s(N+{i})) for chain-adjacent sets
    for big in sets_sorted:
        bigset = frozenset(big)
        for i in big:
            small = tuple(k for k in big if k != i)
            if frozenset(small) not in famset:
                continue
            p = big.index(i)
            for asg in itertools.product(*(range(nstates[k]) for k in small)):
                cols = [col_index[("y", small, asg)]]
                coefs = [1.0]
                for si in range(nstates[i]):
                    cols.append(
                        col_index[("y", big, asg[:p] + (si,) + asg[p:])])
                    coefs.append(-1.0)
                rows.append((cols, coefs, 0.0))

    # cut definition rows: z_uv = cut-mass of the pair's highest-node states
    for u, v in pairs:
        a, b = td.highest_node(u), td.highest_node(v)
        cols = [col_index[("z", (u, v))]]
        coefs = [1.0]
        if a == b:
            key = (a,)
            if frozenset(key) not in famset:
                raise ModelError(f"family misses pair set {key}")
            for si, s in enumerate(dp.states(a)):
                req = dp.required_set(a, s)
                if (u in req) != (v in req):
                    cols.append(col_index[("y", key, (si,))])
                    coefs.append(-1.0)
        else:
            key = tuple(sorted((a, b)))
            if frozenset(key) not in famset:
                raise ModelError(f"family misses pair set {key}")
            ia, ib = key.index(a), key.index(b)
            for asg in itertools.product(range(nstates[key[0]]),
                                         range(nstates[key[1]])):
                su = dp.states(a)[asg[ia]]
                sv = dp.states(b)[asg[ib]]
                if (u in dp.required_set(a, su)) != (v in dp.required_set(b, sv)):
                    cols.append(col_index[("y", key, asg)])
                    coefs.append(-1.0)
        rows.append((cols, coefs, 0.0))

    objective = np.zeros(ncols)
    for u, v in pairs:
        objective[col_index[("z", (u, v))]] = instance.weights.get(u, v)

    return LPModel(columns, objective, rows, lower, upper,
                   td, dp, instance, family, col_index)


def embed_integral_solution(model: LPModel, S) -> np.ndarray:
    """Feasible 0/1 column vector induced by a feasible vertex set."""
    dp, td = model.dp, model.td
    assign = dp.states_of_solution(S)  # raises if infeasible
    aidx = {i: dp.state_index(i, s) for i, s in assign.items()}
    S = set(S)
    x = np.zeros(model.ncols)
    for idx, key in enumerate(model.columns):
        if key[0] == "y":
            _, nodes, asg = key
            x[idx] = 1.0 if all(aidx[k] == a for k, a in zip(nodes, asg)) else 0.0
        else:
            u, v = key[1]
            x[idx] = 1.0 if (u in S) != (v in S) else 0.0
    return x


def lp_statistics(model: LPModel) -> dict:
    return {
        "columns": model.ncols,
        "rows": model.nrows,
        "nonzeros": sum(len(cols) for cols, _, _ in model.rows),
    }


def objective_value(model: LPModel, x) -> float:
    return float(np.dot(model.objective, x))


def check_embedding(model: LPModel, x) -> float:
    """Max row/bound residual of a column vector (objective not checked)."""
    worst = 0.0
    for cols, coefs, rhs in model.rows:
        res = abs(sum(c * x[j] for j, c in zip(cols, coefs)) - rhs)
        worst = max(worst, res)
    worst = max(worst, float(np.max(model.lower - x, initial=0.0)))
    worst = max(worst, float(np.max(x - model.upper, initial=0.0)))
    return worst


def export_lp_text(model: LPModel) -> str:
    """Human-readable dump in an LP-like text format for cross-checking."""
    dp = model.dp

    def name(key):
        if key[0] == "z":
            return f"z_{key[1][0]}_{key[1][1]}"
        _, nodes, asg = key
        if not nodes:
            return "y_const"
        parts = [
            f"n{k}:{state_label(dp.kind, dp.states(k)[a])}"
            for k, a in zip(nodes, asg)
        ]
        return "y[" + ";".join(parts) + "]"

    out = ["Maximize"]
    terms = [
        f"{model.objective[j]:+g} {name(model.columns[j])}"
        for j in np.nonzero(model.objective)[0]
    ]
    out.append(" obj: " + " ".join(terms))
    out.append("Subject To")
    for k, (cols, coefs, rhs) in enumerate(model.rows):
        body = " ".join(
            f"{c:+g} {name(model.columns[j])}" for j, c in zip(cols, coefs))
        out.append(f" r{k}: {body} = {rhs:g}")
    out.append("Bounds")
    for j, key in enumerate(model.columns):
        out.append(f" {model.lower[j]:g} <= {name(key)} <= {model.upper[j]:g}")
    out.append("End")
    return "\n".join(out)
