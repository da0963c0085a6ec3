"""Top-down randomized rounding of a fractional joint-state solution.

States are sampled node by node from the root downward.  At each internal
node the two child states are drawn jointly, conditioned on everything
already fixed on the node's root path, using the joint-state variables of
the enclosing path family set.  The output set is the union of the
required sets of all sampled states.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .graph import cut_value

MASS_TOL = 1e-12
DEFAULT_ENUM_CAP = 200_000


class RoundingError(RuntimeError):
    pass


@dataclass
class RoundingRun:
    seed: int
    chosen: dict          # node id -> sampled state index
    result: set           # rounded vertex set
    value: float          # cut value of the rounded set


class Rounder:
    """Samples integral solutions from the values of a solved model."""

    def __init__(self, model, values):
        self.model = model
        self.values = np.asarray(values, dtype=float)
        self.td = model.td
        self.dp = model.dp
        # internal nodes in breadth-first order; the path family of a child
        # is exactly the parent's family plus both children, so everything
        # a step conditions on is already fixed when the step runs
        self.internal = [i for i in self.td.nodes if self.td.children[i]]
        self._root_table = self._build_root_table()
        self._pair_support = {
            i: self._pair_states(i) for i in self.internal}
        self._table_memo = {}

    def _yval(self, nodes: tuple, assignment: tuple) -> float:
        return max(float(self.values[self.model.ycol(nodes, assignment)]), 0.0)

    def _viable(self, i: int, si: int) -> bool:
        dp = self.dp
        state = dp.states(i)[si]
        if not self.td.children[i]:
            return dp.leaf_feasible(i, state)
        return bool(dp.child_combos(i, state))

    def _build_root_table(self):
        r = self.td.root
        probs = [(si, self._yval((r,), (si,)))
                 for si in range(len(self.dp.states(r)))]
        return self._normalize(probs, [si for si, _ in probs
                                       if self._viable(r, si)])

    def _pair_states(self, i: int):
        dp = self.dp
        j1, j2 = self.td.children[i]
        out = {}
        for si, s in enumerate(dp.states(i)):
            out[si] = sorted(
                (dp.state_index(j1, w1), dp.state_index(j2, w2))
                for w1, w2 in dp.child_combos(i, s))
        return out

    @staticmethod
    def _normalize(weighted, fallback_support):
        total = sum(w for _, w in weighted)
        if total > MASS_TOL:
            return [(k, w / total) for k, w in weighted if w > 0.0]
        if not fallback_support:
            raise RoundingError("no viable option to sample from")
        p = 1.0 / len(fallback_support)
        return [(k, p) for k in fallback_support]

    def _child_table(self, i: int, assignment: dict):
        """Distribution over (state(j1), state(j2)) given the fixed context."""
        td = self.td
        j1, j2 = td.children[i]
        big = tuple(sorted(td.path_family(j1)))
        context = tuple(assignment[k] for k in big if k != j1 and k != j2)
        memo_key = (i, context)
        if memo_key in self._table_memo:
            return self._table_memo[memo_key]
        si = assignment[i]
        weighted = []
        for s1, s2 in self._pair_support[i][si]:
            asg = tuple(
                s1 if k == j1 else s2 if k == j2 else assignment[k]
                for k in big)
            weighted.append(((s1, s2), self._yval(big, asg)))
        fallback = [
            (s1, s2) for s1, s2 in self._pair_support[i][si]
            if self._viable(j1, s1) and self._viable(j2, s2)]
        table = self._normalize(weighted, fallback)
        self._table_memo[memo_key] = table
        return table

    @staticmethod
    def _draw(rng, table):
        x = rng.random() * sum(p for _, p in table)
        acc = 0.0
        for k, p in table:
            acc += p
            if x <= acc:
                return k
        return table[-1][0]

    def round_once(self, seed: int) -> RoundingRun:
        td, dp = self.td, self.dp
        assignment = {}
        rng = np.random.Generator(np.random.Philox(key=(seed << 64) + td.root))
        assignment[td.root] = self._draw(rng, self._root_table)
        for i in self.internal:
            j1, j2 = td.children[i]
            rng = np.random.Generator(np.random.Philox(key=(seed << 64) + i))
            s1, s2 = self._draw(rng, self._child_table(i, assignment))
            assignment[j1], assignment[j2] = s1, s2
        result = set()
        for i, si in assignment.items():
            result |= dp.required_set(i, dp.states(i)[si])
        value = cut_value(self.model.instance.weights, result,
                          self.model.instance.graph.n)
        return RoundingRun(seed, assignment, result, value)

    def enumerate_outcomes(self, cap: int = DEFAULT_ENUM_CAP):
        """All (probability, assignment) pairs of the rounding distribution."""
        out = []

        def rec(step: int, prob: float, assignment: dict):
            if len(out) > cap:
                raise RoundingError(
                    f"outcome enumeration exceeds cap {cap}")
            if step == len(self.internal):
                out.append((prob, dict(assignment)))
                return
            i = self.internal[step]
            j1, j2 = self.td.children[i]
            for (s1, s2), p in self._child_table(i, assignment):
                if p <= 0.0:
                    continue
                assignment[j1], assignment[j2] = s1, s2
                rec(step + 1, prob * p, assignment)
            assignment.pop(j1, None)
            assignment.pop(j2, None)

        for si, p in self._root_table:
            if p <= 0.0:
                continue
            rec(0, p, {self.td.root: si})
        return out

    def exact_expected_cut(self, cap: int = DEFAULT_ENUM_CAP) -> dict:
        """Closed-form expectation over the full rounding distribution."""
        dp = self.dp
        inst = self.model.instance
        pairs = inst.weights.pairs()
        expected = 0.0
        total_prob = 0.0
        pair_cut_prob = {p: 0.0 for p in pairs}
        vertex_prob = {u: 0.0 for u in range(inst.graph.n)}
        for prob, assignment in self.enumerate_outcomes(cap):
            chosen = set()
            for i, si in assignment.items():
                chosen |= dp.required_set(i, dp.states(i)[si])
            total_prob += prob
            expected += prob * cut_value(inst.weights, chosen, inst.graph.n)
            for u, v in pairs:
                if (u in chosen) != (v in chosen):
                    pair_cut_prob[(u, v)] += prob
            for u in chosen:
                vertex_prob[u] += prob
        return {
            "expected_cut": expected,
            "total_probability": total_prob,
            "pair_cut_probability": pair_cut_prob,
            "vertex_probability": vertex_prob,
        }

    def _z_split(self, u: int, v: int):
        """Directional decomposition of the pair's fractional cut mass."""
        td, dp = self.td, self.dp
        a, b = td.highest_node(u), td.highest_node(v)
        z_plus = z_minus = 0.0
        if a == b:
            for si, s in enumerate(dp.states(a)):
                req = dp.required_set(a, s)
                if u in req and v not in req:
                    z_plus += self._yval((a,), (si,))
                elif v in req and u not in req:
                    z_minus += self._yval((a,), (si,))
        else:
            key = tuple(sorted((a, b)))
            ia, ib = key.index(a), key.index(b)
            ranges = [range(len(dp.states(k))) for k in key]
            for asg in itertools.product(*ranges):
                su = dp.states(a)[asg[ia]]
                sv = dp.states(b)[asg[ib]]
                uin = u in dp.required_set(a, su)
                vin = v in dp.required_set(b, sv)
                if uin and not vin:
                    z_plus += self._yval(key, asg)
                elif vin and not uin:
                    z_minus += self._yval(key, asg)
        return z_plus, z_minus

    def per_edge_cut_audit(self, exact: dict | None = None) -> list[dict]:
        """Per weighted pair: fractional cut mass versus exact cut chance.

        A pair is an "ancestor" pair when one endpoint's highest node lies
        on the other's root path; there the cut chance matches the
        fractional mass.  Otherwise only half the mass is guaranteed.
        """
        td = self.td
        if exact is None:
            exact = self.exact_expected_cut()
        report = []
        for u, v in self.model.instance.weights.pairs():
            a, b = td.highest_node(u), td.highest_node(v)
            ancestor = a in td.path_family(b) or b in td.path_family(a)
            z_plus, z_minus = self._z_split(u, v)
            report.append({
                "pair": (u, v),
                "weight": self.model.instance.weights.get(u, v),
                "z": float(self.values[self.model.zcol(u, v)]),
                "z_plus": z_plus,
                "z_minus": z_minus,
                "exact_cut_prob": exact["pair_cut_probability"][(u, v)],
                "lca_case": not ancestor,
            })
        return report


def round_once(model, values, seed: int) -> RoundingRun:
    return Rounder(model, values).round_once(seed)


def exact_expected_cut(model, values, cap: int = DEFAULT_ENUM_CAP) -> dict:
    return Rounder(model, values).exact_expected_cut(cap)


def per_edge_cut_audit(model, values) -> list[dict]:
    return Rounder(model, values).per_edge_cut_audit()


def check_joint_inequality(table) -> bool:
    """For a 2x2 joint table of binary (X, Y): the product-form disagreement
    chance is at least half the joint disagreement mass,
    Pr(X=1)Pr(Y=0) + Pr(X=0)Pr(Y=1) >= (Pr(X=0,Y=1) + Pr(X=1,Y=0)) / 2.
    """
    t = np.asarray(table, dtype=float)
    if t.shape != (2, 2) or np.any(t < -1e-12) or abs(t.sum() - 1.0) > 1e-12:
        raise ValueError("table must be 2x2, non-negative, summing to 1")
    px1, py0 = t[1, :].sum(), t[:, 0].sum()
    px0, py1 = t[0, :].sum(), t[:, 1].sum()
    lhs = px1 * py0 + px0 * py1
    rhs = 0.5 * (t[0, 1] + t[1, 0])
    return lhs >= rhs - 1e-12


def half_cut_audit(rounder: Rounder, tol: float = 1e-7) -> dict:
    """Verify the half-mass cut guarantee pair by pair.

    Ancestor pairs must cut with probability equal to their fractional
    mass; all pairs must reach at least half of it.
    """
    audit = rounder.per_edge_cut_audit()
    worst_gap = 0.0
    ok = True
    for entry in audit:
        z, p = entry["z"], entry["exact_cut_prob"]
        if not entry["lca_case"] and abs(p - z) > tol:
            ok = False
        if p < z / 2.0 - tol:
            ok = False
        worst_gap = max(worst_gap, z / 2.0 - p)
    expected = sum(e["weight"] * e["exact_cut_prob"] for e in audit)
    half_lp = 0.5 * sum(e["weight"] * e["z"] for e in audit)
    return {
        "ok": ok and expected >= half_lp - tol,
        "expected_cut": expected,
        "half_lp_value": half_lp,
        "worst_pair_gap": worst_gap,
        "pairs": audit,
    }
