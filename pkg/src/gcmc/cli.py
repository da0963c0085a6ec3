"""JSON-in, JSON-out command line front end."""

from __future__ import annotations

import argparse
import json
import sys

from .decomposition import FAMILY_REDUCED, DecompositionError
from .dp import StateSpaceError
from .graph import Instance, InstanceError, cut_value, is_feasible
from .minor import MinorError, VertexPartition, algorithm2
from .oracle import OracleError, brute_force_opt, certify_instance
from .pipeline import PipelineError, run_pipeline

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CAP = 2


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="gcmc",
        description="graph-constrained max-cut: LP relaxation, rounding, "
                    "certification")
    p.add_argument("--instance", required=True, help="instance JSON path")
    p.add_argument("--constraint", default=None,
                   help="override the instance's constraint")
    p.add_argument("--mode", default="solve",
                   choices=["solve", "certify", "algorithm2", "oracle"])
    p.add_argument("--family", default=FAMILY_REDUCED,
                   choices=["full", "reduced"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--partition", default=None,
                   help="partition JSON path (algorithm2 mode)")
    p.add_argument("--out", default=None, help="report path (default stdout)")
    p.add_argument("--human", action="store_true",
                   help="append a one-line summary on stderr")
    return p


def _load_instance(args) -> Instance:
    inst = Instance.load(args.instance)
    if args.constraint and args.constraint != inst.constraint:
        inst = Instance.make(inst.graph.n,
                             sorted(inst.graph.edges),
                             [(u, v, inst.weights.get(u, v))
                              for u, v in inst.weights.pairs()],
                             args.constraint)
    return inst


def _solve_report(inst: Instance, args) -> dict:
    pipe = run_pipeline(inst, family_mode=args.family)
    rounder = pipe.rounder()
    runs = [rounder.round_once(args.seed + t) for t in range(max(args.trials, 1))]
    best = max(runs, key=lambda r: (r.value, -r.seed))
    return {
        "mode": "solve",
        "constraint": inst.constraint,
        "family": args.family,
        "seed": args.seed,
        "trials": max(args.trials, 1),
        "lp_value": pipe.lp_value,
        "solution": sorted(best.result),
        "cut_value": best.value,
        "feasible": is_feasible(inst.graph, inst.constraint, best.result),
    }


def _certify_report(inst: Instance, args) -> dict:
    rep = certify_instance(inst, family_mode=args.family, mc_seed=args.seed)
    pipe = run_pipeline(inst, family_mode=args.family)
    audit = pipe.rounder().per_edge_cut_audit()
    return {
        "mode": "certify",
        "constraint": inst.constraint,
        "family": args.family,
        "opt_value": rep.opt_value,
        "opt_set": list(rep.opt_set),
        "feasible_count": rep.feasible_count,
        "lp_value": rep.lp_value,
        "expected_cut": rep.expected_cut,
        "ratio": rep.ratio,
        "exact_expectation": rep.exact,
        "audit": [
            {"pair": list(e["pair"]), "z": e["z"],
             "exact_cut_prob": e["exact_cut_prob"],
             "lca_case": e["lca_case"]}
            for e in audit
        ],
    }


def _algorithm2_report(inst: Instance, args) -> dict:
    if not args.partition:
        raise InstanceError("--partition is required in algorithm2 mode")
    with open(args.partition) as fh:
        data = json.load(fh)
    if not isinstance(data, dict) or "parts" not in data:
        raise InstanceError("partition file must be {\"parts\": [[...], ...]}")
    partition = VertexPartition.make(data["parts"], inst.graph.n)
    _, report = algorithm2(inst, partition, family_mode=args.family,
                           seed=args.seed,
                           trials=max(args.trials, 1) if args.trials > 1 else 200)
    report["mode"] = "algorithm2"
    return report


def _oracle_report(inst: Instance) -> dict:
    S, opt = brute_force_opt(inst)
    return {
        "mode": "oracle",
        "constraint": inst.constraint,
        "opt_value": opt,
        "opt_set": sorted(S),
    }


def run(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        inst = _load_instance(args)
        if args.mode == "solve":
            report = _solve_report(inst, args)
        elif args.mode == "certify":
            report = _certify_report(inst, args)
        elif args.mode == "algorithm2":
            report = _algorithm2_report(inst, args)
        else:
            report = _oracle_report(inst)
    except (OSError, json.JSONDecodeError, InstanceError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (StateSpaceError, DecompositionError, MinorError, OracleError,
            PipelineError) as exc:
        print(f"solve error: {exc}", file=sys.stderr)
        return EXIT_CAP

    text = json.dumps(report, sort_keys=True, indent=2)
    if args.out:
        try:
            with open(args.out, "w") as fh:
                fh.write(text + "\n")
        except OSError as exc:
            print(f"input error: {exc}", file=sys.stderr)
            return EXIT_INPUT
    else:
        print(text)
    if args.human:
        line = ", ".join(
            f"{k}={report[k]}" for k in ("mode", "lp_value", "cut_value",
                                         "opt_value", "ratio")
            if k in report)
        print(line, file=sys.stderr)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
