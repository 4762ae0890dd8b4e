"""Command-line surface: parsing, dispatch, and JSON reports.

Reports are replayable: they echo the command, canonical inputs, seed, and
tolerances next to the results.  With --json the payload is byte-identical
across runs for fixed inputs and seed, except for the timing field.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import replace
from fractions import Fraction

from . import corpus as corpus_mod
from . import decomp, dynamics, fiberprod, permgrp
from .monodromy import group_order as _group_order, monodromy as _monodromy
from .expr import ParseError, parse, render
from .field import GaussianRational, INF
from .funcalg import DEGREE_GUARD, DegreeGuardError, RatFunc
from .fiberprod import FiberProductError
from .monodromy import MonodromyError
from .numerics import DEFAULT_OPTIONS, NumericsError
from .orbifold import (
    PortraitError,
    euler_characteristic,
    normalization_genus_class,
    nu_pair,
    ramification_portrait,
)

SCHEMA = 1

USAGE_EXIT = 64
PRECONDITION_EXIT = 1
NUMERIC_EXIT = 2


def ser_value(v):
    """JSON-safe encoding; exact rationals as strings, numerics with radii."""
    if v is None or isinstance(v, (bool, int, str)):
        return v
    if isinstance(v, float):
        return v
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}" if v.denominator != 1 else str(v.numerator)
    if isinstance(v, GaussianRational):
        return str(v)
    if v is INF:
        return "inf"
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag, "err": 0.0}
    if isinstance(v, RatFunc):
        return render(v)
    if isinstance(v, (list, tuple)):
        return [ser_value(x) for x in v]
    if isinstance(v, dict):
        return {str(k): ser_value(x) for k, x in v.items()}
    return str(v)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(USAGE_EXIT)


def _default_seed():
    env = os.environ.get("RITTDYN_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            pass
    return 0


def build_parser():
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--json", action="store_true", help="emit the JSON report")
    shared.add_argument("--seed", type=int, default=None, help="random seed (default 0 or RITTDYN_SEED)")
    shared.add_argument("--tol", type=float, default=None, help="numeric tolerance override")
    shared.add_argument("--degree-guard", type=int, default=None, help="degree guard override")

    p = _Parser(
        prog="rittdyn",
        description="tameness, decompositions, and orbit experiments for rational functions",
        parents=[shared],
    )
    sub = p.add_subparsers(dest="command")

    def cmd(name, **kw):
        sp = sub.add_parser(name, parents=[shared], **kw)
        return sp

    sp = cmd("info", help="portrait, signature, and genus class of a function")
    sp.add_argument("expr")
    sp = cmd("tame", help="tameness verdict with component evidence")
    sp.add_argument("expr")
    sp = cmd("curve", help="components and genera of A(x) - B(y) = 0")
    sp.add_argument("exprA")
    sp.add_argument("exprB")
    sp = cmd("decompose", help="decomposition classes of a function")
    sp.add_argument("expr")
    sp = cmd("stabilize", help="decompositions of iterates and the stabilization level")
    sp.add_argument("expr")
    sp.add_argument("--dmax", type=int, default=3)
    sp = cmd("equiv", help="elementary-transformation equivalence classes")
    sp.add_argument("expr")
    sp.add_argument("--depth", type=int, default=4)
    sp = cmd("special", help="power/Chebyshev/Lattes detection")
    sp.add_argument("expr")
    sp = cmd("monodromy", help="branch points and monodromy permutations")
    sp.add_argument("expr")
    sp.add_argument("--cap", type=int, default=None, help="group-order cap")
    sp = cmd("orbit", help="exact forward orbit")
    sp.add_argument("expr")
    sp.add_argument("--start", required=True)
    sp.add_argument("--horizon", type=int, default=12)
    sp = cmd("intersect", help="orbit intersection experiment")
    sp.add_argument("--A", required=True)
    sp.add_argument("--B", required=True)
    sp.add_argument("--x1", required=True)
    sp.add_argument("--x2", required=True)
    sp.add_argument("--horizon", type=int, default=12)
    sp = cmd("common-iterate", help="search for a common iterate")
    sp.add_argument("--A", required=True)
    sp.add_argument("--B", required=True)
    sp.add_argument("--bound", type=int, default=6)
    sp = cmd("bounds", help="genus lower bound and the two derived degree bounds")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    return p


def _parse_function(text, guard):
    return parse(text, corpus=corpus_mod.functions(), guard=guard)


def _parse_point(text):
    if text.strip() == "inf":
        return INF
    f = parse(text, corpus=None)
    if not f.is_constant():
        raise ParseError("a constant point is required", 0)
    return f.eval_exact(0)


def _options(args):
    opts = DEFAULT_OPTIONS
    if args.tol is not None:
        opts = opts.with_tol(args.tol)
    return opts


def _portrait_payload(port):
    return [
        {"value": ser_value(e.value), "partition": list(e.partition), "exact": e.exact}
        for e in port.branch_points
    ]


def _component_payload(comps):
    return [
        {
            "total_degree": c.total_degree,
            "deg_x": c.deg_x,
            "deg_y": c.deg_y,
            "genus": c.genus,
            "diagonal": c.is_diagonal,
        }
        for c in comps
    ]


def run_command(args) -> dict:
    seed = args.seed if args.seed is not None else _default_seed()
    guard = args.degree_guard if args.degree_guard is not None else DEGREE_GUARD
    opts = _options(args)
    command = args.command
    results = {}
    inputs = {}
    checks = []

    if command == "info":
        f = _parse_function(args.expr, guard)
        inputs["f"] = f
        port = ramification_portrait(f, opts)
        _, o2 = nu_pair(f, port)
        results = {
            "degree": f.degree,
            "canonical": render(f),
            "branch_points": _portrait_payload(port),
            "signature": list(o2.signature().values),
            "chi": ser_value(euler_characteristic(o2)),
            "genus_class": normalization_genus_class(f, port).value,
        }
        checks = ["riemann_hurwitz", "signature_list_cross_check"]

    elif command == "tame":
        f = _parse_function(args.expr, guard)
        inputs["f"] = f
        rep = fiberprod.tameness(f, seed=seed)
        results = {
            "verdict": rep.verdict,
            "fast_path": rep.fast_path,
            "components": _component_payload(rep.components),
            "nondiagonal_genera": list(rep.genera),
        }
        checks = ["product_one", "transitivity", "cycle_types", "orbit_partition"]

    elif command == "curve":
        a = _parse_function(args.exprA, guard)
        b = _parse_function(args.exprB, guard)
        inputs["A"] = a
        inputs["B"] = b
        comps = fiberprod.curve_components(a, b, seed=seed)
        results = {"components": _component_payload(comps)}
        checks = ["product_one", "transitivity", "cycle_types", "orbit_partition"]

    elif command == "decompose":
        f = _parse_function(args.expr, guard)
        inputs["f"] = f
        if f.is_polynomial():
            classes = decomp.poly_decompose(f)
        else:
            classes = decomp.decompositions_from_monodromy(f, seed=seed)
        payload = []
        for c in classes:
            payload.append(
                {
                    "U": ser_value(c.U) if c.exact else None,
                    "V": ser_value(c.V) if c.exact else None,
                    "trivial": c.is_trivial if c.exact else False,
                    "exact": c.exact,
                    "block_system": list(c.block_labels) if c.block_labels else None,
                }
            )
        results = {"classes": payload}
        checks = ["recomposition"]

    elif command == "stabilize":
        f = _parse_function(args.expr, guard)
        inputs["f"] = f
        rep = decomp.induced_stabilization(f, args.dmax, seed=seed, guard=guard)
        levels = {}
        for d, infos in rep.levels.items():
            levels[str(d)] = [
                {
                    "U": ser_value(i.cls.U) if i.cls.exact else None,
                    "V": ser_value(i.cls.V) if i.cls.exact else None,
                    "induced_from": list(i.induced_from),
                }
                for i in infos
            ]
        results = {"levels": levels, "stable_n": rep.stable_n, "status": rep.status, "note": rep.note}
        checks = ["recomposition", "divide_left_induction"]

    elif command == "equiv":
        f = _parse_function(args.expr, guard)
        inputs["f"] = f
        rep = decomp.equivalence_classes(f, depth=args.depth, seed=seed)
        results = {
            "count": rep.count,
            "status": rep.status,
            "representatives": [ser_value(r) for r in rep.representatives],
            "edges": [
                {"src": e.src, "dst": e.dst, "U": ser_value(e.U), "V": ser_value(e.V)}
                for e in rep.edges
            ],
            "undecided": rep.undecided,
        }
        checks = ["edge_recomposition"]

    elif command == "special":
        f = _parse_function(args.expr, guard)
        inputs["f"] = f
        verdict = dynamics.special_detect(f)
        witness = {}
        for k, v in verdict.witness.items():
            if k == "mobius":
                witness[k] = ser_value(v.to_ratfunc())
            elif k == "nu":
                witness[k] = {str(p): int(x) for p, x in v.items()}
            else:
                witness[k] = ser_value(v)
        results = {"kind": verdict.kind, "witness": witness}
        checks = ["exact_witness_verification"]

    elif command == "monodromy":
        f = _parse_function(args.expr, guard)
        inputs["f"] = f
        m = _monodromy(f, seed=seed, options=opts)
        order = _group_order(m, cap=args.cap)
        results = {
            "base_point": ser_value(m.base_point),
            "branch_points": [ser_value(v) for v in m.branch_points],
            "permutations": [permgrp.format_cycles(p) for p in m.permutations],
            "cycle_types": [list(permgrp.cycle_type(p)) for p in m.permutations],
            "group_order": order if isinstance(order, int) else str(order),
        }
        checks = ["product_one", "transitivity", "cycle_types", "order_divisibility"]

    elif command == "orbit":
        f = _parse_function(args.expr, guard)
        inputs["f"] = f
        start = _parse_point(args.start)
        rec = dynamics.orbit(f, start, args.horizon)
        results = {
            "start": ser_value(start),
            "points": [ser_value(p) for p in rec.points],
            "preperiodic": list(rec.preperiodic) if rec.preperiodic else None,
            "truncated": rec.truncated,
        }
        checks = ["exact_iteration"]

    elif command == "intersect":
        a = _parse_function(args.A, guard)
        b = _parse_function(args.B, guard)
        inputs["A"] = a
        inputs["B"] = b
        x1 = _parse_point(args.x1)
        x2 = _parse_point(args.x2)
        rep = dynamics.orbit_intersect(a, x1, b, x2, args.horizon)
        results = {
            "matches": [[k, l, ser_value(p)] for k, l, p in rep.matches],
            "note": rep.within_horizon_note,
            "truncated": rep.truncated,
            "prime_sets_agree": dynamics.prime_set_check(a, b),
        }
        checks = ["exact_point_hashing"]

    elif command == "common-iterate":
        a = _parse_function(args.A, guard)
        b = _parse_function(args.B, guard)
        inputs["A"] = a
        inputs["B"] = b
        got = dynamics.common_iterate_search(a, b, args.bound, guard=guard)
        results = {"result": list(got) if got else None}
        checks = ["exact_equality"]

    elif command == "bounds":
        results = {
            "genus_bound": ser_value(fiberprod.genus_bound(args.n, args.m)),
            "c1": fiberprod.bound_c1(args.n),
            "c2": fiberprod.bound_c2(args.n),
        }
        checks = ["formula_evaluation"]

    else:
        raise SystemExit(USAGE_EXIT)

    return {
        "schema": SCHEMA,
        "command": command,
        "inputs": {k: render(v) for k, v in inputs.items()},
        "seed": seed,
        "tolerances": {
            "root_tol": opts.root_tol,
            "cluster_rtol": opts.cluster_rtol,
            "tracking_rtol": opts.rtol,
        },
        "results": results,
        "checks": checks,
    }


def _human(report):
    lines = [f"# {report['command']}"]
    for k, v in report["inputs"].items():
        lines.append(f"{k} = {v}")
    lines.append(f"seed = {report['seed']}")

    def walk(obj, indent=0):
        pad = "  " * indent
        if isinstance(obj, dict):
            for k, v in obj.items():
                if isinstance(v, (dict, list)) and v:
                    lines.append(f"{pad}{k}:")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}{k}: {v}")
        elif isinstance(obj, list):
            for v in obj:
                if isinstance(v, (dict, list)):
                    walk(v, indent)
                    lines.append(pad + "-")
                else:
                    lines.append(f"{pad}- {v}")

    walk(report["results"])
    lines.append(f"checks: {', '.join(report['checks'])}")
    return "\n".join(lines)


def execute(argv) -> int:
    """Run one command; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else USAGE_EXIT
    if args.command is None:
        parser.print_usage()
        return USAGE_EXIT
    t0 = time.perf_counter()
    try:
        report = run_command(args)
    except (ParseError, ValueError, DegreeGuardError, ZeroDivisionError) as err:
        print(f"precondition error: {err}", file=sys.stderr)
        return PRECONDITION_EXIT
    except (NumericsError, MonodromyError, PortraitError, FiberProductError,
            decomp.DecompositionError) as err:
        print(f"numeric failure: {err}", file=sys.stderr)
        return NUMERIC_EXIT
    report["timing_ms"] = round(1000.0 * (time.perf_counter() - t0), 3)
    if args.json:
        payload = dict(report)
        timing = payload.pop("timing_ms")
        out = json.dumps(payload, sort_keys=True)
        # timing rides in a trailing field so the stable prefix is byte-identical
        print(out[:-1] + f', "timing_ms": {timing}}}')
    else:
        print(_human(report))
        print(f"[{report['timing_ms']} ms]")
    return 0


def main():
    raise SystemExit(execute(sys.argv[1:]))


if __name__ == "__main__":
    main()
