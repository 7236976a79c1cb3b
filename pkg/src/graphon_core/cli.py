"""Command-line interface.

Exit codes: 0 success, 2 input error, 3 verification or oracle failure.
Graphon inputs are either a JSON file (``--input``) or a family spec string
(``--spec``, e.g. ``twoblock:0.5,0.2,0.5``); ``--blocks m`` averages the
input onto m equal blocks and is required for ``min``.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import core, cutmetric, finite, verify
from .errors import GraphonError
from .graphon import AnalyticGraphon, StepGraphon, discretize, edge_density, resample

EXIT_INPUT = 2
EXIT_CHECK = 3


class InputError(Exception):
    pass


def _emit(obj) -> None:
    # repr-based float formatting is the shortest round-trip representation
    print(json.dumps(obj, indent=2, ensure_ascii=False))


def _load_json_graphon(path: str) -> StepGraphon:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as e:
        raise InputError(f"input: cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"input: {path} is not valid JSON ({e.msg})") from None
    if not isinstance(data, dict):
        raise InputError("input: expected an object with 'boundaries' and 'values'")
    return StepGraphon.from_dict(data)


def resolve(spec: str | None = None, path: str | None = None, blocks: int | None = None):
    """Turn CLI arguments into a StepGraphon."""
    if (spec is None) == (path is None):
        raise InputError("give exactly one of --spec or --input")
    if path is not None:
        g = _load_json_graphon(path)
        return resample(g, np.linspace(0.0, 1.0, blocks + 1)) if blocks else g
    a = AnalyticGraphon.parse(spec)
    if blocks:
        return discretize(a, blocks)
    if not a.is_step:
        raise InputError(f"--blocks: '{spec}' has no exact step form; pass --blocks m")
    return a.to_step()


def _operand(value: str, blocks: int | None) -> StepGraphon:
    """``--a``/``--b`` accept a JSON path or a spec string."""
    if value.endswith(".json") or os.path.exists(value):
        return resolve(path=value, blocks=blocks)
    return resolve(spec=value, blocks=blocks)


def _graphon(args) -> StepGraphon:
    return resolve(args.spec, args.input, args.blocks)


def _read_graph(path: str) -> finite.FiniteGraph:
    try:
        with open(path) as fh:
            return finite.read_edges(fh)
    except OSError as e:
        raise InputError(f"input: cannot read {path}: {e.strerror}") from None


# --- commands ------------------------------------------------------------------


def cmd_core(args) -> int:
    g = _graphon(args)
    tr = core.kappa_core(g, args.kappa)
    _emit({
        "kappa": args.kappa,
        "boundaries": g.boundaries.tolist(),
        "stages": [K.blocks for K in tr.stages],
        "stage_masses": [K.mass for K in tr.stages],
        "terminal_blocks": tr.terminal.blocks,
        "mass": tr.terminal.mass,
    })
    return 0


def cmd_degeneracy(args) -> int:
    g = _graphon(args)
    dec = core.decompose(g)
    out = {"degeneracy": dec.degeneracy, "blocks": g.m}
    status = 0
    if args.oracle:
        value, witness = core.brute_force_degeneracy(g)
        out.update(oracle=value, witness=witness)
        if abs(value - dec.degeneracy) > verify.assert_tol():
            status = EXIT_CHECK
    _emit(out)
    return status


def cmd_shells(args) -> int:
    g = _graphon(args)
    dec = core.decompose(g)
    out = {"boundaries": g.boundaries.tolist(), "shells": dec.shells.tolist(),
           "degeneracy": dec.degeneracy,
           "peel_order": [list(p) for p in dec.peel_order]}
    status = 0
    if args.oracle:
        bf = core.brute_force_shells(g)
        out["oracle"] = bf.tolist()
        if np.any(np.abs(bf - dec.shells) > verify.assert_tol()):
            status = EXIT_CHECK
    _emit(out)
    return status


def cmd_density(args) -> int:
    g = _graphon(args)
    e = edge_density(g)
    out = {"edge_density": e}
    status = 0
    if args.oracle:
        mu = g.masses
        loops = sum(g.values[i, j] * mu[i] * mu[j] for i in range(g.m) for j in range(g.m))
        out["oracle"] = float(loops)
        if abs(loops - e) > verify.assert_tol():
            status = EXIT_CHECK
    _emit(out)
    return status


def cmd_cutnorm(args) -> int:
    g1, g2 = _operand(args.a, args.blocks), _operand(args.b, args.blocks)
    w = cutmetric.cut_norm(g1, g2)
    out = {"value": w.value, "S": list(w.S), "T": list(w.T), "sign": w.sign,
           "boundaries": w.boundaries.tolist()}
    status = 0
    if args.oracle:
        bf = cutmetric.cut_norm_bruteforce(g1, g2)
        out["oracle"] = bf
        if abs(bf - w.value) > verify.assert_tol():
            status = EXIT_CHECK
    _emit(out)
    return status


def cmd_cutdist(args) -> int:
    g1, g2 = _operand(args.a, args.blocks), _operand(args.b, args.blocks)
    est = cutmetric.delta_box_bounds(g1, g2, args.grid, args.mode, seed=args.seed)
    _emit({"lower": est.lower, "upper": est.upper, "certified_upper": est.certified_upper,
           "defects": list(est.defects), "best_permutation": list(est.best_permutation),
           "method": est.method})
    return 0


def cmd_sample(args) -> int:
    if args.spec is not None and args.blocks is None:
        src = AnalyticGraphon.parse(args.spec)
    else:
        src = _graphon(args)
    G = finite.sample_graph(src, args.n, args.seed)
    if args.out:
        with open(args.out, "w") as fh:
            finite.write_edges(G, fh)
    else:
        finite.write_edges(G, sys.stdout)
    return 0


def cmd_graph_core(args) -> int:
    G = _read_graph(args.input)
    if args.k is not None:
        nodes = sorted(finite.k_core(G, args.k))
        _emit({"k": args.k, "nodes": nodes, "size": len(nodes)})
    else:
        res = finite.graph_decompose(G)
        _emit({"degeneracy": res.degeneracy, "shells": list(res.shells)})
    return 0


def cmd_kwpr(args) -> int:
    rep = finite.check_kwpr(_read_graph(args.input))
    if args.json:
        _emit({"lower": rep.lower, "edges": rep.edges, "upper": rep.upper,
               "degeneracy": rep.degeneracy, "holds": rep.holds})
    else:
        print(rep)
    return 0 if rep.holds else EXIT_CHECK


def cmd_verify(args) -> int:
    suites = [s for s in verify.SUITE_NAMES if s != "all"] if args.suite == "all" else [args.suite]
    reports = [verify.run_suite(s, args.trials, args.seed) for s in suites]
    out = [r.to_dict() for r in reports]
    _emit(out[0] if len(out) == 1 else out)
    return 0 if all(r.ok for r in reports) else EXIT_CHECK


def cmd_curve(args) -> int:
    g = _graphon(args)
    grid = np.linspace(0.0, 1.0, args.grid)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["kappa", "mass"])
    for k, mass in core.mass_of_core_curve(g, grid):
        w.writerow([repr(k), repr(mass)])
    return 0


# --- parser --------------------------------------------------------------------


def _add_graphon_args(p):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--spec", help="family spec: min, const:a, twoblock:a,b,alpha, lower:d, upper:d, appendix:N")
    src.add_argument("--input", help="StepGraphon JSON file")
    p.add_argument("--blocks", type=int, help="average onto this many equal blocks")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphon-core", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("core", help="kappa-core iteration")
    _add_graphon_args(p)
    p.add_argument("--kappa", type=float, required=True)
    p.set_defaults(func=cmd_core)

    for name, fn, text in (("degeneracy", cmd_degeneracy, "degeneracy by peeling"),
                           ("shells", cmd_shells, "shell index per block"),
                           ("density", cmd_density, "edge density")):
        p = sub.add_parser(name, help=text)
        _add_graphon_args(p)
        p.add_argument("--oracle", action="store_true", help="cross-check by brute force")
        p.set_defaults(func=fn)

    for name, fn in (("cutnorm", cmd_cutnorm), ("cutdist", cmd_cutdist)):
        p = sub.add_parser(name, help="cut norm" if name == "cutnorm" else "cut distance bounds")
        p.add_argument("--a", required=True, help="spec string or JSON path")
        p.add_argument("--b", required=True, help="spec string or JSON path")
        p.add_argument("--blocks", type=int)
        if name == "cutnorm":
            p.add_argument("--oracle", action="store_true")
        else:
            p.add_argument("--grid", type=int, default=4)
            p.add_argument("--mode", choices=["exhaustive", "local"], default="exhaustive")
            p.add_argument("--seed", type=int, default=0)
        p.set_defaults(func=fn)

    p = sub.add_parser("sample", help="sample a finite graph from a graphon")
    _add_graphon_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("graph-core", help="k-core of an edge list")
    p.add_argument("--input", required=True)
    p.add_argument("--k", type=int)
    p.set_defaults(func=cmd_graph_core)

    p = sub.add_parser("kwpr", help="check the degeneracy / edge-count inequality")
    p.add_argument("--input", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_kwpr)

    p = sub.add_parser("verify", help="run property suites")
    p.add_argument("--suite", choices=verify.SUITE_NAMES, default="all")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("curve", help="CSV of (kappa, core mass)")
    _add_graphon_args(p)
    p.add_argument("--grid", type=int, default=101, help="number of equally spaced kappa values")
    p.set_defaults(func=cmd_curve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, GraphonError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
