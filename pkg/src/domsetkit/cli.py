"""Command line front end: ``domsetkit <command> ...``.

Exit codes: 0 success, 2 parse or input errors, 3 infeasible input or a
failed contract check, 4 a resource cap was hit.
"""

import argparse
import csv
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from importlib import resources

import jsonschema

from . import graph as gr
from .approxk import TradeoffConfig, approx_tradeoff, parse_alpha
from .compress import compress, lift, rds_brute, replay, trace_from_jsonl, trace_to_jsonl
from .decomp import decompose_bounded, decompose_raw_input, format_td, parse_td, verify as verify_td
from .dptw import approx2_tw, solve_exact_tw, solve_half_width
from .errors import DomsetError, InfeasibleError, InputError, ResourceError, ValidationError
from .fes import fes_modulator, solve_exact_fes
from .fileio import format_graph, format_solution, parse_graph, parse_solution
from .graph import fes_number, is_dominating, undominated
from .modulator import ModulatorInstance, approx2_twd, find_modulator, solve_exact_vc
from .oracle import brute_min_dominating
from .setcover import harmonic

ORACLE_CAP = 14
WIDTH_CAP = 12
ALGOS = ("vc-exact", "tw-exact", "tw-half", "tw-approx2", "twd-approx2", "fes-exact", "approx-k")
EXIT_INPUT, EXIT_CONTRACT, EXIT_RESOURCE = 2, 3, 4


def load_schema():
    return json.loads(resources.files("domsetkit").joinpath("report_schema.json").read_text())


def _read(path):
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError("cannot read %s: %s" % (path, exc.strerror))


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _one_based(vertices):
    return [v + 1 for v in sorted(vertices)]


def _decomposition(g, td_path):
    if td_path:
        raw, n = parse_td(_read(td_path))
        if n != g.n:
            raise InputError("decomposition is for %d vertices, graph has %d" % (n, g.n))
        td = decompose_raw_input(raw, g)
    else:
        td = decompose_bounded(g, max(g.n, 3))
    if td.width > WIDTH_CAP:
        raise ResourceError("width", td.width, WIDTH_CAP)
    return td


def run_algorithm(gf, algo, opts):
    """Run one algorithm on a parsed graph file.

    Returns ``(solution, params, extra)``; ``extra`` holds optional report
    fields such as a certificate or the modulator log.
    """
    g = gf.graph
    params, extra = {}, {}
    if algo == "vc-exact":
        sol, _ = solve_exact_vc(g)
        params["vc"] = len(gr.min_vertex_cover(g))
    elif algo in ("tw-exact", "tw-half"):
        td = _decomposition(g, opts.get("td"))
        targets = opts.get("targets")
        res = solve_exact_tw(g, None, td) if algo == "tw-exact" or targets is None \
            else solve_half_width(g, None, td, targets)
        sol = res.solution
        params["width"] = td.width
    elif algo == "tw-approx2":
        td = _decomposition(g, opts.get("td"))
        res = approx2_tw(g, None, td)
        sol = res.solution
        params["width"] = td.width
        extra["certificate"] = res.certificate
    elif algo == "twd-approx2":
        d = opts.get("d", 2)
        mod = gf.modulator if gf.modulator is not None else find_modulator(g, d)
        res = approx2_twd(ModulatorInstance(g, mod, d))
        sol = res.solution
        params.update(modulator_size=len(set(mod)), d=d)
        cert = dict(res.certificate)
        cert["s1"], cert["s2"] = _one_based(cert["s1"]), _one_based(cert["s2"])
        cert["modulator"] = _one_based(cert["modulator"])
        extra["certificate"] = cert
        extra["modulator"] = {"modulator": _one_based(mod), "d": d}
    elif algo == "fes-exact":
        mres = fes_modulator(g)
        sol, _ = solve_exact_fes(g)
        params.update(fes=fes_number(g), modulator_size=len(mres.modulator))
        extra["modulator"] = _modulator_json(mres)
    elif algo == "approx-k":
        alpha = parse_alpha(opts.get("alpha", "0"))
        k = opts.get("k")
        if k is None:
            raise InputError("approx-k needs --k")
        cfg = TradeoffConfig(alpha, k, verbose=opts.get("verbose", False))
        sol, _, rep = approx_tradeoff(g.unweighted(), cfg)
        params.update(k=k, alpha="%d/%d" % (alpha.numerator, alpha.denominator))
        extra["certificate"] = {"guess_size": rep.guess_size, "subsets_tried": rep.subsets_tried,
                                "best_guess": _one_based(rep.best_guess), "early_exit": rep.early_exit}
        if cfg.verbose:
            extra["iterations"] = [{"guess": _one_based(it["guess"]), "size": it["size"]}
                                   for it in rep.iterations]
    else:
        raise InputError("unknown algorithm %r" % algo)
    return frozenset(sol), params, extra


def _modulator_json(mres):
    """Modulator plus deactivation log, 1-based."""
    out = mres.to_json()
    out["modulator"] = _one_based(out["modulator"])
    out["non_tree_edges"] = [[t + 1, b + 1] for t, b in out["non_tree_edges"]]
    for r in out["removals"]:
        r["vertex"] += 1
        r["deactivated"] = [[t + 1, b + 1] for t, b in r["deactivated"]]
    return out


def _oracle_check(g, algo, sol, weight, params, requested):
    if not requested:
        return {"status": "not requested"}
    if g.n > ORACLE_CAP:
        return {"status": "skipped: cap"}
    if algo == "approx-k":
        opt = brute_min_dominating(g.unweighted()).weight
        value = len(sol)
        guess = int(parse_alpha(params["alpha"]) * params["k"]) + 1
        # loose form of the additive bound: H of the largest closed
        # neighbourhood never exceeds H(n)
        ok = opt > guess or value <= opt + harmonic(g.n + 1)
    else:
        opt = brute_min_dominating(g).weight
        value = weight
        factor = 2 if "approx2" in algo else 1
        ok = value <= factor * opt
    ratio = value / opt if opt else 1.0
    return {"status": "ok", "opt": opt, "ratio": ratio, "within_contract": bool(ok)}


def build_report(gf, algo, opts, check_oracle=False):
    start = time.perf_counter()
    sol, params, extra = run_algorithm(gf, algo, opts)
    elapsed = (time.perf_counter() - start) * 1000
    g = gf.graph
    weight = g.weight(sol)
    report = {
        "algorithm": algo,
        "parameters": params,
        "solution": _one_based(sol),
        "weight": weight,
        "size": len(sol),
        "verification": {
            "dominating": is_dominating(g, sol),
            "oracle": _oracle_check(g, algo, sol, weight, params, check_oracle),
        },
        "time_ms": elapsed,
    }
    report.update(extra)
    jsonschema.validate(report, load_schema())
    return report


# ------------------------------------------------------------------ commands

def cmd_solve(args):
    gf = parse_graph(_read(args.graph))
    opts = {"td": args.td, "d": args.d, "k": args.k, "alpha": args.alpha, "verbose": args.verbose}
    if args.targets:
        opts["targets"] = [int(t) - 1 for t in args.targets.split(",") if t]
    if args.emit_modulator and args.algo not in ("fes-exact", "twd-approx2"):
        raise InputError("--emit-modulator needs a modulator-based algorithm")
    report = build_report(gf, args.algo, opts, args.check_oracle)
    if args.emit_modulator:
        _write(args.emit_modulator, json.dumps(report["modulator"], indent=2) + "\n")
    _write(args.out, json.dumps(report, indent=2) + "\n")
    ver = report["verification"]
    if not ver["dominating"] or not ver["oracle"].get("within_contract", True):
        return EXIT_CONTRACT
    return 0


def cmd_compress(args):
    gf = parse_graph(_read(args.graph))
    g = gf.graph.unweighted()
    comp = compress(g, args.order, args.seed)
    h, ids, exempt = comp.instance.to_graph()
    comments = ["compressed instance, parameter k = %d" % comp.k,
                "x lists exempt vertices in compressed ids",
                "s lists the partial solution in original ids"]
    text = format_graph(h, exempt=exempt, partial=sorted(comp.partial), comments=comments)
    out = args.out
    if out and (out.endswith(os.sep) or os.path.isdir(out)):
        os.makedirs(out, exist_ok=True)
        stem = os.path.splitext(os.path.basename(args.graph))[0] or "graph"
        out = os.path.join(out, stem + ".compressed.ds")
    _write(out, text)
    trace_path = args.trace or (out + ".trace.jsonl" if out and out != "-" else None)
    if trace_path:
        _write(trace_path, trace_to_jsonl(comp, ids))
    if args.verbose:
        bounds = {k: {"value": v, "bound": b} for k, (v, b) in comp.bounds().items()}
        summary = {"k": comp.k, "n": h.n, "m": h.m, "exempt": len(exempt),
                   "partial": len(comp.partial), "steps": len(comp.trace), "bounds": bounds}
        print(json.dumps(summary), file=sys.stderr)
    return 0


def cmd_lift(args):
    gf = parse_graph(_read(args.graph))
    header, steps = trace_from_jsonl(_read(args.trace))
    vmap = header["vertex_map"]
    if args.solution:
        local = parse_solution(_read(args.solution))
    else:
        # rebuild the compressed instance from the trace and solve it exactly
        inst = replay(gf.graph.unweighted(), steps)
        if inst.n > 2 * ORACLE_CAP:
            raise ResourceError("compressed n", inst.n, 2 * ORACLE_CAP)
        local = [vmap.index(v) for v in rds_brute(inst)]
    if any(not 0 <= v < len(vmap) for v in local):
        raise InputError("solution mentions a vertex outside the compressed instance")
    reduced = [vmap[v] for v in local]
    g = gf.graph
    try:
        sol = lift(steps, reduced)
    except AssertionError as exc:
        raise InfeasibleError("cannot lift: %s" % exc)
    if not is_dominating(g, sol):
        raise InfeasibleError("lifted set does not dominate the graph")
    _write(args.out, format_solution(sol))
    return 0


def cmd_decompose(args):
    gf = parse_graph(_read(args.graph))
    d = args.d if args.d is not None else max(gf.graph.n, 3)
    td = decompose_bounded(gf.graph, d)
    _write(args.out, format_td(td, gf.graph.n))
    if args.verbose:
        print(json.dumps({"width": td.width, "exact": bool(td.meta.get("exact"))}), file=sys.stderr)
    return 0


def cmd_verify(args):
    gf = parse_graph(_read(args.graph))
    g = gf.graph
    result = {}
    status = 0
    if args.solution:
        sol = parse_solution(_read(args.solution))
        g.check_vertices(sol)
        left = undominated(g, sol)
        result.update(dominating=not left, undominated=_one_based(left),
                      size=len(set(sol)), weight=g.weight(set(sol)))
        if left:
            status = EXIT_CONTRACT
    if args.td:
        raw, n = parse_td(_read(args.td))
        try:
            td = decompose_raw_input(raw, g)
            violations = verify_td(td, g)
        except ValidationError as exc:
            violations = exc.violations or [str(exc)]
        result["decomposition"] = {"valid": not violations, "violations": [str(v) for v in violations]}
        if violations:
            status = EXIT_CONTRACT
    if not result:
        raise InputError("nothing to verify: give a solution and/or --td")
    _write(args.out, json.dumps(result, indent=2) + "\n")
    return status


def _family(text):
    fam = []
    for part in text.split(";"):
        part = part.strip()
        if part:
            try:
                fam.append([int(t) - 1 for t in part.split(",")])
            except ValueError:
                raise InputError("family must look like '1,2;2,3'")
    return fam


def cmd_gen(args):
    kind, n, seed = args.kind, args.n, args.seed
    if kind == "random":
        g = gr.gen_random(n, args.p, seed)
    elif kind == "cactus":
        g = gr.gen_cactus(n, seed)
    elif kind == "path":
        g = gr.path_graph(n)
    elif kind == "cycle":
        g = gr.cycle_graph(n)
    elif kind == "star":
        g = gr.star_graph(n)
    elif kind == "complete":
        g = gr.complete_graph(n)
    else:
        if not args.family or args.universe is None:
            raise InputError("%s needs --universe and --family" % kind)
        maker = gr.gen_from_hitting_set if kind == "hitting-set" else gr.gen_from_set_cover
        g = maker(args.universe, _family(args.family))
    if args.weighted:
        g = gr.gen_random_weights(g, seed)
    _write(args.out, format_graph(g, comments=["%s n=%d seed=%d" % (kind, n, seed)]))
    return 0


def _bench_one(task):
    path, algo, opts = task
    gf = parse_graph(_read(path))
    start = time.perf_counter()
    try:
        sol, params, _ = run_algorithm(gf, algo, opts)
        weight = gf.graph.weight(sol)
    except ResourceError:
        params, weight = {}, ""
    elapsed = (time.perf_counter() - start) * 1000
    param = next((params[k] for k in ("width", "modulator_size", "vc", "k") if k in params), "")
    return {"instance": os.path.basename(path), "algo": algo, "n": gf.graph.n, "m": gf.graph.m,
            "parameter": param, "weight": weight, "time-ms": "%.3f" % elapsed}


def bench_workers():
    raw = os.environ.get("DOMSETKIT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise InputError("DOMSETKIT_THREADS must be an integer, got %r" % raw)


def cmd_bench(args):
    algos = args.algo or ["tw-exact"]
    for a in algos:
        if a not in ALGOS:
            raise InputError("unknown algorithm %r" % a)
    opts = {"d": args.d, "k": args.k, "alpha": args.alpha}
    for path in args.graphs:
        parse_graph(_read(path))          # fail fast with exit 2 on bad input
    tasks = [(p, a, opts) for p in args.graphs for a in algos]
    workers = bench_workers()
    if workers == 1:
        rows = [_bench_one(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_bench_one, tasks))
    out = open(args.out, "w", newline="") if args.out and args.out != "-" else sys.stdout
    try:
        writer = csv.DictWriter(out, ["instance", "algo", "n", "m", "parameter", "weight", "time-ms"])
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="domsetkit", description="Exact and approximate dominating set solvers.")
    p.add_argument("--seed", type=int, default=0, help="random seed")
    p.add_argument("--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="output file (default: stdout)")
        sp.add_argument("--seed", type=int, default=argparse.SUPPRESS)
        sp.add_argument("--verbose", action="store_true", default=argparse.SUPPRESS)

    s = sub.add_parser("solve", help="solve a graph file and print a JSON report")
    s.add_argument("graph")
    s.add_argument("--algo", choices=ALGOS, required=True)
    s.add_argument("--td", help="PACE .td decomposition for the tw-* algorithms")
    s.add_argument("--targets", help="comma separated vertices to dominate (tw-half)")
    s.add_argument("--d", type=int, default=2, help="treewidth bound after removing the modulator")
    s.add_argument("--k", type=int, help="solution size parameter for approx-k")
    s.add_argument("--alpha", default="0", help="trade-off parameter p/q in [0, 1)")
    s.add_argument("--check-oracle", action="store_true", help="compare with brute force (n <= 14)")
    s.add_argument("--emit-modulator", metavar="FILE", help="write the modulator and its log as JSON")
    common(s)
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("compress", help="compress to a relaxed instance plus partial solution")
    c.add_argument("graph")
    c.add_argument("--trace", help="JSON lines trace (default: <out>.trace.jsonl)")
    c.add_argument("--order", choices=("fifo", "lifo", "random"), default="fifo")
    common(c)
    c.set_defaults(func=cmd_compress)

    li = sub.add_parser("lift", help="lift a compressed solution back to the original graph")
    li.add_argument("graph")
    li.add_argument("trace")
    li.add_argument("solution", nargs="?", help="solution of the compressed instance; solved exactly if omitted")
    common(li)
    li.set_defaults(func=cmd_lift)

    d = sub.add_parser("decompose", help="write a tree decomposition in PACE format")
    d.add_argument("graph")
    d.add_argument("--d", type=int, help="fail unless the width is at most d")
    common(d)
    d.set_defaults(func=cmd_decompose)

    v = sub.add_parser("verify", help="check a solution and/or a decomposition")
    v.add_argument("graph")
    v.add_argument("solution", nargs="?")
    v.add_argument("--td")
    common(v)
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("gen", help="generate a graph file")
    g.add_argument("kind", choices=("random", "cactus", "path", "cycle", "star", "complete",
                                    "hitting-set", "set-cover"))
    g.add_argument("--n", type=int, default=10)
    g.add_argument("--p", type=float, default=0.3)
    g.add_argument("--universe", type=int)
    g.add_argument("--family", help="sets as '1,2;2,3' (1-based elements)")
    g.add_argument("--weighted", action="store_true")
    common(g)
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="time algorithms on graph files, CSV output")
    b.add_argument("graphs", nargs="+")
    b.add_argument("--algo", action="append", choices=ALGOS)
    b.add_argument("--d", type=int, default=2)
    b.add_argument("--k", type=int)
    b.add_argument("--alpha", default="0")
    common(b)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ResourceError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_RESOURCE
    except InputError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    except (InfeasibleError, DomsetError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_CONTRACT
    except jsonschema.ValidationError as exc:
        print("error: report fails its schema: %s" % exc.message, file=sys.stderr)
        return EXIT_CONTRACT


if __name__ == "__main__":
    sys.exit(main())
