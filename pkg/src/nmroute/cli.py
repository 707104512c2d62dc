"""Command-line entry point.

Exit codes: 0 success, 1 a sweep cell or query crashed, 2 no feasible
path, 3 destination unreachable, 4 query timeout, 64 usage error, 65
malformed input file.  Output files go to ``--out`` or, when omitted, to
the directory named by ``NMROUTE_OUT`` (default: the working directory).
"""
from __future__ import annotations

import argparse
import io
import math
import os
import statistics
import sys
from pathlib import Path

from . import fixtures
from .baselines import ebfs, edijkstra, ibf
from .core import SearchOptions, solve_csp
from .exceptions import (ConfigurationError, GraphFormatError, NoFeasiblePath, RoutingError,
                         SearchTimeout, Unreachable)
from .fast import solve_l, solve_l1
from .graph import ConstraintSpec, dumps, format_float, loads, read_graph, write_graph
from .io import dump_requests, load_requests, read_csv, write_csv, write_dat
from .services.bench import BENCH_ALGORITHMS, BenchRecord, check_algorithms, run_queries
from .services.energy import EnergyParams, energy
from .services.te import te_greedy
from .services.vne import make_vn_requests, vne_run
from .topology import (GEN_PRESETS, MODELS, SLO_PRESETS, generate, make_requests, preset_spec,
                       slo_preset)

EXIT_OK, EXIT_FAIL, EXIT_NO_FEASIBLE, EXIT_UNREACHABLE, EXIT_TIMEOUT = 0, 1, 2, 3, 4
EXIT_USAGE, EXIT_DATA = 64, 65
OUT_ENV = "NMROUTE_OUT"
ROUTE_ALGOS = ("nm", "nm-lb", "nm-l", "nm-l1", "ebfs", "ebfs-la", "edijkstra",
               "edijkstra-metric", "ibf")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _int_list(text):
    try:
        vals = [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not vals or min(vals) < 2:
        raise argparse.ArgumentTypeError("sizes must be integers >= 2")
    return vals


def _slo_name(prefix):
    def parse(text):
        name = text if text in SLO_PRESETS else f"{prefix}-{text}"
        if name not in SLO_PRESETS:
            raise argparse.ArgumentTypeError(f"unknown SLO preset {text!r}")
        return name
    return parse


def _out_dir(args) -> Path:
    out = Path(args.out or os.environ.get(OUT_ENV) or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_graph(token):
    path = Path(token)
    if not path.exists() and hasattr(fixtures, token) and token.startswith("figure"):
        return getattr(fixtures, token)()
    return read_graph(path)


# -- gen ---------------------------------------------------------------------
def cmd_gen(args) -> int:
    spec = preset_spec(args.preset, model=args.model, n=args.n, avg_degree=args.deg,
                       seed=args.seed, rate=args.rate)
    g = generate(spec)
    if args.output:
        write_graph(g, args.output)
    else:
        sys.stdout.write(dumps(g))
    print(f"n={g.n} edges={g.num_edges} mean_degree={format_float(g.mean_degree())}",
          file=sys.stderr if not args.output else sys.stdout)
    if args.requests:
        reqs = make_requests(g, args.requests, slo_preset(args.slo), args.seed)
        Path(args.requests_out).write_text(dump_requests(reqs), encoding="utf-8")
    return EXIT_OK


# -- route -------------------------------------------------------------------
def _route_spec(g, args) -> ConstraintSpec:
    if args.bound:
        if len(args.bound) > g.p_arity:
            raise ConfigurationError(f"{len(args.bound)} bounds for {g.p_arity} path metrics")
        given = list(args.bound)
    else:
        given = [args.delay, args.cost][:g.p_arity]
        if g.p_arity < 2 and args.cost is not None:
            raise ConfigurationError("graph has no second path metric for --cost")
    given += [None] * (g.p_arity - len(given))
    return ConstraintSpec(args.bw, (), tuple(math.inf if b is None else b for b in given))


def _solve(g, src, dst, spec, args):
    opts = SearchOptions(dominance=not args.no_dominance, look_back=args.algo == "nm-lb"
                         or args.look_back, k=args.k, objective=args.objective,
                         timeout=args.timeout)
    algo = args.algo
    if algo in ("nm", "nm-lb"):
        return solve_csp(g, src, dst, spec, opts)
    if algo == "nm-l":
        return solve_l(g, src, dst, spec, objective=args.objective)
    if algo == "nm-l1":
        return solve_l1(g, src, dst, spec)
    if algo in ("ebfs", "ebfs-la"):
        return ebfs(g, src, dst, spec, opts, look_ahead=algo == "ebfs-la")
    if algo == "edijkstra":
        return edijkstra(g, src, dst, spec, objective=args.objective)
    if algo == "edijkstra-metric":
        return edijkstra(g, src, dst, spec, objective="metric")
    return ibf(g, src, dst, spec)


def cmd_route(args) -> int:
    g = _load_graph(args.graph)
    src, dst = g.vertex_by_name(args.src), g.vertex_by_name(args.dst)
    spec = _route_spec(g, args)
    try:
        res = _solve(g, src, dst, spec, args)
    except NoFeasiblePath as exc:
        print(f"no feasible path: {exc}")
        print("RESULT no-feasible")
        return EXIT_NO_FEASIBLE
    except Unreachable as exc:
        print(f"unreachable: {exc}")
        print("RESULT unreachable")
        return EXIT_UNREACHABLE
    except SearchTimeout as exc:
        print(f"timeout: {exc}")
        print("RESULT timeout")
        return EXIT_TIMEOUT
    for rank, label in enumerate(res.paths, 1):
        names = [g.name(v) for v in label.vertices]
        print(f"path {rank}: {' '.join(names)}")
        print(f"  hops {label.hop_count}  cost {format_float(label.cost)}  distance "
              + " ".join(format_float(x) for x in label.path_dist))
    c = res.counters
    print(f"traversed {c.traversed_paths}  dominance-pruned {c.dominance_pruned}  "
          f"infeasibility-pruned {c.infeasibility_pruned}  elapsed {res.elapsed:.6f}s")
    best = res.path
    print("RESULT found " + ",".join(g.name(v) for v in best.vertices)
          + f" hops={best.hop_count} cost={format_float(best.cost)}")
    return EXIT_OK


# -- bench -------------------------------------------------------------------
def cmd_bench(args) -> int:
    out = _out_dir(args)
    check_algorithms(args.algos)
    seeds = range(args.seed, args.seed + args.seeds)
    records, status = [], EXIT_OK
    for n in args.sizes:
        for seed in seeds:
            try:
                g = generate(preset_spec("scalability", model=args.model, n=n,
                                         avg_degree=args.deg, seed=seed))
                reqs = make_requests(g, args.fraction, slo_preset(args.preset), seed)
                records.extend(run_queries(g, reqs, args.algos, args.timeout,
                                           {"preset": args.preset, "seed": seed}))
            except Exception as exc:  # keep finished cells, report the broken one
                print(f"error: cell n={n} seed={seed}: {type(exc).__name__}: {exc}",
                      file=sys.stderr)
                status = EXIT_FAIL
    fields = [f for f in BenchRecord.FIELDS if f != "elapsed"]
    write_csv(out / "bench.csv", fields, [r.as_row() for r in records])
    key = ("algorithm", "n", "preset", "seed", "query")
    if args.timing:
        # wall-clock measurements are the one output that cannot be byte-stable
        write_csv(out / "bench-timing.csv", key + ("elapsed",), [r.as_row() for r in records])
    for algo in args.algos:
        series, times = {}, {}
        for n in args.sizes:
            per_seed, per_time = [], []
            for seed in seeds:
                rows = [r for r in records if r.algorithm == algo and r.n == n and r.seed == seed]
                found = [r.traversed_paths for r in rows if r.outcome == "found"]
                if found:
                    per_seed.append(statistics.mean(found))
                if rows:
                    per_time.append(statistics.mean(r.elapsed for r in rows))
            series[n], times[n] = per_seed, per_time
        write_dat(out / f"bench-traversed-{algo}.dat", series, f"{algo} traversed paths vs n")
        if args.timing:
            write_dat(out / f"bench-timing-{algo}.dat", times, f"{algo} seconds per query vs n")
    print(f"{len(records)} records written to {out / 'bench.csv'}")
    return status


# -- te ----------------------------------------------------------------------
def cmd_te(args) -> int:
    out = _out_dir(args)
    totals = []
    for seed in range(args.seed, args.seed + args.seeds):
        g = generate(preset_spec("te", model=args.model, n=args.n, avg_degree=args.deg,
                                 seed=seed))
        reqs = make_requests(g, args.flows, slo_preset(args.slo), seed)
        res = te_greedy(g, [(s, d) for s, d, _ in reqs], args.algo, args.quantum, args.slo)
        totals.append(res.total)
        rows = []
        for i, f in enumerate(res.flows):
            rows.append({"flow": i, "src": f.src, "dst": f.dst, "preset": f.preset,
                         "allocated": f.allocated, "tunnels": len(f.tunnels),
                         "hops": f.tunnels[-1].hop_count if f.tunnels else -1})
        footer = {"flow": "total", "allocated": res.total, "tunnels": sum(len(f.tunnels) for f in res.flows),
                  "hops": res.mean_hops()}
        suffix = "" if args.seeds == 1 else f"-{seed}"
        write_csv(out / f"te{suffix}.csv",
                  ("flow", "src", "dst", "preset", "allocated", "tunnels", "hops"), rows, footer)
        write_csv(out / f"te-util{suffix}.csv", ("edge", "utilization"),
                  [(e, u) for e, u in enumerate(res.utilizations)])
        print(f"seed {seed}: total throughput {format_float(res.total)}, "
              f"min fairness {format_float(res.min_fairness)}, mean hops {res.mean_hops():.3f}")
    write_dat(out / "te-throughput.dat", {args.n: totals}, f"{args.algo} total throughput")
    return EXIT_OK


# -- vne ---------------------------------------------------------------------
def cmd_vne(args) -> int:
    out = _out_dir(args)
    ratios = []
    rows = []
    for seed in range(args.seed, args.seed + args.seeds):
        g = generate(preset_spec("vne", n=args.n, seed=seed))
        reqs = make_vn_requests(g, args.requests, args.size, args.vn_degree, seed)
        ratio, results = vne_run(g, reqs, args.algo)
        ratios.append(ratio)
        for i, r in enumerate(results):
            rows.append({"seed": seed, "request": i, "accepted": r.accepted,
                         "stage": r.stage or "", "reason": r.reason,
                         "hosts": " ".join(map(str, r.hosts))})
        print(f"seed {seed}: acceptance ratio {format_float(ratio)}")
    footer = {"seed": "ratio", "request": len(rows),
              "accepted": statistics.mean(ratios) if ratios else 0.0}
    write_csv(out / "vne.csv", ("seed", "request", "accepted", "stage", "reason", "hosts"),
              rows, footer)
    write_dat(out / "vne-acceptance.dat", {args.vn_degree: ratios}, f"{args.algo} acceptance ratio")
    return EXIT_OK


# -- energy ------------------------------------------------------------------
def cmd_energy(args) -> int:
    _, rows = read_csv(args.util)
    try:
        utils = [float(r["utilization"]) for r in rows if r.get("edge") != "total"]
    except KeyError:
        raise GraphFormatError("utilization file needs a 'utilization' column") from None
    absolute, rel = energy(utils, EnergyParams(args.M, args.E0))
    print(f"energy {format_float(absolute)} W, increase {format_float(rel)}% over idle")
    if args.out:
        write_csv(_out_dir(args) / "energy.csv", ("edges", "absolute", "relative"),
                  [(len(utils), absolute, rel)])
    return EXIT_OK


# -- check -------------------------------------------------------------------
def cmd_check(args) -> int:
    status = EXIT_OK
    for name in args.files:
        text = Path(name).read_text(encoding="utf-8")
        body = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
        if body and body[0].startswith("graph "):
            again = dumps(loads(text))
        elif body and body[0].startswith("req "):
            again = dump_requests(load_requests(text))
        elif name.endswith(".csv"):
            fields, rows = read_csv(name)
            buf = io.StringIO()
            write_csv(buf, fields, rows)
            again = buf.getvalue()
        else:
            print(f"{name}: unrecognized file kind")
            status = EXIT_DATA
            continue
        if again == text:
            print(f"{name}: ok")
        else:
            print(f"{name}: parses, but does not round-trip byte for byte")
            status = EXIT_FAIL
    return status


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nmroute", description="Constrained shortest paths and experiments.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="generate a random substrate")
    g.add_argument("--model", choices=MODELS, default="waxman")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--deg", type=float, default=4.0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--preset", choices=sorted(GEN_PRESETS), default="scalability")
    g.add_argument("--rate", type=float, default=1.0)
    g.add_argument("-o", "--output")
    g.add_argument("--requests", type=_positive_int, help="also draw this many requests")
    g.add_argument("--slo", type=_slo_name("scal"), default="scal-medium")
    g.add_argument("--requests-out", default="requests.txt")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("route", help="answer one routing query")
    r.add_argument("graph", help="graph file or a shipped fixture name (figure1/3/5)")
    r.add_argument("--src", required=True)
    r.add_argument("--dst", required=True)
    r.add_argument("--algo", choices=ROUTE_ALGOS, default="nm")
    r.add_argument("--bw", type=float, default=1.0, help="bandwidth demand")
    r.add_argument("--delay", type=float, help="bound on the first path metric")
    r.add_argument("--cost", type=float, help="bound on the second path metric")
    r.add_argument("--bound", type=float, action="append",
                   help="bounds on path metrics in order (repeatable)")
    r.add_argument("--objective", choices=("cost", "hops"), default="cost")
    r.add_argument("--k", type=_positive_int, default=1)
    r.add_argument("--no-dominance", action="store_true")
    r.add_argument("--look-back", action="store_true")
    r.add_argument("--timeout", type=float)
    r.set_defaults(func=cmd_route)

    b = sub.add_parser("bench", help="scalability sweep")
    b.add_argument("--sizes", type=_int_list, required=True)
    b.add_argument("--preset", type=_slo_name("scal"), default="scal-medium")
    b.add_argument("--algos", type=lambda s: s.split(","), default=list(BENCH_ALGORITHMS))
    b.add_argument("--seeds", type=_positive_int, default=1, help="number of seeds")
    b.add_argument("--seed", type=int, default=0, help="first seed")
    b.add_argument("--fraction", type=float, default=0.1)
    b.add_argument("--timeout", type=float, default=60.0)
    b.add_argument("--model", choices=MODELS, default="waxman")
    b.add_argument("--deg", type=float, default=4.0)
    b.add_argument("--timing", action="store_true",
                   help="also write per-query wall-clock times (not byte-stable)")
    b.add_argument("--out")
    b.set_defaults(func=cmd_bench)

    t = sub.add_parser("te", help="greedy max-min traffic engineering")
    t.add_argument("--n", type=int, default=200)
    t.add_argument("--flows", type=_positive_int, default=100)
    t.add_argument("--slo", type=_slo_name("te"), default="te-low")
    t.add_argument("--algo", default="nm")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--seeds", type=_positive_int, default=1)
    t.add_argument("--quantum", type=float, default=1.0)
    t.add_argument("--model", choices=MODELS, default="waxman")
    t.add_argument("--deg", type=float, default=4.0)
    t.add_argument("--out")
    t.set_defaults(func=cmd_te)

    v = sub.add_parser("vne", help="two-stage virtual network embedding")
    v.add_argument("--n", type=int, default=20)
    v.add_argument("--requests", type=int, default=40)
    v.add_argument("--size", type=_positive_int, default=6)
    v.add_argument("--vn-degree", type=float, default=1.0)
    v.add_argument("--algo", default="nm")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--seeds", type=_positive_int, default=1)
    v.add_argument("--out")
    v.set_defaults(func=cmd_vne)

    e = sub.add_parser("energy", help="energy of a utilization file")
    e.add_argument("--util", required=True)
    e.add_argument("--M", type=float, default=2.0)
    e.add_argument("--E0", type=float, default=1.7)
    e.add_argument("--out")
    e.set_defaults(func=cmd_energy)

    c = sub.add_parser("check", help="re-parse files and confirm they round-trip")
    c.add_argument("files", nargs="+")
    c.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GraphFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ConfigurationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RoutingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
