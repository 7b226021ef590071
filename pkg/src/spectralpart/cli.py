"""Command-line interface: cluster, diagnose, generate, verify.

Reports are JSON with a fixed field order and schema tag "spectral-part/1";
rerunning a subcommand with the same inputs and seed reproduces the report
byte for byte except for the "timings" section. Exit codes: 0 success or all
applicable checks passed, 1 an applicable check failed, 2 input error,
3 numeric or capacity error.

The environment variable SPECTRAL_PART_THREADS caps internal (BLAS) thread
parallelism; it must take effect before numpy loads, so the heavy modules are
imported inside main().
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

SCHEMA = "spectral-part/1"

_EXIT_CHECK_FAILED = 1
_EXIT_INPUT = 2
_EXIT_NUMERIC = 3


def _apply_thread_cap():
    cap = os.environ.get("SPECTRAL_PART_THREADS")
    if cap:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, cap)


def _jsonable(value):
    """Recursively convert report values to JSON-safe types.

    Non-finite floats become the strings "inf" / "-inf" / "nan" so reports
    stay strictly parseable.
    """
    import numpy as np

    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        value = float(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    return value


def _emit(report: dict, out_path):
    text = json.dumps(_jsonable(report), indent=2) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def parse_gen_spec(spec: str):
    """Parse a generator spec string.

    Grammar:
      ring:k=<int>,size=<int>,b=<int>
      sbm:sizes=<int>+<int>[+...],pin=<float>,pout=<float>
    """
    from .errors import InputError

    usage = parse_gen_spec.__doc__.split("Grammar:")[1].strip()
    head, _, rest = spec.partition(":")
    fields = {}
    for item in rest.split(","):
        key, eq, val = item.partition("=")
        if not eq:
            raise InputError("bad generator spec %r; grammar:\n%s" % (spec, usage))
        fields[key.strip()] = val.strip()
    try:
        if head == "ring":
            return ("ring", int(fields["k"]), int(fields["size"]), int(fields["b"]))
        if head == "sbm":
            sizes = [int(s) for s in fields["sizes"].split("+")]
            return ("sbm", sizes, float(fields["pin"]), float(fields["pout"]))
    except (KeyError, ValueError):
        raise InputError("bad generator spec %r; grammar:\n%s" % (spec, usage))
    raise InputError("unknown generator %r; grammar:\n%s" % (head, usage))


def _load_graph(args):
    from . import graph as G

    if args.gen:
        spec = parse_gen_spec(args.gen)
        if spec[0] == "ring":
            g, planted = G.gen_ring_of_cliques(spec[1], spec[2], spec[3], args.seed)
        else:
            g, planted = G.gen_sbm(spec[1], spec[2], spec[3], args.seed)
        return g, planted
    g = G.read_edge_list(args.input)
    planted = None
    if getattr(args, "partition", None):
        planted = G.read_partition(args.partition, g.n)
    return g, planted


def _config_echo(args, command):
    keys = ("input", "gen", "k", "mode", "eps", "delta", "seed", "restarts",
            "out", "dense_threshold", "lambda_k1_lower", "partition")
    cfg = {"command": command}
    for key in keys:
        if hasattr(args, key):
            cfg[key] = getattr(args, key)
    return cfg


def _graph_stats(g):
    return {"n": g.n, "m": g.m}


def _gap_section(report):
    return {
        "k": report.k,
        "lambdas": list(report.lambdas),
        "rho_avr_proxy": report.rho_avr_proxy,
        "phi_proxy": report.phi_proxy,
        "psi": report.psi,
        "upsilon": report.upsilon,
        "delta": report.delta,
        "delta_clamped": report.delta_clamped,
        "proxy_kind": report.proxy_kind,
    }


def _check_section(records):
    return [
        {"name": r.name, "lhs": r.lhs, "rhs": r.rhs, "passed": r.passed,
         "hypothesis_met": r.hypothesis_met, "slack": r.slack, "note": r.note}
        for r in records
    ]


def _clustering_section(g, part):
    from . import graph as G

    blocks = []
    for i in range(part.k):
        mask = part.labels == i
        blocks.append({
            "size": int(mask.sum()),
            "volume": G.volume(g, mask),
            "cut": G.cut(g, mask),
            "conductance": float(G.conductance(g, mask)),
        })
    return {"k": part.k, "assignment": part.labels.tolist(), "blocks": blocks}


def _failed_applicable(records) -> bool:
    return any(r.hypothesis_met and not r.passed for r in records)


def cmd_cluster(args) -> int:
    from . import graph as G
    from . import spectral as S
    from .errors import InputError
    from .kmeans import best_of_orss

    timings = {}
    t0 = time.perf_counter()
    g, planted = _load_graph(args)
    timings["load"] = time.perf_counter() - t0

    report = {"schema": SCHEMA, "command": "cluster",
              "config": _config_echo(args, "cluster"), "graph": _graph_stats(g)}

    t0 = time.perf_counter()
    eig = None
    if args.mode == "exact":
        emb, eig = S.exact_embedding(g, args.k, args.dense_threshold)
        power_info = None
    else:
        if g.n <= args.dense_threshold:
            _, eig = S.exact_embedding(g, args.k, args.dense_threshold)
            lam_k = float(eig.values[args.k - 1])
            lam_k1 = float(eig.values[args.k])
            lam_source = "exact-eigensolve"
        elif args.lambda_k1_lower is not None:
            lam_k, lam_k1 = 0.0, args.lambda_k1_lower
            lam_source = "user-lower-bound"
        else:
            raise InputError("n > dense threshold: supply --lambda-k1-lower for power mode")
        steps = S.required_power_steps(g.n, args.k, args.eps, args.delta, lam_k, lam_k1)
        emb = S.power_embedding(g, args.k, S.PowerParams(steps=steps, seed=args.seed,
                                                         eps=args.eps, delta=args.delta))
        power_info = {"steps": steps, "seed": args.seed, "eps": args.eps,
                      "delta": args.delta, "lambda_source": lam_source}
    timings["embedding"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    pts = S.normalized_weighted_pointset(emb)
    clustering = best_of_orss(pts, args.k, args.seed, args.restarts)
    result = G.Partition(args.k, clustering.labels)
    timings["kmeans"] = time.perf_counter() - t0

    if eig is not None:
        report["eigenvalues"] = [float(v) for v in eig.values[:args.k + 1]]
    report["power"] = power_info
    if eig is not None:
        from .diagnostics import gap_report
        reference = planted if planted is not None else result
        report["gap"] = _gap_section(gap_report(g, args.k, reference, eig))
        report["gap"]["reference"] = "planted" if planted is not None else "recovered"

    section = _clustering_section(g, result)
    section["cost"] = clustering.cost
    report["clustering"] = section

    if planted is not None:
        pi = G.match_partitions(g, result, planted)
        rel = []
        for i in range(args.k):
            target = planted.labels == pi[i]
            dv = G.sym_diff_volume(g, result.labels == i, target)
            rel.append(dv / G.volume(g, target))
        report["planted_match"] = {"permutation": pi.tolist(),
                                   "relative_sym_diff_volume": rel}

    report["timings"] = timings
    _emit(report, args.out)
    return 0


def cmd_diagnose(args) -> int:
    from .diagnostics import gap_report, run_theorem_checks
    from .errors import InputError
    from .spectral import exact_embedding

    timings = {}
    t0 = time.perf_counter()
    g, planted = _load_graph(args)
    if planted is None:
        raise InputError("diagnose needs a reference partition (--gen or --partition)")
    if planted.k != args.k:
        raise InputError("reference partition has %d blocks, --k is %d"
                         % (planted.k, args.k))
    timings["load"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    records = run_theorem_checks(g, args.k, planted, seed=args.seed,
                                 dense_threshold=args.dense_threshold)
    _, eig = exact_embedding(g, args.k, args.dense_threshold)
    gap = gap_report(g, args.k, planted, eig)
    timings["checks"] = time.perf_counter() - t0

    report = {
        "schema": SCHEMA, "command": "diagnose",
        "config": _config_echo(args, "diagnose"), "graph": _graph_stats(g),
        "eigenvalues": [float(v) for v in eig.values[:args.k + 1]],
        "gap": _gap_section(gap),
        "checks": _check_section(records),
        "timings": timings,
    }
    _emit(report, args.out)
    return _EXIT_CHECK_FAILED if _failed_applicable(records) else 0


def cmd_generate(args) -> int:
    from . import graph as G
    from .errors import InputError

    if not args.out:
        raise InputError("generate requires --out (edge list path; partition gets .part)")
    g, planted = _load_graph(args)
    if planted is None:
        raise InputError("generate requires --gen")
    G.write_edge_list(g, args.out)
    part_path = args.out + ".part"
    G.write_partition(planted, part_path)
    report = {"schema": SCHEMA, "command": "generate",
              "config": _config_echo(args, "generate"),
              "graph": _graph_stats(g),
              "files": {"edges": args.out, "partition": part_path}}
    sys.stdout.write(json.dumps(_jsonable(report), indent=2) + "\n")
    return 0


def cmd_verify(args) -> int:
    from . import graph as G
    from .diagnostics import (CONSTANTS_MAX_VERTICES, INTERCONNECT_MAX_VERTICES,
                              _record, bruteforce_partition_constants,
                              inter_connection)
    from .errors import CapacityError
    from .kmeans import best_of_orss, optimal_cost_bruteforce
    from .spectral import exact_embedding, normalized_weighted_pointset

    timings = {}
    t0 = time.perf_counter()
    g, _ = _load_graph(args)
    if g.n > CONSTANTS_MAX_VERTICES:
        raise CapacityError("verify supports n <= %d (got %d)"
                            % (CONSTANTS_MAX_VERTICES, g.n))
    k = args.k
    records = []

    consts = bruteforce_partition_constants(g, k)
    records.append(_record("tuple_constant_vs_partition_constant",
                           consts.rho, consts.rho_hat, True))
    records.append(_record("partition_constant_upper",
                           consts.rho_hat, k * consts.rho, True))
    _, eig = exact_embedding(g, k, args.dense_threshold)
    records.append(_record("eigenvalue_halved_lower",
                           float(eig.values[k - 1]) / 2.0, consts.rho, True))
    timings["constants"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    inter_section = None
    if g.n <= INTERCONNECT_MAX_VERTICES and k >= 2:
        inter = inter_connection(g, k)
        if inter.degenerate:
            inter_section = {"degenerate": True, "rho": inter.rho,
                             "rho_hat": inter.rho_hat}
        else:
            inter_section = {
                "degenerate": False, "rho": inter.rho, "rho_hat": inter.rho_hat,
                "rho_p": inter.rho_p, "kappa": inter.kappa,
                "rho_avr_tilde": inter.rho_avr_tilde,
                "witness_partition": inter.witness_partition.labels.tolist(),
                "witness_tuple": inter.witness_tuple.labels.tolist(),
            }
            upper = 1.0 - 1.0 / (k - 1) if k > 1 else 0.0
            records.append(_record("interconnection_in_range", inter.rho_p, upper, True,
                                   "positivity checked separately"))
            records.append(_record("interconnection_positive", 1e-12, inter.rho_p, True,
                                   "asserts rho_p > 0"))
            phi_z = [float(G.conductance(g, inter.witness_tuple.labels == i))
                     for i in range(k)]
            phi_p = [float(G.conductance(g, inter.witness_partition.labels == i))
                     for i in range(k)]
            for i in range(k):
                records.append(_record("interconnection_witness_phi[%d]" % i,
                                       phi_p[i], inter.kappa * phi_z[i], True))
            records.append(_record("interconnection_witness_avg",
                                   inter.rho_avr_tilde,
                                   inter.kappa / k * sum(phi_z), True))
    timings["interconnection"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    emb, _ = exact_embedding(g, k, args.dense_threshold)
    pts = normalized_weighted_pointset(emb)
    oracle, _ = optimal_cost_bruteforce(pts, k)
    heur = best_of_orss(pts, k, args.seed, args.restarts)
    records.append(_record("kmeans_oracle_lower", oracle, heur.cost, True))
    records.append(_record("kmeans_heuristic_factor", heur.cost, 1.1 * oracle, True))
    timings["kmeans"] = time.perf_counter() - t0

    report = {
        "schema": SCHEMA, "command": "verify",
        "config": _config_echo(args, "verify"), "graph": _graph_stats(g),
        "eigenvalues": [float(v) for v in eig.values[:min(k + 1, eig.n)]],
        "constants": {"rho": consts.rho, "rho_hat": consts.rho_hat,
                      "rho_avr": consts.rho_avr},
        "interconnection": inter_section,
        "checks": _check_section(records),
        "timings": timings,
    }
    _emit(report, args.out)
    return _EXIT_CHECK_FAILED if _failed_applicable(records) else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectral-part",
        description="Spectral graph clustering with structural diagnostics")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, mode=True):
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--input", help="edge-list file (one 'u v' per line)")
        src.add_argument("--gen", help="generator spec, e.g. ring:k=3,size=20,b=1")
        p.add_argument("--k", type=int, required=True, help="number of clusters (>= 2)")
        if mode:
            p.add_argument("--mode", choices=("exact", "power"), default="exact")
            p.add_argument("--eps", type=float, default=0.01,
                           help="power-iteration projector error target")
            p.add_argument("--delta", type=float, default=0.1,
                           help="power-iteration failure budget")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--restarts", type=int, default=20,
                       help="k-means restarts (best kept)")
        p.add_argument("--out", default=None, help="report path (default stdout)")
        p.add_argument("--dense-threshold", type=int, default=4096,
                       dest="dense_threshold")
        p.add_argument("--lambda-k1-lower", type=float, default=None,
                       dest="lambda_k1_lower",
                       help="certified lower bound on lambda_{k+1} for large-n power mode")

    p_cluster = sub.add_parser("cluster", help="embed and cluster a graph")
    common(p_cluster)
    p_cluster.set_defaults(func=cmd_cluster)

    p_diag = sub.add_parser("diagnose", help="run the structural check suite")
    common(p_diag, mode=False)
    p_diag.add_argument("--partition", default=None,
                        help="reference partition file ('vertex block' per line)")
    p_diag.set_defaults(func=cmd_diagnose)

    p_gen = sub.add_parser("generate", help="write edge-list and planted partition files")
    common(p_gen, mode=False)
    p_gen.set_defaults(func=cmd_generate)

    p_verify = sub.add_parser("verify", help="small-n brute-force verification suite")
    common(p_verify, mode=False)
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    _apply_thread_cap()
    from .errors import CapacityError, InputError, NumericError

    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.k < 2:
            raise InputError("--k must be at least 2")
        if hasattr(args, "eps") and not (0.0 < args.eps < 1.0 and 0.0 < args.delta < 1.0):
            raise InputError("--eps and --delta must lie in (0, 1)")
        return args.func(args)
    except InputError as exc:
        _emit({"schema": SCHEMA, "error": {"kind": "input", "message": str(exc)}}, None)
        return _EXIT_INPUT
    except (CapacityError, NumericError) as exc:
        kind = "capacity" if isinstance(exc, CapacityError) else "numeric"
        _emit({"schema": SCHEMA, "error": {"kind": kind, "message": str(exc)}}, None)
        return _EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
