"""Command-line interface.

Subcommands: gen-graph, bench-flip, build-code, decode, sweep, toric-sim,
compare, threshold.  The sweep pipeline reads a JSON config; every config
field can be overridden by a flag, and the QLDPC_WORKERS environment
variable overrides the configured worker count (an explicit --workers flag
wins over both).  Exit status is 0 on success and nonzero on any
refusal or error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from math import sqrt
from pathlib import Path

import numpy as np

from . import __version__
from .classical import code_from_graph, flip_benchmark, select_best_graph
from .gf2 import BitVector, read_matrix_text, write_matrix_text
from .graphs import generate_configuration_model, read_graph_text, write_graph_text
from .harness import (
    EstimateWithCI,
    Z99,
    compare_with_toric,
    comparison_to_json_dict,
    estimate_toric,
    sweep,
    sweep_from_json_dict,
    sweep_to_csv,
    sweep_to_json_dict,
    threshold_estimate,
    write_json,
)
from .product import hypergraph_product
from .ssf import build_catalog, small_set_flip
from .toric import build_toric

DEFAULT_CONFIG = {
    "graph": {
        "n": 12,
        "m": 10,
        "dv": 5,
        "dc": 6,
        "candidates": 5,
        "max_attempts": 200_000,
        "selection": {"p": 0.04, "trials": 2000},
    },
    "sweep": {"p_grid": [0.01, 0.02, 0.04], "trials": 1000},
    "seed": 0,
    "workers": 1,
}


def _resolve_workers(flag_value, config_value) -> int:
    if flag_value is not None:
        return flag_value
    env = os.environ.get("QLDPC_WORKERS")
    if env is not None:
        return int(env)
    return int(config_value)


def _cmd_gen_graph(args) -> int:
    g = generate_configuration_model(
        args.n, args.m, args.dv, args.dc, args.seed, max_attempts=args.max_attempts
    )
    Path(args.out).write_text(write_graph_text(g), encoding="utf-8")
    print(json.dumps({"n": g.n_left, "m": g.n_right, "dv": g.deg_left,
                      "dc": g.deg_right, "edges": int(g.edges.shape[0]),
                      "out": args.out}))
    return 0


def _cmd_bench_flip(args) -> int:
    g = read_graph_text(Path(args.graph).read_text(encoding="utf-8"))
    code = code_from_graph(g)
    rate = flip_benchmark(code, args.p, args.trials, args.seed)
    ci99 = Z99 * sqrt(rate * (1.0 - rate) / args.trials)
    print(json.dumps({"failure_rate": rate, "trials": args.trials, "ci99": ci99}))
    return 0


def _cmd_build_code(args) -> int:
    g1 = read_graph_text(Path(args.graph).read_text(encoding="utf-8"))
    g2 = read_graph_text(Path(args.graph2).read_text(encoding="utf-8")) if args.graph2 else g1
    code = hypergraph_product(g1, g2)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "hx.txt").write_text(write_matrix_text(code.h_x), encoding="utf-8")
    (out / "hz.txt").write_text(write_matrix_text(code.h_z), encoding="utf-8")
    # The factor graphs travel with the code so `decode` can rebuild the
    # generator catalogs.
    (out / "graph1.txt").write_text(write_graph_text(g1), encoding="utf-8")
    (out / "graph2.txt").write_text(write_graph_text(g2), encoding="utf-8")
    params = code.params
    v_deg = code.g2.deg_left + code.g1.deg_left
    c_deg = code.g1.deg_right + code.g2.deg_right
    gen_w = code.g1.deg_right + code.g2.deg_left
    manifest = {
        "N": params.n_qubits,
        "k": params.k,
        "rate": params.rate,
        "block_split": list(code.block_split),
        "weight_profile": {
            "v_block_qubit_degree": v_deg,
            "c_block_qubit_degree": c_deg,
            "x_generator_weight": gen_w,
            "z_generator_weight": gen_w,
        },
    }
    write_json(out / "params.json", manifest)
    print(json.dumps(manifest))
    return 0


def _load_code_dir(path: Path):
    g1 = read_graph_text((path / "graph1.txt").read_text(encoding="utf-8"))
    g2 = read_graph_text((path / "graph2.txt").read_text(encoding="utf-8"))
    code = hypergraph_product(g1, g2)
    hx = read_matrix_text((path / "hx.txt").read_text(encoding="utf-8"))
    hz = read_matrix_text((path / "hz.txt").read_text(encoding="utf-8"))
    if hx != code.h_x or hz != code.h_z:
        raise ValueError(f"matrices in {path} do not match the stored factor graphs")
    return code


def _cmd_decode(args) -> int:
    code = _load_code_dir(Path(args.code))
    catalog = build_catalog(code, args.sector)
    lines = Path(args.syndrome).read_text(encoding="utf-8").split()
    support = [int(tok) for tok in lines]
    sigma = BitVector(catalog.n_checks, support)
    outcome = small_set_flip(catalog, sigma)
    print(json.dumps({
        "status": outcome.status,
        "deduced_error": outcome.deduced_error.support.tolist(),
        "iterations": outcome.iterations,
        "final_syndrome_weight": outcome.final_syndrome_weight,
    }))
    return 0


def _cmd_sweep(args) -> int:
    config = json.loads(json.dumps(DEFAULT_CONFIG))
    if args.config:
        loaded = json.loads(Path(args.config).read_text(encoding="utf-8"))
        for key, val in loaded.items():
            if isinstance(val, dict) and isinstance(config.get(key), dict):
                config[key].update(val)
            else:
                config[key] = val
    gcfg = config["graph"]
    for name, dest in (("n", "n"), ("m", "m"), ("dv", "dv"), ("dc", "dc"),
                       ("candidates", "candidates")):
        val = getattr(args, dest)
        if val is not None:
            gcfg[name] = val
    if args.selection_p is not None:
        gcfg["selection"]["p"] = args.selection_p
    if args.selection_trials is not None:
        gcfg["selection"]["trials"] = args.selection_trials
    if args.seed is not None:
        config["seed"] = args.seed
    if args.trials is not None:
        config["sweep"]["trials"] = args.trials
    if args.p_grid is not None:
        config["sweep"]["p_grid"] = [float(tok) for tok in args.p_grid.split(",")]
    workers = _resolve_workers(args.workers, config["workers"])
    seed = int(config["seed"])

    candidates = []
    for i in range(int(gcfg["candidates"])):
        # Candidate seeds live in their own stream family (tag 1) so they
        # never collide with sweep-point seeds derived from (seed, idx).
        cand_seed = int(np.random.SeedSequence((seed, 1, i)).generate_state(1, np.uint64)[0])
        candidates.append(
            generate_configuration_model(
                gcfg["n"], gcfg["m"], gcfg["dv"], gcfg["dc"], cand_seed,
                max_attempts=int(gcfg.get("max_attempts", 200_000)),
            )
        )
    best = select_best_graph(
        candidates, gcfg["selection"]["p"], int(gcfg["selection"]["trials"]), seed
    )
    code = hypergraph_product(best, best)
    catalogs = (build_catalog(code, "z"), build_catalog(code, "x"))
    metadata = {"graph": {k: gcfg[k] for k in ("n", "m", "dv", "dc", "candidates")}}
    if args.out:
        graph_path = Path(str(args.out) + ".graph.txt")
        graph_path.write_text(write_graph_text(best), encoding="utf-8")
        metadata["graph_files"] = [str(graph_path)]
    result = sweep(
        code,
        catalogs,
        config["sweep"]["p_grid"],
        int(config["sweep"]["trials"]),
        seed,
        workers=workers,
        code_id=f"hgp_{gcfg['dv']}_{gcfg['dc']}_n{gcfg['n']}",
        metadata=metadata,
    )
    csv_text = sweep_to_csv(result)
    if args.out:
        Path(str(args.out) + ".csv").write_text(csv_text, encoding="utf-8")
        write_json(Path(str(args.out) + ".json"), sweep_to_json_dict(result))
    sys.stdout.write(csv_text)
    return 0


def _cmd_toric_sim(args) -> int:
    code = build_toric(args.L)
    est = estimate_toric(code, args.p, args.trials, args.seed)
    payload = {"q_log": est.p_log, "ci99": est.ci99_halfwidth, "trials": est.trials}
    if args.out:
        write_json(Path(args.out), payload)
    print(json.dumps(payload))
    return 0


def _cmd_compare(args) -> int:
    hgp_payload = json.loads(Path(args.hgp).read_text(encoding="utf-8"))
    hgp_sweep = sweep_from_json_dict(hgp_payload)
    toric_payload = json.loads(Path(args.toric).read_text(encoding="utf-8"))
    if args.p is not None:
        matches = [e for e in hgp_sweep.estimates if e.p == args.p]
        if not matches:
            raise ValueError(f"no sweep point at p={args.p}")
        hgp_est = matches[0]
    elif len(hgp_sweep.estimates) == 1:
        hgp_est = hgp_sweep.estimates[0]
    else:
        raise ValueError("sweep has several points; pick one with --p")
    toric_est = EstimateWithCI.from_counts(
        hgp_est.p,
        toric_payload["trials"],
        round(toric_payload["q_log"] * toric_payload["trials"]),
    )
    cmp = compare_with_toric(hgp_est, toric_est, hgp_sweep.k)
    print(json.dumps(comparison_to_json_dict(cmp)))
    return 0


def _cmd_threshold(args) -> int:
    sweeps = [
        sweep_from_json_dict(json.loads(Path(p).read_text(encoding="utf-8")))
        for p in args.sweeps
    ]
    th = threshold_estimate(sweeps)
    print(json.dumps({"p_th": th.p_threshold, "method_note": th.method_note}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hgpqec", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-graph", help="sample a biregular bipartite graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--dv", type=int, required=True)
    p.add_argument("--dc", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--max-attempts", type=int, default=200_000)
    p.set_defaults(func=_cmd_gen_graph)

    p = sub.add_parser("bench-flip", help="flip block-error rate over a BSC")
    p.add_argument("--graph", required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=_cmd_bench_flip)

    p = sub.add_parser("build-code", help="hypergraph product of one or two graphs")
    p.add_argument("--graph", required=True)
    p.add_argument("--graph2")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_build_code)

    p = sub.add_parser("decode", help="small-set-flip one syndrome")
    p.add_argument("--code", required=True, help="directory written by build-code")
    p.add_argument("--syndrome", required=True, help="file with one support index per line")
    p.add_argument("--sector", choices=("z", "x"), default="z",
                   help="error type to deduce (z reads an X-check syndrome)")
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("sweep", help="logical-error-rate sweep over a p grid")
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--out", help="output prefix for .csv/.json")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--dv", type=int)
    p.add_argument("--dc", type=int)
    p.add_argument("--candidates", type=int)
    p.add_argument("--selection-p", type=float)
    p.add_argument("--selection-trials", type=int)
    p.add_argument("--p-grid", help="comma-separated physical rates")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("toric-sim", help="toric-code q_log at one physical rate")
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_toric_sim)

    p = sub.add_parser("compare", help="block failure vs k/2 toric copies")
    p.add_argument("--hgp", required=True, help="sweep JSON for the product code")
    p.add_argument("--toric", required=True, help="toric-sim JSON")
    p.add_argument("--p", type=float, help="sweep point to compare at")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("threshold", help="sub-threshold ordering estimate")
    p.add_argument("sweeps", nargs="+", help="sweep JSON files for increasing N")
    p.set_defaults(func=_cmd_threshold)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # refusals and errors exit nonzero
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
