"""planarq command line: profile, design, lattice, route, bench.

Every subcommand is deterministic for fixed inputs and seeds; all
randomness enters through seed flags that are echoed into the outputs.
Environment overrides use the PLANARQ_ prefix (PLANARQ_MAX_DEGREE,
PLANARQ_ALPHA, PLANARQ_SEED) and lose to explicit flags.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .bench import SuiteConfig, desk_config, run_suite, smoke_config
from .circuit import Circuit, Gate, QasmError, parse_qasm
from .design import AllocationError, design
from .graph import ConstraintSet, CouplingGraph
from .lattices import LATTICE_KINDS, lattice, planar_exempt
from .routing import RoutingError, identity_map, reverse_traversal_map, route


def _env(name: str, cast, fallback):
    raw = os.environ.get(f"PLANARQ_{name}")
    if raw is None:
        return fallback
    try:
        return cast(raw)
    except ValueError as exc:
        raise SystemExit(f"error: bad PLANARQ_{name}={raw!r}: {exc}")


def _write_json(path: str, obj) -> None:
    with open(path, "w") as fh:
        fh.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _read_circuit(path: str) -> Circuit:
    with open(path) as fh:
        return parse_qasm(fh.read(), name=os.path.basename(path))


def _graph_payload(g: CouplingGraph) -> dict:
    return {
        "n_vertexes": g.n,
        "edges": [[u, v, w] for u, v, w in g.edges()],
    }


def _load_graph(path: str) -> tuple[CouplingGraph, dict]:
    with open(path) as fh:
        payload = json.load(fh)
    try:
        g = CouplingGraph(
            payload["n_vertexes"], [tuple(e) for e in payload["edges"]]
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"{path} is not a coupling graph file: {exc}")
    return g, payload


def _emit(args, payload: dict, human: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(human)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_profile(args) -> int:
    from .profiling import profile

    circ = _read_circuit(args.circuit)
    ccg = profile(circ)
    out = _graph_payload(ccg)
    out["n_qubits"] = circ.n_qubits
    out["source"] = os.path.basename(args.circuit)
    _write_json(args.out, out)
    _emit(args, {"status": "ok", "command": "profile", "outputs": [args.out]},
          f"wrote coupling graph ({ccg.n_edges} edges) to {args.out}")
    return 0


def _cmd_design(args) -> int:
    circ = _read_circuit(args.circuit)
    constraints = ConstraintSet(max_degree=args.max_degree)
    result = design(circ, alpha=args.alpha, constraints=constraints,
                    keep_audit=args.audit is not None)
    out = _graph_payload(result.pcg)
    out.update({
        "placement": [[q, result.placement[q]] for q in sorted(result.placement)],
        "ranking": list(result.ranking),
        "media_count": result.media_count,
        "ancilla_count": result.ancilla_count,
        "score": result.score,
        "alpha": args.alpha,
        "max_degree": args.max_degree,
    })
    _write_json(args.out, out)
    outputs = [args.out]
    if args.audit is not None:
        _write_json(args.audit, result.audit)
        outputs.append(args.audit)
    _emit(args, {"status": "ok", "command": "design", "outputs": outputs,
                 "score": result.score},
          f"designed {result.pcg.n}-vertex topology (score {result.score:g}, "
          f"{result.ancilla_count} ancilla) to {args.out}")
    return 0


def _cmd_lattice(args) -> int:
    g = lattice(args.kind, args.qubits)
    out = _graph_payload(g)
    out["kind"] = args.kind
    out["planar_exempt"] = planar_exempt(args.kind)
    _write_json(args.out, out)
    _emit(args, {"status": "ok", "command": "lattice", "outputs": [args.out]},
          f"wrote {args.kind} lattice ({g.n} vertexes, {g.n_edges} edges) to {args.out}")
    return 0


def _gate_row(g: Gate) -> list:
    row = [g.name, list(g.qubits)]
    if g.cbit is not None:
        row.append(g.cbit)
    return row


def _cmd_route(args) -> int:
    circ = _read_circuit(args.circuit)
    placement = None
    if args.pcg is not None:
        pcg, payload = _load_graph(args.pcg)
        placement = payload.get("placement")
    else:
        pcg = lattice(args.lattice, args.qubits or circ.n_qubits)

    if args.policy == "identity":
        init = None
    elif args.policy == "reverse_traversal":
        init = reverse_traversal_map(circ, pcg, seed=args.seed)
    else:  # placement
        if placement is None:
            raise ValueError("--policy placement needs a --pcg file with a placement")
        by_logical = dict((int(q), int(p)) for q, p in placement)
        init = tuple(by_logical[q] for q in range(circ.n_qubits))

    routed = route(circ, pcg, init, seed=args.seed)
    phys = Circuit(pcg.n, routed.gates, name=circ.name + "_routed")
    out = {
        "g_ori": routed.g_ori,
        "g_add": routed.g_add,
        "g_ap": routed.g_ap if routed.g_ori else None,
        "depth_in": circ.depth(),
        "depth_out": phys.depth(),
        "swap_count": len(routed.swap_positions),
        "seed": args.seed,
        "policy": args.policy,
        "initial_map": list(routed.initial_map),
        "final_map": list(routed.final_map),
        "gates": [_gate_row(g) for g in routed.gates],
    }
    _write_json(args.out, out)
    if args.qasm_out is not None:
        from .circuit import serialize_qasm

        with open(args.qasm_out, "w") as fh:
            fh.write(serialize_qasm(phys))
    outputs = [args.out] + ([args.qasm_out] if args.qasm_out else [])
    _emit(args, {"status": "ok", "command": "route", "outputs": outputs,
                 "g_add": routed.g_add},
          f"routed with {len(routed.swap_positions)} swaps "
          f"(g_add {routed.g_add}) to {args.out}")
    return 0


def _parse_int_list(raw: str) -> tuple[int, ...]:
    return tuple(int(x) for x in raw.split(",") if x)


def _cmd_bench(args) -> int:
    preset = {"desk": desk_config, "smoke": smoke_config}[args.preset]
    overrides = {}
    if args.qubits is not None:
        overrides["qubit_counts"] = _parse_int_list(args.qubits)
    if args.depths is not None:
        overrides["depths"] = _parse_int_list(args.depths)
    if args.samples is not None:
        overrides["samples"] = args.samples
    if args.density is not None:
        overrides["density"] = args.density
    if args.topologies is not None:
        overrides["topologies"] = tuple(args.topologies.split(","))
    overrides["alpha"] = args.alpha
    overrides["base_seed"] = args.seed
    overrides["include_timings"] = not args.no_timings
    config: SuiteConfig = preset(**overrides)

    result = run_suite(config)
    os.makedirs(args.out_dir, exist_ok=True)
    csv_path = os.path.join(args.out_dir, "results.csv")
    with open(csv_path, "w") as fh:
        fh.write(result.csv_text())
    summary_path = os.path.join(args.out_dir, "summary.json")
    with open(summary_path, "w") as fh:
        fh.write(result.summary_json())
    outputs = [csv_path, summary_path]
    if not args.no_figures:
        from .report import render_report

        outputs.extend(render_report(result.summary, args.out_dir))
    _emit(args, {"status": "ok", "command": "bench", "outputs": outputs,
                 "records": len(result.records)},
          f"bench wrote {len(result.records)} records and "
          f"{len(outputs)} files under {args.out_dir}")
    return 0


# ---------------------------------------------------------------------------
# argument wiring


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="planarq",
        description="profile circuits, design planar topologies, route, benchmark",
        epilog="env overrides: PLANARQ_MAX_DEGREE, PLANARQ_ALPHA, PLANARQ_SEED",
    )
    parser.add_argument("--json", action="store_true",
                        help="machine-readable status line on stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    default_alpha = _env("ALPHA", float, 0.5)
    default_degree = _env("MAX_DEGREE", int, 6)
    default_seed = _env("SEED", int, 0)

    p = sub.add_parser("profile", help="circuit -> weighted coupling graph")
    p.add_argument("--circuit", required=True, help="OpenQASM 2 input")
    p.add_argument("--out", required=True, help="coupling graph JSON path")
    p.set_defaults(func=_cmd_profile)

    p = sub.add_parser("design", help="circuit -> planar degree-bounded topology")
    p.add_argument("--circuit", required=True, help="OpenQASM 2 input")
    p.add_argument("--out", required=True, help="topology JSON path")
    p.add_argument("--audit", help="also write the step-by-step audit JSON")
    p.add_argument("--alpha", type=float, default=default_alpha,
                   help="blend between block counts and separation (default 0.5)")
    p.add_argument("--max-degree", type=int, default=default_degree,
                   help="vertex degree bound (default 6)")
    p.set_defaults(func=_cmd_design)

    p = sub.add_parser("lattice", help="emit a reference lattice topology")
    p.add_argument("--kind", required=True, choices=LATTICE_KINDS)
    p.add_argument("--qubits", required=True, type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_lattice)

    p = sub.add_parser("route", help="map a circuit onto a topology with swaps")
    p.add_argument("--circuit", required=True, help="OpenQASM 2 input")
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--pcg", help="topology JSON from design/lattice")
    target.add_argument("--lattice", choices=LATTICE_KINDS,
                        help="route onto a generated lattice instead")
    p.add_argument("--qubits", type=int,
                   help="lattice size (defaults to the circuit width)")
    p.add_argument("--policy", choices=("identity", "placement", "reverse_traversal"),
                   default="identity", help="initial map policy")
    p.add_argument("--seed", type=int, default=default_seed)
    p.add_argument("--out", required=True, help="JSON summary path")
    p.add_argument("--qasm-out", help="also write the routed circuit as OpenQASM")
    p.set_defaults(func=_cmd_route)

    p = sub.add_parser("bench", help="run the seeded comparison suite")
    p.add_argument("--preset", choices=("desk", "smoke"), default="smoke")
    p.add_argument("--qubits", help="comma list, e.g. 16,24,32,48")
    p.add_argument("--depths", help="comma list, e.g. 50,100,200,400")
    p.add_argument("--samples", type=int)
    p.add_argument("--density", type=float,
                   help="two-qubit density of the generated circuits")
    p.add_argument("--topologies", help="comma list; 'designed' plus lattice kinds")
    p.add_argument("--alpha", type=float, default=default_alpha)
    p.add_argument("--seed", type=int, default=default_seed,
                   help="base seed for the per-task schedule")
    p.add_argument("--out-dir", default="bench_out")
    p.add_argument("--no-timings", action="store_true",
                   help="zero the ms columns for byte-stable output")
    p.add_argument("--no-figures", action="store_true",
                   help="skip PNG rendering, emit CSV/JSON only")
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, QasmError, json.JSONDecodeError) as exc:
        print(f"error: input: {exc}", file=sys.stderr)
        return 1
    except (ValueError, AllocationError, RoutingError) as exc:
        print(f"error: constraint: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
