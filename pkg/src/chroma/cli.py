"""Command-line entry point.

Exit codes: 0 success, 1 verified negative outcome, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from .errors import ArgumentError, CertificateError, ChromaError, FormatError, RefuseSize
from .graph import host_hash, min_colour_degree, parse, serialize
from .harness import GENERATORS, SOLVERS, generate, load_plan, rows_to_csv, run_experiment, solve, target_len
from .oracle import conjecture_scan, count_pc_paths, longest_pc_cycle, longest_pc_path
from .verify import certificate_json, check_certificate, load_certificate

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageExit(message)


class _UsageExit(Exception):
    pass


def _frac(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="chroma", description="Properly coloured paths and cycles in edge-coloured graphs.")
    p.add_argument("--json", action="store_true", help="machine-readable output on stdout")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="generate an instance")
    g.add_argument("family", choices=sorted(GENERATORS))
    for name in ("d", "n", "m", "k", "colour-budget", "seed"):
        g.add_argument(f"--{name}", type=int)
    g.add_argument("--delta", type=_frac)
    g.add_argument("--eps", type=_frac)
    g.add_argument("-o", "--output", required=True)

    v = sub.add_parser("verify", help="check a certificate against a graph")
    v.add_argument("certificate")
    v.add_argument("graph")

    o = sub.add_parser("oracle", help="exact brute-force answers")
    o.add_argument("query", choices=["longest-path", "longest-cycle", "count"])
    o.add_argument("graph")
    o.add_argument("--x", type=int)
    o.add_argument("--y", type=int)
    o.add_argument("--ell", type=int)
    o.add_argument("--override", action="store_true", help="lift the size limit")

    s = sub.add_parser("solve", help="run a builder and emit a verified certificate")
    s.add_argument("solver", choices=SOLVERS)
    s.add_argument("graph")
    for name in ("delta", "eps", "beta", "gamma"):
        s.add_argument(f"--{name}", type=_frac)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--cert", help="write the certificate JSON here; a witness goes to <cert>.witness.json")

    sc = sub.add_parser("scan", help="exhaustive small-graph scan")
    sc.add_argument("--n-max", type=int, required=True)
    sc.add_argument("--colours", type=int, required=True)

    e = sub.add_parser("experiment", help="run a plan and write a CSV")
    e.add_argument("plan")
    e.add_argument("-o", "--output", required=True)
    e.add_argument("--jobs", type=int, default=1)
    return p


def _read_graph(path: str):
    try:
        return parse(Path(path).read_text())
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from None


def _emit(args, payload: dict, text: str) -> None:
    print(json.dumps(payload, sort_keys=True) if args.json else text)


def _cmd_gen(args) -> int:
    params = {"d": args.d, "n": args.n, "m": args.m, "k": args.k, "colour_budget": args.colour_budget,
              "delta": args.delta, "eps": args.eps}
    params = {k: v for k, v in params.items() if v is not None}
    g, w = generate(args.family, params, args.seed or 0)
    Path(args.output).write_text(serialize(g))
    payload = {"output": args.output, "n": g.n, "m": g.m, "delta_c": min_colour_degree(g), "host_hash": host_hash(g)}
    if w is not None:
        side = args.output + ".witness.json"
        Path(side).write_text(json.dumps(w.to_json(), sort_keys=True) + "\n")
        payload["witness"] = side
    _emit(args, payload, f"wrote {args.output}: n={g.n} m={g.m} delta_c={payload['delta_c']}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    g = _read_graph(args.graph)
    try:
        cert = load_certificate(Path(args.certificate).read_text())
    except OSError as exc:
        raise FormatError(f"cannot read {args.certificate}: {exc}") from None
    walk = check_certificate(g, cert)
    _emit(args, {"ok": True, "kind": walk.kind, "length": walk.length}, f"OK {walk.kind} length {walk.length}")
    return EXIT_OK


def _cmd_oracle(args) -> int:
    g = _read_graph(args.graph)
    if args.query == "count":
        if None in (args.x, args.y, args.ell):
            raise ArgumentError("count needs --x, --y and --ell")
        total = count_pc_paths(g, args.x, args.y, args.ell, override=args.override)
        _emit(args, {"count": total}, f"count {total}")
        return EXIT_OK
    if args.query == "longest-path":
        w = longest_pc_path(g, override=args.override)
    else:
        w = longest_pc_cycle(g, override=args.override)
        if w is None:
            _emit(args, {"length": 0, "vertices": []}, "no properly coloured cycle")
            return EXIT_OK
    _emit(args, {"length": w.length, "vertices": list(w.vertices)},
          f"length {w.length}: {' '.join(map(str, w.vertices))}")
    return EXIT_OK


def _cmd_solve(args) -> int:
    g = _read_graph(args.graph)
    params = {"delta": args.delta, "eps": args.eps, "beta": args.beta, "gamma": args.gamma}
    out = solve(g, args.solver, {k: v for k, v in params.items() if v is not None}, args.seed)
    payload = {"solver": args.solver, "status": out.status, "verified": out.verified,
               "achieved_len": out.achieved_len, "target_len": target_len(g), **out.detail}
    if out.walk is not None and args.cert:
        Path(args.cert).write_text(json.dumps(certificate_json(g, out.walk), sort_keys=True) + "\n")
        payload["cert"] = args.cert
    if out.witness is not None:
        payload["witness"] = out.witness.to_json()
        if args.cert:
            Path(args.cert + ".witness.json").write_text(json.dumps(out.witness.to_json(), sort_keys=True) + "\n")
    payload = {k: (str(v) if isinstance(v, Fraction) else v) for k, v in payload.items()}
    _emit(args, payload, f"{args.solver}: {out.status}, achieved {out.achieved_len} of target {payload['target_len']}")
    if not out.verified:
        print(f"error: {out.detail.get('error', out.status)}", file=sys.stderr)
    return EXIT_OK if out.verified else EXIT_FAIL


def _cmd_scan(args) -> int:
    res = conjecture_scan(args.n_max, args.colours)
    _emit(args, res, f"checked {res['instances_checked']} graphs, violators: {len(res['violators'])}")
    return EXIT_OK if not res["violators"] else EXIT_FAIL


def _cmd_experiment(args) -> int:
    rows = run_experiment(load_plan(args.plan), jobs=args.jobs)
    Path(args.output).write_text(rows_to_csv(rows))
    bad = sum(1 for r in rows if r["verified"] != "true")
    _emit(args, {"rows": len(rows), "unverified": bad, "output": args.output},
          f"wrote {len(rows)} rows to {args.output} ({bad} unverified)")
    return EXIT_OK


COMMANDS = {"gen": _cmd_gen, "verify": _cmd_verify, "oracle": _cmd_oracle, "solve": _cmd_solve,
            "scan": _cmd_scan, "experiment": _cmd_experiment}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageExit as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.cmd](args)
    except (ArgumentError, RefuseSize) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CertificateError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        if args.json:
            print(json.dumps({"ok": False, "error": type(exc).__name__, "detail": str(exc)}))
        return EXIT_FAIL
    except ChromaError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
