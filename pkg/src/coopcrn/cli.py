"""Command-line front end.

Exit codes: 0 success, 1 validation or bound failure, 2 usage or input error.
Diagnostics go to stderr; data goes to stdout or to files under ``--out``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

from .oracle import OracleUnsupported, elastic_optimum, inelastic_optimum
from .sim import BoundViolation, config_from_dict, evaluate, sweep
from .topology import (EnumerationCapError, enumerate_feasible, instance_from_dict,
                       validate_topology)
from .utility import UtilitySpec

log = logging.getLogger("coopcrn")


class InputError(Exception):
    """Bad input file or parameter; maps to exit code 2."""


def _read_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"{path}: no such file")
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}")


def _instance(path: str):
    doc = _read_json(path)
    try:
        return instance_from_dict(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: malformed instance ({exc})")


def _emit(text: str, out: str | None, name: str) -> None:
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return
    d = Path(out)
    d.mkdir(parents=True, exist_ok=True)
    (d / name).write_text(text)
    print(f"wrote {d / name}", file=sys.stderr)


def cmd_validate(args) -> int:
    topo, routes = _instance(args.instance)
    problems = validate_topology(topo, routes)
    if problems:
        for msg in problems:
            print(f"invalid: {msg}", file=sys.stderr)
        return 1
    print("valid")
    return 0


def cmd_enumerate(args) -> int:
    topo, routes = _instance(args.instance)
    use_routes = routes if args.model == "elastic" else None
    if args.model == "elastic" and routes is None:
        raise InputError("elastic enumeration needs routes in the instance")
    scheds = enumerate_feasible(topo, use_routes, cap=args.cap)
    rows = [{"units": "".join("1" if b else "0" for b in s.units())} for s in scheds]
    _emit(json.dumps({"count": len(rows), "schedules": rows}, indent=2), args.out, "schedules.json")
    return 0


def cmd_oracle(args) -> int:
    topo, routes = _instance(args.instance)
    params = _read_json(args.config).get("params", {}) if args.config else {}
    eps = args.epsilon if args.epsilon is not None else float(params.get("epsilon", 0.0))
    if args.model == "elastic":
        if routes is None:
            raise InputError("elastic oracle needs routes in the instance")
        rho = args.rho if args.rho is not None else params.get("rho", [1.0])
        sol = elastic_optimum(topo, routes, rho if isinstance(rho, list) else [rho], eps, cap=args.cap)
    else:
        a_P = args.a_P if args.a_P is not None else float(params.get("a_P", 0.0))
        f = UtilitySpec.from_dict(params.get("f", {}))
        g = params.get("g", [{}])
        g = [UtilitySpec.from_dict(u) for u in (g if isinstance(g, list) else [g])]
        sol = inelastic_optimum(topo, a_P, f, g, eps, cap=args.cap)
    _emit(sol.to_json(), args.out, "oracle.json")
    return 0 if sol.ok else 1


def _config(args):
    topo, routes = _instance(args.instance)
    doc = _read_json(args.config)
    try:
        return config_from_dict(doc, topo, routes, model=args.model, source_mode=args.source_mode,
                                scheduler=args.scheduler, T=args.T, seed=args.seed,
                                burn_in=args.burn_in, V1=args.V1, V2=args.V2,
                                strict=True if args.strict else None)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{args.config}: {exc}")


def cmd_run(args) -> int:
    cfg = _config(args)
    try:
        res, bounds, report = evaluate(cfg)
    except BoundViolation as exc:
        print(f"bound violation: {exc}", file=sys.stderr)
        return 1
    _emit(res.stats.to_json(), args.out, "summary.json")
    if args.out is not None:
        _emit(json.dumps({"bounds": bounds.to_dict(), "report": report.to_dict()}, indent=2),
              args.out, "bounds.json")
        if args.trace:
            path = Path(args.out) / "trace.csv"
            res.write_trace(path)
            print(f"wrote {path}", file=sys.stderr)
    elif args.trace:
        print("--trace needs --out; trace not written", file=sys.stderr)
    for line in report.lines():
        print(line, file=sys.stderr)
    return 1 if cfg.strict and not report.passed else 0


def cmd_sweep(args) -> int:
    cfg = _config(args)
    values = [float(v) for v in args.values.split(",")]
    rows = sweep(cfg, values, workers=args.workers)
    buf = io.StringIO()
    cols = list(rows[0])
    w = csv.DictWriter(buf, fieldnames=cols)
    w.writeheader()
    for r in rows:
        w.writerow({k: json.dumps(v) if isinstance(v, list) else v for k, v in r.items()})
    _emit(buf.getvalue(), args.out, "sweep.csv")
    return 1 if cfg.strict and not all(r["passed"] for r in rows) else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="coopcrn", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check an instance file")
    p.add_argument("instance")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("enumerate", help="list feasible schedules")
    p.add_argument("instance")
    p.add_argument("--model", choices=["inelastic", "elastic"], default="inelastic")
    p.add_argument("--cap", type=int, default=20)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_enumerate)

    p = sub.add_parser("oracle", help="solve the capacity-region LP")
    p.add_argument("instance")
    p.add_argument("config", nargs="?")
    p.add_argument("--model", choices=["inelastic", "elastic"], default="elastic")
    p.add_argument("--epsilon", type=float)
    p.add_argument("--rho", type=float, nargs="+")
    p.add_argument("--a-P", dest="a_P", type=float)
    p.add_argument("--cap", type=int, default=20)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_oracle)

    for name, fn, hlp in (("run", cmd_run, "simulate one configuration"),
                          ("sweep", cmd_sweep, "simulate a V1/V2 grid")):
        p = sub.add_parser(name, help=hlp)
        p.add_argument("instance")
        p.add_argument("config")
        p.add_argument("--model", choices=["inelastic", "elastic"])
        p.add_argument("--source-mode", choices=["backlogged", "arbitrary"])
        p.add_argument("--scheduler", choices=["exact", "gmm"])
        p.add_argument("--V1", type=float)
        p.add_argument("--V2", type=float)
        p.add_argument("--T", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--burn-in", type=float)
        p.add_argument("--strict", action="store_true")
        p.add_argument("--trace", action="store_true")
        p.add_argument("--out")
        if name == "sweep":
            p.add_argument("--values", required=True, help="comma-separated V grid")
            p.add_argument("--workers", type=int, default=1)
        p.set_defaults(fn=fn)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.fn(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (EnumerationCapError, OracleUnsupported) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
