"""Command-line front end.

Exit codes: 0 success, 1 a verification failed, 2 usage or configuration
error. Output is JSON (default), JSON lines or CSV; ``--human`` switches to a
readable layout.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import random
import sys
import time
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

from . import amplitudes as amp
from .canonical import canonical_form, reduce_graph, sign_theorem_check
from .enumerator import (
    CostGuard,
    default_jobs,
    enumerate_rooted,
    labeled_ribbon_graphs,
    random_ribbon_graph,
    rooted_ribbon_classes,
    unrooted_ribbon_classes,
)
from .invariants import ConfigError, ModelSignature, count_invariants, enumerate_invariants, load_model
from .multiribbon import faces_per_color
from .poly import Poly
from .ribbon import GraphError, RibbonGraph, stabilizer_formula, twist_orbit_and_stabilizer
from .wick import CostGuard as WickCostGuard
from .wick import oracle_g2, oracle_lnz, oracle_z

CHECKS = ("sign", "moves", "duality", "dse", "oracle", "stabilizer", "cancellation", "rescaling")


class UsageError(Exception):
    pass


# signature and output helpers -----------------------------------------------


def _parse_parity(text: str, D: int) -> tuple:
    bits = [b for b in text.replace(",", "") if not b.isspace()]
    if len(bits) != D or any(b not in "01" for b in bits):
        raise UsageError(f"--parity: expected {D} bits in {{0,1}}, got {text!r}")
    return tuple(int(b) for b in bits)


def resolve_signature(args) -> ModelSignature:
    if args.model:
        try:
            text = Path(args.model).read_text()
        except OSError as exc:
            raise UsageError(f"--model: {exc}") from None
        return load_model(text)
    D = args.D if args.D is not None else 2
    if D < 1:
        raise UsageError("--D: must be at least 1")
    parity = _parse_parity(args.parity, D) if args.parity else (0,) * D
    return ModelSignature.build(D, parity)


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=False, separators=(",", ":"))


def poly_csv(p: Poly) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(p.variables) + ["coeff"])
    for exps, c in p.sorted_terms():
        w.writerow(list(exps) + [str(c)])
    return buf.getvalue()


def emit_poly(p: Poly, args, out) -> None:
    if args.human:
        out.write(p.pretty() + "\n")
    elif args.out == "csv":
        out.write(poly_csv(p))
    else:
        out.write(_dumps(p.to_json()) + "\n")


def emit_records(records: Sequence[dict], args, out) -> None:
    if args.human:
        for r in records:
            out.write("  ".join(f"{k}={v}" for k, v in r.items()) + "\n")
    elif args.out == "json":
        out.write(_dumps(list(records)) + "\n")
    elif args.out == "csv":
        keys: List[str] = []
        for r in records:
            keys += [k for k in r if k not in keys]
        w = csv.DictWriter(out, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        for r in records:
            w.writerow({k: v if not isinstance(v, (list, dict)) else _dumps(v) for k, v in r.items()})
    else:
        for r in records:
            out.write(_dumps(r) + "\n")


def _jobs(args) -> int:
    return args.jobs if args.jobs is not None else default_jobs()


# subcommands ------------------------------------------------------------------


def cmd_invariants(args, out) -> int:
    D = args.D if args.D is not None else 2
    if D < 1:
        raise UsageError("--D: must be at least 1")
    invs = enumerate_invariants(D)
    if len(invs) != count_invariants(D):
        return 1
    sig = ModelSignature.build(D, (0,) * D)
    records = [{"id": inv.ident, "coupling": sig.coupling(inv), **inv.to_json()} for inv in invs]
    emit_records(records, args, out)
    return 0


def _graph_record(mg) -> dict:
    rec = {"code": mg.code().decode(), "edges": list(mg.edge_counts())}
    rec.update(mg.to_json())
    rec["faces"] = list(faces_per_color(mg))
    rec["amplitude"] = amp.amplitude(mg).to_json()
    rec["weight_g2"] = str(amp.weight_g2(mg))
    return rec


def _cached(kind: str, key: dict, produce: Callable[[], str]) -> str:
    root = os.environ.get("TDE_CACHE_DIR")
    if not root:
        return produce()
    digest = hashlib.sha256(_dumps({"kind": kind, **key}).encode()).hexdigest()[:24]
    path = Path(root) / f"{kind}-{digest}.txt"
    if path.exists():
        return path.read_text()
    text = produce()
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(text)
    tmp.replace(path)
    return text


def cmd_enumerate(args, out) -> int:
    sig = resolve_signature(args)
    order = _order(args)

    def produce() -> str:
        graphs = enumerate_rooted(sig, order, jobs=_jobs(args))
        return "".join(_dumps(_graph_record(mg)) + "\n" for mg in graphs)

    text = _cached("enumerate", {"sig": sig.to_json(), "order": order}, produce)
    if args.human:
        lines = [json.loads(x) for x in text.splitlines()]
        text = "".join(f"{r['code']}  edges={r['edges']}  faces={r['faces']}  w={r['weight_g2']}\n" for r in lines)
    if args.emit:
        Path(args.emit).write_text(text)
        out.write(_dumps({"classes": text.count("\n"), "path": args.emit}) + "\n")
    else:
        out.write(text)
    return 0


def _read_graph(args) -> RibbonGraph:
    if not args.graph:
        raise UsageError("--graph: a ribbon graph JSON file (or - for stdin) is required")
    try:
        text = sys.stdin.read() if args.graph == "-" else Path(args.graph).read_text()
        data = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"--graph: {exc}") from None
    return RibbonGraph.from_json(data)


def cmd_canon(args, out) -> int:
    g = _read_graph(args)
    red = reduce_graph(g, check=True)
    s = red.surface
    head = {"g": s.genus, "r": s.crosscaps, "chi": s.chi, "orientable": s.orientable}
    if args.human:
        kind = "orientable" if s.orientable else "non-orientable"
        out.write(f"genus {s.genus}, crosscaps {s.crosscaps}, chi {s.chi} ({kind})\n")
        if args.trace:
            for step in red.trace:
                out.write("  " + " ".join(f"{k}={v}" for k, v in step.items()) + "\n")
        return 0
    out.write(_dumps(head) + "\n")
    if args.trace:
        for step in red.trace:
            out.write(_dumps(step) + "\n")
    return 0


def _order(args) -> int:
    if args.order is None:
        raise UsageError("--order: required")
    if args.order < 0:
        raise UsageError("--order: must be non-negative")
    return args.order


def cmd_series(args, out) -> int:
    sig = resolve_signature(args)
    order = _order(args)
    target = args.target or "g2"

    def produce() -> str:
        p = amp.series(sig, target, order, jobs=_jobs(args), weights=args.weights)
        return _dumps(p.to_json())

    text = _cached("series", {"sig": sig.to_json(), "order": order, "target": target, "weights": args.weights},
                   produce)
    emit_poly(Poly.from_json(json.loads(text)), args, out)
    return 0


def cmd_oracle(args, out) -> int:
    sig = resolve_signature(args)
    order = _order(args)
    fn = {"g2": oracle_g2, "lnz": oracle_lnz, "z": oracle_z}.get(args.target or "g2")
    if fn is None:
        raise UsageError("--target: one of g2, lnz, z")
    emit_poly(fn(sig, order), args, out)
    return 0


# verification -------------------------------------------------------------------


def _max_edges(args, default: int) -> int:
    return default if args.max_edges is None else args.max_edges


def check_sign(args, sig) -> dict:
    E = _max_edges(args, 4)
    if E > 5:
        raise CostGuard("--max-edges: the exhaustive sign check is limited to 5 edges")
    total = fails = 0
    for e in range(E + 1):
        for g in labeled_ribbon_graphs(e):
            total += 1
            fails += not sign_theorem_check(g)
    rng = random.Random(args.seed)
    for _ in range(args.random):
        g = random_ribbon_graph(rng.randint(1, max(E, 8)), rng)
        total += 1
        fails += not sign_theorem_check(g)
    return {"ok": fails == 0, "graphs": total, "failures": fails}


def check_moves(args, sig) -> dict:
    E = _max_edges(args, 4)
    if E > 4:
        raise CostGuard("--max-edges: the move check is limited to 4 edges")
    total = fails = 0
    for e in range(1, E + 1):
        for g in unrooted_ribbon_classes(e):
            total += 1
            try:
                reduce_graph(g, check=True)
            except AssertionError:
                fails += 1
    three = RibbonGraph.build([[0, 1, 2, 3, 4, 5]], [(0, 1), (2, 3), (4, 5)], [1, 1, 1])
    surf = canonical_form(three).as_tuple()
    return {"ok": fails == 0 and surf == (1, 1), "graphs": total, "failures": fails,
            "three_crosscaps": list(surf)}


def check_stabilizer(args, sig) -> dict:
    E = _max_edges(args, 4)
    if E > 4:
        raise CostGuard("--max-edges: brute-force stabilizers are limited to 4 edges")
    total = fails = 0
    for e in range(1, E + 1):
        for g in rooted_ribbon_classes(e):
            orb, stab = twist_orbit_and_stabilizer(g)
            total += 1
            fails += stab != stabilizer_formula(g) or orb * stab != 2 ** g.E
    return {"ok": fails == 0, "graphs": total, "failures": fails}


def check_duality_report(args, sig) -> dict:
    order = args.order if args.order is not None else (2 if sig.D <= 2 else 1)
    res = amp.check_duality(sig, order, jobs=_jobs(args))
    return {"ok": all(res.values()), "order": order, "colors": {str(c): v for c, v in res.items()}}


def check_dse_report(args, sig) -> dict:
    order = args.order if args.order is not None else 2
    ok = amp.check_dse(sig, order, jobs=_jobs(args))
    product = amp.check_dse(sig, order, convention="product", jobs=_jobs(args))
    return {"ok": ok, "order": order, "product_convention": product}


def check_oracle(args, sig) -> dict:
    order = args.order if args.order is not None else 1
    graphs = enumerate_rooted(sig, order, jobs=_jobs(args))
    out = {"order": order}
    ok = True
    for name, series_fn, oracle_fn in (("g2", amp.series_g2, oracle_g2), ("lnz", amp.series_lnz, oracle_lnz)):
        s = series_fn(sig, order, graphs=graphs, weights=args.weights)
        o = oracle_fn(sig, order)
        diff = s - o
        ok = ok and not diff
        out[name] = {"series": s.pretty(), "oracle": o.pretty(), "diff": diff.pretty()}
    out["ok"] = ok
    return out


def check_cancellation(args, sig) -> dict:
    order = args.order if args.order is not None else 2
    rep = amp.dual_cancellation_check(order, jobs=_jobs(args))
    return {"order": order, **rep.to_json()}


def check_rescaling(args, sig) -> dict:
    order = args.order if args.order is not None else 2
    return {"ok": amp.rescaling_sign_check(order, jobs=_jobs(args)), "order": order}


CHECK_FUNCS: Dict[str, Callable] = {
    "sign": check_sign,
    "moves": check_moves,
    "stabilizer": check_stabilizer,
    "duality": check_duality_report,
    "dse": check_dse_report,
    "oracle": check_oracle,
    "cancellation": check_cancellation,
    "rescaling": check_rescaling,
}


def cmd_verify(args, out) -> int:
    names = [c.strip() for c in (args.check or "").split(",") if c.strip()]
    if not names:
        raise UsageError(f"--check: give one or more of {','.join(CHECKS)}")
    bad = [c for c in names if c not in CHECK_FUNCS]
    if bad:
        raise UsageError(f"--check: unknown check {bad[0]!r}; choose from {','.join(CHECKS)}")
    sig = resolve_signature(args)
    reports = []
    for name in names:
        t0 = time.perf_counter()
        rep = CHECK_FUNCS[name](args, sig)
        rep = {"check": name, "ok": rep.pop("ok"), **rep, "seconds": round(time.perf_counter() - t0, 3)}
        reports.append(rep)
    if args.human:
        for rep in reports:
            status = "PASS" if rep["ok"] else "FAIL"
            out.write(f"{status} {rep['check']}\n")
            for k, v in rep.items():
                if k in ("check", "ok"):
                    continue
                if isinstance(v, dict):
                    for kk, vv in v.items():
                        out.write(f"  {k}.{kk}: {vv}\n")
                else:
                    out.write(f"  {k}: {v}\n")
    else:
        args.out = args.out if args.out != "csv" else "jsonl"
        emit_records([{k: v for k, v in r.items() if k != "seconds"} for r in reports], args, out)
    return 0 if all(r["ok"] for r in reports) else 1


# parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--D", type=int, help="number of colors")
    common.add_argument("--parity", help="color parities, e.g. 01 or 0,1")
    common.add_argument("--model", help="model JSON file (overrides --D/--parity)")
    common.add_argument("--order", type=int, help="total edge order")
    common.add_argument("--max-edges", type=int, dest="max_edges", help="edge bound for graph checks")
    common.add_argument("--target", choices=("g2", "lnz", "z"), help="series to compute")
    common.add_argument("--check", help=f"comma list of {','.join(CHECKS)}")
    common.add_argument("--out", choices=("json", "jsonl", "csv"), default="json")
    common.add_argument("--jobs", type=int, help="worker processes (default: all cores)")
    common.add_argument("--human", action="store_true", help="readable output")
    common.add_argument("--weights", choices=tuple(amp.WEIGHTS), default="closed",
                        help="symmetry weights: closed formula or exact automorphism count")

    p = argparse.ArgumentParser(prog="tensordual", description="Ribbon graph expansion of quartic graded tensor models.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("invariants", parents=[common], help="list canonical quartic invariants")
    e = sub.add_parser("enumerate", parents=[common], help="rooted graph classes as JSON lines")
    e.add_argument("--emit", help="write the JSON lines to this file")
    c = sub.add_parser("canon", parents=[common], help="canonical surface of a ribbon graph")
    c.add_argument("--graph", help="ribbon graph JSON file, - for stdin")
    c.add_argument("--trace", action="store_true", help="also emit the move trace")
    sub.add_parser("series", parents=[common], help="perturbative series from graphs")
    v = sub.add_parser("verify", parents=[common], help="run verification checks")
    v.add_argument("--random", type=int, default=1000, help="random graphs for the sign check")
    v.add_argument("--seed", type=int, default=0)
    sub.add_parser("oracle", parents=[common], help="series from the pairing oracle")
    return p


COMMANDS = {
    "invariants": cmd_invariants,
    "enumerate": cmd_enumerate,
    "canon": cmd_canon,
    "series": cmd_series,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
}


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.jobs is not None and args.jobs < 1:
        print("error: --jobs: must be at least 1", file=sys.stderr)
        return 2
    try:
        return COMMANDS[args.command](args, out)
    except ConfigError as exc:
        print(f"error: model field {exc}", file=sys.stderr)
        return 2
    except (UsageError, CostGuard, WickCostGuard, GraphError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
