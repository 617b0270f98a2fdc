"""Command-line front end.

Exit codes: 0 success / criterion holds, 1 criterion-failure result,
2 usage, parse or validation error, 3 internal cross-check mismatch.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .complex import SimplicialComplex2, betti_numbers, build_rips_2skeleton, validate_fence
from .deathsets import brute_force_death_sets, cake_or_death, default_max_size
from .errors import BudgetExceeded, CovfailError, TooLarge
from .generate import GeneratorSpec, coverage_oracle, generate
from .graphfile import emit_graph, parse_events, read_graph
from .monitor import FAILED, init_monitor, replay
from .persistence import dsg_oracle, reduce_complex
from .probability import (
    FailureModel,
    parse_failure_spec,
    prob_failure_bruteforce,
    prob_failure_exact,
    prob_failure_mc,
)

DEFAULT_BUDGET = 1_000_000


class Mismatch(Exception):
    pass


def _budget(arg: int | None) -> int:
    if arg is not None:
        return arg
    env = os.environ.get("COVFAIL_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=False))


def _load(path: str) -> tuple:
    g = read_graph(path)
    return g, build_rips_2skeleton(g)


def _edge_labels(K: SimplicialComplex2, simplex_ids, s) -> list[list[str]]:
    return [[K.labels[v] for v in s.simplices[k]] for k in simplex_ids]


def cmd_check(args) -> int:
    g, K = _load(args.graph)
    s = reduce_complex(K)
    verdict = s.check()
    out = {"dsg": "pass" if verdict.passed else "fail", "witness": None}
    if verdict.passed:
        c = verdict.column
        out["witness"] = {
            "triangle": [K.labels[v] for v in s.simplices[c]],
            "boundary": _edge_labels(K, verdict.boundary, s),
            "chain": _edge_labels(K, s.witness_chain(c), s),
        }
    b0, b1, b2 = betti_numbers(K)
    out["diagnostics"] = {
        "fence_ok": validate_fence(g).ok,
        "vertices": len(K.vertices),
        "edges": len(K.edges),
        "triangles": len(K.triangles),
        "betti": [b0, b1, b2],
    }
    if args.verify:
        oracle = dsg_oracle(K).passed
        out["diagnostics"]["oracle"] = "pass" if oracle else "fail"
        if oracle != verdict.passed:
            _emit(out)
            raise Mismatch("matrix criterion and linear-system oracle disagree")
    _emit(out)
    return 0 if verdict.passed else 1


def _max_size(args, g, K) -> int | None:
    if args.exhaustive:
        return None
    if args.max_size is not None:
        return args.max_size
    if "rc" in g.params and "area" in g.params:
        return default_max_size(len(K.vertices), g.params["rc"], g.params["area"])
    return None


def cmd_deathsets(args) -> int:
    g, K = _load(args.graph)
    try:
        report = cake_or_death(K, max_size=_max_size(args, g, K), parallel=args.parallel,
                               budget=_budget(args.budget))
    except BudgetExceeded as exc:
        out = exc.partial.to_json(K)
        out["notice"] = str(exc)
        _emit(out)
        return 0
    out = report.to_json(K)
    if args.verify:
        try:
            brute = brute_force_death_sets(K)
        except TooLarge as exc:
            out["verified"] = None
            out["verify_skipped"] = str(exc)
            _emit(out)
            return 1 if report.baseline_failed else 0
        if report.truncated_at_size is not None:
            cap = report.truncated_at_size
            expected = {A for A in brute.families() if len(A) <= cap}
        else:
            expected = brute.families()
        out["verified"] = expected == report.families()
        if not out["verified"]:
            _emit(out)
            raise Mismatch("search and brute-force death sets disagree")
    _emit(out)
    return 1 if report.baseline_failed else 0


def cmd_prob(args) -> int:
    g, K = _load(args.graph)
    model = FailureModel.from_graph(g)
    times = [float(t) for t in args.times.split(",") if t.strip()]
    if any(t < 0 for t in times):
        raise ValueError("times must be nonnegative")
    out: dict = {"method": args.method}
    if args.method == "brute":
        probs = prob_failure_bruteforce(K, model, times)
        out["curve"] = [{"t": t, "probability": p, "method": "brute"} for t, p in zip(times, probs)]
    else:
        report = cake_or_death(K, max_size=args.max_size, budget=_budget(args.budget))
        sets = report.as_labels(K)
        out["minimal_death_sets"] = sets
        if report.truncated_at_size is not None:
            out["notice"] = (
                f"death sets larger than {report.truncated_at_size} ignored; "
                "probabilities are lower bounds"
            )
        if args.method == "ie":
            curve = prob_failure_exact(sets, model, times)
        else:
            if args.seed is None:
                raise ValueError("--seed is required for --method mc")
            curve = prob_failure_mc(sets, model, times, args.samples, args.seed)
        out["curve"] = curve.to_json()
        if args.csv:
            Path(args.csv).write_text(curve.to_csv())
    _emit(out)
    return 0


def cmd_monitor(args) -> int:
    g, K = _load(args.graph)
    events = parse_events(Path(args.events).read_text())
    st = init_monitor(K)
    print(json.dumps(st.init_json()))
    verdict = replay(st, events)
    for e in verdict.entries:
        print(json.dumps(e.to_json()))
    if verdict.unprocessed:
        print(json.dumps({
            "event": "unprocessed",
            "events": [[ev.time, ev.vertex] for ev in verdict.unprocessed],
        }))
    return 1 if verdict.status == FAILED else 0


def _parse_polygon(text: str) -> list[tuple[float, float]]:
    pts = []
    for chunk in text.replace(";", " ").split():
        x, y = chunk.split(",")
        pts.append((float(x), float(y)))
    return pts


def cmd_gen(args) -> int:
    if args.seed is None:
        raise ValueError("--seed is required")
    kw = {}
    if args.polygon:
        kw["polygon"] = _parse_polygon(args.polygon)
    spec = GeneratorSpec(n=args.n, r_b=args.rb, r_c=args.rc, seed=args.seed,
                         spacing=args.spacing, allow_small_rc=args.allow_small_rc, **kw)
    for w in spec.warnings:
        print(f"warning: {w}", file=sys.stderr)
    g = generate(spec)
    if args.fail:
        fail = parse_failure_spec(args.fail)
        for n in g.nodes:
            if not n.fence:
                n.fail = fail
    text = emit_graph(g)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_cover(args) -> int:
    g = read_graph(args.graph)
    pos = g.positions()
    if pos is None:
        raise ValueError("coverage check needs a position for every node")
    r_c = args.rc if args.rc is not None else g.params.get("rc")
    if r_c is None:
        raise ValueError("no cover radius: pass --rc or add 'param rc <value>'")
    polygon = [pos[f] for f in g.fence_order]
    alive = [p for nid, p in pos.items()]
    res = coverage_oracle(alive, r_c, polygon, args.h)
    _emit({"covered": res.covered, "worst_point": res.worst_point,
           "worst_distance": res.worst_distance, "r_c": r_c})
    return 0 if res.covered else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="covfail", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="decide the coverage criterion for a graph file")
    c.add_argument("graph")
    c.add_argument("--verify", action="store_true", help="cross-check with the linear-system oracle")
    c.set_defaults(func=cmd_check)

    d = sub.add_parser("deathsets", help="enumerate minimal death sets")
    d.add_argument("graph")
    d.add_argument("--max-size", type=int, default=None)
    d.add_argument("--exhaustive", action="store_true", help="ignore any default size cap")
    d.add_argument("--budget", type=int, default=None, help="max subsets to classify (env COVFAIL_BUDGET)")
    d.add_argument("--parallel", action="store_true")
    d.add_argument("--verify", action="store_true", help="diff against brute force")
    d.set_defaults(func=cmd_deathsets)

    pr = sub.add_parser("prob", help="probability of criterion failure over time")
    pr.add_argument("graph")
    pr.add_argument("--times", required=True, help="comma-separated time points")
    pr.add_argument("--method", choices=("ie", "mc", "brute"), default="ie")
    pr.add_argument("--samples", type=int, default=100_000)
    pr.add_argument("--seed", type=int, default=None)
    pr.add_argument("--max-size", type=int, default=None)
    pr.add_argument("--budget", type=int, default=None)
    pr.add_argument("--csv", default=None, help="also write the curve as CSV")
    pr.set_defaults(func=cmd_prob)

    m = sub.add_parser("monitor", help="replay a failure-event stream")
    m.add_argument("graph")
    m.add_argument("events")
    m.set_defaults(func=cmd_monitor)

    gn = sub.add_parser("gen", help="generate a random network in a convex polygon")
    gn.add_argument("--n", type=int, default=20, help="interior sensor count")
    gn.add_argument("--rb", type=float, default=0.4)
    gn.add_argument("--rc", type=float, default=None)
    gn.add_argument("--spacing", type=float, default=None)
    gn.add_argument("--polygon", default=None, help="'x,y x,y ...' (default unit square)")
    gn.add_argument("--seed", type=int, default=None)
    gn.add_argument("--fail", default=None, help="failure spec attached to interior nodes")
    gn.add_argument("--allow-small-rc", action="store_true")
    gn.add_argument("-o", "--output", default=None)
    gn.set_defaults(func=cmd_gen)

    cv = sub.add_parser("cover", help="grid test of geometric coverage for a positioned file")
    cv.add_argument("graph")
    cv.add_argument("--rc", type=float, default=None)
    cv.add_argument("--h", type=float, default=None, help="grid step (default r_c/50)")
    cv.set_defaults(func=cmd_cover)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except Mismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (CovfailError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
