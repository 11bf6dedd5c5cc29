"""Command line entry point: trial, estimate, verify-structure, game, generate."""

from __future__ import annotations

import argparse
import itertools
import json
import random
import sys
import time
from fractions import Fraction

from . import generators as gen
from . import ground_truth as gt
from .core import dumps_function
from .harness import (ExperimentConfig, estimate, read_config_file, run_trial, write_report)

CONFIG_FLAGS = ("input", "d", "n", "r", "far_eps", "path", "tester", "eps", "reps", "round_cap",
                "prop", "c0", "strategy", "window", "t", "mode", "trials", "seed", "out",
                "format", "jobs")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key=value file; flags override it")
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"))


def _add_experiment(p: argparse.ArgumentParser) -> None:
    _add_common(p)
    p.add_argument("--input", help=f"input kind: {', '.join(gen.KINDS)} or file")
    p.add_argument("--path", help="function file for --input file")
    p.add_argument("--d", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--far-eps", dest="far_eps")
    p.add_argument("--tester")
    p.add_argument("--eps")
    p.add_argument("--reps", type=int)
    p.add_argument("--round-cap", dest="round_cap", type=int)
    p.add_argument("--prop")
    p.add_argument("--c0")
    p.add_argument("--strategy")
    p.add_argument("--window", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--mode", choices=("erasure", "corruption"))
    p.add_argument("--jobs", type=int)


def _config(args) -> ExperimentConfig:
    data: dict = {}
    if args.config:
        data.update(read_config_file(args.config))
    for key in CONFIG_FLAGS:
        val = getattr(args, key, None)
        if val is not None:
            data[key] = val
    return ExperimentConfig.from_mapping(data)


def cmd_trial(args) -> int:
    cfg = _config(args)
    verdict, stats, session = run_trial(cfg, args.index, keep_session=True)
    out = {"index": args.index, "decision": verdict.decision.value,
           "queries": verdict.queries_used, "saw_erasure": verdict.saw_erasure,
           "correct": stats.correct,
           "witness": None if verdict.witness is None else verdict.witness.to_dict()}
    print(json.dumps(out, sort_keys=True))
    if args.transcript:
        hex_points = not hasattr(session.f, "n")
        with open(args.transcript, "w") as fh:
            fh.write(session.transcript.dumps(hex_points=hex_points))
    return 0


def cmd_estimate(args) -> int:
    cfg = _config(args)
    rep = estimate(cfg)
    row = rep.row()
    if cfg.format == "json" or args.json:
        print(json.dumps(row, sort_keys=True))
    else:
        lo, hi = rep.reject_ci
        print(f"trials={rep.trials} rejects={rep.rejects} rate={rep.reject_rate:.4f} "
              f"ci99=[{lo:.4f}, {hi:.4f}] mean_queries={rep.mean_queries:.1f} "
              f"erasure_rate={rep.erasure_rate:.3f} truncated={rep.truncated} "
              f"wall={rep.wall_time:.2f}s")
    return 0


def structure_checks(quick: bool = False) -> list[tuple[str, bool, str]]:
    from .adversaries import SpanEraser
    from .core import BooleanFunction
    from .oracle import open_session

    rows = []

    def run(name, fn):
        t0 = time.perf_counter()
        res = fn()
        rows.append((name, bool(res.pop("passed")), f"{res} ({time.perf_counter() - t0:.1f}s)"))

    run("linearity violations >= distance (d=3, k=2,4)", lambda: _short(gt.check_linearity_theorem(3, (2, 4))))
    def odd():
        res = gt.check_odd_counterexample()
        return {"violations": res["violations"], "distance": str(res["distance"]),
                "passed": res["passed"]}

    run("odd-k counterexample x[1]+1 (d=3, k=3)", odd)
    run("eta >= min(7/3 eps_f, 1/40) (d=3)", lambda: _short(gt.check_eta_bound(3)))
    run("Parseval (d <= 10)", lambda: gt.check_parseval(100 if quick else 1000))

    def span():
        rng = random.Random(0)
        bad = 0
        seqs = 100 if quick else 1000
        for _ in range(seqs):
            t = rng.choice((4, 8, 16))
            k = t.bit_length() - 1
            f = BooleanFunction(12, rule=lambda x: 0)
            s = open_session(f, t, "erasure", SpanEraser(t), seed=rng.random())
            pts = []
            for _ in range(k):
                x = rng.getrandbits(12)
                s.query(x)
                pts.append(x)
                for size in range(2, len(pts) + 1):
                    for combo in itertools.combinations(pts, size):
                        y = 0
                        for p in combo:
                            y ^= p
                        if y not in s.overlay:
                            bad += 1
        return {"sequences": seqs, "unerased_sums": bad, "passed": bad == 0}

    run("span_eraser erases every sum within log2(t) queries", span)
    return rows


def _short(res: dict) -> dict:
    res = dict(res)
    res["failures"] = len(res["failures"])
    return res


def cmd_verify(args) -> int:
    rows = structure_checks(args.quick)
    width = max(len(r[0]) for r in rows)
    for name, ok, detail in rows:
        print(f"{'PASS' if ok else 'FAIL'}  {name.ljust(width)}  {detail}")
    return 0 if all(ok for _, ok, _ in rows) else 1


def cmd_game(args) -> int:
    from .game import play
    data = read_config_file(args.config) if args.config else {}
    t = args.t if args.t is not None else int(data.get("t", 1))
    p2 = args.p2 or data.get("p2", "greedy_spoiler")
    seed = args.seed if args.seed is not None else int(data.get("seed", 0))
    trials = args.trials if args.trials is not None else int(data.get("trials", 1))
    wins = 0
    results = []
    for i in range(trials):
        res = play(t, p2, seed=seed + i, move_cap=args.move_cap, log_moves=bool(args.log))
        wins += res.winner == "player1"
        results.append({"seed": seed + i, "winner": res.winner, "moves": res.moves,
                        "p2_steps": res.p2_steps, "forfeits": res.forfeits, **res.summary})
        if args.log and i == 0:
            with open(args.log, "w") as fh:
                fh.write("\n".join(res.move_log) + "\n")
    if args.out:
        import csv
        fmt = args.format or "csv"
        with open(args.out, "a", newline="") as fh:
            if fmt == "json":
                for r in results:
                    fh.write(json.dumps(r) + "\n")
            else:
                w = csv.DictWriter(fh, fieldnames=list(results[0]))
                if fh.tell() == 0:
                    w.writeheader()
                w.writerows(results)
    print(f"t={t} p2={p2} playouts={trials} player1_wins={wins} moves={results[0]['moves']}")
    return 0 if wins == trials else 1


def cmd_generate(args) -> int:
    params = {}
    for key in ("d", "n", "r"):
        if getattr(args, key) is not None:
            params[key] = getattr(args, key)
    if args.eps is not None:
        params["far_eps"] = float(Fraction(args.eps))
    f = gen.make_input(gen.InputSpec(args.kind, params, args.seed))
    text = dumps_function(f)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="erasure-resilient",
                                 description="Property testing against online erasures and corruptions.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("trial", help="run one trial and print the verdict")
    _add_experiment(p)
    p.add_argument("--index", type=int, default=0)
    p.add_argument("--transcript", help="write the transcript dump here")
    p.set_defaults(func=cmd_trial)

    p = sub.add_parser("estimate", help="run many trials and report rates with 99%% CIs")
    _add_experiment(p)
    p.add_argument("--json", action="store_true", help="print the report row as JSON")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("verify-structure", help="run the exhaustive checks")
    p.add_argument("--quick", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("game", help="play the quadraticity game")
    _add_common(p)
    p.add_argument("--t", type=int)
    p.add_argument("--p2", help="passive, random_spoiler, greedy_spoiler or tree_spoiler")
    p.add_argument("--move-cap", dest="move_cap", type=int)
    p.add_argument("--log", help="write the first playout's move log here")
    p.set_defaults(func=cmd_game)

    p = sub.add_parser("generate", help="write an input instance in the text format")
    p.add_argument("--kind", required=True, choices=gen.KINDS)
    p.add_argument("--d", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--eps")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
