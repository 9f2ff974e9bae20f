"""Command-line entry point.

Exit status: 0 on success, 1 on usage errors, 2 on runtime errors (including
an exhausted attack budget under ``--require-success``).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

from . import attack as attack_mod
from . import bench, protocol
from .engine import normal_form
from .oracle import oracle_normal
from .subgroups import GenerationStalled
from .words import Word, WordError

USAGE_ERROR = 1
RUNTIME_ERROR = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(USAGE_ERROR)


def _common(suppress: bool) -> argparse.ArgumentParser:
    default = argparse.SUPPRESS if suppress else False
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--json", action="store_true", default=default, help="machine-readable output")
    p.add_argument("--quiet", action="store_true", default=default, help="suppress informational output")
    return p


def _positive(text):
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _seconds(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="thompson-kex", parents=[_common(False)],
                     description="Thompson's group F normal forms, key exchange and attack experiments.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = [_common(True)]

    p = sub.add_parser("nf", parents=common, help="print the normal form of a word")
    p.add_argument("word", help='e.g. "x1 x0^-1"; empty or "1" is the identity')
    p.add_argument("--oracle", action="store_true", help="use the rewriting reference implementation")

    p = sub.add_parser("keygen", parents=common, help="generate one party's key bundle")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--role", choices=protocol.ROLES, required=True)
    p.add_argument("--params-seed", type=int, help="seed for the public word (default: --seed)")

    p = sub.add_parser("kex", parents=common, help="run the key exchange")
    kex = p.add_subparsers(dest="mode", required=True, parser_class=_Parser)
    d = kex.add_parser("demo", parents=common, help="both parties in one process")
    d.add_argument("--s", type=int, required=True)
    d.add_argument("--M", type=int, required=True)
    d.add_argument("--seed-alice", type=int, required=True)
    d.add_argument("--seed-bob", type=int, required=True)
    d = kex.add_parser("serve", parents=common, help="play Bob on a TCP port")
    d.add_argument("--port", type=int, required=True)
    d.add_argument("--host", default="127.0.0.1")
    d.add_argument("--seed", type=int, required=True)
    d = kex.add_parser("connect", parents=common, help="play Alice against a server")
    d.add_argument("--host", default="127.0.0.1")
    d.add_argument("--port", type=int, required=True)
    d.add_argument("--s", type=int, required=True)
    d.add_argument("--M", type=int, required=True)
    d.add_argument("--seed", type=int, required=True)

    p = sub.add_parser("attack", parents=common, help="length-based attack on one generated token")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-nodes", type=_positive, required=True)
    p.add_argument("--max-seconds", type=_seconds, default=math.inf)
    p.add_argument("--require-success", action="store_true")

    p = sub.add_parser("attack-sweep", parents=common, help="attack experiments over a parameter grid")
    p.add_argument("--grid", required=True, help='JSON file: [[s, M], ...] or [{"s":..,"M":..}, ...]')
    p.add_argument("--trials", type=_positive, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-nodes", type=_positive, default=10**5)
    p.add_argument("--max-seconds", type=_seconds, default=math.inf)
    p.add_argument("--parallel", type=_positive, default=1)
    p.add_argument("--out", help="write the per-trial CSV here instead of stdout")
    p.add_argument("--summary", help="write the per-grid-point summary CSV here")
    p.add_argument("--plot", help="render a summary figure (png/pdf/svg)")

    p = sub.add_parser("bench-nf", parents=common, help="letter visits and time for random words of length 2^k")
    p.add_argument("--min-exp", type=int, default=10)
    p.add_argument("--max-exp", type=int, default=20)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", help="write the CSV here instead of stdout")
    p.add_argument("--plot", help="render a figure (png/pdf/svg)")
    return parser


def _emit(args, payload, text):
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    elif not args.quiet:
        print(text)


def _write_csv(rows, fields, path):
    fh = open(path, "w", newline="") if path else sys.stdout
    try:
        writer = csv.DictWriter(fh, fieldnames=fields, extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if path:
            fh.close()


def cmd_nf(args):
    try:
        w = Word.parse(args.word)
    except WordError as exc:
        raise UsageError(str(exc)) from exc
    nf = oracle_normal(w) if args.oracle else normal_form(w)
    if args.json:
        print(nf.dumps())
    elif not args.quiet:
        print(nf)
    return 0


def cmd_keygen(args):
    seed = args.seed if args.params_seed is None else args.params_seed
    params = protocol.ProtocolParams.generate(args.s, args.M, seed)
    priv = protocol.PrivateKey.generate(params, args.seed)
    make = protocol.alice_token if args.role == "alice" else protocol.bob_token
    token = make(params, priv)
    bundle = {
        "role": args.role,
        "params": params.to_json(),
        "private": priv.to_json(),
        "public_token": token.u.to_json(),
    }
    # Key bundles are JSON either way.
    print(json.dumps(bundle, sort_keys=True, separators=(",", ":") if args.json else None))
    return 0


def cmd_kex(args):
    if args.mode == "demo":
        result = protocol.run_demo(args.s, args.M, args.seed_alice, args.seed_bob)
    elif args.mode == "serve":
        ready = None if args.quiet or args.json else (
            lambda port: print(f"listening on {args.host}:{port}", file=sys.stderr, flush=True))
        result = protocol.serve(args.port, args.seed, host=args.host, ready=ready)
    else:
        result = protocol.connect(args.host, args.port, args.s, args.M, args.seed)
    lines = [protocol.encode(m) for m in result["transcript"]]
    lines.append(f"K_equal: {str(result['K_equal']).lower()}")
    _emit(args, result, "\n".join(lines))
    return 0 if result["K_equal"] else RUNTIME_ERROR


def cmd_attack(args):
    inst = attack_mod.make_instance(args.s, args.M, args.seed)
    budget = attack_mod.AttackBudget(args.max_nodes, args.max_seconds)
    rep = attack_mod.length_attack(inst.w, inst.w_prime, args.s, budget)
    payload = rep.to_json()
    if rep.success:
        payload["verified"] = attack_mod.verify(rep, inst.w, inst.w_prime, args.s)
    # The report is JSON by contract.
    print(json.dumps(payload, sort_keys=True))
    if args.require_success and not rep.success:
        print("budget exhausted before the searches met", file=sys.stderr)
        return RUNTIME_ERROR
    return 0


def _load_grid(path):
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read grid {path}: {exc}") from exc
    if isinstance(raw, dict):
        raw = raw.get("grid", [])
    grid = []
    for item in raw:
        if isinstance(item, dict):
            grid.append((int(item["s"]), int(item["M"])))
        else:
            s, M = item
            grid.append((int(s), int(M)))
    return grid


def cmd_attack_sweep(args):
    grid = _load_grid(args.grid)
    budget = attack_mod.AttackBudget(args.max_nodes, args.max_seconds)
    rows, summary = attack_mod.attack_sweep(grid, args.trials, budget, seed=args.seed,
                                            parallel=args.parallel)
    _write_csv(rows, ["s", "M", "trial", "outcome", "nodes", "seconds"], args.out)
    if args.summary:
        _write_csv(summary, ["s", "M", "trials", "success_rate", "median_nodes", "growth_exponent"],
                   args.summary)
    if args.plot and summary:
        from .report import plot_sweep

        plot_sweep(summary, args.plot)
    return 0


def cmd_bench(args):
    if args.min_exp < 1 or args.max_exp < args.min_exp:
        raise UsageError("need 1 <= --min-exp <= --max-exp")
    rows = bench.bench_nf(args.min_exp, args.max_exp, args.seed)
    _write_csv(rows, ["length", "letter_visits", "nanoseconds"], args.out)
    if args.plot:
        from .report import plot_bench

        plot_bench(rows, args.plot)
    return 0


COMMANDS = {
    "nf": cmd_nf,
    "keygen": cmd_keygen,
    "kex": cmd_kex,
    "attack": cmd_attack,
    "attack-sweep": cmd_attack_sweep,
    "bench-nf": cmd_bench,
}


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"thompson-kex: error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (protocol.ProtocolError, WordError, GenerationStalled, OSError, ValueError) as exc:
        print(f"thompson-kex: {type(exc).__name__}: {exc}", file=sys.stderr)
        return RUNTIME_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
