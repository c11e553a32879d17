"""Command-line front end.

Exit status: 0 when factors are found or the query is answered, 2 when a
factoring run ends without factors, 1 on usage or domain errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import numtheory, pipelines
from .errors import QoshorError
from .statevector import distribution

EXIT_OK, EXIT_ERROR, EXIT_NO_FACTORS = 0, 1, 2

# config-file keys -> (argparse dest, type, builtin default)
_SETTINGS = {
    "method": ("method", str, "shor"),
    "seed": ("seed", int, None),
    "first-register-bits": ("first_register_bits", int, None),
    "h-cap": ("h_cap", int, 2),
    "omega": ("omega", float, 0.0),
    "max-attempts": ("max_attempts", int, None),
    "r0-strategy": ("r0_strategy", str, "ascending"),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def read_config(path: str) -> dict:
    """Parse a ``key = value`` file; ``#`` starts a comment, quotes are optional."""
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise QoshorError(f"{path}:{lineno}: expected key = value")
            key, value = (part.strip() for part in line.split("=", 1))
            key = key.replace("_", "-")
            if key not in _SETTINGS:
                raise QoshorError(f"{path}:{lineno}: unknown key {key!r}")
            _, typ, _ = _SETTINGS[key]
            out[_SETTINGS[key][0]] = typ(value.strip("'\""))
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qoshor", description="Simulated Shor and quantum-oracle factoring.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("factor", help="factor an odd composite")
    p.add_argument("n", type=int)
    p.add_argument("--method", choices=["shor", "qo", "classical"], default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--first-register-bits", type=int, default=None)
    p.add_argument("--h-cap", type=int, default=None)
    p.add_argument("--omega", type=float, default=None)
    p.add_argument("--r0-strategy", choices=["ascending", "random"], default=None)
    p.add_argument("--idealized", action="store_true", help="qo: project instead of running the selection protocol")
    p.add_argument("--max-attempts", type=int, default=None, help="shor attempts / qo questions")
    p.add_argument("--config", help="key = value file; flags take precedence")
    p.add_argument("--json", action="store_true")
    p.add_argument("--trace", action="store_true")

    p = sub.add_parser("order", help="multiplicative order of a mod n (brute force)")
    p.add_argument("a", type=int)
    p.add_argument("n", type=int)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("gcd", help="Euclid's algorithm with its recursion table")
    p.add_argument("a", type=int)
    p.add_argument("b", type=int)
    p.add_argument("--trace", action="store_true")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("simulate-state", help="first-register distribution of the period-finding circuit")
    p.add_argument("n", type=int)
    p.add_argument("a", type=int)
    p.add_argument("--first-register-bits", type=int, default=None)
    p.add_argument("--dump", action="store_true", help="print the full state, 'index re im' per line")
    p.add_argument("--json", action="store_true")
    return parser


def _resolve(args) -> dict:
    config = read_config(args.config) if args.config else {}
    out = {}
    for dest, _typ, default in _SETTINGS.values():
        value = getattr(args, dest, None)
        if value is None:
            value = config.get(dest, default)
        out[dest] = value
    if out["seed"] is None:
        env = os.environ.get("QSHOR_SEED")
        out["seed"] = int(env) if env else 0
    return out


def _cmd_factor(args, out, err) -> int:
    opts = _resolve(args)
    method, seed = opts["method"], opts["seed"]
    if method == "shor":
        cfg = pipelines.ShorConfig(first_register_bits=opts["first_register_bits"], rng_seed=seed,
                                   max_attempts=opts["max_attempts"] or 64)
        result = pipelines.shor_factor(args.n, cfg)
    elif method == "qo":
        cfg = pipelines.QoConfig(h_cap=opts["h_cap"], omega=opts["omega"], r0_strategy=opts["r0_strategy"],
                                 rng_seed=seed, idealized=args.idealized,
                                 max_questions=opts["max_attempts"] or 1024)
        result = pipelines.qo_factor(args.n, cfg)
    elif method == "classical":
        result = pipelines.classical_factor(args.n)
    else:
        raise QoshorError(f"unknown method {method!r}")

    if args.json:
        print(result.dumps(), file=out)
    else:
        if result.factors:
            p, q = result.factors
            print(f"n = {result.n}: factors {p} x {q} (method {result.method.value}, seed {result.seed})", file=out)
        else:
            print(f"n = {result.n}: no factors ({result.note})", file=out)
        if result.attempts:
            print(result.format_table(), file=out)
    if args.trace:
        stream = err if args.json else out
        for at in result.attempts:
            if method == "shor":
                _g, trace = numtheory.gcd(at.a, args.n)
                print(json.dumps({"gcd_trace": {"a": at.a, "n": args.n, "rows": trace.to_json()}}), file=stream)
        for sel in result.selections:
            print(json.dumps({"selection": sel}), file=stream)
    return EXIT_OK if result.factors else EXIT_NO_FACTORS


def _cmd_order(args, out, err) -> int:
    r = numtheory.multiplicative_order(args.a, args.n).r
    print(json.dumps({"a": args.a, "n": args.n, "order": r}) if args.json else r, file=out)
    return EXIT_OK


def _cmd_gcd(args, out, err) -> int:
    g, trace = numtheory.gcd(args.a, args.b)
    if args.json:
        payload = {"a": args.a, "b": args.b, "gcd": g}
        if args.trace:
            payload["trace"] = trace.to_json()
        print(json.dumps(payload), file=out)
    else:
        if args.trace:
            print(trace.format_table(), file=out)
        print(g, file=out)
    return EXIT_OK


def _cmd_simulate(args, out, err) -> int:
    bits = pipelines.shor_register_bits(args.n, args.first_register_bits)
    state = pipelines.period_finding_state(args.n, args.a, bits)
    if args.dump:
        print(state.dump(), file=out)
        return EXIT_OK
    probs = {t: float(p) for t, p in enumerate(distribution(state, "first")) if p > 1e-12}
    if args.json:
        print(json.dumps({"n": args.n, "a": args.a, "first_register_bits": bits,
                          "distribution": {str(t): p for t, p in probs.items()}}), file=out)
    else:
        print(f"{'t':>6}  probability", file=out)
        for t, p in probs.items():
            print(f"{t:>6}  {p:.12g}", file=out)
    return EXIT_OK


_COMMANDS = {"factor": _cmd_factor, "order": _cmd_order, "gcd": _cmd_gcd, "simulate-state": _cmd_simulate}


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args, out, err)
    except (QoshorError, OSError) as exc:
        print(f"qoshor: error: {exc}", file=err)
        return EXIT_ERROR


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
