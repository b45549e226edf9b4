"""Command-line front end.

Exit codes: 0 success or accept, 1 reject, 2 malformed input, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import crhash
from .bits import from_bitstring, to_bitstring
from .circuit import DEFAULT_BUDGET
from .errors import MalformedError, NotACollisionError, OracleTooLargeError, PPPError
from .instances import (
    TAGS,
    brute_force,
    gen_random,
    instance_from_dict,
    instance_to_dict,
    solution_from_dict,
    solution_to_dict,
    verify,
)
from .reductions import REDUCTIONS, Forwarded, find, solve_forwarded

KINDS = sorted(TAGS.values())
SIZE_FLAGS = ("n", "m", "gates", "dim", "max_det", "p", "prime", "max_prime", "ell", "q", "d", "k", "r", "extra", "mode", "s", "y")


class UsageError(Exception):
    pass


def _dump(obj: Any, out: str | None) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _load(path: str | None) -> Any:
    if not path:
        raise UsageError("--in is required")
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedError(f"cannot read {path}: {exc}") from exc


def _size_params(args: argparse.Namespace) -> dict:
    params = {}
    for name in SIZE_FLAGS:
        value = getattr(args, name, None)
        if value is not None:
            params[name] = value
    if params.get("p") not in (None, "inf"):
        params["p"] = int(params["p"])
    return params


def _is_bundle(data: dict) -> bool:
    return "reduction" in data and "source" in data


# -- subcommands --------------------------------------------------------------------


def cmd_gen(args: argparse.Namespace) -> int:
    inst = gen_random(args.problem, _size_params(args), args.seed)
    _dump(instance_to_dict(inst), args.out)
    return 0


def _reduction_for(args: argparse.Namespace):
    if args.reduction:
        if args.reduction not in REDUCTIONS:
            raise UsageError(f"unknown reduction {args.reduction!r}")
        return REDUCTIONS[args.reduction]
    if not (args.source and args.target):
        raise UsageError("give --reduction or both --from and --to")
    try:
        return find(args.source, args.target)
    except KeyError as exc:
        raise UsageError(str(exc)) from exc


def _forward_params(red, args: argparse.Namespace) -> dict:
    if red.name in ("pigeonhole_to_csis", "collision_to_weakcsis") and args.ell is not None:
        return {"ell": args.ell}
    return {}


def cmd_reduce(args: argparse.Namespace) -> int:
    red = _reduction_for(args)
    inst = instance_from_dict(_load(args.inp))
    fwd = red.forward(inst, **_forward_params(red, args))
    _dump(fwd.to_dict(), args.out)
    return 0


def cmd_solve(args: argparse.Namespace) -> int:
    data = _load(args.inp)
    if _is_bundle(data):
        sol = solve_forwarded(Forwarded.from_dict(data), args.budget, args.threads)
    else:
        sol = brute_force(instance_from_dict(data), args.budget, args.threads)
    _dump(solution_to_dict(sol), args.out)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    data = _load(args.inp)
    inst = Forwarded.from_dict(data).source if _is_bundle(data) else instance_from_dict(data)
    sol = solution_from_dict(_load(args.solution))
    verdict = verify(inst, sol)
    print("accept" if verdict else f"reject: {verdict.reason}")
    return 0 if verdict else 1


def cmd_roundtrip(args: argparse.Namespace) -> int:
    red = _reduction_for(args)
    params = _size_params(args)
    if red.name == "collision_to_weakcsis" and "m" not in params:
        params["m"] = params.get("n", 3) - 2
    source_params = {k: v for k, v in params.items() if not (k == "ell" and red.source not in ("csis", "weakcsis"))}
    inst = gen_random(red.source, source_params, args.seed)
    fwd = red.forward(inst, **_forward_params(red, args))
    sol = solve_forwarded(fwd, args.budget, args.threads)
    verdict = verify(inst, sol)
    if args.out:
        _dump({"bundle": fwd.to_dict(), "solution": solution_to_dict(sol), "accepted": bool(verdict)}, args.out)
    print(f"{red.name}: {'accept' if verdict else 'reject: ' + verdict.reason}")
    return 0 if verdict else 1


def _load_key(args: argparse.Namespace) -> crhash.HashKey:
    if args.example:
        return crhash.example_key()
    return crhash.HashKey.from_dict(_load(args.key))


def cmd_hash(args: argparse.Namespace) -> int:
    if args.hash_cmd == "keygen":
        params = crhash.HashParams(k=args.k, ell=args.ell, d=args.d, r=args.r)
        _dump(crhash.keygen(params, args.seed).to_dict(), args.out)
        return 0
    key = _load_key(args)
    if args.hash_cmd == "eval":
        try:
            x = from_bitstring(args.x)
        except (ValueError, PPPError) as exc:
            raise UsageError(f"bad bit string {args.x!r}") from exc
        print(to_bitstring(crhash.evaluate(key, x)))
        return 0
    rng = np.random.default_rng(args.seed)
    x1, x2 = crhash.birthday_attack(key, rng, max_samples=args.budget)
    w = crhash.extract_sis_witness(key, x1, x2)
    _dump(
        {"x1": to_bitstring(x1), "x2": to_bitstring(x2), "witness": list(w.z), "valid": crhash.check_sis_witness(key, w)},
        args.out,
    )
    return 0


def cmd_selftest(args: argparse.Namespace) -> int:
    from .acceptance import run_all

    ok = True
    for result in run_all():
        print(result.line())
        ok &= result.passed
    return 0 if ok else 1


# -- parser ---------------------------------------------------------------------------


def _add_size_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("problem size")
    for name in ("n", "m", "gates", "dim", "max-det", "prime", "max-prime", "ell", "q", "d", "k", "r", "extra", "s", "y"):
        g.add_argument(f"--{name}", type=int, default=None)
    g.add_argument("--p", default=None, help="norm for minkowski: a positive integer or 'inf'")
    g.add_argument("--mode", choices=["box", "circuit"], default=None)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--threads", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pppkit", description="Reductions among PPP problems on small instances.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("--problem", choices=KINDS, required=True)
    p.add_argument("--out", default=None)
    _add_common(p)
    _add_size_flags(p)

    for name, helptext in (("reduce", "forward an instance"), ("roundtrip", "gen, reduce, solve, map back, verify")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--from", dest="source", choices=KINDS, default=None)
        p.add_argument("--to", dest="target", choices=KINDS, default=None)
        p.add_argument("--reduction", default=None, choices=sorted(REDUCTIONS))
        p.add_argument("--out", default=None)
        _add_common(p)
        if name == "reduce":
            p.add_argument("--in", dest="inp", default=None)
            p.add_argument("--ell", type=int, default=None)
        else:
            _add_size_flags(p)

    p = sub.add_parser("solve", help="brute-force an instance or a reduction bundle")
    p.add_argument("--in", dest="inp", default=None)
    p.add_argument("--out", default=None)
    _add_common(p)

    p = sub.add_parser("verify", help="check a solution against an instance")
    p.add_argument("--in", dest="inp", default=None)
    p.add_argument("--solution", default=None)

    p = sub.add_parser("hash", help="the gadget hash family")
    hsub = p.add_subparsers(dest="hash_cmd", required=True)
    h = hsub.add_parser("keygen")
    for name, default in (("k", 5), ("ell", 2), ("d", 2), ("r", 2)):
        h.add_argument(f"--{name}", type=int, default=default)
    h.add_argument("--seed", type=int, default=0)
    h.add_argument("--out", default=None)
    for name in ("eval", "attack"):
        h = hsub.add_parser(name)
        h.add_argument("--key", default=None)
        h.add_argument("--example", action="store_true", help="use the built-in toy key")
        if name == "eval":
            h.add_argument("--x", required=True, help="input bits, e.g. 101")
        else:
            h.add_argument("--seed", type=int, default=0)
            h.add_argument("--budget", type=int, default=1 << 20)
            h.add_argument("--out", default=None)

    sub.add_parser("selftest", help="run the acceptance suite")
    return parser


HANDLERS = {
    "gen": cmd_gen,
    "reduce": cmd_reduce,
    "solve": cmd_solve,
    "verify": cmd_verify,
    "roundtrip": cmd_roundtrip,
    "hash": cmd_hash,
    "selftest": cmd_selftest,
}


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return HANDLERS[args.command](args)
    except OracleTooLargeError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except (UsageError, MalformedError, NotACollisionError, PPPError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
