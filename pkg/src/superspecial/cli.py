"""Command-line interface; every subcommand prints JSON."""

from __future__ import annotations

import argparse
import json
import sys

from .field import FieldError, get_ctx, is_prime
from .genus1 import cgl_hash, neighbors_j
from .genus2 import cds_hash, node_id
from .graphwalk import (
    CensusBudgetExceeded,
    HuntBudgetExceeded,
    x5x_curve,
    census,
    default_start,
    find_cycles,
    hunt_product,
    mixing_stats,
    table_exponents,
    target_start,
)
from .attack import (
    AttackConfig,
    AttackFailed,
    CertificateError,
    attack,
    certificate_from_json,
    certificate_to_json,
    verify_certificate,
)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INVALID = 2
EXIT_BOTTOM = 3
EXIT_BUDGET = 4


class InvalidInput(ValueError):
    pass


def _prime(text: str) -> int:
    p = int(text)
    if p <= 5 or not is_prime(p):
        raise argparse.ArgumentTypeError(f"{text} is not a prime > 5")
    return p


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def _emit(args, obj) -> None:
    text = json.dumps(obj, indent=2, sort_keys=False)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_census(args):
    res = census(args.p, max_p=args.max_p)
    _emit(args, res.to_json())
    return EXIT_OK


def cmd_hunt(args):
    base = x5x_curve(args.p) if args.curve == "x5x" else None
    start, dual = target_start(args.p, args.target_seed, base)
    rep = hunt_product(args.p, args.seed, args.workers, args.mode, start, dual, args.max_steps)
    _emit(args, rep.to_json())
    return EXIT_OK


def cmd_attack(args):
    A, _ = target_start(args.p, args.seed_a)
    B, _ = target_start(args.p, args.seed_b)
    cfg = AttackConfig(
        seed_a=f"hunt-{args.seed_a}",
        seed_b=f"hunt-{args.seed_b}",
        workers=args.workers,
        max_steps=args.max_steps,
        parity_retries=0 if args.no_parity_retry else 1,
    )
    cert = attack(A, B, cfg)
    text = certificate_to_json(cert)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    summary = {"start": cert.start, "end": cert.end, "length": len(cert), "meta": cert.meta, "out": args.out}
    print(json.dumps(summary, indent=2))
    return EXIT_OK


def cmd_verify(args):
    with open(args.cert, "rb") as fh:
        data = fh.read()
    cert = certificate_from_json(data)
    res = verify_certificate(cert)
    print(json.dumps(res.to_json(), indent=2))
    if not res.ok:
        for f in res.failures:
            print(f"step {f['step']} ({f['kind']}): {f['error']}", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def _hex_bits(msg: str) -> str:
    try:
        return "".join(f"{int(c, 16):04b}" for c in msg)
    except ValueError:
        raise InvalidInput(f"message {msg!r} is not hexadecimal") from None


def cmd_hash(args):
    bits = _hex_bits(args.msg)
    ctx = get_ctx(args.p)
    if args.kind == "cgl":
        j0 = ctx(1728)
        j_prev = neighbors_j(j0)[0]
        j, digest = cgl_hash(ctx, j0, j_prev, bits)
        _emit(args, {"kind": "cgl", "p": args.p, "bits": len(bits), "j": j.encode(), "digest": digest})
        return EXIT_OK
    bits += "0" * (-len(bits) % 3)
    digits = [int(bits[i:i + 3], 2) for i in range(0, len(bits), 3)]
    start, dual = default_start(args.p)
    res = cds_hash(start, dual, digits)
    out = {"kind": "cds", "p": args.p, "digits": len(digits), "start": node_id(start)}
    out.update(res.to_json())
    _emit(args, out)
    return EXIT_BOTTOM if res.failed else EXIT_OK


def cmd_cycles(args):
    start, _ = target_start(args.p, args.seed)
    cycles = find_cycles(args.p, start, args.max_len)
    _emit(args, {
        "p": args.p,
        "start": node_id(start),
        "count": len(cycles),
        "cds_admissible": sum(c.cds_admissible for c in cycles),
        "cycles": [c.to_json() for c in cycles[: args.limit]],
    })
    return EXIT_OK


def cmd_table(args):
    _emit(args, [table_exponents(g) for g in range(1, args.gmax + 1)])
    return EXIT_OK


def cmd_mix(args):
    rep = mixing_stats(args.p, args.len, args.trials, args.seed)
    for w in rep.warnings:
        print(f"warning: {w}", file=sys.stderr)
    _emit(args, rep.to_json())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="superspecial", description="Superspecial (2,2)-isogeny graph toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, out=True):
        sp.add_argument("--p", type=_prime, required=True, help="prime > 5")
        if out:
            sp.add_argument("--out", help="write JSON here instead of stdout")

    sp = sub.add_parser("census", help="enumerate the whole graph (small p)")
    common(sp)
    sp.add_argument("--max-p", type=int, default=50)
    sp.set_defaults(func=cmd_census)

    sp = sub.add_parser("hunt", help="walk until a product of elliptic curves is found")
    common(sp)
    sp.add_argument("--seed", default="1")
    sp.add_argument("--workers", type=_positive, default=1)
    sp.add_argument("--mode", choices=["appendix", "nbt"], default="appendix")
    sp.add_argument("--target-seed", default="0", help="seed of the walk producing the start vertex")
    sp.add_argument("--curve", choices=["default", "x5x"], default="default", help="base curve for that walk")
    sp.add_argument("--max-steps", type=_positive)
    sp.set_defaults(func=cmd_hunt)

    sp = sub.add_parser("attack", help="connect two random vertices and write a certificate")
    common(sp)
    sp.add_argument("--seed-a", default="a")
    sp.add_argument("--seed-b", default="b")
    sp.add_argument("--workers", type=_positive, default=1)
    sp.add_argument("--max-steps", type=_positive)
    sp.add_argument("--no-parity-retry", action="store_true")
    sp.set_defaults(func=cmd_attack)

    sp = sub.add_parser("verify", help="check a path certificate")
    sp.add_argument("--cert", required=True)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("hash", help="CGL (genus 1) or CDS (genus 2) hash of a hex message")
    sp.add_argument("kind", choices=["cgl", "cds"])
    common(sp)
    sp.add_argument("--msg", required=True)
    sp.set_defaults(func=cmd_hash)

    sp = sub.add_parser("cycles", help="short non-backtracking cycles through a random vertex")
    common(sp)
    sp.add_argument("--seed", default="0")
    sp.add_argument("--max-len", type=int, default=4, choices=[2, 3, 4])
    sp.add_argument("--limit", type=int, default=20)
    sp.set_defaults(func=cmd_cycles)

    sp = sub.add_parser("table", help="complexity exponents by dimension")
    sp.add_argument("--gmax", type=_positive, default=6)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("mix", help="endpoint distribution of random walks")
    common(sp)
    sp.add_argument("--len", type=int, default=20)
    sp.add_argument("--trials", type=_positive, default=10000)
    sp.add_argument("--seed", default="0")
    sp.set_defaults(func=cmd_mix)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except AttackFailed as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return EXIT_BOTTOM
    except (HuntBudgetExceeded, CensusBudgetExceeded) as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InvalidInput, CertificateError, FieldError, OSError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
