"""Command line interface.

Exit codes: 0 all checks pass, 1 a theorem check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import acceptance
from .errors import InputError, QtrickError
from .instances import (
    generate_instance,
    parse_instance,
    report_from_result,
    serialize_instance,
    serialize_report,
)
from .trick import TrickConfig, run_trick

log = logging.getLogger("qtrick")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _run(path: str, with_matrices: bool):
    inst = parse_instance(Path(path).read_bytes())
    A = inst.ring_action()
    result = run_trick(A.X, A, TrickConfig(quaternion_override=inst.quaternion_override))
    return report_from_result(inst, result, with_matrices)


def _guard(fn):
    def wrapped(args) -> int:
        try:
            return fn(args)
        except OSError as exc:
            log.error("cannot read or write file: %s", exc)
            return EXIT_INPUT
        except InputError as exc:
            log.error("%s: %s", type(exc).__name__, exc)
            return EXIT_INPUT
        except QtrickError as exc:
            log.error("%s: %s", type(exc).__name__, exc)
            return EXIT_FAIL

    return wrapped


@_guard
def cmd_build(args) -> int:
    rep = _run(args.instance, with_matrices=True)
    Path(args.output).write_text(serialize_report(rep))
    for name, ok, detail in rep.checks:
        if not ok:
            log.error("check %s failed: %s", name, detail)
    return EXIT_OK if rep.overall else EXIT_FAIL


@_guard
def cmd_verify(args) -> int:
    rep = _run(args.instance, with_matrices=False)
    sys.stdout.write(serialize_report(rep))
    for name, ok, detail in rep.checks:
        if not ok:
            log.error("check %s failed: %s", name, detail)
    return EXIT_OK if rep.overall else EXIT_FAIL


def _parse_type(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"type must be comma-separated integers, got {text!r}")


@_guard
def cmd_gen(args) -> int:
    inst = generate_instance(args.g, args.type, args.ring, args.seed)
    text = serialize_instance(inst)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text)
    return EXIT_OK


def cmd_selftest(args) -> int:
    config = TrickConfig(flip_pairing_sign=args.flip_pairing_sign)
    results = acceptance.run_all(config, jobs=args.jobs)
    for r in results:
        print(r.line(timings=args.timings))
    failed = [r for r in results if not r.passed]
    if failed:
        log.error("first failing criterion: %d. %s", failed[0].number, failed[0].name)
        return EXIT_FAIL
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qtrick", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="run the construction and write a full report")
    b.add_argument("instance")
    b.add_argument("-o", "--output", required=True)
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="run the construction, print the report without matrices")
    v.add_argument("instance")
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("gen", help="write a seeded random instance")
    g.add_argument("--g", type=int, required=True)
    g.add_argument("--type", type=_parse_type, required=True)
    g.add_argument("--ring", default="integers", help="integers | gauss | sqrt_minus2 | zeta3")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output", default="-")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("selftest", help="run the acceptance criteria")
    s.add_argument("--jobs", type=int, default=None, help="worker processes (default $QTRICK_JOBS or 1)")
    s.add_argument("--timings", action="store_true", help="show per-criterion wall time")
    s.add_argument("--flip-pairing-sign", action="store_true", help=argparse.SUPPRESS)
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="qtrick: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
