"""Command-line front end.

Instance files are JSON objects::

    {"domain": "Z", "x": "0", "y": "6", "functions": [["2", "1"], ["1", "-3"]]}

Integers may be JSON numbers or decimal strings; output always uses
strings.  Witness files hold ``{"witness": [[index, count], ...]}`` or the
bare list.  Every command prints one JSON record per instance on stdout.

Exit status: 0 decided, 1 usage or parse error, 2 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .affine import AffineSystem, Domain, check_witness
from .errors import PreconditionError, ResourceExceeded
from .oracle import bfs_oracle
from .regex import DEFAULT_MAX_NODES
from .solver import SolveStats, decide

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RESOURCE = 2

_INT = re.compile(r"[+-]?\d+")

log = logging.getLogger("affreach")


class ParseError(ValueError):
    pass


def parse_int(value, what):
    if isinstance(value, bool):
        raise ParseError(f"{what}: expected an integer, got {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, str) and _INT.fullmatch(value.strip()):
        return int(value)
    raise ParseError(f"{what}: expected an integer, got {value!r}")


def parse_instance(data) -> AffineSystem:
    if not isinstance(data, dict):
        raise ParseError("instance must be a JSON object")
    try:
        domain = {"Z": Domain.INTEGERS, "N": Domain.NATURALS}[data.get("domain")]
    except KeyError:
        raise ParseError(f"domain must be 'Z' or 'N', got {data.get('domain')!r}") from None
    x = parse_int(data.get("x"), "x")
    y = parse_int(data.get("y"), "y")
    funcs = data.get("functions")
    if not isinstance(funcs, list) or not funcs:
        raise ParseError("functions must be a nonempty list of [a, b] pairs")
    maps = []
    for n, pair in enumerate(funcs):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ParseError(f"functions[{n}] must be an [a, b] pair")
        maps.append((parse_int(pair[0], f"functions[{n}][0]"), parse_int(pair[1], f"functions[{n}][1]")))
    try:
        return AffineSystem(maps, x, y, domain)
    except PreconditionError as exc:
        raise ParseError(str(exc)) from None


def parse_witness(data) -> tuple:
    if isinstance(data, dict):
        data = data.get("witness")
    if not isinstance(data, list):
        raise ParseError("witness must be a list of [index, count] pairs")
    runs = []
    for n, pair in enumerate(data):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ParseError(f"witness[{n}] must be an [index, count] pair")
        runs.append((parse_int(pair[0], f"witness[{n}][0]"), parse_int(pair[1], f"witness[{n}][1]")))
    return tuple(runs)


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from None


def witness_json(runs):
    return [[str(i), str(c)] for i, c in runs]


def emit(record, out=None):
    out = out or sys.stdout
    out.write(json.dumps(record, sort_keys=True) + "\n")
    out.flush()


def decide_record(sys_: AffineSystem, witness=False, max_nodes=DEFAULT_MAX_NODES, trace=False):
    """Run a decision and build its result record; returns (record, status)."""
    stats = SolveStats()
    started = time.perf_counter()
    try:
        verdict = decide(sys_, witness=witness, max_nodes=max_nodes, stats=stats)
    except ResourceExceeded as exc:
        record = {
            "reachable": "resource-exceeded",
            "witness": None,
            "case_trace": [],
            "stats": {
                "regex_nodes": exc.peak if exc.peak is not None else 0,
                "clauses": 0,
                "elapsed_ms": round((time.perf_counter() - started) * 1000, 3),
            },
        }
        log.warning("resource cap exceeded: %s", exc)
        return record, EXIT_RESOURCE
    w = None
    if witness and verdict.witness is not None:
        if not check_witness(sys_, verdict.witness):
            raise AssertionError("witness failed re-verification")
        w = witness_json(verdict.witness)
    if trace:
        case_trace = [f"{label} | {summary}" for label, summary in verdict.trace]
    else:
        case_trace = [label for label, _ in verdict.trace]
    record = {
        "reachable": verdict.reachable,
        "witness": w,
        "case_trace": case_trace,
        "stats": {
            "regex_nodes": stats.regex_nodes,
            "clauses": stats.clauses,
            "elapsed_ms": round(stats.elapsed_ms, 3),
        },
    }
    return record, EXIT_OK


# ------------------------------------------------------------------ commands


def cmd_decide(args):
    sys_ = parse_instance(load_json(args.file))
    record, status = decide_record(sys_, args.witness, args.max_regex_nodes, args.trace)
    emit(record)
    return status


def cmd_check(args):
    sys_ = parse_instance(load_json(args.file))
    runs = parse_witness(load_json(args.witness_file))
    emit({"witness_valid": check_witness(sys_, runs), "witness": witness_json(runs)})
    return EXIT_OK


def cmd_oracle(args):
    sys_ = parse_instance(load_json(args.file))
    answer = bfs_oracle(sys_, args.value_bound, args.depth_bound)
    emit(
        {
            "oracle": "reachable" if answer.found else "not-found-within-bounds",
            "witness": witness_json(answer.rle) if answer.found else None,
        }
    )
    return EXIT_OK


def _batch_one(path, witness, max_nodes, trace):
    try:
        sys_ = parse_instance(load_json(path))
    except ParseError as exc:
        return {"file": path.name, "error": str(exc)}, EXIT_USAGE
    record, status = decide_record(sys_, witness, max_nodes, trace)
    return {"file": path.name, **record}, status


def cmd_batch(args):
    directory = Path(args.dir)
    if not directory.is_dir():
        raise ParseError(f"{directory}: not a directory")
    files = sorted(p for p in directory.iterdir() if p.suffix == ".json")
    jobs = [(p, args.witness, args.max_regex_nodes, args.trace) for p in files]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_batch_one, *zip(*jobs))) if jobs else []
    else:
        results = [_batch_one(*job) for job in jobs]
    worst = EXIT_OK
    for record, status in results:
        emit(record)
        if status == EXIT_USAGE or worst == EXIT_USAGE:
            worst = EXIT_USAGE
        else:
            worst = max(worst, status)
    return worst


def cmd_selftest(args):
    from .selftest import run_all

    ok = True
    for record in run_all(args.seeds):
        emit(record)
        ok = ok and record["passed"]
    return EXIT_OK if ok else EXIT_USAGE


def build_parser():
    parser = argparse.ArgumentParser(
        prog="affreach", description="Decide reachability under integer affine maps."
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log diagnostics to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def decide_flags(p):
        p.add_argument("--witness", action="store_true", help="emit a checkable witness")
        p.add_argument(
            "--max-regex-nodes",
            type=int,
            default=DEFAULT_MAX_NODES,
            help="cap on regular-expression size (default: %(default)s)",
        )
        p.add_argument("--trace", action="store_true", help="detailed case trace")

    p = sub.add_parser("decide", help="decide one instance")
    p.add_argument("file")
    decide_flags(p)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("check", help="verify a witness against an instance")
    p.add_argument("file")
    p.add_argument("witness_file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("oracle", help="bounded breadth-first search")
    p.add_argument("file")
    p.add_argument("--value-bound", type=int, required=True)
    p.add_argument("--depth-bound", type=int, required=True)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("batch", help="decide every *.json instance in a directory")
    p.add_argument("dir")
    decide_flags(p)
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("selftest", help="run the generator-backed cross-checks")
    p.add_argument("--seeds", type=int, default=100, help="random instances per suite")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"affreach: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
