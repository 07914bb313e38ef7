"""Command-line front end.

Exit codes: 0 success, 1 engine/check failure, 2 usage or parse error,
3 resource guard.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from pathlib import Path

from . import accounting
from .pebble import (
    ResourceLimit,
    bennett_strategy,
    dump_strategy,
    erasure_strategy,
    max_reachable_bfs,
    reachable_masks,
    validate_strategy,
)
from .revsim import audit as audit_mod
from .revsim import engines
from .revsim.machine import REGISTRY, MicroOp, ParameterError, SimError
from .tmcore import (
    MachineError,
    MachineParseError,
    check_deterministic,
    check_reversible,
    count_irreversible_steps,
    load_machine,
    run as tm_run,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _load(path: str):
    try:
        return load_machine(path)
    except FileNotFoundError:
        raise UsageError(f"no such machine file: {path}")
    except MachineParseError as exc:
        raise UsageError(f"{path}: {exc}")


def _check_bits(program, bits: str) -> str:
    if bits == "-":
        return ""
    if any(c not in program.alphabet for c in bits):
        raise UsageError(f"input {bits!r} has symbols outside the alphabet")
    if len(bits) > program.space:
        raise UsageError(f"input longer than the tape ({program.space} cells)")
    return bits


def _append_csv(path: str, rows: list[dict]) -> None:
    new = not os.path.exists(path) or os.path.getsize(path) == 0
    with open(path, "a", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=engines.CSV_COLUMNS, lineterminator="\n")
        if new:
            w.writeheader()
        w.writerows(rows)


def _run_engine(program, bits, engine, k, max_steps, record=False, registry=None):
    if engine == "b73":
        return engines.simulate_bennett73(program, bits, max_steps, record=record, registry=registry)
    if engine == "lmt":
        return engines.simulate_lmt(program, bits, max_steps, record=record, registry=registry)
    if engine == "hybrid":
        return engines.simulate_hybrid(program, bits, k, max_steps, record=record, registry=registry)
    return engines.simulate_unknown_T(program, bits, record=record, registry=registry)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_check(args) -> int:
    program = _load(args.machine)
    det = check_deterministic(program)
    rev = check_reversible(program)
    print(f"deterministic: {'yes' if det.ok else 'no'}, reversible: {'yes' if rev.ok else 'no'}")
    for label, rep in (("domain", det), ("range", rev)):
        for i, j in rep.pairs:
            print(f"  {label} overlap: rule {i} ({program.rules[i]}) / rule {j} ({program.rules[j]})")
    return EXIT_OK if det.ok else EXIT_FAIL


def cmd_run(args) -> int:
    program = _load(args.machine)
    bits = _check_bits(program, args.input)
    trace, halted = tm_run(program, bits, args.max_steps)
    if args.verbose:
        for rule, cfg in trace.steps:
            print(f"{rule:4d}  {cfg}")
    print(f"T={len(trace)} halted={'yes' if halted else 'no'} "
          f"irreversible_steps={count_irreversible_steps(trace, program)}")
    print(f"output: {trace.final.tape_string()}")
    return EXIT_OK if halted else EXIT_FAIL


def cmd_pebble(args) -> int:
    if args.n < 0:
        raise UsageError("--n must be non-negative")
    if args.bfs:
        board = args.board or 2 ** args.n
        masks = reachable_masks(args.n, board)
        print(f"max node {max_reachable_bfs(args.n, board)}")
        print(f"reachable states {len(masks)} (board {board}, {args.n} pebbles)")
        return EXIT_OK
    strategy = erasure_strategy(args.n, args.erasures) if args.erasures else bennett_strategy(args.n)
    ledger = validate_strategy(strategy)
    print(f"moves {ledger.moves_used} peak {ledger.peak_pebbles} "
          f"erasures {ledger.erasures_used} max node {ledger.max_node_pebbled}")
    if args.emit:
        Path(args.emit).write_text(dump_strategy(strategy))
    return EXIT_OK


def _print_run(r) -> None:
    x, fx = r.pair
    print(f"pair <{x},{fx}>")
    led = r.ledger
    print(" ".join(f"{c}={v}" for c, v in led.csv_row().items()))
    if led.T_original != led.T:
        print(f"T_original={led.T_original}")


def cmd_simulate(args) -> int:
    program = _load(args.machine)
    bits = _check_bits(program, args.input)
    record = bool(args.trace)
    r = _run_engine(program, bits, args.engine, args.k, args.max_steps, record=record)
    _print_run(r)
    if args.csv:
        _append_csv(args.csv, [r.ledger.csv_row()])
    if args.trace:
        Path(args.trace).write_text("".join(t.line() + "\n" for t in r.runner.trace))
    return EXIT_OK


def _parse_k_range(text: str) -> list[int]:
    text = text.strip()
    if not text:
        raise UsageError("empty k-range")
    if ".." in text:
        lo, hi = text.split("..", 1)
        ks = list(range(int(lo), int(hi) + 1))
    else:
        ks = sorted({int(t) for t in text.split(",") if t.strip()})
    if not ks:
        raise UsageError(f"empty k-range {text!r}")
    if ks[0] < 0:
        raise UsageError("k must be non-negative")
    return ks


def _parse_inputs(text: str, program) -> list[str]:
    """``all:N`` (every string over the alphabet of length <= N) or a comma list."""
    if text.startswith("all:"):
        from itertools import product
        n = int(text[4:])
        return ["".join(t) for L in range(n + 1) for t in product(sorted(program.alphabet), repeat=L)]
    return [_check_bits(program, t.strip()) for t in text.split(",")]


def cmd_sweep(args) -> int:
    program = _load(args.machine)
    ks = _parse_k_range(args.k_range)
    inputs = sorted(set(_parse_inputs(args.inputs, program)), key=lambda s: (len(s), s))
    rows = []
    for x in inputs:
        for k in ks:
            try:
                r = engines.simulate_hybrid(program, x, k, args.max_steps)
            except ParameterError as exc:
                print(f"skip input {x or '-'}: {exc}", file=sys.stderr)
                continue
            rows.append(r.ledger.csv_row())
    if args.csv:
        _append_csv(args.csv, rows)
    else:
        w = csv.DictWriter(sys.stdout, fieldnames=engines.CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return EXIT_OK


def _faulty_registry(op: str) -> dict[str, MicroOp]:
    reg = dict(REGISTRY)
    if op not in reg:
        raise UsageError(f"unknown micro-op {op!r}")
    bad = {"rotate": "rotate", "unrotate": "unrotate", "swap": "rotate"}.get(op, "swap")
    old = reg[op]
    reg[op] = MicroOp(old.name, old.apply, bad, old.invert_args, old.erased_bits)
    return reg


def cmd_audit(args) -> int:
    program = _load(args.machine)
    bits = _check_bits(program, args.input)
    registry = _faulty_registry(args.inject_fault) if args.inject_fault else None
    r = _run_engine(program, bits, args.engine, args.k, args.max_steps, record=True, registry=registry)
    rep = audit_mod.reversibility_audit(r)
    print(rep.summary())
    for f in rep.failures:
        print(f"  {f}")
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_tradeoff(args) -> int:
    if args.calibrate:
        points = accounting.points_from_csv(Path(args.calibrate).read_text())
        model = accounting.calibrate(points)
        print(model.report())
        for k, (t, s) in accounting.median_trend(points).items():
            print(f"k={k} median T'={t:g} median S'={s:g}")
        return EXIT_OK
    rows = accounting.erasure_tradeoff_table(args.n, args.k_max, args.S)
    print("k,pebbles,erasures,space,erased_bits,replay_check")
    for row in rows:
        check = {None: "-", True: "ok", False: "MISMATCH"}[row.consistent]
        print(f"{row.k},{row.pebbles},{row.erasures},{row.space},{row.erased_bits},{check}")
    return EXIT_OK if all(r.consistent is not False for r in rows) else EXIT_FAIL


# ---------------------------------------------------------------------------

def _engine_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("machine")
    p.add_argument("input", help="input string, or - for empty")
    p.add_argument("--engine", choices=("b73", "lmt", "hybrid", "auto"), default="hybrid")
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--max-steps", type=int, default=engines.DEFAULT_MAX_STEPS)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="revcomp", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="determinism and reversibility of a machine file")
    p.add_argument("machine")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("run", help="plain run of a machine")
    p.add_argument("machine")
    p.add_argument("input")
    p.add_argument("--max-steps", type=int, default=engines.DEFAULT_MAX_STEPS)
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("pebble", help="pebble strategies and exhaustive search")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--board", type=int)
    p.add_argument("--erasures", type=int, default=0, metavar="M",
                   help="use the springboard strategy over M segments")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--emit", metavar="FILE")
    g.add_argument("--bfs", action="store_true")
    p.set_defaults(fn=cmd_pebble)

    p = sub.add_parser("simulate", help="reversible simulation")
    _engine_args(p)
    p.add_argument("--csv", metavar="FILE", help="append a ledger row")
    p.add_argument("--trace", metavar="FILE", help="write (phase, op, counter, event) records")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("sweep", help="hybrid runs over inputs x k")
    p.add_argument("machine")
    p.add_argument("--inputs", default="all:4", help="all:N or a comma list")
    p.add_argument("--k-range", default="0..4", help="LO..HI or a comma list")
    p.add_argument("--max-steps", type=int, default=engines.DEFAULT_MAX_STEPS)
    p.add_argument("--csv", metavar="FILE")
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("audit", help="recorded run + reversibility audit")
    _engine_args(p)
    p.add_argument("--inject-fault", metavar="OP", help="misregister the inverse of OP")
    p.set_defaults(fn=cmd_audit)

    p = sub.add_parser("tradeoff", help="erasure table, or calibrate a sweep CSV")
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--k-max", type=int, default=3)
    p.add_argument("--S", type=int, default=4)
    p.add_argument("--calibrate", metavar="CSV")
    p.set_defaults(fn=cmd_tradeoff)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "k", 0) is not None and getattr(args, "k", 0) < 0:
        print("error: --k must be non-negative", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimit as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (ParameterError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SimError, MachineError) as exc:
        print(f"engine error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
