"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run under pytest (lines also appear in the terminal summary) or directly:
``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import itertools
import math
import sys
import time
from pathlib import Path
from statistics import median

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import BENNETT_MOVES, BFS_MAX_NODE, naive_run, rules_of  # noqa: E402
from revcomp.accounting import (  # noqa: E402
    TradeoffPoint,
    calibrate,
    is_monotone,
    lower_bound_check,
)
from revcomp.corpus import bit_strings, countdown, fixture_corpus, zeroing  # noqa: E402
from revcomp.pebble import (  # noqa: E402
    PebbleState,
    bennett_strategy,
    erasure_strategy,
    is_realizable,
    is_strongly_solvable,
    is_weakly_solvable,
    max_reachable_bfs,
    reachable_states,
    validate_strategy,
)
from revcomp.revsim import (  # noqa: E402
    REGISTRY,
    MicroOp,
    reversibility_audit,
    simulate_bennett73,
    simulate_hybrid,
    simulate_lmt,
    simulate_unknown_T,
)
from revcomp.tmcore import load_machine  # noqa: E402

MACHINES = Path(__file__).parent.parent / "machines"
CORPUS = fixture_corpus(4)
INPUTS = bit_strings(4)


def _kmax(T: int) -> int:
    return math.ceil(math.log2(T)) if T > 1 else 0


def _hygienic(run) -> bool:
    store = run.state.store
    return store[0] != 0 and store[-1] != 0 and all(v == 0 for v in store[1:-1])


# ---------------------------------------------------------------------------

def criterion_1():
    t0 = time.perf_counter()
    counts = tuple(len(bennett_strategy(n)) for n in range(11))
    dt = time.perf_counter() - t0
    ok = counts == BENNETT_MOVES and all(c == (3 ** (n + 1) - 1) // 2 for n, c in enumerate(counts))
    return ok and dt < 1.0, f"move counts {list(counts)} in {dt:.3f}s"


def criterion_2():
    t0 = time.perf_counter()
    got = {n: max_reachable_bfs(n, 2 ** n) for n in range(1, 5)}
    dt = time.perf_counter() - t0
    # the strategy side: n pebbles do reach 2^n - 1
    ach = all(validate_strategy(bennett_strategy(n - 1)).max_node_pebbled == 2 ** n - 1 for n in range(1, 5))
    return got == BFS_MAX_NODE and ach and dt < 60, f"max reachable {got}, BFS {dt:.2f}s"


def _placements(max_board=20, max_placed=4, max_free=4):
    for board in range(1, max_board + 1):
        for size in range(max_placed + 1):
            for nodes in itertools.combinations(range(1, board + 1), size):
                for free in range(max_free + 1):
                    if size + free:
                        yield PebbleState(board, frozenset(nodes), size + free)


def criterion_3():
    total = bad = 0
    for st in _placements():
        total += 1
        bad += is_weakly_solvable(st) != is_strongly_solvable(st)
    return bad == 0, f"{total} placements, {bad} counterexamples"


def criterion_4():
    checked = mismatches = 0
    for n in range(1, 5):
        for board in range(1, 17):
            reach = reachable_states(n, board)
            for size in range(n + 1):
                for nodes in itertools.combinations(range(1, board + 1), size):
                    checked += 1
                    s = frozenset(nodes)
                    mismatches += is_realizable(PebbleState(board, s, n)) != (s in reach)
    return mismatches == 0, f"{checked} positions, {mismatches} mismatches"


def criterion_5():
    rows = []
    ok = True
    for n, m in itertools.product((1, 2), (2, 3, 4)):
        led = validate_strategy(erasure_strategy(n, m))
        good = (led.max_node_pebbled == m * 2 ** n and led.peak_pebbles <= n + 2
                and led.erasures_used == m - 1)
        ok &= good
        rows.append(f"({n},{m})->{led.max_node_pebbled}/{led.peak_pebbles}p/{led.erasures_used}e")
    return ok, " ".join(rows)


def _all_engine_runs(p, x, record=False):
    T = simulate_lmt(p, x).ledger.T
    yield simulate_bennett73(p, x, record=record)
    for k in range(_kmax(T) + 1):
        yield simulate_hybrid(p, x, k, record=record)  # k = 0 is the lmt engine's configuration
    yield simulate_lmt(p, x, record=record)
    yield simulate_unknown_T(p, x, record=record)


def criterion_6():
    total = match = 0
    for p in CORPUS:
        for x in INPUTS:
            steps, out = naive_run(rules_of(p), p.start, p.halt, p.space, p.blank, x)
            for r in _all_engine_runs(p, x):
                total += 1
                match += r.pair == (x, out)
    names = ", ".join(p.name for p in CORPUS)
    return match == total, f"{match}/{total} pairs match over [{names}], inputs <= 4"


def criterion_7():
    ok = True
    notes = []
    walk = load_machine(MACHINES / "walk16.tm")
    for p, x in ((walk, "0110"), (countdown(4), "1111")):
        T = simulate_lmt(p, x).ledger.T
        for k in range(0, 5):
            assert T >= 2 ** k
            r = simulate_hybrid(p, x, k)
            ok &= r.ledger.bridge_calls == 3 ** k and _hygienic(r)
        notes.append(f"{p.name} T={T}")
    for p in CORPUS:
        for x in INPUTS:
            T = simulate_lmt(p, x).ledger.T
            for k in range(_kmax(T) + 1):
                r = simulate_hybrid(p, x, k)
                ok &= r.ledger.bridge_calls == 3 ** k and _hygienic(r)
    return ok, f"3^k bridges for k=0..4 on {', '.join(notes)}; hygiene on every corpus run"


def criterion_8():
    runs = audited = 0
    ok = True
    for p in CORPUS:
        for x in INPUTS:
            for r in _all_engine_runs(p, x, record=True):
                rep = reversibility_audit(r)
                runs += 1
                audited += rep.ok
                ok &= rep.ok and rep.erased_bits == 0
    reg = dict(REGISTRY)
    old = reg["rotate"]
    reg["rotate"] = MicroOp(old.name, old.apply, "rotate", old.invert_args)
    bad = reversibility_audit(simulate_hybrid(countdown(4), "01", 1, record=True, registry=reg))
    detected = not bad.ok and bad.failures and "(rotate)" in bad.failures[0]
    return ok and bool(detected), f"{audited}/{runs} runs audited clean; fault injection detected={bool(detected)}"


def criterion_9():
    points = []
    for p in CORPUS:
        for x in INPUTS:
            T = simulate_lmt(p, x).ledger.T
            for k in range(_kmax(T) + 1):
                points.append(TradeoffPoint.from_ledger(simulate_hybrid(p, x, k).ledger))
    ks = sorted({p.k for p in points})
    med_t = [median(p.T_prime for p in points if p.k == k) for k in ks]
    med_s = [median(p.S_prime for p in points if p.k == k) for k in ks]
    space_ok = is_monotone(med_s, increasing=True)
    time_ok = is_monotone(med_t, increasing=False)

    planted = (3.0, 0.6, 1.5)
    synth = []
    for S in (3, 5, 8):
        for T in (8, 12, 16):
            for k in range(5):
                m = math.ceil(T / 2 ** k)
                synth.append(TradeoffPoint(k, m, T, S, round(planted[0] * S * 3 ** k * 2 ** (planted[1] * m)),
                                           round(S * (1 + planted[2] * k))))
    model = calibrate(synth)
    fit = (model.c1, model.c2, model.c3)
    fit_ok = all(abs(a - b) / b <= 0.05 for a, b in zip(fit, planted))
    detail = (f"median S' {med_s} nondecreasing={space_ok}; median T' {med_t} nonincreasing={time_ok}; "
              f"calibrate {tuple(round(c, 3) for c in fit)} vs {planted} ok={fit_ok}")
    return space_ok and time_ok and fit_ok, detail


def criterion_10():
    runs = 0
    worst = 0.0
    ok = True
    for p in CORPUS:
        for x in INPUTS:
            r = simulate_unknown_T(p, x)
            runs += 1
            ok &= all(s == r.initial_snapshot for s in r.epoch_states)
            ratio = r.ledger.sim_steps / r.epoch_steps[-1]
            worst = max(worst, ratio)
            ok &= ratio <= 4
    return ok, f"{runs} runs; epoch states restored; worst T''/T'(last epoch) = {worst:.3f}"


def criterion_11():
    n = 6
    p = zeroing(n)
    runs = []
    for x in bit_strings(n, n):
        runs.append(simulate_bennett73(p, x, record=True))
        runs.append(simulate_lmt(p, x, record=True))
        for k in range(1, 5):
            runs.append(simulate_hybrid(p, x, k, record=True))
        runs.append(simulate_unknown_T(p, x, record=True))
    rep = lower_bound_check(p, n, runs)  # raises DuplicateState on a repeat
    slack = ", ".join(f"{e.engine}:{e.slack:+.0f}" for e in rep.engines)
    return rep.ok, f"{rep.states_checked} states distinct; counting inequality per engine; S' slack {slack}"


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 12)}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    from conftest import ACCEPTANCE

    ok, detail = CRITERIA[number]()
    ACCEPTANCE[number] = (ok, detail)
    print(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for number, fn in CRITERIA.items():
        ok, detail = fn()
        failed += not ok
        print(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    sys.exit(1 if failed else 0)
