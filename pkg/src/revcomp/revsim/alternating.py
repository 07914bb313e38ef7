"""Rewrite a deterministic machine so write and move steps strictly alternate.

* write -> write: the chain of writes is composed into a single write
  (the intermediate symbols are known, so the composition is exact).
* move -> move: an identity-write state is inserted between the moves.

Neither gadget moves the head, so the rewrite never brings the head closer
to a marker than the original machine does.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..tmcore import MachineProgram, check_deterministic, move, write
from .machine import NotAlternating

DEAD = "_dead"


def _kinds(program: MachineProgram) -> dict[str, str | None]:
    kinds: dict[str, str | None] = {s: None for s in program.states}
    for r in program.rules:
        kinds[r.from_state] = "move" if r.is_move else "write"
    kinds[program.halt] = None
    return kinds


def alternation_violations(program: MachineProgram) -> list[tuple[int, int]]:
    """Pairs (i, j): rule j can fire right after rule i with the same kind."""
    out = []
    for i, r in enumerate(program.rules):
        if r.to_state == program.halt:
            continue
        for j in program.rules_from(r.to_state):
            if program.rules[j].is_move == r.is_move:
                out.append((i, j))
    return out


def is_alternating(program: MachineProgram) -> bool:
    return not alternation_violations(program)


def require_alternating(program: MachineProgram) -> None:
    bad = alternation_violations(program)
    if bad:
        i, j = bad[0]
        raise NotAlternating(f"rule {i} ({program.rules[i]}) is followed by rule {j} of the same kind")


@dataclass(frozen=True)
class AlternatingProgram:
    program: MachineProgram
    origin: tuple[tuple[int, ...], ...]   # original rule ids behind each new rule

    def original_steps(self, rule_ids) -> int:
        return sum(len(self.origin[i]) for i in rule_ids)


def convert_to_alternating(program: MachineProgram) -> AlternatingProgram:
    det = check_deterministic(program)
    if not det.ok:
        raise ValueError(f"program is not deterministic: overlapping rules {det.pairs[:3]}")
    if is_alternating(program):
        return AlternatingProgram(program, tuple((i,) for i in range(len(program.rules))))

    kinds = _kinds(program)
    rules_on: dict[tuple[str, str], int] = {}
    for i, r in enumerate(program.rules):
        if r.is_write:
            rules_on[(r.from_state, r.trigger)] = i

    new_rules, origin = [], []
    extra_states: list[str] = []
    need_dead = False
    for i, r in enumerate(program.rules):
        if r.is_write:
            chain = [i]
            sym, q = r.arg, r.to_state
            seen = {(r.from_state, r.trigger)}
            while kinds[q] == "write":
                j = rules_on.get((q, sym))
                if j is None:
                    # the original gets stuck in q; get stuck in a rule-less state instead
                    q = DEAD
                    need_dead = True
                    break
                if (q, sym) in seen:
                    raise ValueError(f"rule {i} enters a write-only loop; it never halts")
                seen.add((q, sym))
                chain.append(j)
                sym, q = program.rules[j].arg, program.rules[j].to_state
            new_rules.append(write(r.from_state, r.trigger, sym, q))
            origin.append(tuple(chain))
        elif kinds[r.to_state] == "move":
            mid = f"_id{i}"
            extra_states.append(mid)
            new_rules.append(move(r.from_state, r.arg, mid))
            origin.append((i,))
            for a in program.alphabet:
                new_rules.append(write(mid, a, a, r.to_state))
                origin.append(())
        else:
            new_rules.append(r)
            origin.append((i,))

    states = program.states + tuple(extra_states) + ((DEAD,) if need_dead else ())
    converted = MachineProgram(
        states, program.start, program.halt, program.alphabet, program.blank,
        program.space, tuple(new_rules), name=program.name,
    )
    return AlternatingProgram(converted, tuple(origin))
