"""Simulator state and the micro-op set every engine is built from.

Each micro-op is a bijection on :class:`SimMachineState` (given its
operands) and is registered together with the op that undoes it.  The
:class:`Runner` applies ops, charges time and space, and optionally records
the op log plus a digest of every intermediate state for auditing.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Callable

from ..tmcore import unapply_rule
from .codec import ConfigGraph


class SimError(Exception):
    pass


class Timeout(SimError):
    pass


class FreeSource(SimError):
    """bridge() was asked to read an all-zero section."""


class TraversalBudgetExceeded(SimError):
    pass


class NotAlternating(SimError):
    pass


class ParameterError(SimError, ValueError):
    pass


@dataclass
class SimMachineState:
    sim: int = 0                    # simulation tape (encoded configuration, 0 = blank)
    pointer: int = 0                # half-edge pointer: 0 = out-edge, i = i-th predecessor
    counter: int = 0                # forward minus backward simulated steps
    parity: int = 0                 # flips on every swap/rotate
    store: list[int] = field(default_factory=list)   # checkpoint sections, index 0 = pebble -1
    history: list[int] = field(default_factory=list)
    output: list[int] = field(default_factory=list)
    cursor: int = 0
    phase: str = "init"
    frames: tuple = ()
    budget: int = 0                 # doubling wrapper's step budget register

    def copy(self) -> "SimMachineState":
        return copy.deepcopy(self)

    def section(self, pebble: int) -> int:
        return self.store[pebble + 1]

    def snapshot(self, with_budget: bool = True) -> tuple:
        store = list(self.store)
        while store and store[-1] == 0:
            store.pop()  # unused sections are blank tape
        snap = (
            self.sim, self.pointer, self.counter, self.parity, tuple(store),
            tuple(self.history), tuple(self.output), self.cursor, self.phase, self.frames,
        )
        return snap + (self.budget,) if with_budget else snap


# ---------------------------------------------------------------------------
# Micro-ops
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MicroOp:
    name: str
    apply: Callable[["Runner", tuple], None]
    inverse: str | None
    invert_args: Callable[[tuple], tuple] = lambda a: a
    erased_bits: Callable[["Runner", tuple], int] | None = None

    @property
    def irreversible(self) -> bool:
        return self.inverse is None


def _rotation_size(run: "Runner", st: SimMachineState) -> int:
    if st.counter == 0:
        return 1  # reflect: never step behind the start level
    return 1 + len(run.graph.preds(st.sim))


def _swap(run, args):
    st = run.state
    g = run.graph
    if st.pointer == 0:
        nxt = g.succ(st.sim)
        if nxt is None:
            raise SimError("swap across a missing out-edge (halted configuration)")
        st.pointer = 1 + g.preds(nxt).index(st.sim)
        st.sim = nxt
        st.counter += 1
    else:
        st.sim = g.preds(st.sim)[st.pointer - 1]
        st.pointer = 0
        st.counter -= 1
    st.parity ^= 1


def _rotate(run, args):
    st = run.state
    size = _rotation_size(run, st)
    if st.pointer < size:
        st.pointer = (st.pointer + 1) % size
    st.parity ^= 1


def _unrotate(run, args):
    st = run.state
    size = _rotation_size(run, st)
    if st.pointer < size:
        st.pointer = (st.pointer - 1) % size
    st.parity ^= 1


def _load(run, args):
    (s,) = args
    run.state.sim ^= run.state.section(s)


def _xor_out(run, args):
    (t,) = args
    run.state.store[t + 1] ^= run.state.sim


def _phase(run, args):
    old, new = args
    if run.state.phase != old:
        raise SimError(f"phase is {run.state.phase!r}, expected {old!r}")
    run.state.phase = new


def _push(run, args):
    (frame,) = args
    run.state.frames = run.state.frames + (frame,)


def _pop(run, args):
    (frame,) = args
    if not run.state.frames or run.state.frames[-1] != frame:
        raise SimError(f"frame mismatch popping {frame!r}")
    run.state.frames = run.state.frames[:-1]


def _step_record(run, args):
    (rule,) = args
    st = run.state
    out = run.graph.fire(st.sim)
    if out is None or out[0] != rule:
        raise SimError(f"rule {rule} does not fire here")
    st.sim = out[1]
    st.history.append(rule)


def _unstep_unrecord(run, args):
    (rule,) = args
    st = run.state
    if not st.history or st.history[-1] != rule:
        raise SimError(f"history top is not rule {rule}")
    codec = run.graph.codec
    prog = run.graph.program
    prev = unapply_rule(codec.decode(st.sim), prog.rules[rule], prog.space)
    if prev is None:
        raise SimError(f"rule {rule} cannot have produced the current configuration")
    st.sim = codec.encode(prev)
    st.history.pop()


def _tape_symbol_code(run, i):
    codec = run.graph.codec
    return codec.symbol_code(codec.decode(run.state.sim).tape[i])


def _copy_out(run, args):
    (i,) = args
    st = run.state
    if st.cursor != i:
        raise SimError(f"copy cursor at {st.cursor}, expected {i}")
    st.output[i] ^= _tape_symbol_code(run, i)
    st.cursor = i + 1


def _uncopy_out(run, args):
    (i,) = args
    st = run.state
    if st.cursor != i + 1:
        raise SimError(f"copy cursor at {st.cursor}, expected {i + 1}")
    st.cursor = i
    st.output[i] ^= _tape_symbol_code(run, i)


def _set_budget(run, args):
    old, new = args
    if run.state.budget != old:
        raise SimError(f"budget register is {run.state.budget}, expected {old}")
    run.state.budget = new


def _erase_section(run, args):
    (t,) = args
    run.state.store[t + 1] = 0


def _swap_pair(a):
    return (a[1], a[0])


REGISTRY: dict[str, MicroOp] = {
    op.name: op
    for op in [
        MicroOp("swap", _swap, "swap"),
        MicroOp("rotate", _rotate, "unrotate"),
        MicroOp("unrotate", _unrotate, "rotate"),
        MicroOp("load", _load, "load"),
        MicroOp("xor_out", _xor_out, "xor_out"),
        MicroOp("phase", _phase, "phase", _swap_pair),
        MicroOp("push", _push, "pop"),
        MicroOp("pop", _pop, "push"),
        MicroOp("step_record", _step_record, "unstep_unrecord"),
        MicroOp("unstep_unrecord", _unstep_unrecord, "step_record"),
        MicroOp("copy_out", _copy_out, "uncopy_out"),
        MicroOp("uncopy_out", _uncopy_out, "copy_out"),
        MicroOp("budget", _set_budget, "budget", _swap_pair),
        MicroOp(
            "erase_section", _erase_section, None,
            erased_bits=lambda run, a: run.graph.codec.width,
        ),
    ]
}


# ---------------------------------------------------------------------------
# Runner
# ---------------------------------------------------------------------------

@dataclass
class TraceRecord:
    phase: str
    op: str
    counter: int
    event: str = ""

    def line(self) -> str:
        return f"({self.phase}, {self.op}, {self.counter}, {self.event or '-'})"


class Runner:
    """Applies micro-ops to one engine's state and keeps the books."""

    def __init__(
        self,
        state: SimMachineState,
        graph: ConfigGraph,
        *,
        record: bool = False,
        registry: dict[str, MicroOp] | None = None,
        space_fn: Callable[[SimMachineState], int] | None = None,
    ):
        self.state = state
        self.graph = graph
        self.registry = dict(REGISTRY if registry is None else registry)
        self.record = record
        self.space_fn = space_fn
        self.steps = 0
        self.erased_bits = 0
        self.peak_space = space_fn(state) if space_fn else 0
        self.initial = state.copy()
        self.log: list[tuple[str, tuple]] = []
        self.digests: list[int] = [hash(state.snapshot())] if record else []
        self.trace: list[TraceRecord] = []

    def do(self, name: str, *args, event: str = "") -> None:
        op = self.registry[name]
        if op.erased_bits is not None:
            self.erased_bits += op.erased_bits(self, args)
        op.apply(self, args)
        self.steps += 1
        if self.space_fn is not None:
            space = self.space_fn(self.state)
            if space > self.peak_space:
                self.peak_space = space
        if self.record:
            self.log.append((name, args))
            self.digests.append(hash(self.state.snapshot()))
            self.trace.append(TraceRecord(self.state.phase, name, self.state.counter, event))
