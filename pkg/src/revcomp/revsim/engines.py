"""Reversible simulation engines.

``simulate_bennett73``
    history-tape simulation: run forward recording every rule, XOR-copy the
    result to an output tape, retrace.
``simulate_hybrid``
    Bennett's pebbling recursion pebble(-1, k, k) over 2**k segments, each
    pebble move realised by :func:`bridge`, which walks the configuration
    tree (swap/rotate on half-edges) with a step counter.
``simulate_lmt``
    the k = 0 case: one bridge over the whole computation.
``simulate_unknown_T``
    doubling wrapper for when the running time is not known in advance.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field, fields
from typing import Callable

from ..tmcore import (
    Configuration,
    MachineProgram,
    initial_configuration,
    run as tm_run,
)
from .alternating import AlternatingProgram, convert_to_alternating, require_alternating
from .codec import ConfigGraph, bits_for
from .machine import (
    FreeSource,
    ParameterError,
    Runner,
    SimError,
    SimMachineState,
    Timeout,
    TraversalBudgetExceeded,
)

DEFAULT_TRAVERSE_FACTOR = 64
DEFAULT_MAX_STEPS = 100_000

# documented control-state counts of each engine's finite control
CONTROL_STATES = {"b73": 6, "hybrid": 12, "lmt": 12, "auto": 14}

CSV_COLUMNS = ("engine", "k", "m", "T", "S", "T_prime", "S_prime", "bridges", "erased_bits")


@dataclass
class SimLedger:
    engine: str
    k: int = 0
    m: int = 0
    T: int = 0                 # steps of the machine actually simulated
    S: int = 0
    sim_steps: int = 0         # T': micro-ops executed
    peak_space: int = 0        # S': bits across all simulator tapes
    bridge_calls: int = 0
    erased_bits: int = 0
    T_original: int = 0        # steps of the machine as given (before alternation)
    history_peak: int = 0
    epochs: int = 1

    def csv_row(self) -> dict[str, int | str]:
        return {
            "engine": self.engine, "k": self.k, "m": self.m, "T": self.T, "S": self.S,
            "T_prime": self.sim_steps, "S_prime": self.peak_space,
            "bridges": self.bridge_calls, "erased_bits": self.erased_bits,
        }


@dataclass
class EngineRun:
    """Everything one engine invocation produced."""

    pair: tuple[str, str]
    ledger: SimLedger
    runner: Runner
    program: MachineProgram
    final_config: Configuration | None = None
    epoch_states: list[tuple] = field(default_factory=list)
    epoch_steps: list[int] = field(default_factory=list)
    initial_snapshot: tuple = ()

    @property
    def state(self) -> SimMachineState:
        return self.runner.state


# ---------------------------------------------------------------------------
# Configuration-tree traversal
# ---------------------------------------------------------------------------

def traverse_budget(program: MachineProgram, factor: int | None = None) -> int:
    env = os.environ.get("REVSIM_TRAVERSE_BUDGET")
    if env and factor is None:
        return int(env)
    factor = DEFAULT_TRAVERSE_FACTOR if factor is None else factor
    return factor * len(program.alphabet) ** program.space * len(program.states) * program.space


def _stop(run: Runner, length: int) -> bool:
    st = run.state
    return st.counter == length or run.graph.is_halt(st.sim)


def walk_forward(run: Runner, length: int, budget: int) -> None:
    """From (start, out-edge, counter 0) to the configuration ``length`` steps
    ahead, or to the halting configuration if that comes first."""
    start = run.steps
    if _stop(run, length):
        return
    while True:
        run.do("swap")
        if _stop(run, length):
            return
        run.do("rotate")
        if run.steps - start > budget:
            raise TraversalBudgetExceeded(f"traversal exceeded {budget} micro-ops")


def walk_back(run: Runner, origin: int, budget: int) -> None:
    """Exact inverse of :func:`walk_forward`: anti-rotate & swap until the
    counter is zero and the simulation tape matches ``origin``."""
    start = run.steps
    st = run.state

    def home():
        return st.counter == 0 and st.sim == origin

    if home():
        return
    while True:
        run.do("swap")
        if home():
            return
        run.do("unrotate")
        if run.steps - start > budget:
            raise TraversalBudgetExceeded(f"reverse traversal exceeded {budget} micro-ops")


def traverse_configuration_tree(
    start: Configuration, m: int, program: MachineProgram, budget: int | None = None,
) -> Configuration:
    """Configuration ``m`` steps after ``start`` (or the halting one, if earlier),
    found by walking the configuration tree with swap/rotate only."""
    require_alternating(program)
    graph = ConfigGraph(program)
    state = SimMachineState(sim=graph.codec.encode(start))
    run = Runner(state, graph)
    walk_forward(run, m, traverse_budget(program) if budget is None else budget)
    return graph.codec.decode(state.sim)


# ---------------------------------------------------------------------------
# bridge and the pebbling recursion
# ---------------------------------------------------------------------------

def bridge(run: Runner, s: int, t: int, length: int, budget: int) -> None:
    """XOR the configuration ``length`` steps after section ``s`` into section ``t``.

    All auxiliary registers (simulation tape, counter, pointer) are back to
    zero afterwards, so calling it twice restores the store.
    """
    st = run.state
    origin = st.section(s)
    if origin == 0:
        raise FreeSource(f"section {s} is free")
    placing = st.section(t) == 0
    run.do("load", s)
    run.do("phase", st.phase, "fwd")
    walk_forward(run, length, budget)
    run.do("phase", "fwd", "xor")
    run.do("xor_out", t, event=f"{'place' if placing else 'remove'} {t}")
    run.do("phase", "xor", "rev")
    walk_back(run, origin, budget)
    run.do("phase", "rev", "idle")
    run.do("load", s)


def pebble(run: Runner, s: int, t: int, n: int, length: int, budget: int, calls: list) -> None:
    """pebble(s, t, n): toggle pebble t on the 2**n-th node after pebble s."""
    if n == 0:
        bridge(run, s, t, length, budget)
        calls.append((s, t))
        return
    r = n - 1
    for stage, (a, b) in enumerate(((s, r), (r, t), (s, r))):
        frame = (s, t, n, stage)
        run.do("push", frame)
        pebble(run, a, b, n - 1, length, budget, calls)
        run.do("pop", frame)


def _hybrid_space(codec_width: int, k: int, m: int, max_degree: int) -> int:
    sections = (k + 2) * codec_width          # pebbles -1..k
    sim_tape = codec_width
    counter = bits_for(m + 1)
    pointer = bits_for(max_degree)
    parity = 1
    stack = k * (2 * bits_for(k + 2) + bits_for(k + 1) + 2)
    phase = 3
    return sections + sim_tape + counter + pointer + parity + stack + phase


def _checkpoint_hygiene(state: SimMachineState, k: int) -> bool:
    return all(v == 0 for i, v in enumerate(state.store[1:-1][:k]))  # sections 0..k-1


def _prepare(program: MachineProgram) -> AlternatingProgram:
    return convert_to_alternating(program)


def simulate_hybrid(
    program: MachineProgram,
    bits: str,
    k: int,
    max_T: int = DEFAULT_MAX_STEPS,
    *,
    record: bool = False,
    budget: int | None = None,
    engine: str = "hybrid",
    registry=None,
) -> EngineRun:
    """Pebble+bridge simulation with 2**k segments of ceil(T / 2**k) steps.

    T is taken from a plain run of the (alternating) machine, i.e. the
    running time is assumed known; see :func:`simulate_unknown_T` otherwise.
    """
    if k < 0:
        raise ParameterError("k must be non-negative")
    alt = _prepare(program)
    prog = alt.program
    trace, halted = tm_run(prog, bits, max_T)
    if not halted:
        raise Timeout(f"machine did not halt within {max_T} steps")
    T = len(trace)
    k_max = math.ceil(math.log2(T)) if T > 1 else 0
    if k > k_max:
        raise ParameterError(f"k={k} outside 0..{k_max} for T={T}")
    m = math.ceil(T / 2 ** k)

    graph = ConfigGraph(prog)
    width = graph.codec.width
    c0 = initial_configuration(prog, bits)
    state = SimMachineState(store=[graph.codec.encode(c0)] + [0] * (k + 1), phase="idle")
    space = _hybrid_space(width, k, m, graph.degree_bound())
    run = Runner(state, graph, record=record, registry=registry, space_fn=lambda s: space)
    cap = traverse_budget(prog) if budget is None else budget

    calls: list = []
    pebble(run, -1, k, k, m, cap, calls)

    final = graph.codec.decode(state.section(k))
    if not _checkpoint_hygiene(state, k):
        raise SimError("intermediate checkpoints left on the store")
    x = graph.codec.decode(state.section(-1)).tape_string()[: len(bits)]
    ledger = SimLedger(
        engine=engine, k=k, m=m, T=T, S=prog.space,
        sim_steps=run.steps, peak_space=run.peak_space, bridge_calls=len(calls),
        erased_bits=run.erased_bits, T_original=alt.original_steps(trace.rule_ids()),
    )
    return EngineRun((x, final.tape_string()), ledger, run, prog, final,
                     initial_snapshot=run.initial.snapshot())


def simulate_lmt(program: MachineProgram, bits: str, max_T: int = DEFAULT_MAX_STEPS, **kw) -> EngineRun:
    return simulate_hybrid(program, bits, 0, max_T, engine="lmt", **kw)


def simulate_bennett73(
    program: MachineProgram,
    bits: str,
    max_steps: int = DEFAULT_MAX_STEPS,
    *,
    record: bool = False,
    registry=None,
) -> EngineRun:
    graph = ConfigGraph(program)
    codec = graph.codec
    c0 = initial_configuration(program, bits)
    S = program.space
    state = SimMachineState(sim=codec.encode(c0), output=[0] * S, phase="fwd")
    rule_bits = bits_for(max(1, len(program.rules)))

    def space(st: SimMachineState) -> int:
        return (codec.width + len(st.history) * rule_bits + S * codec.symbol_bits
                + bits_for(S + 1) + 2)

    run = Runner(state, graph, record=record, registry=registry, space_fn=space)
    T = 0
    while True:
        out = graph.fire(state.sim)
        if out is None:
            break
        if T >= max_steps:
            raise Timeout(f"machine did not halt within {max_steps} steps")
        run.do("step_record", out[0])
        T += 1
    history_peak = len(state.history)
    final = codec.decode(state.sim)
    run.do("phase", "fwd", "copy")
    for i in range(S):
        run.do("copy_out", i)
    run.do("phase", "copy", "rev")
    while state.history:
        run.do("unstep_unrecord", state.history[-1])
    run.do("phase", "rev", "done")

    x = codec.decode(state.sim).tape_string()[: len(bits)]
    fx = "".join(codec.symbol(c) for c in state.output)
    ledger = SimLedger(
        engine="b73", k=0, m=T, T=T, S=S, sim_steps=run.steps, peak_space=run.peak_space,
        bridge_calls=0, erased_bits=run.erased_bits, T_original=T, history_peak=history_peak,
    )
    return EngineRun((x, fx), ledger, run, program, final, initial_snapshot=run.initial.snapshot())


# ---------------------------------------------------------------------------
# Unknown running time
# ---------------------------------------------------------------------------

def bennett_k_policy(t: int) -> int:
    """k = log2 t: unit segments, the cheapest bridges."""
    return max(0, t.bit_length() - 1)


def simulate_unknown_T(
    program: MachineProgram,
    bits: str,
    k_policy: Callable[[int], int] = bennett_k_policy,
    *,
    max_epochs: int = 20,
    record: bool = False,
    budget: int | None = None,
    registry=None,
) -> EngineRun:
    """Simulate t = 2, 4, 8, ... steps, reversibly undoing each failed epoch."""
    alt = _prepare(program)
    prog = alt.program
    graph = ConfigGraph(prog)
    codec = graph.codec
    c0 = initial_configuration(prog, bits)
    # blank sections for every k the policy may ask for (k <= log2 t <= max_epochs)
    state = SimMachineState(store=[codec.encode(c0)] + [0] * (max_epochs + 1), phase="idle", budget=2)
    run = Runner(state, graph, record=record, registry=registry)
    cap = traverse_budget(prog) if budget is None else budget
    initial = state.snapshot(with_budget=False)
    epoch_states, epoch_steps = [], []
    peak = 0
    calls: list = []

    t = 2
    for epoch in range(1, max_epochs + 1):
        k = k_policy(t)
        if not 0 <= k or 2 ** k > t:
            raise ParameterError(f"k_policy({t}) = {k} is outside 0..log2 t")
        m = math.ceil(t / 2 ** k)
        peak = max(peak, _hybrid_space(codec.width, k, m, graph.degree_bound()) + bits_for(t + 1))
        before = run.steps
        epoch_calls: list = []
        pebble(run, -1, k, k, m, cap, epoch_calls)
        calls += epoch_calls
        epoch_steps.append(run.steps - before)
        result = state.section(k)
        if graph.is_halt(result):
            final = codec.decode(result)
            x = codec.decode(state.section(-1)).tape_string()[: len(bits)]
            ledger = SimLedger(
                engine="auto", k=k, m=m, T=t, S=prog.space, sim_steps=run.steps,
                peak_space=peak, bridge_calls=len(calls), erased_bits=run.erased_bits,
                epochs=epoch,
            )
            out = EngineRun((x, final.tape_string()), ledger, run, prog, final,
                            epoch_states=epoch_states, epoch_steps=epoch_steps,
                            initial_snapshot=initial)
            ledger.T_original = _original_T(alt, prog, bits)
            return out
        # undo: pebble(-1, k, k) is its own inverse.  It retraces the epoch's
        # states in reverse, so it runs under a marker frame to keep every
        # simulator state distinct; the budget changes before the frame closes.
        before = run.steps
        marker = ("undo", t)
        run.do("push", marker)
        pebble(run, -1, k, k, m, cap, calls)
        run.do("budget", t, 2 * t)
        run.do("pop", marker)
        epoch_steps[-1] += run.steps - before
        epoch_states.append(state.snapshot(with_budget=False))
        t *= 2
    raise Timeout(f"no halt within {max_epochs} doubling epochs (last budget {t // 2})")


def _original_T(alt: AlternatingProgram, prog: MachineProgram, bits: str) -> int:
    trace, _ = tm_run(prog, bits, DEFAULT_MAX_STEPS)
    return alt.original_steps(trace.rule_ids())


ENGINES = {
    "b73": simulate_bennett73,
    "lmt": simulate_lmt,
    "hybrid": simulate_hybrid,
    "auto": simulate_unknown_T,
}


def ledger_fields() -> list[str]:
    return [f.name for f in fields(SimLedger)]
