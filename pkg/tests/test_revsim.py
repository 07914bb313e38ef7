import math

import pytest
from hypothesis import given, settings, strategies as st

from revcomp.corpus import bit_strings, countdown, loop, shuttle, zeroing
from revcomp.revsim import (
    REGISTRY,
    FreeSource,
    MicroOp,
    NotAlternating,
    ParameterError,
    Runner,
    SimMachineState,
    Timeout,
    TraversalBudgetExceeded,
    bridge,
    reversibility_audit,
    simulate_bennett73,
    simulate_hybrid,
    simulate_lmt,
    simulate_unknown_T,
    traverse_configuration_tree,
)
from revcomp.revsim.audit import AuditFailure
from revcomp.revsim.codec import ConfigCodec, ConfigGraph
from revcomp.revsim.engines import traverse_budget
from revcomp.tmcore import initial_configuration, run


def _kmax(T):
    return math.ceil(math.log2(T)) if T > 1 else 0


def test_codec_roundtrip_and_nonzero():
    p = countdown(3)
    codec = ConfigCodec(p)
    from revcomp.tmcore import all_configurations
    codes = set()
    for c in all_configurations(p):
        code = codec.encode(c)
        assert code != 0 and code < 1 << codec.width
        assert ConfigCodec(p).decode(code) == c
        codes.add(code)
    assert len(codes) == len(p.states) * 2 ** 3 * 3


@pytest.mark.parametrize("engine", ["b73", "lmt", "hybrid", "auto"])
def test_engines_match_golden(engine, corpus, golden_runs):
    for p in corpus:
        for x in bit_strings(3):
            T, out = golden_runs[p.name][x]
            if engine == "b73":
                r = simulate_bennett73(p, x)
            elif engine == "lmt":
                r = simulate_lmt(p, x)
            elif engine == "hybrid":
                r = simulate_hybrid(p, x, _kmax(simulate_lmt(p, x).ledger.T) // 2)
            else:
                r = simulate_unknown_T(p, x)
            assert r.pair == (x, out), (engine, p.name, x)
            assert r.ledger.erased_bits == 0


def test_hybrid_bridge_count_and_hygiene():
    p = countdown(4)
    T = simulate_lmt(p, "1111").ledger.T
    for k in range(_kmax(T) + 1):
        r = simulate_hybrid(p, "1111", k)
        assert r.ledger.bridge_calls == 3 ** k
        assert r.ledger.m == math.ceil(T / 2 ** k)
        store = r.state.store
        assert all(v == 0 for v in store[1:-1])
        assert store[0] != 0 and store[-1] != 0
        assert r.state.sim == 0 and r.state.counter == 0 and r.state.pointer == 0


def test_hybrid_rejects_bad_k():
    p = zeroing(2)  # T = 3
    with pytest.raises(ParameterError):
        simulate_hybrid(p, "11", 3)
    with pytest.raises(ParameterError):
        simulate_hybrid(p, "11", -1)


def test_b73_history_peak_is_T():
    r = simulate_bennett73(countdown(4), "0101")
    assert r.ledger.history_peak == r.ledger.T
    assert r.state.history == []


def _bridge_runner(p, x):
    g = ConfigGraph(p)
    st0 = SimMachineState(store=[g.codec.encode(initial_configuration(p, x)), 0], phase="idle")
    return Runner(st0, g), g


def test_bridge_is_an_involution():
    p = shuttle(4, 2)
    run_, g = _bridge_runner(p, "0110")
    before = run_.state.snapshot()
    bridge(run_, -1, 0, 5, 10_000)
    assert g.codec.decode(run_.state.section(0)) == run(p, "0110", 5)[0].final
    bridge(run_, -1, 0, 5, 10_000)
    assert run_.state.snapshot() == before


def test_bridge_from_free_section():
    run_, _ = _bridge_runner(shuttle(4, 2), "")
    with pytest.raises(FreeSource):
        bridge(run_, 0, -1, 1, 100)


def test_traverse_matches_tm_core():
    p = shuttle(4, 2)
    for m in range(0, 16):
        c = traverse_configuration_tree(initial_configuration(p, "1001"), m, p)
        assert c == run(p, "1001", m)[0].final


def test_traverse_requires_alternation():
    p = countdown(4)
    with pytest.raises(NotAlternating):
        traverse_configuration_tree(initial_configuration(p, "1"), 2, p)


def test_traversal_budget_and_env_override(monkeypatch):
    p = countdown(4)
    with pytest.raises(TraversalBudgetExceeded):
        simulate_lmt(p, "1111", budget=50)
    monkeypatch.setenv("REVSIM_TRAVERSE_BUDGET", "50")
    assert traverse_budget(p) == 50
    with pytest.raises(TraversalBudgetExceeded):
        simulate_lmt(p, "1111")
    monkeypatch.delenv("REVSIM_TRAVERSE_BUDGET")
    assert traverse_budget(p) == 64 * 2 ** 4 * len(p.states) * 4


def test_non_halting_machine_times_out():
    with pytest.raises(Timeout):
        simulate_hybrid(loop(), "", 0, max_T=100)
    with pytest.raises(Timeout):
        simulate_bennett73(loop(), "", max_steps=100)
    with pytest.raises(Timeout):
        simulate_unknown_T(loop(), "", max_epochs=4)


def test_doubling_epochs_return_to_initial_state():
    r = simulate_unknown_T(countdown(4), "0001")
    assert r.ledger.epochs == len(r.epoch_states) + 1 > 1
    assert all(s == r.initial_snapshot for s in r.epoch_states)
    assert r.ledger.sim_steps == sum(r.epoch_steps)


@pytest.mark.parametrize("engine", ["b73", "hybrid", "auto"])
def test_audit_passes(engine):
    p = countdown(4)
    r = {"b73": lambda: simulate_bennett73(p, "01", record=True),
         "hybrid": lambda: simulate_hybrid(p, "01", 2, record=True),
         "auto": lambda: simulate_unknown_T(p, "01", record=True)}[engine]()
    rep = reversibility_audit(r)
    assert rep.ok, rep.failures
    assert rep.steps == r.ledger.sim_steps


def _faulty(op, wrong):
    reg = dict(REGISTRY)
    old = reg[op]
    reg[op] = MicroOp(old.name, old.apply, wrong, old.invert_args, old.erased_bits)
    return reg


def test_audit_detects_misregistered_inverse():
    p = countdown(4)
    r = simulate_hybrid(p, "01", 1, record=True, registry=_faulty("rotate", "rotate"))
    rep = reversibility_audit(r)
    assert not rep.replay_ok
    with pytest.raises(AuditFailure) as info:
        reversibility_audit(r, strict=True)
    first = next(i for i, (name, _) in enumerate(r.runner.log) if name == "rotate"
                 and info.value.step == i)
    assert r.runner.log[first][0] == "rotate"
    # every earlier rotate happened where rotate is its own inverse
    assert info.value.op == "rotate"


def test_audit_flags_irreversible_op():
    p = shuttle(4, 2)
    run_, g = _bridge_runner(p, "")
    run_.record = True
    run_.digests = [hash(run_.state.snapshot())]
    bridge(run_, -1, 0, 3, 1000)
    run_.do("erase_section", 0)
    rep = reversibility_audit(run_)
    assert rep.erased_bits == g.codec.width and rep.irreversible_ops == 1
    assert not rep.ok


def test_audit_requires_recording():
    with pytest.raises(ValueError):
        reversibility_audit(simulate_lmt(zeroing(2), "1"))


def test_trace_records():
    r = simulate_hybrid(zeroing(2), "11", 1, record=True)
    lines = [t.line() for t in r.runner.trace]
    assert len(lines) == r.ledger.sim_steps
    events = [t.event for t in r.runner.trace if t.event]
    assert events == ["place 0", "place 1", "remove 0"]
    assert all(line.startswith("(") and line.count(",") == 3 for line in lines)


@settings(max_examples=25, deadline=None)
@given(st.text(alphabet="01", max_size=4), st.integers(0, 4))
def test_hybrid_property(bits, k):
    p = countdown(4)
    trace, _ = run(p, bits, 10_000)
    T = simulate_lmt(p, bits).ledger.T
    k = min(k, _kmax(T))
    r = simulate_hybrid(p, bits, k)
    assert r.pair == (bits, trace.final.tape_string())
    assert r.ledger.bridge_calls == 3 ** k
    assert r.ledger.T_original == len(trace)
