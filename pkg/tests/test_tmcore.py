import pytest
from hypothesis import given, settings, strategies as st

from revcomp.corpus import bitflip, countdown, loop, zeroing
from revcomp.tmcore import (
    Configuration,
    MachineParseError,
    MachineProgram,
    MarkerViolation,
    StuckConfiguration,
    ValidationError,
    all_configurations,
    check_deterministic,
    check_reversible,
    count_irreversible_steps,
    dump_machine,
    fire,
    move,
    parse_machine,
    predecessors,
    run,
    step_forward,
    write,
)

from oracles import naive_run, rules_of


def test_golden_outputs_match(corpus, golden_runs):
    for p in corpus:
        for x, (T, out) in golden_runs[p.name].items():
            trace, halted = run(p, x, 10_000)
            assert halted
            assert (len(trace), trace.final.tape_string()) == (T, out), (p.name, x)


def test_overlap_predicates():
    assert check_deterministic(zeroing(3)).ok
    assert not check_reversible(zeroing(3)).ok
    assert check_reversible(bitflip(3)).ok
    # a move and a write out of one state overlap in domain
    rules = (write("a", "0", "1", "h"), move("a", +1, "h"))
    p = MachineProgram(("a", "h"), "a", "h", ("0", "1"), "0", 2, rules)
    assert list(check_deterministic(p).pairs) == [(0, 1)]


def test_writes_of_different_symbols_do_not_overlap_in_range():
    rules = (write("a", "0", "1", "h"), write("a", "1", "0", "h"))
    p = MachineProgram(("a", "h"), "a", "h", ("0", "1"), "0", 1, rules)
    assert check_reversible(p).ok


def test_irreversible_step_count():
    p = zeroing(4)
    trace, _ = run(p, "1010", 100)
    assert count_irreversible_steps(trace, p) == 4


def test_marker_violation():
    p = MachineProgram(("a", "h"), "a", "h", ("0",), "0", 2, (move("a", -1, "h"),))
    with pytest.raises(MarkerViolation):
        run(p, "", 5)


def test_stuck_configuration():
    p = MachineProgram(("a", "h"), "a", "h", ("0", "1"), "0", 1, (write("a", "1", "0", "h"),))
    with pytest.raises(StuckConfiguration):
        run(p, "0", 5)


def test_run_times_out_without_halting():
    trace, halted = run(loop(), "", 50)
    assert not halted and len(trace) == 50


def test_halted_configuration_has_no_successor():
    p = zeroing(2)
    assert step_forward(Configuration("h", ("0", "0"), 1), p) is None


@pytest.mark.parametrize("make", [zeroing, bitflip, countdown])
def test_predecessors_invert_step_exhaustively(make):
    p = make(3)
    for c in all_configurations(p):
        try:
            out = fire(c, p)
        except (StuckConfiguration, MarkerViolation):
            continue
        if out is None:
            continue
        rule, nxt = out
        assert (rule, c) in predecessors(nxt, p)
        for r, prev in predecessors(nxt, p):
            assert fire(prev, p) == (r, nxt)


def test_reversible_machine_has_at_most_one_predecessor():
    p = bitflip(3)
    for c in all_configurations(p):
        assert len(predecessors(c, p)) <= 1


def test_parse_roundtrip(corpus):
    for p in corpus:
        assert parse_machine(dump_machine(p)) == p


def test_parse_error_reports_line():
    text = "states a h\nstart a\nhalt h\nalphabet 0 1\nblank 0\nspace 2\nrule a 0 -> write 2 h\n"
    with pytest.raises((MachineParseError, ValidationError)) as info:
        parse_machine(text)
    assert "7" in str(info.value)
    with pytest.raises(MachineParseError) as info:
        parse_machine("states a h\nstart a\nbogus\n")
    assert info.value.lineno == 3


def test_validation_rejects_undeclared_state():
    with pytest.raises(ValidationError):
        MachineProgram(("a",), "a", "h", ("0",), "0", 1)


@settings(max_examples=60, deadline=None)
@given(st.text(alphabet="01", max_size=4), st.sampled_from(["zeroing", "bitflip", "countdown"]))
def test_run_matches_naive_interpreter(bits, name):
    p = {"zeroing": zeroing, "bitflip": bitflip, "countdown": countdown}[name](4)
    trace, _ = run(p, bits, 10_000)
    assert naive_run(rules_of(p), p.start, p.halt, p.space, p.blank, bits) == (
        len(trace), trace.final.tape_string())
