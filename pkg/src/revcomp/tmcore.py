"""Single-tape quadruple Turing machines with a bounded, marker-delimited tape.

Rules come in two flavours: read/write ``(p, a, write b, q)`` and move
``(p, *, move s, q)`` with ``s`` in {-1, +1}.  The tape holds exactly
``space`` cells; the head may never leave ``[0, space - 1]``.

Rule order is significant: it is the declaration order in the machine file
and fixes the order in which :func:`predecessors` lists pre-images (and
therefore the rotation order of the configuration-tree traversal).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

WILDCARD = "*"
LEFT_MARKER = "†"   # dagger
RIGHT_MARKER = "‡"  # double dagger
MARKERS = frozenset({LEFT_MARKER, RIGHT_MARKER})


class MachineError(Exception):
    """Base class for machine-level failures."""


class ValidationError(MachineError):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


class MachineParseError(MachineError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class MarkerViolation(MachineError):
    """The head would step onto a boundary marker."""


class StuckConfiguration(MachineError):
    """No rule applies in a non-halting state."""


@dataclass(frozen=True)
class Quadruple:
    from_state: str
    trigger: str          # scanned symbol, or WILDCARD for move rules
    action: str           # "write" | "move"
    arg: str | int        # symbol written, or -1/+1
    to_state: str

    def __post_init__(self):
        if self.action == "write":
            if self.trigger == WILDCARD:
                raise ValidationError("trigger", "write rules need a concrete scanned symbol")
        elif self.action == "move":
            if self.trigger != WILDCARD:
                raise ValidationError("trigger", "move rules must use the wildcard trigger")
            if self.arg not in (-1, 1):
                raise ValidationError("action", f"move offset must be -1 or +1, got {self.arg!r}")
        else:
            raise ValidationError("action", f"unknown action {self.action!r}")

    @property
    def is_move(self) -> bool:
        return self.action == "move"

    @property
    def is_write(self) -> bool:
        return self.action == "write"

    def __str__(self) -> str:
        if self.is_move:
            act = "move " + ("R" if self.arg == 1 else "L")
        else:
            act = f"write {self.arg}"
        return f"rule {self.from_state} {self.trigger} -> {act} {self.to_state}"


def write(p: str, a: str, b: str, q: str) -> Quadruple:
    return Quadruple(p, a, "write", b, q)


def move(p: str, sigma: int, q: str) -> Quadruple:
    return Quadruple(p, WILDCARD, "move", sigma, q)


@dataclass(frozen=True)
class MachineProgram:
    states: tuple[str, ...]
    start: str
    halt: str
    alphabet: tuple[str, ...]
    blank: str
    space: int
    rules: tuple[Quadruple, ...] = ()
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "rules", tuple(self.rules))
        self.validate()

    def validate(self) -> None:
        if len(set(self.states)) != len(self.states) or not self.states:
            raise ValidationError("states", "must be a non-empty list of distinct names")
        if len(set(self.alphabet)) != len(self.alphabet) or not self.alphabet:
            raise ValidationError("alphabet", "must be a non-empty list of distinct symbols")
        bad = [s for s in self.alphabet if s in MARKERS or s == WILDCARD]
        if bad:
            raise ValidationError("alphabet", f"reserved symbols not allowed: {bad}")
        if self.start not in self.states:
            raise ValidationError("start", f"undeclared state {self.start!r}")
        if self.halt not in self.states:
            raise ValidationError("halt", f"undeclared state {self.halt!r}")
        if self.blank not in self.alphabet:
            raise ValidationError("blank", f"{self.blank!r} not in alphabet")
        if not isinstance(self.space, int) or self.space < 1:
            raise ValidationError("space", "must be a positive integer")
        for i, r in enumerate(self.rules):
            for st in (r.from_state, r.to_state):
                if st not in self.states:
                    raise ValidationError(f"rules[{i}]", f"undeclared state {st!r}")
            if r.is_write:
                for sym in (r.trigger, r.arg):
                    if sym not in self.alphabet:
                        raise ValidationError(f"rules[{i}]", f"symbol {sym!r} not in alphabet")

    def rules_from(self, state: str) -> list[int]:
        return [i for i, r in enumerate(self.rules) if r.from_state == state]

    def rules_into(self, state: str) -> list[int]:
        return [i for i, r in enumerate(self.rules) if r.to_state == state]


@dataclass(frozen=True)
class Configuration:
    state: str
    tape: tuple[str, ...]
    head: int

    def scanned(self) -> str:
        return self.tape[self.head]

    def tape_string(self) -> str:
        return "".join(self.tape)

    def __str__(self) -> str:
        cells = [f"[{s}]" if i == self.head else s for i, s in enumerate(self.tape)]
        return f"{self.state}: {LEFT_MARKER}{''.join(cells)}{RIGHT_MARKER}"


@dataclass
class StepTrace:
    start: Configuration
    steps: list[tuple[int, Configuration]] = field(default_factory=list)
    halted: bool = False

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def final(self) -> Configuration:
        return self.steps[-1][1] if self.steps else self.start

    def rule_ids(self) -> list[int]:
        return [r for r, _ in self.steps]

    def configurations(self) -> list[Configuration]:
        return [self.start] + [c for _, c in self.steps]


# ---------------------------------------------------------------------------
# Static predicates
# ---------------------------------------------------------------------------

def domains_overlap(r1: Quadruple, r2: Quadruple) -> bool:
    if r1.from_state != r2.from_state:
        return False
    return r1.is_move or r2.is_move or r1.trigger == r2.trigger


def ranges_overlap(r1: Quadruple, r2: Quadruple) -> bool:
    if r1.to_state != r2.to_state:
        return False
    return not (r1.is_write and r2.is_write and r1.arg != r2.arg)


@dataclass(frozen=True)
class OverlapReport:
    pairs: tuple[tuple[int, int], ...] = ()

    @property
    def ok(self) -> bool:
        return not self.pairs

    def __bool__(self) -> bool:
        return self.ok


def check_deterministic(program: MachineProgram) -> OverlapReport:
    program.validate()
    pairs = [
        (i, j)
        for (i, r1), (j, r2) in combinations(enumerate(program.rules), 2)
        if domains_overlap(r1, r2)
    ]
    return OverlapReport(tuple(pairs))


def check_reversible(program: MachineProgram) -> OverlapReport:
    program.validate()
    pairs = [
        (i, j)
        for (i, r1), (j, r2) in combinations(enumerate(program.rules), 2)
        if ranges_overlap(r1, r2)
    ]
    return OverlapReport(tuple(pairs))


def irreversible_rules(program: MachineProgram) -> frozenset[int]:
    """Rules whose range overlaps the range of some other rule."""
    bad: set[int] = set()
    for i, j in check_reversible(program).pairs:
        bad.update((i, j))
    return frozenset(bad)


# ---------------------------------------------------------------------------
# Dynamics
# ---------------------------------------------------------------------------

def applicable_rule(config: Configuration, program: MachineProgram) -> int | None:
    """Index of the first rule firing on ``config`` (``None`` if none does)."""
    sym = config.scanned()
    for i, r in enumerate(program.rules):
        if r.from_state == config.state and (r.is_move or r.trigger == sym):
            return i
    return None


def apply_rule(config: Configuration, rule: Quadruple, space: int) -> Configuration:
    if rule.is_write:
        tape = config.tape[:config.head] + (rule.arg,) + config.tape[config.head + 1:]
        return Configuration(rule.to_state, tape, config.head)
    head = config.head + rule.arg
    if not 0 <= head < space:
        raise MarkerViolation(f"head would cross a marker moving from {config.head} to {head}")
    return Configuration(rule.to_state, config.tape, head)


def fire(config: Configuration, program: MachineProgram) -> tuple[int, Configuration] | None:
    """One step: ``(rule id, successor)``, or ``None`` if ``config`` is halted.

    Raises StuckConfiguration if no rule applies in a non-halt state.
    """
    if config.state == program.halt:
        return None
    i = applicable_rule(config, program)
    if i is None:
        raise StuckConfiguration(f"no rule for state {config.state!r} scanning {config.scanned()!r}")
    return i, apply_rule(config, program.rules[i], program.space)


def step_forward(config: Configuration, program: MachineProgram) -> Configuration | None:
    """Successor of ``config``; ``None`` means halted."""
    out = fire(config, program)
    return None if out is None else out[1]


def unapply_rule(config: Configuration, rule: Quadruple, space: int) -> Configuration | None:
    """The unique configuration that ``rule`` maps onto ``config``, if any."""
    if rule.to_state != config.state:
        return None
    if rule.is_write:
        if config.scanned() != rule.arg:
            return None
        tape = config.tape[:config.head] + (rule.trigger,) + config.tape[config.head + 1:]
        return Configuration(rule.from_state, tape, config.head)
    head = config.head - rule.arg
    # boundary filter: at the left edge only moves arriving from the right count, and vice versa
    if not 0 <= head < space:
        return None
    return Configuration(rule.from_state, config.tape, head)


def predecessors(config: Configuration, program: MachineProgram) -> list[tuple[int, Configuration]]:
    """All ``(rule id, c')`` with ``step_forward(c') == config``, in rule order."""
    out = []
    for i, rule in enumerate(program.rules):
        prev = unapply_rule(config, rule, program.space)
        if prev is None or prev.state == program.halt:
            continue
        # under nondeterminism another rule might shadow rule i at prev
        if applicable_rule(prev, program) != i:
            continue
        out.append((i, prev))
    return out


def initial_configuration(program: MachineProgram, bits: str) -> Configuration:
    if len(bits) > program.space:
        raise ValidationError("input", f"length {len(bits)} exceeds space {program.space}")
    for ch in bits:
        if ch not in program.alphabet:
            raise ValidationError("input", f"symbol {ch!r} not in alphabet")
    tape = tuple(bits) + (program.blank,) * (program.space - len(bits))
    return Configuration(program.start, tape, 0)


def run(program: MachineProgram, bits: str, max_steps: int) -> tuple[StepTrace, bool]:
    config = initial_configuration(program, bits)
    trace = StepTrace(config)
    while len(trace) < max_steps:
        out = fire(config, program)
        if out is None:
            trace.halted = True
            break
        trace.steps.append(out)
        config = out[1]
    else:
        trace.halted = config.state == program.halt
    return trace, trace.halted


def count_irreversible_steps(trace: StepTrace, program: MachineProgram) -> int:
    bad = irreversible_rules(program)
    return sum(1 for rule_id, _ in trace.steps if rule_id in bad)


def all_configurations(program: MachineProgram):
    """Every configuration of ``program`` (exhaustive; small machines only)."""
    from itertools import product

    for state in program.states:
        for tape in product(program.alphabet, repeat=program.space):
            for head in range(program.space):
                yield Configuration(state, tape, head)


# ---------------------------------------------------------------------------
# Machine files
# ---------------------------------------------------------------------------

_RULE_RE = re.compile(
    r"^rule\s+(\S+)\s+(\S+)\s*->\s*(?:write\s+(\S+)|move\s+([LR]))\s+(\S+)$"
)
_HEADERS = ("states", "start", "halt", "alphabet", "blank", "space")


def parse_machine(text: str, name: str = "") -> MachineProgram:
    header: dict[str, tuple[int, list[str]]] = {}
    rules: list[Quadruple] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, *rest = line.split()
        if key == "rule":
            m = _RULE_RE.match(line)
            if not m:
                raise MachineParseError(lineno, f"malformed rule: {line!r}")
            p, trig, sym, direction, q = m.groups()
            try:
                if direction:
                    if trig != WILDCARD:
                        raise ValidationError("trigger", "move rules must use '*'")
                    rules.append(move(p, 1 if direction == "R" else -1, q))
                else:
                    rules.append(write(p, trig, sym, q))
            except ValidationError as exc:
                raise MachineParseError(lineno, str(exc)) from None
        elif key in _HEADERS:
            if key in header:
                raise MachineParseError(lineno, f"duplicate header {key!r}")
            if not rest:
                raise MachineParseError(lineno, f"header {key!r} needs a value")
            header[key] = (lineno, rest)
        else:
            raise MachineParseError(lineno, f"unknown directive {key!r}")

    missing = [k for k in _HEADERS if k not in header]
    if missing:
        raise MachineParseError(len(text.splitlines()) or 1, f"missing headers: {', '.join(missing)}")

    def single(key):
        lineno, vals = header[key]
        if len(vals) != 1:
            raise MachineParseError(lineno, f"header {key!r} takes one value")
        return vals[0]

    lineno, _ = header["space"]
    try:
        space = int(single("space"))
    except ValueError:
        raise MachineParseError(lineno, "space must be an integer") from None
    try:
        return MachineProgram(
            states=tuple(header["states"][1]),
            start=single("start"),
            halt=single("halt"),
            alphabet=tuple(header["alphabet"][1]),
            blank=single("blank"),
            space=space,
            rules=tuple(rules),
            name=name,
        )
    except ValidationError as exc:
        where = header.get(exc.field, (0,))[0]
        if exc.field.startswith("rules["):
            idx = int(exc.field[6:-1])
            where = _rule_line(text, idx)
        raise MachineParseError(where, str(exc)) from None


def _rule_line(text: str, index: int) -> int:
    seen = -1
    for lineno, raw in enumerate(text.splitlines(), 1):
        if raw.split("#", 1)[0].strip().startswith("rule"):
            seen += 1
            if seen == index:
                return lineno
    return 0


def load_machine(path: str | Path) -> MachineProgram:
    path = Path(path)
    return parse_machine(path.read_text(), name=path.stem)


def dump_machine(program: MachineProgram) -> str:
    lines = [
        f"states {' '.join(program.states)}",
        f"start {program.start}",
        f"halt {program.halt}",
        f"alphabet {' '.join(program.alphabet)}",
        f"blank {program.blank}",
        f"space {program.space}",
    ]
    lines += [str(r) for r in program.rules]
    return "\n".join(lines) + "\n"
