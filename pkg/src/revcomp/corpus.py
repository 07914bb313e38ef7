"""Small fixture machines over the binary alphabet {0, 1} with blank 0.

Machines that walk the tape keep the head position in their finite control
so they never step onto a marker.
"""

from __future__ import annotations

from itertools import product

from .tmcore import MachineProgram, move, write

BITS = ("0", "1")


def identity(space: int = 4) -> MachineProgram:
    return MachineProgram(("h",), "h", "h", BITS, "0", space, (), name="identity")


def zeroing(space: int = 4) -> MachineProgram:
    """f(x) = 0...0; every write lands in a state two rules enter."""
    states, rules = [], []
    for i in range(space):
        nxt = "h" if i == space - 1 else f"m{i}"
        states.append(f"z{i}")
        rules += [write(f"z{i}", "0", "0", nxt), write(f"z{i}", "1", "0", nxt)]
        if i < space - 1:
            states.append(f"m{i}")
            rules.append(move(f"m{i}", +1, f"z{i + 1}"))
    return MachineProgram(tuple(states) + ("h",), "z0", "h", BITS, "0", space, tuple(rules), name="zeroing")


def bitflip(space: int = 4) -> MachineProgram:
    """Complements every cell; a reversible machine."""
    states, rules = [], []
    for i in range(space):
        nxt = "h" if i == space - 1 else f"m{i}"
        states.append(f"f{i}")
        rules += [write(f"f{i}", "0", "1", nxt), write(f"f{i}", "1", "0", nxt)]
        if i < space - 1:
            states.append(f"m{i}")
            rules.append(move(f"m{i}", +1, f"f{i + 1}"))
    return MachineProgram(tuple(states) + ("h",), "f0", "h", BITS, "0", space, tuple(rules), name="bitflip")


def unary_increment(space: int = 4) -> MachineProgram:
    """Appends a 1 after the leading run of 1s (saturates on a full tape)."""
    states, rules = [], []
    for i in range(space):
        states.append(f"s{i}")
        rules.append(write(f"s{i}", "0", "1", "h"))
        if i < space - 1:
            rules.append(write(f"s{i}", "1", "1", f"m{i}"))
            states.append(f"m{i}")
            rules.append(move(f"m{i}", +1, f"s{i + 1}"))
        else:
            rules.append(write(f"s{i}", "1", "1", "h"))
    return MachineProgram(tuple(states) + ("h",), "s0", "h", BITS, "0", space, tuple(rules), name="unary_increment")


def countdown(space: int = 4) -> MachineProgram:
    """Decrements an LSB-first binary counter until it wraps past zero.

    Each decrement borrows rightwards, then the head walks back to cell 0.
    Running time grows with the counter value, up to ~2^space passes.
    The decrement at cell 0 writes twice in a row, so the machine does not
    alternate writes and moves.
    """
    states = [f"d{i}" for i in range(space)] + [f"c{i}" for i in range(space - 1)]
    states += [f"r{i}" for i in range(1, space)] + ["h"]
    rules = []
    for i in range(space):
        rules.append(write(f"d{i}", "1", "0", "d0" if i == 0 else f"r{i}"))
        rules.append(write(f"d{i}", "0", "1", "h" if i == space - 1 else f"c{i}"))
    for i in range(space - 1):
        rules.append(move(f"c{i}", +1, f"d{i + 1}"))
    for i in range(1, space):
        rules.append(move(f"r{i}", -1, "d0" if i == 1 else f"r{i - 1}"))
    return MachineProgram(tuple(states), "d0", "h", BITS, "0", space, tuple(rules), name="countdown")


def shuttle(space: int = 4, passes: int = 2) -> MachineProgram:
    """Walks right to the last cell and back ``passes`` times, then halts.

    Strictly alternating: every move is followed by a write of the scanned
    symbol's complement, so each visited cell is toggled.
    """
    states, rules = [], []
    positions = []
    for p in range(passes):
        positions += list(range(space)) if p % 2 == 0 else list(range(space - 1, -1, -1))[:]
    # collapse repeated turning cells so every move actually changes the head
    path = [positions[0]]
    for pos in positions[1:]:
        if pos != path[-1]:
            path.append(pos)
    for j, pos in enumerate(path):
        w, mv = f"w{j}", f"v{j}"
        states.append(w)
        if j == len(path) - 1:
            rules += [write(w, "0", "1", "h"), write(w, "1", "0", "h")]
            continue
        states.append(mv)
        rules += [write(w, "0", "1", mv), write(w, "1", "0", mv)]
        rules.append(move(mv, path[j + 1] - pos, f"w{j + 1}"))
    return MachineProgram(tuple(states) + ("h",), "w0", "h", BITS, "0", space, tuple(rules), name="shuttle")


def busy_loop(space: int = 4) -> MachineProgram:
    """Three states: clears the leading run of 1s one cell per loop turn.

    One spare cell past ``space`` keeps a 0 ahead of the head, so the loop
    always halts before the right marker.
    """
    rules = (write("a", "1", "0", "b"), write("a", "0", "0", "h"), move("b", +1, "a"))
    return MachineProgram(("a", "b", "h"), "a", "h", BITS, "0", space + 1, rules, name="busy_loop")


def eraser(space: int = 8, passes: int = 4) -> MachineProgram:
    """Sweeps the tape ``passes`` times writing 0 everywhere.

    Every write forgets a bit, so configurations have two predecessors and
    the configuration tree is bushy: the machine where bridging long
    segments really costs exponential time.
    """
    path = []
    for p in range(passes):
        for pos in (range(space) if p % 2 == 0 else range(space - 1, -1, -1)):
            if not path or path[-1] != pos:
                path.append(pos)
    states, rules = [], []
    for j, pos in enumerate(path):
        w, v = f"w{j}", f"v{j}"
        states.append(w)
        nxt = "h" if j == len(path) - 1 else v
        rules += [write(w, "0", "0", nxt), write(w, "1", "0", nxt)]
        if j < len(path) - 1:
            states.append(v)
            rules.append(move(v, path[j + 1] - pos, f"w{j + 1}"))
    return MachineProgram(tuple(states) + ("h",), "w0", "h", BITS, "0", space, tuple(rules), name="eraser")


def loop() -> MachineProgram:
    """Never halts: steps right and left forever."""
    rules = (move("a", +1, "b"), move("b", -1, "a"))
    return MachineProgram(("a", "b", "h"), "a", "h", BITS, "0", 2, rules, name="loop")


def fixture_corpus(space: int = 4) -> list[MachineProgram]:
    return [identity(space), zeroing(space), bitflip(space), unary_increment(space), busy_loop(space),
            countdown(space)]


def bit_strings(max_len: int, min_len: int = 0) -> list[str]:
    """All binary strings with length in [min_len, max_len], shortest first then lexicographic."""
    return ["".join(t) for n in range(min_len, max_len + 1) for t in product(BITS, repeat=n)]
