"""Fixed-width binary encoding of configurations and a cached local view of
the configuration graph (successor / ordered predecessors)."""

from __future__ import annotations

from ..tmcore import (
    Configuration,
    MachineProgram,
    fire,
    predecessors,
)


def bits_for(count: int) -> int:
    """Bits needed to tell ``count`` values apart (at least 1)."""
    return max(1, (count - 1).bit_length())


class ConfigCodec:
    """``valid | state | head | tape`` packed into one int.

    The top ``valid`` bit is always 1 for an encoded configuration, so an
    all-zero section unambiguously means "free".
    """

    def __init__(self, program: MachineProgram):
        self.program = program
        self.state_index = {s: i for i, s in enumerate(program.states)}
        self.symbol_index = {a: i for i, a in enumerate(program.alphabet)}
        self.state_bits = bits_for(len(program.states))
        self.head_bits = bits_for(program.space)
        self.symbol_bits = bits_for(len(program.alphabet))
        self.tape_bits = program.space * self.symbol_bits
        self.width = 1 + self.state_bits + self.head_bits + self.tape_bits
        self._enc: dict[Configuration, int] = {}
        self._dec: dict[int, Configuration] = {}

    def encode(self, config: Configuration) -> int:
        code = self._enc.get(config)
        if code is None:
            code = 1
            code = (code << self.state_bits) | self.state_index[config.state]
            code = (code << self.head_bits) | config.head
            for sym in config.tape:
                code = (code << self.symbol_bits) | self.symbol_index[sym]
            self._enc[config] = code
            self._dec[code] = config
        return code

    def decode(self, code: int) -> Configuration:
        config = self._dec.get(code)
        if config is not None:
            return config
        if code >> (self.width - 1) != 1 or code >> self.width:
            raise ValueError(f"not a configuration encoding: {code:#x}")
        mask = (1 << self.symbol_bits) - 1
        tape = []
        c = code
        for _ in range(self.program.space):
            tape.append(self.program.alphabet[c & mask])
            c >>= self.symbol_bits
        head = c & ((1 << self.head_bits) - 1)
        c >>= self.head_bits
        state = self.program.states[c & ((1 << self.state_bits) - 1)]
        config = Configuration(state, tuple(reversed(tape)), head)
        self._dec[code] = config
        self._enc[config] = code
        return config

    def symbol_code(self, sym: str) -> int:
        return self.symbol_index[sym]

    def symbol(self, code: int) -> str:
        return self.program.alphabet[code]


class ConfigGraph:
    """Successor and canonical-order predecessors on encoded configurations."""

    def __init__(self, program: MachineProgram, codec: ConfigCodec | None = None):
        self.program = program
        self.codec = codec or ConfigCodec(program)
        self._succ: dict[int, tuple[int, int] | None] = {}
        self._preds: dict[int, tuple[int, ...]] = {}

    def fire(self, code: int) -> tuple[int, int] | None:
        """``(rule id, successor code)`` or ``None`` if halted."""
        if code not in self._succ:
            out = fire(self.codec.decode(code), self.program)
            self._succ[code] = None if out is None else (out[0], self.codec.encode(out[1]))
        return self._succ[code]

    def succ(self, code: int) -> int | None:
        out = self.fire(code)
        return None if out is None else out[1]

    def preds(self, code: int) -> tuple[int, ...]:
        if code not in self._preds:
            cfg = self.codec.decode(code)
            self._preds[code] = tuple(self.codec.encode(c) for _, c in predecessors(cfg, self.program))
        return self._preds[code]

    def is_halt(self, code: int) -> bool:
        return self.codec.decode(code).state == self.program.halt

    def degree_bound(self) -> int:
        """Upper bound on half-edges at any node: one out-edge plus one per rule."""
        return 1 + len(self.program.rules)
