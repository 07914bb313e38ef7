"""Reversible pebble game on the linear list 1..T_G.

Node 0 carries a permanent pebble.  A pebble may be placed on or removed
from node i only while node i-1 is pebbled.  The m-erasure variant adds up
to m rule-free removals from nodes i > 1.

Sets of occupied nodes are stored as bitmasks (bit i <-> node i) inside the
search routines; the public types use frozensets.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, NamedTuple

PLACE, REMOVE, ERASE = "P", "R", "E"
_KIND_ORDER = {PLACE: 0, REMOVE: 1, ERASE: 2}

MAX_BFS_PEBBLES = 5
MAX_BFS_BOARD = 40
MAX_SEARCH_PEBBLES = 8
MAX_NUMBERING_PEBBLES = 16


class PebbleError(Exception):
    pass


class IllegalMove(PebbleError):
    def __init__(self, index: int | None, reason: str):
        where = "" if index is None else f"move {index}: "
        super().__init__(where + reason)
        self.index = index
        self.reason = reason


class ResourceLimit(PebbleError):
    """A search would exceed its state-space guard."""


class PebbleMove(NamedTuple):
    kind: str
    node: int

    def sort_key(self):
        return (_KIND_ORDER[self.kind], self.node)

    def __str__(self):
        return f"{self.kind} {self.node}"


def Place(i: int) -> PebbleMove:
    return PebbleMove(PLACE, i)


def Remove(i: int) -> PebbleMove:
    return PebbleMove(REMOVE, i)


def Erase(i: int) -> PebbleMove:
    return PebbleMove(ERASE, i)


@dataclass(frozen=True)
class PebbleState:
    board: int
    occupied: frozenset[int]
    pebbles: int

    def __post_init__(self):
        object.__setattr__(self, "occupied", frozenset(self.occupied))
        if any(not 1 <= i <= self.board for i in self.occupied):
            raise ValueError("occupied nodes must lie in 1..board")
        if len(self.occupied) > self.pebbles:
            raise ValueError("more placed pebbles than the budget allows")

    @classmethod
    def empty(cls, board: int, pebbles: int) -> "PebbleState":
        return cls(board, frozenset(), pebbles)

    @property
    def free(self) -> int:
        return self.pebbles - len(self.occupied)

    def pebbled(self, i: int) -> bool:
        return i == 0 or i in self.occupied


@dataclass
class GameLedger:
    moves_used: int = 0
    peak_pebbles: int = 0
    erasures_used: int = 0
    max_node_pebbled: int = 0

    @property
    def peak_with_fixed(self) -> int:
        """Peak count including the permanent pebble on node 0."""
        return self.peak_pebbles + 1


@dataclass
class Strategy:
    moves: list[PebbleMove] = field(default_factory=list)
    pebbles: int = 0
    erasures: int = 0
    board: int = 0

    def __len__(self) -> int:
        return len(self.moves)

    def __iter__(self):
        return iter(self.moves)


# ---------------------------------------------------------------------------
# Rules
# ---------------------------------------------------------------------------

def legal_moves(state: PebbleState, erasures_left: int = 0) -> list[PebbleMove]:
    moves = []
    for i in range(1, state.board + 1):
        if not state.pebbled(i - 1):
            continue
        if i in state.occupied:
            moves.append(Remove(i))
        elif state.free > 0:
            moves.append(Place(i))
    if erasures_left > 0:
        moves += [Erase(i) for i in sorted(state.occupied) if i > 1]
    return sorted(moves, key=PebbleMove.sort_key)


def _check(state: PebbleState, move: PebbleMove, erasures_left: int) -> str | None:
    kind, i = move
    if not 1 <= i <= state.board:
        return f"node {i} outside board 1..{state.board}"
    if kind == ERASE:
        if erasures_left <= 0:
            return "erasure budget exhausted"
        if i <= 1:
            return "erasure only allowed on nodes > 1"
        if i not in state.occupied:
            return f"node {i} is not pebbled"
        return None
    if kind not in (PLACE, REMOVE):
        return f"unknown move kind {kind!r}"
    if not state.pebbled(i - 1):
        return f"node {i - 1} is not pebbled"
    if kind == PLACE:
        if i in state.occupied:
            return f"node {i} already pebbled"
        if state.free <= 0:
            return "no free pebble"
    elif i not in state.occupied:
        return f"node {i} is not pebbled"
    return None


def apply_move(
    state: PebbleState,
    move: PebbleMove,
    ledger: GameLedger | None = None,
    erasure_budget: int = 0,
) -> tuple[PebbleState, GameLedger]:
    ledger = GameLedger() if ledger is None else GameLedger(**vars(ledger))
    reason = _check(state, move, erasure_budget - ledger.erasures_used)
    if reason:
        raise IllegalMove(None, reason)
    kind, i = move
    occ = state.occupied | {i} if kind == PLACE else state.occupied - {i}
    new = PebbleState(state.board, occ, state.pebbles)
    ledger.moves_used += 1
    ledger.erasures_used += kind == ERASE
    ledger.peak_pebbles = max(ledger.peak_pebbles, len(occ))
    if kind == PLACE:
        ledger.max_node_pebbled = max(ledger.max_node_pebbled, i)
    return new, ledger


def validate_strategy(strategy: Strategy, board: int | None = None) -> GameLedger:
    """Replay from the empty board; raise IllegalMove at the first bad move."""
    board = strategy.board if board is None else board
    state = PebbleState.empty(board, strategy.pebbles)
    ledger = GameLedger()
    for idx, mv in enumerate(strategy.moves):
        try:
            state, ledger = apply_move(state, mv, ledger, strategy.erasures)
        except IllegalMove as exc:
            raise IllegalMove(idx, exc.reason) from None
    return ledger


def replay(strategy: Strategy, board: int | None = None, start: Iterable[int] = ()) -> PebbleState:
    """Final position after replaying ``strategy`` from ``start``."""
    board = strategy.board if board is None else board
    state = PebbleState(board, frozenset(start), strategy.pebbles)
    ledger = GameLedger()
    for idx, mv in enumerate(strategy.moves):
        try:
            state, ledger = apply_move(state, mv, ledger, strategy.erasures)
        except IllegalMove as exc:
            raise IllegalMove(idx, exc.reason) from None
    return state


# ---------------------------------------------------------------------------
# Strategies
# ---------------------------------------------------------------------------

def pebble_calls(s: int, t: int, n: int) -> list[tuple[int, int]]:
    """Bridge calls ``(s, t)`` made by the recursive procedure pebble(s, t, n).

    Pebble ids run over -1..k; -1 sits on node 0 for good.  There are 3**n
    calls and the sequence is a palindrome, so running it twice is a no-op.
    """
    if n == 0:
        return [(s, t)]
    r = n - 1
    inner = pebble_calls(s, r, n - 1)
    return inner + pebble_calls(r, t, n - 1) + inner


def _moves_from_calls(calls, offset=0):
    """Turn bridge calls into board moves, tracking where each pebble id sits."""
    where = {-1: offset}
    moves = []
    for s, t in calls:
        node = where[s] + 1
        if where.get(t) == node:
            moves.append(Remove(node))
            del where[t]
        elif t in where:
            raise PebbleError(f"pebble {t} is elsewhere when bridging from {s}")
        else:
            moves.append(Place(node))
            where[t] = node
    return moves


def pebble_schedule(k: int) -> Strategy:
    """Board moves of pebble(-1, k, k): toggles node 2**k using pebbles 0..k."""
    if k < 0:
        raise ValueError("k must be non-negative")
    moves = _moves_from_calls(pebble_calls(-1, k, k))
    return Strategy(moves, pebbles=k + 1, erasures=0, board=2 ** k)


def bennett_strategy(n: int) -> Strategy:
    """Optimal winning play with n + 1 pebbles on the board 1..2**(n+1) - 1.

    pebble(-1, n, n) first drops a pebble on node 2**n; from there the
    remaining n pebbles win the next 2**n - 1 nodes the same way.  Move
    count t(n) = 3 t(n-1) + 1 = (3**(n+1) - 1) / 2.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    moves: list[PebbleMove] = []
    base = 0
    for j in range(n, -1, -1):
        moves += [PebbleMove(mv.kind, mv.node + base) for mv in pebble_schedule(j).moves]
        base += 2 ** j
    return Strategy(moves, pebbles=n + 1, erasures=0, board=2 ** (n + 1) - 1)


def erasure_strategy(n: int, m: int) -> Strategy:
    """Win the board 1..m * 2**n with n + 2 pebbles and m - 1 erasures.

    Two springboard pebbles leapfrog 2**n nodes at a time; n helper pebbles
    bridge each gap via pebble(s, t, n) and are all recovered before the
    rear springboard is erased.
    """
    if n < 0 or m < 1:
        raise ValueError("need n >= 0 and m >= 1")
    if n == 0 and m >= 2:
        raise ValueError("n = 0 would erase node 1, which the erasure rule forbids")
    span = 2 ** n
    unit = pebble_schedule(n).moves
    moves: list[PebbleMove] = []
    for j in range(m):
        base = j * span
        moves += [PebbleMove(mv.kind, mv.node + base) for mv in unit]
        if j >= 1:
            moves.append(Erase(base))
    return Strategy(moves, pebbles=n + 2, erasures=m - 1, board=m * span)


# ---------------------------------------------------------------------------
# Exhaustive search (bitmask states)
# ---------------------------------------------------------------------------

def _guard_bfs(n: int, board: int) -> None:
    if n > MAX_BFS_PEBBLES or board > MAX_BFS_BOARD:
        raise ResourceLimit(
            f"BFS guard: n <= {MAX_BFS_PEBBLES}, board <= {MAX_BFS_BOARD} (got n={n}, board={board})"
        )


@lru_cache(maxsize=64)
def reachable_masks(n: int, board: int) -> frozenset[int]:
    """Every occupied-set bitmask reachable from empty with n pebbles, no erasures."""
    _guard_bfs(n, board)
    seen = {0}
    frontier = deque([0])
    while frontier:
        mask = frontier.popleft()
        placed = mask.bit_count()
        pebbled = mask | 1  # node 0 always pebbled
        for i in range(1, board + 1):
            if not (pebbled >> (i - 1)) & 1:
                continue
            bit = 1 << i
            if mask & bit:
                nxt = mask ^ bit
            elif placed < n:
                nxt = mask | bit
            else:
                continue
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return frozenset(seen)


def max_reachable_bfs(n: int, board: int | None = None) -> int:
    """Largest node ever pebbled with n pebbles (exhaustive BFS)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    board = 2 ** n if board is None else board
    _guard_bfs(n, board)
    best = 0
    for mask in reachable_masks(n, board):
        if mask:
            best = max(best, mask.bit_length() - 1)
    return best


def reachable_states(n: int, board: int) -> set[frozenset[int]]:
    return {mask_to_nodes(m) for m in reachable_masks(n, board)}


def mask_to_nodes(mask: int) -> frozenset[int]:
    return frozenset(i for i in range(1, mask.bit_length()) if (mask >> i) & 1)


def is_realizable(state: PebbleState) -> bool:
    """Can the placed pebbles be numbered f..n-1 with each pebble i having a
    higher-numbered pebble (node 0 counts as infinity) at most 2**i nodes to
    its left?  Exact search over numberings, highest number first.
    """
    nodes = tuple(sorted(state.occupied))
    if len(nodes) > MAX_NUMBERING_PEBBLES:
        raise ResourceLimit("too many placed pebbles for the numbering search")
    return _numbering_exists(nodes, state.pebbles)


@lru_cache(maxsize=None)
def _numbering_exists(nodes: tuple[int, ...], n: int) -> bool:
    p = len(nodes)
    full = (1 << p) - 1

    @lru_cache(maxsize=None)
    def extend(assigned: int) -> bool:
        # assigned pebbles carry numbers n-1 down to n-popcount(assigned)
        if assigned == full:
            return True
        number = n - 1 - assigned.bit_count()
        reach = 2 ** number
        for j in range(p):
            if assigned >> j & 1:
                continue
            pos = nodes[j]
            ok = pos <= reach  # node 0
            if not ok:
                for h in range(p):
                    if assigned >> h & 1 and 0 < pos - nodes[h] <= reach:
                        ok = True
                        break
            if ok and extend(assigned | 1 << j):
                return True
        return False

    return extend(0)


def _available(nodes: tuple[int, ...], free: int) -> list[int]:
    """Indices of placed pebbles removable in one big step with ``free`` free pebbles."""
    reach = 2 ** free
    out = []
    for j, pos in enumerate(nodes):
        if pos <= reach or any(0 < pos - other <= reach for other in nodes if other != pos):
            out.append(j)
    return out


def _guard_search(state: PebbleState) -> tuple[int, ...]:
    if len(state.occupied) > MAX_SEARCH_PEBBLES:
        raise ResourceLimit(f"solvability search limited to {MAX_SEARCH_PEBBLES} placed pebbles")
    return tuple(sorted(state.occupied))


@lru_cache(maxsize=None)
def _weak(nodes: tuple[int, ...], n: int) -> bool:
    if not nodes:
        return True
    free = n - len(nodes)
    return any(_weak(nodes[:j] + nodes[j + 1:], n) for j in _available(nodes, free))


@lru_cache(maxsize=None)
def _strong(nodes: tuple[int, ...], n: int) -> bool:
    if not nodes:
        return True
    avail = _available(nodes, n - len(nodes))
    if not avail:
        return False  # a maximal removal sequence that stops short
    return all(_strong(nodes[:j] + nodes[j + 1:], n) for j in avail)


def is_weakly_solvable(state: PebbleState) -> bool:
    return _weak(_guard_search(state), state.pebbles)


def is_strongly_solvable(state: PebbleState) -> bool:
    return _strong(_guard_search(state), state.pebbles)


# ---------------------------------------------------------------------------
# Strategy files
# ---------------------------------------------------------------------------

def dump_strategy(strategy: Strategy) -> str:
    lines = [f"pebbles {strategy.pebbles}", f"erasures {strategy.erasures}", f"board {strategy.board}"]
    lines += [str(mv) for mv in strategy.moves]
    return "\n".join(lines) + "\n"


def parse_strategy(text: str) -> Strategy:
    header = {}
    moves = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected two fields, got {line!r}")
        key, val = parts
        try:
            num = int(val)
        except ValueError:
            raise ValueError(f"line {lineno}: {val!r} is not an integer") from None
        if key in (PLACE, REMOVE, ERASE):
            moves.append(PebbleMove(key, num))
        elif key in ("pebbles", "erasures", "board"):
            header[key] = num
        else:
            raise ValueError(f"line {lineno}: unknown record {key!r}")
    missing = {"pebbles", "erasures", "board"} - header.keys()
    if missing:
        raise ValueError(f"missing header fields: {sorted(missing)}")
    return Strategy(moves, **header)
