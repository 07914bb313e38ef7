"""Resource accounting: predicted vs measured time/space of the reversible
simulations, a log-space fit of the hidden constants, the erasure/space
exchange table, and the configuration-counting lower-bound check."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field, fields
from statistics import median
from typing import Iterable, Sequence

import numpy as np

from .pebble import erasure_strategy, validate_strategy
from .revsim.engines import CONTROL_STATES, CSV_COLUMNS, EngineRun, SimLedger, simulate_hybrid

LOG3 = math.log(3)
LN2 = math.log(2)


class CalibrationError(ValueError):
    pass


class DuplicateState(AssertionError):
    def __init__(self, first, second):
        super().__init__(f"simulator state repeats: {first} and {second}")
        self.pair = (first, second)


@dataclass
class TradeoffPoint:
    k: int
    m: int
    T: int
    S: int
    T_prime: int
    S_prime: int
    T_pred: float = 0.0
    S_pred: float = 0.0
    erased_bits: int = 0

    def __post_init__(self):
        if self.T > 0 and self.m * 2 ** self.k < self.T:
            raise ValueError(f"m * 2^k = {self.m * 2 ** self.k} < T = {self.T}")

    @classmethod
    def from_ledger(cls, ledger: SimLedger) -> "TradeoffPoint":
        return cls(ledger.k, ledger.m, ledger.T, ledger.S, ledger.sim_steps,
                   ledger.peak_space, erased_bits=ledger.erased_bits)


@dataclass
class CalibratedModel:
    """T' = c1 * S * 3^k * 2^(c2 * m),  S' = S * (1 + c3 * k)."""

    c1: float
    c2: float
    c3: float
    time_rms: float = 0.0      # rms residual of log T'
    space_rms: float = 0.0     # rms residual of S'/S
    n_points: int = 0

    @property
    def positive(self) -> bool:
        return self.c1 > 0 and self.c2 > 0 and self.c3 > 0

    def report(self) -> str:
        note = "" if self.positive else "  (non-positive constant: the fit does not show the modelled tradeoff)"
        return (f"c1={self.c1:.4g} c2={self.c2:.4g} c3={self.c3:.4g} "
                f"rms(log T')={self.time_rms:.3g} rms(S'/S)={self.space_rms:.3g} "
                f"points={self.n_points}{note}")


def predict(model: CalibratedModel, T: int, S: int, k: int) -> tuple[float, float]:
    m = math.ceil(T / 2 ** k)
    t = model.c1 * S * 3 ** k * 2 ** (model.c2 * m)
    s = S * (1 + model.c3 * k)
    return t, s


def calibrate(points: Sequence[TradeoffPoint]) -> CalibratedModel:
    """Least-squares fit of the model constants in log space."""
    if len(points) < 4:
        raise CalibrationError(f"need at least 4 points, got {len(points)}")
    if len({p.k for p in points}) < 2:
        raise CalibrationError("need at least 2 distinct values of k")
    if len({p.S for p in points}) < 2:
        raise CalibrationError("need at least 2 distinct values of S")

    k = np.array([p.k for p in points], dtype=float)
    m = np.array([p.m for p in points], dtype=float)
    S = np.array([p.S for p in points], dtype=float)
    Tp = np.array([p.T_prime for p in points], dtype=float)
    Sp = np.array([p.S_prime for p in points], dtype=float)
    if np.any(Tp <= 0) or np.any(S <= 0):
        raise CalibrationError("T' and S must be positive")

    # log T' - log S - k log 3 = log c1 + c2 * m * ln 2
    y = np.log(Tp) - np.log(S) - k * LOG3
    A = np.column_stack([np.ones_like(m), m * LN2])
    if np.linalg.matrix_rank(A) < 2:
        raise CalibrationError("all points share one segment length m; c1 and c2 are not identifiable")
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    time_res = y - A @ coef

    # S'/S - 1 = c3 * k
    z = Sp / S - 1
    c3 = float(k @ z / (k @ k))
    space_res = z - c3 * k

    return CalibratedModel(
        c1=float(np.exp(coef[0])), c2=float(coef[1]), c3=c3,
        time_rms=float(np.sqrt(np.mean(time_res ** 2))),
        space_rms=float(np.sqrt(np.mean(space_res ** 2))),
        n_points=len(points),
    )


def with_predictions(model: CalibratedModel, points: Iterable[TradeoffPoint]) -> list[TradeoffPoint]:
    out = []
    for p in points:
        t, s = predict(model, p.T, p.S, p.k)
        out.append(TradeoffPoint(p.k, p.m, p.T, p.S, p.T_prime, p.S_prime, t, s, p.erased_bits))
    return out


def median_trend(points: Iterable[TradeoffPoint]) -> dict[int, tuple[float, float]]:
    """k -> (median T', median S')."""
    by_k: dict[int, list[TradeoffPoint]] = {}
    for p in points:
        by_k.setdefault(p.k, []).append(p)
    return {k: (median(p.T_prime for p in ps), median(p.S_prime for p in ps))
            for k, ps in sorted(by_k.items())}


def is_monotone(values: Sequence[float], increasing: bool) -> bool:
    pairs = zip(values, values[1:])
    return all(b >= a for a, b in pairs) if increasing else all(b <= a for a, b in pairs)


def k_range_for(T: int) -> range:
    return range(0, (math.ceil(math.log2(T)) if T > 1 else 0) + 1)


def sweep_points(program, inputs: Iterable[str], ks: Iterable[int] | None = None, **kw) -> list[TradeoffPoint]:
    """Hybrid runs for every (input, k); inputs in the given order, k ascending.

    ``ks=None`` sweeps the full admissible range 0..ceil(log2 T) per input.
    """
    points = []
    for x in inputs:
        T = simulate_hybrid(program, x, 0, **kw).ledger.T if ks is None else None
        for k in (k_range_for(T) if ks is None else ks):
            points.append(TradeoffPoint.from_ledger(simulate_hybrid(program, x, k, **kw).ledger))
    return points


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------

def points_from_csv(text: str) -> list[TradeoffPoint]:
    """Read the engine ledger CSV (header row, one run per line)."""
    rows = csv.DictReader(io.StringIO(text))
    missing = set(CSV_COLUMNS) - set(rows.fieldnames or ())
    if missing:
        raise ValueError(f"CSV lacks columns {sorted(missing)}")
    return [TradeoffPoint(int(r["k"]), int(r["m"]), int(r["T"]), int(r["S"]),
                          int(r["T_prime"]), int(r["S_prime"]),
                          erased_bits=int(r["erased_bits"])) for r in rows]


def points_to_csv(points: Iterable[TradeoffPoint]) -> str:
    names = [f.name for f in fields(TradeoffPoint)]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=names, lineterminator="\n")
    w.writeheader()
    for p in points:
        w.writerow(asdict(p))
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Erasure exchange
# ---------------------------------------------------------------------------

@dataclass
class ErasureCost:
    B: int
    S_prime: int
    S: int
    T: int
    T_prime: int

    @classmethod
    def from_ledger(cls, ledger: SimLedger) -> "ErasureCost":
        return cls(ledger.erased_bits, ledger.peak_space, ledger.S, ledger.T, ledger.sim_steps)


@dataclass
class ErasureRow:
    k: int
    pebbles: int
    erasures: int
    space: int
    erased_bits: int
    # replayed erasure_strategy(n-k-2, 2^(k+2)) when that strategy exists
    replay_erasures: int | None = None
    replay_peak: int | None = None
    replay_reach: int | None = None

    @property
    def consistent(self) -> bool | None:
        if self.replay_erasures is None:
            return None
        return self.replay_erasures == self.erasures and self.replay_peak <= self.pebbles


def erasure_tradeoff_table(n: int, k_max: int, S: int, replay: bool = True) -> list[ErasureRow]:
    """Pebbles saved against bits erased: n-k pebbles for 2^(k+2)-1 erasures.

    Row k=0 is the erasure-free baseline with n pebbles.
    """
    if not 1 <= k_max <= n:
        raise ValueError(f"need 1 <= k_max <= n, got k_max={k_max}, n={n}")
    rows = [ErasureRow(0, n, 0, n * S, 0)]
    for k in range(1, k_max + 1):
        e = 2 ** (k + 2) - 1
        row = ErasureRow(k, n - k, e, (n - k) * S, e * S)
        if replay and n - k - 2 >= 1:
            led = validate_strategy(erasure_strategy(n - k - 2, 2 ** (k + 2)))
            row.replay_erasures = led.erasures_used
            row.replay_peak = led.peak_pebbles
            row.replay_reach = led.max_node_pebbled
        rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# Lower bound
# ---------------------------------------------------------------------------

@dataclass
class EngineBound:
    engine: str
    runs: int
    T_avg: float
    S_prime: int
    space_floor: float          # n + log2 T_avg
    slack: float                # S' - (n + log2 T_avg): the empirical constant
    time_ok: bool               # T' >= T on every run
    q_prime: int
    counting_ok: bool           # q' 2^S' S' >= 2^n T on every run


@dataclass
class LowerBoundReport:
    n: int
    states_checked: int
    engines: list[EngineBound] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(e.time_ok and e.counting_ok for e in self.engines)

    def text(self) -> str:
        lines = [f"distinct simulator states: {self.states_checked} (PASS)"]
        for e in self.engines:
            lines.append(
                f"{e.engine}: S'={e.S_prime} vs n+log2 T_avg={e.space_floor:.2f} (slack {e.slack:+.2f}); "
                f"T'>=T {'PASS' if e.time_ok else 'FAIL'}; "
                f"q'2^S'S' >= 2^n T {'PASS' if e.counting_ok else 'FAIL'} (q'={e.q_prime})"
            )
        return "\n".join(lines)


def lower_bound_check(program, n: int, engine_runs: Sequence[EngineRun]) -> LowerBoundReport:
    """Counting-argument checks over recorded runs on all 2^n inputs of length n.

    Raises :class:`DuplicateState` if two (input, step) pairs of one engine
    share a simulator state.
    """
    if n > 6:
        raise ValueError("n <= 6 keeps the recorded state set small")
    by_engine: dict[str, list[EngineRun]] = {}
    for r in engine_runs:
        if not r.runner.record:
            raise ValueError("lower_bound_check needs recorded runs")
        key = f"hybrid k={r.ledger.k}" if r.ledger.engine == "hybrid" else r.ledger.engine
        by_engine.setdefault(key, []).append(r)

    checked = 0
    report = LowerBoundReport(n, 0)
    for name, runs in sorted(by_engine.items()):
        inputs = {r.pair[0] for r in runs}
        if len(inputs) != 2 ** n:
            raise ValueError(f"{name}: runs cover {len(inputs)} of {2 ** n} inputs")
        seen: dict[int, tuple[str, int]] = {}
        for r in runs:
            for step, d in enumerate(r.runner.digests):
                if d in seen:
                    raise DuplicateState(seen[d], (r.pair[0], step))
                seen[d] = (r.pair[0], step)
        checked += len(seen)
        T_avg = sum(r.ledger.T for r in runs) / len(runs)
        S_prime = max(r.ledger.peak_space for r in runs)
        floor = n + math.log2(T_avg) if T_avg > 0 else float(n)
        q = CONTROL_STATES[runs[0].ledger.engine]
        report.engines.append(EngineBound(
            engine=name, runs=len(runs), T_avg=T_avg, S_prime=S_prime,
            space_floor=floor, slack=S_prime - floor,
            time_ok=all(r.ledger.sim_steps >= r.ledger.T for r in runs),
            q_prime=q,
            counting_ok=all(q * 2 ** r.ledger.peak_space * r.ledger.peak_space >= 2 ** n * r.ledger.T
                            for r in runs),
        ))
    report.states_checked = checked
    return report
