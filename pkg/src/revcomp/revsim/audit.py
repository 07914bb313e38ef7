"""Post-hoc reversibility audit of a recorded engine run.

(a) replay the op log backwards through the registered inverses, checking
    every intermediate state against the digest recorded on the way forward;
(b) check the recorded digests are pairwise distinct (no configuration of
    the simulator repeats, so the run is injective);
(c) total the bits destroyed by ops that have no inverse.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .machine import Runner


class AuditFailure(Exception):
    def __init__(self, step: int, op: str, message: str):
        super().__init__(f"step {step} ({op}): {message}")
        self.step = step
        self.op = op


@dataclass
class AuditReport:
    steps: int
    replay_ok: bool
    distinct_ok: bool
    erased_bits: int
    irreversible_ops: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.replay_ok and self.distinct_ok and self.erased_bits == 0

    def summary(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        return (f"{verdict}: {self.steps} micro-ops, inverse replay "
                f"{'ok' if self.replay_ok else 'FAILED'}, states "
                f"{'distinct' if self.distinct_ok else 'REPEAT'}, erased bits {self.erased_bits}")


def _runner(obj) -> Runner:
    return obj.runner if hasattr(obj, "runner") else obj


def reversibility_audit(run, *, strict: bool = False) -> AuditReport:
    """Audit a recorded :class:`Runner` (or anything with a ``.runner``).

    With ``strict`` the first failure raises :class:`AuditFailure`.
    """
    runner = _runner(run)
    if not runner.record:
        raise ValueError("run was not recorded; pass record=True to the engine")
    failures: list[str] = []

    def fail(step, op, msg):
        if strict:
            raise AuditFailure(step, op, msg)
        failures.append(str(AuditFailure(step, op, msg)))

    # (c) irreversible ops: erased bits are charged when they run
    irreversible = sum(1 for name, _ in runner.log if runner.registry[name].irreversible)

    # (a) first, locally in forward order so the earliest bad op is the one
    # reported: after each op, its inverse must restore the recorded
    # predecessor state and re-applying the op must restore the successor
    replay_ok = True
    fwd = Runner(runner.initial.copy(), runner.graph, registry=runner.registry)
    for i, (name, args) in enumerate(runner.log):
        op = runner.registry[name]
        try:
            fwd.do(name, *args)
            if op.irreversible:
                raise AuditFailure(i, name, "op has no registered inverse")
            fwd.do(op.inverse, *op.invert_args(args))
            if hash(fwd.state.snapshot()) != runner.digests[i]:
                raise AuditFailure(i, name, f"inverse {op.inverse} did not restore the previous state")
            fwd.do(name, *args)
            if hash(fwd.state.snapshot()) != runner.digests[i + 1]:
                raise AuditFailure(i, name, "re-execution diverged from the recorded run")
        except AuditFailure as exc:
            replay_ok = False
            fail(exc.step, exc.op, str(exc).split(": ", 1)[1])
            break
        except Exception as exc:  # noqa: BLE001
            replay_ok = False
            fail(i, name, f"inverse {op.inverse} failed: {exc}")
            break

    # then the whole log backwards from the final state
    state = runner.state.copy()
    undo = Runner(state, runner.graph, registry=runner.registry)
    for i in range(len(runner.log) - 1, -1, -1) if replay_ok else ():
        name, args = runner.log[i]
        op = runner.registry[name]
        if op.irreversible:
            replay_ok = False
            fail(i, name, "op has no registered inverse")
            break
        try:
            undo.do(op.inverse, *op.invert_args(args))
        except Exception as exc:  # noqa: BLE001 - any failure of the inverse is a finding
            replay_ok = False
            fail(i, name, f"inverse {op.inverse} failed: {exc}")
            break
        if hash(state.snapshot()) != runner.digests[i]:
            replay_ok = False
            fail(i, name, f"inverse {op.inverse} did not restore the previous state")
            break
    if replay_ok and state.snapshot() != runner.initial.snapshot():
        replay_ok = False
        fail(0, "-", "replay did not end at the initial state")

    # (b) injectivity
    distinct_ok = len(set(runner.digests)) == len(runner.digests)
    if not distinct_ok:
        seen: dict[int, int] = {}
        for i, d in enumerate(runner.digests):
            if d in seen:
                fail(i, runner.log[i - 1][0] if i else "-", f"state repeats step {seen[d]}")
                break
            seen[d] = i

    return AuditReport(len(runner.log), replay_ok, distinct_ok, runner.erased_bits,
                       irreversible, failures)
