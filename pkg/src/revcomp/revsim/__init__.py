from .alternating import AlternatingProgram, convert_to_alternating, is_alternating, require_alternating
from .audit import AuditFailure, AuditReport, reversibility_audit
from .codec import ConfigCodec, ConfigGraph
from .engines import (
    ENGINES,
    EngineRun,
    SimLedger,
    bridge,
    simulate_bennett73,
    simulate_hybrid,
    simulate_lmt,
    simulate_unknown_T,
    traverse_configuration_tree,
)
from .machine import (
    REGISTRY,
    FreeSource,
    MicroOp,
    NotAlternating,
    ParameterError,
    Runner,
    SimError,
    SimMachineState,
    Timeout,
    TraversalBudgetExceeded,
)
