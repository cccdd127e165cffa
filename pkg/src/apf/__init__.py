"""Pattern formation for oblivious robots on grids and lines.

Library layout:

    geometry   grid primitives, corner strings, symmetry, frame election
    line       the line formation algorithm
    grid       the seven-phase grid formation algorithm
    engine     asynchronous discrete-event simulator
    policies   schedulers, from lockstep to stale-snapshot adversaries
    verify     trace checks: safety, space/move envelopes, phase order
    scenario   scenario records, admissibility, generation
    traceio    line-delimited trace files
    runner     single runs and campaigns
    service    local session server for the interactive console
    cli        command line front end
"""

from .geometry import (
    BinaryLexString,
    BoundingRect,
    Configuration,
    CoordinateFrame,
    Election,
    ElectionError,
    GeometryError,
    GridIsometry,
    SymmetryClass,
    bounding_rect,
    candidate_strings,
    classify_symmetry,
    corner_string,
    elect_frame,
    patterns_equivalent,
)
from .grid import (
    ConditionVector,
    EmbeddedTarget,
    GridDecider,
    GuardError,
    MoveDecision,
    PathError,
    Phase,
    PhaseVRefs,
    SnakePath,
    analyze_still,
    build_snake_path,
    decide_move,
    embed_target_grid,
    eval_conditions,
    infer_phase,
    phase5_reference_points,
    rearrange_decide,
)
from .line import (
    LineConfiguration,
    LineDecider,
    LineError,
    LineMove,
    LineTargetEmbedding,
    apf_line_decide,
    embed_target_line,
    line_elect,
)
from .engine import Engine, RunResult, SimViolation, default_event_limit
from .policies import POLICIES, make_policy
from .runner import RunOutcome, campaign, generate_scenarios, run_one
from .scenario import Scenario, ScenarioError, generate_scenario, load_scenario, parse_scenario
from .verify import (
    MetricsReport,
    ViolationReport,
    brute_force_symmetry,
    check_guards,
    check_legality,
    check_moves,
    check_phase_digraph,
    check_space,
    compute_metrics,
    verify_all,
)

__version__ = "0.1.0"
