"""Motion sentences to programs to deterministic, checkable simulations."""

from .config import SceneConfig, load_config
from .programs import (
    Assign,
    Attr,
    AttrTerm,
    Choice,
    Const,
    DC,
    Diamond,
    DirectedAssign,
    EC,
    Eq,
    EvalResult,
    At,
    Leq,
    Not,
    And,
    Or,
    Program,
    Seq,
    Star,
    Test,
    Tick,
    Trace,
    compile_event,
    enumerate_traces,
    eval_formula,
    execute,
    truth,
)
from .kinematics import (
    Body,
    Rel,
    WorldState,
    contact_relation,
    resolve_goal_contact,
    surface_distance,
    tick,
)
from .lexicon import (
    FloorContact,
    Lexicon,
    MannerProfile,
    NounEntry,
    PathKind,
    RotationCoupling,
    Shape,
    VerbClass,
    VerbEntry,
    builtin_lexicon,
    load_lexicon,
    serialize_lexicon,
)
from .parser import EventFrame, PathComponent, parse_sentence, parse_text, tokenize
from .rng import SplitMix64, stream_for
from .scene import (
    ResolvedParams,
    Scene,
    build_scene,
    probe_scene,
    sample_underspecified,
)
from .tracefile import TraceDocument, read_trace, write_trace
from .verify import (
    CheckOutcome,
    CheckResult,
    TraceMetrics,
    VerificationReport,
    check_formula_on_trace,
    trace_metrics,
    verify_trace,
)

__version__ = "0.1.0"
