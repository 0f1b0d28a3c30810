"""Program and formula syntax with execution over timed, labelled traces.

Programs are built from attribute assignments, state tests, atomic tick
actions, sequencing, binary choice and bounded iteration.  Tests and
assignments are instantaneous; only a tick advances time, appending one
state and one action label to the trace.  Nondeterminism (choice and
iteration length) is resolved by a seeded generator with backtracking,
so one canonical trace exists per seed while the full set of runs stays
available through enumeration.

A modal formula ``Diamond(p, f)`` holds when some run of ``p`` within a
tick budget ends in a state satisfying ``f``.  Budget exhaustion is not
an error: the result is reported false with an ``undetermined`` flag.
Connectives treat undetermined subresults with Kleene three-valued
semantics so a determined false cannot be masked.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Iterator, Union

from . import kinematics
from .config import SceneConfig
from .errors import (
    DimensionMismatchError,
    ExplosionGuard,
    IncompatiblePathError,
    NoSuccessfulRun,
)
from .kinematics import Rel, Vec3, WorldState, contact_relation, surface_distance
from .lexicon import FLOOR_ID, Lexicon, PathKind, Shape, VerbClass
from .parser import EventFrame
from .rng import SplitMix64
from .scene import ground_object_id, sample_underspecified

# Tolerance for "the new value differs from the old" in directed assignment.
ASSIGN_TOL = 1e-9

DEFAULT_NODE_CAP = 10**6

Value = Union[float, Vec3]


# -- attribute and term syntax -------------------------------------------------

ATTR_NAMES = ("loc", "rot", "vel")


@dataclass(frozen=True)
class Attr:
    obj: str
    name: str

    def __post_init__(self) -> None:
        if self.name not in ATTR_NAMES:
            raise ValueError(f"unknown attribute {self.name!r}")


@dataclass(frozen=True)
class Const:
    value: Value


@dataclass(frozen=True)
class AttrTerm:
    attr: Attr


@dataclass(frozen=True)
class Add:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Sub:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Scale:
    factor: float
    term: "Term"


Term = Union[Const, AttrTerm, Add, Sub, Scale]


def _is_vec(v: Value) -> bool:
    return isinstance(v, tuple)


def eval_term(term: Term, state: WorldState) -> Value:
    if isinstance(term, Const):
        return term.value
    if isinstance(term, AttrTerm):
        body = state.body(term.attr.obj)
        if term.attr.name == "loc":
            return body.position
        if term.attr.name == "rot":
            return body.rotation
        return body.velocity
    if isinstance(term, (Add, Sub)):
        left = eval_term(term.left, state)
        right = eval_term(term.right, state)
        if _is_vec(left) != _is_vec(right):
            raise DimensionMismatchError("cannot mix scalar and vector operands")
        sign = 1.0 if isinstance(term, Add) else -1.0
        if _is_vec(left):
            return tuple(l + sign * r for l, r in zip(left, right))  # type: ignore[return-value]
        return left + sign * right
    if isinstance(term, Scale):
        value = eval_term(term.term, state)
        if _is_vec(value):
            return kinematics.vscale(value, term.factor)
        return term.factor * value
    raise TypeError(f"not a term: {term!r}")


# -- formula syntax -------------------------------------------------------------


@dataclass(frozen=True)
class EC:
    a: str
    b: str


@dataclass(frozen=True)
class DC:
    a: str
    b: str


@dataclass(frozen=True)
class At:
    """Locative contact: the surfaces of a and b touch or are closer."""

    a: str
    b: str


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term
    tol: float

    def __post_init__(self) -> None:
        if self.tol <= 0:
            raise ValueError("tolerance must be strictly positive")


@dataclass(frozen=True)
class Leq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    sub: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Diamond:
    program: "Program"
    formula: "Formula"


Formula = Union[EC, DC, At, Eq, Leq, Not, And, Or, Diamond]


def truth() -> Formula:
    """A formula that holds in every state."""
    return Eq(Const(0.0), Const(0.0), 1.0)


def contains_diamond(f: Formula) -> bool:
    if isinstance(f, Diamond):
        return True
    if isinstance(f, Not):
        return contains_diamond(f.sub)
    if isinstance(f, (And, Or)):
        return contains_diamond(f.left) or contains_diamond(f.right)
    return False


@dataclass(frozen=True)
class EvalResult:
    value: bool
    undetermined: bool = False

    def __bool__(self) -> bool:
        return self.value


# -- program syntax --------------------------------------------------------------


@dataclass(frozen=True)
class Assign:
    attr: Attr
    term: Term


@dataclass(frozen=True)
class DirectedAssign:
    """Assignment requiring the new value to differ from the old one."""

    attr: Attr
    term: Term


@dataclass(frozen=True)
class Test:
    formula: Formula

    __test__ = False  # an AST node, not a test-framework class


@dataclass(frozen=True)
class Tick:
    action: str
    theme: str


@dataclass(frozen=True)
class Seq:
    first: "Program"
    second: "Program"


@dataclass(frozen=True)
class Choice:
    left: "Program"
    right: "Program"


@dataclass(frozen=True)
class Star:
    body: "Program"
    bound: int

    def __post_init__(self) -> None:
        if self.bound < 0:
            raise ValueError("iteration bound must be nonnegative")


Program = Union[Assign, DirectedAssign, Test, Tick, Seq, Choice, Star]


# -- traces -----------------------------------------------------------------------


@dataclass(frozen=True)
class Trace:
    """States s0..sn with tick labels a1..an and uniform instants."""

    states: tuple[WorldState, ...]
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.states) != len(self.labels) + 1:
            raise ValueError("a trace has exactly one more state than labels")

    @property
    def times(self) -> tuple[float, ...]:
        return tuple(s.time for s in self.states)

    @property
    def tick_count(self) -> int:
        return len(self.labels)

    @property
    def final(self) -> WorldState:
        return self.states[-1]

    def interval(self, i: int) -> tuple[float, float]:
        """Half-open time interval covered by transition i (1-based state index)."""
        return (self.states[i - 1].time, self.states[i].time)

    def key(self) -> tuple:
        return (
            self.labels,
            tuple(
                (
                    s.tick_index,
                    tuple(
                        (b.id, b.position, b.rotation, b.velocity)
                        for b in s.bodies.values()
                    ),
                )
                for s in self.states
            ),
        )


# -- attribute update ---------------------------------------------------------------


def _set_attr(state: WorldState, attr: Attr, value: Value) -> WorldState:
    body = state.body(attr.obj)
    if attr.name == "rot":
        if _is_vec(value):
            raise DimensionMismatchError("rotation takes a scalar")
        return state.with_body(replace(body, rotation=float(value)))
    if not _is_vec(value) or len(value) != 3:
        raise DimensionMismatchError(f"{attr.name} takes a 3-vector")
    if attr.name == "loc":
        moved = state.with_body(replace(body, position=value))
        return kinematics.refresh_contacts(moved)
    return state.with_body(replace(body, velocity=value))


def _values_equal(a: Value, b: Value, tol: float) -> bool:
    if _is_vec(a) != _is_vec(b):
        raise DimensionMismatchError("cannot compare scalar with vector")
    if _is_vec(a):
        return kinematics.vnorm(kinematics.vsub(a, b)) <= tol
    return abs(a - b) <= tol


# -- three-valued formula evaluation --------------------------------------------------

_T, _F, _U = True, False, None


def _eval3(f: Formula, state: WorldState, budget: int, node_cap: int):
    eps = state.cfg.contact_eps
    if isinstance(f, EC):
        return contact_relation(state.body(f.a), state.body(f.b), eps) is Rel.EC
    if isinstance(f, DC):
        return contact_relation(state.body(f.a), state.body(f.b), eps) is Rel.DC
    if isinstance(f, At):
        return surface_distance(state.body(f.a), state.body(f.b)) <= eps
    if isinstance(f, Eq):
        return _values_equal(eval_term(f.left, state), eval_term(f.right, state), f.tol)
    if isinstance(f, Leq):
        left = eval_term(f.left, state)
        right = eval_term(f.right, state)
        if _is_vec(left) or _is_vec(right):
            raise DimensionMismatchError("ordering is defined on scalars only")
        return left <= right
    if isinstance(f, Not):
        sub = _eval3(f.sub, state, budget, node_cap)
        return _U if sub is _U else (not sub)
    if isinstance(f, And):
        left = _eval3(f.left, state, budget, node_cap)
        if left is _F:
            return _F
        right = _eval3(f.right, state, budget, node_cap)
        if right is _F:
            return _F
        return _U if (left is _U or right is _U) else _T
    if isinstance(f, Or):
        left = _eval3(f.left, state, budget, node_cap)
        if left is _T:
            return _T
        right = _eval3(f.right, state, budget, node_cap)
        if right is _T:
            return _T
        return _U if (left is _U or right is _U) else _F
    if isinstance(f, Diamond):
        return _eval_diamond(f, state, budget, node_cap)
    raise TypeError(f"not a formula: {f!r}")


def _eval_diamond(f: Diamond, state: WorldState, budget: int, node_cap: int):
    def accept(terminal: WorldState, remaining: int):
        return _eval3(f.formula, terminal, remaining, node_cap)

    try:
        outcome = _search(
            f.program, state, budget,
            rng=None, want_all=False, accept=accept, node_cap=node_cap,
        )
    except ExplosionGuard:
        return _U  # search cut short: conservatively undetermined
    if outcome.traces:
        return _T
    if outcome.budget_pruned or outcome.accept_unknown:
        return _U
    return _F


def eval_formula(
    f: Formula,
    state: WorldState,
    budget: int | None = None,
    node_cap: int = DEFAULT_NODE_CAP,
) -> EvalResult:
    """Evaluate a formula in one state; modal subformulas get a tick budget."""
    if budget is None:
        budget = state.cfg.max_frames
    tv = _eval3(f, state, budget, node_cap)
    if tv is _U:
        return EvalResult(False, undetermined=True)
    return EvalResult(bool(tv))


# -- the execution machine --------------------------------------------------------------

# A continuation is a linked list of program nodes: None | (node, rest).
Cont = Union[None, tuple]


@dataclass(frozen=True)
class _Run:
    cont: Cont
    past: tuple[WorldState, ...]
    labels: tuple[str, ...]
    cur: WorldState
    ticks: int


@dataclass
class _Outcome:
    traces: list[Trace]
    budget_pruned: bool = False
    accept_unknown: bool = False
    failure_ticks: int = -1
    failure_detail: str = "no run attempted"


def _describe_failure(node, reason: str) -> str:
    from .progtext import format_program  # local import: progtext depends on this module

    return f"{reason}: {format_program(node)}"


def _advance(run: _Run, budget: int, node_cap: int):
    """Run the deterministic prefix of a continuation.

    Returns ('done', run, None), ('branch', [runs...], None) with the
    alternatives in left-biased order, or ('fail', detail, (pruned, ticks)).
    """
    cont, past, labels, cur, ticks = run.cont, run.past, run.labels, run.cur, run.ticks
    while True:
        if cont is None:
            return ("done", _Run(None, past, labels, cur, ticks), None)
        node, rest = cont
        if isinstance(node, Seq):
            cont = (node.first, (node.second, rest))
        elif isinstance(node, Test):
            tv = _eval3(node.formula, cur, budget - ticks, node_cap)
            if tv is _T:
                cont = rest
            else:
                detail = _describe_failure(node, "test failed")
                return ("fail", detail, (tv is _U, ticks))
        elif isinstance(node, (Assign, DirectedAssign)):
            value = eval_term(node.term, cur)
            if isinstance(node, DirectedAssign):
                old = eval_term(AttrTerm(node.attr), cur)
                if _values_equal(old, value, ASSIGN_TOL):
                    detail = _describe_failure(node, "directed assignment left the value unchanged")
                    return ("fail", detail, (False, ticks))
            cur = _set_attr(cur, node.attr, value)
            cont = rest
        elif isinstance(node, Tick):
            if ticks >= budget:
                detail = _describe_failure(node, "tick budget exhausted at")
                return ("fail", detail, (True, ticks))
            theme = cur.body(node.theme)
            new_state = kinematics.tick(cur, node.action, node.theme, theme.heading, cur.cfg)
            past = past + (cur,)
            labels = labels + (node.action,)
            cur = new_state
            ticks += 1
            cont = rest
        elif isinstance(node, Choice):
            alts = [
                _Run((node.left, rest), past, labels, cur, ticks),
                _Run((node.right, rest), past, labels, cur, ticks),
            ]
            return ("branch", alts, None)
        elif isinstance(node, Star):
            if node.bound <= 0:
                cont = rest
                continue
            stay = _Run(rest, past, labels, cur, ticks)
            again = _Run(
                (node.body, (Star(node.body, node.bound - 1), rest)),
                past, labels, cur, ticks,
            )
            return ("branch", [stay, again], None)
        else:
            raise TypeError(f"not a program: {node!r}")


def _search(
    program: Program,
    s0: WorldState,
    budget: int,
    *,
    rng: SplitMix64 | None,
    want_all: bool,
    accept: Callable | None,
    node_cap: int,
) -> _Outcome:
    """Depth-first search over the nondeterministic runs of a program.

    With an rng, each two-way branch is explored in seeded order and the
    search stops at the first fully successful run.  Without one, branch
    order is left-biased and (with want_all) every successful run is
    collected.  ``accept`` filters terminal states (used by the modal
    operator); it may return the unknown truth value.
    """
    out = _Outcome(traces=[])
    seen_keys: set = set()
    start = _Run((program, None), (), (), s0, 0)
    stack: list[Iterator[_Run]] = [iter([start])]
    nodes = 0
    while stack:
        run = next(stack[-1], None)
        if run is None:
            stack.pop()
            continue
        nodes += 1
        if nodes > node_cap:
            raise ExplosionGuard(nodes, node_cap)
        kind, payload, extra = _advance(run, budget, node_cap)
        if kind == "done":
            done: _Run = payload
            if accept is not None:
                tv = accept(done.cur, budget - done.ticks)
                if tv is _U:
                    out.accept_unknown = True
                    continue
                if tv is _F:
                    if done.ticks >= out.failure_ticks:
                        out.failure_ticks = done.ticks
                        out.failure_detail = "terminal state rejected"
                    continue
            trace = Trace(done.past + (done.cur,), done.labels)
            if want_all:
                key = trace.key()
                if key not in seen_keys:
                    seen_keys.add(key)
                    out.traces.append(trace)
            else:
                out.traces.append(trace)
                return out
        elif kind == "fail":
            pruned, fail_ticks = extra
            out.budget_pruned = out.budget_pruned or pruned
            if fail_ticks >= out.failure_ticks:
                out.failure_ticks = fail_ticks
                out.failure_detail = payload
        else:  # branch
            alts: list[_Run] = payload
            if rng is not None and len(alts) == 2 and rng.next_bit():
                alts = [alts[1], alts[0]]
            stack.append(iter(alts))
    return out


def execute(
    program: Program,
    s0: WorldState,
    rng: SplitMix64,
    budget: int | None = None,
) -> Trace:
    """Produce one successful trace, resolving nondeterminism from the rng.

    Backtracks through remaining alternatives in seeded order; raises
    NoSuccessfulRun carrying the deepest failure when every run fails.
    """
    if budget is None:
        budget = s0.cfg.max_frames
    if budget < 1:
        raise ValueError("budget must be at least 1")
    outcome = _search(
        program, s0, budget,
        rng=rng, want_all=False, accept=None, node_cap=DEFAULT_NODE_CAP * 10,
    )
    if outcome.traces:
        return outcome.traces[0]
    raise NoSuccessfulRun(f"after {max(outcome.failure_ticks, 0)} tick(s): {outcome.failure_detail}")


def enumerate_traces(
    program: Program,
    s0: WorldState,
    budget: int | None = None,
    node_cap: int = DEFAULT_NODE_CAP,
) -> list[Trace]:
    """All successful traces, shortest first, ties left-biased, no duplicates."""
    if budget is None:
        budget = s0.cfg.max_frames
    outcome = _search(
        program, s0, budget,
        rng=None, want_all=True, accept=None, node_cap=node_cap,
    )
    return sorted(outcome.traces, key=lambda t: t.tick_count)


# -- compiling event frames into programs ---------------------------------------------


def _chain(action: str, theme: str, n: int) -> Program:
    if n <= 0:
        return Test(truth())
    program: Program = Tick(action, theme)
    for _ in range(n - 1):
        program = Seq(Tick(action, theme), program)
    return program


def _goal_loop(action: str, theme: str, goal: Formula, bound: int) -> Program:
    # the while-loop idiom: iterate "not yet there; step" then require arrival
    loop = Star(Seq(Test(Not(goal)), Tick(action, theme)), bound)
    return Seq(loop, Test(goal))


def compile_event(frame: EventFrame, lex: Lexicon, cfg: SceneConfig) -> Program:
    """Compile a parsed sentence into its motion program.

    Manner and generic verbs expand to iterated ticks of their action:
    a goal path wraps the iteration in the while-loop idiom, a source
    path brackets it between an initial contact test and a final
    separation test, and a bare or direction-only sentence runs a
    seed-chosen number of ticks.  Path verbs do the same with generic
    motion plus their presupposition tests.
    """
    verb = frame.verb
    theme = frame.theme
    prep = frame.path.prep if frame.path else None
    if prep is not None and prep not in verb.allowed_preps:
        raise IncompatiblePathError(verb.lemma, prep)

    goal_formula = None
    if frame.path is not None:
        gid = ground_object_id(frame)
        if lex.lookup_noun(frame.path.ground).shape is Shape.PLANE:
            gid = FLOOR_ID
        goal_formula = At(theme, gid)

    duration = sample_underspecified(cfg, SplitMix64(cfg.seed)).duration_frames

    if verb.verb_class in (VerbClass.MANNER, VerbClass.GENERIC):
        action = verb.tick_action
        assert action is not None
        if prep in ("to", "at"):
            return _goal_loop(action, theme, goal_formula, cfg.max_frames)
        if prep == "from":
            return Seq(
                Test(goal_formula),
                Seq(_chain(action, theme, duration), Test(Not(goal_formula))),
            )
        return _chain(action, theme, duration)

    # path verbs ride on generic motion
    if verb.path_kind is PathKind.ARRIVE:
        if goal_formula is None:
            return _chain("move", theme, duration)
        return Seq(
            Test(Not(goal_formula)),
            _goal_loop("move", theme, goal_formula, cfg.max_frames),
        )
    if goal_formula is None:
        return _chain("move", theme, duration)
    return Seq(
        Test(goal_formula),
        Seq(_chain("move", theme, duration), Test(Not(goal_formula))),
    )
