"""Well-formedness rules for state chart models (B01-B11)."""

from __future__ import annotations

from collections import Counter, defaultdict

from ..graph import co_reachable, reachable
from ..models import PERSPECTIVE_STATECHART, StateChartModel, StateKind
from .base import Diagnostic, Rule, RuleContext, RuleLevel, Severity


def _diag(ctx, rule, elements, message):
    return Diagnostic(rule, ctx.ref, elements, Severity.ERROR, message)


def _edges(model: StateChartModel):
    return [(t.source, t.target) for t in model.transitions]


def _kind_ids(model: StateChartModel, kind: StateKind) -> list[str]:
    return [s.id for s in model.states if s.kind is kind]


def _b01(ctx: RuleContext):
    initials = _kind_ids(ctx.model, StateKind.INITIAL)
    if len(initials) == 1:
        return []
    if not initials:
        return [_diag(ctx, "B01", (), "state chart has no initial state")]
    return [
        _diag(
            ctx,
            "B01",
            tuple(sorted(initials)),
            f"state chart has {len(initials)} initial states, needs exactly one",
        )
    ]


def _b02(ctx: RuleContext):
    counts = Counter(s.id for s in ctx.model.states)
    return [
        _diag(ctx, "B02", (state_id,), f"state id '{state_id}' is declared {n} times")
        for state_id, n in sorted(counts.items())
        if n > 1
    ]


def _b03(ctx: RuleContext):
    model: StateChartModel = ctx.model
    start = set(_kind_ids(model, StateKind.INITIAL))
    reach = reachable(_edges(model), start)
    return [
        _diag(ctx, "B03", (s.id,), f"state '{s.id}' is not reachable from the initial state")
        for s in model.states
        if s.id not in reach
    ]


def _b04(ctx: RuleContext):
    model: StateChartModel = ctx.model
    outgoing = Counter(t.source for t in model.transitions)
    out = []
    seen: set[str] = set()
    for state in model.states:
        if state.kind is StateKind.FINAL or state.id in seen:
            continue
        seen.add(state.id)
        if outgoing[state.id] == 0:
            out.append(
                _diag(
                    ctx,
                    "B04",
                    (state.id,),
                    f"state '{state.id}' has no outgoing transition (deadlock)",
                )
            )
    return out


def _b05(ctx: RuleContext):
    model: StateChartModel = ctx.model
    ids = {s.id for s in model.states}
    out = []
    for tr in model.transitions:
        missing = [e for e in (tr.source, tr.target) if e not in ids]
        if missing:
            out.append(
                _diag(
                    ctx,
                    "B05",
                    (tr.id,),
                    f"transition '{tr.id}' references missing state(s) "
                    + ", ".join(f"'{m}'" for m in missing),
                )
            )
    return out


def _b05_expand(ctx: RuleContext, scope: frozenset) -> set:
    model: StateChartModel = ctx.model
    return {
        t.id for t in model.transitions if t.source in scope or t.target in scope
    }


def _b06(ctx: RuleContext):
    outgoing = Counter(t.source for t in ctx.model.transitions)
    out = []
    seen: set[str] = set()
    for state in ctx.model.states:
        if state.kind is not StateKind.FINAL or state.id in seen:
            continue
        seen.add(state.id)
        if outgoing[state.id] > 0:
            out.append(
                _diag(
                    ctx,
                    "B06",
                    (state.id,),
                    f"final state '{state.id}' has outgoing transitions",
                )
            )
    return out


def _b07(ctx: RuleContext):
    incoming = Counter(t.target for t in ctx.model.transitions)
    out = []
    seen: set[str] = set()
    for state in ctx.model.states:
        if state.kind is not StateKind.INITIAL or state.id in seen:
            continue
        seen.add(state.id)
        if incoming[state.id] > 0:
            out.append(
                _diag(
                    ctx,
                    "B07",
                    (state.id,),
                    f"initial state '{state.id}' has incoming transitions",
                )
            )
    return out


def _b08(ctx: RuleContext):
    groups: dict[tuple, list[str]] = defaultdict(list)
    for t in ctx.model.transitions:
        groups[(t.source, t.target, t.event, t.guard)].append(t.id)
    out = []
    for (source, target, event, guard), ids in sorted(groups.items(), key=lambda kv: kv[1]):
        if len(ids) > 1:
            out.append(
                _diag(
                    ctx,
                    "B08",
                    tuple(sorted(ids)),
                    f"duplicate transitions from '{source}' to '{target}' "
                    f"(event={event!r}, guard={guard!r})",
                )
            )
    return out


def _b09(ctx: RuleContext):
    groups: dict[tuple, list] = defaultdict(list)
    for t in ctx.model.transitions:
        groups[(t.source, t.event, t.guard)].append(t)
    out = []
    for (source, event, guard), transitions in sorted(
        groups.items(), key=lambda kv: sorted(t.id for t in kv[1])
    ):
        targets = {t.target for t in transitions}
        if len(transitions) > 1 and len(targets) > 1:
            out.append(
                _diag(
                    ctx,
                    "B09",
                    tuple(sorted(t.id for t in transitions)),
                    f"state '{source}' has competing transitions on event {event!r} "
                    f"with guard {guard!r}",
                )
            )
    return out


def _b10(ctx: RuleContext):
    if ctx.model.states and all(
        s.kind is StateKind.INITIAL for s in ctx.model.states
    ):
        return [_diag(ctx, "B10", (), "state chart has no non-initial state")]
    if not ctx.model.states:
        return [_diag(ctx, "B10", (), "state chart has no states")]
    return []


def _b11(ctx: RuleContext):
    model: StateChartModel = ctx.model
    finals = set(_kind_ids(model, StateKind.FINAL))
    if not finals:
        return []
    reach = co_reachable(_edges(model), finals)
    return [
        _diag(ctx, "B11", (s.id,), f"state '{s.id}' cannot reach any final state")
        for s in model.states
        if s.id not in reach
    ]


def behavior_rules() -> list[Rule]:
    def rule(rule_id, description, check, scopable=False, expand=None):
        return Rule(
            id=rule_id,
            level=RuleLevel.INTRA,
            perspective=PERSPECTIVE_STATECHART,
            description=description,
            severity=Severity.ERROR,
            scopable=scopable,
            check=check,
            expand=expand,
        )

    return [
        rule("B01", "exactly one initial state exists", _b01),
        rule("B02", "state ids are unique", _b02, scopable=True),
        rule("B03", "all states are reachable from the initial state", _b03),
        rule(
            "B04",
            "every non-final state has at least one outgoing transition",
            _b04,
            scopable=True,
        ),
        rule(
            "B05",
            "transition endpoints resolve to declared states",
            _b05,
            scopable=True,
            expand=_b05_expand,
        ),
        rule("B06", "final states have no outgoing transitions", _b06, scopable=True),
        rule("B07", "the initial state has no incoming transitions", _b07, scopable=True),
        rule(
            "B08",
            "no duplicate transitions (same source, target, event and guard)",
            _b08,
            scopable=True,
        ),
        rule(
            "B09",
            "no state has two out-transitions with identical event and guard",
            _b09,
            scopable=True,
        ),
        rule("B10", "at least one non-initial state exists", _b10),
        rule(
            "B11",
            "with a final state present, every state can reach some final state",
            _b11,
        ),
    ]
