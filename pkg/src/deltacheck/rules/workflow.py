"""Well-formedness rules for workflow models (W01-W22)."""

from __future__ import annotations

import math
from collections import Counter

from ..graph import co_reachable, reachable
from ..models import NodeKind, PERSPECTIVE_WORKFLOW, WorkflowModel
from .base import Diagnostic, Rule, RuleContext, RuleLevel, Severity

PROBABILITY_SUM_TOLERANCE = 1e-9


def _diag(ctx: RuleContext, rule: str, elements: tuple[str, ...], message: str):
    return Diagnostic(rule, ctx.ref, elements, Severity.ERROR, message)


def _nodes(ctx: RuleContext) -> tuple:
    model: WorkflowModel = ctx.model
    return model.nodes


def _in_degree(model: WorkflowModel) -> Counter:
    return Counter(t.target for t in model.transitions)


def _out_degree(model: WorkflowModel) -> Counter:
    return Counter(t.source for t in model.transitions)


def _edges(model: WorkflowModel):
    return [(t.source, t.target) for t in model.transitions]


def _w01(ctx: RuleContext):
    if not any(n.kind is NodeKind.INITIAL for n in _nodes(ctx)):
        return [_diag(ctx, "W01", (), "workflow has no initial node")]
    return []


def _w02(ctx: RuleContext):
    if not any(n.kind is NodeKind.FINAL for n in _nodes(ctx)):
        return [_diag(ctx, "W02", (), "workflow has no final node")]
    return []


def _w03(ctx: RuleContext):
    incoming = _in_degree(ctx.model)
    return [
        _diag(ctx, "W03", (n.id,), f"initial node '{n.id}' has incoming transitions")
        for n in _nodes(ctx)
        if n.kind is NodeKind.INITIAL and incoming[n.id] > 0
    ]


def _w04(ctx: RuleContext):
    outgoing = _out_degree(ctx.model)
    return [
        _diag(ctx, "W04", (n.id,), f"final node '{n.id}' has outgoing transitions")
        for n in _nodes(ctx)
        if n.kind is NodeKind.FINAL and outgoing[n.id] > 0
    ]


def _degree_rule(rule: str, kind: NodeKind, incoming: bool, minimum: int, exact: bool):
    direction = "incoming" if incoming else "outgoing"
    if exact:
        requirement = f"exactly {minimum} {direction} transition(s)"
    else:
        requirement = f"at least {minimum} {direction} transition(s)"

    def check(ctx: RuleContext):
        degrees = _in_degree(ctx.model) if incoming else _out_degree(ctx.model)
        out = []
        for node in _nodes(ctx):
            if node.kind is not kind:
                continue
            count = degrees[node.id]
            bad = count != minimum if exact else count < minimum
            if bad:
                out.append(
                    _diag(
                        ctx,
                        rule,
                        (node.id,),
                        f"{kind.value} '{node.id}' has {count} {direction} "
                        f"transition(s), needs {requirement}",
                    )
                )
        return out

    return check


def _w15(ctx: RuleContext):
    model: WorkflowModel = ctx.model
    start = {n.id for n in model.nodes if n.kind is NodeKind.INITIAL}
    reach = reachable(_edges(model), start)
    return [
        _diag(ctx, "W15", (n.id,), f"node '{n.id}' is not reachable from any initial node")
        for n in model.nodes
        if n.id not in reach
    ]


def _w16(ctx: RuleContext):
    model: WorkflowModel = ctx.model
    finals = {n.id for n in model.nodes if n.kind is NodeKind.FINAL}
    reach = co_reachable(_edges(model), finals)
    return [
        _diag(ctx, "W16", (n.id,), f"node '{n.id}' cannot reach any final node")
        for n in model.nodes
        if n.id not in reach
    ]


def _w17(ctx: RuleContext):
    model: WorkflowModel = ctx.model
    ids = {n.id for n in model.nodes}
    out = []
    for tr in model.transitions:
        missing = [e for e in (tr.source, tr.target) if e not in ids]
        if missing:
            out.append(
                _diag(
                    ctx,
                    "W17",
                    (tr.id,),
                    f"transition '{tr.id}' references missing node(s) "
                    + ", ".join(f"'{m}'" for m in missing),
                )
            )
    return out


def _w17_expand(ctx: RuleContext, scope: frozenset) -> set:
    model: WorkflowModel = ctx.model
    return {
        t.id for t in model.transitions if t.source in scope or t.target in scope
    }


def _w18(ctx: RuleContext):
    counts = Counter(n.id for n in _nodes(ctx))
    return [
        _diag(ctx, "W18", (node_id,), f"node id '{node_id}' is declared {n} times")
        for node_id, n in sorted(counts.items())
        if n > 1
    ]


def _w19(ctx: RuleContext):
    model: WorkflowModel = ctx.model
    decisions = {n.id for n in model.nodes if n.kind is NodeKind.DECISION}
    return [
        _diag(
            ctx,
            "W19",
            (t.id,),
            f"decision out-transition '{t.id}' carries neither guard nor probability",
        )
        for t in model.transitions
        if t.source in decisions and t.guard is None and t.probability is None
    ]


def _w19_expand(ctx: RuleContext, scope: frozenset) -> set:
    model: WorkflowModel = ctx.model
    return {t.id for t in model.transitions if t.source in scope}


def _w20(ctx: RuleContext):
    model: WorkflowModel = ctx.model
    out = []
    seen: set[str] = set()
    for node in model.nodes:
        if node.kind is not NodeKind.DECISION or node.id in seen:
            continue
        seen.add(node.id)
        probs = [
            t.probability
            for t in model.transitions
            if t.source == node.id and t.probability is not None
        ]
        if probs and abs(sum(probs) - 1.0) > PROBABILITY_SUM_TOLERANCE:
            out.append(
                _diag(
                    ctx,
                    "W20",
                    (node.id,),
                    f"probabilities on decision '{node.id}' sum to {sum(probs)!r}, not 1",
                )
            )
    return out


def _w21(ctx: RuleContext):
    model: WorkflowModel = ctx.model
    out = []
    for t in model.transitions:
        p = t.probability
        if p is not None and not (0.0 <= p <= 1.0 and math.isfinite(p)):
            out.append(
                _diag(
                    ctx,
                    "W21",
                    (t.id,),
                    f"transition '{t.id}' has probability {p!r} outside [0, 1]",
                )
            )
    return out


def _w22(ctx: RuleContext):
    out = []
    for node in _nodes(ctx):
        if node.kind is not NodeKind.TASK:
            continue
        for label, value in (("arrival", node.arrival_rate), ("service", node.service_rate)):
            if value is not None and not (value > 0 and math.isfinite(value)):
                out.append(
                    _diag(
                        ctx,
                        "W22",
                        (node.id,),
                        f"task '{node.id}' has non-positive or non-finite {label} rate {value!r}",
                    )
                )
    return out


def workflow_rules() -> list[Rule]:
    def rule(rule_id, description, check, scopable=False, expand=None):
        return Rule(
            id=rule_id,
            level=RuleLevel.INTRA,
            perspective=PERSPECTIVE_WORKFLOW,
            description=description,
            severity=Severity.ERROR,
            scopable=scopable,
            check=check,
            expand=expand,
        )

    return [
        rule("W01", "at least one initial node exists", _w01),
        rule("W02", "at least one final node exists", _w02),
        rule("W03", "initial nodes have no incoming transitions", _w03, scopable=True),
        rule("W04", "final nodes have no outgoing transitions", _w04, scopable=True),
        rule(
            "W05",
            "every task has at least one incoming transition",
            _degree_rule("W05", NodeKind.TASK, True, 1, False),
            scopable=True,
        ),
        rule(
            "W06",
            "every task has at least one outgoing transition",
            _degree_rule("W06", NodeKind.TASK, False, 1, False),
            scopable=True,
        ),
        rule(
            "W07",
            "every decision has exactly one incoming transition",
            _degree_rule("W07", NodeKind.DECISION, True, 1, True),
            scopable=True,
        ),
        rule(
            "W08",
            "every decision has at least two outgoing transitions",
            _degree_rule("W08", NodeKind.DECISION, False, 2, False),
            scopable=True,
        ),
        rule(
            "W09",
            "every merge has at least two incoming transitions",
            _degree_rule("W09", NodeKind.MERGE, True, 2, False),
            scopable=True,
        ),
        rule(
            "W10",
            "every merge has exactly one outgoing transition",
            _degree_rule("W10", NodeKind.MERGE, False, 1, True),
            scopable=True,
        ),
        rule(
            "W11",
            "every fork has exactly one incoming transition",
            _degree_rule("W11", NodeKind.FORK, True, 1, True),
            scopable=True,
        ),
        rule(
            "W12",
            "every fork has at least two outgoing transitions",
            _degree_rule("W12", NodeKind.FORK, False, 2, False),
            scopable=True,
        ),
        rule(
            "W13",
            "every join has at least two incoming transitions",
            _degree_rule("W13", NodeKind.JOIN, True, 2, False),
            scopable=True,
        ),
        rule(
            "W14",
            "every join has exactly one outgoing transition",
            _degree_rule("W14", NodeKind.JOIN, False, 1, True),
            scopable=True,
        ),
        rule("W15", "every node is reachable from some initial node", _w15),
        rule("W16", "every node can reach some final node", _w16),
        rule(
            "W17",
            "transition endpoints resolve to declared nodes",
            _w17,
            scopable=True,
            expand=_w17_expand,
        ),
        rule("W18", "node ids are unique", _w18, scopable=True),
        rule(
            "W19",
            "decision out-transitions carry a guard or a probability",
            _w19,
            scopable=True,
            expand=_w19_expand,
        ),
        rule(
            "W20",
            "probabilities on a decision's out-transitions sum to 1",
            _w20,
            scopable=True,
        ),
        rule("W21", "every probability lies in [0, 1]", _w21, scopable=True),
        rule(
            "W22",
            "task arrival and service rates are positive and finite",
            _w22,
            scopable=True,
        ),
    ]
