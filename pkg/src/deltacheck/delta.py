"""Delta operations and their application to model sets.

The constructible (action, target) pairs are exactly the supported cells of
the delta operation matrix: tasks, transitions, components and states support
modification; structural nodes, ports, connections and mapping entries only
addition/removal; signals only modification; performance values only
modification. Anything else is unconstructible.

Besides element operations a delta may create or remove a whole model
(``delta D creates statechart S { ... }``); new variants can introduce new
state charts this way without touching the element matrix.

Application is pure and atomic: the input model set is never mutated, and a
failing delta yields no partial result.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .models import (
    MAPPING_REF,
    ArchitectureModel,
    BehaviorMap,
    Component,
    Connector,
    Endpoint,
    MappingModel,
    Model,
    ModelRef,
    ModelSet,
    NodeKind,
    PERSPECTIVE_ARCHITECTURE,
    PERSPECTIVE_MAPPING,
    PERSPECTIVE_STATECHART,
    PERSPECTIVE_WORKFLOW,
    Port,
    SCTransition,
    State,
    StateKind,
    TaskMap,
    WorkflowModel,
    WorkflowNode,
    WorkflowTransition,
    model_ref_str,
)


class DeltaAction(Enum):
    ADD = "add"
    REMOVE = "remove"
    MODIFY = "modify"


class DeltaTarget(Enum):
    TASK = "task"
    DECISION = "decision"
    MERGE = "merge"
    FORK = "fork"
    JOIN = "join"
    INITIAL_NODE = "initial node"
    FINAL_NODE = "final node"
    WF_TRANSITION = "workflow transition"
    PERFORMANCE_VALUES = "performance values"
    COMPONENT = "component"
    PORT = "port"
    CONNECTION = "connection"
    SIGNAL = "signal"
    STATE = "state"
    SC_INITIAL = "initial state"
    SC_FINAL = "final state"
    SC_TRANSITION = "state chart transition"
    TASK_MAP = "task map"
    BEHAVIOR_MAP = "behavior map"


_A, _R, _M = DeltaAction.ADD, DeltaAction.REMOVE, DeltaAction.MODIFY

#: The supported operation matrix; (action, target) pairs outside it are
#: unconstructible.
TABLE1: frozenset[tuple[DeltaAction, DeltaTarget]] = frozenset(
    [
        (_A, DeltaTarget.TASK),
        (_R, DeltaTarget.TASK),
        (_M, DeltaTarget.TASK),
        (_A, DeltaTarget.DECISION),
        (_R, DeltaTarget.DECISION),
        (_A, DeltaTarget.MERGE),
        (_R, DeltaTarget.MERGE),
        (_A, DeltaTarget.FORK),
        (_R, DeltaTarget.FORK),
        (_A, DeltaTarget.JOIN),
        (_R, DeltaTarget.JOIN),
        (_A, DeltaTarget.INITIAL_NODE),
        (_R, DeltaTarget.INITIAL_NODE),
        (_A, DeltaTarget.FINAL_NODE),
        (_R, DeltaTarget.FINAL_NODE),
        (_A, DeltaTarget.WF_TRANSITION),
        (_R, DeltaTarget.WF_TRANSITION),
        (_M, DeltaTarget.WF_TRANSITION),
        (_M, DeltaTarget.PERFORMANCE_VALUES),
        (_A, DeltaTarget.COMPONENT),
        (_R, DeltaTarget.COMPONENT),
        (_M, DeltaTarget.COMPONENT),
        (_A, DeltaTarget.PORT),
        (_R, DeltaTarget.PORT),
        (_A, DeltaTarget.CONNECTION),
        (_R, DeltaTarget.CONNECTION),
        (_M, DeltaTarget.SIGNAL),
        (_A, DeltaTarget.STATE),
        (_R, DeltaTarget.STATE),
        (_M, DeltaTarget.STATE),
        (_A, DeltaTarget.SC_INITIAL),
        (_R, DeltaTarget.SC_INITIAL),
        (_A, DeltaTarget.SC_FINAL),
        (_R, DeltaTarget.SC_FINAL),
        (_A, DeltaTarget.SC_TRANSITION),
        (_R, DeltaTarget.SC_TRANSITION),
        (_M, DeltaTarget.SC_TRANSITION),
        (_A, DeltaTarget.TASK_MAP),
        (_R, DeltaTarget.TASK_MAP),
        (_A, DeltaTarget.BEHAVIOR_MAP),
        (_R, DeltaTarget.BEHAVIOR_MAP),
    ]
)

NODE_KIND_TARGETS = {
    DeltaTarget.TASK: NodeKind.TASK,
    DeltaTarget.DECISION: NodeKind.DECISION,
    DeltaTarget.MERGE: NodeKind.MERGE,
    DeltaTarget.FORK: NodeKind.FORK,
    DeltaTarget.JOIN: NodeKind.JOIN,
    DeltaTarget.INITIAL_NODE: NodeKind.INITIAL,
    DeltaTarget.FINAL_NODE: NodeKind.FINAL,
}

STATE_KIND_TARGETS = {
    DeltaTarget.STATE: StateKind.NORMAL,
    DeltaTarget.SC_INITIAL: StateKind.INITIAL,
    DeltaTarget.SC_FINAL: StateKind.FINAL,
}


@dataclass(frozen=True)
class PerformanceValues:
    """Replacement arrival/service rates for one task."""

    task: str
    arrival: Optional[float]
    service: Optional[float]


@dataclass(frozen=True)
class PortRef:
    component: str
    port: Port


@dataclass(frozen=True)
class DeltaOperation:
    action: DeltaAction
    target: DeltaTarget
    payload: object

    def __post_init__(self) -> None:
        if (self.action, self.target) not in TABLE1:
            raise ValueError(
                f"unsupported delta operation: {self.action.value} {self.target.value}"
            )


DELTA_MODE_ON = "on"
DELTA_MODE_CREATES = "creates"
DELTA_MODE_REMOVES = "removes"


@dataclass(frozen=True)
class Delta:
    name: str
    target: ModelRef
    operations: tuple[DeltaOperation, ...] = ()
    mode: str = DELTA_MODE_ON
    new_model: Optional[Model] = None

    def __post_init__(self) -> None:
        if self.mode not in (DELTA_MODE_ON, DELTA_MODE_CREATES, DELTA_MODE_REMOVES):
            raise ValueError(f"unknown delta mode {self.mode!r}")
        if self.mode == DELTA_MODE_CREATES and self.new_model is None:
            raise ValueError("a creating delta needs the model literal")
        if self.mode != DELTA_MODE_ON and self.target == MAPPING_REF:
            raise ValueError("the mapping cannot be created or removed")


class ApplicationReason(Enum):
    TARGET_MODEL_MISSING = "target model missing"
    ELEMENT_ALREADY_EXISTS = "element already exists"
    ELEMENT_NOT_FOUND = "element not found"
    UNSUPPORTED_OPERATION = "unsupported operation"


class DeltaApplicationError(Exception):
    def __init__(
        self,
        delta: str,
        operation_index: int,
        reason: ApplicationReason,
        detail: str,
    ):
        super().__init__(
            f"delta '{delta}', operation {operation_index}: {reason.value}: {detail}"
        )
        self.delta = delta
        self.operation_index = operation_index
        self.reason = reason
        self.detail = detail


@dataclass(frozen=True)
class ModelTouch:
    operations: tuple[tuple[DeltaAction, DeltaTarget], ...] = ()
    element_scope: frozenset[str] = frozenset()


@dataclass(frozen=True)
class TouchSet:
    """What a delta (or delta sequence) changed, for incremental re-checking."""

    touched: dict[ModelRef, ModelTouch] = field(default_factory=dict)
    created: frozenset[ModelRef] = frozenset()
    removed: frozenset[ModelRef] = frozenset()

    @property
    def touched_models(self) -> frozenset[ModelRef]:
        return frozenset(self.touched)

    @property
    def mapping_touched(self) -> bool:
        return MAPPING_REF in self.touched


def touch_summary(touch_sets: list[TouchSet]) -> TouchSet:
    """Union of touched models, operation summaries and element scopes."""
    merged: dict[ModelRef, tuple[list, set]] = {}
    created: set[ModelRef] = set()
    removed: set[ModelRef] = set()
    for ts in touch_sets:
        for ref, touch in ts.touched.items():
            ops, scope = merged.setdefault(ref, ([], set()))
            ops.extend(touch.operations)
            scope.update(touch.element_scope)
        created.update(ts.created)
        removed.update(ts.removed)
        # a model created then removed later in the chain is simply gone
        created -= ts.removed
        for ref in ts.removed:
            merged.pop(ref, None)
    return TouchSet(
        touched={
            ref: ModelTouch(tuple(ops), frozenset(scope))
            for ref, (ops, scope) in merged.items()
        },
        created=frozenset(created),
        removed=frozenset(removed),
    )


def apply_delta(models: ModelSet, delta: Delta) -> tuple[ModelSet, TouchSet]:
    """Apply ``delta`` to ``models``, returning the new set and its touch record.

    Raises DeltaApplicationError on the first failing operation; the input is
    left untouched in every case.
    """
    if delta.mode == DELTA_MODE_CREATES:
        perspective, name = delta.target
        if name in models.models_of(perspective):
            raise DeltaApplicationError(
                delta.name,
                0,
                ApplicationReason.ELEMENT_ALREADY_EXISTS,
                f"{perspective} '{name}' already exists",
            )
        updated = models.replace_model(delta.target, delta.new_model)
        scope = frozenset(_all_element_ids(delta.new_model))
        return updated, TouchSet(
            touched={delta.target: ModelTouch((), scope)},
            created=frozenset([delta.target]),
        )

    if delta.mode == DELTA_MODE_REMOVES:
        perspective, name = delta.target
        if name not in models.models_of(perspective):
            raise DeltaApplicationError(
                delta.name,
                0,
                ApplicationReason.TARGET_MODEL_MISSING,
                f"{perspective} '{name}' does not exist",
            )
        updated = models.replace_model(delta.target, None)
        return updated, TouchSet(removed=frozenset([delta.target]))

    old = models.resolve(delta.target)
    if old is None:
        raise DeltaApplicationError(
            delta.name,
            0,
            ApplicationReason.TARGET_MODEL_MISSING,
            f"{model_ref_str(delta.target)} does not exist",
        )

    current = old
    ops_applied: list[tuple[DeltaAction, DeltaTarget]] = []
    scope: set[str] = set()
    for index, op in enumerate(delta.operations, start=1):
        try:
            current = _apply_operation(current, op, scope)
        except _OperationFailure as failure:
            raise DeltaApplicationError(
                delta.name, index, failure.reason, failure.detail
            ) from None
        ops_applied.append((op.action, op.target))

    if current == old:
        return models, TouchSet()
    updated = models.replace_model(delta.target, current)
    return updated, TouchSet(
        touched={delta.target: ModelTouch(tuple(ops_applied), frozenset(scope))}
    )


def generate_variant(
    core: ModelSet, deltas: list[Delta]
) -> tuple[ModelSet, list[TouchSet]]:
    """Fold apply_delta left-to-right over the ordered delta list."""
    current = core
    touches: list[TouchSet] = []
    for delta in deltas:
        current, touch = apply_delta(current, delta)
        touches.append(touch)
    return current, touches


class _OperationFailure(Exception):
    def __init__(self, reason: ApplicationReason, detail: str):
        self.reason = reason
        self.detail = detail


def _exists(detail: str) -> _OperationFailure:
    return _OperationFailure(ApplicationReason.ELEMENT_ALREADY_EXISTS, detail)


def _missing(detail: str) -> _OperationFailure:
    return _OperationFailure(ApplicationReason.ELEMENT_NOT_FOUND, detail)


def _wrong_model(op: DeltaOperation, model: Model) -> _OperationFailure:
    return _OperationFailure(
        ApplicationReason.UNSUPPORTED_OPERATION,
        f"{op.action.value} {op.target.value} cannot target a {type(model).__name__}",
    )


def _apply_operation(model: Model, op: DeltaOperation, scope: set[str]) -> Model:
    if op.target in NODE_KIND_TARGETS or op.target in (
        DeltaTarget.WF_TRANSITION,
        DeltaTarget.PERFORMANCE_VALUES,
    ):
        if not isinstance(model, WorkflowModel):
            raise _wrong_model(op, model)
        return _apply_workflow_op(model, op, scope)
    if op.target in (
        DeltaTarget.COMPONENT,
        DeltaTarget.PORT,
        DeltaTarget.CONNECTION,
        DeltaTarget.SIGNAL,
    ):
        if not isinstance(model, ArchitectureModel):
            raise _wrong_model(op, model)
        return _apply_architecture_op(model, op, scope)
    if op.target in STATE_KIND_TARGETS or op.target is DeltaTarget.SC_TRANSITION:
        if not isinstance(model, StateChartModel):
            raise _wrong_model(op, model)
        return _apply_statechart_op(model, op, scope)
    if not isinstance(model, MappingModel):
        raise _wrong_model(op, model)
    return _apply_mapping_op(model, op, scope)


def _apply_workflow_op(
    model: WorkflowModel, op: DeltaOperation, scope: set[str]
) -> WorkflowModel:
    if op.target in NODE_KIND_TARGETS:
        kind = NODE_KIND_TARGETS[op.target]
        if op.action is DeltaAction.ADD:
            node = op.payload
            if any(n.id == node.id and n.kind is kind for n in model.nodes):
                raise _exists(f"{op.target.value} '{node.id}'")
            scope.add(node.id)
            return WorkflowModel(model.name, model.nodes + (node,), model.transitions)
        if op.action is DeltaAction.REMOVE:
            node_id = op.payload
            if not any(n.id == node_id and n.kind is kind for n in model.nodes):
                raise _missing(f"{op.target.value} '{node_id}'")
            scope.add(node_id)
            for tr in model.transitions:
                if node_id in (tr.source, tr.target):
                    scope.update((tr.id, tr.source, tr.target))
            kept = tuple(
                n for n in model.nodes if not (n.id == node_id and n.kind is kind)
            )
            return WorkflowModel(model.name, kept, model.transitions)
        # modify task: replace rates, identity preserved
        node = op.payload
        if not any(n.id == node.id and n.kind is NodeKind.TASK for n in model.nodes):
            raise _missing(f"task '{node.id}'")
        scope.add(node.id)
        nodes = tuple(
            node if (n.id == node.id and n.kind is NodeKind.TASK) else n
            for n in model.nodes
        )
        return WorkflowModel(model.name, nodes, model.transitions)

    if op.target is DeltaTarget.PERFORMANCE_VALUES:
        values: PerformanceValues = op.payload
        if not any(
            n.id == values.task and n.kind is NodeKind.TASK for n in model.nodes
        ):
            raise _missing(f"task '{values.task}'")
        scope.add(values.task)
        nodes = tuple(
            WorkflowNode(n.id, n.kind, values.arrival, values.service)
            if (n.id == values.task and n.kind is NodeKind.TASK)
            else n
            for n in model.nodes
        )
        return WorkflowModel(model.name, nodes, model.transitions)

    # workflow transitions
    if op.action is DeltaAction.ADD:
        tr = op.payload
        if any(t.id == tr.id for t in model.transitions):
            raise _exists(f"transition '{tr.id}'")
        scope.update((tr.id, tr.source, tr.target))
        return WorkflowModel(model.name, model.nodes, model.transitions + (tr,))
    if op.action is DeltaAction.REMOVE:
        tr_id = op.payload
        tr = next((t for t in model.transitions if t.id == tr_id), None)
        if tr is None:
            raise _missing(f"transition '{tr_id}'")
        scope.update((tr.id, tr.source, tr.target))
        kept = tuple(t for t in model.transitions if t.id != tr_id)
        return WorkflowModel(model.name, model.nodes, kept)
    replacement = op.payload
    old = next((t for t in model.transitions if t.id == replacement.id), None)
    if old is None:
        raise _missing(f"transition '{replacement.id}'")
    scope.update(
        (old.id, old.source, old.target, replacement.source, replacement.target)
    )
    transitions = tuple(
        replacement if t.id == replacement.id else t for t in model.transitions
    )
    return WorkflowModel(model.name, model.nodes, transitions)


def _apply_architecture_op(
    model: ArchitectureModel, op: DeltaOperation, scope: set[str]
) -> ArchitectureModel:
    if op.target is DeltaTarget.COMPONENT:
        if op.action is DeltaAction.ADD:
            comp: Component = op.payload
            if any(c.name == comp.name for c in model.components):
                raise _exists(f"component '{comp.name}'")
            scope.add(comp.name)
            scope.update(f"{comp.name}.{p.name}" for p in comp.ports)
            return ArchitectureModel(
                model.name,
                model.components + (comp,),
                model.signals,
                model.connectors,
                model.external_signals,
            )
        if op.action is DeltaAction.REMOVE:
            name = op.payload
            found = next((c for c in model.components if c.name == name), None)
            if found is None:
                raise _missing(f"component '{name}'")
            scope.add(name)
            scope.update(f"{name}.{p.name}" for p in found.ports)
            for conn in model.connectors:
                if name in (conn.source.component, conn.target.component):
                    scope.add(conn.id)
            kept = tuple(c for c in model.components if c.name != name)
            return ArchitectureModel(
                model.name, kept, model.signals, model.connectors, model.external_signals
            )
        comp = op.payload
        old = next((c for c in model.components if c.name == comp.name), None)
        if old is None:
            raise _missing(f"component '{comp.name}'")
        scope.add(comp.name)
        scope.update(f"{comp.name}.{p.name}" for p in old.ports)
        scope.update(f"{comp.name}.{p.name}" for p in comp.ports)
        components = tuple(comp if c.name == comp.name else c for c in model.components)
        return ArchitectureModel(
            model.name,
            components,
            model.signals,
            model.connectors,
            model.external_signals,
        )

    if op.target is DeltaTarget.PORT:
        if op.action is DeltaAction.ADD:
            ref: PortRef = op.payload
            owner = next(
                (c for c in model.components if c.name == ref.component), None
            )
            if owner is None:
                raise _missing(f"component '{ref.component}'")
            if any(p.name == ref.port.name for p in owner.ports):
                raise _exists(f"port '{ref.component}.{ref.port.name}'")
            scope.update((ref.component, f"{ref.component}.{ref.port.name}"))
            new_owner = Component(owner.name, owner.ports + (ref.port,))
            components = tuple(
                new_owner if c.name == owner.name else c for c in model.components
            )
            return ArchitectureModel(
                model.name,
                components,
                model.signals,
                model.connectors,
                model.external_signals,
            )
        endpoint: Endpoint = op.payload
        owner = next(
            (c for c in model.components if c.name == endpoint.component), None
        )
        if owner is None or not any(p.name == endpoint.port for p in owner.ports):
            raise _missing(f"port '{endpoint}'")
        scope.update((endpoint.component, str(endpoint)))
        new_owner = Component(
            owner.name, tuple(p for p in owner.ports if p.name != endpoint.port)
        )
        components = tuple(
            new_owner if c.name == owner.name else c for c in model.components
        )
        return ArchitectureModel(
            model.name,
            components,
            model.signals,
            model.connectors,
            model.external_signals,
        )

    if op.target is DeltaTarget.CONNECTION:
        if op.action is DeltaAction.ADD:
            conn: Connector = op.payload
            if any(c.id == conn.id for c in model.connectors):
                raise _exists(f"connector '{conn.id}'")
            scope.update(
                (
                    conn.id,
                    conn.source.component,
                    str(conn.source),
                    conn.target.component,
                    str(conn.target),
                )
            )
            return ArchitectureModel(
                model.name,
                model.components,
                model.signals,
                model.connectors + (conn,),
                model.external_signals,
            )
        conn_id = op.payload
        conn = next((c for c in model.connectors if c.id == conn_id), None)
        if conn is None:
            raise _missing(f"connector '{conn_id}'")
        scope.update(
            (
                conn.id,
                conn.source.component,
                str(conn.source),
                conn.target.component,
                str(conn.target),
            )
        )
        kept = tuple(c for c in model.connectors if c.id != conn_id)
        return ArchitectureModel(
            model.name, model.components, model.signals, kept, model.external_signals
        )

    # modify signal: the signal carries no mutable attributes, so this is a
    # structural no-op; existence is still required.
    name = op.payload
    if not any(s.name == name for s in model.signals):
        raise _missing(f"signal '{name}'")
    return model


def _apply_statechart_op(
    model: StateChartModel, op: DeltaOperation, scope: set[str]
) -> StateChartModel:
    if op.target in STATE_KIND_TARGETS:
        kind = STATE_KIND_TARGETS[op.target]
        if op.action is DeltaAction.ADD:
            state: State = op.payload
            if any(s.id == state.id and s.kind is kind for s in model.states):
                raise _exists(f"{op.target.value} '{state.id}'")
            scope.add(state.id)
            return StateChartModel(
                model.name, model.states + (state,), model.transitions
            )
        if op.action is DeltaAction.REMOVE:
            state_id = op.payload
            if not any(s.id == state_id and s.kind is kind for s in model.states):
                raise _missing(f"{op.target.value} '{state_id}'")
            scope.add(state_id)
            for tr in model.transitions:
                if state_id in (tr.source, tr.target):
                    scope.update((tr.id, tr.source, tr.target))
            kept = tuple(
                s for s in model.states if not (s.id == state_id and s.kind is kind)
            )
            return StateChartModel(model.name, kept, model.transitions)
        # modify state: no mutable attributes on plain states; existence check only
        state_id = op.payload
        if not any(
            s.id == state_id and s.kind is StateKind.NORMAL for s in model.states
        ):
            raise _missing(f"state '{state_id}'")
        return model

    if op.action is DeltaAction.ADD:
        tr: SCTransition = op.payload
        if any(t.id == tr.id for t in model.transitions):
            raise _exists(f"transition '{tr.id}'")
        scope.update((tr.id, tr.source, tr.target))
        return StateChartModel(model.name, model.states, model.transitions + (tr,))
    if op.action is DeltaAction.REMOVE:
        tr_id = op.payload
        tr = next((t for t in model.transitions if t.id == tr_id), None)
        if tr is None:
            raise _missing(f"transition '{tr_id}'")
        scope.update((tr.id, tr.source, tr.target))
        kept = tuple(t for t in model.transitions if t.id != tr_id)
        return StateChartModel(model.name, model.states, kept)
    replacement = op.payload
    old = next((t for t in model.transitions if t.id == replacement.id), None)
    if old is None:
        raise _missing(f"transition '{replacement.id}'")
    scope.update(
        (old.id, old.source, old.target, replacement.source, replacement.target)
    )
    transitions = tuple(
        replacement if t.id == replacement.id else t for t in model.transitions
    )
    return StateChartModel(model.name, model.states, transitions)


def _apply_mapping_op(
    model: MappingModel, op: DeltaOperation, scope: set[str]
) -> MappingModel:
    if op.target is DeltaTarget.TASK_MAP:
        entry: TaskMap = op.payload
        if op.action is DeltaAction.ADD:
            if entry in model.task_maps:
                raise _exists(entry.key())
            scope.add(entry.key())
            return MappingModel(
                model.name, model.task_maps + (entry,), model.behavior_maps
            )
        if entry not in model.task_maps:
            raise _missing(entry.key())
        scope.add(entry.key())
        kept = tuple(tm for tm in model.task_maps if tm != entry)
        return MappingModel(model.name, kept, model.behavior_maps)

    entry_b: BehaviorMap = op.payload
    if op.action is DeltaAction.ADD:
        if entry_b in model.behavior_maps:
            raise _exists(entry_b.key())
        scope.add(entry_b.key())
        return MappingModel(
            model.name, model.task_maps, model.behavior_maps + (entry_b,)
        )
    if entry_b not in model.behavior_maps:
        raise _missing(entry_b.key())
    scope.add(entry_b.key())
    kept = tuple(bm for bm in model.behavior_maps if bm != entry_b)
    return MappingModel(model.name, model.task_maps, kept)


def _all_element_ids(model: Model) -> set[str]:
    from .models import ElementIndex

    return set(ElementIndex(model).by_id)
