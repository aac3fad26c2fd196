"""Recursive-descent parsers for the six document kinds.

One document per file; the top-level keyword decides the kind. The parsers
enforce lexical structure plus within-scope declaration uniqueness (duplicate
nodes, states, components, ports per component, transition ids). Everything
semantic — dangling references, degree constraints, value ranges — is left
for the rule catalog.

Transitions may omit their id in model documents; missing ids are assigned
``t1``, ``t2``, ... in document order, skipping ids taken explicitly. Delta
operations always name transitions explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

from ..delta import (
    DELTA_MODE_CREATES,
    DELTA_MODE_REMOVES,
    Delta,
    DeltaAction,
    DeltaOperation,
    DeltaTarget,
    NODE_KIND_TARGETS,
    PerformanceValues,
    PortRef,
    STATE_KIND_TARGETS,
)
from ..models import (
    MAPPING_REF,
    ArchitectureModel,
    BehaviorMap,
    Component,
    Connector,
    Endpoint,
    MappingModel,
    NodeKind,
    PERSPECTIVE_ARCHITECTURE,
    PERSPECTIVE_STATECHART,
    PERSPECTIVE_WORKFLOW,
    Port,
    PortDirection,
    SCTransition,
    Signal,
    State,
    StateKind,
    TaskMap,
    WorkflowModel,
    WorkflowNode,
    WorkflowTransition,
)
from .errors import ParseError
from .lexer import EOF, IDENT, NUMBER, PUNCT, STRING, Token, tokenize

KEYWORDS = frozenset(
    """
    workflow architecture statechart mapping delta productline
    task decision merge fork join initial final transition
    arrival service guard prob
    component port in out signal connector external
    state on if do
    core deltas variant apply file
    add remove modify performance creates removes
    """.split()
)

_NODE_KEYWORDS = {
    "task": NodeKind.TASK,
    "decision": NodeKind.DECISION,
    "merge": NodeKind.MERGE,
    "fork": NodeKind.FORK,
    "join": NodeKind.JOIN,
    "initial": NodeKind.INITIAL,
    "final": NodeKind.FINAL,
}

_STATE_KEYWORDS = {
    "initial": StateKind.INITIAL,
    "state": StateKind.NORMAL,
    "final": StateKind.FINAL,
}

_NODE_TARGETS = {v: k for k, v in NODE_KIND_TARGETS.items()}
_STATE_TARGETS = {v: k for k, v in STATE_KIND_TARGETS.items()}

_PERSPECTIVES = (
    PERSPECTIVE_WORKFLOW,
    PERSPECTIVE_ARCHITECTURE,
    PERSPECTIVE_STATECHART,
)


@dataclass(frozen=True)
class VariantSpec:
    name: str
    delta_names: tuple[str, ...]


@dataclass(frozen=True)
class ProductLineManifest:
    name: str
    core_files: tuple[Path, ...]
    delta_files: tuple[Path, ...]
    variants: tuple[VariantSpec, ...]
    core_file_strings: tuple[str, ...] = ()
    delta_file_strings: tuple[str, ...] = ()


class _Parser:
    def __init__(self, text: str, file: str):
        self.file = file
        self.tokens = tokenize(text, file)
        self.pos = 0

    # -- token plumbing ----------------------------------------------------

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.type != EOF:
            self.pos += 1
        return tok

    def at(self, value: str) -> bool:
        tok = self.peek()
        return tok.value == value and tok.type in (IDENT, PUNCT)

    def error(self, message: str, expected: tuple[str, ...] = ()) -> ParseError:
        return ParseError(self.peek().location(self.file), message, expected)

    def expect(self, value: str) -> Token:
        tok = self.peek()
        if tok.value != value or tok.type not in (IDENT, PUNCT):
            raise self.error(
                f"found {self._describe(tok)}", expected=(f"'{value}'",)
            )
        return self.advance()

    def expect_one_of(self, *values: str) -> Token:
        tok = self.peek()
        if tok.type in (IDENT, PUNCT) and tok.value in values:
            return self.advance()
        raise self.error(
            f"found {self._describe(tok)}",
            expected=tuple(f"'{v}'" for v in values),
        )

    def expect_ident(self, what: str = "identifier") -> Token:
        tok = self.peek()
        if tok.type != IDENT or tok.value in KEYWORDS:
            raise self.error(f"found {self._describe(tok)}", expected=(what,))
        return self.advance()

    def expect_number(self) -> tuple[float, Token]:
        tok = self.peek()
        if tok.type != NUMBER:
            raise self.error(f"found {self._describe(tok)}", expected=("number",))
        self.advance()
        return float(tok.value), tok

    def expect_string(self) -> str:
        tok = self.peek()
        if tok.type != STRING:
            raise self.error(
                f"found {self._describe(tok)}", expected=("string literal",)
            )
        self.advance()
        return tok.value

    def expect_eof(self) -> None:
        tok = self.peek()
        if tok.type != EOF:
            raise self.error(
                f"trailing content: found {self._describe(tok)}",
                expected=("end of input",),
            )

    @staticmethod
    def _describe(tok: Token) -> str:
        if tok.type == EOF:
            return "end of input"
        return f"'{tok.value}'"

    def duplicate(self, what: str, name: str, tok: Token) -> ParseError:
        return ParseError(
            tok.location(self.file), f"duplicate {what} '{name}'"
        )

    # -- shared pieces -----------------------------------------------------

    def qualified(self) -> Endpoint:
        left = self.expect_ident("component name")
        self.expect(".")
        right = self.expect_ident("port name")
        return Endpoint(left.value, right.value)

    def rate_block(self) -> tuple[Optional[float], Optional[float]]:
        """``{ arrival N; service N; }`` with each rate at most once."""
        self.expect("{")
        arrival: Optional[float] = None
        service: Optional[float] = None
        while not self.at("}"):
            key = self.expect_one_of("arrival", "service")
            value, _ = self.expect_number()
            self.expect(";")
            if key.value == "arrival":
                if arrival is not None:
                    raise self.duplicate("rate", "arrival", key)
                arrival = value
            else:
                if service is not None:
                    raise self.duplicate("rate", "service", key)
                service = value
        self.expect("}")
        return arrival, service

    def wf_transition_tail(
        self,
    ) -> tuple[Optional[str], str, str, Optional[str], Optional[float]]:
        """Everything after the ``transition`` keyword, up to and incl. ``;``."""
        explicit_id: Optional[str] = None
        first = self.expect_ident("transition id or source node")
        if self.at(":"):
            self.advance()
            explicit_id = first.value
            source = self.expect_ident("source node").value
        else:
            source = first.value
        self.expect("->")
        target = self.expect_ident("target node").value
        guard: Optional[str] = None
        probability: Optional[float] = None
        if self.at("guard"):
            self.advance()
            guard = self.expect_string()
        if self.at("prob"):
            self.advance()
            probability, _ = self.expect_number()
        self.expect(";")
        return explicit_id, source, target, guard, probability

    def sc_transition_tail(
        self,
    ) -> tuple[Optional[str], str, str, Optional[str], Optional[str], Optional[str]]:
        explicit_id: Optional[str] = None
        first = self.expect_ident("transition id or source state")
        if self.at(":"):
            self.advance()
            explicit_id = first.value
            source = self.expect_ident("source state").value
        else:
            source = first.value
        self.expect("->")
        target = self.expect_ident("target state").value
        event: Optional[str] = None
        guard: Optional[str] = None
        action: Optional[str] = None
        if self.at("on"):
            self.advance()
            event = self.expect_ident("event name").value
        if self.at("if"):
            self.advance()
            guard = self.expect_string()
        if self.at("do"):
            self.advance()
            action = self.expect_string()
        self.expect(";")
        return explicit_id, source, target, event, guard, action

    def component_body(self, check_duplicates: bool) -> tuple[Port, ...]:
        self.expect("{")
        ports: list[Port] = []
        seen: set[str] = set()
        while not self.at("}"):
            direction = self.expect_one_of("in", "out")
            self.expect("port")
            name = self.expect_ident("port name")
            self.expect(";")
            if check_duplicates and name.value in seen:
                raise self.duplicate("port", name.value, name)
            seen.add(name.value)
            ports.append(
                Port(
                    name.value,
                    PortDirection.IN if direction.value == "in" else PortDirection.OUT,
                )
            )
        self.expect("}")
        return tuple(ports)

    def connector_tail(self) -> Connector:
        conn_id = self.expect_ident("connector id")
        self.expect(":")
        signal = self.expect_ident("signal name")
        source = self.qualified()
        self.expect("->")
        target = self.qualified()
        self.expect(";")
        return Connector(conn_id.value, signal.value, source, target)

    # -- transition id assignment -------------------------------------------

    @staticmethod
    def assign_transition_ids(raw, make):
        explicit = [r[0] for r in raw if r[0] is not None]
        used = set(explicit)
        out = []
        counter = 1
        for entry in raw:
            tr_id = entry[0]
            if tr_id is None:
                while f"t{counter}" in used:
                    counter += 1
                tr_id = f"t{counter}"
                used.add(tr_id)
            out.append(make(tr_id, entry))
        return tuple(out)


# -- workflow ----------------------------------------------------------------


def parse_workflow(text: str, file: str = "<string>") -> WorkflowModel:
    p = _Parser(text, file)
    p.expect("workflow")
    name = p.expect_ident("workflow name").value
    p.expect("{")
    nodes: list[WorkflowNode] = []
    node_ids: set[str] = set()
    raw_transitions: list[tuple] = []
    explicit_tr: set[str] = set()
    while not p.at("}"):
        tok = p.peek()
        if tok.value in _NODE_KEYWORDS and tok.type == IDENT:
            p.advance()
            kind = _NODE_KEYWORDS[tok.value]
            ident = p.expect_ident("node id")
            if ident.value in node_ids:
                raise p.duplicate("node declaration", ident.value, ident)
            node_ids.add(ident.value)
            arrival = service = None
            if kind is NodeKind.TASK and p.at("{"):
                arrival, service = p.rate_block()
            else:
                p.expect(";")
            nodes.append(WorkflowNode(ident.value, kind, arrival, service))
        elif tok.value == "transition" and tok.type == IDENT:
            p.advance()
            tr_tok = p.peek()
            entry = p.wf_transition_tail()
            if entry[0] is not None:
                if entry[0] in explicit_tr:
                    raise p.duplicate("transition id", entry[0], tr_tok)
                explicit_tr.add(entry[0])
            raw_transitions.append(entry)
        else:
            raise p.error(
                f"unknown workflow element: found {p._describe(tok)}",
                expected=tuple(sorted(_NODE_KEYWORDS)) + ("transition", "'}'"),
            )
    p.expect("}")
    p.expect_eof()
    transitions = p.assign_transition_ids(
        raw_transitions,
        lambda tr_id, e: WorkflowTransition(tr_id, e[1], e[2], e[3], e[4]),
    )
    return WorkflowModel(name, tuple(nodes), transitions)


# -- architecture --------------------------------------------------------------


def parse_architecture(text: str, file: str = "<string>") -> ArchitectureModel:
    p = _Parser(text, file)
    p.expect("architecture")
    name = p.expect_ident("architecture name").value
    p.expect("{")
    components: list[Component] = []
    component_names: set[str] = set()
    signals: list[Signal] = []
    connectors: list[Connector] = []
    connector_ids: set[str] = set()
    externals: list = []
    while not p.at("}"):
        tok = p.peek()
        if p.at("component"):
            p.advance()
            ident = p.expect_ident("component name")
            if ident.value in component_names:
                raise p.duplicate("component", ident.value, ident)
            component_names.add(ident.value)
            ports = p.component_body(check_duplicates=True)
            components.append(Component(ident.value, ports))
        elif p.at("signal"):
            p.advance()
            ident = p.expect_ident("signal name")
            p.expect(";")
            signals.append(Signal(ident.value))
        elif p.at("connector"):
            conn_tok = p.peek(1)
            p.advance()
            conn = p.connector_tail()
            if conn.id in connector_ids:
                raise p.duplicate("connector id", conn.id, conn_tok)
            connector_ids.add(conn.id)
            connectors.append(conn)
        elif p.at("external"):
            p.advance()
            sig = p.expect_ident("signal name")
            p.expect("->")
            target = p.qualified()
            p.expect(";")
            from ..models import ExternalSignal

            externals.append(ExternalSignal(sig.value, target))
        else:
            raise p.error(
                f"unknown architecture element: found {p._describe(tok)}",
                expected=("component", "signal", "connector", "external", "'}'"),
            )
    p.expect("}")
    p.expect_eof()
    return ArchitectureModel(
        name, tuple(components), tuple(signals), tuple(connectors), tuple(externals)
    )


# -- state chart ----------------------------------------------------------------


def parse_statechart(text: str, file: str = "<string>") -> StateChartModel:
    p = _Parser(text, file)
    p.expect("statechart")
    name = p.expect_ident("state chart name").value
    p.expect("{")
    states: list[State] = []
    state_ids: set[str] = set()
    raw_transitions: list[tuple] = []
    explicit_tr: set[str] = set()
    while not p.at("}"):
        tok = p.peek()
        if tok.value in _STATE_KEYWORDS and tok.type == IDENT:
            p.advance()
            ident = p.expect_ident("state id")
            p.expect(";")
            if ident.value in state_ids:
                raise p.duplicate("state declaration", ident.value, ident)
            state_ids.add(ident.value)
            states.append(State(ident.value, _STATE_KEYWORDS[tok.value]))
        elif p.at("transition"):
            p.advance()
            tr_tok = p.peek()
            entry = p.sc_transition_tail()
            if entry[0] is not None:
                if entry[0] in explicit_tr:
                    raise p.duplicate("transition id", entry[0], tr_tok)
                explicit_tr.add(entry[0])
            raw_transitions.append(entry)
        else:
            raise p.error(
                f"unknown state chart element: found {p._describe(tok)}",
                expected=("initial", "state", "final", "transition", "'}'"),
            )
    p.expect("}")
    p.expect_eof()
    transitions = p.assign_transition_ids(
        raw_transitions,
        lambda tr_id, e: SCTransition(tr_id, e[1], e[2], e[3], e[4], e[5]),
    )
    return StateChartModel(name, tuple(states), transitions)


# -- mapping ---------------------------------------------------------------------


def parse_mapping(text: str, file: str = "<string>") -> MappingModel:
    p = _Parser(text, file)
    p.expect("mapping")
    name = p.expect_ident("mapping name").value
    p.expect("{")
    task_maps: list[TaskMap] = []
    behavior_maps: list[BehaviorMap] = []
    while not p.at("}"):
        tok = p.peek()
        entry = _parse_mapping_entry(p)
        if isinstance(entry, TaskMap):
            if entry in task_maps:
                raise ParseError(
                    tok.location(p.file), f"duplicate mapping entry '{entry.key()}'"
                )
            task_maps.append(entry)
        else:
            if entry in behavior_maps:
                raise ParseError(
                    tok.location(p.file), f"duplicate mapping entry '{entry.key()}'"
                )
            behavior_maps.append(entry)
    p.expect("}")
    p.expect_eof()
    return MappingModel(name, tuple(task_maps), tuple(behavior_maps))


def _parse_mapping_entry(p: _Parser):
    tok = p.expect_one_of("task", "component")
    if tok.value == "task":
        ref = p.qualified()  # workflow.task
        p.expect("->")
        p.expect("component")
        comp = p.qualified()  # architecture.component
        p.expect(";")
        return TaskMap(ref.port, ref.component, comp.port, comp.component)
    ref = p.qualified()  # architecture.component
    p.expect("->")
    p.expect("statechart")
    chart = p.expect_ident("state chart name").value
    p.expect(";")
    return BehaviorMap(ref.port, ref.component, chart)


# -- delta -----------------------------------------------------------------------


def parse_delta(text: str, file: str = "<string>") -> Delta:
    p = _Parser(text, file)
    p.expect("delta")
    name = p.expect_ident("delta name").value
    mode_tok = p.expect_one_of("on", "creates", "removes")

    if mode_tok.value in ("creates", "removes"):
        kind = p.expect_one_of(*_PERSPECTIVES).value
        model_name = p.expect_ident("model name").value
        target = (kind, model_name)
        if mode_tok.value == "removes":
            p.expect(";")
            p.expect_eof()
            return Delta(name, target, mode=DELTA_MODE_REMOVES)
        body = _parse_model_body_for(p, kind, model_name)
        p.expect_eof()
        return Delta(name, target, mode=DELTA_MODE_CREATES, new_model=body)

    kind_tok = p.expect_one_of(*(_PERSPECTIVES + ("mapping",)))
    if kind_tok.value == "mapping":
        target = MAPPING_REF
        ops = _parse_mapping_ops(p)
    else:
        model_name = p.expect_ident("model name").value
        target = (kind_tok.value, model_name)
        parser = {
            PERSPECTIVE_WORKFLOW: _parse_workflow_ops,
            PERSPECTIVE_ARCHITECTURE: _parse_architecture_ops,
            PERSPECTIVE_STATECHART: _parse_statechart_ops,
        }[kind_tok.value]
        ops = parser(p)
    p.expect_eof()
    return Delta(name, target, tuple(ops))


def _parse_model_body_for(p: _Parser, kind: str, model_name: str):
    """Parse a model literal inside a creating delta; same checks as documents."""
    # Reuse the document parsers on the remaining token stream by re-lexing the
    # body region; simpler: parse the body inline with the same helpers.
    if kind == PERSPECTIVE_WORKFLOW:
        return _parse_workflow_literal(p, model_name)
    if kind == PERSPECTIVE_ARCHITECTURE:
        return _parse_architecture_literal(p, model_name)
    return _parse_statechart_literal(p, model_name)


def _op(action: DeltaAction, target: DeltaTarget, payload) -> DeltaOperation:
    return DeltaOperation(action, target, payload)


def _unsupported(p: _Parser, action: str, target: str) -> ParseError:
    return p.error(f"'{action}' is not supported for {target}")


def _parse_workflow_ops(p: _Parser) -> list[DeltaOperation]:
    p.expect("{")
    ops: list[DeltaOperation] = []
    while not p.at("}"):
        verb = p.expect_one_of("add", "remove", "modify")
        tok = p.peek()
        if tok.value in _NODE_KEYWORDS and tok.type == IDENT:
            kindkw = p.advance().value
            kind = _NODE_KEYWORDS[kindkw]
            target = _NODE_TARGETS[kind]
            ident = p.expect_ident("node id").value
            if verb.value == "add":
                arrival = service = None
                if kind is NodeKind.TASK and p.at("{"):
                    arrival, service = p.rate_block()
                else:
                    p.expect(";")
                ops.append(
                    _op(
                        DeltaAction.ADD,
                        target,
                        WorkflowNode(ident, kind, arrival, service),
                    )
                )
            elif verb.value == "remove":
                p.expect(";")
                ops.append(_op(DeltaAction.REMOVE, target, ident))
            else:
                if kind is not NodeKind.TASK:
                    raise _unsupported(p, "modify", kindkw)
                arrival, service = p.rate_block()
                ops.append(
                    _op(
                        DeltaAction.MODIFY,
                        DeltaTarget.TASK,
                        WorkflowNode(ident, NodeKind.TASK, arrival, service),
                    )
                )
        elif p.at("transition"):
            p.advance()
            if verb.value == "remove":
                ident = p.expect_ident("transition id").value
                p.expect(";")
                ops.append(_op(DeltaAction.REMOVE, DeltaTarget.WF_TRANSITION, ident))
            else:
                tr_id, source, target_node, guard, prob = p.wf_transition_tail()
                if tr_id is None:
                    raise p.error(
                        "transitions in deltas need an explicit id",
                        expected=("transition id",),
                    )
                action = (
                    DeltaAction.ADD if verb.value == "add" else DeltaAction.MODIFY
                )
                ops.append(
                    _op(
                        action,
                        DeltaTarget.WF_TRANSITION,
                        WorkflowTransition(tr_id, source, target_node, guard, prob),
                    )
                )
        elif p.at("performance"):
            p.advance()
            if verb.value != "modify":
                raise _unsupported(p, verb.value, "performance values")
            ident = p.expect_ident("task id").value
            arrival, service = p.rate_block()
            ops.append(
                _op(
                    DeltaAction.MODIFY,
                    DeltaTarget.PERFORMANCE_VALUES,
                    PerformanceValues(ident, arrival, service),
                )
            )
        else:
            raise p.error(
                f"unknown workflow delta operand: found {p._describe(p.peek())}",
                expected=tuple(sorted(_NODE_KEYWORDS))
                + ("transition", "performance"),
            )
    p.expect("}")
    return ops


def _parse_architecture_ops(p: _Parser) -> list[DeltaOperation]:
    p.expect("{")
    ops: list[DeltaOperation] = []
    while not p.at("}"):
        verb = p.expect_one_of("add", "remove", "modify")
        if p.at("component"):
            p.advance()
            ident = p.expect_ident("component name").value
            if verb.value == "remove":
                p.expect(";")
                ops.append(_op(DeltaAction.REMOVE, DeltaTarget.COMPONENT, ident))
            else:
                ports = p.component_body(check_duplicates=False)
                action = (
                    DeltaAction.ADD if verb.value == "add" else DeltaAction.MODIFY
                )
                ops.append(_op(action, DeltaTarget.COMPONENT, Component(ident, ports)))
        elif p.at("port") or (
            p.peek().value in ("in", "out") and p.peek(1).value == "port"
        ):
            if verb.value == "modify":
                raise _unsupported(p, "modify", "port")
            if verb.value == "add":
                direction = p.expect_one_of("in", "out")
                p.expect("port")
                endpoint = p.qualified()
                p.expect(";")
                ops.append(
                    _op(
                        DeltaAction.ADD,
                        DeltaTarget.PORT,
                        PortRef(
                            endpoint.component,
                            Port(
                                endpoint.port,
                                PortDirection.IN
                                if direction.value == "in"
                                else PortDirection.OUT,
                            ),
                        ),
                    )
                )
            else:
                p.expect("port")
                endpoint = p.qualified()
                p.expect(";")
                ops.append(_op(DeltaAction.REMOVE, DeltaTarget.PORT, endpoint))
        elif p.at("connector"):
            p.advance()
            if verb.value == "modify":
                raise _unsupported(p, "modify", "connector")
            if verb.value == "add":
                ops.append(_op(DeltaAction.ADD, DeltaTarget.CONNECTION, p.connector_tail()))
            else:
                ident = p.expect_ident("connector id").value
                p.expect(";")
                ops.append(_op(DeltaAction.REMOVE, DeltaTarget.CONNECTION, ident))
        elif p.at("signal"):
            p.advance()
            if verb.value != "modify":
                raise _unsupported(p, verb.value, "signal")
            ident = p.expect_ident("signal name").value
            p.expect(";")
            ops.append(_op(DeltaAction.MODIFY, DeltaTarget.SIGNAL, ident))
        elif p.at("external"):
            raise _unsupported(p, verb.value, "external signal")
        else:
            raise p.error(
                f"unknown architecture delta operand: found {p._describe(p.peek())}",
                expected=("component", "port", "connector", "signal"),
            )
    p.expect("}")
    return ops


def _parse_statechart_ops(p: _Parser) -> list[DeltaOperation]:
    p.expect("{")
    ops: list[DeltaOperation] = []
    while not p.at("}"):
        verb = p.expect_one_of("add", "remove", "modify")
        tok = p.peek()
        if tok.value in _STATE_KEYWORDS and tok.type == IDENT:
            kindkw = p.advance().value
            kind = _STATE_KEYWORDS[kindkw]
            target = _STATE_TARGETS[kind]
            ident = p.expect_ident("state id").value
            p.expect(";")
            if verb.value == "add":
                ops.append(_op(DeltaAction.ADD, target, State(ident, kind)))
            elif verb.value == "remove":
                ops.append(_op(DeltaAction.REMOVE, target, ident))
            else:
                if kind is not StateKind.NORMAL:
                    raise _unsupported(p, "modify", f"{kindkw} state")
                ops.append(_op(DeltaAction.MODIFY, DeltaTarget.STATE, ident))
        elif p.at("transition"):
            p.advance()
            if verb.value == "remove":
                ident = p.expect_ident("transition id").value
                p.expect(";")
                ops.append(_op(DeltaAction.REMOVE, DeltaTarget.SC_TRANSITION, ident))
            else:
                tr_id, source, target_state, event, guard, action_text = (
                    p.sc_transition_tail()
                )
                if tr_id is None:
                    raise p.error(
                        "transitions in deltas need an explicit id",
                        expected=("transition id",),
                    )
                action = (
                    DeltaAction.ADD if verb.value == "add" else DeltaAction.MODIFY
                )
                ops.append(
                    _op(
                        action,
                        DeltaTarget.SC_TRANSITION,
                        SCTransition(
                            tr_id, source, target_state, event, guard, action_text
                        ),
                    )
                )
        else:
            raise p.error(
                f"unknown state chart delta operand: found {p._describe(p.peek())}",
                expected=("initial", "state", "final", "transition"),
            )
    p.expect("}")
    return ops


def _parse_mapping_ops(p: _Parser) -> list[DeltaOperation]:
    p.expect("{")
    ops: list[DeltaOperation] = []
    while not p.at("}"):
        verb = p.expect_one_of("add", "remove")
        entry = _parse_mapping_entry(p)
        action = DeltaAction.ADD if verb.value == "add" else DeltaAction.REMOVE
        target = (
            DeltaTarget.TASK_MAP if isinstance(entry, TaskMap) else DeltaTarget.BEHAVIOR_MAP
        )
        ops.append(_op(action, target, entry))
    p.expect("}")
    return ops


# -- model literals inside creating deltas ---------------------------------------


def _parse_workflow_literal(p: _Parser, name: str) -> WorkflowModel:
    body = _collect_braced_tokens(p)
    return parse_workflow(f"workflow {name} {body}", p.file)


def _parse_architecture_literal(p: _Parser, name: str) -> ArchitectureModel:
    body = _collect_braced_tokens(p)
    return parse_architecture(f"architecture {name} {body}", p.file)


def _parse_statechart_literal(p: _Parser, name: str) -> StateChartModel:
    body = _collect_braced_tokens(p)
    return parse_statechart(f"statechart {name} {body}", p.file)


def _collect_braced_tokens(p: _Parser) -> str:
    """Re-render the balanced ``{ ... }`` region as text for the document parser.

    Error positions inside the literal are reported at the rendered text, not
    the enclosing file; acceptable for the rare creating-delta syntax error.
    """
    open_tok = p.expect("{")
    depth = 1
    parts: list[str] = ["{"]
    while depth > 0:
        tok = p.peek()
        if tok.type == EOF:
            raise ParseError(
                open_tok.location(p.file), "unclosed model literal block"
            )
        p.advance()
        if tok.type == PUNCT and tok.value == "{":
            depth += 1
        elif tok.type == PUNCT and tok.value == "}":
            depth -= 1
        if tok.type == STRING:
            escaped = tok.value.replace("\\", "\\\\").replace('"', '\\"')
            parts.append(f'"{escaped}"')
        else:
            parts.append(tok.value)
    return " ".join(parts)


# -- manifest --------------------------------------------------------------------


def parse_manifest(
    text: str, file: str = "<string>", base_dir: Optional[Path] = None
) -> ProductLineManifest:
    base = Path(base_dir) if base_dir is not None else Path(".")
    p = _Parser(text, file)
    p.expect("productline")
    name = p.expect_ident("product line name").value
    p.expect("{")
    core_strings: list[str] = []
    delta_strings: list[str] = []
    variants: list[VariantSpec] = []
    variant_names: set[str] = set()
    seen_core = seen_deltas = False
    while not p.at("}"):
        if p.at("core"):
            if seen_core:
                raise p.duplicate("section", "core", p.peek())
            seen_core = True
            p.advance()
            p.expect("{")
            while not p.at("}"):
                p.expect("file")
                core_strings.append(p.expect_string())
                p.expect(";")
            p.expect("}")
        elif p.at("deltas"):
            if seen_deltas:
                raise p.duplicate("section", "deltas", p.peek())
            seen_deltas = True
            p.advance()
            p.expect("{")
            while not p.at("}"):
                p.expect("delta")
                delta_strings.append(p.expect_string())
                p.expect(";")
            p.expect("}")
        elif p.at("variant"):
            p.advance()
            ident = p.expect_ident("variant name")
            if ident.value in variant_names:
                raise p.duplicate("variant", ident.value, ident)
            if ident.value == "core":
                raise ParseError(
                    ident.location(p.file),
                    "variant name 'core' is reserved for the core report",
                )
            variant_names.add(ident.value)
            p.expect("{")
            names: list[str] = []
            if p.at("apply"):
                p.advance()
                names.append(p.expect_ident("delta name").value)
                while p.at(","):
                    p.advance()
                    names.append(p.expect_ident("delta name").value)
                p.expect(";")
            p.expect("}")
            variants.append(VariantSpec(ident.value, tuple(names)))
        else:
            raise p.error(
                f"unknown manifest section: found {p._describe(p.peek())}",
                expected=("core", "deltas", "variant", "'}'"),
            )
    p.expect("}")
    p.expect_eof()
    return ProductLineManifest(
        name=name,
        core_files=tuple(base / s for s in core_strings),
        delta_files=tuple(base / s for s in delta_strings),
        variants=tuple(variants),
        core_file_strings=tuple(core_strings),
        delta_file_strings=tuple(delta_strings),
    )


# -- kind dispatch -----------------------------------------------------------------

_DOCUMENT_PARSERS: dict[str, Callable] = {
    "workflow": parse_workflow,
    "architecture": parse_architecture,
    "statechart": parse_statechart,
    "mapping": parse_mapping,
    "delta": parse_delta,
}


def parse_document(text: str, file: str = "<string>"):
    """Parse any non-manifest document; kind comes from the leading keyword."""
    tokens = tokenize(text, file)
    head = tokens[0]
    parser = _DOCUMENT_PARSERS.get(head.value) if head.type == IDENT else None
    if parser is None:
        raise ParseError(
            head.location(file),
            f"unknown document kind: found {_Parser._describe(head)}",
            expected=tuple(sorted(_DOCUMENT_PARSERS)),
        )
    return parser(text, file)
