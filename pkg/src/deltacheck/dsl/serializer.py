"""Canonical text forms for models, deltas and manifests.

Round-trip contract: ``parse(serialize(x))`` is structurally equal to ``x``,
and serializing a just-parsed value is a fixpoint after one canonicalization
pass. Element order is preserved from the value (declaration order for parsed
documents); numbers use the shortest round-trip decimal form; output is UTF-8
with LF line endings and a trailing newline.
"""

from __future__ import annotations

from typing import List

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
    ArchitectureModel,
    BehaviorMap,
    Component,
    MappingModel,
    NodeKind,
    PortDirection,
    SCTransition,
    StateChartModel,
    StateKind,
    TaskMap,
    WorkflowModel,
    WorkflowNode,
    WorkflowTransition,
)
from .parser import ProductLineManifest


def _num(value: float) -> str:
    return repr(float(value))


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _document(kind: str, name: str, lines: List[str]) -> str:
    if not lines:
        return f"{kind} {name} {{ }}\n"
    body = "\n".join(f"  {line}" for line in lines)
    return f"{kind} {name} {{\n{body}\n}}\n"


def serialize(value) -> str:
    if isinstance(value, WorkflowModel):
        return serialize_workflow(value)
    if isinstance(value, ArchitectureModel):
        return serialize_architecture(value)
    if isinstance(value, StateChartModel):
        return serialize_statechart(value)
    if isinstance(value, MappingModel):
        return serialize_mapping(value)
    if isinstance(value, Delta):
        return serialize_delta(value)
    if isinstance(value, ProductLineManifest):
        return serialize_manifest(value)
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _node_decl(node: WorkflowNode) -> str:
    keyword = {
        NodeKind.TASK: "task",
        NodeKind.DECISION: "decision",
        NodeKind.MERGE: "merge",
        NodeKind.FORK: "fork",
        NodeKind.JOIN: "join",
        NodeKind.INITIAL: "initial",
        NodeKind.FINAL: "final",
    }[node.kind]
    if node.kind is NodeKind.TASK and (
        node.arrival_rate is not None or node.service_rate is not None
    ):
        parts = []
        if node.arrival_rate is not None:
            parts.append(f"arrival {_num(node.arrival_rate)};")
        if node.service_rate is not None:
            parts.append(f"service {_num(node.service_rate)};")
        return f"task {node.id} {{ {' '.join(parts)} }}"
    return f"{keyword} {node.id};"


def _wf_transition_decl(tr: WorkflowTransition) -> str:
    text = f"transition {tr.id}: {tr.source} -> {tr.target}"
    if tr.guard is not None:
        text += f" guard {_quote(tr.guard)}"
    if tr.probability is not None:
        text += f" prob {_num(tr.probability)}"
    return text + ";"


def serialize_workflow(model: WorkflowModel) -> str:
    lines = [_node_decl(n) for n in model.nodes]
    lines += [_wf_transition_decl(t) for t in model.transitions]
    return _document("workflow", model.name, lines)


def _component_lines(comp: Component) -> List[str]:
    if not comp.ports:
        return [f"component {comp.name} {{ }}"]
    lines = [f"component {comp.name} {{"]
    for port in comp.ports:
        direction = "in" if port.direction is PortDirection.IN else "out"
        lines.append(f"  {direction} port {port.name};")
    lines.append("}")
    return lines


def serialize_architecture(model: ArchitectureModel) -> str:
    lines: List[str] = []
    for comp in model.components:
        lines.extend(_component_lines(comp))
    lines += [f"signal {s.name};" for s in model.signals]
    lines += [
        f"connector {c.id}: {c.signal} {c.source} -> {c.target};"
        for c in model.connectors
    ]
    lines += [f"external {e.signal} -> {e.target};" for e in model.external_signals]
    return _document("architecture", model.name, lines)


def _sc_transition_decl(tr: SCTransition) -> str:
    text = f"transition {tr.id}: {tr.source} -> {tr.target}"
    if tr.event is not None:
        text += f" on {tr.event}"
    if tr.guard is not None:
        text += f" if {_quote(tr.guard)}"
    if tr.action is not None:
        text += f" do {_quote(tr.action)}"
    return text + ";"


def serialize_statechart(model: StateChartModel) -> str:
    lines = [f"{_state_keyword(s)} {s.id};" for s in model.states]
    lines += [_sc_transition_decl(t) for t in model.transitions]
    return _document("statechart", model.name, lines)


def _state_keyword(state) -> str:
    return {
        StateKind.INITIAL: "initial",
        StateKind.NORMAL: "state",
        StateKind.FINAL: "final",
    }[state.kind]


def _task_map_decl(tm: TaskMap) -> str:
    return f"task {tm.workflow}.{tm.task} -> component {tm.architecture}.{tm.component};"


def _behavior_map_decl(bm: BehaviorMap) -> str:
    return f"component {bm.architecture}.{bm.component} -> statechart {bm.statechart};"


def serialize_mapping(model: MappingModel) -> str:
    lines = [_task_map_decl(tm) for tm in model.task_maps]
    lines += [_behavior_map_decl(bm) for bm in model.behavior_maps]
    return _document("mapping", model.name, lines)


def _operation_lines(op: DeltaOperation) -> List[str]:
    action = op.action.value
    if op.target in NODE_KIND_TARGETS:
        kindkw = {
            DeltaTarget.TASK: "task",
            DeltaTarget.DECISION: "decision",
            DeltaTarget.MERGE: "merge",
            DeltaTarget.FORK: "fork",
            DeltaTarget.JOIN: "join",
            DeltaTarget.INITIAL_NODE: "initial",
            DeltaTarget.FINAL_NODE: "final",
        }[op.target]
        if op.action is DeltaAction.REMOVE:
            return [f"remove {kindkw} {op.payload};"]
        node: WorkflowNode = op.payload
        decl = _node_decl(node)
        return [f"{action} {decl}"]
    if op.target is DeltaTarget.WF_TRANSITION:
        if op.action is DeltaAction.REMOVE:
            return [f"remove transition {op.payload};"]
        return [f"{action} {_wf_transition_decl(op.payload)}"]
    if op.target is DeltaTarget.PERFORMANCE_VALUES:
        values: PerformanceValues = op.payload
        parts = []
        if values.arrival is not None:
            parts.append(f"arrival {_num(values.arrival)};")
        if values.service is not None:
            parts.append(f"service {_num(values.service)};")
        return [f"modify performance {values.task} {{ {' '.join(parts)} }}"]
    if op.target is DeltaTarget.COMPONENT:
        if op.action is DeltaAction.REMOVE:
            return [f"remove component {op.payload};"]
        comp: Component = op.payload
        lines = _component_lines(comp)
        lines[0] = f"{action} {lines[0]}"
        return lines
    if op.target is DeltaTarget.PORT:
        if op.action is DeltaAction.ADD:
            ref: PortRef = op.payload
            direction = "in" if ref.port.direction is PortDirection.IN else "out"
            return [f"add {direction} port {ref.component}.{ref.port.name};"]
        return [f"remove port {op.payload};"]
    if op.target is DeltaTarget.CONNECTION:
        if op.action is DeltaAction.REMOVE:
            return [f"remove connector {op.payload};"]
        c = op.payload
        return [f"add connector {c.id}: {c.signal} {c.source} -> {c.target};"]
    if op.target is DeltaTarget.SIGNAL:
        return [f"modify signal {op.payload};"]
    if op.target in STATE_KIND_TARGETS:
        kindkw = {
            DeltaTarget.STATE: "state",
            DeltaTarget.SC_INITIAL: "initial",
            DeltaTarget.SC_FINAL: "final",
        }[op.target]
        if op.action is DeltaAction.ADD:
            return [f"add {kindkw} {op.payload.id};"]
        return [f"{action} {kindkw} {op.payload};"]
    if op.target is DeltaTarget.SC_TRANSITION:
        if op.action is DeltaAction.REMOVE:
            return [f"remove transition {op.payload};"]
        return [f"{action} {_sc_transition_decl(op.payload)}"]
    if op.target is DeltaTarget.TASK_MAP:
        return [f"{action} {_task_map_decl(op.payload)}"]
    if op.target is DeltaTarget.BEHAVIOR_MAP:
        return [f"{action} {_behavior_map_decl(op.payload)}"]
    raise TypeError(f"cannot serialize operation {op}")  # pragma: no cover


def serialize_delta(delta: Delta) -> str:
    if delta.mode == DELTA_MODE_REMOVES:
        perspective, name = delta.target
        return f"delta {delta.name} removes {perspective} {name};\n"
    if delta.mode == DELTA_MODE_CREATES:
        perspective, name = delta.target
        inner = serialize(delta.new_model)
        # drop the document header/footer, keep the body lines
        body_lines = inner.splitlines()[1:-1]
        header = f"delta {delta.name} creates {perspective} {name} {{"
        if not body_lines:
            return header + " }\n"
        return header + "\n" + "\n".join(body_lines) + "\n}\n"
    target = (
        "mapping"
        if len(delta.target) == 1
        else f"{delta.target[0]} {delta.target[1]}"
    )
    lines: List[str] = []
    for op in delta.operations:
        lines.extend(_operation_lines(op))
    if not lines:
        return f"delta {delta.name} on {target} {{ }}\n"
    body = "\n".join(f"  {line}" for line in lines)
    return f"delta {delta.name} on {target} {{\n{body}\n}}\n"


def serialize_manifest(manifest: ProductLineManifest) -> str:
    lines: List[str] = []
    if manifest.core_file_strings:
        lines.append("core {")
        lines += [f"  file {_quote(s)};" for s in manifest.core_file_strings]
        lines.append("}")
    if manifest.delta_file_strings:
        lines.append("deltas {")
        lines += [f"  delta {_quote(s)};" for s in manifest.delta_file_strings]
        lines.append("}")
    for variant in manifest.variants:
        if variant.delta_names:
            lines.append(
                f"variant {variant.name} {{ apply {', '.join(variant.delta_names)}; }}"
            )
        else:
            lines.append(f"variant {variant.name} {{ }}")
    return _document("productline", manifest.name, lines)
