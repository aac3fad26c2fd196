"""In-memory representations of the four model kinds.

Models are immutable values: delta application and parsing construct new
instances, never mutate existing ones. Element collections are stored as
tuples to keep declaration order (serialization is order-preserving), but
equality is order-insensitive — two models are structurally equal when they
hold the same elements, no matter the order in which they arrived.

Inconsistent states are deliberately representable: transitions may reference
missing nodes, mapping entries may dangle, ids may collide after deltas. The
rule catalog reports those; constructors do not reject them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional, Union


class NodeKind(Enum):
    TASK = "task"
    DECISION = "decision"
    MERGE = "merge"
    FORK = "fork"
    JOIN = "join"
    INITIAL = "initial"
    FINAL = "final"


class PortDirection(Enum):
    IN = "in"
    OUT = "out"


class StateKind(Enum):
    INITIAL = "initial"
    NORMAL = "state"
    FINAL = "final"


@dataclass(frozen=True)
class WorkflowNode:
    id: str
    kind: NodeKind
    arrival_rate: Optional[float] = None
    service_rate: Optional[float] = None

    def __post_init__(self) -> None:
        if self.kind is not NodeKind.TASK and (
            self.arrival_rate is not None or self.service_rate is not None
        ):
            raise ValueError(
                f"node '{self.id}': arrival/service rates are only valid on tasks"
            )


@dataclass(frozen=True)
class WorkflowTransition:
    id: str
    source: str
    target: str
    guard: Optional[str] = None
    probability: Optional[float] = None

    def __post_init__(self) -> None:
        if self.probability is not None and self.probability != self.probability:
            raise ValueError(f"transition '{self.id}': probability must be a number")


@dataclass(frozen=True, eq=False)
class WorkflowModel:
    name: str
    nodes: tuple[WorkflowNode, ...] = ()
    transitions: tuple[WorkflowTransition, ...] = ()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WorkflowModel):
            return NotImplemented
        return (
            self.name == other.name
            and frozenset(self.nodes) == frozenset(other.nodes)
            and frozenset(self.transitions) == frozenset(other.transitions)
        )

    def __hash__(self) -> int:
        return hash((self.name, frozenset(self.nodes), frozenset(self.transitions)))


@dataclass(frozen=True)
class Port:
    name: str
    direction: PortDirection


@dataclass(frozen=True, eq=False)
class Component:
    name: str
    ports: tuple[Port, ...] = ()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Component):
            return NotImplemented
        return self.name == other.name and frozenset(self.ports) == frozenset(other.ports)

    def __hash__(self) -> int:
        return hash((self.name, frozenset(self.ports)))


@dataclass(frozen=True)
class Signal:
    name: str


@dataclass(frozen=True)
class Endpoint:
    component: str
    port: str

    def __str__(self) -> str:
        return f"{self.component}.{self.port}"


@dataclass(frozen=True)
class Connector:
    id: str
    signal: str
    source: Endpoint
    target: Endpoint


@dataclass(frozen=True)
class ExternalSignal:
    signal: str
    target: Endpoint


@dataclass(frozen=True, eq=False)
class ArchitectureModel:
    name: str
    components: tuple[Component, ...] = ()
    signals: tuple[Signal, ...] = ()
    connectors: tuple[Connector, ...] = ()
    external_signals: tuple[ExternalSignal, ...] = ()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ArchitectureModel):
            return NotImplemented
        return (
            self.name == other.name
            and frozenset(self.components) == frozenset(other.components)
            and frozenset(self.signals) == frozenset(other.signals)
            and frozenset(self.connectors) == frozenset(other.connectors)
            and frozenset(self.external_signals) == frozenset(other.external_signals)
        )

    def __hash__(self) -> int:
        return hash(
            (
                self.name,
                frozenset(self.components),
                frozenset(self.signals),
                frozenset(self.connectors),
                frozenset(self.external_signals),
            )
        )


@dataclass(frozen=True)
class State:
    id: str
    kind: StateKind


@dataclass(frozen=True)
class SCTransition:
    id: str
    source: str
    target: str
    event: Optional[str] = None
    guard: Optional[str] = None
    action: Optional[str] = None


@dataclass(frozen=True, eq=False)
class StateChartModel:
    name: str
    states: tuple[State, ...] = ()
    transitions: tuple[SCTransition, ...] = ()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StateChartModel):
            return NotImplemented
        return (
            self.name == other.name
            and frozenset(self.states) == frozenset(other.states)
            and frozenset(self.transitions) == frozenset(other.transitions)
        )

    def __hash__(self) -> int:
        return hash((self.name, frozenset(self.states), frozenset(self.transitions)))


@dataclass(frozen=True)
class TaskMap:
    """Links a workflow task to an executing architecture component."""

    task: str
    workflow: str
    component: str
    architecture: str

    def key(self) -> str:
        return f"task {self.workflow}.{self.task} -> component {self.architecture}.{self.component}"


@dataclass(frozen=True)
class BehaviorMap:
    """Links an architecture component to the state chart describing it."""

    component: str
    architecture: str
    statechart: str

    def key(self) -> str:
        return f"component {self.architecture}.{self.component} -> statechart {self.statechart}"


@dataclass(frozen=True, eq=False)
class MappingModel:
    name: str = "M"
    task_maps: tuple[TaskMap, ...] = ()
    behavior_maps: tuple[BehaviorMap, ...] = ()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MappingModel):
            return NotImplemented
        return (
            self.name == other.name
            and frozenset(self.task_maps) == frozenset(other.task_maps)
            and frozenset(self.behavior_maps) == frozenset(other.behavior_maps)
        )

    def __hash__(self) -> int:
        return hash(
            (self.name, frozenset(self.task_maps), frozenset(self.behavior_maps))
        )


Model = Union[WorkflowModel, ArchitectureModel, StateChartModel, MappingModel]

PERSPECTIVE_WORKFLOW = "workflow"
PERSPECTIVE_ARCHITECTURE = "architecture"
PERSPECTIVE_STATECHART = "statechart"
PERSPECTIVE_MAPPING = "mapping"

# Reference to a checkable target: ("workflow", name) etc., or ("mapping",).
ModelRef = tuple

MAPPING_REF: ModelRef = (PERSPECTIVE_MAPPING,)


def model_ref_str(ref: ModelRef) -> str:
    if ref == MAPPING_REF:
        return PERSPECTIVE_MAPPING
    return f"{ref[0]}:{ref[1]}"


@dataclass(frozen=True, eq=False)
class ModelSet:
    """One variant's worth of models: the three perspectives plus the mapping."""

    workflows: dict[str, WorkflowModel] = field(default_factory=dict)
    architectures: dict[str, ArchitectureModel] = field(default_factory=dict)
    statecharts: dict[str, StateChartModel] = field(default_factory=dict)
    mapping: MappingModel = field(default_factory=MappingModel)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ModelSet):
            return NotImplemented
        return (
            self.workflows == other.workflows
            and self.architectures == other.architectures
            and self.statecharts == other.statecharts
            and self.mapping == other.mapping
        )

    def models_of(self, perspective: str) -> dict:
        return {
            PERSPECTIVE_WORKFLOW: self.workflows,
            PERSPECTIVE_ARCHITECTURE: self.architectures,
            PERSPECTIVE_STATECHART: self.statecharts,
        }[perspective]

    def model_refs(self) -> list[ModelRef]:
        """Checkable targets in deterministic order: models first, mapping last."""
        refs: list[ModelRef] = []
        refs.extend((PERSPECTIVE_WORKFLOW, name) for name in self.workflows)
        refs.extend((PERSPECTIVE_ARCHITECTURE, name) for name in self.architectures)
        refs.extend((PERSPECTIVE_STATECHART, name) for name in self.statecharts)
        refs.append(MAPPING_REF)
        return refs

    def resolve(self, ref: ModelRef) -> Optional[Model]:
        if ref == MAPPING_REF:
            return self.mapping
        perspective, name = ref
        return self.models_of(perspective).get(name)

    def iter_models(self) -> Iterator[tuple[ModelRef, Model]]:
        for ref in self.model_refs():
            yield ref, self.resolve(ref)

    def replace_model(self, ref: ModelRef, model: Model) -> "ModelSet":
        """Copy-on-write update; the receiver is left untouched."""
        if ref == MAPPING_REF:
            return ModelSet(
                dict(self.workflows),
                dict(self.architectures),
                dict(self.statecharts),
                model,
            )
        perspective, name = ref
        pools = {
            PERSPECTIVE_WORKFLOW: dict(self.workflows),
            PERSPECTIVE_ARCHITECTURE: dict(self.architectures),
            PERSPECTIVE_STATECHART: dict(self.statecharts),
        }
        if model is None:
            pools[perspective].pop(name, None)
        else:
            pools[perspective][name] = model
        return ModelSet(
            pools[PERSPECTIVE_WORKFLOW],
            pools[PERSPECTIVE_ARCHITECTURE],
            pools[PERSPECTIVE_STATECHART],
            self.mapping,
        )


class ElementIndex:
    """Constant-time id/name lookups for one model; rebuilt after every delta."""

    def __init__(self, model: Model):
        self.by_id: dict[str, object] = {}
        if isinstance(model, WorkflowModel):
            for node in model.nodes:
                self.by_id.setdefault(node.id, node)
            for tr in model.transitions:
                self.by_id.setdefault(tr.id, tr)
        elif isinstance(model, ArchitectureModel):
            for comp in model.components:
                self.by_id.setdefault(comp.name, comp)
                for port in comp.ports:
                    self.by_id.setdefault(f"{comp.name}.{port.name}", port)
            for sig in model.signals:
                self.by_id.setdefault(sig.name, sig)
            for conn in model.connectors:
                self.by_id.setdefault(conn.id, conn)
        elif isinstance(model, StateChartModel):
            for state in model.states:
                self.by_id.setdefault(state.id, state)
            for tr in model.transitions:
                self.by_id.setdefault(tr.id, tr)
        elif isinstance(model, MappingModel):
            for tm in model.task_maps:
                self.by_id.setdefault(tm.key(), tm)
            for bm in model.behavior_maps:
                self.by_id.setdefault(bm.key(), bm)
        else:  # pragma: no cover - defensive
            raise TypeError(f"cannot index {type(model).__name__}")

    def __len__(self) -> int:
        return len(self.by_id)

    def __contains__(self, element_id: str) -> bool:
        return element_id in self.by_id

    def get(self, element_id: str):
        return self.by_id.get(element_id)
