"""Rule and diagnostic primitives shared by the whole catalog."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

from ..models import Model, ModelRef, ModelSet, model_ref_str


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


class RuleLevel(Enum):
    INTRA = "intra"
    INTER = "inter"
    CROSS_VARIANT = "cross-variant"


@dataclass(frozen=True)
class Diagnostic:
    rule: str
    model: ModelRef
    elements: tuple[str, ...]
    severity: Severity = Severity.ERROR
    message: str = ""

    def sort_key(self):
        # message/severity included so the order is total even for exotic ties
        return (
            self.rule,
            model_ref_str(self.model),
            self.elements,
            self.severity.value,
            self.message,
        )


def sort_diagnostics(diagnostics) -> tuple[Diagnostic, ...]:
    """Canonical, deduplicated diagnostic order: (rule, model, elements)."""
    return tuple(sorted(set(diagnostics), key=Diagnostic.sort_key))


@dataclass(frozen=True)
class RuleContext:
    models: ModelSet
    ref: ModelRef
    model: Model


CheckFn = Callable[[RuleContext], list]
ExpandFn = Callable[[RuleContext, frozenset], set]


@dataclass(frozen=True)
class Rule:
    id: str
    level: RuleLevel
    perspective: str
    description: str
    severity: Severity = Severity.ERROR
    scopable: bool = False
    check: Optional[CheckFn] = None
    expand: Optional[ExpandFn] = None

    def evaluate(self, ctx: RuleContext) -> list:
        if self.check is None:
            raise ValueError(f"rule {self.id} is not evaluated against models")
        return self.check(ctx)

    def candidate_elements(self, ctx: RuleContext, scope: frozenset) -> set:
        """Element ids whose diagnostics a scoped evaluation owns."""
        candidates = set(scope)
        if self.expand is not None:
            candidates |= self.expand(ctx, scope)
        return candidates
