"""Loads a product-line manifest and every file it references."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from ..delta import Delta
from ..models import (
    ArchitectureModel,
    MappingModel,
    ModelSet,
    StateChartModel,
    WorkflowModel,
)
from .errors import LoadError, ParseError
from .parser import ProductLineManifest, parse_document, parse_manifest


@dataclass(frozen=True)
class ProductLine:
    manifest: ProductLineManifest
    core: ModelSet
    deltas: dict[str, Delta]

    def variant_deltas(self, variant_name: str) -> list[Delta]:
        for variant in self.manifest.variants:
            if variant.name == variant_name:
                return [self.deltas[d] for d in variant.delta_names]
        raise KeyError(f"unknown variant '{variant_name}'")


def load_manifest(path: Path) -> ProductLineManifest:
    path = Path(path)
    if not path.is_file():
        raise LoadError(f"manifest not found: {path}")
    text = path.read_text(encoding="utf-8")
    return parse_manifest(text, file=str(path), base_dir=path.parent)


def load_product_line(manifest: ProductLineManifest) -> ProductLine:
    """Parse all referenced files into a core model set and a delta library."""
    workflows: dict[str, WorkflowModel] = {}
    architectures: dict[str, ArchitectureModel] = {}
    statecharts: dict[str, StateChartModel] = {}
    mapping: MappingModel | None = None
    for file in manifest.core_files:
        model = _parse_file(file)
        if isinstance(model, Delta):
            raise LoadError(f"{file}: core files must be models, not deltas")
        if isinstance(model, WorkflowModel):
            _add_unique(workflows, model.name, model, file, "workflow")
        elif isinstance(model, ArchitectureModel):
            _add_unique(architectures, model.name, model, file, "architecture")
        elif isinstance(model, StateChartModel):
            _add_unique(statecharts, model.name, model, file, "statechart")
        elif isinstance(model, MappingModel):
            if mapping is not None:
                raise LoadError(f"{file}: a product line has exactly one mapping")
            mapping = model
        else:  # pragma: no cover - parse_document is exhaustive
            raise LoadError(f"{file}: unsupported model kind")

    deltas: dict[str, Delta] = {}
    for file in manifest.delta_files:
        delta = _parse_file(file)
        if not isinstance(delta, Delta):
            raise LoadError(f"{file}: delta files must contain a delta")
        if delta.name in deltas:
            raise LoadError(f"{file}: duplicate delta name '{delta.name}'")
        deltas[delta.name] = delta

    for variant in manifest.variants:
        for name in variant.delta_names:
            if name not in deltas:
                raise LoadError(
                    f"variant '{variant.name}' applies unknown delta '{name}'"
                )

    core = ModelSet(
        workflows, architectures, statecharts, mapping or MappingModel()
    )
    return ProductLine(manifest, core, deltas)


def load_product_line_from_path(path: Path) -> ProductLine:
    return load_product_line(load_manifest(path))


def _parse_file(path: Path):
    path = Path(path)
    if not path.is_file():
        raise LoadError(f"referenced file not found: {path}")
    text = path.read_text(encoding="utf-8")
    return parse_document(text, file=str(path))


def _add_unique(pool: dict, name: str, model, file: Path, kind: str) -> None:
    if name in pool:
        raise LoadError(f"{file}: duplicate {kind} model name '{name}'")
    pool[name] = model
