from .errors import LoadError, ParseError, SourceLocation
from .loader import ProductLine, load_manifest, load_product_line, load_product_line_from_path
from .parser import (
    ProductLineManifest,
    VariantSpec,
    parse_architecture,
    parse_delta,
    parse_document,
    parse_manifest,
    parse_mapping,
    parse_statechart,
    parse_workflow,
)
from .serializer import serialize

__all__ = [
    "LoadError",
    "ParseError",
    "SourceLocation",
    "ProductLine",
    "ProductLineManifest",
    "VariantSpec",
    "load_manifest",
    "load_product_line",
    "load_product_line_from_path",
    "parse_architecture",
    "parse_delta",
    "parse_document",
    "parse_manifest",
    "parse_mapping",
    "parse_statechart",
    "parse_workflow",
    "serialize",
]
