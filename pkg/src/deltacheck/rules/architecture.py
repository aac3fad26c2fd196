"""Well-formedness rules for architecture models (A01-A11)."""

from __future__ import annotations

from collections import Counter

from ..models import ArchitectureModel, PERSPECTIVE_ARCHITECTURE, PortDirection
from .base import Diagnostic, Rule, RuleContext, RuleLevel, Severity


def _diag(ctx, rule, elements, message, severity=Severity.ERROR):
    return Diagnostic(rule, ctx.ref, elements, severity, message)


def external_key(external) -> str:
    return f"external {external.signal} -> {external.target}"


def _port_table(model: ArchitectureModel) -> dict[str, dict[str, PortDirection]]:
    table: dict[str, dict[str, PortDirection]] = {}
    for comp in model.components:
        ports = table.setdefault(comp.name, {})
        for port in comp.ports:
            ports.setdefault(port.name, port.direction)
    return table


def _resolves(table, endpoint) -> bool:
    return endpoint.port in table.get(endpoint.component, {})


def _a01(ctx: RuleContext):
    counts = Counter(c.name for c in ctx.model.components)
    return [
        _diag(ctx, "A01", (name,), f"component name '{name}' is declared {n} times")
        for name, n in sorted(counts.items())
        if n > 1
    ]


def _a02(ctx: RuleContext):
    out = []
    seen_components: set[str] = set()
    for comp in ctx.model.components:
        if comp.name in seen_components:
            continue
        seen_components.add(comp.name)
        counts = Counter(p.name for p in comp.ports)
        out.extend(
            _diag(
                ctx,
                "A02",
                (f"{comp.name}.{port}",),
                f"port '{port}' is declared {n} times in component '{comp.name}'",
            )
            for port, n in sorted(counts.items())
            if n > 1
        )
    return out


def _attached_ports(model: ArchitectureModel) -> set[str]:
    attached: set[str] = set()
    for conn in model.connectors:
        attached.add(str(conn.source))
        attached.add(str(conn.target))
    for ext in model.external_signals:
        attached.add(str(ext.target))
    return attached


def _a03(ctx: RuleContext):
    attached = _attached_ports(ctx.model)
    out = []
    seen: set[str] = set()
    for comp in ctx.model.components:
        for port in comp.ports:
            qualified = f"{comp.name}.{port.name}"
            if qualified in seen:
                continue
            seen.add(qualified)
            if qualified not in attached:
                out.append(
                    _diag(
                        ctx,
                        "A03",
                        (qualified,),
                        f"port '{qualified}' is attached to no connector or external signal",
                    )
                )
    return out


def _a04(ctx: RuleContext):
    model: ArchitectureModel = ctx.model
    table = _port_table(model)
    out = []
    for conn in model.connectors:
        missing = [
            str(e) for e in (conn.source, conn.target) if not _resolves(table, e)
        ]
        if missing:
            out.append(
                _diag(
                    ctx,
                    "A04",
                    (conn.id,),
                    f"connector '{conn.id}' references missing endpoint(s) "
                    + ", ".join(f"'{m}'" for m in missing),
                )
            )
    for ext in model.external_signals:
        if not _resolves(table, ext.target):
            key = external_key(ext)
            out.append(
                _diag(
                    ctx,
                    "A04",
                    (key,),
                    f"external signal target '{ext.target}' does not exist",
                )
            )
    return out


def _endpoint_expand(ctx: RuleContext, scope: frozenset) -> set:
    model: ArchitectureModel = ctx.model
    hits: set[str] = set()
    for conn in model.connectors:
        endpoints = (
            conn.source.component,
            str(conn.source),
            conn.target.component,
            str(conn.target),
        )
        if any(e in scope for e in endpoints):
            hits.add(conn.id)
    for ext in model.external_signals:
        if ext.target.component in scope or str(ext.target) in scope:
            hits.add(external_key(ext))
    return hits


def _a05(ctx: RuleContext):
    model: ArchitectureModel = ctx.model
    table = _port_table(model)
    out = []
    for conn in model.connectors:
        if not (_resolves(table, conn.source) and _resolves(table, conn.target)):
            continue  # unresolved endpoints are A04's finding
        src_dir = table[conn.source.component][conn.source.port]
        tgt_dir = table[conn.target.component][conn.target.port]
        if src_dir is not PortDirection.OUT or tgt_dir is not PortDirection.IN:
            out.append(
                _diag(
                    ctx,
                    "A05",
                    (conn.id,),
                    f"connector '{conn.id}' must run from an out port to an in port",
                )
            )
    return out


def _a06(ctx: RuleContext):
    counts = Counter(s.name for s in ctx.model.signals)
    return [
        _diag(ctx, "A06", (name,), f"signal '{name}' is declared {n} times")
        for name, n in sorted(counts.items())
        if n > 1
    ]


def _a07(ctx: RuleContext):
    declared = {s.name for s in ctx.model.signals}
    return [
        _diag(
            ctx,
            "A07",
            (conn.id,),
            f"connector '{conn.id}' carries undeclared signal '{conn.signal}'",
        )
        for conn in ctx.model.connectors
        if conn.signal not in declared
    ]


def _a08(ctx: RuleContext):
    model: ArchitectureModel = ctx.model
    carried = {c.signal for c in model.connectors}
    carried |= {e.signal for e in model.external_signals}
    out = []
    seen: set[str] = set()
    for sig in model.signals:
        if sig.name in seen:
            continue
        seen.add(sig.name)
        if sig.name not in carried:
            out.append(
                _diag(
                    ctx,
                    "A08",
                    (sig.name,),
                    f"signal '{sig.name}' is carried by no connector or external signal",
                    Severity.WARNING,
                )
            )
    return out


def _a09(ctx: RuleContext):
    return [
        _diag(
            ctx,
            "A09",
            (conn.id,),
            f"connector '{conn.id}' has both endpoints on component "
            f"'{conn.source.component}'",
        )
        for conn in ctx.model.connectors
        if conn.source.component == conn.target.component
    ]


def _a10(ctx: RuleContext):
    out = []
    seen: set[str] = set()
    for comp in ctx.model.components:
        if comp.name in seen:
            continue
        seen.add(comp.name)
        if not comp.ports:
            out.append(
                _diag(ctx, "A10", (comp.name,), f"component '{comp.name}' has no ports")
            )
    return out


def _a11(ctx: RuleContext):
    model: ArchitectureModel = ctx.model
    table = _port_table(model)
    out = []
    for ext in model.external_signals:
        if not _resolves(table, ext.target):
            continue  # unresolved targets are A04's finding
        if table[ext.target.component][ext.target.port] is not PortDirection.IN:
            out.append(
                _diag(
                    ctx,
                    "A11",
                    (external_key(ext),),
                    f"external signal '{ext.signal}' targets non-in port '{ext.target}'",
                )
            )
    return out


def architecture_rules() -> list[Rule]:
    def rule(rule_id, description, check, severity=Severity.ERROR, scopable=False, expand=None):
        return Rule(
            id=rule_id,
            level=RuleLevel.INTRA,
            perspective=PERSPECTIVE_ARCHITECTURE,
            description=description,
            severity=severity,
            scopable=scopable,
            check=check,
            expand=expand,
        )

    return [
        rule("A01", "component names are unique", _a01, scopable=True),
        rule("A02", "port names are unique within a component", _a02, scopable=True),
        rule(
            "A03",
            "every port is attached to at least one connector or external signal",
            _a03,
        ),
        rule(
            "A04",
            "connector and external endpoints resolve to existing component ports",
            _a04,
            scopable=True,
            expand=_endpoint_expand,
        ),
        rule(
            "A05",
            "connectors run from an out port to an in port",
            _a05,
            scopable=True,
            expand=_endpoint_expand,
        ),
        rule("A06", "signal names are unique", _a06, scopable=True),
        rule(
            "A07",
            "every connector's signal is declared",
            _a07,
            scopable=True,
            expand=_endpoint_expand,
        ),
        rule(
            "A08",
            "every declared signal is carried by a connector or external signal",
            _a08,
            severity=Severity.WARNING,
        ),
        rule(
            "A09",
            "no connector has both endpoints on the same component",
            _a09,
            scopable=True,
            expand=_endpoint_expand,
        ),
        rule("A10", "every component has at least one port", _a10),
        rule(
            "A11",
            "external signals target in ports",
            _a11,
            scopable=True,
            expand=_endpoint_expand,
        ),
    ]
