"""Forward and backward reachability over id-level edge sets.

The graph helpers work on plain (source, target) identifier pairs so they can
be shared by workflow and state chart rules as well as by element-scoped
re-validation. Identifiers are opaque; edges may mention ids that no declared
element carries (dangling references are the rules' business, not ours).
"""

from __future__ import annotations

from collections import defaultdict
from typing import Hashable, Iterable

Edge = tuple[Hashable, Hashable]


def reachable(edges: Iterable[Edge], start: Iterable[Hashable]) -> set[Hashable]:
    """Least fixed point of forward reachability from ``start`` (inclusive)."""
    succ: dict[Hashable, list[Hashable]] = defaultdict(list)
    for src, dst in edges:
        succ[src].append(dst)
    seen: set[Hashable] = set(start)
    frontier = list(seen)
    while frontier:
        node = frontier.pop()
        for nxt in succ.get(node, ()):
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return seen


def co_reachable(edges: Iterable[Edge], targets: Iterable[Hashable]) -> set[Hashable]:
    """Reachability on the reversed edge set: every id that can reach ``targets``."""
    return reachable([(dst, src) for src, dst in edges], targets)
