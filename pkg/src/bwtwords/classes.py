"""Which traversal nodes and extensions are maximal repeats, minimal rare or minimal absent words."""

from __future__ import annotations

from typing import NamedTuple

from .scoring import MINIMAL_ABSENT, MINIMAL_RARE
from .traversal import Extension, NodeEvent, Repr


class ClassifiedString(NamedTuple):
    """``a W b`` relative to the visited node ``W``; ``a``/``b`` are ``None`` when absent."""

    cls: int
    length: int
    count: int
    a: int | None = None
    b: int | None = None


def is_maximal_repeat(event: NodeEvent) -> bool:
    # the terminator counts as a distinct left context
    return len(event.extensions) >= 2


def minimal_rare_occurring(ext: Extension, freq: list) -> list[tuple[int, int]]:
    """``(b, f(aWb))`` for every occurring ``aWb`` rarer than ``Wb``.

    ``freq[b]`` must hold ``f(Wb)``.  Only right-maximal ``aW`` qualify, since
    otherwise ``f(aWb) = f(aW)``.
    """
    rep = ext.repr
    if ext.a == 0 or not rep.right_maximal:
        return []
    out = []
    first = rep.first
    for i, b in enumerate(rep.chars):
        if b == 0:
            continue
        f = first[i + 1] - first[i]
        if f < freq[b]:
            out.append((b, f))
    return out


def minimal_absent(node: Repr, ext: Extension) -> list[int]:
    """Codes ``b`` with ``Wb`` occurring and ``aWb`` absent."""
    if ext.a == 0:
        return []
    mine = ext.repr.chars
    out = []
    j = 0
    for b in node.chars:
        while j < len(mine) and mine[j] < b:
            j += 1
        if b != 0 and (j == len(mine) or mine[j] != b):
            out.append(b)
    return out


def classify(event: NodeEvent) -> list[ClassifiedString]:
    """Minimal rare and minimal absent words hanging off a maximal-repeat node."""
    if not is_maximal_repeat(event):
        return []
    rep = event.repr
    freq = {b: rep.count(i) for i, b in enumerate(rep.chars)}
    m = event.length + 2
    out = []
    for ext in event.extensions:
        for b, f in minimal_rare_occurring(ext, freq):
            out.append(ClassifiedString(MINIMAL_RARE, m, f, ext.a, b))
        for b in minimal_absent(rep, ext):
            out.append(ClassifiedString(MINIMAL_ABSENT, m, 0, ext.a, b))
    return out
