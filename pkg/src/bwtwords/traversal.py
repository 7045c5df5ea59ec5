"""Depth-first traversal of the suffix-link tree driven by left extensions on the BWT."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import NamedTuple

from .text_index import BwtIndex


class Repr(NamedTuple):
    """Right extensions of a string: ``interval(W chars[i]) = [first[i], first[i+1])``.

    Boundaries are 0-based and half-open.
    """

    chars: tuple
    first: tuple

    @property
    def width(self) -> int:
        return self.first[-1] - self.first[0]

    @property
    def right_maximal(self) -> bool:
        return len(self.chars) > 1

    def count(self, i: int) -> int:
        return self.first[i + 1] - self.first[i]


class Extension:
    """One left extension ``aW`` produced while visiting ``W``.

    Observers may attach a ``seed`` (anything) that is handed back when the
    traversal later enters ``aW``.
    """

    __slots__ = ("a", "repr", "seed")

    def __init__(self, a: int, repr: Repr):
        self.a = a
        self.repr = repr
        self.seed = None

    def __repr__(self):
        return f"Extension({self.a}, {self.repr})"


@dataclass
class NodeEvent:
    repr: Repr
    length: int
    lead: int | None  # character prepended to reach this node; None at the root
    seed: object
    extensions: list


@dataclass
class Frame:
    repr: Repr
    length: int
    lead: int | None
    seed: object = None


class Observer:
    """Base observer; subclasses override what they need."""

    stack_bits = 0

    def enter(self, event: NodeEvent) -> None:
        pass

    def exit(self, depth: int) -> None:
        pass


class TraversalError(RuntimeError):
    pass


@dataclass
class TraversalStats:
    nodes: int = 0
    max_frames: int = 0
    max_stack_bits: int = 0
    total_stack_bits: int = 0
    left_extensions: int = 0
    weiner_links: int = 0  # left extensions that do not start with the terminator
    samples: list = field(default_factory=list)
    depth_reads: Counter = field(default_factory=Counter)

    @property
    def avg_stack_bits(self) -> float:
        return self.total_stack_bits / self.nodes if self.nodes else 0.0

    def as_dict(self) -> dict:
        hist = [self.depth_reads.get(d, 0) for d in range(max(self.depth_reads, default=-1) + 1)]
        return {
            "nodes": self.nodes,
            "max_frames": self.max_frames,
            "max_stack_bits": self.max_stack_bits,
            "avg_stack_bits": self.avg_stack_bits,
            "left_extensions": self.left_extensions,
            "depth_reads": hist,
        }


def root_repr(index: BwtIndex) -> Repr:
    C = [int(x) for x in index.C]
    chars = tuple(c for c in range(index.sigma + 1) if C[c + 1] > C[c])
    first = tuple(C[c] for c in chars) + (index.n,)
    return Repr(chars, first)


class LeftExtender:
    """extendLeft with a reusable per-character scratch table."""

    def __init__(self, index: BwtIndex):
        self.index = index
        self.C = [int(x) for x in index.C]
        self.slots: list = [None] * (index.sigma + 1)
        self._buf: list = []

    def __call__(self, rep: Repr) -> list[Extension]:
        slots, C, buf = self.slots, self.C, self._buf
        order = []
        first = rep.first
        for i, b in enumerate(rep.chars):
            buf.clear()
            self.index.distinct(first[i], first[i + 1], buf)
            for a, lo, hi in buf:
                slot = slots[a]
                if slot is None:
                    slot = slots[a] = ([], [C[a] + lo])
                    order.append(a)
                slot[0].append(b)
                slot[1].append(C[a] + hi)
        out = []
        for a in order:
            chars, bounds = slots[a]
            slots[a] = None
            out.append(Extension(a, Repr(tuple(chars), tuple(bounds))))
        return out


def extend_left(index: BwtIndex, rep: Repr) -> list[Extension]:
    return LeftExtender(index)(rep)


def traverse(index: BwtIndex, observers=(), max_len: int | None = None,
             sample_every: int = 0) -> TraversalStats:
    """Enter every right-maximal substring (up to ``max_len``) exactly once.

    Children are pushed largest interval first, so the pending frame count
    stays logarithmic.  Observers get ``exit(depth)`` for each node left
    behind before the next ``enter``.
    """
    observers = list(observers)
    extender = LeftExtender(index)
    stats = TraversalStats()
    cbits = max(1, (index.sigma + 1 - 1).bit_length())
    pbits = max(1, index.n.bit_length())

    def frame_bits(rep: Repr) -> int:
        k = len(rep.chars)
        return k * cbits + (k + 2) * pbits + pbits + 3 * 64

    root = root_repr(index)
    stack = [Frame(root, 0, None)]
    frame_total = frame_bits(root)
    depth = -1

    def unwind(to: int) -> None:
        nonlocal depth
        while depth >= to:
            for ob in observers:
                try:
                    ob.exit(depth)
                except TraversalError:
                    raise
                except Exception as exc:
                    raise TraversalError(f"observer {ob!r} failed on exit at depth {depth}: {exc}") from exc
            depth -= 1

    while stack:
        fr = stack.pop()
        frame_total -= frame_bits(fr.repr)
        unwind(fr.length)
        depth = fr.length
        exts = extender(fr.repr)
        event = NodeEvent(fr.repr, fr.length, fr.lead, fr.seed, exts)
        for ob in observers:
            try:
                ob.enter(event)
            except TraversalError:
                raise
            except Exception as exc:
                raise TraversalError(f"observer {ob!r} failed entering depth {depth}: {exc}") from exc
        stats.nodes += 1
        stats.left_extensions += len(exts)
        stats.weiner_links += sum(1 for e in exts if e.a != 0)

        if max_len is None or fr.length < max_len:
            kids = [e for e in exts if e.a != 0 and e.repr.right_maximal]
            # stable on ties: equal widths keep extendLeft order
            kids.sort(key=lambda e: e.repr.width, reverse=True)
            for e in kids:
                stack.append(Frame(e.repr, fr.length + 1, e.a, e.seed))
                frame_total += frame_bits(e.repr)

        bits = frame_total + sum(ob.stack_bits for ob in observers)
        stats.max_frames = max(stats.max_frames, len(stack))
        stats.max_stack_bits = max(stats.max_stack_bits, bits)
        stats.total_stack_bits += bits
        if sample_every and stats.nodes % sample_every == 0:
            stats.samples.append({"node": stats.nodes, "depth": depth, "frames": len(stack),
                                  "stack_bits": bits})
    unwind(0)
    for ob in observers:
        reads = getattr(ob, "depth_reads", None)
        if reads:
            stats.depth_reads.update(reads)
    return stats


def frame_bound(sigma: int, n: int) -> int:
    return sigma * (math.ceil(math.log2(n)) + 1)
