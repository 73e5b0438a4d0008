"""Nested upward sequences of partitions and their coloured-forest encoding.

Level 1 of a sequence is a partition of the slots; level ``i + 1`` is a
partition of the blocks of level ``i``.  A block at level ``i`` is a sorted
tuple of level ``i - 1`` blocks (slots at level 1), so every level is a
canonical partition in the sense of :mod:`bicumulant.partitions`.

A sequence is nested when no level is the all-singletons partition of the
level below; total partitions are allowed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .cumulants import kappa
from .expr import STAR, Expr, Shape, Slot, generator, product
from .forests import (
    Colouring,
    Internal,
    ReducedForest,
    internal_vertices,
    is_gap_free,
    is_weakly_mixing,
    leaves,
    min_leaf,
    vertices,
)
from .partitions import canonical, is_mixing_partition, set_partitions

Level = tuple  # tuple of blocks


@dataclass(frozen=True)
class UpwardSequence:
    levels: tuple[Level, ...]

    def __post_init__(self):
        if not self.levels:
            raise ValueError("a sequence has at least one level")
        first = self.levels[0]
        slots = [s for b in first for s in b]
        if not all(isinstance(s, Slot) for s in slots) or len(set(slots)) != len(slots):
            raise ValueError("level 1 must partition a set of slots")
        if canonical(first) != first:
            raise ValueError("level 1 is not in canonical form")
        for lower, upper in zip(self.levels, self.levels[1:]):
            members = [b for blk in upper for b in blk]
            if sorted(members) != sorted(lower) or len(members) != len(lower):
                raise ValueError("each level must partition the blocks of the previous one")
            if canonical(upper) != upper:
                raise ValueError("level is not in canonical form")
            if len(upper) == len(lower):
                raise ValueError("identity level: the sequence is not nested")

    @property
    def length(self) -> int:
        return len(self.levels)

    def slots(self) -> tuple[Slot, ...]:
        return tuple(sorted(s for b in self.levels[0] for s in b))

    def to_json(self) -> list:
        """Level 1 as lists of slot labels; higher levels as lists of
        indices into the previous level's block list."""
        out = [[[s.label for s in b] for b in self.levels[0]]]
        for lower, upper in zip(self.levels, self.levels[1:]):
            index = {b: i for i, b in enumerate(lower)}
            out.append([[index[b] for b in blk] for blk in upper])
        return out

    def __str__(self) -> str:
        return " / ".join(str(level) for level in self.to_json())


def _extend(levels: list[Level]) -> Iterator[UpwardSequence]:
    yield UpwardSequence(tuple(levels))
    top = levels[-1]
    for p in set_partitions(top):
        if len(p) == len(top):
            continue
        levels.append(p)
        yield from _extend(levels)
        levels.pop()


def enumerate_sequences(shape: Shape, require_mixing_start: bool = True) -> Iterator[UpwardSequence]:
    """Every nested upward sequence over the slots of ``shape``.

    Sequences come grouped by first level (canonical partition order), then
    depth-first over later levels.
    """
    for nu in set_partitions(shape.slots()):
        if require_mixing_start and not is_mixing_partition(nu, shape):
            continue
        yield from _extend([nu])


def kappa_of_sequence(w: UpwardSequence) -> Expr:
    """Apply the block cumulant at every level, then star-combine the top."""
    value: dict = {}
    for s in w.slots():
        value[s] = generator(s)
    for level in w.levels:
        for blk in level:
            value[blk] = kappa([value[m] for m in blk])
    return product(STAR, (value[b] for b in w.levels[-1]))


# -- the bijection with coloured forests -------------------------------------


def phi(w: UpwardSequence) -> tuple[ReducedForest, Colouring]:
    """Coloured forest of a sequence: a vertex per block per level coloured
    by its level, with single-child vertices contracted away."""
    # each vertex is (tree, colour); contracting keeps the child
    node: dict = {s: (s, 0) for s in w.slots()}
    colour_of: dict[frozenset, int] = {}
    for i, level in enumerate(w.levels, start=1):
        for blk in level:
            kids = [node[m] for m in blk]
            if len(kids) == 1:
                node[blk] = kids[0]
                continue
            t = Internal(sorted((k[0] for k in kids), key=min_leaf))
            node[blk] = (t, i)
            colour_of[frozenset(leaves(t))] = i
    forest = ReducedForest(sorted((node[b][0] for b in w.levels[-1]), key=min_leaf))
    col = {}
    for addr, v in vertices(forest):
        col[addr] = 0 if type(v) is Slot else colour_of[frozenset(leaves(v))]
    return forest, Colouring.from_mapping(col)


def phi_inverse(f: ReducedForest, c: Colouring) -> UpwardSequence:
    """Sequence whose level ``i`` groups the vertices coloured at most ``i``
    that sit directly below a vertex coloured above ``i`` (or are roots)."""
    if not is_gap_free(f, c):
        raise ValueError("colouring is not gap-free")
    if not is_weakly_mixing(f, c):
        raise ValueError("colouring is not weakly mixing")
    r = c.length
    if r == 0:
        raise ValueError("the length-0 colouring has no sequence")
    col = c.as_dict()
    # rep[addr] is the block a vertex stands for at the current level
    rep: dict = {a: v for a, v in vertices(f) if type(v) is Slot}
    children = {a: [a + (i,) for i in range(len(v))] for a, v in internal_vertices(f)}
    frontier = sorted(rep)
    levels = []
    for i in range(1, r + 1):
        new_rep = {}
        new_frontier = set()
        for a in frontier:
            parent = a[:-1]
            if len(a) > 1 and col[parent] == i:
                new_frontier.add(parent)
            else:
                new_frontier.add(a)
                new_rep[a] = (rep[a],)
        for p in new_frontier:
            if p not in new_rep:
                new_rep[p] = tuple(sorted(rep[k] for k in children[p]))
        levels.append(canonical(new_rep.values()))
        rep, frontier = new_rep, sorted(new_frontier)
    return UpwardSequence(tuple(levels))


def sequence_from_json(data) -> UpwardSequence:
    """Inverse of :meth:`UpwardSequence.to_json`."""
    first = canonical(tuple(Slot.parse(lbl) for lbl in blk) for blk in data[0])
    levels = [first]
    for raw in data[1:]:
        prev = levels[-1]
        levels.append(canonical(tuple(prev[i] for i in blk) for blk in raw))
    return UpwardSequence(tuple(levels))
