"""Set partitions of a slot set and their classification relative to a shape.

A partition is a tuple of blocks; each block is a sorted tuple and blocks
are ordered by their minimal element.  The same enumerator works for any
totally ordered atoms, which is how partitions of the *block set* of a
partition are produced.
"""

from __future__ import annotations

from itertools import combinations
from math import comb
from typing import Iterable, Iterator, Sequence, TypeVar

from .expr import Shape, Slot

T = TypeVar("T")

SetPartition = tuple  # tuple[tuple[T, ...], ...]


def set_partitions(items: Iterable[T]) -> Iterator[tuple[tuple[T, ...], ...]]:
    """Every partition of ``items`` exactly once, in canonical form."""
    atoms = sorted(items)
    if not atoms:
        raise ValueError("cannot partition an empty set")
    if len(set(atoms)) != len(atoms):
        raise ValueError("atoms must be distinct")
    blocks: list[list[T]] = []

    def rec(i: int):
        if i == len(atoms):
            yield tuple(tuple(b) for b in blocks)
            return
        x = atoms[i]
        for b in blocks:
            b.append(x)
            yield from rec(i + 1)
            b.pop()
        blocks.append([x])
        yield from rec(i + 1)
        blocks.pop()

    yield from rec(0)


def index_partitions(n: int) -> list[tuple[tuple[int, ...], ...]]:
    return list(set_partitions(range(n)))


def enumerate_set_partitions(ground: Iterable[Slot]) -> Iterator[SetPartition]:
    return set_partitions(ground)


def partitions_of_blocks(nu: SetPartition) -> Iterator[SetPartition]:
    """Partitions of the set of blocks of ``nu`` (blocks used as atoms)."""
    return set_partitions(nu)


def canonical(blocks: Iterable[Iterable[T]]) -> SetPartition:
    return tuple(sorted(tuple(sorted(b)) for b in blocks))


def bell_number(n: int) -> int:
    bells = [1]
    for m in range(n):
        bells.append(sum(comb(m, k) * bells[k] for k in range(m + 1)))
    return bells[n]


def _check_ground(nu: SetPartition, shape: Shape) -> None:
    flat = sorted(s for b in nu for s in b)
    if flat != sorted(shape.slots()):
        raise ValueError(f"partition does not cover the slots of shape {shape}")


def _groups(block: Iterable[Slot]) -> set[int]:
    return {s.group for s in block}


def is_row_partition(lam: SetPartition, shape: Shape) -> bool:
    _check_ground(lam, shape)
    if len(lam) != 2:
        return False
    g1, g2 = _groups(lam[0]), _groups(lam[1])
    return not (g1 & g2)


def is_mixing_partition(nu: SetPartition, shape: Shape) -> bool:
    """Some block meets at least two groups."""
    _check_ground(nu, shape)
    return any(len(_groups(b)) >= 2 for b in nu)


def row_partitions(shape: Shape) -> Iterator[SetPartition]:
    """All row partitions, generated from bipartitions of the group indices.

    Group 1 is pinned to the first part so each unordered pair appears once.
    """
    groups = shape.groups()
    n = shape.n
    rest = range(1, n)
    for k in range(0, n - 1):
        for extra in combinations(rest, k):
            first = {0, *extra}
            part1 = tuple(s for i in sorted(first) for s in groups[i])
            part2 = tuple(s for i in range(n) if i not in first for s in groups[i])
            yield canonical((part1, part2))


def _strongly_mixing_literal(nu: SetPartition, shape: Shape) -> bool:
    for lam in row_partitions(shape):
        parts = [set(p) for p in lam]
        if all(any(set(b) <= p for p in parts) for b in nu):
            return False
    return True


def _strongly_mixing_connected(nu: SetPartition, shape: Shape) -> bool:
    if shape.n == 1:
        return True
    parent = list(range(shape.n + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for b in nu:
        gs = sorted(_groups(b))
        for g in gs[1:]:
            parent[find(g)] = find(gs[0])
    return len({find(g) for g in range(1, shape.n + 1)}) == 1


def is_strongly_mixing(nu: SetPartition, shape: Shape, method: str = "connectivity") -> bool:
    """No row partition has every block of ``nu`` inside one of its parts.

    ``method="literal"`` scans the row partitions; ``"connectivity"`` checks
    that the graph on groups linked by shared blocks is connected.  A single
    group is vacuously strongly mixing.
    """
    _check_ground(nu, shape)
    if method == "literal":
        return _strongly_mixing_literal(nu, shape)
    if method == "connectivity":
        return _strongly_mixing_connected(nu, shape)
    raise ValueError(f"unknown method {method!r}")


def partition_to_json(nu: SetPartition) -> list[list[str]]:
    return [[s.label for s in b] for b in nu]


def format_partition(nu: SetPartition) -> str:
    return "{" + ", ".join("{" + ", ".join(s.label for s in b) + "}" for b in nu) + "}"


def compositions(total: int) -> list[tuple[int, ...]]:
    """Compositions of ``total`` in lexicographic order."""
    if total < 1:
        return []
    out: list[tuple[int, ...]] = []

    def rec(left: int, prefix: tuple[int, ...]):
        if left == 0:
            out.append(prefix)
            return
        for k in range(1, left + 1):
            rec(left - k, prefix + (k,))

    rec(total, ())
    return out


def sweep_shapes(max_size: int, min_size: int = 1) -> list[Shape]:
    """Every shape with total between ``min_size`` and ``max_size``;
    totals ascending, compositions lexicographic."""
    return [Shape(c) for t in range(min_size, max_size + 1) for c in compositions(t)]


def block_groups(block: Sequence[Slot]) -> set[int]:
    return _groups(block)
