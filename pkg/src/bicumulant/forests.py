"""Reduced leaf-labelled forests, their mixing classes and colourings.

A tree is either a bare :class:`~bicumulant.expr.Slot` (a leaf) or an
:class:`Internal` vertex holding at least two subtrees.  A
:class:`ReducedForest` is a tuple of trees.  Children and trees are kept
sorted by their smallest leaf, which makes structural equality the same as
forest equality.

Vertices are addressed by root-path index lists: tree ``k`` has root
address ``(k,)`` and the ``i``-th child of vertex ``v`` has address
``v + (i,)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Iterator, Mapping, Union

from .expr import Shape, Slot
from .partitions import is_strongly_mixing, set_partitions

INFINITY = math.inf

Address = tuple[int, ...]


class Internal(tuple):
    """Internal vertex; a tuple of canonical child trees."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "Internal(" + ", ".join(map(_tree_repr, self)) + ")"


Tree = Union[Slot, Internal]


class ReducedForest(tuple):
    __slots__ = ()

    def __repr__(self) -> str:
        return "ReducedForest(" + ", ".join(map(_tree_repr, self)) + ")"


def _tree_repr(t: Tree) -> str:
    return t.label if isinstance(t, Slot) else repr(t)


def is_leaf(t: Tree) -> bool:
    return type(t) is Slot


def min_leaf(t: Tree) -> Slot:
    while type(t) is not Slot:
        t = t[0]
    return t


def leaves(t: Tree) -> tuple[Slot, ...]:
    if type(t) is Slot:
        return (t,)
    return tuple(sorted(s for c in t for s in leaves(c)))


def forest_leaves(f: ReducedForest) -> tuple[Slot, ...]:
    return tuple(sorted(s for t in f for s in leaves(t)))


def make_tree(children: Iterable[Tree]) -> Internal:
    kids = sorted(children, key=min_leaf)
    if len(kids) < 2:
        raise ValueError("an internal vertex needs at least two children")
    return Internal(kids)


def make_forest(trees: Iterable[Tree]) -> ReducedForest:
    return ReducedForest(sorted(trees, key=min_leaf))


def from_nested(obj) -> Tree:
    """Build a tree from nested lists of slots (leaves may be ``(g, p)`` pairs)."""
    if isinstance(obj, Slot):
        return obj
    if isinstance(obj, tuple) and len(obj) == 2 and all(isinstance(x, int) for x in obj):
        return Slot(*obj)
    return make_tree(from_nested(c) for c in obj)


def height(t: Tree) -> int:
    if type(t) is Slot:
        return 0
    return 1 + max(height(c) for c in t)


def forest_height(f: ReducedForest) -> int:
    return max(height(t) for t in f)


def vertices(f: ReducedForest) -> Iterator[tuple[Address, Tree]]:
    """Preorder walk over every vertex of the forest."""

    def walk(t: Tree, addr: Address):
        yield addr, t
        if type(t) is not Slot:
            for i, c in enumerate(t):
                yield from walk(c, addr + (i,))

    for k, t in enumerate(f):
        yield from walk(t, (k,))


def internal_vertices(f: ReducedForest) -> list[tuple[Address, Internal]]:
    return [(a, v) for a, v in vertices(f) if type(v) is not Slot]


def num_internal(f: ReducedForest) -> int:
    return sum(1 for _ in internal_vertices(f))


def subtree_at(f: ReducedForest, addr: Address) -> Tree:
    t = f[addr[0]]
    for i in addr[1:]:
        t = t[i]
    return t


# -- enumeration -------------------------------------------------------------


@lru_cache(maxsize=None)
def _trees(leafset: tuple[Slot, ...]) -> tuple[Tree, ...]:
    if len(leafset) == 1:
        return (leafset[0],)
    out: list[Tree] = []
    for p in set_partitions(leafset):
        if len(p) < 2:
            continue
        # blocks come sorted by minimum, so children are already canonical
        for kids in product(*(_trees(b) for b in p)):
            out.append(Internal(kids))
    return tuple(out)


def enumerate_reduced_trees(leafset: Iterable[Slot]) -> Iterator[Tree]:
    key = tuple(sorted(leafset))
    if not key:
        raise ValueError("a tree needs at least one leaf")
    return iter(_trees(key))


def enumerate_reduced_forests(leafset: Iterable[Slot]) -> Iterator[ReducedForest]:
    key = tuple(sorted(leafset))
    if not key:
        raise ValueError("a forest needs at least one leaf")
    for p in set_partitions(key):
        for trees in product(*(_trees(b) for b in p)):
            yield ReducedForest(trees)


def count_reduced(n: int) -> tuple[int, int]:
    """(#trees, #forests) on ``n`` labelled leaves, by recurrence on the block
    containing the first leaf.  Used for size estimates."""
    trees = [0, 1]
    forests = [1, 1]
    for m in range(2, n + 1):
        rest = sum(math.comb(m - 1, j - 1) * trees[j] * forests[m - j] for j in range(1, m))
        trees.append(rest)
        forests.append(rest + trees[m])
    return trees[n], forests[n]


# -- classification ----------------------------------------------------------


def _check_leaves(f: ReducedForest, shape: Shape) -> None:
    if forest_leaves(f) != tuple(sorted(shape.slots())):
        raise ValueError(f"forest leaves do not match the slots of shape {shape}")


def _bottom_ok(v: Internal) -> bool:
    if all(type(c) is Slot for c in v):
        return len({c.group for c in v}) >= 2
    return True


def is_mixing_forest(f: ReducedForest, shape: Shape) -> bool:
    """Every internal vertex whose children are all leaves sees two groups."""
    _check_leaves(f, shape)
    return all(_bottom_ok(v) for _, v in internal_vertices(f))


def w_of_forest(f: ReducedForest, shape: Shape) -> Union[int, float]:
    """Number of internal vertices if mixing, else ``INFINITY``."""
    if not is_mixing_forest(f, shape):
        return INFINITY
    return num_internal(f)


def w_inductive(t: Tree, shape: Shape) -> Union[int, float]:
    """Height recursion for a single tree: 0 on a leaf, 1 or infinity at
    height one, and one plus the children's values above that."""
    if type(t) is Slot:
        return 0
    if all(type(c) is Slot for c in t):
        return 1 if len({c.group for c in t}) >= 2 else INFINITY
    return sum(w_inductive(c, shape) for c in t) + 1


def nu_of_forest(f: ReducedForest) -> tuple[tuple[Slot, ...], ...]:
    return tuple(leaves(t) for t in f)


def is_strongly_mixing_forest(f: ReducedForest, shape: Shape) -> bool:
    return is_mixing_forest(f, shape) and is_strongly_mixing(nu_of_forest(f), shape)


def forest_predicate(kind: str):
    """Filter by name: ``all``, ``mixing`` or ``strongly-mixing``."""
    if kind == "all":
        return lambda f, shape: True
    if kind == "mixing":
        return is_mixing_forest
    if kind == "strongly-mixing":
        return is_strongly_mixing_forest
    raise ValueError(f"unknown forest filter {kind!r}")


# -- colourings --------------------------------------------------------------


@dataclass(frozen=True)
class Colouring:
    """Vertex colours keyed by address; leaves included (colour 0)."""

    colours: tuple[tuple[Address, int], ...]

    @classmethod
    def from_mapping(cls, m: Mapping[Address, int]) -> Colouring:
        return cls(tuple(sorted(m.items())))

    def as_dict(self) -> dict[Address, int]:
        return dict(self.colours)

    def __getitem__(self, addr: Address) -> int:
        return self.as_dict()[addr]

    @property
    def length(self) -> int:
        return max(c for _, c in self.colours)

    def used(self) -> set[int]:
        return {c for _, c in self.colours}

    def to_json(self) -> list:
        return [[list(a), c] for a, c in self.colours]


def is_gap_free(f: ReducedForest, c: Colouring) -> bool:
    col = c.as_dict()
    addrs = [a for a, _ in vertices(f)]
    if sorted(col) != sorted(addrs):
        return False
    for a, v in vertices(f):
        if type(v) is Slot:
            if col[a] != 0:
                return False
        elif not all(col[a] > col[a + (i,)] for i in range(len(v))):
            return False
    return c.used() == set(range(c.length + 1))


def is_weakly_mixing(f: ReducedForest, c: Colouring) -> bool:
    col = c.as_dict()
    if 1 not in col.values():
        return True
    return any(
        col[a] == 1 and len({ch.group for ch in v if type(ch) is Slot}) >= 2
        for a, v in internal_vertices(f)
    )


def enumerate_colourings(
    f: ReducedForest, shape: Shape | None = None, filter: str = "weakly_mixing"
) -> Iterator[Colouring]:
    """Gap-free colourings, optionally restricted to weakly-mixing ones.

    Colour classes are peeled off level by level: colour ``k`` goes to a
    nonempty subset of the uncoloured internal vertices whose internal
    children already carry colours below ``k``.
    """
    if filter not in ("gap_free", "weakly_mixing"):
        raise ValueError(f"unknown colouring filter {filter!r}")
    if shape is not None:
        _check_leaves(f, shape)
    all_v = list(vertices(f))
    base = {a: 0 for a, v in all_v if type(v) is Slot}
    inner = [(a, v) for a, v in all_v if type(v) is not Slot]
    kids = {a: [a + (i,) for i, ch in enumerate(v) if type(ch) is not Slot] for a, v in inner}
    mixing_bottom = {
        a for a, v in inner if all(type(ch) is Slot for ch in v) and len({ch.group for ch in v}) >= 2
    }
    want_mixing = filter == "weakly_mixing"
    colour: dict[Address, int] = {}
    order = [a for a, _ in inner]

    def rec(level: int):
        remaining = [a for a in order if a not in colour]
        if not remaining:
            yield Colouring.from_mapping({**base, **colour})
            return
        avail = [a for a in remaining if all(k in colour for k in kids[a])]
        for size in range(1, len(avail) + 1):
            for chosen in combinations(avail, size):
                if level == 1 and want_mixing and not mixing_bottom.intersection(chosen):
                    continue
                for a in chosen:
                    colour[a] = level
                yield from rec(level + 1)
                for a in chosen:
                    del colour[a]

    yield from rec(1)


def colouring_sign_sum(f: ReducedForest, shape: Shape) -> int:
    """Signed count of weakly-mixing gap-free colourings, by enumeration."""
    return sum((-1) ** c.length for c in enumerate_colourings(f, shape, "weakly_mixing"))


def project_colouring(f: ReducedForest, c: Colouring, i: int) -> Colouring:
    """Restrict ``c`` to the ``i``-th root subtree of a single tree and
    relabel its colours order-isomorphically onto ``0..l``."""
    if len(f) != 1 or type(f[0]) is Slot:
        raise ValueError("projection needs a single tree of height at least one")
    if not 0 <= i < len(f[0]):
        raise IndexError(f"root has {len(f[0])} children, no child {i}")
    prefix = (0, i)
    sub = {a: col for a, col in c.colours if a[:2] == prefix}
    relabel = {col: k for k, col in enumerate(sorted(set(sub.values())))}
    return Colouring.from_mapping({(0,) + a[2:]: relabel[col] for a, col in sub.items()})


def subtree_forest(f: ReducedForest, i: int) -> ReducedForest:
    return ReducedForest((f[0][i],))


# -- root deletion -----------------------------------------------------------


def root_deletion(t: ReducedForest) -> ReducedForest:
    if len(t) != 1:
        raise ValueError("root deletion needs a single tree")
    if type(t[0]) is Slot:
        raise ValueError("a bare leaf has no root to delete")
    return ReducedForest(t[0])


def root_insertion(f: ReducedForest) -> ReducedForest:
    if len(f) < 2:
        raise ValueError("root insertion needs a forest of at least two trees")
    return ReducedForest((Internal(f),))


def root_deletion_colouring(c: Colouring) -> Colouring:
    col = c.as_dict()
    if (0,) not in col or any(a[0] != 0 for a in col):
        raise ValueError("expected the colouring of a single tree")
    return Colouring.from_mapping({a[1:]: v for a, v in col.items() if len(a) > 1})


def root_insertion_colouring(c: Colouring) -> Colouring:
    col = {(0,) + a: v for a, v in c.colours}
    col[(0,)] = c.length + 1
    return Colouring.from_mapping(col)


# -- lattice paths -----------------------------------------------------------


@lru_cache(maxsize=None)
def _path_F(x: tuple[int, ...]) -> int:
    if any(v < 0 for v in x):
        return 0
    if not any(x):
        return -1
    r = len(x)
    total = 0
    for mask in range(1, 1 << r):
        total += _path_F(tuple(v - ((mask >> i) & 1) for i, v in enumerate(x)))
    return -total


def path_F(x: Iterable[int]) -> int:
    """Signed path count, via the recursion over nonempty step sets."""
    x = tuple(x)
    if not x:
        raise ValueError("arity must be at least one")
    return _path_F(x)


def path_G(x: Iterable[int]) -> int:
    x = tuple(x)
    if not x:
        raise ValueError("arity must be at least one")
    if any(v < 0 for v in x):
        return 0
    return -((-1) ** sum(x))


# -- rendering ---------------------------------------------------------------


def tree_to_json(t: Tree):
    return t.label if type(t) is Slot else [tree_to_json(c) for c in t]


def forest_to_json(f: ReducedForest) -> list:
    return [tree_to_json(t) for t in f]


def tree_notation(t: Tree, fmt: str = "text", kappa: str = "k") -> str:
    """Cumulant notation, e.g. ``k(k(a1_1, a2_1), a1_2)``."""
    if type(t) is Slot:
        return t.label if fmt == "text" else t.latex
    inner = ", ".join(tree_notation(c, fmt, kappa) for c in t)
    if fmt == "text":
        return f"{kappa}({inner})"
    return rf"{kappa}\left({inner}\right)"


def forest_notation(f: ReducedForest, fmt: str = "text", dual: bool = False) -> str:
    if fmt == "text":
        kappa, sep = ("k*", " . ") if dual else ("k", " * ")
    else:
        kappa, sep = (r"\kappa^{\ast}", r" \cdot ") if dual else (r"\kappa", r" \ast ")
    return sep.join(tree_notation(t, fmt, kappa) for t in f)
