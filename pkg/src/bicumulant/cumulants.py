"""Cumulants of the identity map between the two products, and the signed
forest expansions built from them.

``kappa`` is defined by the moment-cumulant system

    x_1 * ... * x_n = sum over set partitions nu of  ._{b in nu} kappa(x_b)

solved recursively for the one-block term.  ``kappa_star`` is the same
construction with the two products exchanged.  Both are extended
multilinearly from terms to arbitrary :class:`~bicumulant.expr.Expr`
arguments and memoised per sorted tuple of argument terms.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product as cartesian
from typing import Iterable, Sequence

from .expr import DOT, STAR, Expr, Op, Shape, Slot, generator, product, term_product
from .forests import (
    ReducedForest,
    Tree,
    enumerate_reduced_forests,
    enumerate_reduced_trees,
    is_mixing_forest,
    is_strongly_mixing_forest,
    leaves,
    num_internal,
)
from .partitions import index_partitions, is_strongly_mixing, set_partitions

_CACHE: dict[tuple[Op, tuple], Expr] = {}


def clear_cache() -> None:
    _CACHE.clear()
    _kappa_tree.cache_clear()


def _cumulant_of_terms(moment: Op, terms: tuple) -> Expr:
    """Cumulant of canonical terms; ``moment`` is the product on the left of
    the moment-cumulant system (STAR for kappa, DOT for kappa_star)."""
    key = (moment, terms)
    hit = _CACHE.get(key)
    if hit is not None:
        return hit
    n = len(terms)
    if n == 1:
        result = Expr._wrap({terms[0]: 1})
    else:
        combine = moment.dual
        full = terms[0]
        for t in terms[1:]:
            full = term_product(moment, full, t)
        pairs = [(1, Expr._wrap({full: 1}))]
        for nu in index_partitions(n):
            if len(nu) == 1:
                continue
            blocks = [_cumulant_of_terms(moment, tuple(sorted(terms[i] for i in b))) for b in nu]
            pairs.append((-1, product(combine, blocks)))
        result = Expr.combine(pairs)
    _CACHE[key] = result
    return result


def _cumulant(moment: Op, args: Sequence[Expr]) -> Expr:
    if not args:
        raise ValueError("a cumulant needs at least one argument")
    if len(args) == 1:
        return args[0]
    pairs = []
    for combo in cartesian(*(list(a.items()) for a in args)):
        coef = 1
        for _, c in combo:
            coef *= c
        key = tuple(sorted(t for t, _ in combo))
        pairs.append((coef, _cumulant_of_terms(moment, key)))
    return Expr.combine(pairs)


def kappa(args: Sequence[Expr]) -> Expr:
    """Cumulant with respect to ``x_1 * ... * x_n = sum ._b kappa(x_b)``."""
    return _cumulant(STAR, list(args))


def kappa_star(args: Sequence[Expr]) -> Expr:
    """Cumulant with respect to ``x_1 . ... . x_n = sum *_b kappa_star(x_b)``."""
    return _cumulant(DOT, list(args))


def _cumulant_fn(dual: bool):
    return kappa_star if dual else kappa


def kappa_of_partition(nu, combine: Op = DOT, dual: bool = False) -> Expr:
    """Block cumulants of ``nu`` combined with the ``combine`` product."""
    cum = _cumulant_fn(dual)
    return product(combine, (cum([generator(s) for s in b]) for b in nu))


@lru_cache(maxsize=None)
def _kappa_tree(t: Tree, dual: bool) -> Expr:
    if type(t) is Slot:
        return generator(t)
    return _cumulant_fn(dual)([_kappa_tree(c, dual) for c in t])


def kappa_of_tree(t: Tree, dual: bool = False) -> Expr:
    return _kappa_tree(t, dual)


def kappa_of_forest(f: ReducedForest, dual: bool = False) -> Expr:
    """Star-product over the roots of the nested vertex cumulants.

    With ``dual=True`` every cumulant is ``kappa_star`` and roots are
    combined with the dot product.
    """
    return product(DOT if dual else STAR, (_kappa_tree(t, dual) for t in f))


def lhs_product(shape: Shape, dual: bool = False) -> Expr:
    """Dot-product over groups of the star-products within each group
    (operations swapped when ``dual``)."""
    inner, outer = (DOT, STAR) if dual else (STAR, DOT)
    return product(outer, (product(inner, map(generator, g)) for g in shape.groups()))


def group_products(shape: Shape, op: Op) -> list[Expr]:
    return [product(op, map(generator, g)) for g in shape.groups()]


def _sign(w: int) -> int:
    return -1 if w % 2 else 1


def signed_forests(shape: Shape, strongly: bool = False) -> list[tuple[int, ReducedForest]]:
    """``(sign, forest)`` for every mixing (or strongly-mixing) forest."""
    keep = is_strongly_mixing_forest if strongly else is_mixing_forest
    out = []
    for f in enumerate_reduced_forests(shape.slots()):
        if keep(f, shape):
            out.append((_sign(num_internal(f)), f))
    return out


def expand_main(shape: Shape, dual: bool = False) -> Expr:
    """Signed sum of forest cumulants over all mixing reduced forests."""
    return Expr.combine(
        (s, kappa_of_forest(f, dual)) for s, f in signed_forests(shape)
    )


def expand_ls_analogue(shape: Shape, dual: bool = False) -> Expr:
    """Signed sum over strongly-mixing forests."""
    return Expr.combine(
        (s, kappa_of_forest(f, dual)) for s, f in signed_forests(shape, strongly=True)
    )


def ls_analogue_lhs(shape: Shape, dual: bool = False) -> Expr:
    """``kappa_star`` of the per-group star-products (swapped when ``dual``)."""
    if dual:
        return kappa(group_products(shape, DOT))
    return kappa_star(group_products(shape, STAR))


def expand_dual(shape: Shape, analogue: bool = False) -> tuple[Expr, Expr]:
    """(left, right) of the forest formula or its strongly-mixing analogue with
    kappa <-> kappa_star and * <-> . exchanged."""
    if analogue:
        return ls_analogue_lhs(shape, dual=True), expand_ls_analogue(shape, dual=True)
    return lhs_product(shape, dual=True), expand_main(shape, dual=True)


LS_VARIANTS = ("DOT_ARGS", "STAR_ARGS")


def expand_ls_classical(shape: Shape, variant: str) -> tuple[Expr, Expr]:
    """Both sides of the classical cumulant-of-products formula.

    ``STAR_ARGS``: kappa of the per-group star-products against the sum over
    strongly-mixing partitions of dot-combined kappa blocks.
    ``DOT_ARGS``: kappa_star of the per-group dot-products against the sum of
    star-combined kappa_star blocks.
    """
    if variant == "STAR_ARGS":
        args_op, combine, dual = STAR, DOT, False
    elif variant == "DOT_ARGS":
        args_op, combine, dual = DOT, STAR, True
    else:
        raise ValueError(f"unknown variant {variant!r}")
    lhs = _cumulant_fn(dual)(group_products(shape, args_op))
    rhs = Expr.combine(
        (1, kappa_of_partition(nu, combine, dual))
        for nu in set_partitions(shape.slots())
        if is_strongly_mixing(nu, shape)
    )
    return lhs, rhs


def mixing_tree_sum(block: Iterable[Slot], shape: Shape) -> Expr:
    """Signed sum of kappa_T over mixing reduced trees on ``block``."""
    pairs = []
    for t in enumerate_reduced_trees(block):
        f = ReducedForest((t,))
        if _tree_mixing(t):
            pairs.append((_sign(num_internal(f)), _kappa_tree(t, False)))
    return Expr.combine(pairs)


def _tree_mixing(t: Tree) -> bool:
    if type(t) is Slot:
        return True
    if all(type(c) is Slot for c in t):
        return len({c.group for c in t}) >= 2
    return all(_tree_mixing(c) for c in t)


def expand_grouped(shape: Shape) -> Expr:
    """Sum over set partitions of the star-product of per-block mixing-tree sums."""
    sums: dict[tuple, Expr] = {}
    pairs = []
    for nu in set_partitions(shape.slots()):
        factors = []
        for b in nu:
            if b not in sums:
                sums[b] = mixing_tree_sum(b, shape)
            factors.append(sums[b])
        if all(factors):
            pairs.append((1, product(STAR, factors)))
    return Expr.combine(pairs)


def moment_cumulant(shape: Shape, dual: bool = False) -> tuple[Expr, Expr]:
    """(product of all slots, sum over partitions of combined block cumulants)."""
    moment = DOT if dual else STAR
    lhs = product(moment, map(generator, shape.slots()))
    rhs = Expr.combine(
        (1, kappa_of_partition(nu, moment.dual, dual)) for nu in set_partitions(shape.slots())
    )
    return lhs, rhs


def degree_bound_of_forest(f: ReducedForest, degrees) -> int:
    """``sum(deg a) - 2|A| + 2 * (number of trees)``."""
    slots = [s for t in f for s in leaves(t)]
    return sum(degrees[s] for s in slots) - 2 * len(slots) + 2 * len(f)
