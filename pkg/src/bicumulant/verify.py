"""Exact checks of every identity, one shape at a time.

Each symbolic law is a pair of fully expanded :class:`Expr` values compared
coefficient-wise.  The combinatorial laws (colouring signs, the sequence
bijection, halving, lattice paths, degree arithmetic) compare integers or
structures instead and report their counts in ``detail``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import product as grid
from typing import Any, Callable, Optional

from . import cumulants as C
from .expr import DOT, Expr, Shape, Slot, render_term
from .forests import (
    colouring_sign_sum,
    count_reduced,
    enumerate_colourings,
    enumerate_reduced_forests,
    enumerate_reduced_trees,
    path_F,
    path_G,
    ReducedForest,
    root_deletion,
    root_deletion_colouring,
    root_insertion,
    root_insertion_colouring,
    w_inductive,
    w_of_forest,
)
from .partitions import is_mixing_partition, set_partitions
from .sequences import enumerate_sequences, kappa_of_sequence, phi, phi_inverse

DEFAULT_CAP = 7


class CapExceeded(Exception):
    def __init__(self, shape: Shape, cap: int):
        self.shape = shape
        self.cap = cap
        self.estimate = count_reduced(shape.total)[1]
        super().__init__(
            f"shape {shape} has {shape.total} slots, above the cap of {cap}; "
            f"about {self.estimate} reduced forests would be expanded "
            f"(raise the cap with --unsafe-cap)"
        )


@dataclass
class LawReport:
    law: str
    shape: Optional[Shape]
    equal: bool
    lhs: Optional[Expr] = None
    rhs: Optional[Expr] = None
    mismatch: Optional[dict] = None
    millis: Optional[float] = None
    detail: dict = field(default_factory=dict)

    @property
    def lhs_terms(self) -> Optional[int]:
        return None if self.lhs is None else len(self.lhs)

    @property
    def rhs_terms(self) -> Optional[int]:
        return None if self.rhs is None else len(self.rhs)

    def to_json(self, timing: bool = False) -> dict:
        out: dict[str, Any] = {
            "law": self.law,
            "shape": None if self.shape is None else list(self.shape.sizes),
            "equal": self.equal,
            "lhs_terms": self.lhs_terms,
            "rhs_terms": self.rhs_terms,
            "mismatch": self.mismatch,
            "millis": round(self.millis, 3) if timing and self.millis is not None else None,
        }
        if self.detail:
            out["detail"] = self.detail
        return out


def first_mismatch(lhs: Expr, rhs: Expr) -> Optional[dict]:
    diff = lhs - rhs
    if not diff:
        return None
    t = diff.terms()[0]
    return {
        "term": render_term(t),
        "lhs": str(lhs.coefficient(t)),
        "rhs": str(rhs.coefficient(t)),
    }


# -- symbolic laws -----------------------------------------------------------


def _prop_colouring(shape: Shape) -> tuple[Expr, Expr]:
    pairs = []
    for f in enumerate_reduced_forests(shape.slots()):
        s = colouring_sign_sum(f, shape)
        if s:
            pairs.append((s, C.kappa_of_forest(f)))
    return C.lhs_product(shape), Expr.combine(pairs)


def _prop_mixing_seq(shape: Shape) -> tuple[Expr, Expr]:
    lhs = Expr.combine(
        (1, C.kappa_of_partition(nu, DOT))
        for nu in set_partitions(shape.slots())
        if is_mixing_partition(nu, shape)
    )
    rhs = Expr.combine(
        (-1 if w.length % 2 == 0 else 1, kappa_of_sequence(w))
        for w in enumerate_sequences(shape)
    )
    return lhs, rhs


EXPR_LAWS: dict[str, Callable[[Shape], tuple[Expr, Expr]]] = {
    "moment-cumulant": lambda s: C.moment_cumulant(s),
    "moment-cumulant-dual": lambda s: C.moment_cumulant(s, dual=True),
    "main": lambda s: (C.lhs_product(s), C.expand_main(s)),
    "ls-analogue": lambda s: (C.ls_analogue_lhs(s), C.expand_ls_analogue(s)),
    "ls-classical-dot": lambda s: C.expand_ls_classical(s, "DOT_ARGS"),
    "ls-classical-star": lambda s: C.expand_ls_classical(s, "STAR_ARGS"),
    "grouped": lambda s: (C.lhs_product(s), C.expand_grouped(s)),
    "dual-main": lambda s: C.expand_dual(s),
    "dual-analogue": lambda s: C.expand_dual(s, analogue=True),
    "prop-colouring": _prop_colouring,
    "prop-mixing-seq": _prop_mixing_seq,
}


def law_sides(law: str, shape: Shape) -> tuple[Expr, Expr]:
    try:
        return EXPR_LAWS[law](shape)
    except KeyError:
        raise ValueError(f"{law!r} is not a symbolic law") from None


# -- combinatorial laws ------------------------------------------------------


def _colouring_sign(shape: Shape) -> tuple[bool, dict]:
    forests = bad = 0
    for f in enumerate_reduced_forests(shape.slots()):
        forests += 1
        w = w_of_forest(f, shape)
        expected = 0 if w == float("inf") else (-1) ** w
        if colouring_sign_sum(f, shape) != expected:
            bad += 1
    return bad == 0, {"forests": forests, "failures": bad}


def _seq_bijection(shape: Shape) -> tuple[bool, dict]:
    images = set()
    bad = 0
    count = 0
    for w in enumerate_sequences(shape):
        count += 1
        f, c = phi(w)
        ok = (
            c.length == w.length
            and phi_inverse(f, c) == w
            and kappa_of_sequence(w) == C.kappa_of_forest(f)
        )
        bad += not ok
        images.add((f, c))
    targets = 0
    for f in enumerate_reduced_forests(shape.slots()):
        for c in enumerate_colourings(f, shape):
            if c.length >= 1:
                targets += 1
                if (f, c) not in images:
                    bad += 1
    ok = bad == 0 and len(images) == count == targets
    return ok, {"sequences": count, "coloured_forests": targets, "failures": bad}


def _halving(shape: Shape) -> tuple[bool, dict]:
    """Forests are twice the trees, witnessed by root deletion round-trips."""
    slots = shape.slots()
    trees = list(enumerate_reduced_trees(slots))
    forests = list(enumerate_reduced_forests(slots))
    detail = {"trees": len(trees), "forests": len(forests)}
    if len(slots) < 2:
        return True, {**detail, "vacuous": True}
    bad = 0
    multi = set()
    for t in trees:
        f = ReducedForest((t,))
        g = root_deletion(f)
        multi.add(g)
        bad += root_insertion(g) != f or len(g) < 2
        for c in enumerate_colourings(f, filter="gap_free"):
            d = root_deletion_colouring(c)
            bad += d.length != c.length - 1 or root_insertion_colouring(d) != c
    n_multi = sum(1 for f in forests if len(f) >= 2)
    ok = bad == 0 and len(forests) == 2 * len(trees) and multi == {f for f in forests if len(f) >= 2}
    return ok and n_multi == len(trees), {**detail, "failures": bad}


def _w_inductive(shape: Shape) -> tuple[bool, dict]:
    bad = count = 0
    for t in enumerate_reduced_trees(shape.slots()):
        count += 1
        bad += w_inductive(t, shape) != w_of_forest(ReducedForest((t,)), shape)
    return bad == 0, {"trees": count, "failures": bad}


def default_degrees(shape: Shape) -> dict[Slot, int]:
    """A fixed, non-constant degree map used by the degree-bound checks."""
    return {s: s.group + 2 * s.position for s in shape.slots()}


def _degree_bound(shape: Shape) -> tuple[bool, dict]:
    deg = default_degrees(shape)
    total = sum(deg.values())
    size = shape.total
    bad = count = 0
    for f in enumerate_reduced_forests(shape.slots()):
        count += 1
        b = C.degree_bound_of_forest(f, deg)
        parts = sum(C.degree_bound_of_forest(ReducedForest((t,)), deg) for t in f)
        bad += b != parts
        if len(f) == size:
            bad += b != total
        if len(f) == 1:
            bad += b != total - 2 * size + 2
    return bad == 0, {"forests": count, "failures": bad}


def _path_fg(arity: int, max_coord: int) -> tuple[bool, dict]:
    bad = count = 0
    for x in grid(range(-1, max_coord + 1), repeat=arity):
        count += 1
        bad += path_F(x) != path_G(x)
    bad += path_F((0,) * arity) != -1
    return bad == 0, {"points": count, "failures": bad}


CHECKS: dict[str, Callable[[Shape], tuple[bool, dict]]] = {
    "colouring-sign": _colouring_sign,
    "seq-bijection": _seq_bijection,
    "halving": _halving,
    "w-inductive": _w_inductive,
    "degree-bound": _degree_bound,
}

SHAPE_LAWS = tuple(EXPR_LAWS) + tuple(CHECKS)
LAWS = SHAPE_LAWS + ("path-fg",)

# names accepted on the command line that stand for several laws
ALIASES = {
    "ls-classical": ("ls-classical-dot", "ls-classical-star"),
    "dual": ("dual-main", "dual-analogue"),
}


def expand_law_names(name: str) -> tuple[str, ...]:
    if name in ALIASES:
        return ALIASES[name]
    if name in LAWS:
        return (name,)
    raise ValueError(f"unknown law {name!r}")


def verify(law: str, shape: Shape, cap: int = DEFAULT_CAP) -> LawReport:
    """Decide one law on one shape with exact arithmetic."""
    if law not in SHAPE_LAWS:
        raise ValueError(f"unknown law {law!r}")
    if shape.total > cap:
        raise CapExceeded(shape, cap)
    start = time.perf_counter()
    if law in EXPR_LAWS:
        lhs, rhs = EXPR_LAWS[law](shape)
        mismatch = first_mismatch(lhs, rhs)
        report = LawReport(law, shape, mismatch is None, lhs, rhs, mismatch)
    else:
        ok, detail = CHECKS[law](shape)
        report = LawReport(law, shape, ok, detail=detail)
    report.millis = (time.perf_counter() - start) * 1000
    return report


def verify_paths(arity: int, max_coord: int) -> LawReport:
    if arity < 1 or max_coord < 0:
        raise ValueError("arity must be positive and max-coord nonnegative")
    start = time.perf_counter()
    ok, detail = _path_fg(arity, max_coord)
    detail.update(arity=arity, max_coord=max_coord)
    return LawReport("path-fg", None, ok, detail=detail, millis=(time.perf_counter() - start) * 1000)
