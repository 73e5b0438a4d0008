"""A concrete algebra with two products, used as a numeric oracle.

Elements are one-variable polynomials over Q.  ``dot`` is the ordinary
product.  ``star`` is transported through the linear map ``phi`` that sends
``x^n`` to the falling factorial ``x (x-1) ... (x-n+1)``:

    p * q = phi^{-1}(phi(p) . phi(q))

``phi`` is linear but not multiplicative, so the two products differ.
Evaluating both sides of a symbolic identity here is independent of the
term rewriting in :mod:`bicumulant.expr`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .expr import STAR, Expr, Leaf, Shape, Slot, Term


class Poly:
    """Dense coefficient list, constant term first, trailing zeros trimmed."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def x(cls) -> Poly:
        return cls((0, 1))

    @classmethod
    def const(cls, c) -> Poly:
        return cls((c,))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __add__(self, other: Poly) -> Poly:
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Poly(x + y for x, y in zip(a, b))

    def __neg__(self) -> Poly:
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def scale(self, q) -> Poly:
        q = Fraction(q)
        return Poly(q * c for c in self.coeffs)

    def __call__(self, value):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)


def _frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: Poly) -> str:
    """Text form, highest degree first: ``3/2 x^2 - x + 5``."""
    if not p:
        return "0"
    parts = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if c == 0:
            continue
        mag = abs(c)
        mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
        if k == 0:
            body = _frac(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_frac(mag)} {mono}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)


def dot(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return Poly()
    out = [Fraction(0)] * (len(p.coeffs) + len(q.coeffs) - 1)
    for i, a in enumerate(p.coeffs):
        if a:
            for j, b in enumerate(q.coeffs):
                out[i + j] += a * b
    return Poly(out)


@lru_cache(maxsize=None)
def stirling1(n: int, k: int) -> int:
    """Signed Stirling numbers of the first kind: x^(n falling) = sum s(n,k) x^k."""
    if n == 0 and k == 0:
        return 1
    if n == 0 or k == 0:
        return 0
    return stirling1(n - 1, k - 1) - (n - 1) * stirling1(n - 1, k)


@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    """Stirling numbers of the second kind: x^n = sum S(n,k) x^(k falling)."""
    if n == 0 and k == 0:
        return 1
    if n == 0 or k == 0:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def phi(p: Poly) -> Poly:
    """Replace each ``x^n`` by the falling factorial of degree ``n``."""
    out = [Fraction(0)] * len(p.coeffs)
    for n, c in enumerate(p.coeffs):
        if c:
            for k in range(n + 1):
                out[k] += c * stirling1(n, k)
    return Poly(out)


def phi_inverse(p: Poly) -> Poly:
    """Read the monomial coefficients of ``p`` as falling-factorial ones."""
    out = [Fraction(0)] * len(p.coeffs)
    for n, c in enumerate(p.coeffs):
        if c:
            for k in range(n + 1):
                out[k] += c * stirling2(n, k)
    return Poly(out)


# coordinates in the falling-factorial basis, and back
to_falling = phi_inverse
from_falling = phi


def star(p: Poly, q: Poly) -> Poly:
    return phi_inverse(dot(phi(p), phi(q)))


def _op_fn(op):
    return star if op == STAR else dot


def evaluate_term(t: Term, assignment: Mapping[Slot, Poly]) -> Poly:
    if type(t) is Leaf:
        slot = t[1]
        if slot not in assignment:
            raise KeyError(f"no value assigned to {slot.label}")
        return assignment[slot]
    fn = _op_fn(t[1])
    children = t[3]
    acc = evaluate_term(children[0], assignment)
    for ch in children[1:]:
        acc = fn(acc, evaluate_term(ch, assignment))
    return acc


def evaluate(e: Expr, assignment: Mapping[Slot, Poly]) -> Poly:
    """Interpret ``*`` as :func:`star`, ``.`` as :func:`dot`, linearly."""
    total = Poly()
    for t, c in e.items():
        total = total + evaluate_term(t, assignment).scale(c)
    return total


def random_poly(rng: random.Random, max_degree: int = 3) -> Poly:
    """Nonzero polynomial of degree at most ``max_degree`` with small
    rational coefficients."""
    while True:
        deg = rng.randint(0, max_degree)
        cs = [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(deg + 1)]
        p = Poly(cs)
        if p:
            return p


def random_assignment(
    slots: Sequence[Slot], rng: random.Random, max_degree: int = 3
) -> dict[Slot, Poly]:
    return {s: random_poly(rng, max_degree) for s in slots}


MODEL_LAWS = ("main", "ls-analogue", "ls-classical-dot", "ls-classical-star", "moment-cumulant")


@dataclass
class ModelReport:
    law: str
    shape: Shape
    seed: int
    trials: int
    equal: bool
    failure: dict | None = None

    def to_json(self) -> dict:
        return {
            "law": self.law,
            "shape": list(self.shape.sizes),
            "seed": self.seed,
            "trials": self.trials,
            "equal": self.equal,
            "failure": self.failure,
        }


def model_check(
    law: str, shape: Shape, seed: int, trials: int = 20, corrupt: bool = False
) -> ModelReport:
    """Evaluate both sides of a symbolic law under seeded random assignments.

    ``corrupt`` flips the sign of the first right-hand term; it exists so the
    failure path can be exercised.
    """
    from .verify import law_sides

    lhs, rhs = law_sides(law, shape)
    if corrupt and rhs:
        t = rhs.terms()[0]
        rhs = rhs - Expr({t: 2 * rhs.coefficient(t)})
    rng = random.Random(seed)
    for k in range(trials):
        assignment = random_assignment(shape.slots(), rng)
        left, right = evaluate(lhs, assignment), evaluate(rhs, assignment)
        if left != right:
            failure = {
                "trial": k,
                "assignment": {s.label: str(p) for s, p in sorted(assignment.items())},
                "lhs": str(left),
                "rhs": str(right),
            }
            return ModelReport(law, shape, seed, trials, False, failure)
    return ModelReport(law, shape, seed, trials, True)


def degree_diagnostic(shape: Shape, assignment: Mapping[Slot, Poly]) -> list[dict]:
    """Degree of each mixing forest cumulant in the model next to the
    combinatorial bound.  Informational only: the model need not satisfy the
    bound."""
    from .cumulants import degree_bound_of_forest, kappa_of_forest
    from .forests import enumerate_reduced_forests, forest_notation, is_mixing_forest

    degrees = {s: assignment[s].degree for s in shape.slots()}
    rows = []
    for f in enumerate_reduced_forests(shape.slots()):
        if not is_mixing_forest(f, shape):
            continue
        rows.append(
            {
                "forest": forest_notation(f),
                "degree": evaluate(kappa_of_forest(f), assignment).degree,
                "bound": degree_bound_of_forest(f, degrees),
            }
        )
    return rows
