"""Free commutative algebra with two products.

Elements are exact rational combinations of canonical product trees over
distinguishable generators ("slots").  The two multiplications are written
``*`` (STAR) and ``.`` (DOT); both are commutative and associative, so a
product tree is normalised by flattening same-op children, collapsing
single-child nodes and sorting children under one fixed total order.

Terms are encoded as tagged tuples so that Python's tuple comparison *is*
the canonical order: ``Leaf = (0, slot)`` and
``Node = (1, op, arity, children)``.  Hence leaves sort before nodes, leaves
compare by slot, and nodes compare by (op, child count, children).
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, NamedTuple, Union

__all__ = [
    "Op",
    "STAR",
    "DOT",
    "Slot",
    "Shape",
    "Leaf",
    "Node",
    "Term",
    "Expr",
    "ParseError",
    "generator",
    "normalize",
    "term_product",
    "add",
    "scale",
    "multiply",
    "render",
    "render_term",
    "parse",
    "parse_term",
]


class Op(enum.IntEnum):
    STAR = 0
    DOT = 1

    @property
    def symbol(self) -> str:
        return "*" if self is Op.STAR else "."

    @property
    def latex(self) -> str:
        return r"\ast" if self is Op.STAR else r"\cdot"

    @property
    def dual(self) -> Op:
        return Op.DOT if self is Op.STAR else Op.STAR


STAR = Op.STAR
DOT = Op.DOT


class Slot(NamedTuple):
    """Generator ``a_position^group``; ordered by (group, position)."""

    group: int
    position: int

    @property
    def label(self) -> str:
        return f"a{self.group}_{self.position}"

    @property
    def latex(self) -> str:
        return f"a_{{{self.position}}}^{{{self.group}}}"

    def __str__(self) -> str:
        return self.label

    @classmethod
    def parse(cls, label: str) -> Slot:
        m = re.fullmatch(r"a(\d+)_(\d+)", label.strip())
        if not m or int(m[1]) < 1 or int(m[2]) < 1:
            raise ValueError(f"bad slot label {label!r}")
        return cls(int(m[1]), int(m[2]))


@dataclass(frozen=True)
class Shape:
    """Group sizes ``(k_1, ..., k_n)`` of the multisets ``A_1, ..., A_n``."""

    sizes: tuple[int, ...]

    def __post_init__(self) -> None:
        sizes = tuple(self.sizes)
        if not sizes:
            raise ValueError("shape needs at least one group")
        if any(not isinstance(k, int) or k < 1 for k in sizes):
            raise ValueError(f"group sizes must be positive integers: {sizes!r}")
        object.__setattr__(self, "sizes", sizes)

    @classmethod
    def parse(cls, text: str) -> Shape:
        try:
            return cls(tuple(int(part) for part in text.split(",")))
        except ValueError as exc:
            raise ValueError(f"bad shape {text!r}: {exc}") from None

    @property
    def n(self) -> int:
        return len(self.sizes)

    @property
    def total(self) -> int:
        return sum(self.sizes)

    def groups(self) -> tuple[tuple[Slot, ...], ...]:
        return tuple(
            tuple(Slot(i, j) for j in range(1, k + 1))
            for i, k in enumerate(self.sizes, start=1)
        )

    def slots(self) -> tuple[Slot, ...]:
        return tuple(s for g in self.groups() for s in g)

    def __str__(self) -> str:
        return ",".join(map(str, self.sizes))


class Leaf(tuple):
    __slots__ = ()

    def __new__(cls, slot: Slot) -> Leaf:
        return tuple.__new__(cls, (0, slot))

    def __getnewargs__(self):
        return (self[1],)

    @property
    def slot(self) -> Slot:
        return self[1]

    def __repr__(self) -> str:
        return f"Leaf({self[1].label})"


class Node(tuple):
    """Product node.  The constructor does not canonicalise; see :func:`normalize`."""

    __slots__ = ()

    def __new__(cls, op: Op, children: Iterable) -> Node:
        children = tuple(children)
        return tuple.__new__(cls, (1, Op(op), len(children), children))

    def __getnewargs__(self):
        return (self[1], self[3])

    @property
    def op(self) -> Op:
        return self[1]

    @property
    def children(self) -> tuple:
        return self[3]

    def __repr__(self) -> str:
        return f"Node({self[1].name}, {list(self[3])!r})"


Term = Union[Leaf, Node]
Coefficient = Union[int, Fraction]


def _coef(c) -> Coefficient:
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, int):
        return c
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


def normalize(raw) -> Term:
    """Canonical form of a raw product tree (a Slot, Leaf or possibly
    non-canonical Node)."""
    if isinstance(raw, Leaf):
        return raw
    if isinstance(raw, Slot):
        return Leaf(raw)
    if not isinstance(raw, Node):
        raise TypeError(f"not a term: {raw!r}")
    if not raw.children:
        raise ValueError("product node with no children")
    op = raw.op
    kids = [normalize(c) for c in raw.children]
    if len(kids) == 1:
        return kids[0]
    flat: list = []
    for k in kids:
        if type(k) is Node and k[1] == op:
            flat.extend(k[3])
        else:
            flat.append(k)
    flat.sort()
    return Node(op, flat)


def term_product(op: Op, s: Term, t: Term) -> Term:
    """Canonical product of two canonical terms."""
    parts: list = []
    for x in (s, t):
        if type(x) is Node and x[1] == op:
            parts.extend(x[3])
        else:
            parts.append(x)
    parts.sort()
    return Node(op, parts)


def is_canonical(t) -> bool:
    if type(t) is Leaf:
        return isinstance(t[1], Slot)
    if type(t) is not Node or t[2] != len(t[3]) or t[2] < 2:
        return False
    kids = t[3]
    if any(type(k) is Node and k[1] == t[1] for k in kids):
        return False
    if any(kids[i] > kids[i + 1] for i in range(len(kids) - 1)):
        return False
    return all(is_canonical(k) for k in kids)


def term_slots(t: Term) -> Iterator[Slot]:
    if type(t) is Leaf:
        yield t[1]
    else:
        for k in t[3]:
            yield from term_slots(k)


class Expr:
    """Finite rational combination of canonical terms.

    Immutable from the caller's side; all arithmetic returns new values.
    Coefficients are ``int`` or :class:`fractions.Fraction`, zeros are never
    stored.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping | Iterable[tuple] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict = {}
        for t, c in items:
            t = normalize(t)
            acc[t] = acc.get(t, 0) + _coef(c)
        self._terms = {t: _coef(c) for t, c in acc.items() if c != 0}

    @classmethod
    def _wrap(cls, d: dict) -> Expr:
        # trusted: canonical terms, nonzero coefficients
        e = cls.__new__(cls)
        e._terms = d
        return e

    @classmethod
    def zero(cls) -> Expr:
        return cls._wrap({})

    @classmethod
    def term(cls, t: Term, coef: Coefficient = 1) -> Expr:
        return cls({t: coef})

    @staticmethod
    def combine(pairs: Iterable[tuple[Coefficient, Expr]]) -> Expr:
        """Linear combination ``sum(c * e for c, e in pairs)``."""
        acc: dict = {}
        get = acc.get
        for c, e in pairs:
            if c == 0:
                continue
            for t, v in e._terms.items():
                acc[t] = get(t, 0) + c * v
        return Expr._wrap({t: _coef(v) for t, v in acc.items() if v != 0})

    def items(self):
        return self._terms.items()

    def terms(self) -> list[Term]:
        return sorted(self._terms)

    def sorted_items(self) -> list[tuple[Term, Coefficient]]:
        return sorted(self._terms.items())

    def coefficient(self, t: Term) -> Coefficient:
        return self._terms.get(normalize(t), 0)

    def slots(self) -> set[Slot]:
        return {s for t in self._terms for s in term_slots(t)}

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __iter__(self):
        return iter(self.terms())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Expr):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: Expr) -> Expr:
        if not isinstance(other, Expr):
            return NotImplemented
        return Expr.combine(((1, self), (1, other)))

    def __sub__(self, other: Expr) -> Expr:
        if not isinstance(other, Expr):
            return NotImplemented
        return Expr.combine(((1, self), (-1, other)))

    def __neg__(self) -> Expr:
        return Expr._wrap({t: -c for t, c in self._terms.items()})

    def __mul__(self, q) -> Expr:
        if isinstance(q, Expr):
            return NotImplemented
        q = _coef(q)
        if q == 0:
            return Expr.zero()
        return Expr._wrap({t: _coef(c * q) for t, c in self._terms.items()})

    __rmul__ = __mul__

    def multiply(self, op: Op, other: Expr) -> Expr:
        acc: dict = {}
        get = acc.get
        for s, a in self._terms.items():
            for t, b in other._terms.items():
                p = term_product(op, s, t)
                acc[p] = get(p, 0) + a * b
        return Expr._wrap({t: _coef(v) for t, v in acc.items() if v != 0})

    def star(self, other: Expr) -> Expr:
        return self.multiply(STAR, other)

    def dot(self, other: Expr) -> Expr:
        return self.multiply(DOT, other)

    def validate(self) -> None:
        """Raise ``AssertionError`` if any stored term or coefficient is off-form."""
        for t, c in self._terms.items():
            assert is_canonical(t), f"non-canonical term {t!r}"
            assert c != 0, f"zero coefficient stored for {t!r}"
            assert isinstance(c, (int, Fraction)), f"inexact coefficient {c!r}"

    def __repr__(self) -> str:
        return f"Expr({render(self)!r})"

    def __str__(self) -> str:
        return render(self)


def generator(slot: Slot) -> Expr:
    slot = Slot(*slot)
    if slot.group < 1 or slot.position < 1:
        raise ValueError(f"slot indices must be positive: {slot!r}")
    return Expr._wrap({Leaf(slot): 1})


def add(e1: Expr, e2: Expr) -> Expr:
    return e1 + e2


def scale(q, e: Expr) -> Expr:
    return e * q


def multiply(op: Op, e1: Expr, e2: Expr) -> Expr:
    return e1.multiply(Op(op), e2)


def product(op: Op, factors: Iterable[Expr]) -> Expr:
    """Iterated product of a nonempty sequence of Exprs."""
    it = iter(factors)
    try:
        acc = next(it)
    except StopIteration:
        raise ValueError("empty product (the algebra has no unit)") from None
    for f in it:
        acc = acc.multiply(op, f)
    return acc


# -- rendering ---------------------------------------------------------------


def render_term(t: Term, fmt: str = "text") -> str:
    if fmt == "text":
        if type(t) is Leaf:
            return t[1].label
        return "(" + t[1].symbol + " " + " ".join(render_term(k) for k in t[3]) + ")"
    if fmt == "latex":
        return _latex_term(t, top=True)
    raise ValueError(f"unknown format {fmt!r}")


def _latex_term(t: Term, top: bool) -> str:
    if type(t) is Leaf:
        return t[1].latex
    body = f" {t[1].latex} ".join(_latex_term(k, top=False) for k in t[3])
    return body if top else rf"\left({body}\right)"


def _format_coef(c: Coefficient, fmt: str) -> str:
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    if fmt == "latex":
        return rf"\frac{{{c.numerator}}}{{{c.denominator}}}"
    return f"{c.numerator}/{c.denominator}"


def render(e: Expr, fmt: str = "text") -> str:
    """Deterministic rendering, terms in canonical order.

    ``text`` output is accepted back by :func:`parse`.
    """
    if fmt not in ("text", "latex"):
        raise ValueError(f"unknown format {fmt!r}")
    if not e:
        return "0"
    out: list[str] = []
    for i, (t, c) in enumerate(e.sorted_items()):
        body = render_term(t, fmt)
        mag = abs(c)
        piece = body if mag == 1 else f"{_format_coef(mag, fmt)} {body}"
        if i == 0:
            out.append(("-" if c < 0 else "") + piece)
        else:
            out.append(("- " if c < 0 else "+ ") + piece)
    return " ".join(out)


# -- parsing -----------------------------------------------------------------


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


_TOKEN = re.compile(
    r"(?P<slot>a\d+_\d+)|(?P<num>\d+(?:/\d+)?)|(?P<sym>[()*.+\-−])"
)


def _tokenize(s: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(s):
        if s[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(s, pos)
        if m is None:
            raise ParseError(f"unexpected character {s[pos]!r}", pos)
        start = pos
        if m.group("slot"):
            tokens.append(("slot", m.group("slot"), start))
        elif m.group("num"):
            tokens.append(("num", m.group("num"), start))
        else:
            sym = m.group("sym")
            tokens.append(("sym", "-" if sym == "−" else sym, start))
        pos = m.end()
    tokens.append(("end", "", len(s)))
    return tokens


class _Parser:
    def __init__(self, s: str):
        self.toks = _tokenize(s)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect_end(self):
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", pos)

    def term(self) -> Term:
        kind, val, pos = self.take()
        if kind == "slot":
            g, p = val[1:].split("_")
            if int(g) < 1 or int(p) < 1:
                raise ParseError("slot indices must be positive", pos)
            return Leaf(Slot(int(g), int(p)))
        if kind == "sym" and val == "(":
            okind, oval, opos = self.take()
            if okind != "sym" or oval not in "*.":
                raise ParseError("expected operator '*' or '.'", opos)
            op = STAR if oval == "*" else DOT
            kids = []
            while self.peek()[:2] != ("sym", ")"):
                if self.peek()[0] == "end":
                    raise ParseError("unclosed '('", self.peek()[2])
                kids.append(self.term())
            close_pos = self.take()[2]
            if len(kids) < 2:
                raise ParseError("product needs at least two factors", close_pos)
            return normalize(Node(op, kids))
        raise ParseError(f"expected a term, found {val or 'end of input'!r}", pos)

    def item(self) -> tuple[Coefficient, Term]:
        coef: Coefficient = 1
        kind, val, pos = self.peek()
        if kind == "num":
            self.take()
            num, _, den = val.partition("/")
            if den and int(den) == 0:
                raise ParseError("zero denominator", pos)
            coef = _coef(Fraction(int(num), int(den or 1)))
        return coef, self.term()

    def expr(self) -> Expr:
        kind, val, pos = self.peek()
        if kind == "num" and val == "0" and self.toks[self.i + 1][0] == "end":
            self.take()
            return Expr.zero()
        pairs = []
        sign = 1
        if kind == "sym" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        c, t = self.item()
        pairs.append((t, sign * c))
        while True:
            kind, val, pos = self.peek()
            if kind == "end":
                break
            if kind != "sym" or val not in "+-":
                raise ParseError(f"expected '+' or '-', found {val!r}", pos)
            self.take()
            c, t = self.item()
            pairs.append((t, -c if val == "-" else c))
        return Expr(pairs)


def parse_term(s: str) -> Term:
    p = _Parser(s)
    t = p.term()
    p.expect_end()
    return t


def parse(s: str) -> Expr:
    """Parse the text form produced by :func:`render`."""
    p = _Parser(s)
    e = p.expr()
    p.expect_end()
    return e
