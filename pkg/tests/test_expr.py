from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bicumulant.expr import (
    DOT,
    STAR,
    Expr,
    Leaf,
    Node,
    ParseError,
    Shape,
    Slot,
    add,
    generator,
    is_canonical,
    multiply,
    normalize,
    parse,
    parse_term,
    product,
    render,
    scale,
)

SLOTS = [Slot(1, 1), Slot(1, 2), Slot(2, 1), Slot(2, 2), Slot(3, 1)]


def raw_terms():
    leaves = st.sampled_from(SLOTS)
    return st.recursive(
        leaves,
        lambda kids: st.builds(Node, st.sampled_from([STAR, DOT]), st.lists(kids, min_size=1, max_size=3)),
        max_leaves=6,
    )


coefs = st.one_of(st.integers(-3, 3), st.builds(Fraction, st.integers(-7, 7), st.integers(1, 4)))
exprs = st.lists(st.tuples(raw_terms(), coefs), max_size=3).map(Expr)
ops = st.sampled_from([STAR, DOT])


def a(g, p):
    return generator(Slot(g, p))


# -- normal form -------------------------------------------------------------


def test_generator():
    e = generator(Slot(2, 1))
    assert e.sorted_items() == [(Leaf(Slot(2, 1)), 1)]


def test_generator_rejects_bad_slot():
    with pytest.raises(ValueError):
        generator(Slot(0, 1))


def test_flattening():
    a11, a12, a21 = Slot(1, 1), Slot(1, 2), Slot(2, 1)
    t = normalize(Node(STAR, [a11, Node(STAR, [a12, a21])]))
    assert t == Node(STAR, [Leaf(a11), Leaf(a12), Leaf(a21)])


def test_single_child_collapse():
    a11, a12 = Slot(1, 1), Slot(1, 2)
    t = normalize(Node(STAR, [Node(DOT, [a11, a12])]))
    assert t == Node(DOT, [Leaf(a11), Leaf(a12)])


def test_commutative_reordering():
    t = normalize(Node(DOT, [Slot(2, 1), Slot(1, 1)]))
    assert t == Node(DOT, [Leaf(Slot(1, 1)), Leaf(Slot(2, 1))])


def test_empty_node_rejected():
    with pytest.raises(ValueError):
        normalize(Node(STAR, []))


def test_leaf_sorts_before_node():
    t = normalize(Node(DOT, [Node(STAR, [Slot(1, 1), Slot(1, 2)]), Slot(2, 1)]))
    assert type(t.children[0]) is Leaf


@given(raw_terms())
def test_normalize_idempotent_and_canonical(raw):
    t = normalize(raw)
    assert is_canonical(t)
    assert normalize(t) == t


@given(raw_terms(), st.randoms(use_true_random=False))
def test_normalize_ignores_child_order(raw, rnd):
    def shuffle(x):
        if isinstance(x, Slot):
            return x
        kids = [shuffle(k) for k in x.children]
        rnd.shuffle(kids)
        return Node(x.op, kids)

    assert normalize(shuffle(raw)) == normalize(raw)


# -- linear structure and products -------------------------------------------


def test_add_cancels():
    assert add(a(1, 1), -a(1, 1)) == Expr.zero()
    assert not add(a(1, 1), -a(1, 1))


def test_scale_zero():
    assert scale(0, multiply(STAR, a(1, 1), a(1, 2))) == Expr.zero()


def test_add_doubles():
    ab = multiply(STAR, a(1, 1), a(1, 2))
    assert add(ab, ab) == scale(2, ab)
    assert add(ab, ab).coefficient(next(iter(ab.terms()))) == 2


def test_dot_of_generators():
    e = multiply(DOT, a(1, 1), a(1, 2))
    assert render(e) == "(. a1_1 a1_2)"


def test_star_flattens_products():
    e = multiply(STAR, multiply(STAR, a(1, 1), a(1, 2)), a(2, 1))
    assert render(e) == "(* a1_1 a1_2 a2_1)"


def test_bilinearity_example():
    x, y, z = a(1, 1), a(1, 2), a(2, 1)
    left = multiply(DOT, multiply(STAR, x, y) - multiply(DOT, x, y), z)
    assert left == parse("(. a2_1 (* a1_1 a1_2)) - (. a1_1 a1_2 a2_1)")


def test_fraction_coefficients_normalised():
    e = scale(Fraction(4, 2), a(1, 1))
    (_, c), = e.items()
    assert c == 2 and type(c) is int


def test_product_needs_factors():
    with pytest.raises(ValueError):
        product(STAR, [])


@given(exprs, exprs, ops)
def test_commutative(x, y, op):
    assert multiply(op, x, y) == multiply(op, y, x)


@given(exprs, exprs, exprs, ops)
def test_associative(x, y, z, op):
    assert multiply(op, multiply(op, x, y), z) == multiply(op, x, multiply(op, y, z))


@given(exprs, exprs, exprs, ops)
def test_distributive(x, y, z, op):
    assert multiply(op, x, y + z) == multiply(op, x, y) + multiply(op, x, z)


@given(exprs, exprs, ops, coefs)
def test_results_stay_valid(x, y, op, q):
    for e in (x + y, x - y, scale(q, x), multiply(op, x, y)):
        e.validate()


# -- text form ---------------------------------------------------------------


def test_render_zero():
    assert render(Expr.zero()) == "0"


def test_render_canonical_order():
    e = multiply(DOT, multiply(STAR, a(1, 1), a(1, 2)), a(2, 1))
    assert render(e) == "(. a2_1 (* a1_1 a1_2))"


def test_parse_accepts_any_child_order():
    assert parse("(. (* a1_1 a1_2) a2_1)") == parse("(. a2_1 (* a1_2 a1_1))")


def test_parse_star_term():
    assert parse_term("(* a1_1 a1_2 a2_1)") == Node(STAR, [Leaf(Slot(1, 1)), Leaf(Slot(1, 2)), Leaf(Slot(2, 1))])


def test_parse_coefficients():
    e = parse("2 a1_1 - 1/3 (* a1_1 a1_2) + a2_1")
    assert e.coefficient(Leaf(Slot(1, 1))) == 2
    assert e.coefficient(normalize(Node(STAR, [Slot(1, 1), Slot(1, 2)]))) == Fraction(-1, 3)


@pytest.mark.parametrize("bad,pos", [("(* a1_1)", 7), ("a1_1 +", 6), ("(+ a1_1 a1_2)", 1), ("b1_1", 0)])
def test_parse_error_position(bad, pos):
    with pytest.raises(ParseError) as info:
        parse(bad)
    assert info.value.position == pos


@given(exprs, st.sampled_from(["text"]))
def test_round_trip(e, fmt):
    assert parse(render(e, fmt)) == e


def test_latex_render():
    e = multiply(DOT, multiply(STAR, a(1, 1), a(1, 2)), a(2, 1))
    assert render(e, "latex") == r"a_{1}^{2} \cdot \left(a_{1}^{1} \ast a_{2}^{1}\right)"


def test_shape_parse():
    s = Shape.parse("2,1")
    assert s.sizes == (2, 1) and s.total == 3 and s.n == 2
    assert s.slots() == (Slot(1, 1), Slot(1, 2), Slot(2, 1))
    with pytest.raises(ValueError):
        Shape.parse("2,0")
    with pytest.raises(ValueError):
        Shape.parse("")


def test_slot_parse():
    assert Slot.parse("a12_3") == Slot(12, 3)
    with pytest.raises(ValueError):
        Slot.parse("a0_1")
