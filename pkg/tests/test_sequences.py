import pytest

from bicumulant.cumulants import kappa, kappa_of_forest, kappa_of_partition
from bicumulant.expr import DOT, STAR, Expr, Shape, Slot, generator, multiply
from bicumulant.forests import enumerate_colourings, enumerate_reduced_forests
from bicumulant.partitions import canonical, is_mixing_partition, set_partitions, sweep_shapes
from bicumulant.sequences import (
    UpwardSequence,
    enumerate_sequences,
    kappa_of_sequence,
    phi,
    phi_inverse,
    sequence_from_json,
)


def S(g, p):
    return Slot(g, p)


def g(s):
    return generator(s)


def _block(x, depth):
    if depth == 0:
        return x
    return tuple(sorted(_block(y, depth - 1) for y in x))


def seq(*levels):
    """Build a sequence from nested lists; level ``i`` is written as a list
    of blocks, each block a nested list of slots of depth ``i``."""
    return UpwardSequence(
        tuple(canonical(_block(b, i) for b in level) for i, level in enumerate(levels, start=1))
    )


def test_shape_11_has_one_sequence():
    shape = Shape((1, 1))
    seqs = list(enumerate_sequences(shape))
    assert len(seqs) == 1
    (w,) = seqs
    assert w.length == 1
    assert kappa_of_sequence(w) == g(S(1, 1)).star(g(S(2, 1))) - g(S(1, 1)).dot(g(S(2, 1)))


def test_no_identity_levels():
    for shape in sweep_shapes(4):
        for w in enumerate_sequences(shape, require_mixing_start=False):
            for lower, upper in zip(w.levels, w.levels[1:]):
                assert len(upper) < len(lower)


def test_identity_level_rejected():
    a, b = S(1, 1), S(2, 1)
    nu = ((a, b),)
    with pytest.raises(ValueError):
        UpwardSequence((nu, ((nu[0],),)))


def test_mixing_start_filter():
    shape = Shape((2, 2))
    all_seqs = list(enumerate_sequences(shape, require_mixing_start=False))
    mixing = list(enumerate_sequences(shape))
    assert set(mixing) == {w for w in all_seqs if is_mixing_partition(w.levels[0], shape)}
    assert len(mixing) < len(all_seqs)


# the five-element example, all slots in one group
a1, a2, a3, a4, a5 = (S(1, i) for i in range(1, 6))
NU1 = [[a1, a4], [a2], [a3], [a5]]
NU2 = [[[a1, a4], [a2], [a3]], [[a5]]]
OMEGA1 = seq(NU1, NU2)
OMEGA2 = seq(NU1, NU2, [NU2])


def test_five_element_example():
    inner = kappa([kappa([g(a1), g(a4)]), g(a2), g(a3)])
    assert kappa_of_sequence(OMEGA1) == multiply(STAR, inner, g(a5))
    assert kappa_of_sequence(OMEGA2) == kappa([inner, g(a5)])
    assert OMEGA1.length == 2 and OMEGA2.length == 3


def _three_sequences(p, q):
    """The three sequences over blocks ``p`` and ``q`` ending in the tree
    k(k(p), k(q)) on shape (2,2)."""
    w1 = seq([p, q], [[p, q]])
    lower = [[p], [[q[0]], [q[1]]]]
    w2 = seq([p, [q[0]], [q[1]]], lower, [lower])
    lower = [[[p[0]], [p[1]]], [q]]
    w3 = seq([[p[0]], [p[1]], q], lower, [lower])
    return w1, w2, w3


PAIRINGS = {
    # cross pairing
    "cross": ([S(1, 1), S(2, 2)], [S(1, 2), S(2, 1)]),
    # pairing by position
    "by-position": ([S(1, 1), S(2, 1)], [S(1, 2), S(2, 2)]),
}


@pytest.mark.parametrize("name", sorted(PAIRINGS))
def test_three_sequences_collapse(name):
    p, q = PAIRINGS[name]
    shape = Shape((2, 2))
    target = kappa([kappa([g(x) for x in p]), kappa([g(x) for x in q])])
    triple = _three_sequences(p, q)
    all_seqs = list(enumerate_sequences(shape))
    for w in triple:
        assert w in all_seqs
        assert kappa_of_sequence(w) == target
    # exactly these three reach the same cumulant
    hits = [w for w in all_seqs if kappa_of_sequence(w) == target]
    assert set(hits) == set(triple)
    assert sorted(w.length for w in triple) == [2, 3, 3]
    signed = Expr.combine(((-1) ** w.length, kappa_of_sequence(w)) for w in triple)
    assert signed == -target


def test_three_sequences_forests():
    p, q = PAIRINGS["cross"]
    triple = _three_sequences(p, q)
    forests = [phi(w) for w in triple]
    assert len({f for f, _ in forests}) == 1
    shapes = []
    for f, c in forests:
        col = c.as_dict()
        shapes.append((col[(0,)], sorted(col[(0, i)] for i in range(2))))
    assert shapes == [(2, [1, 1]), (3, [1, 2]), (3, [1, 2])]
    assert forests[1][1] != forests[2][1]


def test_phi_lengths_and_round_trip_up_to_four():
    for shape in sweep_shapes(4):
        for w in enumerate_sequences(shape):
            f, c = phi(w)
            assert c.length == w.length
            assert phi_inverse(f, c) == w
            assert kappa_of_sequence(w) == kappa_of_forest(f)


def test_phi_is_onto_up_to_four():
    for shape in sweep_shapes(4):
        images = [phi(w) for w in enumerate_sequences(shape)]
        targets = {
            (f, c)
            for f in enumerate_reduced_forests(shape.slots())
            for c in enumerate_colourings(f, shape)
            if c.length >= 1
        }
        assert len(images) == len(set(images)) == len(targets)
        assert set(images) == targets


def test_phi_inverse_rejects_length_zero(shape21):
    bare = next(f for f in enumerate_reduced_forests(shape21.slots()) if len(f) == 3)
    (c,) = enumerate_colourings(bare, shape21)
    with pytest.raises(ValueError):
        phi_inverse(bare, c)


def test_phi_inverse_rejects_non_weakly_mixing(shape21, abc):
    from bicumulant.forests import ReducedForest, from_nested

    a, b, c = abc
    f = ReducedForest((from_nested([[a, b], c]),))
    (col,) = enumerate_colourings(f, filter="gap_free")
    with pytest.raises(ValueError):
        phi_inverse(f, col)


def test_mixing_partitions_against_sequences():
    for shape in sweep_shapes(4):
        lhs = Expr.combine(
            (1, kappa_of_partition(nu, DOT))
            for nu in set_partitions(shape.slots())
            if is_mixing_partition(nu, shape)
        )
        rhs = Expr.combine((-((-1) ** w.length), kappa_of_sequence(w)) for w in enumerate_sequences(shape))
        assert lhs == rhs


def test_json_round_trip():
    for w in enumerate_sequences(Shape((2, 2))):
        data = w.to_json()
        assert isinstance(data[0][0][0], str)
        assert sequence_from_json(data) == w
    assert OMEGA2.to_json() == [[["a1_1", "a1_4"], ["a1_2"], ["a1_3"], ["a1_5"]], [[0, 1, 2], [3]], [[0, 1]]]
