import random

import pytest

from mfsagbi.combinat import (
    Composition,
    Perm,
    Tableau,
    all_compositions,
    enumerate_subsets,
    rowwise_equal,
    type_and_block,
    vertical_swap,
)
from mfsagbi.errors import InvalidParametersError


def test_enumerate_subsets_tiny():
    assert enumerate_subsets(2, 3) == [(1, 2), (1, 3), (2, 3)]


def test_enumerate_subsets_counts():
    s = enumerate_subsets(4, 8)
    assert len(s) == 70
    assert s[0] == (1, 2, 3, 4)
    assert s[-1] == (5, 6, 7, 8)
    assert len(enumerate_subsets(5, 10)) == 252


def test_enumerate_subsets_rejects_r_gt_n():
    with pytest.raises(InvalidParametersError):
        enumerate_subsets(4, 3)


def test_composition_blocks():
    a = Composition((2, 2, 3, 2))
    assert a.n == 9
    assert a.alphas == (0, 2, 4, 7, 9)
    assert list(a.block(3)) == [5, 6, 7]
    assert a.block_of(5) == 3
    assert a.block_of(9) == 4


def test_all_compositions_counts():
    assert len(list(all_compositions(6))) == 32
    assert len(list(all_compositions(6, min_last=2))) == 16


@pytest.mark.parametrize(
    "I,a,expected",
    [
        ((1, 2, 3, 4), (2, 2, 3, 2), (1, 2)),
        ((5, 6, 7, 8), (2, 2, 3, 2), (3, 3)),
        ((2, 6, 7, 8), (3, 2, 3), (1, 1)),
    ],
)
def test_type_and_block(I, a, expected):
    assert type_and_block(I, Composition(a)) == expected


def test_perm_sign_and_cycles():
    assert Perm.identity(4).sign == 1
    swap = Perm.cycle(4, (2, 3))
    assert swap.sign == -1
    assert swap.cycle_notation() == "(2 3)"
    three = Perm.cycle(4, (1, 2, 3))
    assert three.sign == 1
    assert three.images == (2, 3, 1, 4)
    assert Perm.cycle(4, (3, 4)).cycle_notation() == "(3 4)"


def test_perm_rejects_non_bijection():
    with pytest.raises(InvalidParametersError):
        Perm((1, 1, 3))


def test_rowwise_equal_pair():
    t1 = Tableau([(6, 7, 8, 2), (4, 6, 7, 5)])
    t2 = Tableau([(6, 7, 8, 5), (4, 6, 7, 2)])
    assert rowwise_equal(t1, t2)
    assert rowwise_equal(t1, t1)


def test_rowwise_unequal_single_columns():
    t1 = Tableau([(1, 2, 3)])
    t2 = Tableau([(1, 2, 4)])
    assert not rowwise_equal(t1, t2)


def test_rowwise_shape_mismatch():
    with pytest.raises(InvalidParametersError):
        rowwise_equal(Tableau([(1, 2)]), Tableau([(1, 2, 3)]))


def test_vertical_swap_adjacent():
    t = Tableau([(1, 2, 3, 4), (3, 4, 5, 6)])
    assert vertical_swap(t, 1, 2, 3).columns == ((1, 3, 2, 4), (3, 4, 5, 6))


def test_vertical_swap_nonadjacent():
    t = Tableau([(2, 3, 4, 1)])
    assert vertical_swap(t, 1, 1, 4).columns == ((1, 3, 4, 2),)


def test_vertical_swap_self_is_identity():
    t = Tableau([(1, 2, 3)])
    assert vertical_swap(t, 1, 2, 2) == t


def test_vertical_swap_involution_random():
    rng = random.Random(7)
    for _ in range(50):
        r, m = rng.randint(2, 5), rng.randint(1, 4)
        cols = []
        for _ in range(m):
            col = rng.sample(range(1, 11), r)
            cols.append(col)
        t = Tableau(cols)
        c = rng.randint(1, m)
        i, j = rng.randint(1, r), rng.randint(1, r)
        assert vertical_swap(vertical_swap(t, c, i, j), c, i, j) == t


def test_rowwise_equal_is_equivalence_random():
    rng = random.Random(11)
    pool = []
    for _ in range(30):
        cols = [rng.sample(range(1, 7), 3) for _ in range(2)]
        pool.append(Tableau(cols))
    for t in pool:
        assert rowwise_equal(t, t)
    for t1 in pool:
        for t2 in pool:
            assert rowwise_equal(t1, t2) == rowwise_equal(t2, t1)
    for t1 in pool:
        for t2 in pool:
            for t3 in pool:
                if rowwise_equal(t1, t2) and rowwise_equal(t2, t3):
                    assert rowwise_equal(t1, t3)


def test_render_forms():
    t = Tableau([(1, 3, 2, 4), (3, 4, 5, 6)])
    assert t.render() == "[(1,3,2,4)|(3,4,5,6)]"
    assert t.latex() == (
        "\\begin{ytableau} 1 &3 \\\\ 3 &4 \\\\ 2 &5 \\\\ 4 &6 \\end{ytableau}"
    )
