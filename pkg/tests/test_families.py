import math
from itertools import permutations

import numpy as np
import pytest

from actlab.errors import GNotAbelian, GNotGroup, LengthInsufficient
from actlab.families import (
    FINITE_FAMILIES,
    b22_plus_1,
    bitseq_h,
    bitseq_l,
    bitseq_r,
    cg,
    cg_element,
    chain_of_groups,
    cyclic_group_table,
    layered_monoid_64,
    psi,
    rect_band_element,
    rect_band_monoid,
    twisted_band_monoid,
)
from actlab.monoid import depth, ideal_poset, idempotents, is_linearly_ordered, rect_band_decompose
from actlab.regular import monoid_regular_core


def test_b22():
    M = b22_plus_1()
    assert M.order == 9
    dec = rect_band_decompose(M, range(1, 9))
    assert (dec.n_rows, dec.n_cols, dec.group_orders) == (2, 2, [2, 2, 2, 2])


def test_twist_law_example():
    twist = np.array([[0, 0], [0, 1]])
    M = rect_band_monoid(cyclic_group_table(2), 2, 2, twist)
    x = rect_band_element(2, 2, 1, 0, 1)
    y = rect_band_element(2, 2, 1, 1, 0)
    assert M.mul(x, y) == rect_band_element(2, 2, 1, 0, 0)


def test_untwisted_law_is_plain_band():
    M = rect_band_monoid(cyclic_group_table(3), 2, 3, 0)
    for a in range(3):
        for b in range(3):
            x = rect_band_element(3, 3, a, 1, 2)
            y = rect_band_element(3, 3, b, 0, 1)
            assert M.mul(x, y) == rect_band_element(3, 3, (a + b) % 3, 1, 1)


@pytest.mark.parametrize("g, I, J", [(1, 1, 1), (2, 1, 3), (3, 2, 2), (4, 3, 1)])
def test_rect_band_round_trip(g, I, J):
    M = rect_band_monoid(cyclic_group_table(g), I, J)
    dec = rect_band_decompose(M, range(1, M.order))
    assert (dec.n_rows, dec.n_cols) == (I, J)
    assert set(dec.group_orders) == {g}


def test_rect_band_rejects_bad_groups():
    perms = list(permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}
    s3 = [[index[tuple(p[q[k]] for k in range(3))] for q in perms] for p in perms]
    with pytest.raises(GNotAbelian):
        rect_band_monoid(s3, 1, 1)
    with pytest.raises(GNotGroup):
        rect_band_monoid([[0, 0], [0, 1]], 1, 1)


def test_bit_helpers():
    zero = (0, 0, 0)
    assert bitseq_h(zero) == (0,)
    assert bitseq_l(zero) == 0 and bitseq_r(zero) == 0
    a = (1, 1, 0, 0)
    assert bitseq_h(a) == (1, 1) and bitseq_l(a) == 2 and bitseq_r(a) == 3
    assert psi(9, 4) == (1, 1, 0, 0)
    assert bitseq_r(psi(9, 4)) == 3
    with pytest.raises(LengthInsufficient):
        psi(16, 2)


def test_psi_round_trip_range():
    for m in range(10001):
        assert bitseq_r(psi(m, 7)) == math.isqrt(m)


def test_chain_of_groups():
    M = cg()
    zero1, one0 = cg_element(2, 0, 1), cg_element(2, 1, 0)
    assert M.mul(zero1, one0) == one0
    assert all(M.mul(0, x) == x == M.mul(x, 0) for x in M.elements)
    for k in range(4):
        N = chain_of_groups(2, k)
        assert depth(N) == k + 2
        assert is_linearly_ordered(N)
    single = chain_of_groups(3, 0)
    assert single.order == 4 and depth(single) == 2


def test_chain_of_groups_with_shifts():
    M = chain_of_groups(5, 1, True)
    assert M.order == 1 + 10 + 5
    # the zero shift is the only new idempotent
    assert idempotents(M) == idempotents(chain_of_groups(5, 1)) | {11}


def test_layered_monoid():
    M = layered_monoid_64(cyclic_group_table(2), 1)
    assert M.order == 10
    assert depth(M) == 3
    assert M.names[M.identity] == "[5,0]"
    assert len(monoid_regular_core(M)) == M.order
    assert len(ideal_poset(M).nodes) == 3


def test_twisted_band():
    M = twisted_band_monoid(2, 3)
    assert M.order == 1 + 4 * 3 * 2
    dec = rect_band_decompose(M, range(1, M.order))
    assert (dec.n_rows, dec.n_cols) == (3, 2)


@pytest.mark.parametrize("name", sorted(FINITE_FAMILIES))
def test_every_family_builds(name):
    M = FINITE_FAMILIES[name]()
    assert M.table.shape == (M.order, M.order)
