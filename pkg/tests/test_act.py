import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from actlab.act import (
    ActCongruence,
    congruence_generated,
    connectivity,
    coproduct,
    cyclic_subact,
    empty_act,
    enumerate_congruences,
    identity_congruence,
    is_amalgam,
    is_congruence,
    pointed_iso,
    quotient_act,
    regular_representation,
    subact,
    validate_act,
)
from actlab.errors import ActionLawViolated, IdentityLawViolated, MonoidMismatch
from actlab.families import cg, rz2_plus_1, trivial

from conftest import random_act
from oracles import congruences_bruteforce, pointed_iso_search


def test_regular_representation_sizes():
    assert regular_representation(trivial()).size == 1
    assert regular_representation(rz2_plus_1()).size == 3
    assert regular_representation(cg()).size == 5


def test_validate_act_laws():
    M = rz2_plus_1()
    with pytest.raises(IdentityLawViolated):
        validate_act(M, [[1, 0], [0, 0], [1, 1]])
    # x.(y.p) must equal (x y).p = y.p
    with pytest.raises(ActionLawViolated):
        validate_act(M, [[0, 1], [0, 0], [1, 1]])


def test_cyclic_subacts():
    S = regular_representation(rz2_plus_1())
    A, emb = cyclic_subact(S, 1)
    assert A.size == 1 and emb == (1,)
    B, emb = cyclic_subact(regular_representation(cg()), 3)
    assert B.size == 4 and 3 in emb


def test_coproduct():
    M = rz2_plus_1()
    S = regular_representation(M)
    X, _ = cyclic_subact(S, 1)
    C, inj = coproduct(X, X)
    assert C.size == 2 and all(C.act(s, p) == p for s in M.elements for p in C.points)
    D, _ = coproduct(S, empty_act(M))
    assert D.size == S.size
    with pytest.raises(MonoidMismatch):
        coproduct(S, regular_representation(cg()))


def test_congruence_generated_and_quotient():
    M = cg()
    S = regular_representation(M)
    assert congruence_generated(S, []).is_identity()
    theta = congruence_generated(S, [(1, 2)])
    Q, proj = quotient_act(S, theta)
    assert Q.size == 4
    assert proj[1] == proj[2]
    # full relation gives one point
    full = congruence_generated(S, [(0, p) for p in S.points])
    assert quotient_act(S, full)[0].size == 1
    # trivial action: one pair, one merged block
    X, _ = cyclic_subact(regular_representation(rz2_plus_1()), 1)
    C, _ = coproduct(X, X, X)
    th = congruence_generated(C, [(0, 2)])
    assert th.n_blocks == 2


def test_connectivity_and_amalgam():
    M = cg()
    S = regular_representation(M)
    A, _ = cyclic_subact(S, 3)
    assert connectivity(A).n_blocks == 1
    C, inj = coproduct(A, A)
    assert connectivity(C).n_blocks == 2
    same = congruence_generated(C, [(inj[0][0], inj[0][1])])
    assert not same.is_identity() and not is_amalgam(C, same)
    cross = congruence_generated(C, [(inj[0][0], inj[1][0])])
    assert is_amalgam(C, cross)


def test_pointed_iso():
    M = rz2_plus_1()
    S = regular_representation(M)
    h = pointed_iso(S, 0, S, 0)
    assert h is not None and all(h.mapping[p] == p for p in S.points)
    assert pointed_iso(S, 0, S, 1) is None


def test_enumerate_congruences_small():
    M = rz2_plus_1()
    X, _ = cyclic_subact(regular_representation(M), 1)
    assert len(enumerate_congruences(X)) == 1
    C, _ = coproduct(X, X)
    assert len(enumerate_congruences(C)) == 2
    S = regular_representation(cg())
    S00, _ = cyclic_subact(S, 1)
    got = enumerate_congruences(S00)
    assert len(got) == len(congruences_bruteforce(S00.action, S00.size))
    assert got.congruences[0].is_identity()


def test_enumeration_cap():
    S = regular_representation(cg())
    full = enumerate_congruences(S)
    capped = enumerate_congruences(S, cap=2)
    assert capped.overflow and len(capped) == 2
    assert not full.overflow
    assert capped.congruences == full.congruences[:2]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["trivial", "rz2", "cg21", "syn9", "b22"]), st.integers(0, 2**32 - 1))
def test_random_act_properties(fixtures, name, seed):
    M = fixtures[name]
    A = random_act(M, np.random.default_rng(seed))
    # enumeration equals the brute-force partition filter
    congs = enumerate_congruences(A)
    brute = congruences_bruteforce(A.action, A.size)
    assert len(congs) == len(brute)
    assert {tuple(c.block_of) for c in congs} == {tuple(ActCongruence.from_labels(A, b).block_of) for b in brute}
    for theta in congs:
        Q, _ = quotient_act(A, theta)
        validate_act(M, Q.action)
        # re-generating from the collapsed pairs gives back theta
        assert congruence_generated(A, list(theta.pairs())) == theta
    # symmetry of pointed isomorphism existence
    for a in A.points:
        for b in A.points:
            ab = pointed_iso(A, a, A, b)
            ba = pointed_iso(A, b, A, a)
            assert (ab is None) == (ba is None) == (pointed_iso_search(A.action, a, A.action, b) is None)
            if ab is not None:
                assert all(ba.mapping[ab.mapping[p]] == p for p in ab.mapping)


def test_coproduct_connectivity_is_disjoint_union(fixtures):
    rng = np.random.default_rng(7)
    M = fixtures["cg21"]
    A, B = random_act(M, rng), random_act(M, rng)
    C, inj = coproduct(A, B)
    assert connectivity(C).n_blocks == connectivity(A).n_blocks + connectivity(B).n_blocks


def test_subact_and_identity_congruence():
    S = regular_representation(cg())
    A, emb = subact(S, [1, 2, 3, 4])
    assert A.size == 4
    assert is_congruence(A, identity_congruence(A).block_of)
