import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from actlab.act import coproduct, cyclic_subact, regular_representation, subact, validate_act
from actlab.classify import idempotent_cover
from actlab.errors import ChainNotStrict, IdealsComparable, NoCoverIdempotentApplies, PreconditionFailed
from actlab.families import cg, rz2_plus_1, syn9, trivial
from actlab.regular import is_act_regular, is_regular_act, monoid_regular_core
from actlab.witness import (
    Triple,
    build_counting,
    build_grid,
    build_tree,
    check_separation,
    counting_witness_lemma,
    enumerate_triples,
    extract_triple,
    standard_counting_phi,
    verify_order_pattern,
    verify_triple,
)

from conftest import random_act
from oracles import triples_bruteforce

# RZ2+1: 0 = 1, 1 = x, 2 = y.  CG(2,1): 0 = 1, 1 = 0_0, 2 = 1_0, 3 = 0_1, 4 = 1_1.
# SYN9: 0 = 1, 1 = a, 2 = b, 3 = c.


def test_grid_rz2_n3():
    w = build_grid(rz2_plus_1(), a=0, t=1, s=2, N=3)
    assert len(w.cells) == 10
    pat = verify_order_pattern(w)
    assert pat.shape == (4, 4)
    assert np.array_equal(pat, np.tril(np.ones((4, 4), dtype=bool)))
    assert is_regular_act(w.act)


def test_grid_small_n():
    w0 = build_grid(rz2_plus_1(), 0, 1, 2, N=0)
    assert verify_order_pattern(w0).tolist() == [[True]]
    assert w0.act.size == 3
    w1 = build_grid(rz2_plus_1(), 0, 1, 2, N=1)
    assert verify_order_pattern(w1).tolist() == [[True, False], [True, True]]


def test_grid_relabel_invariance():
    M = rz2_plus_1()
    S = regular_representation(M)
    perm = np.array([2, 0, 1])
    inv = np.argsort(perm)
    T = validate_act(M, perm[S.action[:, inv]])
    w = build_grid(M, 0, 1, 2, N=2)
    v = build_grid(M, int(perm[0]), 1, 2, N=2, source=T)
    assert np.array_equal(w.pattern(), v.pattern())


def test_grid_comparable_ideals():
    M = cg()
    for a in M.elements:
        for t in M.elements:
            for s in M.elements:
                with pytest.raises(IdealsComparable):
                    build_grid(M, a, t, s, N=1)


def test_tree_cg():
    w = build_tree(cg(), a=0, chain=[1, 3], kappa=2, d=2)
    assert len(w.sequences) == 4
    assert len(set(w.leaf.values())) == 4
    assert check_separation(w) == 4 * 4 * 3


def test_tree_degenerate_and_errors():
    w = build_tree(cg(), a=0, chain=[], kappa=2, d=0)
    assert len(w.sequences) == 1
    assert w.act.size == cg().order
    with pytest.raises(ChainNotStrict):
        build_tree(rz2_plus_1(), a=1, chain=[1, 1], d=2)
    with pytest.raises(ChainNotStrict):
        build_tree(cg(), a=0, chain=[3, 1], d=2)


def test_triples_trivial_monoid():
    M = trivial()
    A = regular_representation(M)
    fam = enumerate_triples(M, A)
    # identity theta with I = S and with I empty
    assert fam.count() == 2
    ideals = sorted(len(tr.ideal) for tr in fam)
    assert ideals == [0, 1]


@pytest.mark.parametrize("name", ["trivial", "rz2", "cg21", "syn9"])
def test_triples_match_bruteforce(fixtures, name):
    M = fixtures[name]
    S = regular_representation(M)
    rng = np.random.default_rng(3)
    acts = [S, cyclic_subact(S, M.order - 1)[0], random_act(M, rng, 4)]
    for A in acts:
        fam = enumerate_triples(M, A)
        assert not any(fam.overflow.values())
        for tr in fam:
            assert verify_triple(M, A, tr) == []
        got = {(tr.idempotent, tr.theta, tuple(tr.ideal), tr.alpha) for tr in fam}
        want = set()
        for e in fam.cover:
            want |= triples_bruteforce(M.table, A.action, e)
        assert got == want


def test_triples_cg_two_point_act():
    M = cg()
    A, _ = cyclic_subact(regular_representation(M), 1)
    assert A.size == 2
    fam = enumerate_triples(M, A)
    want = set()
    for e in fam.cover:
        want |= triples_bruteforce(M.table, A.action, e)
    assert fam.count() == len(want)


def test_triples_cap():
    M = cg()
    S = regular_representation(M)
    fam = enumerate_triples(M, S, cap=1)
    assert fam.count() == 1 and any(fam.overflow.values())
    assert verify_triple(M, S, next(iter(fam))) == []


def test_verify_triple_flags_bad_alpha():
    M = cg()
    S = regular_representation(M)
    tr = next(iter(enumerate_triples(M, S)))
    if tr.alpha:
        x, v = tr.alpha[0]
        bad = Triple(tr.idempotent, tr.theta, tr.ideal, ((x, (v + 1) % S.size),) + tr.alpha[1:])
        assert verify_triple(M, S, bad)


def test_extract_whole_act():
    M = cg()
    S = regular_representation(M)
    for b0 in S.points:
        tr, A, inc = extract_triple(M, S, S.points, b0)
        e = tr.idempotent
        assert set(tr.ideal) == set(M.left_ideals[e])
        assert len(tr.alpha) == len(M.left_ideals[e])
        assert tr in enumerate_triples(M, A)


def test_extract_fresh_copy():
    M = rz2_plus_1()
    S = regular_representation(M)
    A, _ = cyclic_subact(S, 1)
    Se, _ = cyclic_subact(S, 0)
    B, inj = coproduct(A, Se)
    tr, A2, inc = extract_triple(M, B, inj[0], inj[1][0])
    assert len(tr.ideal) == 0 and tr.alpha == ()
    assert tr in enumerate_triples(M, A2)


def test_extract_from_grid():
    M = rz2_plus_1()
    w = build_grid(M, 0, 1, 2, N=2)
    B = w.act
    top = [p for p in B.points if len(B.orbit(p)) == 3]
    A_pts = B.orbit(top[0])
    b0 = next(p for p in top if p not in A_pts)
    tr, A, inc = extract_triple(M, B, A_pts, b0)
    assert verify_triple(M, A, tr) == []
    assert tr in enumerate_triples(M, A)


def test_extract_irregular_point():
    M = cg()
    one = validate_act(M, np.zeros((M.order, 1), dtype=np.int64))
    with pytest.raises(NoCoverIdempotentApplies):
        extract_triple(M, one, [0], 0)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(["rz2", "cg21", "syn9", "b22"]), st.integers(0, 2**32 - 1))
def test_extract_lands_in_triples(fixtures, name, seed):
    M = fixtures[name]
    rng = np.random.default_rng(seed)
    B = random_act(M, rng, 5)
    gens = [p for p in B.points if rng.random() < 0.5]
    A_pts = sorted({q for p in gens for q in B.orbit(p)})
    b0 = int(rng.integers(B.size))
    if not is_act_regular(B, b0).regular:
        with pytest.raises(NoCoverIdempotentApplies):
            extract_triple(M, B, A_pts, b0)
        return
    tr, A, inc = extract_triple(M, B, A_pts, b0)
    assert verify_triple(M, A, tr) == []
    assert tr in enumerate_triples(M, A)


def test_counting_syn9():
    M = syn9()
    w = build_counting(M, 1, 2, 3, 2, 3, standard_counting_phi(2), 1, [(0,), (1,), (0, 2), ()], 2)
    assert w.acts[frozenset({0})].truth == (True, False, False)
    assert w.acts[frozenset({1})].truth == (False, True, False)
    assert w.acts[frozenset({0, 2})].truth == (True, False, True)
    assert w.acts[frozenset()].truth == (False, False, False)
    assert w.checks["StrictChain"] == [1, 2, 3]
    same = counting_witness_lemma(M, a=1, b=2, c=3, alpha=2, beta=3, Phi=standard_counting_phi(2), Ks=[(1,)])
    assert same.acts[frozenset({1})].truth == (False, True, False)


def test_counting_preconditions():
    M = syn9()
    phi = standard_counting_phi(2)
    with pytest.raises(PreconditionFailed) as exc:
        build_counting(M, 2, 1, 3, 2, 3, phi)
    assert exc.value.which == "StrictChain"
    with pytest.raises(PreconditionFailed) as exc:
        build_counting(M, 1, 2, 3, 3, 3, phi)
    assert exc.value.which == "Generators"
    with pytest.raises(PreconditionFailed) as exc:
        build_counting(cg(), 0, 3, 1, 3, 1, standard_counting_phi(0))
    assert exc.value.which == "Base"
    with pytest.raises(ValueError):
        build_counting(M, 1, 2, 3, 2, 3, phi, Ks=[(5,)])
