import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from actlab.act import regular_representation, validate_act
from actlab.errors import ArityMismatch, ParseError, UnboundVariable
from actlab.families import cg, rz2_plus_1
from actlab.logic import (
    And,
    Const,
    Eq,
    Exists,
    ExistsAtLeast,
    ExistsExactly,
    Forall,
    Implies,
    Not,
    Or,
    Structure,
    Var,
    count_witnesses,
    evaluate,
    format_formula,
    free_vars,
    parse_formula,
    rename,
    witnesses,
)

from conftest import random_act

VARS = ["x", "y", "z"]


def formulas(n_elems: int, n_points: int):
    terms = st.one_of(
        st.builds(Var, st.sampled_from(VARS), st.one_of(st.none(), st.integers(0, n_elems - 1))),
        st.builds(Const, st.integers(0, n_points - 1), st.one_of(st.none(), st.integers(0, n_elems - 1))),
    )
    atoms = st.builds(Eq, terms, terms)

    def extend(inner):
        return st.one_of(
            st.builds(Not, inner),
            st.builds(lambda a, b: And(a, b), inner, inner),
            st.builds(lambda a, b: Or(a, b), inner, inner),
            st.builds(Implies, inner, inner),
            st.builds(Exists, st.sampled_from(VARS), inner),
            st.builds(Forall, st.sampled_from(VARS), inner),
            st.builds(ExistsAtLeast, st.integers(0, 3), st.sampled_from(VARS), inner),
            st.builds(ExistsExactly, st.integers(0, 3), st.sampled_from(VARS), inner),
        )

    return st.recursive(atoms, extend, max_leaves=6)


def close(phi):
    for v in sorted(free_vars(phi)):
        phi = Exists(v, phi)
    return phi


def test_parse_examples():
    phi = parse_formula("E z (x = [1]z & y = [2]z)")
    assert phi == Exists("z", And(Eq(Var("x"), Var("z", 1)), Eq(Var("y"), Var("z", 2))))
    assert free_vars(phi) == {"x", "y"}
    psi = parse_formula("A x (x = #0 | ~ [2]x = x)")
    assert isinstance(psi, Forall) and free_vars(psi) == frozenset()
    assert parse_formula("x != y") == Not(Eq(Var("x"), Var("y")))
    assert parse_formula("E{>=3} x ([4]x = x)") == ExistsAtLeast(3, "x", Eq(Var("x", 4), Var("x")))
    assert parse_formula("a = b -> b = c -> c = a") == Implies(
        Eq(Var("a"), Var("b")), Implies(Eq(Var("b"), Var("c")), Eq(Var("c"), Var("a")))
    )


def test_parse_with_resolver():
    names = {"x": 1, "y": 2}
    phi = parse_formula("[x]u = [y]u", resolve=names.__getitem__)
    assert phi == Eq(Var("u", 1), Var("u", 2))


@pytest.mark.parametrize(
    "text, col",
    [("x = ", None), ("x = y )", 7), ("E = x", 3), ("x ? y", 3), ("(x = y", None), ("x y", 3)],
)
def test_parse_errors(text, col):
    with pytest.raises(ParseError) as exc:
        parse_formula(text)
    if col is not None:
        assert exc.value.col == col


def test_evaluate_on_regular_representation():
    M = rz2_plus_1()
    S = regular_representation(M)
    # right zeros: x.p = p exactly for p in {x, y}
    fixed = parse_formula("[1]p = p")
    assert witnesses(S, fixed, "p") == [1, 2]
    assert count_witnesses(S, parse_formula("E z (p = [1]z)"), "p") == 2
    assert evaluate(S, parse_formula("E{=2} p ([1]p = p | [2]p = p)"))
    assert not evaluate(S, parse_formula("E{=1} p ([1]p = p | [2]p = p)"))
    assert evaluate(S, parse_formula("A p E q (p = [0]q)"))


def test_unbound_and_arity():
    S = regular_representation(cg())
    with pytest.raises(UnboundVariable):
        evaluate(S, parse_formula("x = y"), {"x": 0})
    with pytest.raises(ArityMismatch):
        count_witnesses(S, parse_formula("x = y"), "x")
    assert count_witnesses(S, parse_formula("x = y"), "x", {"y": 2}) == 1


def test_rename():
    phi = parse_formula("E z (x = [1]z) & z = y")
    got = rename(phi, {"z": "w", "x": "u"})
    assert got == parse_formula("E z (u = [1]z) & w = y")
    with pytest.raises(ValueError):
        rename(parse_formula("E z (x = z)"), {"x": "z"})


def test_structure_with_hashable_points():
    st_ = Structure(["p", "q"], lambda s, p: "q" if s == "flip" and p == "p" else p)
    assert evaluate(st_, Exists("u", Eq(Var("u", "flip"), Var("u"))))
    assert count_witnesses(st_, Eq(Var("u", "flip"), Const("q")), "u") == 2


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_format_parse_round_trip(data):
    phi = data.draw(formulas(5, 3))
    assert parse_formula(format_formula(phi)) == phi


@settings(max_examples=120, deadline=None)
@given(st.data(), st.integers(0, 2**32 - 1))
def test_evaluation_laws(fixtures, data, seed):
    M = fixtures["cg21"]
    A = random_act(M, np.random.default_rng(seed))
    phi = data.draw(formulas(M.order, A.size))
    val = {v: data.draw(st.integers(0, A.size - 1)) for v in VARS}
    t = evaluate(A, phi, val)
    assert evaluate(A, Not(phi), val) == (not t)
    assert evaluate(A, Not(Not(phi)), val) == t
    for v in VARS:
        ex = evaluate(A, Exists(v, phi), val)
        assert evaluate(A, Not(Forall(v, Not(phi))), val) == ex
        assert evaluate(A, ExistsAtLeast(1, v, phi), val) == ex
        assert evaluate(A, ExistsAtLeast(0, v, phi), val)
        n = count_witnesses(A, phi, v, {k: x for k, x in val.items() if k != v}) if free_vars(phi) - {v} <= set(val) and v in free_vars(phi) else None
        if n is not None:
            assert evaluate(A, ExistsExactly(n, v, phi), val)
            assert not evaluate(A, ExistsExactly(n + 1, v, phi), val)


@settings(max_examples=100, deadline=None)
@given(st.data(), st.integers(0, 2**32 - 1))
def test_isomorphism_invariance(fixtures, data, seed):
    M = fixtures[data.draw(st.sampled_from(["rz2", "cg21", "syn9"]))]
    rng = np.random.default_rng(seed)
    A = random_act(M, rng)
    perm = rng.permutation(A.size)  # old -> new
    inv = np.argsort(perm)
    B = validate_act(M, perm[A.action[:, inv]])
    phi = data.draw(formulas(M.order, A.size))
    val = {v: data.draw(st.integers(0, A.size - 1)) for v in VARS}

    def move(f):
        if isinstance(f, Eq):
            return Eq(*(Const(int(perm[t.point]), t.elem) if isinstance(t, Const) else t for t in (f.left, f.right)))
        if isinstance(f, Not):
            return Not(move(f.body))
        if isinstance(f, (And, Or)):
            return type(f)(*(move(p) for p in f.parts))
        if isinstance(f, Implies):
            return Implies(move(f.premise), move(f.conclusion))
        if isinstance(f, (ExistsAtLeast, ExistsExactly)):
            return type(f)(f.n, f.var, move(f.body))
        return type(f)(f.var, move(f.body))

    assert evaluate(A, phi, val) == evaluate(B, move(phi), {k: int(perm[p]) for k, p in val.items()})
    assert evaluate(A, close(phi)) == evaluate(B, close(move(phi)))
