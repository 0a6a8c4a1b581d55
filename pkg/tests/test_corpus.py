import numpy as np
import pytest

from actlab.corpus import (
    InvariantResult,
    band_conditions,
    corpus_monoids,
    generate_monoids,
    monoid_tables,
    run_invariants,
)
from actlab.monoid import rect_band_decompose, relabel


def test_monoid_counts_up_to_isomorphism():
    assert [len(generate_monoids(n)) for n in range(1, 5)] == [1, 2, 7, 35]


def test_raw_tables_are_monoids():
    tables = monoid_tables(3)
    assert len(tables) == len(generate_monoids(3, up_to_iso=False))
    for T in tables:
        assert (T[0] == np.arange(3)).all() and (T[:, 0] == np.arange(3)).all()


def test_generation_is_closed_under_relabelling():
    from actlab.corpus import _canonical

    keys = {_canonical(M.table) for M in generate_monoids(3)}
    rng = np.random.default_rng(5)
    for M in generate_monoids(3):
        perm = [0] + list(rng.permutation([1, 2]))
        assert _canonical(relabel(M, perm).table) in keys


def test_invariants_on_generated_monoids():
    for name, M in corpus_monoids(4):
        res = run_invariants(M, name)
        assert res.ok, (name, res.failures())


def test_invariants_on_fixtures(fixtures):
    for name, M in fixtures.items():
        res = run_invariants(M, name)
        assert res.ok, (name, res.failures())


def test_band_conditions_on_twisted_band(fixtures):
    M = fixtures["twisted2"]
    dec = rect_band_decompose(M, range(1, M.order))
    assert all(band_conditions(M, dec).values())


def test_tsv_row():
    r = InvariantResult("m", 3, {"a": True, "b": False, "c": False})
    assert not r.ok and r.failures() == ["b", "c"]
    assert r.tsv() == "m\t3\tFAIL\tb,c"
    assert InvariantResult("n", 1, {"a": True}).tsv() == "n\t1\tPASS\t-"
