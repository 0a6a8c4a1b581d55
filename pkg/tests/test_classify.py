import json

import numpy as np
import pytest

from actlab.act import cyclic_subact, enumerate_congruences, pointed_iso, quotient_act, regular_representation
from actlab.classify import (
    Kind,
    ReportConfig,
    SECTIONS,
    axiomatizability_report,
    completeness_report,
    equalizer_family,
    full_report,
    idempotent_cover,
    minimal_idempotent_cover,
    model_completeness_report,
    omega_stability_report,
    orbit_iso_band,
    report_json,
    stability_report,
    superstability_report,
    validate_report,
)
from actlab.errors import NotInBand, REmptyError
from actlab.families import b22_plus_1, cg, rz2_plus_1, trivial
from actlab.monoid import eset, idempotents, rect_band_decompose
from actlab.regular import is_regular_act, monoid_regular_core

from oracles import _quotient_regular, congruences_bruteforce, pointed_iso_search

# B22+1 idempotents: e00 = 1, e01 = 3, e10 = 5, e11 = 7.


def test_equalizer_trivial():
    fam = equalizer_family(trivial(), {0})
    assert [set(X) for X in fam.members] == [{0}]


def test_equalizer_cg_free_group_action():
    M = cg()
    fam = equalizer_family(M, monoid_regular_core(M))
    assert fam.basic[1, 2] == set()
    assert fam.covers[eset([])] is None


def test_equalizer_b22():
    M = b22_plus_1()
    R = monoid_regular_core(M)
    fam = equalizer_family(M, R)
    X = fam.basic[1, 3]
    assert X and fam.is_right_ideal(M, X)
    cover = fam.covers[X]
    assert set().union(*(set(M.mul(e, r) for r in R) for e in cover)) == set(X)
    for Y in fam.members:
        assert fam.is_right_ideal(M, Y)


def test_minimal_cover_brute_force(fixtures):
    from itertools import combinations

    for name in ["rz2", "cg21", "b22", "syn9", "rb_z3_12"]:
        M = fixtures[name]
        R = monoid_regular_core(M)
        fam = equalizer_family(M, R)
        for X in fam.members:
            got = fam.covers[X]
            E = [e for e in X if M.mul(e, e) == e]
            best = None
            for k in range(1, len(E) + 1):
                for combo in combinations(E, k):
                    if set().union(*(set(M.mul(e, r) for r in R) for e in combo)) == set(X):
                        best = combo
                        break
                if best:
                    break
            assert got == best


def test_idempotent_cover():
    assert idempotent_cover(trivial(), {0}) == (0,)
    assert idempotent_cover(cg(), monoid_regular_core(cg())) == (0,)
    # on the band alone e.R is the row of e, so one idempotent per row
    M = b22_plus_1()
    band = set(range(1, 9))
    cov = idempotent_cover(M, band)
    assert cov == (1, 5)
    assert set().union(*(set(M.mul(e, r) for r in band) for e in cov)) == band
    with pytest.raises(REmptyError):
        idempotent_cover(M, set())


def test_axiomatizability():
    for M in (cg(), rz2_plus_1(), b22_plus_1(), trivial()):
        v = axiomatizability_report(M)
        assert v.kind == Kind.HOLDS
        R = monoid_regular_core(M)
        assert set().union(*(set(M.mul(e, r) for r in R) for e in v.certificate["cover"])) == set(R)
    assert axiomatizability_report(cg(), R=set()).kind == Kind.R_EMPTY


def test_axiomatizability_truncation():
    v = axiomatizability_report(b22_plus_1(), cap=2)
    assert v.kind == Kind.UP_TO_BOUND and v.bounds["truncated"]


def test_model_completeness():
    v = model_completeness_report(b22_plus_1())
    assert v.kind == Kind.FAILS
    assert (v.witness["condition"], v.witness["e"], v.witness["f"], v.witness["size"]) == (3, 1, 1, 2)
    w = model_completeness_report(cg()).witness
    assert w["size"] == 2


def test_completeness():
    v61, v62 = completeness_report(cg())
    assert v61.kind == Kind.FAILS
    assert v62.kind == Kind.FAILS and v62.evidence["applicable"] is False
    t61, _ = completeness_report(trivial())
    assert t61.kind == Kind.NOT_DECIDABLE_FINITE
    # the band part of B22+1 on its own
    band = range(1, 9)
    b61, _ = completeness_report(b22_plus_1(), R=band)
    assert b61.kind == Kind.NOT_DECIDABLE_FINITE
    assert b61.evidence["group_orders"] == [2, 2, 2, 2]
    assert b61.evidence["rows"] == 2


def test_completeness_layered(fixtures):
    v61, v62 = completeness_report(fixtures["layered64"])
    assert v61.evidence["depth"] == 3
    assert v62.evidence["applicable"] is False


def test_stability():
    v38, v71 = stability_report(cg())
    assert v38.kind == v71.kind == Kind.HOLDS
    v38, v71 = stability_report(rz2_plus_1())
    assert v71.kind == Kind.FAILS
    assert v71.witness["incomparable"] == [1, 2] and v71.witness["under"] == 0
    pat = v71.witness["grid"]["pattern"]
    assert pat == np.tril(np.ones((5, 5), dtype=int)).tolist()
    v38, _ = stability_report(b22_plus_1())
    assert v38.kind == Kind.FAILS
    M = b22_plus_1()
    x, y = v38.witness["incomparable"]
    Lx, Ly = set(M.left_ideals[x]), set(M.left_ideals[y])
    assert not Lx <= Ly and not Ly <= Lx


def test_stability_without_witness():
    cfg = ReportConfig(attach_witness=False)
    _, v71 = stability_report(rz2_plus_1(), config=cfg)
    assert "grid" not in v71.witness


def test_superstability():
    v39, v81 = superstability_report(cg())
    assert v39.kind == v81.kind == Kind.HOLDS
    assert v39.certificate["acc"] == "HOLDS"
    v39, v81 = superstability_report(rz2_plus_1())
    assert v39.kind == v81.kind == Kind.FAILS


def _regular_quotient_count(M, e):
    S = regular_representation(M)
    Se, _ = cyclic_subact(S, e)
    congs = enumerate_congruences(Se)
    got = sum(1 for th in congs if is_regular_act(quotient_act(Se, th)[0]))
    brute = congruences_bruteforce(Se.action, Se.size)
    want = sum(1 for labels in brute if _quotient_regular(M.table, Se.action, labels))
    return len(congs), len(brute), got, want


def test_omega_stability_counts(small_fixtures):
    v = omega_stability_report(trivial())
    assert v.kind == Kind.NOT_DECIDABLE_FINITE
    assert v.evidence["per_idempotent"] == [
        {"e": 0, "size": 1, "acc": "HOLDS", "congruences": 1, "regular_quotients": 1, "overflow": False}
    ]
    for name, M in small_fixtures.items():
        v = omega_stability_report(M)
        for row in v.evidence["per_idempotent"]:
            n, nb, r, rb = _regular_quotient_count(M, row["e"])
            assert row["congruences"] == n == nb
            assert row["regular_quotients"] == r == rb
    # CG(2,1), e = 0_0: the two-point group act
    n, nb, r, rb = _regular_quotient_count(cg(), 1)
    assert n == nb == 2 and r == rb


def test_omega_stability_overflow():
    v = omega_stability_report(b22_plus_1(), cap=3)
    assert v.evidence["per_idempotent"][0]["overflow"]


@pytest.mark.parametrize("name", ["b22", "rb_z3_12", "twisted2"])
def test_orbit_iso_band_exhaustive(fixtures, name):
    M = fixtures[name]
    band = range(1, M.order)
    dec = rect_band_decompose(M, band)
    S = regular_representation(M)
    E = [e for e in band if M.mul(e, e) == e]
    for a in band:
        for e in E:
            holds = orbit_iso_band(M, dec, a, e)
            assert holds == (M.mul(e, a) == a)
            assert holds == (pointed_iso_search(S.action, a, S.action, e) is not None)


def test_orbit_iso_band_errors():
    M = b22_plus_1()
    dec = rect_band_decompose(M, range(1, 9))
    assert orbit_iso_band(M, dec, 1, 1)
    assert not orbit_iso_band(M, dec, 5, 1)
    with pytest.raises(NotInBand):
        orbit_iso_band(M, dec, 0, 1)
    with pytest.raises(NotInBand):
        orbit_iso_band(M, dec, 1, 2)


def test_full_report_schema(fixtures):
    for name, M in fixtures.items():
        rep = full_report(M)
        validate_report(rep)
        assert set(rep["sections"]) == set(SECTIONS)
        assert json.loads(report_json(rep)) == rep


def test_full_report_empty_core():
    rep = full_report(cg(), core=[])
    validate_report(rep)
    assert {s["verdict"] for s in rep["sections"].values()} == {"R-EMPTY"}


def test_schema_rejects_missing_certificate():
    import jsonschema

    rep = full_report(trivial())
    del rep["sections"]["thm41"]["certificate"]
    with pytest.raises(jsonschema.ValidationError):
        validate_report(rep)
