"""Small-monoid generation and the per-monoid invariant suite."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Callable, Iterator

import numpy as np

from .act import regular_representation
from .errors import ActlabError, NotABand
from .monoid import (
    FiniteMonoid,
    RectBandDecomposition,
    depth,
    eset,
    idempotents,
    kernel,
    rect_band_decompose,
    validate_monoid,
)
from .regular import is_regular_act, is_vn_regular, monoid_regular_core


def _associative_mask(tables: np.ndarray) -> np.ndarray:
    n = tables.shape[1]
    idx = np.arange(len(tables))[:, None, None, None]
    a, b, c = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
    ab = tables[idx, a[None], b[None]]
    bc = tables[idx, b[None], c[None]]
    left = tables[idx, ab, c[None]]
    right = tables[idx, a[None], bc]
    return (left == right).reshape(len(tables), -1).all(axis=1)


def monoid_tables(n: int) -> np.ndarray:
    """Every associative n x n table with identity 0, as an array of shape (k, n, n)."""
    if n == 1:
        return np.zeros((1, 1, 1), dtype=np.int64)
    free = (n - 1) ** 2
    cells = np.array(list(product(range(n), repeat=free)), dtype=np.int64)
    tables = np.empty((len(cells), n, n), dtype=np.int64)
    tables[:, 0, :] = np.arange(n)
    tables[:, :, 0] = np.arange(n)
    tables[:, 1:, 1:] = cells.reshape(-1, n - 1, n - 1)
    return tables[_associative_mask(tables)]


def _canonical(table: np.ndarray) -> bytes:
    n = len(table)
    best = None
    for rest in permutations(range(1, n)):
        perm = np.array((0,) + rest)  # old -> new
        inv = np.argsort(perm)
        key = perm[table[np.ix_(inv, inv)]].tobytes()
        if best is None or key < best:
            best = key
    return best


def generate_monoids(n: int, up_to_iso: bool = True) -> list[FiniteMonoid]:
    """All monoids of order n with identity 0, optionally one per isomorphism class."""
    tables = monoid_tables(n)
    if up_to_iso:
        seen = {}
        for t in tables:
            seen.setdefault(_canonical(t), t)
        tables = [seen[k] for k in sorted(seen)]
    return [validate_monoid(n, t, identity_hint=0) for t in tables]


# --- invariant suite ---------------------------------------------------------

def _idempotent_ideal_membership(M: FiniteMonoid) -> bool:
    L, R = M.left_ideals, M.right_ideals
    for e in idempotents(M):
        for a in M.elements:
            if (R[a] <= R[e]) != (M.mul(e, a) == a):
                return False
            if (L[a] <= L[e]) != (M.mul(a, e) == a):
                return False
    return True


def _idempotent_antisymmetry(M: FiniteMonoid) -> bool:
    L, R = M.left_ideals, M.right_ideals
    E = idempotents(M)
    return all(e == f for e in E for f in E if L[e] <= L[f] and R[f] <= R[e])


def _minimal(sets: dict, key) -> bool:
    return not any(other < sets[key] for other in sets.values())


def _minimal_duality(M: FiniteMonoid) -> bool:
    E = list(idempotents(M))
    left = {e: M.left_ideals[e] for e in E}
    right = {e: M.right_ideals[e] for e in E}
    return all(_minimal(left, e) == _minimal(right, e) for e in E)


def _kernel_local_groups(M: FiniteMonoid) -> bool:
    K = kernel(M)
    for e in idempotents(M):
        if M.left_ideals[e] <= K:  # minimal left ideal
            G = [a for a in M.elements if M.mul(e, a) == a and M.mul(a, e) == a]
            for a in G:
                if not any(M.mul(a, b) == e and M.mul(b, a) == e for b in G):
                    return False
                if any(M.mul(a, b) not in G for b in G):
                    return False
    return True


def band_conditions(M: FiniteMonoid, dec: RectBandDecomposition) -> dict[str, bool]:
    """Structural laws of a rectangular band of groups, keyed by short names."""
    T = dec.subset
    E = dec.idempotent_grid
    I, J = range(dec.n_rows), range(dec.n_cols)
    cell = dec.cell

    def times(X, Y):
        return eset(M.mul(x, y) for x in X for y in Y)

    def tleft(a):
        return eset(M.mul(t, a) for t in T)

    def tright(a):
        return eset(M.mul(a, t) for t in T)

    out = {}
    out["unit_products"] = all(
        M.mul(E[i, j], E[k, j]) == E[i, j] and M.mul(E[i, j], E[i, l]) == E[i, l]
        for i, k in product(I, I) for j, l in product(J, J)
    )
    out["cell_products"] = all(
        times([E[i, j]], cell(k, l)) == times(cell(i, j), [E[k, l]]) == times(cell(i, j), cell(k, l)) == cell(i, l)
        for i, k in product(I, I) for j, l in product(J, J)
    )
    out["equal_cells"] = len(set(dec.group_orders)) == 1
    out["principal_ideals"] = all(
        tleft(E[i, j]) == eset(x for p in I for x in cell(p, j))
        and tright(E[i, j]) == eset(x for p in J for x in cell(i, p))
        for i in I for j in J
    )
    out["ideal_membership"] = all(
        (tleft(a) == tleft(E[i, j])) == (dec.component[a][1] == j)
        and (tright(a) == tright(E[i, j])) == (dec.component[a][0] == i)
        for a in T for i in I for j in J
    )
    lefts = [tleft(a) for a in T]
    rights = [tright(a) for a in T]
    out["minimal_ideals"] = all(not any(y < x for y in lefts) for x in lefts) and all(not any(y < x for y in rights) for x in rights)
    return out


@dataclass
class InvariantResult:
    name: str
    order: int
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def failures(self) -> list[str]:
        return [k for k, v in self.checks.items() if not v]

    def tsv(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{self.name}\t{self.order}\t{status}\t{','.join(self.failures()) or '-'}"


def run_invariants(M: FiniteMonoid, name: str = "") -> InvariantResult:
    """Structural invariants of a single monoid; every value should be True."""
    from .classify import equalizer_family, full_report, idempotent_cover, model_completeness_report

    res = InvariantResult(name or M.fingerprint, M.order)
    c = res.checks

    def guard(key: str, fn: Callable[[], bool]):
        try:
            c[key] = bool(fn())
        except ActlabError:
            c[key] = False

    guard("idempotent_ideal_membership", lambda: _idempotent_ideal_membership(M))
    guard("idempotent_ideal_antisymmetry", lambda: _idempotent_antisymmetry(M))
    guard("minimal_ideal_duality", lambda: _minimal_duality(M))
    guard("kernel_local_groups", lambda: _kernel_local_groups(M))
    K = kernel(M)
    try:
        dec = rect_band_decompose(M, K)
        guard("kernel_is_band", lambda: eset(x for k in dec.groups for x in dec.cell(*k)) == K)
        for k, v in band_conditions(M, dec).items():
            c[f"band.{k}"] = v
    except NotABand:
        c["kernel_is_band"] = False

    R = monoid_regular_core(M)
    S = regular_representation(M)
    c["R.nonempty"] = bool(R)
    c["R.closed"] = all(M.mul(x, y) in R for x in R for y in R)
    c["R.has_idempotent"] = any(M.mul(x, x) == x for x in R)
    c["vn_regular_rep_regular"] = (not is_vn_regular(M)) or is_regular_act(S)
    ER = [e for e in R if M.mul(e, e) == e]
    c["core_right_ideals"] = all(
        (M.right_ideals[e] == M.right_ideals[f]) == (eset(M.mul(e, r) for r in R) == eset(M.mul(f, r) for r in R))
        for e in ER for f in ER
    )
    guard("core_kernel_is_band", lambda: rect_band_decompose(M, _kernel_within(M, R)) is not None)
    c["kernel_matches_core_kernel"] = K == _kernel_within(M, R)
    c["depth2_core_full"] = depth(M) != 2 or len(R) == M.order

    cover = idempotent_cover(M, R)
    c["cover.union"] = eset(M.mul(e, r) for e in cover for r in R) == R
    fam = equalizer_family(M, R)
    c["equalizer.right_ideal"] = all(fam.is_right_ideal(M, X) for X in fam.members)
    c["equalizer.covers"] = all(
        eset(M.mul(e, r) for e in fam.covers[X] for r in R) == X for X in fam.members if X
    )
    v = model_completeness_report(M, R)
    w = v.witness
    c["min_eSf_recount"] = len({M.mul(M.mul(w["e"], s), w["f"]) for s in M.elements}) == w["size"]

    rep = full_report(M)
    sec = rep["sections"]
    c["report.sections"] = len(sec) == 9
    if sec["thm71"]["verdict"] == "FAILS":
        pat = sec["thm71"]["witness"]["grid"]["pattern"]
        c["grid.pattern"] = all(pat[i][j] == int(i >= j) for i in range(len(pat)) for j in range(len(pat)))
    return res


def _kernel_within(M: FiniteMonoid, T) -> frozenset:
    from .classify import _kernel_of_subset

    return _kernel_of_subset(M, eset(T))


def corpus_monoids(max_order: int = 4) -> Iterator[tuple[str, FiniteMonoid]]:
    for n in range(1, max_order + 1):
        for k, M in enumerate(generate_monoids(n)):
            yield f"gen{n}_{k:02d}", M


def fixtures() -> dict[str, FiniteMonoid]:
    """The named fixture monoids, keyed by short name."""
    from .families import FINITE_FAMILIES as F

    return {
        "trivial": F["trivial"](),
        "rz2": F["rz2"](),
        "cg21": F["cg"](),
        "cg32": F["chain_of_groups"](3, 2),
        "cg21s": F["chain_of_groups"](2, 1, True),
        "b22": F["b22"](),
        "syn9": F["syn9"](),
        "layered64": F["layered64"](),
        "rb_z3_12": F["rect_band"](3, 1, 2),
        "twisted2": F["twisted_band"](2, 2),
    }
