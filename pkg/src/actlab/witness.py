"""Finite executable versions of the witness constructions.

* grid acts: copies of S.a glued along b = t.a and c = s.a, exhibiting the
  pattern ``E z (x = [t]z & y = [s]z)`` holding of (b_i, c_j) iff i >= j;
* tree acts: copies of S.a indexed by sequences, glued along a strict chain
  a_0 < a_1 < ... so that level-k membership separates distinct sequences;
* triples <theta, I, alpha> on S.e for cover idempotents e, and extraction of
  the triple carried by a point b0 over a subact A;
* counting acts M_K whose glued c-point satisfies the i-th counting formula
  exactly when i is in K.

Patterns guaranteed by the constructions raise PatternViolated on failure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Iterator, Sequence

import numpy as np

from .act import (
    ActCongruence,
    FiniteAct,
    canonical_labels,
    congruence_generated,
    coproduct,
    cyclic_subact,
    is_congruence,
    is_subact,
    iter_congruences,
    quotient_act,
    regular_representation,
    subact,
)
from .errors import (
    ChainNotStrict,
    IdealsComparable,
    NoCoverIdempotentApplies,
    PatternViolated,
    PreconditionFailed,
    SeparationViolated,
)
from .logic import (
    And,
    Const,
    Eq,
    Exists,
    ExistsExactly,
    Formula,
    Forall,
    Implies,
    Not,
    Var,
    count_witnesses,
    evaluate,
    free_vars,
    rename,
)
from .monoid import ElementSet, FiniteMonoid, eset
from .regular import is_act_regular, is_regular_act, monoid_regular_core


def _glue(copies: Sequence[FiniteAct], pairs: Iterable[tuple[int, int]]):
    """Coproduct of ``copies`` modulo the congruence generated by ``pairs``.

    ``pairs`` use global (coproduct) indices. Returns the quotient, the
    projection and the injections.
    """
    C, inj = coproduct(*copies)
    theta = congruence_generated(C, pairs)
    Q, proj = quotient_act(C, theta)
    return Q, proj, inj, theta


# --- order-property grid -----------------------------------------------------

def grid_formula(t: int, s: int) -> Formula:
    return Exists("z", And(Eq(Var("x"), Var("z", t)), Eq(Var("y"), Var("z", s))))


@dataclass(frozen=True)
class GridWitness:
    a: int
    t: int
    s: int
    N: int
    act: FiniteAct
    b_points: tuple[int, ...]  # b_i, i = 0..N
    c_points: tuple[int, ...]  # c_j, j = 0..N
    cells: tuple[tuple[int, int], ...]  # (i, j) with j <= i, in copy order
    formula: Formula = field(repr=False)

    def pattern(self) -> np.ndarray:
        return verify_order_pattern(self)


def build_grid(
    M: FiniteMonoid, a: int, t: int, s: int, N: int = 4, source: FiniteAct | None = None
) -> GridWitness:
    """Glue copies A_ij (j <= i <= N) of S.a: b's along rows, c's along columns."""
    if N < 0:
        raise ValueError("N must be non-negative")
    src = source if source is not None else regular_representation(M)
    b, c = src.act(t, a), src.act(s, a)
    Sb, Sc = src.orbit(b), src.orbit(c)
    if Sb <= Sc or Sc <= Sb:
        raise IdealsComparable(f"S.{b} and S.{c} are comparable")
    if not is_act_regular(src, a).regular:
        raise PreconditionFailed("ActRegular", f"point {a} is not act-regular")

    orbit, emb = cyclic_subact(src, a)
    local = {p: i for i, p in enumerate(emb)}
    cells = tuple((i, j) for i in range(N + 1) for j in range(i + 1))
    _, inj = coproduct(*([orbit] * len(cells)))
    where = {cell: k for k, cell in enumerate(cells)}
    pairs = []
    for (i, j), (k, l) in product(cells, cells):
        if i == k and j < l:
            pairs.append((inj[where[i, j]][local[b]], inj[where[k, l]][local[b]]))
        if j == l and i < k:
            pairs.append((inj[where[i, j]][local[c]], inj[where[k, l]][local[c]]))
    Q, proj, inj, theta = _glue([orbit] * len(cells), pairs)

    # theta must not collapse anything inside one copy
    for k in range(len(cells)):
        if len({proj[p] for p in inj[k]}) != orbit.size:
            raise PatternViolated(cells[k], "gluing collapsed points inside a copy")
    b_points = tuple(proj[inj[where[i, i]][local[b]]] for i in range(N + 1))
    c_points = tuple(proj[inj[where[j, j]][local[c]]] for j in range(N + 1))
    w = GridWitness(a, t, s, N, Q, b_points, c_points, cells, grid_formula(t, s))
    verify_order_pattern(w)
    return w


def verify_order_pattern(w: GridWitness) -> np.ndarray:
    """Truth matrix of phi(b_i, c_j); raises unless it is exactly {i >= j}."""
    n = w.N + 1
    out = np.zeros((n, n), dtype=bool)
    for i, j in product(range(n), range(n)):
        out[i, j] = evaluate(w.act, w.formula, {"x": w.b_points[i], "y": w.c_points[j]})
    expected = np.tril(np.ones((n, n), dtype=bool))
    if not np.array_equal(out, expected):
        i, j = map(int, np.argwhere(out != expected)[0])
        raise PatternViolated((i, j), f"phi(b_{i}, c_{j}) = {bool(out[i, j])}")
    return out


# --- separation tree ---------------------------------------------------------

def _support_length(eta: Sequence[int]) -> int:
    """Least n with eta(m) = 0 for all m >= n."""
    n = len(eta)
    while n and eta[n - 1] == 0:
        n -= 1
    return n


def _pad(prefix: Sequence[int], d: int) -> tuple[int, ...]:
    return tuple(prefix) + (0,) * (d - len(prefix))


@dataclass(frozen=True)
class TreeWitness:
    a: int
    chain: tuple[int, ...]  # s_0..s_d with a_k = s_k.a (s_d = 1 unless given)
    kappa: int
    d: int
    act: FiniteAct
    sequences: tuple[tuple[int, ...], ...]  # gluing order
    leaf: dict  # eta -> point b_eta
    level: dict  # (prefix, k) -> point b_{eta_k}

    def membership(self, k: int, prefix: tuple[int, ...], point: int) -> bool:
        """Does ``b_prefix = s_k.x`` hold of ``point``?"""
        phi = Eq(Const(self.level[prefix, k]), Var("x", self.chain[k]))
        return evaluate(self.act, phi, {"x": point})


def build_tree(
    M: FiniteMonoid,
    a: int,
    chain: Sequence[int],
    kappa: int = 2,
    d: int | None = None,
    source: FiniteAct | None = None,
) -> TreeWitness:
    """Tree act over sequences in kappa^d for a strict chain S.a_0 < ... inside S.a.

    ``chain`` lists s_0, s_1, ... with a_k = s_k.a; it is extended by the
    identity (a_d = a) when it has exactly d entries.
    """
    src = source if source is not None else regular_representation(M)
    chain = [int(x) for x in chain]
    if d is None:
        d = len(chain)
    if len(chain) == d:
        chain = chain + [M.identity]
    if len(chain) != d + 1:
        raise ValueError(f"chain needs d or d+1 entries, got {len(chain)}")
    if kappa < 1:
        raise ValueError("kappa must be positive")
    points = [src.act(s_k, a) for s_k in chain]
    orbits = [src.orbit(p) for p in points]
    Sa = src.orbit(a)
    for k in range(d):
        if not orbits[k] < orbits[k + 1]:
            raise ChainNotStrict(f"S.a_{k} is not strictly inside S.a_{k + 1}")
    if not orbits[d] <= Sa:
        raise ChainNotStrict("top of the chain is not inside S.a")

    orbit, emb = cyclic_subact(src, a)
    local = {p: i for i, p in enumerate(emb)}
    seqs = sorted(product(range(kappa), repeat=d), key=lambda e: (_support_length(e), e))
    where = {eta: n for n, eta in enumerate(seqs)}
    C, inj = coproduct(*([orbit] * len(seqs)))
    pairs = []
    for eta in seqs:
        r = _support_length(eta)
        if r == 0:
            continue
        parent = _pad(eta[: r - 1], d)
        p = local[points[r - 1]]
        pairs.append((inj[where[eta]][p], inj[where[parent]][p]))
    theta = congruence_generated(C, pairs)
    Q, proj = quotient_act(C, theta)

    leaf = {eta: proj[inj[where[eta]][local[a]]] for eta in seqs}
    level = {}
    for eta in seqs:
        for k in range(d + 1):
            prefix = eta[:k]
            level.setdefault((prefix, k), proj[inj[where[_pad(prefix, d)]][local[points[k]]]])
    w = TreeWitness(a, tuple(chain), kappa, d, Q, tuple(seqs), leaf, level)
    check_separation(w)
    return w


def check_separation(w: TreeWitness) -> int:
    """Check b_{eta_k} = s_k.x holds of b_eps iff eps and eta share the length-k prefix.

    Returns the number of (eta, eps, k) cases checked.
    """
    n = 0
    for eta, eps in product(w.sequences, repeat=2):
        for k in range(w.d + 1):
            expected = eta[:k] == eps[:k]
            if w.membership(k, eta[:k], w.leaf[eps]) != expected:
                raise SeparationViolated((eta, eps, k))
            n += 1
    for eta, eps in combinations(w.sequences, 2):
        if not any(
            w.membership(k, eta[:k], w.leaf[eta]) != w.membership(k, eta[:k], w.leaf[eps])
            for k in range(w.d + 1)
        ):
            raise SeparationViolated((eta, eps), "no level separates the pair")
    return n


# --- triples -----------------------------------------------------------------

@dataclass(frozen=True)
class Triple:
    """<theta, I, alpha> on S.e; points of S.e are named by monoid elements."""

    idempotent: int
    theta: tuple[tuple[int, ...], ...]  # blocks of monoid elements in S.e
    ideal: ElementSet
    alpha: tuple[tuple[int, int], ...]  # sorted (element of I, point of A)

    def alpha_map(self) -> dict:
        return dict(self.alpha)

    def to_json(self) -> dict:
        return {
            "idempotent": self.idempotent,
            "theta": [list(b) for b in self.theta],
            "ideal": list(self.ideal.members),
            "alpha": [list(p) for p in self.alpha],
        }


def _blocks_from_labels(elems: Sequence[int], labels: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    blocks: dict[int, list[int]] = {}
    for x, lab in zip(elems, labels):
        blocks.setdefault(lab, []).append(x)
    return tuple(tuple(sorted(b)) for b in sorted(blocks.values()))


def verify_triple(M: FiniteMonoid, A: FiniteAct, tr: Triple) -> list[str]:
    """Conditions (1)-(6) from scratch; returns the list of failed conditions."""
    S = regular_representation(M)
    e = tr.idempotent
    failed = []
    if M.mul(e, e) != e:
        failed.append("idempotent")
        return failed
    Se, emb = cyclic_subact(S, e)
    pos = {x: i for i, x in enumerate(emb)}
    covered = sorted(x for b in tr.theta for x in b)
    if covered != list(emb):
        return ["theta-carrier"]
    labels = [0] * Se.size
    for n, block in enumerate(tr.theta):
        for x in block:
            labels[pos[x]] = n
    if not is_congruence(Se, labels):
        failed.append("(1)")
    I = set(tr.ideal)
    if not I <= set(emb) or not is_subact(S, I):
        failed.append("(2)")
    alpha = tr.alpha_map()
    if set(alpha) != I or any(not 0 <= v < A.size for v in alpha.values()):
        failed.append("(3)")
        return failed
    if any(alpha[M.mul(s, x)] != A.act(s, alpha[x]) for s in M.elements for x in I if M.mul(s, x) in I):
        failed.append("(3)")
    for block in tr.theta:
        if any(x in I for x in block) and not all(x in I for x in block):
            failed.append("(4)")
            break
    for x, y in product(I, I):
        if (alpha[x] == alpha[y]) != (labels[pos[x]] == labels[pos[y]]):
            failed.append("(5)")
            break
    theta = ActCongruence.from_labels(Se, labels)
    if not is_regular_act(quotient_act(Se, theta)[0]):
        failed.append("(6)")
    return failed


@dataclass(frozen=True)
class TripleFamily:
    act: FiniteAct
    cover: tuple[int, ...]
    triples: dict  # e -> tuple[Triple, ...]
    overflow: dict  # e -> bool

    def count(self, e: int | None = None) -> int:
        if e is None:
            return sum(len(v) for v in self.triples.values())
        return len(self.triples[e])

    def __iter__(self) -> Iterator[Triple]:
        for e in self.cover:
            yield from self.triples[e]

    def __contains__(self, tr: Triple) -> bool:
        return tr in self.triples.get(tr.idempotent, ())


def _homs_with_kernel(
    Se: FiniteAct, A: FiniteAct, I: Sequence[int], labels: Sequence[int]
) -> Iterator[dict]:
    """Homomorphisms I -> A (local points of Se) with kernel theta restricted to I.

    Maps are enumerated in pointwise lexicographic order.
    """
    I = sorted(I)
    inI = set(I)
    act = Se.action
    assigned: dict[int, int] = {}

    def ok(p: int) -> bool:
        v = assigned[p]
        for q, w in assigned.items():
            if q != p and (labels[q] == labels[p]) != (w == v):
                return False
        for s in range(act.shape[0]):
            sp = int(act[s, p])
            if sp in inI and sp in assigned and assigned[sp] != A.act(s, v):
                return False
        for q, w in assigned.items():
            for s in np.flatnonzero(act[:, q] == p):
                if assigned[p] != A.act(int(s), w):
                    return False
        return True

    def rec(n: int):
        if n == len(I):
            yield dict(assigned)
            return
        p = I[n]
        for v in A.points:
            assigned[p] = v
            if ok(p):
                yield from rec(n + 1)
            del assigned[p]

    yield from rec(0)


def _saturated_subacts(Se: FiniteAct, labels: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """theta-saturated subacts of Se, as unions of blocks, in subset (bitmask) order."""
    m = Se.size
    for mask in range(1 << m):
        pts = [p for p in range(m) if mask >> p & 1]
        chosen = set(pts)
        if any((labels[p] == labels[q]) and (p in chosen) != (q in chosen) for p in range(m) for q in range(m)):
            continue
        if is_subact(Se, pts):
            yield tuple(pts)


def enumerate_triples(
    M: FiniteMonoid, A: FiniteAct, cap: int = 4096, cover: Sequence[int] | None = None
) -> TripleFamily:
    if cover is None:
        from .classify import idempotent_cover

        cover = idempotent_cover(M, monoid_regular_core(M))
    S = regular_representation(M)
    triples, overflow = {}, {}
    for e in cover:
        Se, emb = cyclic_subact(S, e)
        found: list[Triple] = []
        over = False
        for theta in iter_congruences(Se):
            if over:
                break
            if not is_regular_act(quotient_act(Se, theta)[0]):
                continue
            labels = theta.block_of
            blocks = _blocks_from_labels(emb, labels)
            for I in _saturated_subacts(Se, labels):
                for alpha in _homs_with_kernel(Se, A, I, labels):
                    if len(found) == cap:
                        over = True
                        break
                    found.append(
                        Triple(
                            e,
                            blocks,
                            eset(emb[p] for p in I),
                            tuple(sorted((emb[p], v) for p, v in alpha.items())),
                        )
                    )
                if over:
                    break
        triples[e] = tuple(found)
        overflow[e] = over
    return TripleFamily(A, tuple(cover), triples, overflow)


def extract_triple(
    M: FiniteMonoid,
    B: FiniteAct,
    A_points: Iterable[int],
    b0: int,
    cover: Sequence[int] | None = None,
) -> tuple[Triple, FiniteAct, tuple[int, ...]]:
    """Triple carried by b0 over the subact A of B.

    Returns the triple, the act A (as an act in its own right) and A's
    inclusion into B. theta is the annihilator of b0 moved to S.e, I the
    elements r.e with r.b0 in A, and alpha(r.e) = r.b0.
    """
    if cover is None:
        from .classify import idempotent_cover

        cover = idempotent_cover(M, monoid_regular_core(M))
    A, inc = subact(B, A_points)
    in_A = {p: i for i, p in enumerate(inc)}
    entry = is_act_regular(B, b0)
    if not entry.regular:
        raise NoCoverIdempotentApplies(f"point {b0} is not act-regular; no idempotent matches its annihilator")
    f = entry.idempotent
    usable = [e for e in cover if M.mul(e, f) == f]
    if not usable:
        raise NoCoverIdempotentApplies(f"idempotent {f} for point {b0} lies in no e.S for e in {list(cover)}")
    e = usable[0]
    S = regular_representation(M)
    Se, emb = cyclic_subact(S, e)
    rep = {}
    for r in M.elements:
        rep.setdefault(M.mul(r, e), r)
    labels = canonical_labels([B.act(rep[x], b0) for x in emb])
    ideal = [x for x in emb if B.act(rep[x], b0) in in_A]
    alpha = tuple(sorted((x, in_A[B.act(rep[x], b0)]) for x in ideal))
    tr = Triple(e, _blocks_from_labels(emb, labels), eset(ideal), alpha)
    failed = verify_triple(M, A, tr)
    if failed:
        raise PatternViolated("extract_triple", f"conditions {failed} fail")
    return tr, A, inc


# --- counting acts -----------------------------------------------------------

def counting_formula(i: int, n: int, alpha: int, beta: int, Phi: Formula) -> Formula:
    """E y E{=n(i+1)} z (x = beta.y & y = alpha.z & Phi(z, y, x))."""
    body = rename(Phi, {"x": "_z", "y": "_y", "z": "_x"})
    inner = And(Eq(Var("_x"), Var("_y", beta)), Eq(Var("_y"), Var("_z", alpha)), body)
    return Exists("_y", ExistsExactly(n * (i + 1), "_z", inner))


@dataclass(frozen=True)
class CountingAct:
    K: frozenset
    act: FiniteAct
    c_point: int
    b_points: dict  # i -> glued b of level i
    truth: tuple[bool, ...]  # formula i at the c-point, i = 0..N
    counts: dict  # y -> number of z witnesses at the c-point (diagnostics)


@dataclass(frozen=True)
class CountingWitness:
    a: int
    b: int
    c: int
    alpha: int
    beta: int
    Phi: Formula = field(repr=False)
    n: int = 1
    N: int = 2
    acts: dict = field(default_factory=dict)  # frozenset K -> CountingAct
    checks: dict = field(default_factory=dict)  # precondition -> detail


def check_counting_preconditions(
    M: FiniteMonoid, a: int, b: int, c: int, alpha: int, beta: int, Phi: Formula, n: int
) -> dict:
    """Check every premise of the counting construction; raise on the first failure.

    Formula premises are evaluated over the cyclic act S.a.
    """
    if free_vars(Phi) - {"x", "y", "z"}:
        raise PreconditionFailed("Formula", "Phi may only use the free variables x, y, z")
    if n < 1:
        raise PreconditionFailed("Multiplicity", "n must be positive")
    L = M.left_ideals
    checks = {}
    if not (L[c] < L[b] < L[a]):
        raise PreconditionFailed("StrictChain", f"need S.c < S.b < S.a for ({a}, {b}, {c})")
    checks["StrictChain"] = [len(L[c]), len(L[b]), len(L[a])]
    if M.mul(alpha, a) != b or M.mul(beta, b) != c:
        raise PreconditionFailed("Generators", "need b = alpha.a and c = beta.b")
    checks["Generators"] = True
    R = monoid_regular_core(M)
    if not {a, b, c} <= set(R):
        raise PreconditionFailed("Regular", "a, b, c must lie in the regular core")
    checks["Regular"] = True

    Sa, emb = cyclic_subact(regular_representation(M), a)
    pos = {x: i for i, x in enumerate(emb)}
    cpt = pos[c]
    outer = [pos[x] for x in L[a] - L[b]]
    middle = [pos[x] for x in L[b] - L[c]]
    sols = [
        (x, y)
        for x, y in product(Sa.points, Sa.points)
        if evaluate(Sa, Phi, {"x": x, "y": y, "z": cpt})
    ]
    bad = [(emb[x], emb[y]) for x, y in sols if x not in outer or y not in middle]
    if bad:
        raise PreconditionFailed("SolutionSet", f"Phi(x, y, c) holds outside the layers at {bad[0]}")
    checks["SolutionSet"] = [[emb[x], emb[y]] for x, y in sols]
    if not evaluate(Sa, Phi, {"x": pos[a], "y": pos[b], "z": cpt}):
        raise PreconditionFailed("Base", "Phi(a, b, c) fails")
    checks["Base"] = True
    phi_c = rename(Phi, {"z": "_c"})
    wit = And(phi_c, Eq(Var("y"), Var("x", alpha)))
    unique = Forall(
        "y",
        Implies(
            And(Eq(Var("y", beta), Var("_c")), Exists("x", wit)),
            ExistsExactly(n, "x", wit),
        ),
    )
    if not evaluate(Sa, unique, {"_c": cpt}):
        raise PreconditionFailed("Uniqueness", f"some y has a number of x-witnesses other than {n}")
    checks["Uniqueness"] = True
    return checks


def build_counting(
    M: FiniteMonoid,
    a: int,
    b: int,
    c: int,
    alpha: int,
    beta: int,
    Phi: Formula,
    n: int = 1,
    Ks: Iterable[Iterable[int]] = ((0,),),
    N: int = 2,
) -> CountingWitness:
    """Counting acts M_K for each K in ``Ks`` (subsets of 0..N).

    M_K glues copies S<a, j^i> (i in K, j <= i) of S.a: b's within a level,
    and every c together. A copy of the c-orbit is always present, so the
    designated c-point exists even for K empty.
    """
    checks = check_counting_preconditions(M, a, b, c, alpha, beta, Phi, n)
    S = regular_representation(M)
    Sa, emb = cyclic_subact(S, a)
    Sc, emb_c = cyclic_subact(S, c)
    pos = {x: i for i, x in enumerate(emb)}
    pos_c = {x: i for i, x in enumerate(emb_c)}
    formulas = [counting_formula(i, n, alpha, beta, Phi) for i in range(N + 1)]
    acts = {}
    for K in Ks:
        K = frozenset(int(i) for i in K)
        if not K <= set(range(N + 1)):
            raise ValueError(f"K must be a subset of 0..{N}")
        cells = [(i, j) for i in sorted(K) for j in range(i + 1)]
        C, inj = coproduct(Sc, *([Sa] * len(cells)))
        anchor = inj[0][pos_c[c]]
        pairs = []
        for k, (i, j) in enumerate(cells, start=1):
            pairs.append((inj[k][pos[c]], anchor))
            for k2, (i2, j2) in enumerate(cells, start=1):
                if i2 == i and j2 > j:
                    pairs.append((inj[k][pos[b]], inj[k2][pos[b]]))
        theta = congruence_generated(C, pairs)
        Q, proj = quotient_act(C, theta)
        c_point = proj[anchor]
        b_points = {i: proj[inj[k][pos[b]]] for k, (i, j) in enumerate(cells, start=1) if j == 0}
        truth = tuple(evaluate(Q, phi, {"_x": c_point}) for phi in formulas)
        for i, holds in enumerate(truth):
            if holds != (i in K):
                raise PatternViolated(i, f"counting formula {i} is {holds} for K = {sorted(K)}")
        body = rename(Phi, {"x": "_z", "y": "_y", "z": "_x"})
        inner = And(Eq(Var("_y"), Var("_z", alpha)), body)
        counts = {
            y: count_witnesses(Q, inner, "_z", {"_y": y, "_x": c_point})
            for y in Q.points
            if Q.act(beta, y) == c_point
        }
        acts[K] = CountingAct(K, Q, c_point, b_points, truth, counts)
    return CountingWitness(a, b, c, alpha, beta, Phi, n, N, acts, checks)


def standard_counting_phi(b: int) -> Formula:
    """Phi(x, y, z) = (b.x = y & x != y); z is unused."""
    return And(Eq(Var("x", b), Var("y")), Not(Eq(Var("x"), Var("y"))))


def counting_witness_lemma(M: FiniteMonoid, **kwargs) -> CountingWitness:
    """Keyword-argument alias of ``build_counting``."""
    return build_counting(M, **kwargs)
