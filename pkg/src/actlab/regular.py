"""Act-regularity, regular cores and the decomposition of regular acts.

A point ``a`` is act-regular iff its annihilator ``{(s, t): s.a = t.a}``
equals the annihilator of some idempotent ``e`` of the monoid in the regular
representation; the pointed isomorphism ``s.a -> s.e`` is then forced.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .act import (
    ActCongruence,
    ActHom,
    FiniteAct,
    annihilator_labels,
    canonical_labels,
    coproduct,
    cyclic_subact,
    is_amalgam,
    quotient_act,
    regular_representation,
)
from .errors import NotRegular, PreconditionFailed
from .monoid import ElementSet, FiniteMonoid, OrderCheck, eset, is_regularly_linearly_ordered


@dataclass(frozen=True)
class Annihilator:
    act: FiniteAct
    point: int
    labels: tuple[int, ...]  # s ~ t iff labels[s] == labels[t]

    def related(self, s: int, t: int) -> bool:
        return self.labels[s] == self.labels[t]

    def is_left_congruence(self) -> bool:
        M = self.act.monoid
        for s in M.elements:
            for t in M.elements:
                if self.related(s, t):
                    if any(not self.related(M.mul(u, s), M.mul(u, t)) for u in M.elements):
                        return False
        return True


def annihilator(A: FiniteAct, a: int) -> Annihilator:
    return Annihilator(A, a, annihilator_labels(A, a))


@lru_cache(maxsize=256)
def _idempotent_annihilators(M: FiniteMonoid) -> dict[tuple[int, ...], int]:
    """Annihilator pattern -> least idempotent realising it."""
    out: dict[tuple[int, ...], int] = {}
    for e in M.idempotent_list:
        out.setdefault(canonical_labels(M.table[:, e].tolist()), e)
    return out


def _distinguishing_pair(A: FiniteAct, a: int, e: int) -> tuple[int, int]:
    M = A.monoid
    for s in M.elements:
        for t in M.elements:
            if (A.act(s, a) == A.act(t, a)) != (M.mul(s, e) == M.mul(t, e)):
                return s, t
    raise AssertionError("annihilators coincide")


@dataclass(frozen=True)
class RegularityEntry:
    point: int
    regular: bool
    idempotent: int | None = None
    iso: ActHom | None = field(default=None, repr=False)
    refutation: tuple[tuple[int, tuple[int, int]], ...] = ()

    def verify(self, A: FiniteAct) -> bool:
        M = A.monoid
        if self.regular:
            e = self.idempotent
            if M.mul(e, e) != e:
                return False
            iso = self.iso
            return (
                iso.verify()
                and iso.is_injective()
                and iso.mapping[self.point] == e
                and set(iso.mapping) == set(A.orbit(self.point))
                and set(iso.mapping.values()) == set(M.left_ideals[e])
            )
        ids = dict(self.refutation)
        if set(ids) != set(M.idempotent_list):
            return False
        for e, (s, t) in ids.items():
            if (A.act(s, self.point) == A.act(t, self.point)) == (M.mul(s, e) == M.mul(t, e)):
                return False
        return True

    def to_json(self) -> dict:
        if self.regular:
            return {"point": self.point, "regular": True, "idempotent": self.idempotent}
        return {
            "point": self.point,
            "regular": False,
            "refutation": [[e, list(pair)] for e, pair in self.refutation],
        }


def is_act_regular(A: FiniteAct, a: int) -> RegularityEntry:
    M = A.monoid
    e = _idempotent_annihilators(M).get(annihilator_labels(A, a))
    if e is not None:
        iso = ActHom(A, regular_representation(M), {A.act(s, a): M.mul(s, e) for s in M.elements})
        return RegularityEntry(a, True, e, iso)
    refutation = tuple((f, _distinguishing_pair(A, a, f)) for f in M.idempotent_list)
    return RegularityEntry(a, False, refutation=refutation)


def regularity_certificate(A: FiniteAct) -> tuple[RegularityEntry, ...]:
    return tuple(is_act_regular(A, a) for a in A.points)


def is_regular_act(A: FiniteAct) -> bool:
    table = _idempotent_annihilators(A.monoid)
    return all(annihilator_labels(A, a) in table for a in A.points)


def regular_core(A: FiniteAct) -> ElementSet:
    """Union of all regular subacts: points whose whole orbit is act-regular."""
    table = _idempotent_annihilators(A.monoid)
    marked = [annihilator_labels(A, a) in table for a in A.points]
    return eset(x for x in A.points if all(marked[y] for y in A.orbit(x)))


def monoid_regular_core(M: FiniteMonoid) -> ElementSet:
    return regular_core(regular_representation(M))


@dataclass(frozen=True)
class VonNeumannCheck:
    holds: bool
    inverses: dict  # a -> b with a b a = a
    failing: int | None = None

    def __bool__(self):
        return self.holds


def is_vn_regular(M: FiniteMonoid) -> VonNeumannCheck:
    inverses = {}
    for a in M.elements:
        for b in M.elements:
            if M.mul(M.mul(a, b), a) == a:
                inverses[a] = b
                break
        else:
            return VonNeumannCheck(False, inverses, a)
    return VonNeumannCheck(True, inverses)


@dataclass(frozen=True)
class RegularDecomposition:
    """A is isomorphic to (coproduct of S.e_a over representatives) / theta."""

    representatives: tuple[int, ...]
    idempotents: tuple[int, ...]
    summands: tuple[tuple[int, ...], ...]  # element lists of each S.e_a
    coproduct: FiniteAct
    theta: ActCongruence
    iso: dict  # block of theta -> point of A

    def verify(self, A: FiniteAct) -> bool:
        Q, _ = quotient_act(self.coproduct, self.theta)
        iso = self.iso
        if sorted(iso.values()) != list(A.points) or len(iso) != Q.size:
            return False
        M = A.monoid
        ok = all(iso[Q.act(s, q)] == A.act(s, iso[q]) for s in M.elements for q in Q.points)
        return ok and is_amalgam(self.coproduct, self.theta)


def decompose_regular(A: FiniteAct) -> RegularDecomposition:
    M = A.monoid
    entries = regularity_certificate(A)
    for entry in entries:
        if not entry.regular:
            raise NotRegular(entry.point)
    orbits = [A.orbit(a) for a in A.points]
    reps = []
    for a in A.points:
        if any(orbits[a] < orbits[b] for b in A.points):
            continue
        if any(orbits[b] == orbits[a] for b in reps):
            continue
        reps.append(a)
    S = regular_representation(M)
    summands, emb_list, ids = [], [], []
    for a in reps:
        e = entries[a].idempotent
        sub, emb = cyclic_subact(S, e)
        summands.append(sub)
        emb_list.append(emb)
        ids.append(e)
    C, inj = coproduct(*summands)
    pi = [0] * C.size
    for a, emb, injection in zip(reps, emb_list, inj):
        for q, x in enumerate(emb):
            pi[injection[q]] = A.act(x, a)
    theta = ActCongruence.from_labels(C, pi)
    iso = {theta.block_of[c]: pi[c] for c in C.points}
    dec = RegularDecomposition(tuple(reps), tuple(ids), tuple(emb_list), C, theta, iso)
    if not dec.verify(A):
        raise AssertionError("regular decomposition failed to round-trip")
    return dec


def regular_linear_order_lift_check(M: FiniteMonoid, A: FiniteAct) -> OrderCheck:
    """Inside every cyclic subact of a regular act the orbits form a chain."""
    if not is_regularly_linearly_ordered(M, monoid_regular_core(M)):
        raise PreconditionFailed("RegularlyLinearlyOrdered", "monoid is not regularly linearly ordered")
    if not is_regular_act(A):
        raise PreconditionFailed("RegularAct", "act is not regular")
    orbits = [A.orbit(p) for p in A.points]
    for a in A.points:
        below = sorted(orbits[a])
        for i, b in enumerate(below):
            for c in below[i + 1:]:
                if not (orbits[b] <= orbits[c] or orbits[c] <= orbits[b]):
                    return OrderCheck(False, (b, c, a))
    return OrderCheck(True)
