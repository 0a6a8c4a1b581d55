"""Finite left S-acts over a FiniteMonoid.

``action[s, a]`` is the point ``s.a``. An act keeps a reference to its monoid
and that monoid's fingerprint; operations combining acts compare fingerprints.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ActionLawViolated, IdentityLawViolated, MonoidMismatch, OutOfRange
from .monoid import ElementSet, FiniteMonoid, eset


class FiniteAct:
    def __init__(self, monoid: FiniteMonoid, action, labels: Sequence[str] | None = None):
        action = np.array(action, dtype=np.int64).reshape(monoid.order, -1)
        action.setflags(write=False)
        self.monoid = monoid
        self.fingerprint = monoid.fingerprint
        self._action = action
        self.labels = tuple(labels) if labels is not None else None

    @property
    def size(self) -> int:
        return self._action.shape[1]

    @property
    def points(self) -> range:
        return range(self.size)

    @property
    def action(self) -> np.ndarray:
        return self._action

    def act(self, s: int, a: int) -> int:
        return int(self._action[s, a])

    def orbit(self, a: int) -> ElementSet:
        """S.a as a set of points."""
        return eset(self._action[:, a])

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels else str(a)

    def __repr__(self):
        return f"FiniteAct(size={self.size}, monoid={self.fingerprint})"

    def __eq__(self, other):
        return (
            isinstance(other, FiniteAct)
            and self.fingerprint == other.fingerprint
            and np.array_equal(self._action, other._action)
        )

    def __hash__(self):
        return hash((self.fingerprint, self._action.tobytes()))


def validate_act(M: FiniteMonoid, action, labels=None) -> FiniteAct:
    arr = np.asarray(action, dtype=np.int64)
    if arr.ndim != 2 or arr.shape[0] != M.order:
        raise OutOfRange(f"action table must have {M.order} rows")
    m = arr.shape[1]
    if m and (arr.min() < 0 or arr.max() >= m):
        s, a = np.argwhere((arr < 0) | (arr >= m))[0]
        raise OutOfRange(f"action entry ({s}, {a}) = {arr[s, a]} outside 0..{m - 1}")
    if m:
        fixed = np.flatnonzero(arr[M.identity] != np.arange(m))
        if fixed.size:
            raise IdentityLawViolated(int(fixed[0]))
        lhs = arr[M.table, :]  # [s, t, a] -> (s t).a
        rhs = arr[:, arr]  # [s, t, a] -> s.(t.a)
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            raise ActionLawViolated(*map(int, bad[0]))
    return FiniteAct(M, arr, labels)


def regular_representation(M: FiniteMonoid) -> FiniteAct:
    return FiniteAct(M, M.table, M.names)


def _same_monoid(*acts: FiniteAct) -> None:
    prints = {A.fingerprint for A in acts}
    if len(prints) > 1:
        raise MonoidMismatch(f"acts over different monoids: {sorted(prints)}")


def is_subact(A: FiniteAct, points: Iterable[int]) -> bool:
    pts = set(points)
    return all(A.act(s, a) in pts for a in pts for s in A.monoid.elements)


def subact(A: FiniteAct, points: Iterable[int]) -> tuple[FiniteAct, tuple[int, ...]]:
    """Induced act on a closed set of points, plus the inclusion (new -> old)."""
    pts = sorted(set(int(p) for p in points))
    if not is_subact(A, pts):
        raise OutOfRange("points are not closed under the action")
    pos = {p: i for i, p in enumerate(pts)}
    sub = A.action[:, pts] if pts else np.zeros((A.monoid.order, 0), dtype=np.int64)
    action = np.vectorize(pos.__getitem__, otypes=[np.int64])(sub) if pts else sub
    labels = [A.label(p) for p in pts] if A.labels else None
    return FiniteAct(A.monoid, action, labels), tuple(pts)


def cyclic_subact(A: FiniteAct, a: int) -> tuple[FiniteAct, tuple[int, ...]]:
    return subact(A, A.orbit(a))


def coproduct(*acts: FiniteAct) -> tuple[FiniteAct, list[tuple[int, ...]]]:
    """Disjoint union; ``injections[k][p]`` is where point p of acts[k] lands."""
    if not acts:
        raise ValueError("coproduct needs at least one act")
    _same_monoid(*acts)
    M = acts[0].monoid
    blocks, injections, offset = [], [], 0
    for A in acts:
        blocks.append(A.action + offset)
        injections.append(tuple(range(offset, offset + A.size)))
        offset += A.size
    action = np.concatenate(blocks, axis=1) if offset else np.zeros((M.order, 0), dtype=np.int64)
    return FiniteAct(M, action), injections


def empty_act(M: FiniteMonoid) -> FiniteAct:
    return FiniteAct(M, np.zeros((M.order, 0), dtype=np.int64))


# --- congruences -------------------------------------------------------------

def canonical_labels(values: Sequence) -> tuple[int, ...]:
    """Restricted growth string of a labelling: first occurrence order."""
    seen: dict = {}
    return tuple(seen.setdefault(v, len(seen)) for v in values)


@dataclass(frozen=True)
class ActCongruence:
    act: FiniteAct
    block_of: tuple[int, ...]

    @classmethod
    def from_labels(cls, A: FiniteAct, labels: Sequence) -> "ActCongruence":
        return cls(A, canonical_labels(labels))

    @property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(max(self.block_of, default=-1) + 1)]
        for p, b in enumerate(self.block_of):
            out[b].append(p)
        return tuple(tuple(b) for b in out)

    @property
    def n_blocks(self) -> int:
        return max(self.block_of, default=-1) + 1

    def related(self, a: int, b: int) -> bool:
        return self.block_of[a] == self.block_of[b]

    def pairs(self) -> Iterator[tuple[int, int]]:
        for block in self.blocks:
            for x in block[1:]:
                yield block[0], x

    def is_identity(self) -> bool:
        return self.n_blocks == len(self.block_of)

    def restrict(self, points: Sequence[int]) -> tuple[int, ...]:
        return canonical_labels([self.block_of[p] for p in points])

    def __eq__(self, other):
        return isinstance(other, ActCongruence) and self.block_of == other.block_of and self.act == other.act

    def __hash__(self):
        return hash(self.block_of)


def is_congruence(A: FiniteAct, labels: Sequence[int]) -> bool:
    lab = np.asarray(labels)
    img = lab[A.action]  # [s, a] -> label of s.a
    for block in set(labels):
        members = np.flatnonzero(lab == block)
        if len(members) > 1 and not (img[:, members] == img[:, members[:1]]).all():
            return False
    return True


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def congruence_generated(A: FiniteAct, pairs: Iterable[tuple[int, int]]) -> ActCongruence:
    """Least act congruence containing ``pairs`` (union-find closed under the action)."""
    uf = _UnionFind(A.size)
    pending = [(int(a), int(b)) for a, b in pairs]
    act = A.action
    while pending:
        a, b = pending.pop()
        if uf.union(a, b):
            pending.extend(zip(act[:, a].tolist(), act[:, b].tolist()))
    return ActCongruence.from_labels(A, [uf.find(p) for p in A.points])


def identity_congruence(A: FiniteAct) -> ActCongruence:
    return ActCongruence(A, tuple(A.points))


def quotient_act(A: FiniteAct, theta: ActCongruence) -> tuple[FiniteAct, tuple[int, ...]]:
    """A/theta and the projection (point -> block index)."""
    proj = np.asarray(theta.block_of, dtype=np.int64)
    reps = [block[0] for block in theta.blocks]
    action = proj[A.action[:, reps]] if reps else np.zeros((A.monoid.order, 0), dtype=np.int64)
    labels = None
    if A.labels:
        labels = ["/".join(A.label(p) for p in block) for block in theta.blocks]
    return FiniteAct(A.monoid, action, labels), tuple(theta.block_of)


def connectivity(A: FiniteAct) -> ActCongruence:
    """Connected components: symmetric reachability closure of a -> s.a."""
    uf = _UnionFind(A.size)
    for s in A.monoid.elements:
        for a in A.points:
            uf.union(a, A.act(s, a))
    return ActCongruence.from_labels(A, [uf.find(p) for p in A.points])


def is_amalgam(A: FiniteAct, theta: ActCongruence) -> bool:
    comp = connectivity(A).block_of
    for block in theta.blocks:
        if len({comp[p] for p in block}) != len(block):
            return False
    return True


# --- homomorphisms -----------------------------------------------------------

@dataclass(frozen=True)
class ActHom:
    source: FiniteAct
    target: FiniteAct
    mapping: dict  # point of source (on the domain subact) -> point of target

    def verify(self) -> bool:
        M = self.source.monoid
        for x, fx in self.mapping.items():
            for s in M.elements:
                sx = self.source.act(s, x)
                if sx not in self.mapping or self.mapping[sx] != self.target.act(s, fx):
                    return False
        return True

    def is_injective(self) -> bool:
        return len(set(self.mapping.values())) == len(self.mapping)

    def inverse(self) -> "ActHom":
        return ActHom(self.target, self.source, {v: k for k, v in self.mapping.items()})


def annihilator_labels(A: FiniteAct, a: int) -> tuple[int, ...]:
    """The partition s ~ t iff s.a = t.a, as a restricted growth string over S."""
    return canonical_labels(A.action[:, a].tolist())


def pointed_iso(A: FiniteAct, a: int, B: FiniteAct, b: int) -> ActHom | None:
    """Isomorphism S.a -> S.b sending a to b, or None.

    The only candidate is s.a -> s.b; it is a well-defined bijection exactly
    when the two annihilators coincide.
    """
    _same_monoid(A, B)
    if annihilator_labels(A, a) != annihilator_labels(B, b):
        return None
    M = A.monoid
    mapping = {A.act(s, a): B.act(s, b) for s in M.elements}
    return ActHom(A, B, mapping)


# --- congruence enumeration --------------------------------------------------

@dataclass(frozen=True)
class CongruenceList:
    congruences: tuple[ActCongruence, ...]
    overflow: bool

    def __len__(self):
        return len(self.congruences)

    def __iter__(self):
        return iter(self.congruences)


def iter_congruences(A: FiniteAct) -> Iterator[ActCongruence]:
    """Stream every act congruence in canonical order.

    Canonical order is descending lexicographic order of the restricted growth
    string, so the identity partition comes first and the full relation last.
    """
    m = A.size
    if m == 0:
        yield ActCongruence(A, ())
        return
    act = A.action.T.tolist()  # act[p] = [s.p for s]
    labels = [-1] * m

    def consistent(p: int) -> bool:
        lp = labels[p]
        for q in range(p):
            if labels[q] != lp:
                continue
            for u, v in zip(act[q], act[p]):
                if u <= p and v <= p and labels[u] != labels[v]:
                    return False
        # earlier equal pairs whose images just became decidable through p
        for q1 in range(p):
            for q2 in range(q1 + 1, p):
                if labels[q1] != labels[q2]:
                    continue
                for u, v in zip(act[q1], act[q2]):
                    if (u == p or v == p) and u <= p and v <= p and labels[u] != labels[v]:
                        return False
        return True

    def extend(p: int, n_blocks: int):
        if p == m:
            yield ActCongruence(A, tuple(labels))
            return
        for lab in range(n_blocks, -1, -1):
            labels[p] = lab
            if consistent(p):
                yield from extend(p + 1, max(n_blocks, lab + 1))
        labels[p] = -1

    for theta in extend(0, 0):
        yield theta


def enumerate_congruences(A: FiniteAct, cap: int = 4096) -> CongruenceList:
    if cap < 1:
        raise ValueError("cap must be >= 1")
    out = []
    overflow = False
    for theta in iter_congruences(A):
        if len(out) == cap:
            overflow = True
            break
        out.append(theta)
    return CongruenceList(tuple(out), overflow)
