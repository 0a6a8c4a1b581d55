"""Finite monoids given by multiplication tables.

Elements are dense 0-based indices. ``table[s, t]`` is the index of ``s*t``.
Everything here is exact and exhaustive; orders in the intended use are small
(tens of elements), so the numpy table is mostly a compact, immutable store
with a couple of vectorised checks.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from .errors import (
    IdealNotMinimal,
    JNotSingleton,
    NoIdentity,
    NonAssociative,
    NotABand,
    NotAGroup,
    NotIdempotent,
    NotSubsemigroup,
    OutOfRange,
)


class ElementSet(frozenset):
    """Frozen set of element indices that always iterates in ascending order."""

    def __iter__(self):
        return iter(sorted(frozenset.__iter__(self)))

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(self)

    def __repr__(self):
        return "{" + ", ".join(map(str, self)) + "}"


def eset(items: Iterable[int] = ()) -> ElementSet:
    return ElementSet(int(x) for x in items)


class FiniteMonoid:
    """A validated finite monoid. Build through :func:`validate_monoid`."""

    def __init__(self, table: np.ndarray, identity: int, names: Sequence[str] | None = None):
        table = np.array(table, dtype=np.int64)
        table.setflags(write=False)
        self._table = table
        self.identity = int(identity)
        self.names = list(names) if names is not None else None

    @property
    def order(self) -> int:
        return self._table.shape[0]

    @property
    def table(self) -> np.ndarray:
        return self._table

    def mul(self, s: int, t: int) -> int:
        return int(self._table[s, t])

    def product(self, *elems: int) -> int:
        acc = self.identity
        for x in elems:
            acc = int(self._table[acc, x])
        return acc

    def name(self, s: int) -> str:
        return self.names[s] if self.names else str(s)

    def index(self, name: str) -> int:
        if self.names is None:
            return int(name)
        return self.names.index(name)

    @property
    def elements(self) -> range:
        return range(self.order)

    @cached_property
    def fingerprint(self) -> str:
        digest = hashlib.sha256(self._table.astype("<i8").tobytes()).hexdigest()
        return f"{self.order}:{digest[:16]}"

    @cached_property
    def left_ideals(self) -> tuple[ElementSet, ...]:
        """``left_ideals[a]`` is Sa."""
        return tuple(eset(self._table[:, a]) for a in self.elements)

    @cached_property
    def right_ideals(self) -> tuple[ElementSet, ...]:
        return tuple(eset(self._table[a, :]) for a in self.elements)

    @cached_property
    def idempotent_list(self) -> tuple[int, ...]:
        diag = self._table[np.arange(self.order), np.arange(self.order)]
        return tuple(int(e) for e in np.flatnonzero(diag == np.arange(self.order)))

    def __eq__(self, other):
        return (
            isinstance(other, FiniteMonoid)
            and self.identity == other.identity
            and np.array_equal(self._table, other._table)
        )

    def __hash__(self):
        return hash(self.fingerprint)

    def __repr__(self):
        return f"FiniteMonoid(order={self.order}, identity={self.identity})"


def find_associativity_violation(table: np.ndarray) -> tuple[int, int, int] | None:
    table = np.asarray(table)
    left = table[table, :]  # [s, t, u] -> (s t) u
    right = table[:, table]  # [s, t, u] -> s (t u)
    bad = np.argwhere(left != right)
    if bad.size:
        s, t, u = bad[0]
        return int(s), int(t), int(u)
    return None


def find_identity(table: np.ndarray) -> int | None:
    n = table.shape[0]
    ar = np.arange(n)
    for e in range(n):
        if np.array_equal(table[e, :], ar) and np.array_equal(table[:, e], ar):
            return e
    return None


def validate_monoid(order: int, table, identity_hint: int | None = None, names=None) -> FiniteMonoid:
    """Check shape, range, associativity and identity; return a FiniteMonoid."""
    if order < 1:
        raise OutOfRange("order must be positive")
    arr = np.asarray(table, dtype=np.int64)
    if arr.shape != (order, order):
        raise OutOfRange(f"table shape {arr.shape} does not match order {order}")
    if arr.min() < 0 or arr.max() >= order:
        s, t = np.argwhere((arr < 0) | (arr >= order))[0]
        raise OutOfRange(f"entry at ({s}, {t}) = {arr[s, t]} outside 0..{order - 1}")
    bad = find_associativity_violation(arr)
    if bad is not None:
        raise NonAssociative(*bad)
    ar = np.arange(order)
    if identity_hint is not None:
        e = int(identity_hint)
        if not (0 <= e < order and np.array_equal(arr[e], ar) and np.array_equal(arr[:, e], ar)):
            raise NoIdentity(f"element {identity_hint} is not a two-sided identity")
    else:
        e = find_identity(arr)
        if e is None:
            raise NoIdentity("no two-sided identity in table")
    return FiniteMonoid(arr, e, names)


def monoid_from_operation(elements: Sequence[Hashable], op: Callable, identity) -> FiniteMonoid:
    """Tabulate ``op`` over ``elements`` (which must be closed) and validate."""
    index = {x: i for i, x in enumerate(elements)}
    n = len(elements)
    table = np.empty((n, n), dtype=np.int64)
    for i, x in enumerate(elements):
        for j, y in enumerate(elements):
            table[i, j] = index[op(x, y)]
    return validate_monoid(n, table, index[identity], names=[_elem_name(x) for x in elements])


def _elem_name(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, tuple):
        return "<" + ",".join(_elem_name(v) for v in x) + ">"
    return str(x)


def relabel(M: FiniteMonoid, perm: Sequence[int]) -> FiniteMonoid:
    """Isomorphic copy in which old element ``s`` becomes ``perm[s]``."""
    p = np.asarray(perm, dtype=np.int64)
    n = M.order
    table = np.empty_like(M.table)
    table[np.ix_(p, p)] = p[M.table]
    assert sorted(p.tolist()) == list(range(n))
    return FiniteMonoid(table, int(p[M.identity]))


# --- elementary sets ---------------------------------------------------------

def idempotents(M: FiniteMonoid) -> ElementSet:
    return eset(M.idempotent_list)


def left_ideal(M: FiniteMonoid, a: int) -> ElementSet:
    return M.left_ideals[a]


def right_ideal(M: FiniteMonoid, a: int) -> ElementSet:
    return M.right_ideals[a]


# --- principal left ideals ---------------------------------------------------

@dataclass(frozen=True)
class IdealPoset:
    nodes: tuple[ElementSet, ...]
    edges: frozenset[tuple[int, int]]  # (i, j): nodes[i] strictly inside nodes[j]
    generator: tuple[int, ...]  # element -> node index

    def below(self, j: int) -> list[int]:
        return [i for i in range(len(self.nodes)) if (i, j) in self.edges]

    def comparable(self, i: int, j: int) -> bool:
        return i == j or (i, j) in self.edges or (j, i) in self.edges

    def minimal_nodes(self) -> list[int]:
        return [j for j in range(len(self.nodes)) if not self.below(j)]


def _poset_of(sets: Sequence[ElementSet]) -> IdealPoset:
    nodes = sorted(set(sets), key=lambda x: (len(x), x.members))
    pos = {node: i for i, node in enumerate(nodes)}
    edges = frozenset(
        (i, j) for i, a in enumerate(nodes) for j, b in enumerate(nodes) if i != j and a < b
    )
    return IdealPoset(tuple(nodes), edges, tuple(pos[s] for s in sets))


def ideal_poset(M: FiniteMonoid) -> IdealPoset:
    return _poset_of(M.left_ideals)


def longest_chain(poset: IdealPoset) -> list[int]:
    """Node indices of a longest strict chain, bottom first."""
    n = len(poset.nodes)
    best: list[list[int]] = [[] for _ in range(n)]
    # nodes are sorted by size, so every predecessor comes first
    for j in range(n):
        chain: list[int] = []
        for i in poset.below(j):
            if len(best[i]) > len(chain):
                chain = best[i]
        best[j] = chain + [j]
    return max(best, key=len) if best else []


def depth(M: FiniteMonoid) -> int:
    """Number of ideals in the longest chain of principal left ideals (trivial monoid -> 1)."""
    return len(longest_chain(ideal_poset(M)))


def kernel(M: FiniteMonoid) -> ElementSet:
    poset = ideal_poset(M)
    out: set[int] = set()
    for j in poset.minimal_nodes():
        out |= poset.nodes[j]
    return eset(out)


def is_minimal_left_ideal(M: FiniteMonoid, ideal: Iterable[int]) -> bool:
    ideal = eset(ideal)
    if not ideal:
        return False
    if any(M.mul(s, a) not in ideal for s in M.elements for a in ideal):
        return False
    return all(M.left_ideals[a] == ideal for a in ideal)


# --- groups inside the monoid ------------------------------------------------

@dataclass(frozen=True)
class GroupComponent:
    idempotent: int
    members: ElementSet
    inverse: dict

    @property
    def order(self) -> int:
        return len(self.members)


def _group_on(M: FiniteMonoid, e: int, members: ElementSet) -> GroupComponent:
    for a in members:
        if M.mul(e, a) != a or M.mul(a, e) != a:
            raise NotAGroup(f"{e} is not a unit for {a}", witness=("unit", a))
        for b in members:
            if M.mul(a, b) not in members:
                raise NotAGroup(f"{a}*{b} leaves the group", witness=("closure", a, b))
    inverse = {}
    for a in members:
        inv = [b for b in members if M.mul(a, b) == e and M.mul(b, a) == e]
        if not inv:
            raise NotAGroup(f"{a} has no inverse", witness=("inverse", a))
        inverse[a] = inv[0]
    return GroupComponent(e, members, inverse)


def group_component(M: FiniteMonoid, e: int) -> GroupComponent:
    if M.mul(e, e) != e:
        raise NotIdempotent(f"{e} is not idempotent")
    if not is_minimal_left_ideal(M, M.left_ideals[e]):
        raise IdealNotMinimal(f"S*{e} is not a minimal left ideal")
    members = eset(a for a in M.elements if M.mul(e, a) == a and M.mul(a, e) == a)
    return _group_on(M, e, members)


# --- rectangular bands of groups ---------------------------------------------

@dataclass(frozen=True)
class RectBandDecomposition:
    subset: ElementSet
    rows: tuple[ElementSet, ...]  # right ideal aT shared by row i
    cols: tuple[ElementSet, ...]  # left ideal Ta shared by column j
    component: dict  # element -> (i, j)
    idempotent_grid: dict  # (i, j) -> e_ij
    groups: dict = field(repr=False)  # (i, j) -> GroupComponent

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_cols(self) -> int:
        return len(self.cols)

    def cell(self, i: int, j: int) -> ElementSet:
        return self.groups[(i, j)].members

    @property
    def group_orders(self) -> list[int]:
        return [self.groups[k].order for k in sorted(self.groups)]


def check_subsemigroup(M: FiniteMonoid, T: Iterable[int]) -> ElementSet:
    T = eset(T)
    for s, t in product(T, T):
        if M.mul(s, t) not in T:
            raise NotSubsemigroup(s, t)
    return T


def rect_band_decompose(M: FiniteMonoid, T: Iterable[int]) -> RectBandDecomposition:
    """Decompose a sub-semigroup T as a rectangular band of groups.

    Cells are keyed by the pair (aT, Ta). Raises NotABand with a witness when
    some cell has no group structure or a product leaves its required cell.
    """
    T = check_subsemigroup(M, T)
    if not T:
        raise NotABand("empty subset", witness=None)
    left = {a: eset(M.mul(t, a) for t in T) for a in T}
    right = {a: eset(M.mul(a, t) for t in T) for a in T}
    rows = tuple(sorted(set(right.values()), key=lambda x: x.members))
    cols = tuple(sorted(set(left.values()), key=lambda x: x.members))
    row_of = {r: i for i, r in enumerate(rows)}
    col_of = {c: j for j, c in enumerate(cols)}
    component = {a: (row_of[right[a]], col_of[left[a]]) for a in T}

    cells: dict[tuple[int, int], list[int]] = {}
    for a in T:
        cells.setdefault(component[a], []).append(a)

    # the band law first: it gives the most useful witness
    for a, b in product(T, T):
        i, _ = component[a]
        _, l = component[b]
        ab = M.mul(a, b)
        if component[ab] != (i, l):
            raise NotABand(
                f"{a}*{b} = {ab} lies in cell {component[ab]}, expected {(i, l)}",
                witness=("product", a, b, ab),
            )

    grid: dict[tuple[int, int], int] = {}
    groups: dict[tuple[int, int], GroupComponent] = {}
    for key, members in sorted(cells.items()):
        ids = [x for x in members if M.mul(x, x) == x]
        if len(ids) != 1:
            raise NotABand(
                f"cell {key} has {len(ids)} idempotents", witness=("no-group", members[0])
            )
        try:
            groups[key] = _group_on(M, ids[0], eset(members))
        except NotAGroup as exc:
            raise NotABand(f"cell {key} is not a group: {exc}", witness=("no-group", members[0]))
        grid[key] = ids[0]

    for i, j in product(range(len(rows)), range(len(cols))):
        if (i, j) not in grid:
            raise NotABand(f"cell {(i, j)} is empty", witness=("empty-cell", i, j))
    for i, j, k, l in product(range(len(rows)), range(len(cols)), range(len(rows)), range(len(cols))):
        if M.mul(grid[i, j], grid[k, j]) != grid[i, j] or M.mul(grid[i, j], grid[i, l]) != grid[i, l]:
            raise NotABand("idempotent grid law fails", witness=("grid", i, j, k, l))
    return RectBandDecomposition(T, rows, cols, component, grid, groups)


@dataclass(frozen=True)
class BandNormalForm:
    """G x I with the product <c,j><d,k> = <cd,j> and its isomorphism onto the band."""

    group: tuple[int, ...]
    rows: int
    elements: tuple[tuple[int, int], ...]
    table: np.ndarray
    to_band: dict
    from_band: dict


def band_normal_form_J1(M: FiniteMonoid, dec: RectBandDecomposition) -> BandNormalForm:
    if dec.n_cols != 1:
        raise JNotSingleton(f"band has {dec.n_cols} columns")
    G = dec.cell(0, 0).members
    elements = tuple((b, i) for i in range(dec.n_rows) for b in G)
    pos = {x: n for n, x in enumerate(elements)}
    table = np.empty((len(elements), len(elements)), dtype=np.int64)
    for (c, j), (d, k) in product(elements, elements):
        table[pos[c, j], pos[d, k]] = pos[M.mul(c, d), j]
    to_band = {(b, i): M.mul(dec.idempotent_grid[i, 0], b) for (b, i) in elements}
    if sorted(to_band.values()) != sorted(dec.subset):
        raise NotABand("normal-form map is not a bijection onto the band")
    for x, y in product(elements, elements):
        xy = elements[table[pos[x], pos[y]]]
        if M.mul(to_band[x], to_band[y]) != to_band[xy]:
            raise NotABand("normal-form map is not a homomorphism", witness=(x, y))
    from_band = {v: k for k, v in to_band.items()}
    table.setflags(write=False)
    return BandNormalForm(G, dec.n_rows, elements, table, to_band, from_band)


# --- linear orders of principal left ideals ----------------------------------

@dataclass(frozen=True)
class OrderCheck:
    holds: bool
    witness: tuple | None = None  # (b, c) or (b, c, a): Sb, Sc incomparable (below Sa)

    def __bool__(self):
        return self.holds


def _incomparable(x: ElementSet, y: ElementSet) -> bool:
    return not (x <= y or y <= x)


def is_linearly_ordered(M: FiniteMonoid) -> OrderCheck:
    L = M.left_ideals
    for b in M.elements:
        for c in range(b + 1, M.order):
            if _incomparable(L[b], L[c]):
                return OrderCheck(False, (b, c))
    return OrderCheck(True)


def is_regularly_linearly_ordered(M: FiniteMonoid, R: Iterable[int]) -> OrderCheck:
    """For every a in R the principal left ideals inside Sa form a chain."""
    L = M.left_ideals
    for a in eset(R):
        below = [b for b in M.elements if L[b] <= L[a]]
        for x, b in enumerate(below):
            for c in below[x + 1:]:
                if _incomparable(L[b], L[c]):
                    return OrderCheck(False, (b, c, a))
    return OrderCheck(True)


def is_von_neumann_regular_element(M: FiniteMonoid, a: int) -> int | None:
    for b in M.elements:
        if M.mul(M.mul(a, b), a) == a:
            return b
    return None
