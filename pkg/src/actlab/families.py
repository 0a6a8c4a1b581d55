"""Constructors for concrete finite monoids used throughout the package.

Naming of the small fixtures:

* ``trivial()``      the one-element monoid.
* ``rz2_plus_1()``   the two-element right-zero semigroup {x, y} with an identity
                      adjoined (x*z = z, y*z = z); indices 1 = 0, x = 1, y = 2.
* ``cg(m, k)``       chain of cyclic groups Z_m at levels 0..k under
                      n_i * m_j = (n+m)_{min(i,j)}, plus identity.
* ``b22_plus_1()``   the rectangular band of Z_2 groups with 2 rows, 2 columns
                      and zero twist, plus identity.
* ``syn9()``         {1, a, b, c} with a three-step ideal chain Sc < Sb < Sa,
                      used by the counting witness.
"""

from __future__ import annotations

import math
from itertools import product
from typing import Callable, Sequence

import numpy as np

from .errors import GNotAbelian, GNotGroup, LengthInsufficient, NonAssociative, TableInconsistent
from .monoid import FiniteMonoid, find_identity, validate_monoid


def cyclic_group_table(m: int) -> np.ndarray:
    ar = np.arange(m)
    return (ar[:, None] + ar[None, :]) % m


def _group_table(G) -> tuple[np.ndarray, int]:
    table = np.asarray(G.table if isinstance(G, FiniteMonoid) else G, dtype=np.int64)
    n = table.shape[0]
    zero = find_identity(table)
    if zero is None:
        raise GNotGroup("group table has no identity")
    for a in range(n):
        if not any(table[a, b] == zero for b in range(n)):
            raise GNotGroup(f"element {a} has no inverse")
        if sorted(table[a].tolist()) != list(range(n)):
            raise GNotGroup(f"row {a} is not a permutation")
    if not np.array_equal(table, table.T):
        raise GNotAbelian("group table is not symmetric")
    return table, zero


def trivial() -> FiniteMonoid:
    return validate_monoid(1, [[0]], names=["1"])


def rz2_plus_1() -> FiniteMonoid:
    return validate_monoid(3, [[0, 1, 2], [1, 1, 2], [2, 1, 2]], 0, names=["1", "x", "y"])


def syn9() -> FiniteMonoid:
    # a is a two-sided identity on {a, b, c}; b fixes a and b, c absorbs from the left
    table = [
        [0, 1, 2, 3],
        [1, 1, 2, 3],
        [2, 2, 2, 3],
        [3, 3, 3, 3],
    ]
    return validate_monoid(4, table, 0, names=["1", "a", "b", "c"])


def rect_band_monoid(G, I: int, J: int, phi=0) -> FiniteMonoid:
    """<G, I, J, phi>-band with an identity adjoined at index 0.

    Element <a, i, j> sits at ``1 + (i*J + j)*|G| + a`` and multiplies by
    <a,i,j> * <b,k,l> = <a + b + phi(k, j), i, l>. ``phi`` is a constant, an
    I x J array, or a callable ``phi(k, j)``.
    """
    table_g, _ = _group_table(G)
    n_g = table_g.shape[0]
    if callable(phi):
        twist = np.array([[phi(k, j) for j in range(J)] for k in range(I)], dtype=np.int64)
    else:
        twist = np.broadcast_to(np.asarray(phi, dtype=np.int64), (I, J))

    def index(a, i, j):
        return 1 + (i * J + j) * n_g + a

    n = 1 + I * J * n_g
    table = np.empty((n, n), dtype=np.int64)
    table[0, :] = np.arange(n)
    table[:, 0] = np.arange(n)
    names = ["1"]
    for i, j, a in product(range(I), range(J), range(n_g)):
        names.append(f"<{a},{i},{j}>")
    for (i, j, a), (k, l, b) in product(product(range(I), range(J), range(n_g)), repeat=2):
        c = table_g[table_g[a, b], twist[k, j]]
        table[index(a, i, j), index(b, k, l)] = index(c, i, l)
    return validate_monoid(n, table, 0, names=names)


def rect_band_element(n_g: int, J: int, a: int, i: int, j: int) -> int:
    return 1 + (i * J + j) * n_g + a


def b22_plus_1() -> FiniteMonoid:
    return rect_band_monoid(cyclic_group_table(2), 2, 2, 0)


def chain_of_groups(m: int, k: int, with_shifts: bool = False) -> FiniteMonoid:
    """Levels Z_0..Z_k of Z_m copies with n_i m_j = (n+m)_{min(i,j)}, plus identity.

    With ``with_shifts`` a finite stand-in for the free commutative semigroup
    on two generators is adjoined: shift elements s_d (d in Z_m) composing by
    addition and acting by n_i -> (n+d)_i on both sides. The generators act as
    s_3 and s_2. This is a finite analog, not the infinite monoid itself.
    """
    if m < 1 or k < 0:
        raise ValueError("need m >= 1 and k >= 0")
    elements: list[tuple] = [("1",)]
    elements += [("n", n, i) for i in range(k + 1) for n in range(m)]
    if with_shifts:
        elements += [("s", d) for d in range(m)]

    def op(x, y):
        if x[0] == "1":
            return y
        if y[0] == "1":
            return x
        if x[0] == "n" and y[0] == "n":
            return ("n", (x[1] + y[1]) % m, min(x[2], y[2]))
        if x[0] == "s" and y[0] == "s":
            return ("s", (x[1] + y[1]) % m)
        z, d = (y, x[1]) if x[0] == "s" else (x, y[1])
        return ("n", (z[1] + d) % m, z[2])

    index = {x: i for i, x in enumerate(elements)}
    n = len(elements)
    table = np.array([[index[op(x, y)] for y in elements] for x in elements], dtype=np.int64)
    names = [_cg_name(x) for x in elements]
    return validate_monoid(n, table, 0, names=names)


def _cg_name(x) -> str:
    if x[0] == "1":
        return "1"
    if x[0] == "n":
        return f"{x[1]}_{x[2]}"
    return f"s{x[1]}"


def cg(m: int = 2, k: int = 1) -> FiniteMonoid:
    return chain_of_groups(m, k)


def cg_element(m: int, n: int, i: int) -> int:
    """Index of n_i in chain_of_groups(m, k)."""
    return 1 + i * m + n


def layered_monoid_64(H, N: int = 1) -> FiniteMonoid:
    """Five-family table monoid: [f,i,h] for f in 1..3, i < N; [4,h]; [5,h].

    The multiplication table is taken exactly as written, including the
    [4,j]*[3,m,k] = [2,m,j*k] entry. Associativity failures surface as
    TableInconsistent. [5,0] is the identity.
    """
    table_h, zero = _group_table(H)
    n_h = table_h.shape[0]
    elements: list[tuple] = []
    for f in (1, 2, 3):
        elements += [(f, i, h) for i in range(N) for h in range(n_h)]
    elements += [(4, h) for h in range(n_h)] + [(5, h) for h in range(n_h)]

    def op(x, y):
        g = table_h[x[-1], y[-1]]
        if x[0] in (1, 2, 3):
            return (x[0], x[1], g)
        if y[0] in (1, 2, 3):
            fam = y[0]
            if x[0] == 4 and fam == 3:
                fam = 2
            return (fam, y[1], g)
        return (min(x[0], y[0]), g)

    index = {x: i for i, x in enumerate(elements)}
    n = len(elements)
    table = np.array([[index[op(x, y)] for y in elements] for x in elements], dtype=np.int64)
    names = ["[" + ",".join(map(str, x)) + "]" for x in elements]
    try:
        return validate_monoid(n, table, index[(5, zero)], names=names)
    except NonAssociative as exc:
        raise TableInconsistent(f"table is not associative: {exc}", witness=exc.triple) from exc


# --- Z_2^n helpers for the twisted band construction -------------------------

BitSequence = tuple[int, ...]


def bitseq_h(bits: Sequence[int]) -> BitSequence:
    """Prefix up to and including the last 1; (0,) for the zero sequence."""
    last = max((i for i, b in enumerate(bits) if b), default=-1)
    if last < 0:
        return (0,)
    return tuple(int(b) for b in bits[: last + 1])


def bitseq_l(bits: Sequence[int]) -> int:
    if not any(bits):
        return 0
    return len(bitseq_h(bits))


def bitseq_r(bits: Sequence[int]) -> int:
    # the sum runs to index l inclusive; positions past the end count as 0
    top = bitseq_l(bits)
    return sum(int(bits[i]) << i for i in range(min(top + 1, len(bits))))


def psi(m: int, n: int) -> BitSequence:
    """Length-n binary encoding (least significant first) of floor(sqrt(m))."""
    if m < 0:
        raise ValueError("m must be non-negative")
    root = math.isqrt(m)
    if root >> n:
        raise LengthInsufficient(f"{root} needs more than {n} bits")
    return tuple((root >> i) & 1 for i in range(n))


def twisted_band_phi(n_bits: int) -> Callable[[int, int], BitSequence]:
    """phi(i, j) = psi(i) * j over Z_2^n: zero for j = 0, psi(i) for j = 1."""

    def phi(i: int, j: int) -> BitSequence:
        return psi(i, n_bits) if j else (0,) * n_bits

    return phi


def z2n_table(n_bits: int) -> np.ndarray:
    """Cayley table of Z_2^n with element k encoding bit i as (k >> i) & 1."""
    ar = np.arange(1 << n_bits)
    return ar[:, None] ^ ar[None, :]


def bits_to_index(bits: Sequence[int]) -> int:
    return sum(int(b) << i for i, b in enumerate(bits))


def twisted_band_monoid(n_bits: int, rows: int) -> FiniteMonoid:
    """<Z_2^n, rows, {0,1}, psi(i)*j>-band plus identity: a finite slice of the twisted band."""
    phi = twisted_band_phi(n_bits)
    return rect_band_monoid(
        z2n_table(n_bits), rows, 2, lambda k, j: bits_to_index(phi(k, j))
    )


FINITE_FAMILIES: dict[str, Callable[..., FiniteMonoid]] = {
    "trivial": trivial,
    "rz2": rz2_plus_1,
    "cg": cg,
    "chain_of_groups": lambda m=2, k=1, shifts=0: chain_of_groups(int(m), int(k), bool(int(shifts))),
    "b22": b22_plus_1,
    "syn9": syn9,
    "layered64": lambda h=2, N=1: layered_monoid_64(cyclic_group_table(int(h)), int(N)),
    "rect_band": lambda g=2, I=2, J=2, phi=0: rect_band_monoid(
        cyclic_group_table(int(g)), int(I), int(J), int(phi)
    ),
    "twisted_band": lambda bits=2, rows=2: twisted_band_monoid(int(bits), int(rows)),
}
