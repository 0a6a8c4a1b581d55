"""Rule-defined infinite monoids explored through finite windows.

Elements are tagged tuples in normal form:

    ("1",)            the identity
    ("a", i), ("b", i), ("c", i, j), ("n", i)        indexed points
    ("z", n, i)       the integer n in level i
    ("w", word)       a word over the generators; commutative words are count tuples

Each family carries an ideal oracle ``leq(x, y)`` for S.x contained in S.y,
with a structural reason. ``validate`` checks the oracle against a bounded
certificate search before anything is classified.
"""

from __future__ import annotations

import hashlib
import math
import threading
from dataclasses import dataclass, field
from typing import Callable, Hashable, Sequence

import numpy as np

from .classify import Kind, Verdict
from .errors import OracleInvalid, UnknownFamily, WindowTooSmall
from .logic import Structure, evaluate, parse_formula

Elem = tuple
ONE: Elem = ("1",)


@dataclass
class LazyMonoid:
    name: str
    params: dict
    rule: Callable[[Elem, Elem], Elem]
    oracle: Callable[[Elem, Elem], tuple[bool, str]]
    core: Sequence[Elem]
    generators: Sequence[Elem]
    idempotent_rule: Callable[[Elem], bool] | None = None
    chain: Sequence[Elem] = ()
    resolve: Callable[[str], Elem] | None = None
    analog: str = ""
    notes: list = field(default_factory=list)
    cert_radius: int = 6

    def __post_init__(self):
        self._cache: dict = {}
        self._lock = threading.Lock()

    identity = ONE

    def mul(self, x: Elem, y: Elem) -> Elem:
        key = (x, y)
        with self._lock:
            hit = self._cache.get(key)
        if hit is not None:
            return hit
        if x == ONE:
            out = y
        elif y == ONE:
            out = x
        else:
            out = self.rule(x, y)
        with self._lock:
            self._cache[key] = out
        return out

    def product(self, *xs: Elem) -> Elem:
        out = ONE
        for x in xs:
            out = self.mul(out, x)
        return out

    def is_idempotent(self, x: Elem) -> bool:
        if self.idempotent_rule is not None:
            return self.idempotent_rule(x)
        return self.mul(x, x) == x

    def leq(self, x: Elem, y: Elem) -> bool:
        return self.oracle(x, y)[0]

    def ball(self, radius: int = 6) -> list[Elem]:
        """All products of at most ``radius`` generators (the identity included)."""
        seen = {ONE}
        frontier = [ONE]
        for _ in range(radius):
            nxt = []
            for x in frontier:
                for g in self.generators:
                    y = self.mul(g, x)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen, key=_key)

    def window(self, radius: int = 6) -> list[Elem]:
        pts = set(self.ball(radius)) | set(self.core)
        return sorted(pts, key=_key)

    def certificate(self, x: Elem, y: Elem, radius: int = 6) -> Elem | None:
        """Some s in the ball (or the core) with s.y = x."""
        for s in self.window(radius):
            if self.mul(s, y) == x:
                return s
        return None

    def check_associativity(self, samples: int = 2000, radius: int = 4, seed: int = 0) -> tuple | None:
        pool = self.window(radius)
        rng = np.random.default_rng(seed)
        idx = rng.integers(0, len(pool), size=(samples, 3))
        for i, j, k in idx:
            s, t, u = pool[i], pool[j], pool[k]
            if self.mul(self.mul(s, t), u) != self.mul(s, self.mul(t, u)):
                return s, t, u
        return None

    def validate(self, radius: int = 6, points: Sequence[Elem] | None = None, seed: int = 0) -> int:
        """Check the oracle on every pair of ``points``; returns the number of pairs checked."""
        bad = self.check_associativity(radius=min(radius, 4), seed=seed)
        if bad is not None:
            raise OracleInvalid(f"{self.name}: associativity fails on {bad}")
        pts = list(points) if points is not None else self.probe_points()
        n = 0
        for x in pts:
            for y in pts:
                ok, reason = self.oracle(x, y)
                cert = self.certificate(x, y, radius)
                if ok and cert is None:
                    raise OracleInvalid(f"{self.name}: leq{(x, y)} claimed ({reason}) but no certificate within radius {radius}")
                if not ok and cert is not None:
                    raise OracleInvalid(f"{self.name}: leq{(x, y)} denied ({reason}) but {cert} . y = x")
                n += 1
        return n

    def probe_points(self) -> list[Elem]:
        return sorted(set(self.generators) | set(self.core) | {ONE}, key=_key)

    def ascending_chain(self, length: int) -> list[Elem]:
        """Longest verified prefix of the family's candidate chain with strictly growing left ideals."""
        out: list[Elem] = []
        for x in self.chain[:length]:
            if out and not (self.leq(out[-1], x) and not self.leq(x, out[-1])):
                break
            out.append(x)
        return out

    def descriptor(self) -> dict:
        return {
            "family": self.name,
            "params": {k: self.params[k] for k in sorted(self.params)},
            "analog": self.analog,
            "core_window": len(self.core),
        }

    @property
    def fingerprint(self) -> str:
        return hashlib.sha256(repr(sorted(self.descriptor().items())).encode()).hexdigest()[:16]


def _key(x: Elem):
    return tuple((0, v) if isinstance(v, (int, float)) else (1, str(v)) for v in x)


def format_elem(x: Elem) -> str:
    tag = x[0]
    if tag == "1":
        return "1"
    if len(x) == 1:
        return tag
    if tag in ("a", "b", "n"):
        return f"{tag}{x[1]}"
    if tag == "c":
        return f"c{x[1]},{x[2]}"
    if tag == "z":
        lvl = "w" if x[2] == math.inf else x[2]
        return f"{x[1]}_{lvl}"
    if tag == "w":
        if isinstance(x[1], str):
            return "w(" + x[1] + ")"
        if len(x) == 2:
            return f"alpha^{x[1]}"
        return f"alpha^{x[1]}beta^{x[2]}"
    return str(x)


# --- left zeros separated by a free semigroup --------------------------------

def _ex7_1(window: int) -> LazyMonoid:
    def rule(x, y):
        if x[0] in "abc":
            return x
        # x is a word
        if y[0] == "w":
            return ("w", x[1] + y[1])
        if y[0] == "c":
            return ("a", y[1]) if x[1][-1] == "a" else ("b", y[2])
        return y

    def oracle(x, y):
        if y == ONE:
            return True, "S.1 = S"
        if x == ONE:
            return False, "1 lies only in S.1"
        if y[0] in "abc":
            return x[0] in "abc", "S.y = R for y in R"
        if x[0] in "abc":
            return True, "R is contained in every left ideal"
        return x[1].endswith(y[1]), "words: S.v contains u iff v is a suffix of u"

    core = (
        [("a", i) for i in range(window + 1)]
        + [("b", i) for i in range(window + 1)]
        + [("c", i, j) for i in range(window + 1) for j in range(i + 1)]
    )
    gens = [("w", "a"), ("w", "b")] + core

    def resolve(name: str) -> Elem:
        if name in ("alpha", "beta"):
            return ("w", name[0])
        if name and set(name) <= {"a", "b"}:
            return ("w", name)
        raise UnknownFamily(f"no element named {name!r}")

    return LazyMonoid(
        "ex7_1", {"window": window}, rule, oracle, core, gens,
        idempotent_rule=lambda x: x == ONE or x[0] in "abc",
        resolve=resolve,
        analog="window of indices 0..W; words written over {a, b} for the two free generators",
    )


# --- levels of integers under min-of-levels addition -------------------------

def _levels(name: str, levels: Sequence, span: int, words: bool = True, chain: Sequence = ()) -> LazyMonoid:
    def shift(w):
        return 3 * w[1] + 2 * w[2]

    def rule(x, y):
        if x[0] == "z" and y[0] == "z":
            return ("z", x[1] + y[1], min(x[2], y[2]))
        if x[0] == "w" and y[0] == "w":
            return ("w", x[1] + y[1], x[2] + y[2])
        z, w = (x, y) if x[0] == "z" else (y, x)
        return ("z", z[1] + shift(w), z[2])

    def oracle(x, y):
        if y == ONE:
            return True, "S.1 = S"
        if x == ONE:
            return False, "1 lies only in S.1"
        if y[0] == "z":
            if x[0] == "z":
                return x[2] <= y[2], "S.n_i is the union of levels up to i"
            return False, "words never lie in the core"
        if x[0] == "z":
            return True, "S.w contains every level"
        return x[1] >= y[1] and x[2] >= y[2], "commutative words: divisibility"

    core = [("z", n, i) for i in levels for n in range(-span, span + 1)]
    gens = [("z", d, i) for i in levels for d in (-1, 0, 1)]
    if words:
        gens += [("w", 1, 0), ("w", 0, 1)]

    def idem(x):
        return x == ONE or (x[0] == "z" and x[1] == 0)

    def resolve(nm: str) -> Elem:
        if nm == "alpha":
            return ("w", 1, 0)
        if nm == "beta":
            return ("w", 0, 1)
        n, _, i = nm.partition("_")
        return ("z", int(n), math.inf if i == "w" else int(i))

    return LazyMonoid(
        name, {}, rule, oracle, core, gens, idempotent_rule=idem, chain=list(chain), resolve=resolve,
    )


def _ex7_2(window: int) -> LazyMonoid:
    L = _levels("ex7_2", range(window), window, chain=[("z", 0, i) for i in range(window)])
    L.cert_radius = 3 * window + 4
    L.params = {"window": window}
    L.analog = "levels 0..W-1, integers in [-W, W] enumerated; products exact on unbounded integers"
    return L


def _ex8_3(window: int) -> LazyMonoid:
    L = _levels("ex8_3", [0], window)
    L.cert_radius = 3 * window + 4
    L.params = {"window": window}
    L.analog = "single level Z_0 with the commutative words acting by shifts"
    return L


def _ex8_4(window: int) -> LazyMonoid:
    levels = list(range(window)) + [math.inf]
    chain = [("z", 0, i) for i in range(window)] + [("z", 0, math.inf)]
    L = _levels("ex8_4", levels, window, chain=chain)
    L.cert_radius = 3 * window + 4
    L.params = {"window": window}
    L.analog = "levels 0..W-1 plus a top level standing for the added limit ordinal"
    return L


# --- left zeros under a one-generator free semigroup -------------------------

def _ex8_2(window: int) -> LazyMonoid:
    def rule(x, y):
        if x[0] == "n":
            return x
        if y[0] == "n":
            return y
        return ("w", x[1] + y[1])

    def oracle(x, y):
        if y == ONE:
            return True, "S.1 = S"
        if x == ONE:
            return False, "1 lies only in S.1"
        if x[0] == "n":
            return True, "the left zeros lie in every left ideal"
        if y[0] == "n":
            return False, "S.n is the set of left zeros"
        return x[1] >= y[1], "S.alpha^j contains alpha^i iff i >= j"

    core = [("n", k) for k in range(window)]
    gens = [("w", 1)] + core

    return LazyMonoid(
        "ex8_2", {"window": window}, rule, oracle, core, gens,
        idempotent_rule=lambda x: x == ONE or x[0] == "n",
        resolve=lambda nm: ("w", 1) if nm == "alpha" else ("n", int(nm)),
        analog="left zeros 0..W-1 and powers of one generator",
    )


# --- three letters under a free commutative semigroup ------------------------

def _ex9_1(window: int) -> LazyMonoid:
    table = {("a", "a"): "a", ("a", "b"): "a", ("b", "a"): "a", ("b", "b"): "b"}

    def rule(x, y):
        if x[0] == "w" and y[0] == "w":
            return ("w", x[1] + y[1], x[2] + y[2])
        if x[0] == "w":
            return y
        if y[0] == "w":
            return x
        if x == ("c",):
            return y
        if y == ("c",):
            return x
        return (table[x[0], y[0]],)

    ideals = {"a": {"a"}, "b": {"a", "b"}, "c": {"a", "b", "c"}}

    def oracle(x, y):
        if y == ONE:
            return True, "S.1 = S"
        if x == ONE:
            return False, "1 lies only in S.1"
        if y[0] == "w":
            if x[0] == "w":
                return x[1] >= y[1] and x[2] >= y[2], "commutative words: divisibility"
            return True, "S.w contains a, b, c"
        if x[0] == "w":
            return False, "words are not products landing in {a, b, c}"
        return x[0] in ideals[y[0]], "S.a < S.b < S.c among the letters"

    core = [("a",), ("b",), ("c",)]
    gens = core + [("w", 1, 0), ("w", 0, 1)]

    def resolve(nm: str) -> Elem:
        return {"alpha": ("w", 1, 0), "beta": ("w", 0, 1)}.get(nm, (nm,))

    return LazyMonoid(
        "ex9_1", {"window": window}, rule, oracle, core, gens,
        idempotent_rule=lambda x: x == ONE or x[0] in "abc",
        resolve=resolve,
        analog="stated core {a, b, c}",
        notes=[
            "direct computation gives S.c = {a, b, c} rather than S, and every word is act-regular, "
            "so the computed regular core is all of S; the stated core {a, b, c} is used"
        ],
    )


_BUILDERS = {
    "ex7_1": (_ex7_1, 1),
    "ex7_2": (_ex7_2, 1),
    "ex8_2": (_ex8_2, 1),
    "ex8_3": (_ex8_3, 1),
    "ex8_4": (_ex8_4, 1),
    "ex9_1": (_ex9_1, 0),
}

LAZY_FAMILIES = tuple(sorted(_BUILDERS))


def lazy_family(name: str, window: int = 3, **params) -> LazyMonoid:
    try:
        build, least = _BUILDERS[name]
    except KeyError:
        raise UnknownFamily(f"unknown lazy family {name!r}; known: {', '.join(LAZY_FAMILIES)}") from None
    if params:
        raise UnknownFamily(f"{name} takes only a window, got {sorted(params)}")
    if window < least:
        raise WindowTooSmall(f"{name} needs window >= {least}, got {window}")
    return build(window)


# --- bounded classification --------------------------------------------------

@dataclass(frozen=True)
class Bounds:
    radius: int = 4
    chain_length: int = 3
    seed: int = 0

    def to_json(self) -> dict:
        return {"radius": self.radius, "chain_length": self.chain_length, "seed": self.seed}


def _incomparable(L: LazyMonoid, pts: Sequence[Elem], under: Elem | None = None):
    below = [b for b in pts if under is None or L.leq(b, under)]
    for i, b in enumerate(below):
        for c in below[i + 1:]:
            if not L.leq(b, c) and not L.leq(c, b):
                return b, c
    return None


def _fmt(xs) -> list:
    return [format_elem(x) for x in xs]


def order_property_probe(L: LazyMonoid) -> dict:
    """For ex7_1: does E z (x = alpha z & y = beta z) hold exactly when i >= j on the window?"""
    phi = parse_formula("E z (x = [alpha]z & y = [beta]z)", L.resolve)
    st = Structure(L.core, L.mul)
    W = L.params["window"]
    pattern = [[evaluate(st, phi, {"x": ("a", i), "y": ("b", j)}) for j in range(W + 1)] for i in range(W + 1)]
    agree = sum(pattern[i][j] == (i >= j) for i in range(W + 1) for j in range(W + 1))
    return {
        "formula": "E z (x = [alpha]z & y = [beta]z)",
        "pattern": [[int(v) for v in row] for row in pattern],
        "agree": agree,
        "cells": (W + 1) ** 2,
    }


def _utb(direction: str, bounds: Bounds, **evidence) -> dict:
    return Verdict(Kind.UP_TO_BOUND, bounds=bounds.to_json(), evidence={"direction": direction, **evidence}).to_json()


def bounded_classify(L: LazyMonoid, bounds: Bounds = Bounds()) -> dict:
    """Stability-type sections decided on the finite window only."""
    checked = L.validate(radius=max(bounds.radius + 2, L.cert_radius), seed=bounds.seed)
    ball = L.window(bounds.radius)
    core = list(L.core)

    lin = _incomparable(L, ball)
    reg = None
    for a in core:
        pair = _incomparable(L, ball, under=a)
        if pair:
            reg = (*pair, a)
            break
    chain = L.ascending_chain(bounds.chain_length)
    acc_fails = len(chain) >= bounds.chain_length and len(chain) >= 2

    def lin_ev(found, under=False):
        if found is None:
            return {}
        ev = {"incomparable": _fmt(found[:2])}
        if under:
            ev["under"] = format_elem(found[2])
        return ev

    acc_ev = {"ascending_chain": _fmt(chain)} if acc_fails else {"ascending_chain": None}
    sections = {
        "thm38": _utb("FAILS" if lin else "HOLDS", bounds, **lin_ev(lin)),
        "thm39": _utb("FAILS" if lin or acc_fails else "HOLDS", bounds, **lin_ev(lin), **acc_ev),
        "thm71": _utb("FAILS" if reg else "HOLDS", bounds, **lin_ev(reg, True)),
        "thm81": _utb("FAILS" if reg or acc_fails else "HOLDS", bounds, **lin_ev(reg, True), **acc_ev),
    }
    if L.name == "ex7_1":
        probe = order_property_probe(L)
        # a full pattern is an order-property witness, hence instability
        sections["order_property"] = _utb("FAILS" if probe["agree"] == probe["cells"] else "UNDETERMINED", bounds, **probe)
    idem = [x for x in ball if L.is_idempotent(x)]
    return {
        "fingerprint": L.fingerprint,
        "family": L.descriptor(),
        "window_elements": len(ball),
        "oracle_pairs_checked": checked,
        "idempotents": _fmt(idem),
        "regular_core": _fmt(core),
        "config": bounds.to_json(),
        "sections": sections,
        "notes": ["analog on a finite window: " + L.analog] + list(L.notes),
    }
