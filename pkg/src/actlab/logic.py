"""First-order formulas over acts, with counting quantifiers.

Terms are ``x``, ``s.x``, ``c`` or ``s.c`` (s a monoid element, c a constant
point). Formulas are built from equations between terms with the usual
connectives and the quantifiers E, A, E{=n}, E{>=n}. Evaluation is by
exhaustive expansion over a finite carrier.

Text syntax::

    E z (x = [1]z & y = [2]z)
    E{>=3} x ([4]x = x)
    A x (x = #0 | ~ [2]x = x)

``[k]`` names monoid element k (resolved by a caller-supplied function when
elements are not plain indices), ``#k`` is the act point k, ``~`` negation,
``&``, ``|``, ``->``, and ``!=`` abbreviates a negated equation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any, Callable, Hashable, Iterable, Mapping

from .errors import ArityMismatch, ParseError, UnboundVariable


# --- syntax ------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str
    elem: Hashable | None = None  # None means the identity


@dataclass(frozen=True)
class Const:
    point: Hashable
    elem: Hashable | None = None


Term = Var | Const


class Formula:
    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)


@dataclass(frozen=True)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True, init=False)
class And(Formula):
    parts: tuple

    def __init__(self, *parts):
        object.__setattr__(self, "parts", tuple(parts))


@dataclass(frozen=True, init=False)
class Or(Formula):
    parts: tuple

    def __init__(self, *parts):
        object.__setattr__(self, "parts", tuple(parts))


@dataclass(frozen=True)
class Implies(Formula):
    premise: Formula
    conclusion: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class ExistsExactly(Formula):
    n: int
    var: str
    body: Formula


@dataclass(frozen=True)
class ExistsAtLeast(Formula):
    n: int
    var: str
    body: Formula


def act_on(elem, term: Term) -> Term:
    """The term ``elem.term`` (only valid for bare terms)."""
    if term.elem is not None:
        raise ValueError("term already carries an element")
    return type(term)(term.name if isinstance(term, Var) else term.point, elem)


def free_vars(phi: Formula) -> frozenset[str]:
    if isinstance(phi, Eq):
        return frozenset(t.name for t in (phi.left, phi.right) if isinstance(t, Var))
    if isinstance(phi, Not):
        return free_vars(phi.body)
    if isinstance(phi, (And, Or)):
        return frozenset().union(*(free_vars(p) for p in phi.parts))
    if isinstance(phi, Implies):
        return free_vars(phi.premise) | free_vars(phi.conclusion)
    if isinstance(phi, (Exists, Forall, ExistsExactly, ExistsAtLeast)):
        return free_vars(phi.body) - {phi.var}
    raise TypeError(f"not a formula: {phi!r}")


def rename(phi: Formula, mapping: Mapping[str, str]) -> Formula:
    """Rename free variables. Bound variables shadow the mapping."""

    def term(t: Term) -> Term:
        if isinstance(t, Var) and t.name in mapping:
            return Var(mapping[t.name], t.elem)
        return t

    if isinstance(phi, Eq):
        return Eq(term(phi.left), term(phi.right))
    if isinstance(phi, Not):
        return Not(rename(phi.body, mapping))
    if isinstance(phi, And):
        return And(*(rename(p, mapping) for p in phi.parts))
    if isinstance(phi, Or):
        return Or(*(rename(p, mapping) for p in phi.parts))
    if isinstance(phi, Implies):
        return Implies(rename(phi.premise, mapping), rename(phi.conclusion, mapping))
    inner = {k: v for k, v in mapping.items() if k != phi.var}
    if phi.var in inner.values():
        raise ValueError(f"renaming would capture {phi.var!r}")
    body = rename(phi.body, inner)
    if isinstance(phi, (ExistsExactly, ExistsAtLeast)):
        return type(phi)(phi.n, phi.var, body)
    return type(phi)(phi.var, body)


# --- structures --------------------------------------------------------------

class Structure:
    """A carrier with a left action. ``act(None, p)`` is ``p``."""

    def __init__(self, carrier: Iterable, action: Callable[[Any, Any], Any]):
        self.carrier = tuple(carrier)
        self._action = action

    def act(self, s, p):
        return p if s is None else self._action(s, p)


def as_structure(A) -> Structure:
    if isinstance(A, Structure):
        return A
    # FiniteAct: points are ints, elements are ints
    table = A.action
    return Structure(range(A.size), lambda s, p: int(table[s, p]))


# --- evaluation --------------------------------------------------------------

def _value(st: Structure, term: Term, val: dict):
    if isinstance(term, Var):
        try:
            base = val[term.name]
        except KeyError:
            raise UnboundVariable(term.name) from None
    else:
        base = term.point
    return st.act(term.elem, base)


def _count(st: Structure, var: str, body: Formula, val: dict, stop_at: int | None = None) -> int:
    saved = val.get(var, _MISSING)
    n = 0
    try:
        for p in st.carrier:
            val[var] = p
            if _eval(st, body, val):
                n += 1
                if stop_at is not None and n >= stop_at:
                    break
    finally:
        if saved is _MISSING:
            val.pop(var, None)
        else:
            val[var] = saved
    return n


_MISSING = object()


def _eval(st: Structure, phi: Formula, val: dict) -> bool:
    if isinstance(phi, Eq):
        return _value(st, phi.left, val) == _value(st, phi.right, val)
    if isinstance(phi, Not):
        return not _eval(st, phi.body, val)
    if isinstance(phi, And):
        return all(_eval(st, p, val) for p in phi.parts)
    if isinstance(phi, Or):
        return any(_eval(st, p, val) for p in phi.parts)
    if isinstance(phi, Implies):
        return (not _eval(st, phi.premise, val)) or _eval(st, phi.conclusion, val)
    if isinstance(phi, Exists):
        return _count(st, phi.var, phi.body, val, stop_at=1) >= 1
    if isinstance(phi, Forall):
        return _count(st, phi.var, Not(phi.body), val, stop_at=1) == 0
    if isinstance(phi, ExistsAtLeast):
        return _count(st, phi.var, phi.body, val, stop_at=phi.n) >= phi.n
    if isinstance(phi, ExistsExactly):
        return _count(st, phi.var, phi.body, val, stop_at=phi.n + 1) == phi.n
    raise TypeError(f"not a formula: {phi!r}")


def evaluate(A, phi: Formula, valuation: Mapping[str, Any] | None = None) -> bool:
    """Truth value of ``phi`` in ``A`` (a FiniteAct or Structure) under ``valuation``."""
    val = dict(valuation or {})
    missing = free_vars(phi) - set(val)
    if missing:
        raise UnboundVariable(", ".join(sorted(missing)))
    return _eval(as_structure(A), phi, val)


def count_witnesses(A, phi: Formula, var: str, valuation: Mapping[str, Any] | None = None) -> int:
    """Number of points p with A |= phi(p); ``var`` must be the only unbound variable."""
    val = dict(valuation or {})
    free = free_vars(phi) - set(val)
    if free != {var}:
        raise ArityMismatch(f"expected exactly one free variable {var!r}, got {sorted(free)}")
    return _count(as_structure(A), var, phi, val)


def witnesses(A, phi: Formula, var: str, valuation: Mapping[str, Any] | None = None) -> list:
    st = as_structure(A)
    val = dict(valuation or {})
    out = []
    for p in st.carrier:
        val[var] = p
        if _eval(st, phi, val):
            out.append(p)
    return out


# --- parser ------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<count>E\{(?:=|>=)\d+\})|(?P<op>->|!=|[~&|()=])|(?P<elem>\[[^\]]+\])"
    r"|(?P<const>#\d+)|(?P<ident>[A-Za-z_][A-Za-z_0-9']*))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    pos, out = 0, []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            bad = len(text) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", 1, bad + 1)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str, resolve: Callable[[str], Hashable]):
        self.tokens = _tokenize(text)
        self.i = 0
        self.resolve = resolve

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, None)

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None:
            raise ParseError("unexpected end of formula")
        if value is not None and tok[1] != value:
            raise ParseError(f"expected {value!r}, found {tok[1]!r}", 1, tok[2])
        self.i += 1
        return tok

    def formula(self) -> Formula:
        left = self.disjunction()
        if self.peek()[1] == "->":
            self.take()
            return Implies(left, self.formula())
        return left

    def disjunction(self) -> Formula:
        parts = [self.conjunction()]
        while self.peek()[1] == "|":
            self.take()
            parts.append(self.conjunction())
        return parts[0] if len(parts) == 1 else Or(*parts)

    def conjunction(self) -> Formula:
        parts = [self.unary()]
        while self.peek()[1] == "&":
            self.take()
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(*parts)

    def unary(self) -> Formula:
        kind, value, col = self.peek()
        if value == "~":
            self.take()
            return Not(self.unary())
        if value == "(":
            self.take()
            inner = self.formula()
            self.take(")")
            return inner
        if kind == "count":
            self.take()
            n = int(re.search(r"\d+", value).group())
            var = self.variable()
            body = self.unary()
            return ExistsExactly(n, var, body) if "{=" in value else ExistsAtLeast(n, var, body)
        if kind == "ident" and value in ("E", "A"):
            self.take()
            var = self.variable()
            body = self.unary()
            return Exists(var, body) if value == "E" else Forall(var, body)
        return self.atom()

    def variable(self) -> str:
        kind, value, col = self.take()
        if kind != "ident" or value in ("E", "A"):
            raise ParseError(f"expected a variable, found {value!r}", 1, col)
        return value

    def term(self) -> Term:
        kind, value, col = self.take()
        elem = None
        if kind == "elem":
            elem = self.resolve(value[1:-1].strip())
            kind, value, col = self.take()
        if kind == "const":
            return Const(int(value[1:]), elem)
        if kind == "ident" and value not in ("E", "A"):
            return Var(value, elem)
        raise ParseError(f"expected a term, found {value!r}", 1, col)

    def atom(self) -> Formula:
        left = self.term()
        kind, value, col = self.take()
        if value not in ("=", "!="):
            raise ParseError(f"expected '=' or '!=', found {value!r}", 1, col)
        eq = Eq(left, self.term())
        return eq if value == "=" else Not(eq)


def parse_formula(text: str, resolve: Callable[[str], Hashable] = int) -> Formula:
    p = _Parser(text, resolve)
    phi = p.formula()
    if p.peek()[0] is not None:
        raise ParseError(f"trailing input {p.peek()[1]!r}", 1, p.peek()[2])
    return phi


def format_formula(phi: Formula) -> str:
    """Render in the text syntax (elements via str)."""

    def term(t: Term) -> str:
        base = t.name if isinstance(t, Var) else f"#{t.point}"
        return base if t.elem is None else f"[{t.elem}]{base}"

    if isinstance(phi, Eq):
        return f"{term(phi.left)} = {term(phi.right)}"
    if isinstance(phi, Not):
        return f"~{_wrap(phi.body)}"
    if isinstance(phi, And):
        return " & ".join(_wrap(p) for p in phi.parts)
    if isinstance(phi, Or):
        return " | ".join(_wrap(p) for p in phi.parts)
    if isinstance(phi, Implies):
        return f"{_wrap(phi.premise)} -> {_wrap(phi.conclusion)}"
    if isinstance(phi, Exists):
        return f"E {phi.var} {_wrap(phi.body)}"
    if isinstance(phi, Forall):
        return f"A {phi.var} {_wrap(phi.body)}"
    if isinstance(phi, ExistsExactly):
        return f"E{{={phi.n}}} {phi.var} {_wrap(phi.body)}"
    if isinstance(phi, ExistsAtLeast):
        return f"E{{>={phi.n}}} {phi.var} {_wrap(phi.body)}"
    raise TypeError(phi)


def _wrap(phi: Formula) -> str:
    return format_formula(phi) if isinstance(phi, (Eq, Not)) else f"({format_formula(phi)})"
