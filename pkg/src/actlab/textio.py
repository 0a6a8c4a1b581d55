"""Plain-text formats for monoids and acts, plus DOT export."""

from __future__ import annotations

import os
from pathlib import Path

from .act import FiniteAct, validate_act
from .errors import ParseError
from .monoid import FiniteMonoid, validate_monoid


def _lines(text: str) -> list[tuple[int, str]]:
    """Non-blank lines with their 1-based numbers; '#' starts a comment."""
    out = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if line.strip():
            out.append((no, line))
    return out


def _ints(no: int, line: str, width: int, bound: int) -> list[int]:
    out = []
    col = 1
    for tok in line.split():
        col = line.index(tok, col - 1) + 1
        try:
            v = int(tok)
        except ValueError:
            raise ParseError(f"expected an integer, found {tok!r}", no, col) from None
        if not 0 <= v < bound:
            raise ParseError(f"index {v} out of range 0..{bound - 1}", no, col)
        out.append(v)
        col += len(tok)
    if len(out) != width:
        raise ParseError(f"expected {width} entries, found {len(out)}", no, 1)
    return out


def _header_int(lines, pos: int, what: str) -> int:
    if pos >= len(lines):
        raise ParseError(f"missing {what}", (lines[-1][0] + 1) if lines else 1, 1)
    no, line = lines[pos]
    try:
        n = int(line.strip())
    except ValueError:
        raise ParseError(f"expected {what}, found {line.strip()!r}", no, 1) from None
    if n < 0:
        raise ParseError(f"{what} must be nonnegative", no, 1)
    return n


def parse_monoid(text: str) -> FiniteMonoid:
    lines = _lines(text)
    n = _header_int(lines, 0, "order")
    if n < 1:
        raise ParseError("order must be positive", lines[0][0], 1)
    if len(lines) < n + 1:
        raise ParseError(f"expected {n} table rows, found {len(lines) - 1}", lines[-1][0], 1)
    rows = [_ints(no, line, n, n) for no, line in lines[1:n + 1]]
    identity = None
    for no, line in lines[n + 1:]:
        key, _, value = line.strip().partition("=")
        if key.strip() != "identity":
            raise ParseError(f"unexpected trailer {line.strip()!r}", no, 1)
        try:
            identity = int(value)
        except ValueError:
            raise ParseError(f"bad identity {value.strip()!r}", no, line.index("=") + 2) from None
    return validate_monoid(n, rows, identity_hint=identity)


def format_monoid(M: FiniteMonoid) -> str:
    width = len(str(M.order - 1))
    out = [str(M.order)]
    out += [" ".join(f"{int(v):>{width}}" for v in row) for row in M.table]
    out.append(f"identity={M.identity}")
    return "\n".join(out) + "\n"


def parse_act(text: str, base: str | os.PathLike = ".", monoid: FiniteMonoid | None = None) -> FiniteAct:
    """Parse the act format. The monoid file is resolved relative to ``base`` unless ``monoid`` is given."""
    lines = _lines(text)
    if not lines:
        raise ParseError("empty act file", 1, 1)
    no, first = lines[0]
    head, _, ref = first.strip().partition(" ")
    if head != "monoid" or not ref.strip():
        raise ParseError("first line must be 'monoid <file>'", no, 1)
    if monoid is None:
        path = Path(base) / ref.strip()
        try:
            monoid = parse_monoid(path.read_text())
        except OSError as exc:
            raise ParseError(f"cannot read monoid file {ref.strip()!r}: {exc.strerror}", no, len(head) + 2) from None
    m = _header_int(lines, 1, "carrier size")
    if len(lines) < 2 + monoid.order:
        raise ParseError(f"expected {monoid.order} action rows", lines[-1][0], 1)
    rows = [_ints(ln, line, m, m) if m else _empty_row(ln, line) for ln, line in lines[2:2 + monoid.order]]
    labels = [str(i) for i in range(m)]
    for ln, line in lines[2 + monoid.order:]:
        parts = line.split()
        if len(parts) != 3 or parts[0] != "label":
            raise ParseError(f"unexpected trailer {line.strip()!r}", ln, 1)
        idx = _ints(ln, parts[1], 1, max(m, 1))[0]
        labels[idx] = parts[2]
    return validate_act(monoid, rows if m else [[] for _ in range(monoid.order)], labels)


def _empty_row(no: int, line: str) -> list:
    if line.strip() not in ("-", ""):
        raise ParseError("empty carrier: rows must be '-'", no, 1)
    return []


def format_act(A: FiniteAct, monoid_ref: str) -> str:
    out = [f"monoid {monoid_ref}", str(A.size)]
    if A.size:
        out += [" ".join(str(int(v)) for v in row) for row in A.action]
    else:
        out += ["-"] * A.monoid.order
    for i in range(A.size):
        if A.label(i) != str(i):
            out.append(f"label {i} {A.label(i)}")
    return "\n".join(out) + "\n"


def act_to_dot(A: FiniteAct, elements: list[int] | None = None, name: str = "act") -> str:
    """Action graph: an edge p -> s.p labelled s, for each chosen element s (default: all non-identity)."""
    M = A.monoid
    elems = elements if elements is not None else [s for s in M.elements if s != M.identity]
    out = [f"digraph {name} {{"]
    for p in range(A.size):
        out.append(f'  {p} [label="{A.label(p)}"];')
    for s in elems:
        for p in range(A.size):
            q = A.act(s, p)
            out.append(f'  {p} -> {q} [label="{M.name(s)}"];')
    out.append("}")
    return "\n".join(out) + "\n"


def read_monoid(path: str | os.PathLike) -> FiniteMonoid:
    return parse_monoid(Path(path).read_text())


def read_act(path: str | os.PathLike) -> FiniteAct:
    p = Path(path)
    return parse_act(p.read_text(), base=p.parent)
