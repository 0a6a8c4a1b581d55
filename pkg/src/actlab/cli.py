"""Command-line entry point: ``actlab <command> ...``.

Exit codes: 0 success, 2 unreadable or invalid input, 3 internal verification
failure, 4 a witness precondition failed (the failing check is named on stderr).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Sequence

from .act import regular_representation
from .classify import ReportConfig, full_report, report_json
from .errors import (
    ActlabError,
    OracleInvalid,
    ParseError,
    PatternViolated,
    PreconditionFailed,
)
from .logic import parse_formula
from .regular import regular_core, regularity_certificate
from .textio import act_to_dot, format_act, format_monoid, read_act, read_monoid

EXIT_OK, EXIT_PARSE, EXIT_VERIFY, EXIT_PRECONDITION = 0, 2, 3, 4


class InputError(Exception):
    """Raised for anything wrong with user-supplied input."""


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.replace(",", " ").split()] if text.strip() else []


def _dump(obj: dict, fmt: str) -> str:
    if fmt == "text":
        return _text(obj) + "\n"
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(f"{pad}- {_scalar(v)}" if _flat(v) else f"{pad}-\n{_text(v, indent + 1)}" for v in obj)
    return pad + _scalar(obj)


def _flat(v) -> bool:
    if isinstance(v, dict):
        return False
    if isinstance(v, list):
        return all(not isinstance(x, dict) for x in v) and all(_flat(x) for x in v)
    return True


def _scalar(v) -> str:
    return json.dumps(v) if not isinstance(v, str) else v


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _config(args) -> ReportConfig:
    return ReportConfig(
        cap_congruences=args.cap_congruences,
        cap_closure=args.cap_closure,
        witness_N=args.witness_N,
        seed=args.seed,
    )


def _load_monoid(path: str):
    try:
        return read_monoid(path)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


# --- commands ----------------------------------------------------------------

def cmd_analyze(args) -> int:
    M = _load_monoid(args.monoid)
    core = None if args.core is None else _int_list(args.core)
    report = full_report(M, _config(args), core=core)
    text = report_json(report) if args.format == "json" else _dump(report, args.format)
    _emit(text, args.output)
    return EXIT_OK


def cmd_act_check(args) -> int:
    try:
        A = read_act(args.act)
    except OSError as exc:
        raise InputError(f"{args.act}: {exc.strerror}") from None
    entries = regularity_certificate(A)
    for entry in entries:
        if not entry.verify(A):
            raise PatternViolated(entry.point, "certificate did not re-verify")
    core = regular_core(A)
    out = {
        "size": A.size,
        "monoid_fingerprint": A.fingerprint,
        "regular": all(e.regular for e in entries),
        "regular_core": sorted(int(p) for p in core),
        "points": [e.to_json() for e in entries],
        "seed": args.seed,
    }
    _emit(_dump(out, args.format), args.output)
    return EXIT_OK


def _write_witness(args, act, act_ref: str, payload: dict) -> None:
    payload = {**payload, "seed": args.seed}
    if args.output:
        prefix = args.output
        Path(prefix + ".act").write_text(format_act(act, act_ref))
        Path(prefix + ".json").write_text(_dump(payload, "json"))
        if args.dot:
            Path(prefix + ".dot").write_text(act_to_dot(act))
    elif args.format == "dot":
        sys.stdout.write(act_to_dot(act))
    else:
        sys.stdout.write(_dump(payload, args.format))


def _act_ref(args) -> str:
    if args.output:
        return os.path.relpath(os.path.abspath(args.monoid), os.path.dirname(os.path.abspath(args.output)) or ".")
    return args.monoid


def cmd_witness(args) -> int:
    from . import witness as W

    M = _load_monoid(args.monoid)
    if args.kind == "grid":
        w = W.build_grid(M, args.a, args.t, args.s, args.N if args.N is not None else args.witness_N)
        payload = {
            "kind": "grid",
            "a": w.a, "t": w.t, "s": w.s, "N": w.N,
            "points": w.act.size,
            "b_points": list(w.b_points),
            "c_points": list(w.c_points),
            "pattern": w.pattern().astype(int).tolist(),
        }
        _write_witness(args, w.act, _act_ref(args), payload)
    elif args.kind == "tree":
        w = W.build_tree(M, args.a, _int_list(args.chain), args.kappa, args.d)
        checked = W.check_separation(w)
        payload = {
            "kind": "tree",
            "a": w.a, "chain": list(w.chain), "kappa": w.kappa, "d": w.d,
            "points": w.act.size,
            "leaves": {",".join(map(str, k)) or "-": int(v) for k, v in w.leaf.items()},
            "separation_checks": checked,
        }
        _write_witness(args, w.act, _act_ref(args), payload)
    elif args.kind == "counting":
        phi = W.standard_counting_phi(args.b) if args.phi is None else parse_formula(args.phi)
        Ks = [tuple(_int_list(k)) for k in args.K.split(";")]
        w = W.build_counting(M, args.a, args.b, args.c, args.alpha, args.beta, phi, args.n, Ks, args.N or 2)
        payload = {
            "kind": "counting",
            "a": w.a, "b": w.b, "c": w.c, "alpha": w.alpha, "beta": w.beta, "n": w.n, "N": w.N,
            "checks": {k: _plain(v) for k, v in w.checks.items()},
            "acts": [
                {"K": sorted(K), "points": ca.act.size, "truth": [int(t) for t in ca.truth]}
                for K, ca in sorted(w.acts.items(), key=lambda kv: sorted(kv[0]))
            ],
        }
        first = next(iter(sorted(w.acts.items(), key=lambda kv: sorted(kv[0]))))[1]
        _write_witness(args, first.act, _act_ref(args), payload)
    else:  # triples
        if args.act:
            try:
                A = read_act(args.act)
            except OSError as exc:
                raise InputError(f"{args.act}: {exc.strerror}") from None
            if A.monoid.fingerprint != M.fingerprint:
                raise InputError("act file refers to a different monoid")
        else:
            A = regular_representation(M)
        fam = W.enumerate_triples(M, A, args.cap_congruences)
        payload = {
            "kind": "triples",
            "cover": list(fam.cover),
            "counts": {str(e): fam.count(e) for e in fam.cover},
            "overflow": {str(e): bool(v) for e, v in fam.overflow.items()},
            "total": fam.count(),
            "triples": [t.to_json() for t in fam] if args.list else None,
        }
        sys_out = _dump(payload, args.format)
        _emit(sys_out, args.output)
    return EXIT_OK


def _plain(v):
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (bool, int, float, str)) or v is None:
        return v
    return int(v) if hasattr(v, "__int__") else str(v)


def _corpus_row(item):
    from .corpus import run_invariants

    name, loader = item
    try:
        M = loader()
    except (ActlabError, OSError) as exc:
        return f"{name}\t-\tFAIL\tload: {exc}", False
    res = run_invariants(M, name)
    return res.tsv(), res.ok


def cmd_corpus(args) -> int:
    from .corpus import corpus_monoids, fixtures

    items = []
    if args.dir:
        d = Path(args.dir)
        if not d.is_dir():
            raise InputError(f"{args.dir}: not a directory")
        for p in sorted(d.glob("*.mon")):
            items.append((p.name, lambda p=p: read_monoid(p)))
    if args.fixtures:
        items += [(f"fixture:{k}", lambda M=M: M) for k, M in fixtures().items()]
    max_order = args.max_order
    if not args.dir and not args.fixtures and not max_order:
        # the shipped corpus: fixtures plus every monoid of order <= 4
        items += [(f"fixture:{k}", lambda M=M: M) for k, M in fixtures().items()]
        max_order = 4
    if max_order:
        items += [(name, lambda M=M: M) for name, M in corpus_monoids(max_order)]
    threads = max(1, int(os.environ.get("ACTLAB_THREADS", "1") or 1))
    with ThreadPoolExecutor(threads) as pool:
        rows = list(pool.map(_corpus_row, items))
    lines = ["name\torder\tstatus\tfailures"] + [r for r, _ in rows]
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK if all(ok for _, ok in rows) else EXIT_VERIFY


def cmd_families(args) -> int:
    from .families import FINITE_FAMILIES
    from .lazy import LAZY_FAMILIES, Bounds, bounded_classify, lazy_family

    if args.action == "list":
        _emit(_dump({"finite": sorted(FINITE_FAMILIES), "lazy": list(LAZY_FAMILIES)}, args.format), args.output)
        return EXIT_OK
    params = {}
    for kv in args.params:
        k, sep, v = kv.partition("=")
        if not sep:
            raise InputError(f"parameter {kv!r} must look like key=value")
        params[k] = v
    if args.name in FINITE_FAMILIES and args.action == "build":
        try:
            M = FINITE_FAMILIES[args.name](**{k: _num(v) for k, v in params.items()})
        except TypeError as exc:
            raise InputError(str(exc)) from None
        _emit(format_monoid(M), args.output)
        return EXIT_OK
    if args.name in FINITE_FAMILIES:
        try:
            M = FINITE_FAMILIES[args.name](**{k: _num(v) for k, v in params.items()})
        except TypeError as exc:
            raise InputError(str(exc)) from None
        text = _dump(full_report(M, _config(args)), args.format)
        _emit(text, args.output)
        return EXIT_OK
    window = args.window if args.window is not None else int(params.pop("window", 3))
    L = lazy_family(args.name, window, **params)
    if args.action == "build":
        _emit(_dump(L.descriptor(), "json"), args.output)
    else:
        report = bounded_classify(L, Bounds(seed=args.seed))
        _emit(_dump(report, args.format), args.output)
    return EXIT_OK


def _num(v: str):
    if v.lower() in ("true", "false"):
        return v.lower() == "true"
    return int(v)


# --- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap-congruences", type=_positive, default=4096)
    common.add_argument("--cap-closure", type=_positive, default=4096)
    common.add_argument("--witness-N", type=_positive, default=4)
    common.add_argument("--window", type=_positive, default=None)
    common.add_argument("--format", choices=("json", "text", "dot"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("-o", "--output", default=None)

    p = argparse.ArgumentParser(prog="actlab", description="Finite monoid acts: regularity, witnesses, classifiers.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="full classifier report for a monoid file")
    a.add_argument("monoid")
    a.add_argument("--core", default=None, help="override the regular core (comma list; empty for none)")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("act-check", parents=[common], help="per-point regularity of an act file")
    c.add_argument("act")
    c.set_defaults(func=cmd_act_check)

    w = sub.add_parser("witness", help="build a witness act")
    wsub = w.add_subparsers(dest="kind", required=True)
    g = wsub.add_parser("grid", parents=[common])
    g.add_argument("monoid")
    g.add_argument("--a", type=int, required=True)
    g.add_argument("--t", type=int, required=True)
    g.add_argument("--s", type=int, required=True)
    t = wsub.add_parser("tree", parents=[common])
    t.add_argument("monoid")
    t.add_argument("--a", type=int, required=True)
    t.add_argument("--chain", required=True, help="comma list s_0,...")
    t.add_argument("--kappa", type=_positive, default=2)
    t.add_argument("--d", type=int, default=None)
    k = wsub.add_parser("counting", parents=[common])
    k.add_argument("monoid")
    for name in ("a", "b", "c", "alpha", "beta"):
        k.add_argument(f"--{name}", type=int, required=True)
    k.add_argument("--phi", default=None, help="formula in x, y, z (default: [b]x = y & x != y)")
    k.add_argument("--n", type=_positive, default=1)
    k.add_argument("--K", default="0", help="subsets of 0..N separated by ';'")
    tr = wsub.add_parser("triples", parents=[common])
    tr.add_argument("monoid")
    tr.add_argument("--act", default=None, help="act file (default: the regular representation)")
    tr.add_argument("--list", action="store_true", help="include every triple")
    for q in (g, t, k, tr):
        q.add_argument("-N", type=_positive, default=None)
        q.add_argument("--dot", action="store_true", help="also write PREFIX.dot")
    w.set_defaults(func=cmd_witness)

    co = sub.add_parser("corpus", parents=[common], help="run the invariant suite")
    co.add_argument("dir", nargs="?", default=None)
    co.add_argument("--max-order", type=int, default=0, help="also generate all monoids up to this order")
    co.add_argument("--fixtures", action="store_true", help="also include the named fixtures")
    co.set_defaults(func=cmd_corpus)

    f = sub.add_parser("families", help="build or classify a named family")
    fsub = f.add_subparsers(dest="action", required=True)
    fl = fsub.add_parser("list", parents=[common])
    fl.set_defaults(name=None, params=[])
    for action in ("build", "classify"):
        q = fsub.add_parser(action, parents=[common])
        q.add_argument("name")
        q.add_argument("params", nargs="*", help="key=value")
    f.set_defaults(func=cmd_families)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PreconditionFailed as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (PatternViolated, OracleInvalid, AssertionError) as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (ParseError, InputError, ActlabError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
