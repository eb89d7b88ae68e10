"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 resource bound exceeded.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from typing import List, Optional, Sequence

from . import affine, fixtures
from .affine import Root, format_root
from .biconvex import enumerate_params
from .cartan import CartanData, CartanError, build_cartan, element_from_word, minimal_coset_reps
from .chains import RowParam, enumerate_chains
from .orders import OrderError, OrderSpec, RowOrder, build_order, enumerate_prefix, verify_convex_order
from .subsys import build_subsystem
from .words import WordError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BOUND = 0, 1, 2, 3
FIXTURES = fixtures.NAMES


class UsageError(Exception):
    pass


class BoundExceeded(Exception):
    pass


_TERM = re.compile(r"([+-]?)(\d*)\*?(d|a\d+)")


def parse_root(text: str, rank: int) -> Root:
    """Parse 'm d + c a1 - a2' (whitespace-insensitive)."""
    s = re.sub(r"\s+", "", text.replace("−", "-").replace("δ", "d").replace("α", "a"))
    if not s:
        raise UsageError("empty root")
    level, fin, pos = 0, [0] * rank, 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or (pos and not m.group(1)):
            raise UsageError(f"cannot parse root {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        coeff = sign * (int(m.group(2)) if m.group(2) else 1)
        if m.group(3) == "d":
            level += coeff
        else:
            i = int(m.group(3)[1:])
            if not 1 <= i <= rank:
                raise UsageError(f"simple root index {i} outside 1..{rank}")
            fin[i - 1] += coeff
        pos = m.end()
    return Root(level, tuple(fin))


def _word_arg(text: Optional[str]) -> List[int]:
    if not text:
        return []
    return [int(t) for t in re.split(r"[\s,]+", text.strip()) if t]


def _subset_arg(text: Optional[str], cartan: CartanData) -> tuple:
    if text is None:
        return tuple(range(1, cartan.rank + 1))
    out = tuple(sorted(set(_word_arg(text))))
    if any(not 1 <= j <= cartan.rank for j in out):
        raise UsageError(f"index set {text!r} outside 1..{cartan.rank}")
    return out


def _cartan(args) -> CartanData:
    try:
        return build_cartan(args.type, args.rank)
    except CartanError as exc:
        raise UsageError(str(exc)) from None


def _emit(args, lines: Sequence[str], payload) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=False))
    else:
        for line in lines:
            print(line)


def _check_bound(args, value: int, what: str) -> None:
    if value < 0:
        raise UsageError(f"{what} must be non-negative")
    if value > args.max_bound:
        raise BoundExceeded(f"{what}={value} exceeds the cap {args.max_bound}")


def _depth(args) -> int:
    if args.depth < 1:
        raise UsageError("depth must be at least 1")
    if args.depth > args.max_depth:
        raise BoundExceeded(f"depth {args.depth} exceeds the cap {args.max_depth}")
    return args.depth


# ---------------------------------------------------------------------------


def cmd_roots(args) -> int:
    c = _cartan(args)
    D = _depth(args)
    roots = affine.positive_roots(c, D)
    counts = {m: sum(1 for r in roots if r.level == m) for m in range(D + 1)}
    lines = [format_root(r) for r in roots]
    lines += [f"level {m}: {k}" for m, k in counts.items()] + [f"total: {len(roots)}"]
    _emit(args, lines, {"roots": [r.to_json() for r in roots], "counts": {str(m): k for m, k in counts.items()}, "total": len(roots)})
    return EXIT_OK


def _load_payload(args):
    if args.fixture:
        if args.fixture not in FIXTURES:
            raise UsageError(f"unknown fixture {args.fixture!r}; choose from {', '.join(FIXTURES)}")
        text = fixtures.load_text(args.fixture)
    elif args.input == "-":
        text = sys.stdin.read()
    elif args.input:
        try:
            with open(args.input) as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(str(exc)) from None
    else:
        c = _cartan(args)
        w = element_from_word(c, _word_arg(args.w))
        return c, build_order(c, w, None)
    try:
        data = json.loads(text)
        c = build_cartan(data["type"], int(data["rank"]))
        if data.get("kind") == "rows":
            return c, RowParam.from_json(c, data)
        if data.get("kind") == "order":
            return c, OrderSpec.from_json(c, data)
        raise UsageError("payload 'kind' must be 'rows' or 'order'")
    except (ValueError, KeyError, TypeError, CartanError, WordError, OrderError) as exc:
        raise UsageError(f"malformed payload: {exc}") from None


def cmd_order(args) -> int:
    c, obj = _load_payload(args)
    if args.action == "build":
        data = obj.to_json()
        print(json.dumps(data, indent=2))
        return EXIT_OK
    if args.action == "verify":
        D = _depth(args)
        if isinstance(obj, RowParam):
            ro = RowOrder(obj)
            report = verify_convex_order(ro.compare, ro.contains, D, cartan=c)
        else:
            report = verify_convex_order(obj.compare, lambda b: True, D, cartan=c)
        payload = {"ok": report.ok, "window": report.window, "checked": report.checked, "unchecked": report.unchecked}
        if report.violation:
            kind, b, g, s = report.violation
            payload["violation"] = {"kind": kind, "beta": b.to_json(), "gamma": g.to_json(), "sum": s.to_json()}
        _emit(args, [report.describe()], payload)
        return EXIT_OK if report.ok else EXIT_FAIL
    if args.action == "prefix":
        if args.count < 1:
            raise UsageError("count must be positive")
        if args.count > 100_000:
            raise BoundExceeded(f"count {args.count} exceeds 100000")
        rows = obj if isinstance(obj, RowParam) else obj.negative
        if not 1 <= args.row <= rows.n:
            raise UsageError(f"row {args.row} outside 1..{rows.n}")
        roots = enumerate_prefix(obj, args.count, args.row)
        _emit(args, [format_root(r) for r in roots], [r.to_json() for r in roots])
        return EXIT_OK
    # compare
    a, b = parse_root(args.beta, c.rank), parse_root(args.gamma, c.rank)
    try:
        if isinstance(obj, RowParam):
            res = RowOrder(obj).compare(a, b)
        else:
            res = obj.compare(a, b)
    except OrderError as exc:
        raise UsageError(str(exc)) from None
    sym = "<" if res < 0 else (">" if res > 0 else "=")
    _emit(args, [sym], {"result": sym})
    return EXIT_OK


def _word_text(word) -> str:
    return " ".join(str(k) for k in word) if word else "id"


def cmd_enumerate(args) -> int:
    c = _cartan(args)
    J = _subset_arg(args.J, c)
    if not J:
        raise UsageError("J must be non-empty")
    lines: List[str] = []
    items: List[dict] = []
    if args.what == "coset-reps":
        K = _subset_arg(args.K or "", c) if args.K is not None else ()
        if not set(K) <= set(J):
            raise UsageError("K must be a subset of J")
        for u in minimal_coset_reps(c, J, K):
            lines.append(f"u = {_word_text(u.reduced_word)}")
            items.append({"word": list(u.reduced_word), "matrix": u.to_json()})
    elif args.what == "biconvex":
        _check_bound(args, args.bound, "bound")
        Ks = [_subset_arg(args.K, c)] if args.K is not None else None
        if Ks and not set(Ks[0]) <= set(J):
            raise UsageError("K must be a subset of J")
        for p in enumerate_params(c, J, args.bound, Ks):
            yw = build_subsystem(c, p.K).reduced_word(p.y) if p.K else ()
            lines.append(f"K = {list(p.K)}  u = {_word_text(p.u.reduced_word)}  y = {_word_text(yw)}")
            items.append({**p.to_json(), "u_word": list(p.u.reduced_word), "y_word": list(yw)})
    else:
        _check_bound(args, args.bound, "bound")
        w = element_from_word(c, _word_arg(args.w))
        if args.n is not None and args.n < 1:
            raise UsageError("n must be positive")
        for chain in enumerate_chains(c, J, w, args.bound, args.n):
            ys = []
            for K, y in zip(chain.K_chain[1:], chain.y_chain):
                ys.append(_word_text(build_subsystem(c, K).reduced_word(y) if K else ()))
            lines.append(f"K = {[list(K) for K in chain.K_chain]}  y = [{'; '.join(ys)}]")
            items.append(chain.to_json())
    lines.append(f"count: {len(items)}")
    _emit(args, lines, {"items": items, "count": len(items)})
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--type", default=argparse.SUPPRESS, help="finite type letter (default A)")
    common.add_argument("--rank", type=int, default=argparse.SUPPRESS, help="rank l (default 2)")
    common.add_argument("--depth", type=int, default=argparse.SUPPRESS, help="window depth D (default 6)")
    common.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed (reserved for sampling)")
    common.add_argument("--max-bound", type=int, default=argparse.SUPPRESS, help="cap on enumeration bounds")
    common.add_argument("--max-depth", type=int, default=argparse.SUPPRESS, help="cap on window depth")

    p = argparse.ArgumentParser(prog="convex-orders", description=__doc__, parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("roots", parents=[common], help="list positive roots up to the window depth")

    po = sub.add_parser("order", parents=[common], help="build, verify, list or compare convex orders")
    osub = po.add_subparsers(dest="action", required=True)
    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("--input", help="JSON payload file ('-' for stdin)")
    source.add_argument("--fixture", help=f"built-in payload: {', '.join(FIXTURES)}")
    source.add_argument("--w", help="finite word for w, e.g. '2 1' (default 1-row order)")
    osub.add_parser("build", parents=[common, source])
    osub.add_parser("verify", parents=[common, source])
    pp = osub.add_parser("prefix", parents=[common, source])
    pp.add_argument("count", type=int)
    pp.add_argument("--row", type=int, default=1)
    pc = osub.add_parser("compare", parents=[common, source])
    pc.add_argument("beta")
    pc.add_argument("gamma")

    pe = sub.add_parser("enumerate", parents=[common], help="enumerate coset reps, biconvex sets or chains")
    esub = pe.add_subparsers(dest="what", required=True)
    for name in ("biconvex", "chains", "coset-reps"):
        q = esub.add_parser(name, parents=[common])
        q.add_argument("--J", help="subset of 1..l (default all)")
        if name != "chains":
            q.add_argument("--K", help="subset of J")
        if name != "coset-reps":
            q.add_argument("--bound", type=int, default=2, help="length bound on y")
        if name == "chains":
            q.add_argument("--w", help="finite word for w")
            q.add_argument("--n", type=int, help="number of rows")
    return p


_DEFAULTS = {"type": "A", "rank": 2, "depth": 6, "format": "text", "seed": 0, "max_bound": 6, "max_depth": 64}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for k, v in _DEFAULTS.items():
        if not hasattr(args, k):
            setattr(args, k, v)
    handlers = {"roots": cmd_roots, "order": cmd_order, "enumerate": cmd_enumerate}
    try:
        return handlers[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BoundExceeded as exc:
        print(f"bound exceeded: {exc}", file=sys.stderr)
        return EXIT_BOUND


if __name__ == "__main__":
    sys.exit(main())
