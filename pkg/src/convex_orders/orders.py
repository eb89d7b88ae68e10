"""Convex orders: the n-row comparator on Delta_J(w, -), three-zone
assembly on the positive roots, and a CO(i)/CO(ii) verifier at a window.

Comparators follow the ``cmp`` convention: negative, zero or positive.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, cmp_to_key
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from . import affine
from .affine import AffineWeylElement, Root, act
from .biconvex import _as_window, finite_part_set
from .cartan import CartanData, CartanError, FiniteWeylElement, element_from_word, is_negative, longest_element
from .chains import ChainParam, RowParam, extract_B, one_row
from .subsys import build_subsystem, phi_K
from .words import letters_from_sequence, phi_infty_enumerate, word_index

Comparator = Callable[[Root, Root], int]
Predicate = Callable[[Root], bool]


class OrderError(ValueError):
    """Root outside the ordered set, or an invalid order specification."""


def _cmp(a, b) -> int:
    return (a > b) - (a < b)


# ---------------------------------------------------------------------------
# n-row orders on Delta_J(w, -)


class RowOrder:
    """The order of Def. 7.8 type attached to a RowParam, as a sort key."""

    def __init__(self, rows: RowParam):
        self.rows = rows
        chain = rows.chain
        self._maps = [chain.row_map(i).inverse for i in range(1, chain.n + 1)]
        self._finite_top = chain.C(chain.n).finite_parts

    def contains(self, beta: Root) -> bool:
        return beta.is_positive and beta.finite in self._finite_top

    def position(self, beta: Root) -> Tuple[int, int]:
        """(row i, index p) with beta = w^{K_{i-1}} y_{i-1} phi_{s_{i-1}}(p)."""
        if not self.contains(beta):
            raise OrderError(f"{beta} is not in Delta_J(w, -)")
        chain = self.rows.chain
        for i in range(1, chain.n + 1):
            if beta in chain.C(i):
                return i, word_index(self.rows.words[i - 1], act(self._maps[i - 1], beta))
        raise AssertionError("row sets do not cover Delta_J(w, -)")

    def compare(self, beta: Root, gamma: Root) -> int:
        return _cmp(self.position(beta), self.position(gamma))

    def row_prefix(self, i: int, count: int) -> List[Root]:
        """The first ``count`` roots of row i."""
        word = self.rows.words[i - 1]
        m = self.rows.chain.row_map(i)
        return [act(m, b) for b in word.head(count)]

    def window_rows(self, window) -> List[List[Root]]:
        """Each row's members of level <= D, in order."""
        D = _as_window(window).max_level
        out = []
        for i in range(1, self.rows.n + 1):
            word = self.rows.words[i - 1]
            m = self.rows.chain.row_map(i)
            shift = affine.level_shift_bound(m)
            out.append([r for r in (act(m, b) for b in phi_infty_enumerate(word, D + shift)) if r.level <= D])
        return out


def row_position(rows: RowParam, beta: Root) -> Tuple[int, int]:
    return RowOrder(rows).position(beta)


def row_compare(rows: RowParam, beta: Root, gamma: Root) -> int:
    return RowOrder(rows).compare(beta, gamma)


# ---------------------------------------------------------------------------
# full orders on the positive roots


@dataclass(frozen=True)
class ImaginaryOrder:
    """Order on {m d}: ``levels`` (a permutation of 1..N) first, then N+1, N+2, ..."""

    levels: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "levels", tuple(int(m) for m in self.levels))
        if sorted(self.levels) != list(range(1, len(self.levels) + 1)):
            raise OrderError("imaginary order must permute 1..N")

    def rank(self, m: int) -> int:
        if m <= len(self.levels):
            return self.levels.index(m)
        return m - 1

    def to_json(self) -> dict:
        return {"levels": list(self.levels)}


@dataclass(frozen=True)
class OrderSpec:
    """Delta(w, -) < imaginary roots < Delta(w, +), the last zone ordered oppositely."""

    w: FiniteWeylElement
    negative: RowParam
    imaginary: ImaginaryOrder
    positive: RowParam

    @property
    def cartan(self) -> CartanData:
        return self.w.cartan

    @cached_property
    def _neg(self) -> RowOrder:
        return RowOrder(self.negative)

    @cached_property
    def _pos(self) -> RowOrder:
        return RowOrder(self.positive)

    @cached_property
    def _neg_parts(self):
        return finite_part_set(self.cartan, range(1, self.cartan.rank + 1), (), self.w, "-")

    def key(self, beta: Root) -> tuple:
        if not beta.is_positive:
            raise OrderError(f"{beta} is not a positive root")
        if beta.is_imaginary:
            return (1, self.imaginary.rank(beta.level), 0)
        if beta.finite in self._neg_parts:
            return (0,) + self._neg.position(beta)
        row, idx = self._pos.position(beta)
        return (2, -row, -idx)

    def compare(self, beta: Root, gamma: Root) -> int:
        return _cmp(self.key(beta), self.key(gamma))

    def to_json(self) -> dict:
        c = self.cartan
        return {
            "kind": "order",
            "type": c.type_label,
            "rank": c.rank,
            "w_word": list(self.w.reduced_word),
            "negative": self.negative.to_json(),
            "imaginary": self.imaginary.to_json(),
            "positive": self.positive.to_json(),
        }

    @classmethod
    def from_json(cls, cartan: CartanData, data: dict) -> "OrderSpec":
        w = element_from_word(cartan, data.get("w_word", []))
        neg = RowParam.from_json(cartan, data["negative"])
        pos = RowParam.from_json(cartan, data["positive"])
        imag = ImaginaryOrder(tuple(data.get("imaginary", {}).get("levels", ())))
        return build_order(cartan, w, neg, imag, pos)


def full_compare(spec: OrderSpec, beta: Root, gamma: Root) -> int:
    return spec.compare(beta, gamma)


def build_order(
    cartan: CartanData,
    w: FiniteWeylElement,
    rowparam_neg: RowParam,
    imaginary: Optional[ImaginaryOrder] = None,
    rowparam_pos: Optional[RowParam] = None,
    window: Optional[int] = None,
) -> OrderSpec:
    """Assemble an order on the positive roots; optionally verify it at a window.

    Missing zones default to 1-row orders and the level order on imaginary roots.
    """
    full = tuple(range(1, cartan.rank + 1))
    wo = w * longest_element(cartan)
    if rowparam_neg is None:
        rowparam_neg = one_row(cartan, full, w)
    if rowparam_pos is None:
        rowparam_pos = one_row(cartan, full, wo)
    if rowparam_neg.chain.J != full or rowparam_neg.chain.w != w:
        raise OrderError("negative zone must be a RowParam for (I0, w)")
    if rowparam_pos.chain.J != full or rowparam_pos.chain.w != wo:
        raise OrderError("positive zone must be a RowParam for (I0, w w0)")
    spec = OrderSpec(w, rowparam_neg, imaginary or ImaginaryOrder(), rowparam_pos)
    if window is not None:
        report = verify_convex_order(spec.compare, lambda b: True, window, cartan=cartan)
        if not report.ok:
            raise OrderError(f"assembled order fails verification: {report.describe()}")
    return spec


def enumerate_prefix(order, count: int, row: int = 1) -> List[Root]:
    """First ``count`` roots of a row (default row 1, which opens the order)."""
    if count < 1:
        raise ValueError("count must be positive")
    if isinstance(order, OrderSpec):
        order = order._neg
    elif isinstance(order, RowParam):
        order = RowOrder(order)
    if not 1 <= row <= order.rows.n:
        raise ValueError(f"row {row} outside 1..{order.rows.n}")
    return order.row_prefix(row, count)


def window_listing(compare: Comparator, roots: Iterable[Root]) -> List[Root]:
    return sorted(roots, key=cmp_to_key(compare))


def listing_order(listing: Sequence[Root]) -> Comparator:
    """The comparator of an explicit finite listing."""
    pos = {b: i for i, b in enumerate(listing)}

    def compare(beta: Root, gamma: Root) -> int:
        try:
            return _cmp(pos[beta], pos[gamma])
        except KeyError as exc:
            raise OrderError(f"{exc.args[0]} is not in the listing") from None

    return compare


def restrict_order(compare: Comparator, A: Predicate) -> Comparator:
    def restricted(beta: Root, gamma: Root) -> int:
        if not (A(beta) and A(gamma)):
            raise OrderError("root outside the restricted set")
        return compare(beta, gamma)

    return restricted


def opposite(compare: Comparator) -> Comparator:
    return lambda beta, gamma: compare(gamma, beta)


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class OrderReport:
    ok: bool
    window: int
    checked: int
    unchecked: int
    violation: Optional[Tuple[str, Root, Root, Root]] = None

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return f"pass ({self.checked} relations checked, {self.unchecked} left the window D={self.window})"
        kind, b, g, s = self.violation
        return f"fail {kind}: beta={b}, gamma={g}, beta+gamma={s} (window D={self.window})"


def verify_convex_order(
    compare: Comparator,
    B: Predicate,
    window,
    cartan: Optional[CartanData] = None,
    ambient: Optional[Predicate] = None,
    universe: Optional[Iterable[Root]] = None,
) -> OrderReport:
    """Check CO(i) and CO(ii) on B inside the window.

    The universe is the positive roots of level <= D (pass ``cartan``), or an
    explicit ``universe``; ``ambient`` narrows the gamma range of CO(ii).
    Sums of level > D are counted as unchecked.
    """
    D = _as_window(window).max_level
    if universe is None:
        if cartan is None:
            raise ValueError("need cartan or universe")
        universe = affine.positive_roots(cartan, D)
    U = sorted(r for r in universe if r.level <= D)
    Uset = set(U)
    members = [b for b in U if B(b)]
    mset = set(members)
    pos = {b: i for i, b in enumerate(sorted(members, key=cmp_to_key(compare)))}

    def less(a: Root, b: Root) -> bool:
        return pos[a] < pos[b]

    checked = unchecked = 0
    for i, b in enumerate(members):
        for g in members[i + 1 :]:
            if b.is_imaginary and g.is_imaginary:
                continue
            s = b + g
            if s.level > D:
                unchecked += 1
                continue
            if s not in mset:
                continue
            checked += 1
            lo, hi = (b, g) if less(b, g) else (g, b)
            if not (less(lo, s) and less(s, hi)):
                return OrderReport(False, D, checked, unchecked, ("CO(i)", lo, hi, s))
    others = [g for g in U if g not in mset and (ambient is None or ambient(g))]
    for b in members:
        for g in others:
            s = b + g
            if s.level > D:
                unchecked += 1
                continue
            if s not in mset or s not in Uset:
                continue
            checked += 1
            if not less(b, s):
                return OrderReport(False, D, checked, unchecked, ("CO(ii)", b, g, s))
    return OrderReport(True, D, checked, unchecked)


def splice_orders(
    y: AffineWeylElement,
    order1: Comparator,
    order2: Comparator,
    B: Predicate,
    window=None,
) -> Tuple[Comparator, Predicate]:
    """The order on Phi(y) + yB putting Phi(y) first.

    With a window, both inputs and the output are verified there.
    """
    phis = affine.inversion_set(y)
    yi = y.inverse

    def member(beta: Root) -> bool:
        return beta in phis or (beta.is_positive and B(act(yi, beta)))

    def compare(beta: Root, gamma: Root) -> int:
        a, b = beta in phis, gamma in phis
        if a and b:
            return order1(beta, gamma)
        if a != b:
            return -1 if a else 1
        return order2(act(yi, beta), act(yi, gamma))

    if window is not None:
        c = y.cartan
        D = _as_window(window).max_level
        shift = affine.level_shift_bound(y)
        r1 = verify_convex_order(order1, lambda b: b in phis, D, cartan=c)
        r2 = verify_convex_order(order2, B, D + shift, cartan=c)
        if not (r1.ok and r2.ok):
            raise OrderError("splice inputs are not convex at the window")
        r = verify_convex_order(compare, member, D, cartan=c)
        if not r.ok:
            raise OrderError(f"spliced order fails: {r.describe()}")
    return compare, member


# ---------------------------------------------------------------------------
# bookkeeping round trip


def recover_rows(rows: RowParam, window) -> List[Tuple[int, ...]]:
    """Read each row's word letters back off the window listing.

    Rows are read in order, mapped back through w^{K_{i-1}} y_{i-1}, and the
    longest run phi(1), phi(2), ... present in the window is decoded.
    """
    order = RowOrder(rows)
    out = []
    for i, row in enumerate(order.window_rows(window), start=1):
        back = rows.chain.row_map(i).inverse
        seq = [act(back, b) for b in row]
        word = rows.words[i - 1]
        run = []
        for p, b in enumerate(seq, start=1):
            if word_index(word, b) != p:
                break
            run.append(b)
        out.append(letters_from_sequence(word.subsystem, run))
    return out
