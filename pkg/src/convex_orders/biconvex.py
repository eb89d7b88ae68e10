"""Biconvex subsets of Delta_{J+}: slices <P>, the sets Delta^K_J(w, +-),
the parameterisation nabla_J(K, u, y) and a brute-force checker.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property, lru_cache
from typing import Callable, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from . import affine
from .affine import AffineWeylElement, Root
from .cartan import (
    CartanData,
    CartanError,
    FiniteRoot,
    FiniteWeylElement,
    in_parabolic,
    is_minimal_rep,
    is_negative,
    is_positive,
    minimal_coset_reps,
    subsystem_root_set,
)
from .subsys import NotInSubsystem, ball_K, build_subsystem, length_K, phi_K


@dataclass(frozen=True)
class Window:
    """Truncation to roots of level <= max_level."""

    max_level: int

    def __post_init__(self) -> None:
        if self.max_level < 1:
            raise ValueError("window depth must be at least 1")

    def __contains__(self, beta: Root) -> bool:
        return beta.level <= self.max_level


def _as_window(window) -> Window:
    return window if isinstance(window, Window) else Window(int(window))


def _subset(J: Iterable[int]) -> Tuple[int, ...]:
    return tuple(sorted(set(J)))


# ---------------------------------------------------------------------------
# finite descriptions


def finite_part_set(cartan: CartanData, J, K, w: FiniteWeylElement, sign: str) -> FrozenSet[FiniteRoot]:
    """w(Delta0^K_{J,sign}) where Delta0^K_J = Delta0_J minus Delta0_K."""
    if sign not in "+-" or len(sign) != 1:
        raise ValueError("sign must be '+' or '-'")
    keep = is_positive if sign == "+" else is_negative
    base = subsystem_root_set(cartan, J) - subsystem_root_set(cartan, K)
    return frozenset(w(r) for r in base if keep(r))


def slice_roots(P: Iterable[FiniteRoot], window) -> FrozenSet[Root]:
    """<P> cut at the window: all positive m d + eps with eps in P."""
    D = _as_window(window).max_level
    out = set()
    for eps in P:
        start = 0 if is_positive(eps) else 1
        out.update(Root(m, tuple(eps)) for m in range(start, D + 1))
    return frozenset(out)


def delta_K_J(cartan: CartanData, J, K, w: FiniteWeylElement, sign: str, window) -> FrozenSet[Root]:
    return slice_roots(finite_part_set(cartan, J, K, w, sign), window)


def maximal_biconvex(cartan: CartanData, J, w: FiniteWeylElement, window) -> FrozenSet[Root]:
    """Delta_J(w, -) = <w Delta0_{J-}> cut at the window."""
    if not in_parabolic(w, _subset(J)):
        raise CartanError("w must lie in W0_J")
    return delta_K_J(cartan, J, (), w, "-", window)


def window_roots(cartan: CartanData, J, window, imaginary: bool = True) -> List[Root]:
    """Delta_{J+} cut at the window, sorted."""
    fin = subsystem_root_set(cartan, J)
    D = _as_window(window).max_level
    out = [b for b in affine.positive_roots(cartan, D, real_only=True) if b.finite in fin]
    if imaginary:
        out.extend(Root(m, (0,) * cartan.rank) for m in range(1, D + 1))
    return sorted(out)


# ---------------------------------------------------------------------------
# nabla parameters


@dataclass(frozen=True)
class BiconvexParam:
    """(K, u, y) with u in W0^K_J and y in W_K, standing for nabla_J(K, u, y)."""

    J: Tuple[int, ...]
    K: Tuple[int, ...]
    u: FiniteWeylElement
    y: AffineWeylElement

    def __post_init__(self) -> None:
        object.__setattr__(self, "J", _subset(self.J))
        object.__setattr__(self, "K", _subset(self.K))
        if not self.J:
            raise CartanError("J must be non-empty")
        if not set(self.K) <= set(self.J):
            raise CartanError("K must be a subset of J")
        if not in_parabolic(self.u, self.J) or not is_minimal_rep(self.u, self.K):
            raise CartanError("u is not a minimal coset representative in W0^K_J")
        try:
            length_K(self.cartan, self.K, self.y)
        except NotInSubsystem as exc:
            raise CartanError(f"y is not in W_K: {exc}") from None

    @property
    def cartan(self) -> CartanData:
        return self.u.cartan

    @property
    def infinite(self) -> bool:
        return self.K != self.J

    @cached_property
    def finite_parts(self) -> FrozenSet[FiniteRoot]:
        """u Delta0^K_{J-}: the slices making up Delta^K_J(u, -)."""
        return finite_part_set(self.cartan, self.J, self.K, self.u, "-")

    @cached_property
    def residue(self) -> FrozenSet[Root]:
        """u Phi_K(y)."""
        return frozenset(Root(b.level, self.u(b.finite)) for b in phi_K(self.cartan, self.K, self.y))

    def __contains__(self, beta: Root) -> bool:
        return nabla_membership(self, beta)

    def to_json(self) -> dict:
        return {"J": list(self.J), "K": list(self.K), "u_matrix": self.u.to_json(), "y": self.y.to_json()}

    @classmethod
    def from_json(cls, cartan: CartanData, data: dict) -> "BiconvexParam":
        u = FiniteWeylElement(tuple(tuple(int(v) for v in row) for row in data["u_matrix"]), cartan)
        return cls(tuple(data["J"]), tuple(data["K"]), u, AffineWeylElement.from_json(cartan, data["y"]))


def subsets(J: Iterable[int]) -> List[Tuple[int, ...]]:
    """All subsets of J, by size then lexicographically."""
    J = _subset(J)
    out = [tuple(k for b, k in enumerate(J) if mask >> b & 1) for mask in range(1 << len(J))]
    return sorted(out, key=lambda K: (len(K), K))


def enumerate_params(cartan: CartanData, J, bound: int, Ks=None) -> List[BiconvexParam]:
    """Every (K, u, y) with l_K(y) <= bound; K ranges over Ks (default all K in J)."""
    J = _subset(J)
    out = []
    for K in subsets(J) if Ks is None else [_subset(K) for K in Ks]:
        word = build_subsystem(cartan, K).reduced_word if K else (lambda y: ())
        for u in minimal_coset_reps(cartan, J, K):
            for layer in ball_K(cartan, K, bound):
                for y in sorted(layer, key=word):
                    out.append(BiconvexParam(J, K, u, y))
    return out


def nabla_membership(param: BiconvexParam, beta: Root) -> bool:
    """Exact test of beta in nabla_J(K, u, y)."""
    if beta.finite in param.finite_parts:
        return beta.is_positive
    return beta in param.residue


def nabla_enumerate(param: BiconvexParam, window) -> FrozenSet[Root]:
    D = _as_window(window).max_level
    out = set(slice_roots(param.finite_parts, D))
    out.update(b for b in param.residue if b.level <= D)
    return frozenset(out)


class Inclusion(Enum):
    DOT_EQUAL = "dot-equal"
    DOT_SUBSET = "dot-subset"
    DOT_SUPERSET = "dot-superset"
    INCOMPARABLE = "incomparable"


def _dot_subset(p1: BiconvexParam, p2: BiconvexParam) -> bool:
    # K1 contains K2 and u2^{-1} u1 lies in W0_{K1}
    return set(p1.K) >= set(p2.K) and in_parabolic(p2.u.inverse * p1.u, p1.K)


def nabla_compare(p1: BiconvexParam, p2: BiconvexParam) -> Inclusion:
    """Inclusion up to finite sets, decided from the parameters alone."""
    if p1.J != p2.J:
        raise CartanError("parameters live over different J")
    a, b = _dot_subset(p1, p2), _dot_subset(p2, p1)
    if a and b:
        return Inclusion.DOT_EQUAL
    if a:
        return Inclusion.DOT_SUBSET
    if b:
        return Inclusion.DOT_SUPERSET
    return Inclusion.INCOMPARABLE


# ---------------------------------------------------------------------------
# brute-force biconvexity


@dataclass(frozen=True)
class BiconvexReport:
    ok: bool
    window: int
    checked: int
    violation: Optional[Tuple[str, Root, Root, Root]] = None

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return f"pass ({self.checked} sums checked, window D={self.window})"
        kind, b, g, s = self.violation
        return f"fail {kind}: {b} + {g} = {s} (window D={self.window})"


@lru_cache(maxsize=64)
def _sum_triples(ambient: FrozenSet[Root]) -> Tuple[Tuple[Root, Root, Root], ...]:
    roots = sorted(ambient)
    out = []
    for i, b in enumerate(roots):
        for g in roots[i:]:
            s = b + g
            if s in ambient:
                out.append((b, g, s))
    return tuple(out)


def check_biconvex(B: Iterable[Root], ambient: Iterable[Root], window) -> BiconvexReport:
    """Check convexity of B and of its complement inside the ambient window.

    Only sums that stay inside the window are examined.
    """
    D = _as_window(window).max_level
    amb = frozenset(r for r in ambient if r.level <= D)
    Bs = frozenset(r for r in B if r.level <= D)
    triples = _sum_triples(amb)
    for b, g, s in triples:
        bin_, gin = b in Bs, g in Bs
        if bin_ and gin and s not in Bs:
            return BiconvexReport(False, D, len(triples), ("C(i)", b, g, s))
        if not bin_ and not gin and s in Bs:
            return BiconvexReport(False, D, len(triples), ("C(ii)", b, g, s))
    return BiconvexReport(True, D, len(triples))
