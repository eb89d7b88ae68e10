"""Chains C_1 < ... < C_n = Delta_J(w, -) of infinite biconvex sets and their
parameters (K_chain, y_chain), plus the per-row words of an n-row order.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

from . import affine
from .affine import AffineWeylElement, Root
from .biconvex import BiconvexParam, _as_window, nabla_enumerate
from .cartan import (
    CartanData,
    CartanError,
    FiniteWeylElement,
    decompose_coset,
    element_from_word,
    in_parabolic,
    is_negative,
    subsystem_root_set,
)
from .subsys import NotInSubsystem, ball_K, build_subsystem, from_inversion_set_K, length_K, phi_K
from .words import InfiniteWord, act_on_word, build_Z, canonical_param

Subset = Tuple[int, ...]


def _subset(K: Iterable[int]) -> Subset:
    return tuple(sorted(set(K)))


def in_P_tilde(cartan: CartanData, J, w: FiniteWeylElement, K, y: AffineWeylElement) -> bool:
    """(K, w^K, y) in P~^w_J, i.e. Phi_K(y) inside Delta_K(w_K, -)."""
    _, wK = decompose_coset(cartan, J, K, w)
    try:
        phis = phi_K(cartan, K, y)
    except NotInSubsystem:
        return False
    # Delta_K(w_K, -) = <w_K Delta0_{K-}>
    wi = wK.inverse
    return all(is_negative(wi(b.finite)) for b in phis)


def check_Q(cartan: CartanData, J, w: FiniteWeylElement, K, L, y: AffineWeylElement, z: AffineWeylElement) -> bool:
    """Both Q(i) and Q(ii) for the quadruple (K, L, y, z)."""
    J, K, L = _subset(J), _subset(K), _subset(L)
    if not (set(L) <= set(K) <= set(J)):
        return False
    if not (in_P_tilde(cartan, J, w, K, y) and in_P_tilde(cartan, J, w, L, z)):
        return False
    wK, _ = decompose_coset(cartan, J, K, w)
    wL, _ = decompose_coset(cartan, J, L, w)
    roots_L = subsystem_root_set(cartan, L)
    wLi = wL.inverse
    target = {Root(b.level, wL(b.finite)) for b in phi_K(cartan, L, z)}
    for b in phi_K(cartan, K, y):
        img = Root(b.level, wK(b.finite))
        if wLi(img.finite) in roots_L and img not in target:
            return False
    return True


def extend_chain(cartan: CartanData, J, w: FiniteWeylElement, current, choice):
    """One step of the chain builder.

    ``current`` is (K, y) with (K, w^K, y) in P~^w_J, ``choice`` is (L, g)
    with (L, v^L, g) in P~^v_K for v = ybar^{-1} w_K.  Returns (L, z_x).
    """
    J = _subset(J)
    K, y = _subset(current[0]), current[1]
    L, g = _subset(choice[0]), choice[1]
    if not set(L) <= set(K):
        raise CartanError("L must be a subset of K")
    if not in_P_tilde(cartan, J, w, K, y):
        raise CartanError("current level is not in P~^w_J")
    _, wK = decompose_coset(cartan, J, K, w)
    v = y.finite.inverse * wK
    if not K:
        if L or not g.is_identity():
            raise CartanError("nothing below the empty set")
        return (), affine.identity(cartan)
    if not in_P_tilde(cartan, K, v, L, g):
        raise CartanError("choice is not in P~^v_K")
    vL, _ = decompose_coset(cartan, K, L, v)
    x = y * affine.from_finite(vL) * g
    xL, _ = decompose_coset(cartan, K, L, x.finite)
    shifted = affine.from_finite(xL.inverse) * x
    roots_L = subsystem_root_set(cartan, L)
    phis = {b for b in phi_K(cartan, K, shifted) if b.finite in roots_L}
    return L, from_inversion_set_K(cartan, L, phis)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChainParam:
    """J = K_0 > K_1 > ... > K_n = {} with y_i in W_{K_i} (y_0 = 1 implicit)."""

    J: Subset
    w: FiniteWeylElement
    K_chain: Tuple[Subset, ...]
    y_chain: Tuple[AffineWeylElement, ...]

    def __post_init__(self) -> None:
        J = _subset(self.J)
        Ks = tuple(_subset(k) for k in self.K_chain)
        object.__setattr__(self, "J", J)
        object.__setattr__(self, "K_chain", Ks)
        object.__setattr__(self, "y_chain", tuple(self.y_chain))
        if not J:
            raise CartanError("J must be non-empty")
        if not in_parabolic(self.w, J):
            raise CartanError("w must lie in W0_J")
        if not Ks or Ks[0] != J or Ks[-1] != ():
            raise CartanError("K chain must run from J down to the empty set")
        if any(not set(b) < set(a) for a, b in zip(Ks, Ks[1:])):
            raise CartanError("K chain must be strictly decreasing")
        if len(self.y_chain) != len(Ks) - 1:
            raise CartanError("need one y per chain level")
        ys = (affine.identity(self.cartan),) + self.y_chain
        for i in range(1, len(Ks)):
            if not check_Q(self.cartan, J, self.w, Ks[i - 1], Ks[i], ys[i - 1], ys[i]):
                raise CartanError(f"level {i} violates Q")

    @property
    def cartan(self) -> CartanData:
        return self.w.cartan

    @property
    def n(self) -> int:
        return len(self.K_chain) - 1

    def y(self, i: int) -> AffineWeylElement:
        return affine.identity(self.cartan) if i == 0 else self.y_chain[i - 1]

    def coset_rep(self, i: int) -> FiniteWeylElement:
        return decompose_coset(self.cartan, self.J, self.K_chain[i], self.w)[0]

    @cached_property
    def _C(self) -> Tuple[BiconvexParam, ...]:
        return tuple(
            BiconvexParam(self.J, self.K_chain[i], self.coset_rep(i), self.y(i)) for i in range(self.n + 1)
        )

    def C(self, i: int) -> BiconvexParam:
        """C_i = nabla_J(K_i, w^{K_i}, y_i)."""
        return self._C[i]

    def row_map(self, i: int) -> AffineWeylElement:
        """w^{K_{i-1}} y_{i-1}: carries B_{i-1} onto the row R_i."""
        return affine.from_finite(self.coset_rep(i - 1)) * self.y(i - 1)

    def sort_key(self):
        bits = tuple(sum(1 << (k - 1) for k in K) for K in self.K_chain)
        ys = []
        for K, y in zip(self.K_chain[1:], self.y_chain):
            word = build_subsystem(self.cartan, K).reduced_word(y) if K else ()
            ys.append((len(word), word))
        return (self.n, bits, tuple(ys))

    def to_json(self) -> dict:
        return {
            "J": list(self.J),
            "w_word": list(self.w.reduced_word),
            "K_chain": [list(K) for K in self.K_chain],
            "y_chain": [y.to_json() for y in self.y_chain],
        }

    @classmethod
    def from_json(cls, cartan: CartanData, data: dict) -> "ChainParam":
        w = element_from_word(cartan, data.get("w_word", []))
        ys = tuple(affine.AffineWeylElement.from_json(cartan, y) for y in data["y_chain"])
        return cls(tuple(data["J"]), w, tuple(tuple(K) for K in data["K_chain"]), ys)


def chain_sets(chain: ChainParam, window) -> List[FrozenSet[Root]]:
    """[C_1, ..., C_n] cut at the window."""
    return [nabla_enumerate(chain.C(i), window) for i in range(1, chain.n + 1)]


def extract_B(chain: ChainParam, i: int) -> BiconvexParam:
    """B_{i-1} over K_{i-1} with C_i = C_{i-1} + w^{K_{i-1}} y_{i-1} B_{i-1}."""
    if not 1 <= i <= chain.n:
        raise ValueError(f"level {i} outside 1..{chain.n}")
    c = chain.cartan
    K, L = chain.K_chain[i - 1], chain.K_chain[i]
    y, yi = chain.y(i - 1), chain.y(i)
    wK, w_K = decompose_coset(c, chain.J, K, chain.w)
    wL, _ = decompose_coset(c, chain.J, L, chain.w)
    u1 = wK.inverse * wL
    v = y.finite.inverse * w_K
    vL, _ = decompose_coset(c, K, L, v)
    old = phi_K(c, K, y)
    moved = {Root(b.level, u1(b.finite)) for b in phi_K(c, L, yi)} - old
    back = affine.from_finite(vL.inverse) * y.inverse
    g = from_inversion_set_K(c, L, {affine.act(back, b) for b in moved})
    return BiconvexParam(K, L, vL, g)


def row_sets(rows: "RowParam", window) -> List[FrozenSet[Root]]:
    """[R_1, ..., R_n] cut at the window."""
    cs = chain_sets(rows.chain, window)
    return [c - (cs[i - 1] if i else frozenset()) for i, c in enumerate(cs)]


def enumerate_chains(
    cartan: CartanData, J, w: FiniteWeylElement, bound: int, n: Optional[int] = None
) -> List[ChainParam]:
    """All chains with every l_{K_i}(y_i) <= bound, sorted deterministically."""
    J = _subset(J)
    if n is not None and n > len(J):
        return []
    out: List[ChainParam] = []

    def grow(Ks: List[Subset], ys: List[AffineWeylElement]) -> None:
        K = Ks[-1]
        if not K:
            if n is None or len(Ks) - 1 == n:
                out.append(ChainParam(J, w, tuple(Ks), tuple(ys)))
            return
        if n is not None and len(Ks) - 1 >= n:
            return
        y = ys[-1] if ys else affine.identity(cartan)
        for L in _proper_subsets(K):
            for layer in ball_K(cartan, L, bound):
                for z in layer:
                    if check_Q(cartan, J, w, K, L, y, z):
                        grow(Ks + [L], ys + [z])

    grow([J], [])
    return sorted(out, key=ChainParam.sort_key)


def _proper_subsets(K: Subset) -> List[Subset]:
    out = []
    for mask in range((1 << len(K)) - 1):
        out.append(tuple(k for b, k in enumerate(K) if mask >> b & 1))
    return out


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RowParam:
    """A chain together with words s_0, ..., s_{n-1}; s_{i-1} lives in W_{K_{i-1}}."""

    chain: ChainParam
    words: Tuple[InfiniteWord, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "words", tuple(self.words))
        if len(self.words) != self.chain.n:
            raise CartanError("need one word per row")
        for i, word in enumerate(self.words, start=1):
            if word.subsystem.J != self.chain.K_chain[i - 1]:
                raise CartanError(f"word for row {i} lives in the wrong subsystem")
            expected = extract_B(self.chain, i)
            got = canonical_param(word)
            if (got.K, got.u, got.y) != (expected.K, expected.u, expected.y):
                raise CartanError(f"word for row {i} does not generate B_{i - 1}")

    @property
    def cartan(self) -> CartanData:
        return self.chain.cartan

    @property
    def n(self) -> int:
        return self.chain.n

    def to_json(self) -> dict:
        c = self.cartan
        return {
            "kind": "rows",
            "type": c.type_label,
            "rank": c.rank,
            "chain": self.chain.to_json(),
            "words": [wd.to_json() for wd in self.words],
        }

    @classmethod
    def from_json(cls, cartan: CartanData, data: dict) -> "RowParam":
        chain = ChainParam.from_json(cartan, data["chain"])
        words = tuple(InfiniteWord.from_json(cartan, wd) for wd in data["words"])
        return cls(chain, words)


def row_word(chain: ChainParam, i: int, pairings=None) -> InfiniteWord:
    """A word for B_{i-1}: (v^L g).Z^L_{K_{i-1}}."""
    B = extract_B(chain, i)
    sub = build_subsystem(chain.cartan, B.J)
    x = affine.from_finite(B.u) * B.y
    return act_on_word(x, build_Z(sub, B.K, pairings))


def default_rows(chain: ChainParam) -> RowParam:
    return RowParam(chain, tuple(row_word(chain, i) for i in range(1, chain.n + 1)))


def one_row(cartan: CartanData, J, w: FiniteWeylElement) -> RowParam:
    """The 1-row parameter for Delta_J(w, -) built on Z^{}_J."""
    chain = ChainParam(J, w, (_subset(J), ()), (affine.identity(cartan),))
    return default_rows(chain)


@lru_cache(maxsize=None)
def _chains_cached(cartan: CartanData, J: Subset, w: FiniteWeylElement, bound: int) -> Tuple[ChainParam, ...]:
    return tuple(enumerate_chains(cartan, J, w, bound))


def random_row_param(cartan: CartanData, J, w: FiniteWeylElement, rng: random.Random, bound: int = 2) -> RowParam:
    """A random valid RowParam; word periods come from random lattice points."""
    chain = rng.choice(_chains_cached(cartan, _subset(J), w, bound))
    words = []
    for i in range(1, chain.n + 1):
        B = extract_B(chain, i)
        free = [j for j in B.J if j not in B.K]
        pairings = {j: rng.randint(1, 2) for j in free}
        words.append(row_word(chain, i, pairings))
    return RowParam(chain, tuple(words))
