"""Coxeter subsystems (W_J, S_J) attached to non-empty J in the finite index
set.  Each irreducible component J_c contributes its simple roots and the
extra root d - theta_c.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import lcm
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from . import affine
from .affine import AffineWeylElement, Root, act
from .cartan import CartanData, CartanError, FiniteRoot, in_parabolic, neg, solve_rational, subsystem_roots, unit


class NotInSubsystem(ValueError):
    """The element does not lie in W_J."""


class NotAnInversionSet(ValueError):
    """The finite set is not Phi_J(y) for any y."""


@dataclass(frozen=True)
class Subsystem:
    cartan: CartanData
    J: Tuple[int, ...]
    components: Tuple[Tuple[Tuple[int, ...], FiniteRoot], ...]
    pi: Tuple[Root, ...]
    generators: Tuple[AffineWeylElement, ...] = field(repr=False, compare=False)

    @property
    def rank(self) -> int:
        return len(self.pi)

    @cached_property
    def finite_roots(self) -> FrozenSet[FiniteRoot]:
        return subsystem_roots(self.cartan, self.J)[0]

    @cached_property
    def lattice_basis(self) -> Tuple[Tuple[Fraction, ...], ...]:
        return tuple(self.cartan.coroot(unit(self.cartan.rank, j - 1)) for j in self.J)

    def index(self, alpha: Root) -> int:
        return self.pi.index(alpha)

    def contains(self, beta: Root) -> bool:
        """beta in Delta^re_J (finite part a root of J)."""
        return beta.finite in self.finite_roots

    def positive_roots(self, max_level: int) -> List[Root]:
        return [b for b in affine.positive_roots(self.cartan, max_level, real_only=True) if self.contains(b)]

    # -- words -------------------------------------------------------------
    def reduced_word(self, y: AffineWeylElement) -> Tuple[int, ...]:
        word, rest = affine.greedy_descent(y, self.pi, self.generators)
        if not rest.is_identity():
            raise NotInSubsystem(f"element not in subsystem W_{set(self.J)}")
        return word

    def length(self, y: AffineWeylElement) -> int:
        return len(self.reduced_word(y))

    def product(self, word: Iterable[int]) -> AffineWeylElement:
        return affine.product(self.cartan, self.generators, word)

    def phi(self, y: AffineWeylElement) -> FrozenSet[Root]:
        return frozenset(affine.partial_products_phi(self.cartan, self.pi, self.generators, self.reduced_word(y)))

    def phi_of_word(self, word: Sequence[int]) -> List[Root]:
        return list(affine.partial_products_phi(self.cartan, self.pi, self.generators, word))

    def member(self, y: AffineWeylElement) -> bool:
        if not in_parabolic(y.finite, self.J):
            return False
        try:
            self.reduced_word(y)
        except NotInSubsystem:
            return False
        return True

    def from_inversion_set(self, roots: Iterable[Root]) -> AffineWeylElement:
        """The unique y in W_J with Phi_J(y) equal to the given finite set."""
        target = frozenset(roots)
        remaining = set(target)
        word: List[int] = []
        while remaining:
            for k, alpha in enumerate(self.pi):
                if alpha in remaining:
                    break
            else:
                raise NotAnInversionSet("no simple root of the subsystem in the set")
            s = self.generators[k]
            remaining.discard(alpha)
            remaining = {act(s, b) for b in remaining}
            if any(not b.is_positive for b in remaining):
                raise NotAnInversionSet("reflection produced a negative root")
            word.append(k)
        y = self.product(word)
        if self.phi(y) != target:
            raise NotAnInversionSet("set is not the inversion set of its candidate element")
        return y

    def ball(self, radius: int) -> List[List[AffineWeylElement]]:
        return affine.ball(self.cartan, radius, self.generators)

    # -- naming ---------------------------------------------------------------
    def gen_name(self, k: int) -> str:
        r = self.pi[k]
        return f"s({r.level};{','.join(str(c) for c in r.finite)})"

    def parse_gen(self, token) -> int:
        if isinstance(token, int):
            if not 0 <= token < self.rank:
                raise ValueError(f"generator index {token} out of range")
            return token
        m = re.fullmatch(r"\s*s\(\s*(-?\d+)\s*;\s*([-\d,\s]+)\)\s*", str(token).replace("−", "-"))
        if not m:
            raise ValueError(f"cannot parse generator {token!r}")
        r = Root(int(m.group(1)), tuple(int(c) for c in m.group(2).split(",")))
        if r not in self.pi:
            raise ValueError(f"{token!r} is not a simple root of the subsystem")
        return self.pi.index(r)

    def to_json(self) -> dict:
        return {
            "J": list(self.J),
            "pi": [r.to_json() for r in self.pi],
            "generators": [g.to_json() for g in self.generators],
        }


@lru_cache(maxsize=None)
def _build(cartan: CartanData, J: Tuple[int, ...]) -> Subsystem:
    _, comps = subsystem_roots(cartan, J)
    pi: List[Root] = []
    for Jc, theta in comps:
        pi.append(Root(1, neg(theta)))
        pi.extend(Root(0, unit(cartan.rank, j - 1)) for j in Jc)
    gens = tuple(affine.reflection(cartan, r) for r in pi)
    return Subsystem(cartan, J, tuple(comps), tuple(pi), gens)


def build_subsystem(cartan: CartanData, J: Iterable[int]) -> Subsystem:
    J = tuple(sorted(set(J)))
    if not J:
        raise CartanError("J must be non-empty; W_emptyset is trivial")
    return _build(cartan, J)


def subsystem_length(sub: Subsystem, y: AffineWeylElement) -> int:
    return sub.length(y)


def phi_J(sub: Subsystem, y: AffineWeylElement) -> FrozenSet[Root]:
    return sub.phi(y)


def phi_K(cartan: CartanData, K: Iterable[int], y: AffineWeylElement) -> FrozenSet[Root]:
    """Phi_K(y), allowing K empty (then y must be 1)."""
    K = tuple(sorted(set(K)))
    if not K:
        if not y.is_identity():
            raise NotInSubsystem("W_emptyset is trivial")
        return frozenset()
    return build_subsystem(cartan, K).phi(y)


def length_K(cartan: CartanData, K: Iterable[int], y: AffineWeylElement) -> int:
    K = tuple(sorted(set(K)))
    if not K:
        if not y.is_identity():
            raise NotInSubsystem("W_emptyset is trivial")
        return 0
    return build_subsystem(cartan, K).length(y)


def from_inversion_set_K(cartan: CartanData, K: Iterable[int], roots: Iterable[Root]) -> AffineWeylElement:
    roots = frozenset(roots)
    K = tuple(sorted(set(K)))
    if not K:
        if roots:
            raise NotAnInversionSet("W_emptyset has no inversions")
        return affine.identity(cartan)
    return build_subsystem(cartan, K).from_inversion_set(roots)


def ball_K(cartan: CartanData, K: Iterable[int], radius: int) -> List[List[AffineWeylElement]]:
    K = tuple(sorted(set(K)))
    if not K:
        return [[affine.identity(cartan)]] + [[] for _ in range(radius)]
    return build_subsystem(cartan, K).ball(radius)


def lattice_element(sub: Subsystem, pairings: Optional[Mapping[int, int]] = None, K: Iterable[int] = ()) -> Tuple[int, ...]:
    """lam in M_J with (a_j|lam) > 0 off K and (a_k|lam) = 0 on K.

    ``pairings`` gives the positive targets for j in J minus K (default 1);
    the exact solution is scaled into the lattice.
    """
    c = sub.cartan
    K = set(K)
    if not K <= set(sub.J):
        raise CartanError("K must be a subset of J")
    if K == set(sub.J):
        raise CartanError("K = J admits no such lam")
    targets: Dict[int, Fraction] = {}
    for j in sub.J:
        if j in K:
            targets[j] = Fraction(0)
        else:
            t = Fraction(1 if pairings is None else pairings.get(j, 1))
            if t <= 0:
                raise CartanError("pairing targets must be positive")
            targets[j] = t
    a = c.cartan_matrix
    # (a_i | sum_j c_j a_j^vee) = sum_j c_j a_ji
    system = [[a[j - 1][i - 1] for j in sub.J] for i in sub.J]
    coeffs = solve_rational(system, [targets[i] for i in sub.J])
    scale = lcm(*(x.denominator for x in coeffs))
    lam = [0] * c.rank
    for j, x in zip(sub.J, coeffs):
        lam[j - 1] = int(x * scale) * c.coroot_scale[j - 1]
    return tuple(lam)
