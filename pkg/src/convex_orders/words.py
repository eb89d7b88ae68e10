"""Infinite reduced words of a subsystem W_J, kept as eventually periodic
sequences (prefix, period) whose period multiplies to a translation.

Past the prefix, phi(p + n) = phi(p) + c_r d with n the period length and
c_r > 0 depending only on the residue r of p.  Every residue class is an
arithmetic progression inside one slice <eps>, which makes membership and
indexing exact.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from math import lcm
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from . import affine
from .affine import AffineWeylElement, Root, act
from .biconvex import BiconvexParam, _as_window
from .cartan import CartanError, FiniteRoot, finite_from_inversions, is_negative, is_positive, neg, subsystem_root_set
from .subsys import NotAnInversionSet, Subsystem, build_subsystem, from_inversion_set_K, lattice_element


class WordError(ValueError):
    """The sequence is not an infinite reduced word (``p`` names the failing position)."""

    def __init__(self, message: str, p: Optional[int] = None):
        super().__init__(message if p is None else f"{message} (at p={p})")
        self.p = p


@dataclass(frozen=True)
class Progression:
    """phi(first + k n) = base + k*step*d for k >= 0."""

    first: int
    base: Root
    step: int


@dataclass(frozen=True)
class InfiniteWord:
    """s(1) s(2) ... = prefix followed by period repeated forever.

    Letters index ``subsystem.pi``.  On construction the period is repeated
    until its product is a translation.
    """

    subsystem: Subsystem
    prefix: Tuple[int, ...]
    period: Tuple[int, ...]
    certified_depth: int = field(default=0, compare=False)

    def __post_init__(self) -> None:
        prefix = tuple(int(k) for k in self.prefix)
        period = tuple(int(k) for k in self.period)
        if not period:
            raise WordError("period must be non-empty")
        sub = self.subsystem
        if any(not 0 <= k < sub.rank for k in prefix + period):
            raise WordError("letter outside the subsystem generators")
        block = sub.product(period)
        x, reps = block, 1
        while not x.is_translation:
            x, reps = x * block, reps + 1
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "period", period * reps)

    # -- products ----------------------------------------------------------
    @cached_property
    def _prefix_products(self) -> List[AffineWeylElement]:
        sub = self.subsystem
        z = [affine.identity(sub.cartan)]
        for k in self.prefix:
            z.append(z[-1] * sub.generators[k])
        return z

    @cached_property
    def _period_products(self) -> List[AffineWeylElement]:
        sub = self.subsystem
        q = [affine.identity(sub.cartan)]
        for k in self.period:
            q.append(q[-1] * sub.generators[k])
        return q

    @property
    def base_period(self) -> int:
        """Length of the shortest block whose repetition gives the period."""
        n = len(self.period)
        for d in range(1, n + 1):
            if n % d == 0 and self.period == self.period[:d] * (n // d):
                return d
        return n

    @property
    def period_translation(self) -> Tuple[int, ...]:
        return self._period_products[-1].translation

    def letter(self, p: int) -> int:
        """s(p), 1-based."""
        if p < 1:
            raise ValueError("positions start at 1")
        a = len(self.prefix)
        if p <= a:
            return self.prefix[p - 1]
        return self.period[(p - a - 1) % len(self.period)]

    def z(self, p: int) -> AffineWeylElement:
        """z(p) = s(1) ... s(p)."""
        a, n = len(self.prefix), len(self.period)
        if p <= a:
            return self._prefix_products[p]
        q, r = divmod(p - a, n)
        mu = self.period_translation
        t = affine.translation(self.subsystem.cartan, tuple(q * c for c in mu))
        return self._prefix_products[a] * t * self._period_products[r]

    def phi(self, p: int) -> Root:
        """phi(p) = z(p-1)(alpha_{s(p)})."""
        return act(self.z(p - 1), self.subsystem.pi[self.letter(p)])

    def head(self, count: int) -> List[Root]:
        return [self.phi(p) for p in range(1, count + 1)]

    # -- periodic structure ----------------------------------------------------
    @cached_property
    def progressions(self) -> Tuple[Progression, ...]:
        a, n = len(self.prefix), len(self.period)
        out = []
        for r in range(n):
            b0, b1 = self.phi(a + 1 + r), self.phi(a + 1 + r + n)
            assert b0.finite == b1.finite
            out.append(Progression(a + 1 + r, b0, b1.level - b0.level))
        return tuple(out)

    @cached_property
    def _prefix_phi(self) -> Dict[Root, int]:
        return {self.phi(p): p for p in range(1, len(self.prefix) + 1)}

    @cached_property
    def fully_reduced(self) -> bool:
        """True when phi(p) > 0 for every p (finite certificate)."""
        a, n = len(self.prefix), len(self.period)
        if any(not self.phi(p).is_positive for p in range(1, a + n + 1)):
            return False
        return all(pr.step > 0 for pr in self.progressions)

    @property
    def slices(self) -> FrozenSet[FiniteRoot]:
        """Finite parts eps whose slice <eps> is eventually inside Phi^infty."""
        return frozenset(pr.base.finite for pr in self.progressions)

    # -- serialisation -----------------------------------------------------------
    def to_json(self) -> dict:
        sub = self.subsystem
        return {
            "J": list(sub.J),
            "prefix": [sub.gen_name(k) for k in self.prefix],
            "period": [sub.gen_name(k) for k in self.period],
        }

    @classmethod
    def from_json(cls, cartan, data: Mapping) -> "InfiniteWord":
        sub = build_subsystem(cartan, data["J"])
        prefix = tuple(sub.parse_gen(t) for t in data.get("prefix", []))
        period = tuple(sub.parse_gen(t) for t in data["period"])
        return cls(sub, prefix, period)

    def __str__(self) -> str:
        sub = self.subsystem
        pre = " ".join(sub.gen_name(k) for k in self.prefix)
        per = " ".join(sub.gen_name(k) for k in self.period)
        return f"{pre} ({per})^inf".strip()


def word_prefix_products(word: InfiniteWord, p: int) -> Tuple[AffineWeylElement, Root]:
    if p < 1:
        raise ValueError("p must be positive")
    return word.z(p), word.phi(p)


def validate_word(word: InfiniteWord, depth: Optional[int] = None) -> InfiniteWord:
    """Check positivity and distinctness of phi up to ``depth``.

    The periodic certificate then extends reducedness to every depth.
    """
    a, n = len(word.prefix), len(word.period)
    minimum = a + 2 * word.base_period
    depth = minimum if depth is None else depth
    if depth < minimum:
        raise ValueError(f"depth must be at least |prefix| + 2|period| = {minimum}")
    seen = set()
    for p in range(1, depth + 1):
        b = word.phi(p)
        if not b.is_positive:
            raise WordError(f"phi({p}) = {b} is not positive", p)
        if b in seen:
            raise WordError(f"phi({p}) = {b} repeats", p)
        seen.add(b)
    if word.subsystem.length(word.z(minimum)) != minimum:
        raise WordError("prefix product is not reduced", minimum)
    if not word.fully_reduced:
        bad = next(pr for pr in word.progressions if pr.step <= 0)
        raise WordError("period does not raise levels", bad.first + n)
    return replace(word, certified_depth=depth)


def phi_infty_membership(word: InfiniteWord, beta: Root) -> bool:
    try:
        word_index(word, beta)
    except KeyError:
        return False
    return True


def word_index(word: InfiniteWord, beta: Root) -> int:
    """The p with phi(p) = beta; KeyError for non-members."""
    p = word._prefix_phi.get(beta)
    if p is not None:
        return p
    n = len(word.period)
    for pr in word.progressions:
        if pr.base.finite == beta.finite:
            d = beta.level - pr.base.level
            if d >= 0 and pr.step > 0 and d % pr.step == 0:
                return pr.first + (d // pr.step) * n
    raise KeyError(f"{beta} is not in Phi^infty of the word")


def phi_infty_enumerate(word: InfiniteWord, window) -> List[Root]:
    """Members of level <= D, in word order."""
    D = _as_window(window).max_level
    found = []
    for b, p in word._prefix_phi.items():
        if b.level <= D:
            found.append((p, b))
    n = len(word.period)
    for pr in word.progressions:
        if pr.step <= 0:
            raise WordError("word is not reduced", pr.first + n)
        k = 0
        while pr.base.level + k * pr.step <= D:
            found.append((pr.first + k * n, pr.base.shift(k * pr.step)))
            k += 1
    return [b for _, b in sorted(found)]


def letters_from_sequence(sub: Subsystem, roots: Iterable[Root]) -> Tuple[int, ...]:
    """Recover s(1), s(2), ... from phi(1), phi(2), ..."""
    z = affine.identity(sub.cartan)
    out = []
    for p, b in enumerate(roots, start=1):
        alpha = act(z.inverse, b)
        if alpha not in sub.pi:
            raise WordError(f"{b} is not z(p-1) of a simple root", p)
        k = sub.pi.index(alpha)
        out.append(k)
        z = z * sub.generators[k]
    return tuple(out)


# ---------------------------------------------------------------------------
# canonical parameters and the W-action


def _slice_covered(word: InfiniteWord, eps: FiniteRoot) -> bool:
    prs = [pr for pr in word.progressions if pr.base.finite == eps]
    extra = {b.level for b in word._prefix_phi if b.finite == eps}
    start = 0 if is_positive(eps) else 1
    top = max([pr.base.level for pr in prs] + list(extra) + [start])
    span = lcm(*(pr.step for pr in prs))

    def covered(m: int) -> bool:
        return m in extra or any(m >= pr.base.level and (m - pr.base.level) % pr.step == 0 for pr in prs)

    return all(covered(m) for m in range(start, top + span + 1))


def canonical_param(word: InfiniteWord) -> BiconvexParam:
    """The (K, u, y) with Phi^infty(word) = nabla_J(K, u, y)."""
    if not word.fully_reduced:
        raise WordError("word is not reduced")
    sub = word.subsystem
    cartan = sub.cartan
    roots_J = subsystem_root_set(cartan, sub.J)
    P = word.slices
    if not P <= roots_J or any(neg(e) in P for e in P):
        raise NotAnInversionSet("not an infinite reduced word's inversion set")
    for eps in P:
        if not _slice_covered(word, eps):
            raise NotAnInversionSet("not an infinite reduced word's inversion set")
    R = roots_J - P - {neg(e) for e in P}
    N = P | {e for e in R if is_negative(e)}
    try:
        u = finite_from_inversions(cartan, {e for e in N if is_positive(e)})
    except CartanError:
        raise NotAnInversionSet("not an infinite reduced word's inversion set") from None
    if {u(e) for e in roots_J if is_negative(e)} != N:
        raise NotAnInversionSet("not an infinite reduced word's inversion set")
    n = cartan.rank
    K = tuple(j for j in sub.J if u(tuple(int(i == j - 1) for i in range(n))) in R)
    if {u(e) for e in subsystem_root_set(cartan, K)} != R:
        raise NotAnInversionSet("not an infinite reduced word's inversion set")
    ui = u.inverse
    residue = {Root(b.level, ui(b.finite)) for b in word._prefix_phi if b.finite not in P}
    y = from_inversion_set_K(cartan, K, residue)
    return BiconvexParam(sub.J, K, u, y)


def build_Z(sub: Subsystem, K: Iterable[int] = (), pairings: Optional[Mapping[int, int]] = None) -> InfiniteWord:
    """Z^K_J: the reduced word of t_lam repeated, with lam from lattice_element."""
    lam = lattice_element(sub, pairings, K)
    t = affine.translation(sub.cartan, lam)
    return validate_word(InfiniteWord(sub, (), sub.reduced_word(t)))


def act_on_word(x: AffineWeylElement, word: InfiniteWord) -> InfiniteWord:
    """x.s: a word with Phi^infty equal to that of (x, s)."""
    sub = word.subsystem
    if not sub.member(x):
        raise CartanError("x must lie in W_J")
    a, n = len(word.prefix), len(word.period)
    p0 = a
    for b in sub.phi(x.inverse):
        try:
            p0 = max(p0, word_index(word, b))
        except KeyError:
            pass
    new_prefix = sub.reduced_word(x * word.z(p0))
    shift = (p0 - a) % n
    new_period = word.period[shift:] + word.period[:shift]
    return validate_word(InfiniteWord(sub, new_prefix, new_period))


def chi(sub: Subsystem, param: BiconvexParam, pairings: Optional[Mapping[int, int]] = None) -> InfiniteWord:
    """A word for nabla_J(K, u, y): (u y).Z^K_J."""
    if param.J != sub.J:
        raise CartanError("parameter lives over a different J")
    x = affine.from_finite(param.u) * param.y
    return act_on_word(x, build_Z(sub, param.K, pairings))
