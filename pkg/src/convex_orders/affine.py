"""Affine roots and the affine Weyl group W = T x W0 of an untwisted affine
root system.

A root m*d + eps is stored as its level m and the integer coordinates of
eps.  An element t_lam w is stored as (lam, w) with lam in simple-root
coordinates; lam lies in the coroot lattice, which makes it integral.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from .cartan import CartanData, FiniteRoot, FiniteWeylElement, is_positive, neg, unit


@dataclass(frozen=True, order=True)
class Root:
    """m*d + eps; ``finite`` holds the coordinates of eps."""

    level: int
    finite: FiniteRoot

    def __add__(self, other: "Root") -> "Root":
        return Root(self.level + other.level, tuple(a + b for a, b in zip(self.finite, other.finite)))

    def __sub__(self, other: "Root") -> "Root":
        return Root(self.level - other.level, tuple(a - b for a, b in zip(self.finite, other.finite)))

    def __neg__(self) -> "Root":
        return Root(-self.level, neg(self.finite))

    def shift(self, m: int) -> "Root":
        return Root(self.level + m, self.finite)

    @property
    def is_imaginary(self) -> bool:
        return not any(self.finite)

    @property
    def is_positive(self) -> bool:
        if self.level:
            return self.level > 0
        return is_positive(self.finite)

    def height(self, cartan: CartanData) -> int:
        return self.level * sum(cartan.labels) + sum(self.finite)

    def __str__(self) -> str:
        return format_root(self)

    def to_json(self) -> dict:
        return {"level": self.level, "finite": list(self.finite)}

    @classmethod
    def from_json(cls, data: dict) -> "Root":
        return cls(int(data["level"]), tuple(int(c) for c in data["finite"]))


def format_root(r: Root) -> str:
    """'2 d + a1 - 3 a2' style text."""
    parts: List[str] = []
    if r.level:
        parts.append(f"{r.level} d")
    for i, c in enumerate(r.finite, start=1):
        if not c:
            continue
        mag = "" if abs(c) == 1 else f"{abs(c)} "
        if parts:
            parts.append(("+ " if c > 0 else "- ") + f"{mag}a{i}")
        else:
            parts.append(("" if c > 0 else "-") + f"{mag}a{i}")
    return " ".join(parts) if parts else "0"


def is_real_root(cartan: CartanData, r: Root) -> bool:
    return r.finite in cartan.roots


def is_root(cartan: CartanData, r: Root) -> bool:
    return is_real_root(cartan, r) or (r.is_imaginary and r.level != 0)


def simple_affine_roots(cartan: CartanData) -> Tuple[Root, ...]:
    """(a_0, a_1, ..., a_l) with a_0 = d - theta."""
    n = cartan.rank
    return (Root(1, neg(cartan.highest_root)),) + tuple(Root(0, unit(n, i)) for i in range(n))


def display_key(r: Root):
    """Level, then height, then a1 before a2."""
    return (r.level, sum(r.finite), tuple(-c for c in r.finite))


def positive_roots(cartan: CartanData, max_level: int, real_only: bool = False) -> List[Root]:
    """Positive roots of level <= max_level, sorted by display_key."""
    out = [Root(0, r) for r in cartan.positive_roots]
    for m in range(1, max_level + 1):
        out.extend(Root(m, r) for r in sorted(cartan.roots))
        if not real_only:
            out.append(Root(m, (0,) * cartan.rank))
    return sorted(out, key=display_key)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AffineWeylElement:
    """t_lam w with x(m d + eps) = (m - (w eps|lam)) d + w eps."""

    translation: Tuple[int, ...]
    finite: FiniteWeylElement
    cartan: CartanData = field(compare=False, repr=False)

    def __post_init__(self) -> None:
        # lam must lie in the coroot lattice
        for c, s in zip(self.translation, self.cartan.coroot_scale):
            if c % s:
                raise ValueError(f"translation {self.translation} is not in the coroot lattice")

    @cached_property
    def _pairing(self) -> Tuple[int, ...]:
        out = []
        for v in self.cartan.pairing_vector(self.translation):
            assert v.denominator == 1
            out.append(int(v))
        return tuple(out)

    def __mul__(self, other: "AffineWeylElement") -> "AffineWeylElement":
        moved = self.finite(other.translation)
        lam = tuple(a + b for a, b in zip(self.translation, moved))
        return AffineWeylElement(lam, self.finite * other.finite, self.cartan)

    @cached_property
    def inverse(self) -> "AffineWeylElement":
        wi = self.finite.inverse
        return AffineWeylElement(neg(wi(self.translation)), wi, self.cartan)

    def __call__(self, beta: Root) -> Root:
        return act(self, beta)

    def is_identity(self) -> bool:
        return not any(self.translation) and self.finite.is_identity()

    @property
    def is_translation(self) -> bool:
        return self.finite.is_identity()

    def to_json(self) -> dict:
        return {
            "translation": [str(Fraction(c)) for c in self.translation],
            "finite_matrix": self.finite.to_json(),
        }

    @classmethod
    def from_json(cls, cartan: CartanData, data: dict) -> "AffineWeylElement":
        lam = []
        for c in data["translation"]:
            f = Fraction(c)
            if f.denominator != 1:
                raise ValueError(f"translation coordinate {c} is not integral")
            lam.append(int(f))
        mat = tuple(tuple(int(v) for v in row) for row in data["finite_matrix"])
        if len(lam) != cartan.rank or len(mat) != cartan.rank:
            raise ValueError("dimension mismatch with the Cartan data")
        fin = FiniteWeylElement(mat, cartan)
        if not _preserves_roots(fin):
            raise ValueError("finite_matrix is not a Weyl group element")
        return cls(tuple(lam), fin, cartan)


def _preserves_roots(w: FiniteWeylElement) -> bool:
    roots = w.cartan.roots
    return all(w(r) in roots for r in roots)


def act(x: AffineWeylElement, beta: Root) -> Root:
    eps = x.finite(beta.finite)
    shift = sum(a * b for a, b in zip(eps, x._pairing))
    return Root(beta.level - shift, eps)


def identity(cartan: CartanData) -> AffineWeylElement:
    return AffineWeylElement((0,) * cartan.rank, cartan.identity(), cartan)


def translation(cartan: CartanData, lam: Sequence[int]) -> AffineWeylElement:
    return AffineWeylElement(tuple(int(c) for c in lam), cartan.identity(), cartan)


def from_finite(w: FiniteWeylElement) -> AffineWeylElement:
    return AffineWeylElement((0,) * w.cartan.rank, w, w.cartan)


def reflection(cartan: CartanData, root: Root) -> AffineWeylElement:
    """s_{n d + a} = t_{-n a^vee} s_a."""
    coroot = cartan.coroot(root.finite)
    lam = tuple(-root.level * c for c in coroot)
    assert all(Fraction(c).denominator == 1 for c in lam)
    return AffineWeylElement(tuple(int(c) for c in lam), cartan.reflection(root.finite), cartan)


def simple_reflection(cartan: CartanData, i: int) -> AffineWeylElement:
    if not 0 <= i <= cartan.rank:
        raise ValueError(f"generator index {i} outside 0..{cartan.rank}")
    return reflection(cartan, simple_affine_roots(cartan)[i])


# ---------------------------------------------------------------------------
# descent machinery shared with subsystems


def greedy_descent(x: AffineWeylElement, roots: Sequence[Root], gens: Sequence[AffineWeylElement]):
    """Peel lowest-index left descents off x.

    Returns (word, residue) with x = gens[word[0]] ... gens[word[-1]] * residue;
    residue is the identity exactly when x lies in the group generated.
    """
    word: List[int] = []
    xi = x.inverse
    while True:
        for k, alpha in enumerate(roots):
            if not act(xi, alpha).is_positive:
                word.append(k)
                xi = xi * gens[k]
                break
        else:
            return tuple(word), xi.inverse


def product(cartan: CartanData, gens: Sequence[AffineWeylElement], word: Iterable[int]) -> AffineWeylElement:
    x = identity(cartan)
    for k in word:
        x = x * gens[k]
    return x


def partial_products_phi(
    cartan: CartanData, roots: Sequence[Root], gens: Sequence[AffineWeylElement], word: Iterable[int]
) -> Iterator[Root]:
    """phi(p) = s(1)...s(p-1)(alpha_{s(p)}) along the word."""
    z = identity(cartan)
    for k in word:
        yield act(z, roots[k])
        z = z * gens[k]


@lru_cache(maxsize=None)
def _ambient(cartan: CartanData):
    roots = simple_affine_roots(cartan)
    gens = [reflection(cartan, r) for r in roots]
    return roots, gens


def reduced_word(x: AffineWeylElement) -> Tuple[int, ...]:
    """Reduced word in the generators s_0..s_l (lowest-index descent first)."""
    roots, gens = _ambient(x.cartan)
    word, rest = greedy_descent(x, roots, gens)
    assert rest.is_identity()
    return word


def length(x: AffineWeylElement) -> int:
    return len(reduced_word(x))


def element_from_word(cartan: CartanData, word: Iterable[int]) -> AffineWeylElement:
    _, gens = _ambient(cartan)
    return product(cartan, gens, word)


def inversion_set(x: AffineWeylElement) -> FrozenSet[Root]:
    """Phi(x) via partial products of a reduced word."""
    roots, gens = _ambient(x.cartan)
    return frozenset(partial_products_phi(x.cartan, roots, gens, reduced_word(x)))


def inversion_set_filter(x: AffineWeylElement, max_level: int) -> FrozenSet[Root]:
    """Phi(x) by brute force over positive real roots of level <= max_level."""
    xi = x.inverse
    return frozenset(b for b in positive_roots(x.cartan, max_level, real_only=True) if not act(xi, b).is_positive)


def level_shift_bound(x: AffineWeylElement) -> int:
    """max |level(x b) - level(b)| over real roots b."""
    return max(abs(act(x, Root(0, r)).level) for r in x.cartan.roots)


def ball(cartan: CartanData, radius: int, gens: Optional[Sequence[AffineWeylElement]] = None) -> List[List[AffineWeylElement]]:
    """Elements grouped by length 0..radius (Cayley-graph BFS)."""
    if gens is None:
        gens = _ambient(cartan)[1]
    layers = [[identity(cartan)]]
    seen = {layers[0][0]}
    for _ in range(radius):
        nxt = []
        for x in layers[-1]:
            for s in gens:
                y = x * s
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        layers.append(nxt)
    return layers
