"""Finite root systems: Cartan data, roots, the finite Weyl group and its
parabolic subgroups.

Roots are integer tuples over the simple roots.  Weyl group elements are
integer matrices acting on those coordinates (column convention), so
equality is plain tuple equality.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

FiniteRoot = Tuple[int, ...]
Matrix = Tuple[Tuple[int, ...], ...]


class CartanError(ValueError):
    """Invalid Cartan type or parabolic data."""


# ---------------------------------------------------------------------------
# exact linear algebra helpers


def solve_rational(a: Sequence[Sequence], b: Sequence) -> List[Fraction]:
    """Solve the square system a x = b exactly (Gauss-Jordan over Q)."""
    n = len(a)
    m = [[Fraction(v) for v in row] + [Fraction(rhs)] for row, rhs in zip(a, b)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            raise CartanError("singular system")
        m[col], m[pivot] = m[pivot], m[col]
        inv = 1 / m[col][col]
        m[col] = [v * inv for v in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def mat_vec(a: Matrix, v: Sequence[int]) -> Tuple[int, ...]:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def identity_matrix(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


# ---------------------------------------------------------------------------
# Cartan matrices (Bourbaki numbering, a_ij = 2(a_i|a_j)/(a_i|a_i))

_VALID_RANKS = {
    "A": lambda l: l >= 1,
    "B": lambda l: l >= 2,
    "C": lambda l: l >= 2,
    "D": lambda l: l >= 4,
    "E": lambda l: l in (6, 7, 8),
    "F": lambda l: l == 4,
    "G": lambda l: l == 2,
}


def _cartan_matrix(t: str, l: int) -> List[List[int]]:
    a = [[2 if i == j else 0 for j in range(l)] for i in range(l)]

    def link(i: int, j: int, aij: int = -1, aji: int = -1) -> None:
        a[i][j], a[j][i] = aij, aji

    if t in "ABC":
        for i in range(l - 1):
            link(i, i + 1)
        if t == "B":
            link(l - 2, l - 1, -1, -2)
        elif t == "C":
            link(l - 2, l - 1, -2, -1)
    elif t == "D":
        for i in range(l - 2):
            link(i, i + 1)
        link(l - 3, l - 1)
    elif t == "E":
        link(0, 2)
        link(1, 3)
        for i in range(2, l - 1):
            link(i, i + 1)
    elif t == "F":
        link(0, 1)
        link(1, 2, -1, -2)
        link(2, 3)
    elif t == "G":
        link(0, 1, -3, -1)
    return a


@dataclass(frozen=True)
class CartanData:
    """Cartan data of a finite type X_l, i.e. of the affine type X_l^(1)."""

    type_label: str
    rank: int
    cartan_matrix: Matrix
    labels: Tuple[int, ...]
    gram: Tuple[Tuple[Fraction, ...], ...] = field(repr=False)

    # -- forms -------------------------------------------------------------
    def form(self, u: Sequence, v: Sequence) -> Fraction:
        """(u|v) for vectors in simple-root coordinates."""
        g = self.gram
        return sum(
            (u[i] * g[i][j] * v[j] for i in range(self.rank) if u[i] for j in range(self.rank) if v[j]),
            Fraction(0),
        )

    def pairing_vector(self, lam: Sequence) -> Tuple[Fraction, ...]:
        """The covector G lam, so that (eps|lam) = eps . (G lam)."""
        return tuple(sum((self.gram[i][j] * lam[j] for j in range(self.rank)), Fraction(0)) for i in range(self.rank))

    @cached_property
    def coroot_scale(self) -> Tuple[int, ...]:
        """2/(a_i|a_i); the simple coroot is coroot_scale[i] * a_i."""
        out = []
        for i in range(self.rank):
            s = Fraction(2) / self.gram[i][i]
            assert s.denominator == 1
            out.append(int(s))
        return tuple(out)

    def coroot(self, root: FiniteRoot) -> Tuple[Fraction, ...]:
        n = self.form(root, root)
        return tuple(Fraction(2 * c) / n for c in root)

    def coxeter_pairing(self, v: Sequence[int], root: FiniteRoot) -> int:
        """2(v|root)/(root|root), an integer for v in the root lattice."""
        q = 2 * self.form(v, root) / self.form(root, root)
        assert q.denominator == 1
        return int(q)

    # -- roots ---------------------------------------------------------------
    @cached_property
    def roots(self) -> FrozenSet[FiniteRoot]:
        return frozenset(enumerate_finite_roots(self))

    @cached_property
    def positive_roots(self) -> Tuple[FiniteRoot, ...]:
        return tuple(sorted(r for r in self.roots if is_positive(r)))

    @cached_property
    def simple_roots(self) -> Tuple[FiniteRoot, ...]:
        return tuple(unit(self.rank, i) for i in range(self.rank))

    @cached_property
    def highest_root(self) -> FiniteRoot:
        return tuple(self.labels[1:])

    def height(self, root: FiniteRoot) -> int:
        return sum(root)

    # -- Weyl group ----------------------------------------------------------
    @cached_property
    def _gram_inverse(self) -> List[List[Fraction]]:
        n = self.rank
        cols = [solve_rational(self.gram, unit(n, j)) for j in range(n)]
        return [[cols[j][i] for j in range(n)] for i in range(n)]

    def identity(self) -> "FiniteWeylElement":
        return FiniteWeylElement(identity_matrix(self.rank), self)

    def simple_reflection(self, i: int) -> "FiniteWeylElement":
        """s_i for i in 1..l (1-based, as in the finite index set)."""
        return self._simple_reflections[i - 1]

    @cached_property
    def _simple_reflections(self) -> Tuple["FiniteWeylElement", ...]:
        return tuple(self.reflection(unit(self.rank, i)) for i in range(self.rank))

    def reflection(self, root: FiniteRoot) -> "FiniteWeylElement":
        n = self.rank
        cols = []
        for j in range(n):
            e = unit(n, j)
            c = self.coxeter_pairing(e, root)
            cols.append(tuple(e[k] - c * root[k] for k in range(n)))
        return FiniteWeylElement(tuple(zip(*cols)), self)

    def to_json(self) -> dict:
        return {
            "type": self.type_label,
            "rank": self.rank,
            "cartan": [list(r) for r in self.cartan_matrix],
            "labels": list(self.labels),
        }


def unit(n: int, i: int) -> Tuple[int, ...]:
    return tuple(int(k == i) for k in range(n))


def is_positive(root: Sequence[int]) -> bool:
    """Sign of a nonzero finite root (all coefficients share a sign)."""
    return any(c > 0 for c in root) and all(c >= 0 for c in root)


def is_negative(root: Sequence[int]) -> bool:
    return any(c < 0 for c in root) and all(c <= 0 for c in root)


def neg(root: Sequence[int]) -> Tuple[int, ...]:
    return tuple(-c for c in root)


@lru_cache(maxsize=None)
def build_cartan(type_label: str, rank: int) -> CartanData:
    """Cartan data of X_l with the gram matrix normalised so (theta|theta) = 2."""
    t = str(type_label).upper()
    if t not in _VALID_RANKS or not isinstance(rank, int) or not _VALID_RANKS[t](rank):
        raise CartanError(f"no finite type {type_label}_{rank}")
    a = _cartan_matrix(t, rank)
    # symmetrise: d_i a_ij = d_j a_ji with d_i = (a_i|a_i)/2
    d: Dict[int, Fraction] = {0: Fraction(1)}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j in range(rank):
            if a[i][j] and j not in d:
                d[j] = d[i] * a[i][j] / a[j][i]
                queue.append(j)
    top = max(d.values())
    d = {i: v / top for i, v in d.items()}
    gram = tuple(tuple(d[i] * a[i][j] for j in range(rank)) for i in range(rank))
    matrix = tuple(tuple(r) for r in a)
    provisional = CartanData(t, rank, matrix, (1,) * (rank + 1), gram)
    theta = max(provisional.roots, key=sum)
    data = CartanData(t, rank, matrix, (1,) + theta, gram)
    assert data.form(theta, theta) == 2
    return data


def enumerate_finite_roots(cartan: CartanData) -> FrozenSet[FiniteRoot]:
    """Close the simple roots under simple reflections."""
    n = cartan.rank
    a = cartan.cartan_matrix
    seen = set(unit(n, i) for i in range(n))
    queue = deque(seen)
    while queue:
        v = queue.popleft()
        for i in range(n):
            c = sum(v[j] * a[i][j] for j in range(n))
            if c:
                w = tuple(v[k] - c * (k == i) for k in range(n))
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    return frozenset(seen)


# ---------------------------------------------------------------------------
# finite Weyl group


@dataclass(frozen=True)
class FiniteWeylElement:
    """Element of the finite Weyl group as a matrix on simple-root coordinates."""

    matrix: Matrix
    cartan: CartanData = field(compare=False, repr=False)

    def __mul__(self, other: "FiniteWeylElement") -> "FiniteWeylElement":
        return FiniteWeylElement(mat_mul(self.matrix, other.matrix), self.cartan)

    def __call__(self, v: Sequence) -> tuple:
        return tuple(sum(x * y for x, y in zip(row, v)) for row in self.matrix)

    @cached_property
    def inverse(self) -> "FiniteWeylElement":
        # w^{-1} = G^{-1} w^T G since w preserves the form
        c = self.cartan
        n = c.rank
        wt = [[self.matrix[j][i] for j in range(n)] for i in range(n)]
        g, gi = c.gram, c._gram_inverse
        tmp = [[sum(wt[i][k] * g[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        out = [[sum(gi[i][k] * tmp[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        assert all(v.denominator == 1 for row in out for v in row)
        return FiniteWeylElement(tuple(tuple(int(v) for v in row) for row in out), c)

    def is_identity(self) -> bool:
        return self.matrix == identity_matrix(len(self.matrix))

    @cached_property
    def reduced_word(self) -> Tuple[int, ...]:
        """Lowest-index greedy left descents; letters are 1-based."""
        word = []
        x = self
        while True:
            xi = x.inverse
            for i in range(x.cartan.rank):
                if is_negative(xi(unit(x.cartan.rank, i))):
                    word.append(i + 1)
                    x = x.cartan.simple_reflection(i + 1) * x
                    break
            else:
                break
        assert x.is_identity()
        return tuple(word)

    def length(self) -> int:
        return len(self.reduced_word)

    def inversions(self) -> FrozenSet[FiniteRoot]:
        """{a > 0 : w^{-1} a < 0}."""
        wi = self.inverse
        return frozenset(r for r in self.cartan.positive_roots if is_negative(wi(r)))

    def to_json(self) -> list:
        return [list(r) for r in self.matrix]


def element_from_word(cartan: CartanData, word: Iterable[int]) -> FiniteWeylElement:
    x = cartan.identity()
    for i in word:
        x = x * cartan.simple_reflection(i)
    return x


def _normalize_subset(cartan: CartanData, J: Iterable[int]) -> Tuple[int, ...]:
    J = tuple(sorted(set(J)))
    if any(j < 1 or j > cartan.rank for j in J):
        raise CartanError(f"index set {J} not inside 1..{cartan.rank}")
    return J


def components(cartan: CartanData, J: Iterable[int]) -> List[Tuple[int, ...]]:
    """Connected components of the Dynkin diagram restricted to J, by min index."""
    J = _normalize_subset(cartan, J)
    left = set(J)
    out = []
    for j in J:
        if j not in left:
            continue
        comp, stack = {j}, [j]
        left.discard(j)
        while stack:
            i = stack.pop()
            for k in list(left):
                if cartan.cartan_matrix[i - 1][k - 1]:
                    left.discard(k)
                    comp.add(k)
                    stack.append(k)
        out.append(tuple(sorted(comp)))
    return out


def in_span(root: Sequence[int], J: Iterable[int]) -> bool:
    Js = set(J)
    return all(c == 0 or i + 1 in Js for i, c in enumerate(root))


@lru_cache(maxsize=None)
def _subsystem_roots(cartan: CartanData, J: Tuple[int, ...]) -> FrozenSet[FiniteRoot]:
    return frozenset(r for r in cartan.roots if in_span(r, J))


def subsystem_roots(cartan: CartanData, J: Iterable[int]):
    """(roots of the parabolic subsystem, [(component, its highest root)])."""
    J = _normalize_subset(cartan, J)
    if not J:
        raise CartanError("J must be non-empty")
    comps = []
    for c in components(cartan, J):
        rs = _subsystem_roots(cartan, c)
        theta = max(rs, key=sum)
        assert all(all(t >= x for t, x in zip(theta, r)) for r in rs)
        comps.append((c, theta))
    return _subsystem_roots(cartan, J), comps


def subsystem_root_set(cartan: CartanData, J: Iterable[int]) -> FrozenSet[FiniteRoot]:
    """Roots spanned by J; empty for J empty."""
    J = _normalize_subset(cartan, J)
    return _subsystem_roots(cartan, J) if J else frozenset()


def in_parabolic(w: FiniteWeylElement, J: Iterable[int]) -> bool:
    Js = set(J)
    return all(i in Js for i in w.reduced_word)


@lru_cache(maxsize=None)
def _parabolic(cartan: CartanData, J: Tuple[int, ...]) -> Tuple[FiniteWeylElement, ...]:
    start = cartan.identity()
    seen = {start}
    order = [start]
    queue = deque([start])
    gens = [cartan.simple_reflection(j) for j in J]
    while queue:
        x = queue.popleft()
        for s in gens:
            y = x * s
            if y not in seen:
                seen.add(y)
                order.append(y)
                queue.append(y)
    return tuple(order)


def weyl_group(cartan: CartanData, J: Iterable[int] = None) -> Tuple[FiniteWeylElement, ...]:
    """All elements of the parabolic subgroup W_J in BFS (length) order."""
    J = tuple(range(1, cartan.rank + 1)) if J is None else _normalize_subset(cartan, J)
    return _parabolic(cartan, J)


def is_minimal_rep(w: FiniteWeylElement, K: Iterable[int]) -> bool:
    n = w.cartan.rank
    return all(is_positive(w(unit(n, k - 1))) for k in K)


def minimal_coset_reps(cartan: CartanData, J: Iterable[int], K: Iterable[int]) -> List[FiniteWeylElement]:
    """W^K_J, sorted by (length, reduced word)."""
    J = _normalize_subset(cartan, J)
    K = _normalize_subset(cartan, K)
    if not set(K) <= set(J):
        raise CartanError("K must be a subset of J")
    reps = [w for w in weyl_group(cartan, J) if is_minimal_rep(w, K)]
    return sorted(reps, key=lambda w: (w.length(), w.reduced_word))


def decompose_coset(cartan: CartanData, J: Iterable[int], K: Iterable[int], w: FiniteWeylElement):
    """w = w^K w_K with w^K minimal in w W_K."""
    J = _normalize_subset(cartan, J)
    K = _normalize_subset(cartan, K)
    if not set(K) <= set(J):
        raise CartanError("K must be a subset of J")
    if not in_parabolic(w, J):
        raise CartanError("element is not in the parabolic subgroup W_J")
    rep = w
    n = cartan.rank
    while True:
        for k in K:
            if is_negative(rep(unit(n, k - 1))):
                rep = rep * cartan.simple_reflection(k)
                break
        else:
            break
    return rep, rep.inverse * w


def longest_element(cartan: CartanData, J: Iterable[int] = None) -> FiniteWeylElement:
    """The element of W_J sending the positive roots of J to negative ones."""
    J = tuple(range(1, cartan.rank + 1)) if J is None else _normalize_subset(cartan, J)
    n = cartan.rank
    x = cartan.identity()
    # right-multiply by ascents until none are left
    while True:
        for j in J:
            if is_positive(x(unit(n, j - 1))):
                x = x * cartan.simple_reflection(j)
                break
        else:
            return x


def finite_from_inversions(cartan: CartanData, roots: Iterable[FiniteRoot]) -> FiniteWeylElement:
    """The unique w with {a > 0 : w^{-1} a < 0} equal to the given set."""
    target = frozenset(roots)
    remaining = set(target)
    n = cartan.rank
    word = []
    while remaining:
        j = next((i for i in range(n) if unit(n, i) in remaining), None)
        if j is None:
            raise CartanError("set is not a finite inversion set")
        s = cartan.simple_reflection(j + 1)
        remaining.discard(unit(n, j))
        remaining = {s(r) for r in remaining}
        if any(not is_positive(r) for r in remaining):
            raise CartanError("set is not a finite inversion set")
        word.append(j + 1)
    w = element_from_word(cartan, word)
    if w.inversions() != target:
        raise CartanError("set is not a finite inversion set")
    return w
