import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convex_orders import affine, fixtures
from convex_orders.affine import Root, act
from convex_orders.biconvex import BiconvexParam, enumerate_params, maximal_biconvex, nabla_enumerate, slice_roots
from convex_orders.cartan import CartanError, build_cartan, element_from_word
from convex_orders.subsys import build_subsystem
from convex_orders.words import (
    InfiniteWord,
    WordError,
    act_on_word,
    build_Z,
    canonical_param,
    chi,
    letters_from_sequence,
    phi_infty_enumerate,
    phi_infty_membership,
    validate_word,
    word_index,
)

A2 = build_cartan("A", 2)
I = (1, 2)
S1 = build_subsystem(A2, (1,))
SI = build_subsystem(A2, I)


def R(m, *c):
    return Root(m, tuple(c))


def sec7_words():
    return fixtures.load("sec7-rows")[1].words


def test_sec7_word_s1():
    s1 = InfiniteWord(S1, (), (1, 0))
    assert s1.head(3) == [R(0, 1, 0), R(1, 1, 0), R(2, 1, 0)]
    assert word_index(s1, R(2, 1, 0)) == 3
    assert phi_infty_enumerate(s1, 4) == [R(m, 1, 0) for m in range(5)]
    assert not phi_infty_membership(s1, R(1, -1, 0))
    p = canonical_param(s1)
    assert (p.K, p.u, p.y) == ((), A2.simple_reflection(1), affine.identity(A2))


def test_sec7_word_s0():
    s0 = sec7_words()[0]
    assert s0.prefix == (2, 1, 0, 2, 1, 2)
    validate_word(s0, 12)
    assert s0.head(6) == [R(0, 0, 1), R(0, 1, 1), R(1, 0, 1), R(1, 1, 1), R(2, 0, 1), R(1, -1, 0)]
    # the word only reaches C_1, not the whole of Delta(s2 s1, -)
    p = canonical_param(s0)
    assert p.K == (1,) and p.u == A2.simple_reflection(2)
    assert p.y == affine.translation(A2, (-1, 0))
    assert p.y == S1.product((1, 0))
    assert not phi_infty_membership(s0, R(2, 1, 1))
    assert R(2, 1, 1) in maximal_biconvex(A2, I, element_from_word(A2, (2, 1)), 2)


def test_sec3_word():
    rows = fixtures.load("sec3-one-row")[1]
    word = rows.words[0]
    assert word.letter(1) == 0
    assert word.phi(1) == R(1, -1, -1)
    assert word_index(word, R(1, -1, 0)) == 2
    assert word_index(word, word.phi(1)) == 1


def test_validation_failures():
    with pytest.raises(WordError) as exc:
        validate_word(InfiniteWord(S1, (), (1,)))
    assert exc.value.p == 2
    with pytest.raises(WordError):
        InfiniteWord(S1, (), ())
    with pytest.raises(WordError):
        InfiniteWord(S1, (), (2,))
    with pytest.raises(ValueError):
        validate_word(InfiniteWord(S1, (), (1, 0)), depth=3)
    assert validate_word(InfiniteWord(S1, (), (1, 0)), depth=4).certified_depth == 4
    # prefix undone by the period
    with pytest.raises(WordError):
        validate_word(InfiniteWord(SI, (1,), (1, 0, 2)))


def test_period_is_normalized_to_a_translation():
    w = InfiniteWord(SI, (), (0, 1, 2))
    assert len(w.period) == 6
    assert w.z(6).is_translation


def test_build_Z_examples():
    z = build_Z(S1)
    assert len(z.period) == 2 and z.prefix == ()
    z = build_Z(SI)
    assert len(z.period) == 4
    assert phi_infty_enumerate(z, 5) == sorted(maximal_biconvex(A2, I, A2.identity(), 5), key=lambda b: word_index(z, b))
    assert set(phi_infty_enumerate(z, 5)) == maximal_biconvex(A2, I, A2.identity(), 5)
    z1 = build_Z(SI, (1,))
    assert set(phi_infty_enumerate(z1, 4)) == slice_roots({(0, -1), (-1, -1)}, 4)
    for K in [(), (1,), (2,)]:
        p = canonical_param(build_Z(SI, K))
        assert (p.K, p.u, p.y) == (K, A2.identity(), affine.identity(A2))


def test_membership_agrees_with_head():
    for word in list(sec7_words()) + [build_Z(SI), build_Z(SI, (2,), {1: 2})]:
        head = word.head(40)
        for p, b in enumerate(head, start=1):
            assert word_index(word, b) == p
        top = max(b.level for b in head)
        listed = set(head)
        for b in word.subsystem.positive_roots(top // 2):
            assert phi_infty_membership(word, b) == (b in listed)


def test_word_index_missing():
    with pytest.raises(KeyError):
        word_index(build_Z(S1), R(0, 1, 0))


def test_letters_roundtrip():
    for word in sec7_words():
        head = word.head(15)
        assert letters_from_sequence(word.subsystem, head) == tuple(word.letter(p) for p in range(1, 16))
    with pytest.raises(WordError):
        letters_from_sequence(SI, [R(0, 1, 1)])


def test_json_roundtrip():
    for word in sec7_words():
        assert InfiniteWord.from_json(A2, word.to_json()) == word
    assert "^inf" in str(sec7_words()[1])


def test_act_identity():
    z = build_Z(SI, (1,))
    assert act_on_word(affine.identity(A2), z) == z


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 2), max_size=5), st.sampled_from([(), (1,), (2,)]))
def test_act_on_word_inversion_formula(xword, K):
    x = affine.element_from_word(A2, xword)
    z = build_Z(SI, K)
    moved = act_on_word(x, z)
    D = 6
    got = set(phi_infty_enumerate(moved, D))
    # image roots that turn negative cancel against Phi(x); positive ones survive
    shift = affine.level_shift_bound(x)
    image = {act(x, b) for b in phi_infty_enumerate(z, D + shift)}
    cancelled = {-b for b in image if not b.is_positive}
    kept = {b for b in image if b.is_positive}
    expect = (affine.inversion_set(x) - cancelled) | kept
    assert got == {b for b in expect if b.level <= D}


@pytest.mark.parametrize("K", [(), (1,), (2,)])
def test_chi_roundtrip(K):
    for p in enumerate_params(A2, I, 2, [K]):
        word = chi(SI, p)
        q = canonical_param(word)
        assert (q.K, q.u, q.y) == (p.K, p.u, p.y)
        assert set(phi_infty_enumerate(word, 6)) == nabla_enumerate(p, 6)


def test_chi_rejects_finite_and_foreign():
    p = BiconvexParam(I, I, A2.identity(), affine.identity(A2))
    with pytest.raises(CartanError):
        chi(SI, p)
    with pytest.raises(CartanError):
        chi(S1, enumerate_params(A2, I, 0, [()])[0])
