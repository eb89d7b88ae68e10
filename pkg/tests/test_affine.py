import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convex_orders import affine
from convex_orders.affine import AffineWeylElement, Root, act, format_root
from convex_orders.cartan import build_cartan

from oracles import GRAM, apply_word, inversion_filter, translation_length

A2 = build_cartan("A", 2)


def simple_tuples(c):
    return [(r.level, r.finite) for r in affine.simple_affine_roots(c)]


def test_act_examples():
    t = affine.translation(A2, (2, 0))
    assert act(t, Root(0, (1, 0))) == Root(-4, (1, 0))
    s0 = affine.simple_reflection(A2, 0)
    assert act(s0, Root(0, (1, 0))) == Root(1, (0, -1))
    assert act(s0, affine.simple_affine_roots(A2)[0]) == Root(-1, (1, 1))
    assert act(s0, Root(3, (0, 0))) == Root(3, (0, 0))
    assert act(affine.identity(A2), Root(4, (1, -1))) == Root(4, (1, -1))


def test_translation_example_is_doubled_coroot():
    # t_{alpha1^vee}: alpha1^vee = alpha1 in simple-root coordinates
    t = affine.translation(A2, (1, 0))
    assert act(t, Root(0, (1, 0))) == Root(-2, (1, 0))


def test_length_examples():
    assert affine.length(affine.identity(A2)) == 0
    assert affine.length(affine.element_from_word(A2, (1, 2))) == 2
    t_theta = affine.translation(A2, A2.highest_root)
    assert affine.length(t_theta) == 4
    assert affine.reduced_word(t_theta) == (0, 1, 2, 1)
    assert affine.element_from_word(A2, affine.reduced_word(t_theta)) == t_theta


def test_inversion_set_examples():
    assert affine.inversion_set(affine.identity(A2)) == frozenset()
    x = affine.element_from_word(A2, (1, 2))
    assert affine.inversion_set(x) == {Root(0, (1, 0)), Root(0, (1, 1))}
    # in the ambient group s_{d-a1} = s0 s2 s0, so the set has four roots;
    # the two-root answer {a1, d+a1} belongs to the subsystem J={1}
    y = affine.simple_reflection(A2, 1) * affine.reflection(A2, Root(1, (-1, 0)))
    assert affine.inversion_set(y) == {Root(0, (1, 0)), Root(0, (1, 1)), Root(1, (0, -1)), Root(1, (1, 0))}


def test_coroot_lattice_enforced():
    c = build_cartan("C", 2)
    scale = c.coroot_scale
    bad = tuple(1 if s > 1 else 0 for s in scale)
    if any(bad):
        with pytest.raises(ValueError):
            affine.translation(c, bad)


def test_format_root():
    assert format_root(Root(2, (1, -3))) == "2 d + a1 - 3 a2"
    assert format_root(Root(0, (-1, 0))) == "-a1"
    assert format_root(Root(1, (0, 0))) == "1 d"
    assert format_root(Root(0, (0, 0))) == "0"


def test_positive_roots_counts():
    assert len(affine.positive_roots(A2, 1)) == 10
    a1 = build_cartan("A", 1)
    assert [str(r) for r in affine.positive_roots(a1, 1)] == ["a1", "1 d - a1", "1 d", "1 d + a1"]
    assert len(affine.positive_roots(A2, 3, real_only=True)) == 3 + 3 * 6


def test_json_roundtrip():
    x = affine.element_from_word(A2, (0, 2, 1, 0))
    assert AffineWeylElement.from_json(A2, x.to_json()) == x
    data = x.to_json()
    data["translation"] = ["1/2", "0"]
    with pytest.raises(ValueError):
        AffineWeylElement.from_json(A2, data)
    r = Root(3, (1, -1))
    assert Root.from_json(r.to_json()) == r


@pytest.mark.parametrize("key", sorted(GRAM))
def test_action_matches_reflection_oracle(key):
    c = build_cartan(*key)
    simple = simple_tuples(c)
    gens = range(c.rank + 1)
    words = [(), (0,), (1, 0), (0, 1, 0), tuple(gens) * 2]
    for word in words:
        x = affine.element_from_word(c, word)
        for r in affine.positive_roots(c, 2, real_only=True):
            got = act(x, r)
            assert (got.level, got.finite) == apply_word(GRAM[key], simple, word, (r.level, r.finite))


@pytest.mark.parametrize("key", sorted(GRAM))
def test_translation_length_formula(key):
    c = build_cartan(*key)
    scale = c.coroot_scale
    for a in range(-2, 3):
        for b in range(-2, 3) if c.rank > 1 else [None]:
            lam = (a * scale[0],) if b is None else (a * scale[0], b * scale[1])
            t = affine.translation(c, lam)
            assert affine.length(t) == translation_length(GRAM[key], lam, c.positive_roots)


words = st.lists(st.integers(0, 2), max_size=7)


@settings(max_examples=60, deadline=None)
@given(words, words)
def test_group_laws(u, v):
    x, y = affine.element_from_word(A2, u), affine.element_from_word(A2, v)
    assert (x * y).inverse == y.inverse * x.inverse
    assert (x * x.inverse).is_identity()
    for r in affine.positive_roots(A2, 1, real_only=True):
        assert act(x * y, r) == act(x, act(y, r))


@settings(max_examples=60, deadline=None)
@given(words)
def test_inversion_set_agrees_with_filter(word):
    x = affine.element_from_word(A2, word)
    phi = affine.inversion_set(x)
    assert len(phi) == affine.length(x)
    top = max([0] + [r.level for r in phi])
    assert phi == affine.inversion_set_filter(x, top + 2)
    oracle = inversion_filter(GRAM[("A", 2)], simple_tuples(A2), word, A2.roots, top + 2)
    assert {(r.level, r.finite) for r in phi} == oracle


@settings(max_examples=40, deadline=None)
@given(words, st.integers(0, 2))
def test_length_changes_by_one(word, i):
    x = affine.element_from_word(A2, word)
    s = affine.simple_reflection(A2, i)
    assert abs(affine.length(x * s) - affine.length(x)) == 1


def test_ball_layers():
    layers = affine.ball(A2, 3)
    assert [len(layer) for layer in layers] == [1, 3, 6, 9]
    for k, layer in enumerate(layers):
        assert all(affine.length(x) == k for x in layer)
