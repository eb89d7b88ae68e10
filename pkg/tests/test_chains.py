import random

import pytest

from convex_orders import affine, fixtures
from convex_orders.affine import Root, act
from convex_orders.biconvex import BiconvexParam, maximal_biconvex, nabla_enumerate, subsets
from convex_orders.cartan import CartanError, build_cartan, decompose_coset, element_from_word, weyl_group
from convex_orders.chains import (
    ChainParam,
    RowParam,
    chain_sets,
    check_Q,
    default_rows,
    enumerate_chains,
    extend_chain,
    extract_B,
    in_P_tilde,
    one_row,
    random_row_param,
    row_sets,
)
from convex_orders.subsys import ball_K, build_subsystem
from convex_orders.words import InfiniteWord, phi_infty_enumerate

A2 = build_cartan("A", 2)
I = (1, 2)
S1 = build_subsystem(A2, (1,))
ONE = affine.identity(A2)
W = element_from_word(A2, (2, 1))
Y1 = S1.product((1, 0))


def R(m, *c):
    return Root(m, tuple(c))


def sec7_chain():
    return ChainParam(I, W, (I, (1,), ()), (Y1, ONE))


def test_check_Q_examples():
    assert check_Q(A2, I, W, I, (1,), ONE, Y1)
    for K in [(1,), (2,)]:
        for y in [x for layer in ball_K(A2, K, 2) for x in layer]:
            assert check_Q(A2, I, W, K, K, y, y) == in_P_tilde(A2, I, W, K, y)
    # w = 1: w_K = 1 on K={1}, so Delta_K(1, -) excludes alpha1 and s1 violates Q(i)
    s1 = S1.product((1,))
    assert not check_Q(A2, I, A2.identity(), I, (1,), ONE, s1)
    assert not check_Q(A2, I, W, (1,), (1, 2), ONE, ONE)


def test_Q_matches_window_nesting():
    # check_Q against truncated nesting of the nabla sets inside Delta(w, -)
    D = 8
    for w in weyl_group(A2):
        top = maximal_biconvex(A2, I, w, D)
        for K in subsets(I):
            for L in subsets(K):
                uK = decompose_coset(A2, I, K, w)[0]
                uL = decompose_coset(A2, I, L, w)[0]
                for y in [x for layer in ball_K(A2, K, 2) for x in layer]:
                    a = nabla_enumerate(BiconvexParam(I, K, uK, y), D)
                    for z in [x for layer in ball_K(A2, L, 2) for x in layer]:
                        b = nabla_enumerate(BiconvexParam(I, L, uL, z), D)
                        assert check_Q(A2, I, w, K, L, y, z) == (a <= b <= top)


def test_extend_chain_examples():
    L, z = extend_chain(A2, I, W, (I, ONE), ((1,), S1.product((1, 0))))
    assert L == (1,) and z == Y1
    # trivial step L = K gives z = y g
    y = S1.product((1,))
    assert in_P_tilde(A2, I, W, (1,), y)
    L, z = extend_chain(A2, I, W, ((1,), ONE), ((1,), y))
    assert (L, z) == ((1,), y)
    assert extend_chain(A2, I, W, ((1,), Y1), ((), ONE)) == ((), ONE)
    with pytest.raises(CartanError):
        extend_chain(A2, I, W, ((1,), ONE), ((2,), ONE))


def test_extend_chain_output_satisfies_Q():
    rng = random.Random(3)
    for _ in range(60):
        w = rng.choice(weyl_group(A2))
        K = rng.choice([(1,), (2,), I])
        ys = [y for layer in ball_K(A2, K, 2) for y in layer if in_P_tilde(A2, I, w, K, y)]
        y = rng.choice(ys)
        _, wK = decompose_coset(A2, I, K, w)
        v = y.finite.inverse * wK
        for L in subsets(K):
            for g in [x for layer in ball_K(A2, L, 2) for x in layer]:
                if not in_P_tilde(A2, K, v, L, g):
                    continue
                L2, z = extend_chain(A2, I, w, (K, y), (L, g))
                assert check_Q(A2, I, w, K, L2, y, z)


def test_chain_param_validation_and_json():
    chain = sec7_chain()
    assert chain.n == 2 and chain.y(0) == ONE and chain.y(1) == Y1
    assert ChainParam.from_json(A2, chain.to_json()) == chain
    with pytest.raises(CartanError):
        ChainParam(I, W, (I, (1,)), (Y1,))
    with pytest.raises(CartanError):
        ChainParam(I, W, (I, I, ()), (ONE, ONE))
    with pytest.raises(CartanError):
        ChainParam(I, A2.identity(), (I, (1,), ()), (S1.product((1,)), ONE))


def test_sec7_chain_sets():
    C1, C2 = chain_sets(sec7_chain(), 1)
    assert C1 == {R(0, 0, 1), R(1, 0, 1), R(1, -1, 0), R(0, 1, 1), R(1, 1, 1)}
    assert C2 == maximal_biconvex(A2, I, W, 1)
    _, R2 = row_sets(default_rows(sec7_chain()), 3)
    assert R2 == {R(2, 1, 1), R(3, 1, 1)}


def test_rows_partition_top_set():
    for chain in enumerate_chains(A2, I, W, 2):
        rows = row_sets(default_rows(chain), 5)
        total = set()
        for r in rows:
            assert not (total & r)
            total |= r
        assert total == maximal_biconvex(A2, I, W, 5)
    (only,) = row_sets(one_row(A2, I, W), 4)
    assert only == maximal_biconvex(A2, I, W, 4)


def test_extract_B_examples():
    chain = sec7_chain()
    assert extract_B(chain, 1) == chain.C(1)
    B1 = extract_B(chain, 2)
    assert (B1.J, B1.K, B1.u, B1.y) == ((1,), (), A2.simple_reflection(1), ONE)
    back = chain.row_map(2).inverse
    R2 = row_sets(default_rows(chain), 6)[1]
    shift = affine.level_shift_bound(chain.row_map(2))
    assert {act(back, b) for b in R2} == {b for b in nabla_enumerate(B1, 6 + shift) if act(chain.row_map(2), b).level <= 6}
    with pytest.raises(ValueError):
        extract_B(chain, 3)


def test_extract_B_reassembles_rows():
    D = 6
    for w in weyl_group(A2):
        for chain in enumerate_chains(A2, I, w, 2):
            rows = row_sets(default_rows(chain), D)
            for i in range(1, chain.n + 1):
                B = extract_B(chain, i)
                x = chain.row_map(i)
                shift = affine.level_shift_bound(x)
                image = {act(x, b) for b in nabla_enumerate(B, D + shift)}
                assert {b for b in image if b.level <= D} == rows[i - 1]


def test_enumerate_chains_examples():
    (single,) = enumerate_chains(A2, I, A2.identity(), 3, n=1)
    assert single.K_chain == (I, ())
    assert enumerate_chains(A2, I, W, 3, n=3) == []
    two = enumerate_chains(A2, I, A2.identity(), 2, n=2)
    admissible = [
        (K, y)
        for K in [(1,), (2,)]
        for y in [x for layer in ball_K(A2, K, 2) for x in layer]
        if check_Q(A2, I, A2.identity(), I, K, ONE, y)
    ]
    assert len(two) == len(admissible)
    chains = enumerate_chains(A2, I, W, 2)
    assert chains == sorted(chains, key=ChainParam.sort_key)
    assert len(set(chains)) == len(chains)


def test_row_param_validation():
    chain = sec7_chain()
    rows = fixtures.load("sec7-rows")[1]
    assert rows.chain == chain
    assert RowParam.from_json(A2, rows.to_json()) == rows
    wrong = InfiniteWord(S1, (), (0, 1))  # generates <-a1>, not <a1>
    with pytest.raises(CartanError):
        RowParam(chain, (rows.words[0], wrong))
    with pytest.raises(CartanError):
        RowParam(chain, rows.words[:1])


def test_random_row_params_are_valid():
    rng = random.Random(11)
    for _ in range(15):
        w = rng.choice(weyl_group(A2))
        rows = random_row_param(A2, I, w, rng)
        assert rows.chain.w == w
        for i, word in enumerate(rows.words, start=1):
            B = extract_B(rows.chain, i)
            assert set(phi_infty_enumerate(word, 5)) == nabla_enumerate(B, 5)
