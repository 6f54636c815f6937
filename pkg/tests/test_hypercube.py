import random

import pytest

from klpar.coxeter import build_system
from klpar.decomp import parabolic_decomposition
from klpar.errors import PreconditionError, UnsupportedOperationError
from klpar.hecke import algebra
from klpar.hypercube import (admissible_data, admissible_sets, closure_A, context, hypercube_J, hypercube_Q,
                             hypercube_r, is_admissible, reduce_B, sigma_A, sigma_B, thmB_hypercube_sets)
from klpar.laurent import ALPHA, ONE, ZERO, from_q_coefficients


@pytest.fixture
def S3():
    return build_system("A", 2)


def test_context(S3):
    W = S3
    assert context(W, W.identity).D == {1, 2}
    assert context(W, W.longest).D == frozenset()
    assert len(context(W, W.identity).P) == 4
    assert hypercube_J(W) == {1}
    assert hypercube_J(build_system("A", 4)) == {1, 2, 3}


def test_reduce_examples(S3):
    W, e = S3, S3.identity
    assert reduce_B(W, e, {1, 2}) == {1}
    assert reduce_B(W, e, ()) == frozenset()
    assert reduce_B(W, e, {2}) == {2}
    with pytest.raises(PreconditionError):
        reduce_B(W, W.longest, {1})


def test_closure_examples(S3):
    W, e = S3, S3.identity
    assert closure_A(W, e, {1}) == {1, 2}
    assert closure_A(W, e, ()) == frozenset()
    assert closure_A(W, e, {2}) == {2}


def test_admissible_examples():
    for n in (3, 4, 5):
        W = build_system("A", n - 1)
        assert admissible_sets(W, W.longest) == [frozenset()]
        for s in range(len(W)):
            ctx = context(W, s)
            adm = admissible_sets(W, ctx)
            assert frozenset() in adm
            assert all(frozenset({i}) in adm for i in ctx.D)
    W = build_system("A", 2)
    assert set(admissible_sets(W, W.identity)) == {frozenset(), frozenset({1}), frozenset({2})}
    assert not is_admissible(W, W.identity, {1, 2})


def test_sigma_A_examples(S3):
    W, e = S3, S3.identity
    for s in range(len(W)):
        assert sigma_A(W, s, ()) == s
    t13 = sigma_A(W, e, {1})
    assert t13 == W.transposition(1, 3) and W.length[t13] == 3
    assert sigma_A(W, e, {2}) == W.gen(2)
    with pytest.raises(PreconditionError):
        sigma_A(W, e, {1, 2})


def test_length_identity_s6():
    W = build_system("A", 5)
    total = 0
    for s in range(len(W)):
        for a in admissible_data(W, s):
            assert W.length[a.target] - W.length[s] == 2 * len(a.closure) - len(a.A)
            total += 1
    assert total > len(W)


def test_hypercube_r_examples(S3):
    W, e = S3, S3.identity
    t13 = W.transposition(1, 3)
    res = hypercube_r(W, e, t13)
    assert res.admissible_A == {1}
    assert res.R_check == ALPHA
    assert res.R == from_q_coefficients([0, -1, 1])
    assert sorted(map(sorted, res.contributing_B)) == [[1], [1, 2]]
    zero = hypercube_r(W, e, W.gen(1))
    assert zero.R == ZERO and zero.R_check == ZERO and zero.admissible_A is None
    for s in range(len(W)):
        same = hypercube_r(W, s, s)
        assert same.R_check == ONE and same.admissible_A == frozenset()


def test_thmB_examples(S3):
    W, e = S3, S3.identity
    assert sorted(map(sorted, thmB_hypercube_sets(W, e, W.transposition(1, 3)))) == [[1], [1, 2]]
    assert thmB_hypercube_sets(W, e, W.gen(1)) == []
    for s in range(len(W)):
        assert thmB_hypercube_sets(W, s, s) == [frozenset()]


def test_sigma_B_is_join_s4():
    W = build_system("A", 3)
    for s in range(len(W)):
        ctx = context(W, s)
        for B in ctx.P:
            if B:
                target = sigma_B(W, ctx, B)
                assert target == W.bruhat_join([W.mul(ctx.t[i], s) for i in B])


def test_hypercube_Q_examples(S3):
    W = S3
    assert hypercube_Q(W, W.identity, W.longest) == from_q_coefficients([0, 1, 1])
    for s in range(len(W)):
        assert hypercube_Q(W, s, s) == ZERO
    with pytest.raises(PreconditionError):
        hypercube_Q(W, W.gen(1), W.gen(2))


def test_hypercube_Q_matches_parabolic_s4():
    W = build_system("A", 3)
    J = hypercube_J(W)
    for w in range(len(W)):
        for s in W.below(w):
            assert hypercube_Q(W, s, w, check=False) == parabolic_decomposition(W, s, w, J).Q


def test_hypercube_r_matches_algebra_s6_sampled():
    W = build_system("A", 5)
    H = algebra(W)
    J = hypercube_J(W)
    rng = random.Random(66)
    for _ in range(1500):
        s, w = rng.randrange(len(W)), rng.randrange(len(W))
        res = hypercube_r(W, s, w, check=False)
        assert (res.R_check, res.R) == H.j_relative_r(s, w, J)


def test_type_a_only():
    W = build_system("B", 3)
    with pytest.raises(UnsupportedOperationError):
        context(W, W.identity)
    with pytest.raises(UnsupportedOperationError):
        hypercube_r(W, W.identity, W.longest)
