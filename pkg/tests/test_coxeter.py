import itertools

import pytest

from klpar.coxeter import Filtration, build_system, restrict_permutation
from klpar.errors import ConfigurationError, MalformedInputError, PreconditionError, UnsupportedOperationError

import oracles


@pytest.mark.parametrize("family,rank,order,n_refl,top", [
    ("A", 2, 6, 3, 3),
    ("A", 3, 24, 6, 6),
    ("B", 3, 48, 9, 9),
    ("D", 4, 192, 12, 12),
    ("I2", 4, 8, 4, 4),
    ("I2", 7, 14, 7, 7),
])
def test_orders(family, rank, order, n_refl, top):
    W = build_system(family, rank)
    assert len(W) == order == W.order_formula
    assert len(W.reflections) == n_refl
    assert W.length[W.longest] == top


def test_unknown_family():
    with pytest.raises(ConfigurationError):
        build_system("Q", 3)


def test_bruhat_examples():
    W = build_system("A", 3)
    assert W.bruhat_leq(W.parse("1324"), W.parse("4231"))
    W3 = build_system("A", 2)
    s1, s2 = W3.gen(1), W3.gen(2)
    assert not W3.bruhat_leq(s1, s2) and not W3.bruhat_leq(s2, s1)
    assert W3.bruhat_leq(W3.identity, W3.longest)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_bruhat_matches_tableau_criterion(n):
    W = build_system("A", n - 1)
    perms = oracles.all_perms(n)
    for x, w in itertools.product(perms, repeat=2):
        assert W.bruhat_leq(W.from_perm(x), W.from_perm(w)) == oracles.bruhat_leq(x, w)


@pytest.mark.parametrize("family,rank", [("A", 3), ("B", 3), ("I2", 5)])
def test_bruhat_is_closure_of_covers(family, rank):
    W = build_system(family, rank)
    N = len(W)
    covers = {w: {W.mul(t, w) for t in W.reflections if W.length[W.mul(t, w)] == W.length[w] + 1}
              for w in range(N)}
    for x in range(N):
        reach, frontier = {x}, [x]
        while frontier:
            frontier = [u for z in frontier for u in covers[z] if u not in reach]
            reach.update(frontier)
        assert reach == set(W.above(x))


def test_subword_property_s4():
    W = build_system("A", 3)
    for w in range(len(W)):
        word = W.reduced_word(w)
        subs = {W.from_word(c) for k in range(len(word) + 1) for c in itertools.combinations(word, k)}
        assert subs == set(W.below(w))


def test_coset_examples():
    W = build_system("A", 2)
    s1, s2 = W.gen(1), W.gen(2)
    assert W.coset_factorize(W.mul(s1, s2), {1}) == (s1, s2)
    assert W.coset_factorize(W.mul(s2, s1), {1}) == (W.identity, W.mul(s2, s1))
    for J in W.all_subsets():
        assert W.coset_factorize(W.identity, J) == (W.identity, W.identity)


@pytest.mark.parametrize("family,rank", [("A", 3), ("B", 3), ("D", 4), ("I2", 6)])
def test_length_additivity(family, rank):
    W = build_system(family, rank)
    for J in W.all_subsets():
        P = W.parabolic(J)
        for w in range(len(W)):
            a, b = W.coset_factorize(w, J)
            assert W.mul(a, b) == w
            assert a in P.subgroup_elements and b in P.min_reps
            assert W.length[w] == W.length[a] + W.length[b]


def test_bad_generator_label():
    with pytest.raises(PreconditionError):
        build_system("A", 2).parabolic({3})


def test_weak_order_examples():
    W = build_system("A", 2)
    s1, s2 = W.gen(1), W.gen(2)
    for t in range(len(W)):
        assert W.weak_left_leq(t, t)
        assert W.weak_left_leq(t, W.longest)
    assert W.weak_left_leq(s1, W.longest)
    assert not W.weak_left_leq(s1, s2)


def test_convex_tuple_examples():
    W = build_system("A", 2)
    s1, s2 = W.gen(1), W.gen(2)
    assert W.convex_tuple(s2, s2) == ()
    assert W.convex_tuple(W.identity, s1) == (s1,)
    assert W.convex_tuple(s1, s2) is None
    # the left weak chain from w0^J = s1 (J = {1}) uses (1,3) then (2,3)
    assert W.convex_tuple(s1, W.longest) == (W.transposition(1, 3), W.transposition(2, 3))


@pytest.mark.parametrize("family,rank", [("A", 3), ("B", 3)])
def test_convex_tuples_are_convex_and_distinct(family, rank):
    W = build_system(family, rank)
    for tau in range(len(W)):
        for kappa in range(len(W)):
            tup = W.convex_tuple(tau, kappa)
            assert (tup is not None) == W.weak_left_leq(tau, kappa)
            if tup is None:
                continue
            assert len(set(tup)) == len(tup)
            cur = tau
            for i, t in enumerate(tup, start=1):
                assert W.is_reflection(t)
                cur = W.mul(cur, t)
                assert W.length[cur] == W.length[tau] + i
            assert cur == kappa


def test_join_examples():
    W = build_system("A", 2)
    for w in range(len(W)):
        assert W.bruhat_join([w]) == w
    # two minimal upper bounds, s1s2 and s2s1: no join
    assert W.bruhat_join([W.gen(1), W.gen(2)]) is None
    t13, t23 = W.transposition(1, 3), W.transposition(2, 3)
    assert W.bruhat_join([t13, t23]) == t13
    with pytest.raises(PreconditionError):
        W.bruhat_join([])


def test_restrict_permutation():
    assert restrict_permutation((4, 2, 3, 1), {1, 3}) == (2, 1)
    assert restrict_permutation((4, 2, 3, 1), {1, 2, 3, 4}) == (4, 2, 3, 1)
    assert restrict_permutation((1, 2, 3, 4, 5), {2, 5}) == (1, 2)
    with pytest.raises(UnsupportedOperationError):
        build_system("B", 2).restrict(0, {1})


@pytest.mark.parametrize("n", [3, 4, 5])
def test_restriction_is_order_isomorphism(n):
    # fibres fix the values on A; the complementary restriction is then a
    # Bruhat-order isomorphism onto S_{n-|A|}
    W = build_system("A", n - 1)
    for k in range(1, n):
        for A in itertools.combinations(range(1, n + 1), k):
            comp = [i for i in range(1, n + 1) if i not in A]
            fibers: dict = {}
            for w in range(len(W)):
                fibers.setdefault(tuple(W.perm(w)[i - 1] for i in A), []).append(w)
            for fiber in fibers.values():
                image = {w: W.restrict(w, comp) for w in fiber}
                assert len(set(image.values())) == len(fiber) == len(oracles.all_perms(n - k))
                for x, y in itertools.product(fiber, repeat=2):
                    assert W.bruhat_leq(x, y) == oracles.bruhat_leq(image[x], image[y])


def test_pattern_fibre_alone_is_not_a_bijection():
    W = build_system("A", 2)
    fibre = [w for w in range(len(W)) if W.restrict(w, {1}) == (1,)]
    assert len(fibre) == 6 and len({W.restrict(w, {2, 3}) for w in fibre}) == 2


@pytest.mark.parametrize("family,rank", [("A", 3), ("B", 3)])
def test_coset_translation_is_order_isomorphism(family, rank):
    W = build_system(family, rank)
    for J in W.all_subsets():
        P = W.parabolic(J)
        for s in range(len(W)):
            for w in W.above(s):
                if P.rep[s] != P.rep[w]:
                    continue
                small = W.interval(P.part[s], P.part[w])
                image = [W.mul(k, P.rep[s]) for k in small]
                assert sorted(image) == sorted(W.interval(s, w))
                for a, b in itertools.product(range(len(small)), repeat=2):
                    assert W.bruhat_leq(small[a], small[b]) == W.bruhat_leq(image[a], image[b])


def test_filtration():
    W = build_system("A", 3)
    F = Filtration.full_flag(W)
    assert F.r == 3
    colors = F.colors(W)
    assert {W.reflection_pairs[t]: c for t, c in colors.items()} == {
        (1, 2): 1, (1, 3): 2, (2, 3): 2, (1, 4): 3, (2, 4): 3, (3, 4): 3}
    assert set(Filtration.trivial(W).colors(W).values()) == {1}
    with pytest.raises(PreconditionError):
        Filtration((frozenset(), frozenset({1}), frozenset({1})))
    with pytest.raises(PreconditionError):
        Filtration((frozenset({1}), frozenset({1, 2, 3})))
    with pytest.raises(PreconditionError):
        Filtration((frozenset(), frozenset({1, 2}))).colors(W)


@pytest.mark.parametrize("family,rank", [("A", 3), ("B", 3), ("D", 4), ("I2", 5)])
def test_parse_format_round_trip(family, rank):
    W = build_system(family, rank)
    for w in range(len(W)):
        assert W.parse(W.format(w)) == w
        assert W.parse("w:" + ",".join(map(str, W.reduced_word(w)))) == w


def test_parse_errors():
    W = build_system("A", 3)
    assert W.parse("e") == W.identity
    assert W.parse("1,2,1") == W.parse("3214")
    for bad in ("1234x", "12", "w:1,9"):
        with pytest.raises((MalformedInputError, PreconditionError)):
            W.parse(bad)
