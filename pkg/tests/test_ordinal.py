import itertools

import pytest
from hypothesis import given, settings, strategies as st

import ordinal_oracle as Q
from skolemkit import ordinal as O
from skolemkit.errors import ParseError, PreconditionError, ResourceLimitError

w = O.OMEGA


def tup(o):
    return tuple((tup(e), c) for e, c in o.terms)


def p(s):
    return O.parse_ordinal(s)


def fmt(o):
    return O.format_ordinal(o)


# small pool for exhaustive algebraic checks
EXPS = [O.nat(0), O.nat(1), O.nat(2), w, w + 1]
POOL = [O.Ordinal(tuple(zip(es, cs)))
        for k in range(3)
        for es in itertools.combinations(sorted(EXPS, reverse=True), k)
        for cs in itertools.product((1, 2), repeat=k)]


def ordinals(max_depth=2):
    leaf = st.integers(0, 4).map(O.nat)

    def extend(children):
        return st.lists(st.tuples(children, st.integers(1, 3)), max_size=3).map(_build)

    return st.recursive(leaf, extend, max_leaves=6)


def _build(pairs):
    d = {}
    for e, c in pairs:
        d[e] = d.get(e, 0) + c
    return O.Ordinal(tuple(sorted(d.items(), key=lambda t: t[0], reverse=True)))


class TestComparison:
    def test_examples(self):
        assert O.cmp_ordinal(w, w) == "Equal"
        assert O.cmp_ordinal(w + 1, w * 2) == "Less"
        assert O.cmp_ordinal(O.pow(w, w), O.mul(O.pow(w, 3), 5)) == "Greater"

    def test_matches_oracle_order(self):
        for a, b in itertools.product(POOL, repeat=2):
            want = Q.cmp(tup(a), tup(b))
            got = {"Less": -1, "Equal": 0, "Greater": 1}[O.cmp_ordinal(a, b)]
            assert got == want

    def test_invariants_rejected(self):
        with pytest.raises(ValueError):
            O.Ordinal(((O.nat(1), 1), (O.nat(2), 1)))
        with pytest.raises(ValueError):
            O.Ordinal(((O.nat(1), 0),))


class TestClassical:
    def test_examples(self):
        assert O.add(1, w) == w
        assert fmt(O.add(w + 1, w + 1)) == "w*2 + 1"
        assert fmt(O.mul(w + 1, 2)) == "w*2 + 1"
        assert O.pow(2, w) == w

    def test_add_mul_match_oracle(self):
        for a, b in itertools.product(POOL, repeat=2):
            assert tup(O.add(a, b)) == Q.add(tup(a), tup(b))
            assert tup(O.mul(a, b)) == Q.mul(tup(a), tup(b))

    def test_pow_matches_recursion(self):
        for a in POOL[::3]:
            for g in [O.nat(0), O.nat(3), w, w + 2, w * 2, O.pow(w, 2) + w]:
                assert tup(O.pow(a, g)) == Q.power(tup(a), tup(g))

    def test_non_commutative(self):
        assert O.add(1, w) != O.add(w, 1)
        assert O.mul(2, w) != O.mul(w, 2)


class TestHessenberg:
    def test_examples(self):
        assert fmt(O.hsum(w, 1)) == "w + 1"
        assert fmt(O.hsum(1, w)) == "w + 1"
        assert fmt(O.hsum(w + 1, w * 2)) == "w*3 + 1"
        assert fmt(O.hprod(w, 2)) == "w*2"
        assert fmt(O.hprod(w + 1, w + 1)) == "w^2 + w*2 + 1"

    def test_hsum_is_best_ordering(self):
        small = [o for o in POOL if sum(c for _, c in o.terms) <= 3]
        for a, b in itertools.product(small, repeat=2):
            assert tup(O.hsum(a, b)) == Q.hsum_bruteforce(tup(a), tup(b))

    def test_hprod_matches_oracle(self):
        for a, b in itertools.product(POOL, repeat=2):
            assert tup(O.hprod(a, b)) == Q.hprod(tup(a), tup(b))

    def test_unit(self):
        for a in POOL:
            assert O.hprod(a, 1) == a
            assert O.hsum(a, 0) == a

    @settings(max_examples=150, deadline=None)
    @given(ordinals(), ordinals(), ordinals())
    def test_laws(self, a, b, c):
        assert O.hsum(a, b) == O.hsum(b, a)
        assert O.hprod(a, b) == O.hprod(b, a)
        assert O.hsum(O.hsum(a, b), c) == O.hsum(a, O.hsum(b, c))
        assert O.hprod(O.hprod(a, b), c) == O.hprod(a, O.hprod(b, c))
        assert O.hprod(a, O.hsum(b, c)) == O.hsum(O.hprod(a, b), O.hprod(a, c))

    @settings(max_examples=150, deadline=None)
    @given(ordinals(), ordinals(), ordinals())
    def test_strict_monotone(self, a, b, c):
        if a < b:
            assert O.hsum(a, c) < O.hsum(b, c)
            if not c.is_zero:
                assert O.hprod(a, c) < O.hprod(b, c)


class TestIterated:
    def test_examples(self):
        a = w + 1
        assert O.hsum_iter(a, 0).is_zero
        assert fmt(O.hsum_iter(a, w)) == "w^2"
        assert fmt(O.hsum_iter(a, 3)) == "w*3 + 3"
        assert O.cexp(a, 0) == O.ONE
        assert O.cexp(2, w) == w
        assert fmt(O.cexp(a, 2)) == "w^2 + w*2 + 1"

    @pytest.mark.parametrize("b", [O.nat(4), w, w + 3, w * 2 + 1, O.pow(w, 2), O.pow(w, 2) + w * 2])
    def test_against_recursion(self, b):
        for a in POOL[::2]:
            assert tup(O.hsum_iter(a, b)) == Q.iterated_hsum(tup(a), tup(b))
            assert tup(O.cexp(a, b)) == Q.iterated_hprod(tup(a), tup(b))


class TestBounds:
    def test_tower(self):
        assert O.omega_tower(0) == O.ONE
        assert fmt(O.omega_tower(2)) == "w^w"
        assert fmt(O.omega_tower(3)) == "w^(w^w)"
        with pytest.raises(PreconditionError):
            O.omega_tower(-1)
        with pytest.raises(ResourceLimitError):
            O.omega_tower(10 ** 6)

    def test_finite_sums_bound(self):
        assert O.finite_sums_bound(2, 1) == w
        assert fmt(O.finite_sums_bound(w, 2)) == "w^(w*2)"
        with pytest.raises(PreconditionError):
            O.finite_sums_bound(1, 1)
        with pytest.raises(PreconditionError):
            O.finite_sums_bound(2, 0)

    @pytest.mark.parametrize("n", [2, 3])
    def test_finite_sums_bound_below_tower(self, n):
        top = O.omega_tower(n + 1)
        alphas = [O.nat(2), w, w * 3 + 1, O.pow(w, 2)]
        betas = [O.nat(1), O.nat(5), w, w + 2]
        for a in alphas:
            for b in betas:
                if a < top and b < O.omega_tower(n):
                    assert O.finite_sums_bound(a, b) < top

    def test_dries_bound(self):
        assert fmt(O.dries_bound(1)) == "w^w"
        assert fmt(O.dries_bound(w)) == "w^(w^2)"
        assert fmt(O.dries_bound(O.pow(w, w))) == "w^(w^w)"

    def test_closure(self):
        assert O.is_additively_closed(O.pow(w, w))
        assert not O.is_additively_closed(w * 2)
        assert not O.is_multiplicatively_closed(O.pow(w, 2))
        for n in range(5):
            assert O.is_multiplicatively_closed(O.omega_tower(n))

    def test_multiplicative_closure_matches_definition(self):
        # closed iff products of smaller ordinals stay smaller, checked on a grid
        grid = [O.nat(0), O.nat(1), O.nat(2), O.nat(5), w, w * 3 + 2, O.pow(w, 2), O.pow(w, 3) * 2]
        for g in [O.nat(2), w, O.pow(w, 2), O.pow(w, w)]:
            smaller = [s for s in grid if s < g]
            semantic = all(O.mul(a, b) < g for a in smaller for b in smaller)
            assert O.is_multiplicatively_closed(g) == semantic, fmt(g)


class TestText:
    def test_round_trip_pool(self):
        for a in POOL:
            assert p(fmt(a)) == a

    @settings(max_examples=200, deadline=None)
    @given(ordinals())
    def test_round_trip_random(self, a):
        assert p(fmt(a)) == a

    def test_functions(self):
        assert fmt(p("hsum(w+1, w*2)")) == "w*3 + 1"
        assert fmt(p("omega(4)")) == "w^(w^(w^w))"
        assert fmt(p("hsum_iter(w+1, w)")) == "w^2"
        assert fmt(p("sumbound(w, 2)")) == "w^(w*2)"
        assert fmt(p("driesbound(w^w)")) == "w^(w^w)"
        assert fmt(p("w^w*2 + w*3 + 5")) == "w^w*2 + w*3 + 5"

    @pytest.mark.parametrize("bad", ["", "w +", "hsum(w)", "foo(1)", "(w", "w^"])
    def test_parse_errors(self, bad):
        with pytest.raises(ParseError):
            p(bad)
