import itertools
import random
from fractions import Fraction

import mpmath
import pytest

from skolemkit import asymptotics as A
from skolemkit import constants as C
from skolemkit import skolem as S
from skolemkit import transseries as T
from skolemkit.errors import PreconditionError
from skolemkit.oracle import numeric_compare, numeric_limit

V = A.Verdict
R = A.Relation
E = C.const_exp(C.ONE)


def v(f, g, **kw):
    return A.compare(f, g, **kw).verdict


class TestCompare:
    def test_examples(self):
        assert v("x^x", "2^x") is V.Greater
        r = A.compare("(x+1)^x", "(x+1)^x")
        assert r.verdict is V.EqualToDepth and str(r) == f"EqualToDepth({r.depth})"
        assert v("2^(2^x)", "x^(x^2)") is V.Greater

    def test_oracle_agrees(self):
        assert numeric_compare("x^x", "2^x", [30]) == "Greater"
        assert numeric_compare("2^(2^x)", "x^(x^2)", [20]) == "Greater"

    def test_equal_functions(self):
        for f, g in [("4^x", "2^x*2^x"), ("(x+1)^(x+1)", "(x+1)^x*(x+1)"), ("x*(x+1)", "x*x + x")]:
            assert v(f, g) is V.EqualToDepth

    def test_json(self):
        j = A.compare("x^x", "2^x").to_json()
        assert j["verdict"] == "Greater"
        assert j["oracle_check"]["x_values"] == ["20", "40"]

    def test_trichotomy_and_transitivity(self):
        ts = S.build_corpus(7).terms(7)
        rng = random.Random(1)
        sample = rng.sample(ts, 40)
        table = {}
        for f, g in itertools.product(sample, repeat=2):
            table[f, g] = v(f, g)
        for f, g in itertools.product(sample, repeat=2):
            a, b = table[f, g], table[g, f]
            if a is V.Less:
                assert b is V.Greater
            elif a is V.EqualToDepth:
                assert b is V.EqualToDepth
        for f, g, h in itertools.product(sample, repeat=3):
            if table[f, g] is V.Less and table[g, h] is V.Less:
                assert table[f, h] is V.Less

    def test_undetermined_carries_reason(self):
        r = A.compare("x^((x+1)^x)", "x^((x+1)^x+1)", 1)
        assert r.verdict is V.Undetermined
        assert r.reason_kind == "depth" and r.reason

    def test_undetermined_is_not_a_boolean(self):
        u = A.Undetermined("hidden", "depth")
        with pytest.raises(TypeError):
            bool(u)


class TestDominance:
    def test_dom_rel(self):
        d = A.dom_rel("x+1", "x")
        assert d.rel is R.SameArchimedeanClass and d.ratio == C.ONE
        d = A.dom_rel("(x+1)^x", "x^x")
        assert d.rel is R.SameArchimedeanClass and d.ratio == E
        assert A.dom_rel("x", "x*x").rel is R.StrictlyDominated
        assert A.dom_rel("x*x", "x").rel is R.StrictlyDominates

    def test_is_sim(self):
        assert A.is_sim("x+1", "x") is True
        assert A.is_sim("(x+1)^x", "x^x") is False
        assert A.is_sim("2*x", "x") is False

    def test_limit_ratio(self):
        assert str(A.limit_ratio("x+1", "x")) == "Finite(1)"
        lim = A.limit_ratio("(x+1)^x", "x^x")
        assert lim.kind == "Finite" and lim.ratio == E
        assert lim.ratio.flag is C.EMembership.InEPlus
        assert A.limit_ratio("2^x", "x^x").kind == "Zero"
        assert A.limit_ratio("x^x", "2^x").kind == "Infinite"
        with mpmath.workprec(64):
            r = numeric_limit("2^x", "x^x", [30])[0]
            assert r.b < mpmath.mpf("1e-6")

    def test_finite_ratios_in_e_plus(self):
        ts = S.build_corpus(5).terms(5)
        for f, g in itertools.product(ts, repeat=2):
            lim = A.limit_ratio(f, g)
            if lim.kind == "Finite":
                assert lim.ratio.flag is C.EMembership.InEPlus

    def test_convergence_direction(self):
        with mpmath.workprec(128):
            for f, g in [("(x+1)^x", "x^x"), ("(x+2)^x", "x^x*x")]:
                lim = A.limit_ratio(f, g)
                if lim.kind != "Finite":
                    continue
                r = C.to_mpf(lim.ratio, 40)
                encs = numeric_limit(f, g, [100, 400, 1600])
                dist = [abs(mpmath.mpf(x.a) - r) for x in encs]
                assert dist[0] > dist[1] > dist[2]


class TestFinerRelations:
    def test_examples(self):
        assert A.asymp_c("x+1", "x", "x") is True
        assert A.sim_c("x+1", "x", "x") is False
        assert A.sim_c("x^x+x", "x^x+x", "x") is True
        assert A.asymp_c("x+1", "x", "x*x") is False

    def test_c_must_be_at_least_one(self):
        with pytest.raises(PreconditionError):
            A.asymp_c("x", "x", Fraction(1, 2))

    def test_monotone_coarsening(self):
        cs = ["x*x", "x", 1]
        ts = S.build_corpus(5).terms(5)
        for f, g in itertools.product(ts, repeat=2):
            av = [A.asymp_c(f, g, c) for c in cs]
            sv = [A.sim_c(f, g, c) for c in cs]
            for vals in (av, sv):
                for hi, lo in zip(vals, vals[1:]):
                    if hi is True and not isinstance(lo, A.Undetermined):
                        assert lo is True

    def test_ftoc_matches_definition(self):
        # f ~_c g  iff  f^c ~ g^c, computed directly with series powers
        pairs = [("x+1", "x"), ("x+1", "x+2"), ("(x+1)^x", "x^x*3"), ("x*x+x", "x*x")]
        for f, g in pairs:
            for c in ["x", "2", "x*x"]:
                direct = _sim_by_powers(f, g, c)
                via = A.sim_c(f, g, c)
                if not isinstance(via, A.Undetermined):
                    assert via is direct, (f, g, c)

    def test_ratio_class_coefficient(self):
        assert A.ratio_class_coefficient("x+1", "x", 1) == C.ONE
        assert A.ratio_class_coefficient("(x+1)^x", "x^x", 1) == E
        r = A.ratio_class_coefficient("x+1", "x", "x")
        assert C.cmp_const(r, E) is C.Ordering.EqualExact
        with mpmath.workprec(80):
            (enc,) = numeric_limit("(x+1)^x", "x^x", [1000])
            assert abs(mpmath.mpf(enc.a) - mpmath.e) < 2e-3


def _sim_by_powers(f, g, c) -> bool:
    d = 8
    cs = A.expand(c, d)
    pf = T.series_pow(A.expand(f, d), cs, d)
    pg = T.series_pow(A.expand(g, d), cs, d)
    (mf, kf), (mg, kg) = pf.terms[0], pg.terms[0]
    return mf is mg and C.cmp_const(kf, kg) is C.Ordering.EqualExact


class TestSpectrum:
    def test_x(self):
        sp = A.ratio_spectrum("x", 5)
        assert [r.render() for r in sp.ratios] == ["1", "2", "3"]
        assert sp.strictly_increasing and not sp.undetermined

    def test_x_larger(self):
        sp = A.ratio_spectrum("x", 7)
        assert [r.render() for r in sp.ratios] == ["1", "2", "3", "4"]

    def test_empty(self):
        with pytest.raises(PreconditionError):
            A.ratio_spectrum("x", 0)

    def test_xx_contains_e(self):
        sp = A.ratio_spectrum("x^x", 9)
        names = [r.render() for r in sp.ratios]
        assert names[:3] == ["1", "2", "e"]
        for a, b in zip(sp.enclosures, sp.enclosures[1:]):
            assert a.hi < b.lo
