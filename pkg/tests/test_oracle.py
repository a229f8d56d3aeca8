import mpmath
import pytest

from skolemkit import skolem as S
from skolemkit.asymptotics import Verdict, compare
from skolemkit.errors import OracleRangeError, PreconditionError
from skolemkit.oracle import eval_ln, numeric_compare, numeric_limit


def near(lnv, target, tol=None):
    with mpmath.workprec(256):
        tol = tol if tol is not None else lnv.error_bound + mpmath.mpf(2) ** -100
        return abs(lnv.ln_value - target) <= tol


class TestEvalLn:
    def test_examples(self):
        with mpmath.workprec(256):
            assert near(eval_ln("x", 10), mpmath.log(10))
            assert near(eval_ln("x^x", 10), 10 * mpmath.log(10))
            v = eval_ln("2^(2^x)", 10)
            assert near(v, 1024 * mpmath.log(2))
            assert v.error_bound < mpmath.mpf(2) ** -100

    def test_rational_point(self):
        from fractions import Fraction
        with mpmath.workprec(256):
            assert near(eval_ln("x*x+1", Fraction(5, 2)), mpmath.log(mpmath.mpf(29) / 4))

    def test_domain(self):
        with pytest.raises(PreconditionError):
            eval_ln("x", 1)

    def test_range_error_reported(self):
        with pytest.raises(OracleRangeError):
            eval_ln("2^(2^(2^x))", 100)

    def test_refinement_nested(self):
        for s in ["(x+1)^x", "2^(3^x)*x", "x^(x^x)+x"]:
            lo = eval_ln(s, 7, precision=64)
            hi = eval_ln(s, 7, precision=256)
            assert lo.interval.a <= hi.interval.a and hi.interval.b <= lo.interval.b

    def test_error_bound_is_sound(self):
        # exact integer value at x = 3 versus the enclosure
        for s in ["(x+1)^x*x", "2^(x*x)+x", "x^(x+1)+3"]:
            exact = S.value_at(S.parse(s), 3)
            v = eval_ln(s, 3)
            with mpmath.workprec(256):
                assert abs(mpmath.log(exact) - v.ln_value) <= v.error_bound


class TestNumericCompare:
    def test_examples(self):
        assert numeric_compare("x+1", "x", [10, 100]) == "Greater"
        assert numeric_compare("x^x", "2^x", [5, 50]) == "Greater"
        assert numeric_compare("x^x", "x^x", [10, 20]) == "Indistinguishable"

    def test_mixed(self):
        # 2^x < x^2 at x = 3, larger at x = 10
        assert numeric_compare("2^x", "x*x", [3, 10]) == "Mixed"

    def test_residuals(self):
        res = []
        numeric_compare("x^x", "2^x", [20, 40], residuals=res)
        assert len(res) == 2

    def test_agrees_with_symbolic_on_corpus(self):
        ts = S.build_corpus(7).terms(7)
        opposite = {Verdict.Less: "Greater", Verdict.Greater: "Less"}
        for f in ts:
            for g in ts:
                v = compare(f, g, check_oracle=False).verdict
                if v not in opposite:
                    continue
                try:
                    n = numeric_compare(f, g, [20, 40])
                except OracleRangeError:
                    continue
                assert n != opposite[v], (S.format_term(f), S.format_term(g))


class TestNumericLimit:
    def test_examples(self):
        with mpmath.workprec(128):
            a, b = numeric_limit("(x+1)^x", "x^x", [100, 1000])
            assert abs(mpmath.mpf(b.a) - mpmath.e) < abs(mpmath.mpf(a.a) - mpmath.e) < 0.02
            for enc in numeric_limit("x*x+x", "x*x+x", [10, 30]):
                assert enc.a <= 1 <= enc.b
            (c,) = numeric_limit("x+3", "x", [1000])
            assert c.a <= mpmath.mpf("1.003") <= c.b
