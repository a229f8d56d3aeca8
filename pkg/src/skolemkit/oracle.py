"""Rigorous numeric evaluation of Skolem terms in logarithmic space.

Values are never materialized: every node is evaluated as an interval
enclosure of ``ln f(x)`` with mpmath's interval context.  Exponents ``g(x)``
of a power node are recovered as ``exp(ln g(x))``; when that is too large to
be useful the evaluation stops with :class:`OracleRangeError` instead of
returning a silently inaccurate number.
"""
from __future__ import annotations

import threading
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
from mpmath import iv

from .errors import OracleRangeError, PreconditionError
from .skolem import Term, _t

__all__ = ["LnValue", "eval_ln", "numeric_compare", "numeric_limit", "MAX_LN_EXPONENT"]

# ln g(x) beyond this bound means g(x) > e^MAX_LN_EXPONENT: a tower too tall
MAX_LN_EXPONENT = 10 ** 5
MAX_PRECISION = 1 << 14

_lock = threading.RLock()


@contextmanager
def _prec(bits: int):
    with _lock:
        old = iv.prec
        iv.prec = bits
        try:
            yield
        finally:
            iv.prec = old


@dataclass(frozen=True)
class LnValue:
    ln_value: mpmath.mpf
    error_bound: mpmath.mpf
    interval: object  # mpmath ivmpf enclosure of ln f(x)

    @property
    def lo(self):
        return self.interval.a

    @property
    def hi(self):
        return self.interval.b

    def value_enclosure(self, precision: int = 128):
        """Enclosure of f(x) itself, or None when too large to print."""
        if self.interval.b > MAX_LN_EXPONENT:
            return None
        with _prec(precision):
            return iv.exp(self.interval)


def _iv_rational(q: Fraction):
    return iv.mpf(q.numerator) / iv.mpf(q.denominator)


def _ln_sum(a, b):
    # ln(e^a + e^b) = hi + log1p(exp(lo - hi)), with hi chosen by midpoint
    if a.mid < b.mid:
        a, b = b, a
    return a + iv.log(1 + iv.exp(b - a))


def _eval(t: Term, x, lnx, memo: dict):
    r = memo.get(t)
    if r is not None:
        return r
    if t._nat:
        r = iv.log(iv.mpf(t._nat))
    elif t.kind == "x":
        r = lnx
    elif t.kind == "add":
        r = _ln_sum(_eval(t.left, x, lnx, memo), _eval(t.right, x, lnx, memo))
    elif t.kind == "mul":
        r = _eval(t.left, x, lnx, memo) + _eval(t.right, x, lnx, memo)
    else:
        lb = _eval(t.left, x, lnx, memo)
        lg = _eval(t.right, x, lnx, memo)
        if lg.b > MAX_LN_EXPONENT:
            raise OracleRangeError(
                f"exponent of {t} exceeds e^{MAX_LN_EXPONENT} at x = {x}; tower too tall for ln-space")
        r = lb * iv.exp(lg)
    if not (mpmath.isfinite(mpmath.mpf(r.a)) and mpmath.isfinite(mpmath.mpf(r.b))):
        raise OracleRangeError(f"non-finite enclosure for {t} at x = {x}")
    memo[t] = r
    return r


def eval_ln(term, x, precision: int = 128) -> LnValue:
    """Enclosure of ln(term(x)) computed with ``precision`` working bits."""
    term = _t(term)
    x = Fraction(x)
    if x <= 1:
        raise PreconditionError("oracle needs x > 1")
    if precision < 16:
        raise PreconditionError("precision must be at least 16 bits")
    with _prec(precision):
        xv = _iv_rational(x)
        r = _eval(term, xv, iv.log(xv), {})
        with mpmath.workprec(precision + 8):
            lo, hi = mpmath.mpf(r.a), mpmath.mpf(r.b)
            mid = (lo + hi) / 2
            # round the radius up so the stated ball still covers [lo, hi]
            rad = max(hi - mid, mid - lo) * (1 + mpmath.mpf(2) ** (-precision))
        return LnValue(mid, rad, r)


def _diff_sign(f: Term, g: Term, x, precision: int) -> tuple[int, object]:
    """Sign of ln f(x) - ln g(x), escalating precision until it separates."""
    p = precision
    while True:
        a = eval_ln(f, x, p).interval
        b = eval_ln(g, x, p).interval
        with _prec(p + 8):
            d = a - b
        if d.a > 0:
            return 1, d
        if d.b < 0:
            return -1, d
        if p >= MAX_PRECISION:
            return 0, d
        # widths shrink with p; stop early when they are already tiny
        width = max(a.b - a.a, b.b - b.a)
        if width < mpmath.mpf(2) ** (-precision):
            return 0, d
        p *= 2


def numeric_compare(f, g, xs: Sequence, precision: int = 128, *, residuals: list | None = None) -> str:
    """``Less``, ``Greater``, ``Mixed`` or ``Indistinguishable``."""
    f, g = _t(f), _t(g)
    if not xs:
        raise PreconditionError("need at least one sample point")
    signs = []
    for x in xs:
        s, d = _diff_sign(f, g, x, precision)
        signs.append(s)
        if residuals is not None:
            residuals.append(d)
    if 1 in signs and -1 in signs:
        return "Mixed"
    if all(s == 1 for s in signs):
        return "Greater"
    if all(s == -1 for s in signs):
        return "Less"
    return "Indistinguishable"


def numeric_limit(f, g, xs: Sequence, precision: int = 128) -> list:
    """Per-point interval enclosures of f(x)/g(x)."""
    f, g = _t(f), _t(g)
    out = []
    for x in xs:
        a = eval_ln(f, x, precision).interval
        b = eval_ln(g, x, precision).interval
        with _prec(precision):
            d = a - b
            if d.b > MAX_LN_EXPONENT or d.a < -MAX_LN_EXPONENT:
                raise OracleRangeError(f"ratio at x = {x} is not representable")
            out.append(iv.exp(d))
    return out
