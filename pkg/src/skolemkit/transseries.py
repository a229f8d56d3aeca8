"""Truncated Hahn series over a recursive monomial group.

A :class:`Monomial` stands for ``exp(gamma) * (log x)**logpow`` where
``gamma`` is a purely infinite exponent: a descending list of
``(monomial, coefficient)`` pairs whose monomials all exceed 1.  The atom
``x`` is ``exp(1 * log x)``.  Monomials are interned, so structural equality
is object identity.

Sometimes an exponent is itself only known up to an error that is not
infinitesimal (for instance the infinite up-part of ``2^x * log(x+1)``).
Such an exponent is wrapped in an opaque :class:`Block` that remembers its
known truncation.  Blocks carrying the same key denote the same exact
exponent and cancel against each other; otherwise comparisons fall back to
the known parts and give up (``UndeterminedError``) when those do not
decide.

A :class:`TruncatedSeries` is a descending tuple of ``(Monomial, Constant)``
terms plus an optional error monomial: everything omitted is ``O(error)``.
"""
from __future__ import annotations

import functools
import itertools
import re
import threading
from fractions import Fraction
from typing import Iterable, Optional

from . import constants as C
from .config import get_config
from .constants import Constant, const
from .errors import EngineFault, UndeterminedError

__all__ = [
    "Monomial", "Block", "TruncatedSeries", "ONE_M", "X", "LOGX",
    "cmp_monomial", "series_add", "series_neg", "series_sub", "series_mul", "series_scale",
    "series_inverse", "series_exp", "series_log", "series_pow", "split",
    "series_const", "series_x", "check_skolem_invariants", "InvariantReport",
]


def _cap() -> int:
    return get_config().precision_cap


def _depth(depth: Optional[int]) -> int:
    return get_config().depth if depth is None else depth


def _sign(c: Constant) -> int:
    s = C.const_sign(c, _cap())
    if s is None:
        raise UndeterminedError(f"sign of coefficient {c} unknown at {_cap()} bits", "precision")
    return s


# ---------------------------------------------------------------------------
# monomials

_intern: dict = {}
_intern_lock = threading.Lock()


class Block:
    """Opaque exact exponent with a known truncation ``known`` (error >= 1)."""

    __slots__ = ("key", "known")

    def __init__(self, key, known: "TruncatedSeries"):
        self.key = key
        self.known = known

    def __hash__(self):
        return hash(self.key)

    def __eq__(self, other):
        return isinstance(other, Block) and self.key == other.key

    @property
    def sort_key(self) -> str:
        return repr(self.key)


_blocks: dict = {}


def _block(key, known: "TruncatedSeries") -> Block:
    b = _blocks.get(key)
    if b is None:
        with _intern_lock:
            b = _blocks.setdefault(key, Block(key, known))
    elif len(known.terms) > len(b.known.terms):
        b.known = known   # longer truncation of the same exact exponent
    return b


class Monomial:
    __slots__ = ("terms", "blocks", "logpow", "_hash", "depth", "__weakref__")

    def __new__(cls, terms: tuple = (), blocks: tuple = (), logpow: int = 0):
        k = (terms, blocks, logpow)
        m = _intern.get(k)
        if m is not None:
            return m
        m = object.__new__(cls)
        m.terms = terms
        m.blocks = blocks
        m.logpow = logpow
        m._hash = hash(k)
        m.depth = 1 + max((t[0].depth for t in terms), default=0)
        with _intern_lock:
            return _intern.setdefault(k, m)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other

    def __reduce__(self):
        return (Monomial, (self.terms, self.blocks, self.logpow))

    def __repr__(self):
        return f"Monomial({render_monomial(self)})"

    def __str__(self):
        return render_monomial(self)

    @property
    def is_one(self) -> bool:
        return self is ONE_M

    @property
    def has_blocks(self) -> bool:
        return bool(self.blocks) or any(t[0].has_blocks for t in self.terms)


ONE_M = Monomial()
LOGX = Monomial((), (), 1)
X = Monomial(((LOGX, C.ONE),), (), 0)

_cmp_memo: dict = {}


def _mcmp(a: Monomial, b: Monomial) -> int:
    """-1/0/1 comparison of monomials; raises UndeterminedError."""
    if a is b:
        return 0
    key = (a, b)
    r = _cmp_memo.get(key)
    if r is not None:
        return r
    r = _mcmp_raw(a, b)
    if len(_cmp_memo) > 2_000_000:
        _cmp_memo.clear()
    _cmp_memo[key] = r
    _cmp_memo[(b, a)] = -r
    return r


def _merge_blocks(a: tuple, b: tuple, sign: int = 1) -> tuple:
    d: dict = {}
    for blk, k in a:
        d[blk.key] = [blk, k]
    for blk, k in b:
        if blk.key in d:
            d[blk.key][1] += sign * k
        else:
            d[blk.key] = [blk, sign * k]
    return tuple(sorted(((blk, k) for blk, k in d.values() if k), key=lambda t: t[0].sort_key))


def _mcmp_raw(a: Monomial, b: Monomial) -> int:
    blocks = _merge_blocks(a.blocks, b.blocks, -1)
    if not blocks:
        A, B = a.terms, b.terms
        i = j = 0
        while i < len(A) or j < len(B):
            if j >= len(B):
                return _sign(A[i][1])
            if i >= len(A):
                return -_sign(B[j][1])
            c = _mcmp(A[i][0], B[j][0])
            if c > 0:
                return _sign(A[i][1])
            if c < 0:
                return -_sign(B[j][1])
            d = C.const_sub(A[i][1], B[j][1])
            if not d.is_zero:
                return _sign(d)
            i += 1
            j += 1
        return (a.logpow > b.logpow) - (a.logpow < b.logpow)
    # materialize the block parts of the exponent difference
    depth = max(len(blk.known.terms) for blk, _ in blocks) + 2
    delta = _exponent_series(a, depth)
    delta = series_sub(delta, _exponent_series(b, depth), depth)
    if delta.terms:
        m, c = delta.terms[0]
        if delta.error is None or _mcmp(m, delta.error) > 0:
            if _mcmp(m, ONE_M) > 0:
                return _sign(c)
    raise UndeterminedError("monomial comparison hidden by truncated exponent", "depth")


def cmp_monomial(a: Monomial, b: Monomial) -> str:
    try:
        c = _mcmp(a, b)
    except UndeterminedError:
        return "Undetermined"
    return "Less" if c < 0 else "Greater" if c > 0 else "Equal"


def _merge_terms(A: tuple, B: tuple, sign: int = 1) -> tuple:
    """Merge two descending (monomial, coeff) tuples, adding coefficients."""
    out = []
    i = j = 0
    while i < len(A) and j < len(B):
        c = _mcmp(A[i][0], B[j][0])
        if c > 0:
            out.append(A[i]); i += 1
        elif c < 0:
            out.append((B[j][0], B[j][1] if sign > 0 else C.const_neg(B[j][1]))); j += 1
        else:
            s = C.const_add(A[i][1], B[j][1]) if sign > 0 else C.const_sub(A[i][1], B[j][1])
            if not s.is_zero:
                out.append((A[i][0], s))
            i += 1; j += 1
    out.extend(A[i:])
    out.extend((m, c if sign > 0 else C.const_neg(c)) for m, c in B[j:])
    return tuple(out)


_mul_memo: dict = {}


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if a is ONE_M:
        return b
    if b is ONE_M:
        return a
    key = (a, b) if id(a) <= id(b) else (b, a)
    r = _mul_memo.get(key)
    if r is None:
        r = Monomial(_merge_terms(a.terms, b.terms), _merge_blocks(a.blocks, b.blocks),
                     a.logpow + b.logpow)
        if len(_mul_memo) > 2_000_000:
            _mul_memo.clear()
        _mul_memo[key] = r
    return r


def mono_inv(a: Monomial) -> Monomial:
    return Monomial(tuple((m, C.const_neg(c)) for m, c in a.terms),
                    tuple((blk, -k) for blk, k in a.blocks), -a.logpow)


def mono_pow(a: Monomial, k: int) -> Monomial:
    if k == 0:
        return ONE_M
    if k < 0:
        return mono_pow(mono_inv(a), -k)
    kc = const(k)
    return Monomial(tuple((m, C.const_mul(c, kc)) for m, c in a.terms),
                    tuple((blk, n * k) for blk, n in a.blocks), a.logpow * k)


def _exponent_series(m: Monomial, depth: int) -> "TruncatedSeries":
    """log of the exp-part of m as a series (blocks materialized)."""
    s = TruncatedSeries(m.terms, None)
    for blk, k in m.blocks:
        s = series_add(s, series_scale(blk.known, const(k)), depth)
    return s


# ---------------------------------------------------------------------------
# series

class TruncatedSeries:
    __slots__ = ("terms", "error", "key")

    def __init__(self, terms: tuple = (), error: Optional[Monomial] = None, key=None):
        self.terms = tuple(terms)
        self.error = error
        self.key = key

    def __repr__(self):
        return f"TruncatedSeries({render_series(self)})"

    def __str__(self):
        return render_series(self)

    def __eq__(self, other):
        return (isinstance(other, TruncatedSeries) and self.terms == other.terms
                and self.error is other.error)

    def __hash__(self):
        return hash((self.terms, self.error))

    @property
    def is_exact(self) -> bool:
        return self.error is None

    @property
    def lead(self) -> tuple[Monomial, Constant]:
        if not self.terms:
            raise UndeterminedError("series has no known terms", "depth")
        return self.terms[0]

    def top(self) -> Optional[Monomial]:
        """Largest monomial present: the lead, else the error order."""
        return self.terms[0][0] if self.terms else self.error

    def truncate(self, depth: int) -> "TruncatedSeries":
        if len(self.terms) <= depth:
            return self
        return TruncatedSeries(self.terms[:depth], self.terms[depth][0], self.key)

    def coefficient(self, m: Monomial) -> Optional[Constant]:
        for mm, c in self.terms:
            if mm is m:
                return c
        return None

    def is_truncation_of(self, other: "TruncatedSeries") -> bool:
        n = len(self.terms)
        return self.terms == other.terms[:n]


def _with_key(s: TruncatedSeries, key) -> TruncatedSeries:
    s.key = key
    return s


def _k(op, *series):
    if all(s.key is not None for s in series):
        return (op,) + tuple(s.key for s in series)
    return None


def series_const(c) -> TruncatedSeries:
    c = C._c(c)
    return TruncatedSeries(() if c.is_zero else ((ONE_M, c),), None, ("const", c.key))


def series_x() -> TruncatedSeries:
    return TruncatedSeries(((X, C.ONE),), None, ("x",))


def series_monomial(m: Monomial, c=C.ONE) -> TruncatedSeries:
    return TruncatedSeries(((m, C._c(c)),), None)


def _max_err(a: Optional[Monomial], b: Optional[Monomial]) -> Optional[Monomial]:
    if a is None:
        return b
    if b is None:
        return a
    return a if _mcmp(a, b) >= 0 else b


def _finish(terms: tuple, error: Optional[Monomial], depth: int, key=None) -> TruncatedSeries:
    """Drop terms at or below the error order and truncate to depth."""
    if error is not None:
        kept = []
        for m, c in terms:
            if _mcmp(m, error) > 0:
                kept.append((m, c))
            else:
                break
        terms = tuple(kept)
    if len(terms) > depth:
        error = terms[depth][0]
        terms = terms[:depth]
    return TruncatedSeries(terms, error, key)


def series_add(f: TruncatedSeries, g: TruncatedSeries, depth: Optional[int] = None) -> TruncatedSeries:
    depth = _depth(depth)
    err = _max_err(f.error, g.error)
    return _finish(_merge_terms(f.terms, g.terms), err, depth, _k("add", f, g))


def series_neg(f: TruncatedSeries) -> TruncatedSeries:
    return TruncatedSeries(tuple((m, C.const_neg(c)) for m, c in f.terms), f.error, _k("neg", f))


def series_sub(f, g, depth: Optional[int] = None) -> TruncatedSeries:
    depth = _depth(depth)
    err = _max_err(f.error, g.error)
    return _finish(_merge_terms(f.terms, g.terms, -1), err, depth, _k("sub", f, g))


def series_scale(f: TruncatedSeries, c: Constant, m: Monomial = ONE_M) -> TruncatedSeries:
    """c * m * f."""
    c = C._c(c)
    if c.is_zero:
        return TruncatedSeries((), None)
    terms = tuple((mono_mul(mm, m), C.const_mul(cc, c)) for mm, cc in f.terms)
    err = mono_mul(f.error, m) if f.error is not None else None
    return TruncatedSeries(terms, err)


def series_mul(f: TruncatedSeries, g: TruncatedSeries, depth: Optional[int] = None) -> TruncatedSeries:
    depth = _depth(depth)
    key = _k("mul", f, g)
    err = None
    if f.error is not None:
        tg = g.top()
        if tg is not None:
            err = mono_mul(f.error, tg)
    if g.error is not None:
        tf = f.top()
        if tf is not None:
            err = _max_err(err, mono_mul(g.error, tf))
    acc: dict = {}
    order: list = []
    for mf, cf in f.terms:
        for mg, cg in g.terms:
            m = mono_mul(mf, mg)
            if err is not None and _mcmp(m, err) <= 0:
                break  # later mg are smaller still
            c = C.const_mul(cf, cg)
            if m in acc:
                acc[m] = C.const_add(acc[m], c)
            else:
                acc[m] = c
                order.append(m)
    items = [(m, acc[m]) for m in order if not acc[m].is_zero]
    items.sort(key=functools.cmp_to_key(lambda s, t: _mcmp(t[0], s[0])))
    return _finish(tuple(items), err, depth, key)


def split(f: TruncatedSeries) -> tuple[TruncatedSeries, Constant, TruncatedSeries]:
    """(up, real, down) parts.  Raises when the error hides the real part."""
    if f.error is not None and _mcmp(f.error, ONE_M) >= 0:
        raise UndeterminedError("error order >= 1 hides the real part", "depth")
    up, down = [], []
    real = C.ZERO
    for m, c in f.terms:
        s = _mcmp(m, ONE_M)
        if s > 0:
            up.append((m, c))
        elif s == 0:
            real = c
        else:
            down.append((m, c))
    return TruncatedSeries(tuple(up), None), real, TruncatedSeries(tuple(down), f.error)


def _engine_exp(r: Constant) -> Constant:
    """exp(r) with rational parts written via exp_of_rational."""
    if r.is_zero:
        return C.ONE
    if r.den:
        return C.const_exp(r)
    q = Fraction(0)
    rest = C.ZERO
    for m, c in r.num:
        if not m:
            q += c
        else:
            rest = C.const_add(rest, C._make({m: c}))
    out = C.exp_of_rational(q)
    if not rest.is_zero:
        out = C.const_mul(out, C.const_exp(rest))
    return out


def _power_series_sum(d: TruncatedSeries, coeff, depth: int) -> TruncatedSeries:
    """sum_{k>=0} coeff(k) d^k for infinitesimal d, with remainder bound."""
    total = TruncatedSeries(((ONE_M, C.ONE),), None) if coeff(0) else TruncatedSeries((), None)
    top = d.top()
    if top is None:
        return total
    power = TruncatedSeries(((ONE_M, C.ONE),), None)
    bound = ONE_M
    for k in range(1, depth + 2):
        power = series_mul(power, d, depth)
        bound = mono_mul(bound, top)
        ck = coeff(k)
        if ck:
            total = series_add(total, series_scale(power, const(ck)), depth)
        nxt = mono_mul(bound, top)
        if total.error is not None and _mcmp(nxt, total.error) <= 0:
            return total
    return series_add(total, TruncatedSeries((), mono_mul(bound, top)), depth)


def _factorial_inv(k: int) -> Fraction:
    f = 1
    for i in range(2, k + 1):
        f *= i
    return Fraction(1, f)


_block_counter = itertools.count()


def series_exp(f: TruncatedSeries, depth: Optional[int] = None) -> TruncatedSeries:
    depth = _depth(depth)
    key = _k("exp", f)
    if f.error is not None and _mcmp(f.error, ONE_M) >= 0:
        bkey = key if key is not None else ("anon", next(_block_counter))
        blk = _block(bkey, f)
        return TruncatedSeries(((Monomial((), ((blk, 1),), 0), C.ONE),), None, key)
    up, real, down = split(f)
    mono = Monomial(up.terms, (), 0)
    taylor = _power_series_sum(down, _factorial_inv, depth)
    return _with_key(series_scale(taylor, _engine_exp(real), mono), key)


def _lead_unit(f: TruncatedSeries) -> tuple[Monomial, Constant, TruncatedSeries]:
    """Write f = c*m*(1 + eps); return (m, c, eps)."""
    m, c = f.lead
    eps = series_scale(f, C.const_div(C.ONE, c, _cap()), mono_inv(m))
    rest = tuple(t for t in eps.terms if t[0] is not ONE_M)
    return m, c, TruncatedSeries(rest, eps.error)


def series_inverse(f: TruncatedSeries, depth: Optional[int] = None) -> TruncatedSeries:
    depth = _depth(depth)
    m, c, eps = _lead_unit(f)
    _sign(c)
    geo = _power_series_sum(eps, lambda k: (-1) ** k, depth)
    return _with_key(series_scale(geo, C.const_div(C.ONE, c, _cap()), mono_inv(m)), _k("inv", f))


def series_log(f: TruncatedSeries, depth: Optional[int] = None) -> TruncatedSeries:
    depth = _depth(depth)
    m, c, eps = _lead_unit(f)
    if m.logpow != 0:
        raise EngineFault("log of a monomial carrying a power of log x is not supported")
    if _sign(c) < 0:
        raise ValueError("log of a series with negative leading coefficient")
    merc = _power_series_sum(eps, lambda k: Fraction((-1) ** (k + 1), k) if k else 0, depth)
    gamma = _exponent_series(m, depth)
    out = series_add(gamma, series_const(C.const_log(c, _cap())), depth)
    return _with_key(series_add(out, merc, depth), _k("log", f))


def _natural_value(g: TruncatedSeries) -> Optional[int]:
    if g.error is None and len(g.terms) == 1 and g.terms[0][0] is ONE_M:
        q = g.terms[0][1].rational
        if q is not None and q.denominator == 1 and q >= 0:
            return int(q)
    if g.error is None and not g.terms:
        return 0
    return None


def series_pow(f: TruncatedSeries, g: TruncatedSeries, depth: Optional[int] = None) -> TruncatedSeries:
    depth = _depth(depth)
    key = _k("pow", f, g)
    n = _natural_value(g)
    if n is not None and n <= 64:
        out = TruncatedSeries(((ONE_M, C.ONE),), None)
        base = f
        while n:
            if n & 1:
                out = series_mul(out, base, depth)
            n >>= 1
            if n:
                base = series_mul(base, base, depth)
        return _with_key(out, key)
    return _with_key(series_exp(series_mul(g, series_log(f, depth), depth), depth), key)


# ---------------------------------------------------------------------------
# invariant checks on full Skolem expansions

class InvariantReport:
    def __init__(self):
        self.violations: list[str] = []

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return "InvariantReport(ok)" if self.ok else f"InvariantReport({self.violations})"


def _has_logx(m: Monomial) -> bool:
    return m.logpow != 0


def check_skolem_invariants(f: TruncatedSeries, *, raise_on_failure: bool = False) -> InvariantReport:
    """Support in {1} u [x, oo), natural constant term, no log x, E-membership."""
    rep = InvariantReport()
    for i, (m, c) in enumerate(f.terms):
        if _has_logx(m):
            rep.violations.append(f"log x survives in {render_monomial(m)}")
        if m is not ONE_M and _mcmp(m, X) < 0:
            rep.violations.append(f"support monomial {render_monomial(m)} is neither 1 nor >= x")
        if m is ONE_M and not c.is_natural:
            rep.violations.append(f"constant term {c} is not a natural number")
        if not c.flag.in_e:
            rep.violations.append(f"coefficient {c} not known to lie in E")
        if i == 0 and c.flag is not C.EMembership.InEPlus:
            rep.violations.append(f"leading coefficient {c} not known to lie in E+")
    if raise_on_failure and not rep.ok:
        raise EngineFault("; ".join(rep.violations))
    return rep


# ---------------------------------------------------------------------------
# text form

_SIMPLE = re.compile(r"^-?[A-Za-z0-9_]+$")


def _log_base(c: Constant) -> Optional[Fraction]:
    """q when c is exactly log(q) for a rational q > 0."""
    if c.den:
        return None
    q = Fraction(1)
    for m, v in c.num:
        if len(m) != 1 or m[0][1] != 1 or m[0][0].kind != "log" or v.denominator != 1:
            return None
        p = m[0][0].arg.rational
        if p is None or p.denominator != 1:
            return None
        q *= Fraction(p) ** int(v)
    return q


def _fmt_coeff_factor(c: Constant) -> str:
    s = str(c)
    return f"({s})" if c.is_compound() else s


def _paren(s: str) -> str:
    return s if _SIMPLE.match(s) else f"({s})"


def render_monomial(m: Monomial) -> str:
    if m is ONE_M:
        return "1"
    if m is LOGX:
        return "log(x)"
    parts: list[str] = []
    xpow: list = []       # theta with x^theta
    groups: dict = {}     # base q -> list of monomials M with q^M
    order: list = []
    others: list = []
    for mm, c in m.terms:
        if mm.logpow == 1:
            inner = Monomial(mm.terms, mm.blocks, 0)
            xpow.append((inner, c))
            if "x" not in order:
                order.append("x")
            continue
        q = _log_base(c)
        if q is not None and q > 1:
            key = q
            groups.setdefault(key, []).append((mm, C.ONE))
            if key not in order:
                order.append(key)
        elif q is not None and 0 < q < 1:
            key = q
            groups.setdefault(key, []).append((mm, C.ONE))
            if key not in order:
                order.append(key)
        else:
            others.append((mm, c))
            if "o" not in order:
                order.append("o")
    for k in order:
        if k == "x":
            theta = _render_terms(tuple(xpow), compact=True)
            parts.append("x" if theta == "1" else f"x^{_paren(theta)}")
        elif k == "o":
            parts.append(f"exp({_render_terms(tuple(others), compact=True)})")
        else:
            base = str(k.numerator) if k.denominator == 1 else f"({k.numerator}/{k.denominator})"
            parts.append(f"{base}^{_paren(_render_terms(tuple(groups[k]), compact=True))}")
    for blk, k in m.blocks:
        inner = render_series(blk.known, compact=True)
        s = f"exp({inner})"
        parts.append(s if k == 1 else f"{s}^{_paren(str(k))}")
    if m.logpow:
        parts.append("log(x)" if m.logpow == 1 else f"log(x)^{_paren(str(m.logpow))}")
    return "*".join(parts)


def _render_terms(terms: tuple, compact: bool = False) -> str:
    if not terms:
        return "0"
    plus, minus = ("+", "-") if compact else (" + ", " - ")
    out = []
    for i, (m, c) in enumerate(terms):
        neg = False
        try:
            neg = C.const_sign(c, 64) == -1
        except Exception:  # pragma: no cover - display only
            neg = False
        a = C.const_neg(c) if neg else c
        if m is ONE_M:
            body = str(a)
        else:
            ms = render_monomial(m)
            if a == C.ONE:
                body = ms
            else:
                body = f"{_fmt_coeff_factor(a)}*{ms}"
        if i == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((minus if neg else plus) + body)
    return "".join(out)


def render_series(f: TruncatedSeries, compact: bool = False) -> str:
    s = _render_terms(f.terms, compact) if f.terms else ""
    if f.error is not None:
        o = f"O({render_monomial(f.error)})"
        if not s:
            return o
        return s + ("+" if compact else " + ") + o
    return s or "0"
