"""Closed-form real constants over Q with exp and log, and rigorous comparison.

A :class:`Constant` is kept in a canonical shape: a Laurent polynomial with
rational coefficients in *atoms* ``exp(c)`` and ``log(c)``, divided by a
product of normalized multi-term polynomial factors.  Two constants that
agree as rational functions of their atoms have an exactly-zero difference,
which is what ``cmp_const`` reports as ``EqualExact``.  Anything subtler (say
``exp(1)**2`` against ``exp(2)``) is left to interval arithmetic, which can
only ever separate values, so equal-but-unrecognized values come back as
``Unknown``.

Atoms are never merged (``exp(a)*exp(b)`` stays a product of two atoms);
callers that want a canonical exponential of a rational use
:func:`exp_of_rational`.
"""
from __future__ import annotations

import decimal
import enum
import functools
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

import mpmath
from mpmath import iv

from .errors import UndeterminedError

__all__ = [
    "Constant", "Interval", "EMembership", "Ordering",
    "const", "const_add", "const_sub", "const_mul", "const_div", "const_neg",
    "const_exp", "const_log", "const_pow", "exp_of_rational",
    "eval_interval", "cmp_const", "const_sign", "ZERO", "ONE", "E",
    "DEFAULT_PRECISION_CAP",
]

DEFAULT_PRECISION_CAP = 256
_MAX_WORKPREC = 1 << 16


class EMembership(enum.Enum):
    InEPlus = "InEPlus"
    InE = "InE"
    Outside = "Outside"
    Unknown = "Unknown"

    @property
    def in_e(self) -> bool:
        return self in (EMembership.InEPlus, EMembership.InE)


class Ordering(enum.Enum):
    Less = "Less"
    Greater = "Greater"
    EqualExact = "EqualExact"
    Unknown = "Unknown"


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty interval")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, v) -> bool:
        return self.lo <= v <= self.hi

    def overlaps(self, other: "Interval") -> bool:
        return not (self.hi < other.lo or other.hi < self.lo)

    def decimal(self, digits: int = 15) -> tuple[str, str]:
        """Decimal strings rounded outward, so the printed pair still encloses."""
        return decimal_bound(self.lo, digits, up=False), decimal_bound(self.hi, digits, up=True)


def decimal_bound(q: Fraction, digits: int, up: bool) -> str:
    ctx = decimal.Context(prec=digits, rounding=decimal.ROUND_CEILING if up else decimal.ROUND_FLOOR,
                          Emax=decimal.MAX_EMAX, Emin=decimal.MIN_EMIN)
    return str(ctx.divide(decimal.Decimal(q.numerator), decimal.Decimal(q.denominator)))


def iv_decimal(v, digits: int = 15) -> list[str]:
    """Outward decimal rendering of an mpmath interval."""
    lo, hi = _endpoints(v)
    return [decimal_bound(lo, digits, up=False), decimal_bound(hi, digits, up=True)]


# ---------------------------------------------------------------------------
# atoms, monomials, polynomials
#
# A monomial is a tuple of (Atom, exponent) sorted by atom key; a polynomial
# is a dict {monomial: Fraction}.  Monomial order is lexicographic over the
# global atom order (atoms sorted by key, larger exponent wins).

class Atom:
    __slots__ = ("kind", "arg", "key", "_hash")

    def __init__(self, kind: str, arg: "Constant"):
        self.kind = kind
        self.arg = arg
        if kind == "exp" and arg == ONE:
            self.key = "e"
        else:
            self.key = f"{kind}({arg.key})"
        self._hash = hash(self.key)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return isinstance(other, Atom) and self.key == other.key

    def __repr__(self):
        return self.key


Mono = tuple  # tuple[tuple[Atom, int], ...]
Poly = dict   # dict[Mono, Fraction]


def _mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        ka, kb = a[i][0].key, b[j][0].key
        if ka < kb:
            out.append(a[i]); i += 1
        elif ka > kb:
            out.append(b[j]); j += 1
        else:
            e = a[i][1] + b[j][1]
            if e:
                out.append((a[i][0], e))
            i += 1; j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def _mono_inv(a: Mono) -> Mono:
    return tuple((at, -e) for at, e in a)


def _mono_cmp(a: Mono, b: Mono) -> int:
    i = j = 0
    while i < len(a) or j < len(b):
        if j >= len(b) or (i < len(a) and a[i][0].key < b[j][0].key):
            return 1 if a[i][1] > 0 else -1
        if i >= len(a) or b[j][0].key < a[i][0].key:
            return -1 if b[j][1] > 0 else 1
        if a[i][1] != b[j][1]:
            return 1 if a[i][1] > b[j][1] else -1
        i += 1; j += 1
    return 0


_mono_sort_key = functools.cmp_to_key(_mono_cmp)


def _poly_add(a: Poly, b: Poly, sign: int = 1) -> Poly:
    out = dict(a)
    for m, q in b.items():
        v = out.get(m, 0) + sign * q
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _poly_mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ma, qa in a.items():
        for mb, qb in b.items():
            m = _mono_mul(ma, mb)
            v = out.get(m, 0) + qa * qb
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def _poly_scale(a: Poly, q: Fraction, m: Mono = ()) -> Poly:
    return {_mono_mul(k, m): v * q for k, v in a.items()} if q else {}


def _poly_pow(a: Poly, k: int) -> Poly:
    out: Poly = {(): Fraction(1)}
    for _ in range(k):
        out = _poly_mul(out, a)
    return out


def _lead(a: Poly) -> Mono:
    return max(a, key=_mono_sort_key)


def _min_exponents(a: Poly) -> Mono:
    """Per-atom minimum exponent over the monomials of a (absent counts as 0)."""
    atoms: dict[str, Atom] = {}
    for m in a:
        for at, _ in m:
            atoms[at.key] = at
    out = []
    for k in sorted(atoms):
        lo = min(dict((at.key, e) for at, e in m).get(k, 0) for m in a)
        if lo:
            out.append((atoms[k], lo))
    return tuple(out)


def _normalize_factor(p: Poly) -> tuple[Fraction, Mono, Poly]:
    """Write p = q * m * P with P content-free, nonnegative, leading coeff 1."""
    m0 = _min_exponents(p)
    inv = _mono_inv(m0)
    shifted = {_mono_mul(m, inv): v for m, v in p.items()}
    lc = shifted[_lead(shifted)]
    return lc, m0, {m: v / lc for m, v in shifted.items()}


def _mono_divides(a: Mono, b: Mono) -> bool:
    """a | b for nonnegative-exponent monomials."""
    db = dict((at.key, e) for at, e in b)
    return all(db.get(at.key, 0) >= e for at, e in a)


def _poly_exact_div(q: Poly, p: Poly) -> Poly | None:
    """q / p if p divides q exactly (p normalized), else None."""
    if not q:
        return {}
    s = _min_exponents(q)
    sinv = _mono_inv(s)
    r = {_mono_mul(m, sinv): v for m, v in q.items()}
    lp = _lead(p)
    lc = p[lp]
    lpinv = _mono_inv(lp)
    quot: Poly = {}
    steps = 0
    while r:
        steps += 1
        if steps > 10000:
            return None
        lr = _lead(r)
        if not _mono_divides(lp, lr):
            return None
        tm = _mono_mul(lr, lpinv)
        tq = r[lr] / lc
        quot[tm] = quot.get(tm, 0) + tq
        r = _poly_add(r, _poly_scale(p, tq, tm), -1)
    return {_mono_mul(m, s): v for m, v in quot.items() if v}


def _freeze(p: Poly) -> tuple:
    return tuple(sorted(p.items(), key=lambda kv: _mono_sort_key(kv[0]), reverse=True))


# ---------------------------------------------------------------------------
# Constant

class Constant:
    """An exact real constant in canonical form (see module docstring)."""

    __slots__ = ("num", "den", "key", "_hash", "_cache", "_flag", "__weakref__")

    def __init__(self, num: tuple, den: tuple):
        self.num = num          # frozen poly
        self.den = den          # tuple of (frozen poly, multiplicity)
        self.key = _render(num, den)
        self._hash = hash(self.key)
        self._cache: dict = {}
        self._flag: EMembership | None = None

    # -- protocol --
    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = const(other)
        return isinstance(other, Constant) and self.key == other.key

    def __repr__(self):
        return f"Constant({self.key!r})"

    def __str__(self):
        return self.key

    def __add__(self, o):
        return const_add(self, _c(o))

    __radd__ = __add__

    def __sub__(self, o):
        return const_sub(self, _c(o))

    def __rsub__(self, o):
        return const_sub(_c(o), self)

    def __mul__(self, o):
        return const_mul(self, _c(o))

    __rmul__ = __mul__

    def __truediv__(self, o):
        return const_div(self, _c(o))

    def __rtruediv__(self, o):
        return const_div(_c(o), self)

    def __neg__(self):
        return const_neg(self)

    # -- inspection --
    @property
    def is_zero(self) -> bool:
        return not self.num

    @property
    def is_rational(self) -> bool:
        return not self.den and all(not m for m, _ in self.num)

    @property
    def rational(self) -> Fraction | None:
        """Exact rational value when the constant is exp/log free."""
        if not self.is_rational:
            return None
        return self.num[0][1] if self.num else Fraction(0)

    @property
    def is_natural(self) -> bool:
        q = self.rational
        return q is not None and q.denominator == 1 and q >= 0

    @property
    def is_single_term(self) -> bool:
        return not self.den and len(self.num) == 1

    @property
    def flag(self) -> EMembership:
        if self._flag is None:
            self._flag = _membership(self)
        return self._flag

    def atoms(self) -> set[Atom]:
        out = set()
        for m, _ in self.num:
            out.update(a for a, _ in m)
        for p, _ in self.den:
            for m, _ in p:
                out.update(a for a, _ in m)
        return out

    def render(self) -> str:
        return self.key

    def is_compound(self) -> bool:
        """True when the text form needs parentheses as a factor."""
        if self.den:
            return True
        if len(self.num) != 1:
            return True
        return self.num[0][1].denominator != 1


def _c(v) -> Constant:
    return v if isinstance(v, Constant) else const(v)


def _make(num: Poly, den: dict | None = None) -> Constant:
    if not num:
        return ZERO
    if den:
        den = dict(den)
        for pk in list(den):
            k = den[pk]
            p = dict(pk)
            while k:
                qt = _poly_exact_div(num, p)
                if qt is None:
                    break
                num = qt
                k -= 1
            if k:
                den[pk] = k
            else:
                del den[pk]
    frozen_den = tuple(sorted(den.items(), key=lambda kv: _render(kv[0], ()))) if den else ()
    return Constant(_freeze(num), frozen_den)


def const(v: Union[int, Fraction, str, Constant]) -> Constant:
    if isinstance(v, Constant):
        return v
    q = Fraction(v)
    if q == 0:
        return ZERO
    if q in _RAT_CACHE:
        return _RAT_CACHE[q]
    c = Constant(((((), q),)), ())
    if abs(q.numerator) < 64 and q.denominator < 64:
        _RAT_CACHE[q] = c
    return c


_RAT_CACHE: dict[Fraction, Constant] = {}


def _den_union(a: Constant, b: Constant):
    da = dict(a.den)
    db = dict(b.den)
    keys = set(da) | set(db)
    D = {k: max(da.get(k, 0), db.get(k, 0)) for k in keys}
    na = dict(a.num)
    nb = dict(b.num)
    for k, d in D.items():
        p = dict(k)
        if d - da.get(k, 0):
            na = _poly_mul(na, _poly_pow(p, d - da.get(k, 0)))
        if d - db.get(k, 0):
            nb = _poly_mul(nb, _poly_pow(p, d - db.get(k, 0)))
    return na, nb, D


def const_add(a: Constant, b: Constant) -> Constant:
    a, b = _c(a), _c(b)
    if a.is_zero:
        return b
    if b.is_zero:
        return a
    if not a.den and not b.den:
        return _make(_poly_add(dict(a.num), dict(b.num)))
    na, nb, D = _den_union(a, b)
    return _make(_poly_add(na, nb), D)


def const_neg(a: Constant) -> Constant:
    return Constant(tuple((m, -q) for m, q in a.num), a.den) if a.num else a


def const_sub(a: Constant, b: Constant) -> Constant:
    return const_add(a, const_neg(_c(b)))


def const_mul(a: Constant, b: Constant) -> Constant:
    a, b = _c(a), _c(b)
    if a.is_zero or b.is_zero:
        return ZERO
    if a is ONE:
        return b
    if b is ONE:
        return a
    num = _poly_mul(dict(a.num), dict(b.num))
    if not a.den and not b.den:
        return _make(num)
    D = dict(a.den)
    for k, d in b.den:
        D[k] = D.get(k, 0) + d
    return _make(num, D)


def _inverse(a: Constant) -> Constant:
    if a.is_zero:
        raise ZeroDivisionError("division by exact zero")
    den_poly: Poly = {(): Fraction(1)}
    for k, d in a.den:
        den_poly = _poly_mul(den_poly, _poly_pow(dict(k), d))
    if len(a.num) == 1:
        m, q = a.num[0]
        return _make(_poly_scale(den_poly, 1 / q, _mono_inv(m)))
    lc, m0, p = _normalize_factor(dict(a.num))
    return _make(_poly_scale(den_poly, 1 / lc, _mono_inv(m0)), {_freeze(p): 1})


def const_div(a: Constant, b: Constant, precision_cap: int = DEFAULT_PRECISION_CAP) -> Constant:
    a, b = _c(a), _c(b)
    if b.is_zero:
        raise ZeroDivisionError("division by exact zero")
    if not b.is_rational and const_sign(b, precision_cap) is None:
        raise ZeroDivisionError(f"division by possible zero: {b}")
    return const_mul(a, _inverse(b))


def const_pow(a: Constant, k: int) -> Constant:
    a = _c(a)
    if k == 0:
        return ONE
    if k < 0:
        return const_pow(const_div(ONE, a), -k)
    if a.is_single_term:
        m, q = a.num[0]
        return _make({tuple((at, e * k) for at, e in m): q ** k})
    out, base = ONE, a
    while k:
        if k & 1:
            out = const_mul(out, base)
        k >>= 1
        if k:
            base = const_mul(base, base)
    return out


# -- exp / log ---------------------------------------------------------------

_ATOMS: dict[tuple[str, str], Atom] = {}
_atom_lock = threading.Lock()


def _atom(kind: str, arg: Constant) -> Atom:
    k = (kind, arg.key)
    at = _ATOMS.get(k)
    if at is None:
        with _atom_lock:
            at = _ATOMS.setdefault(k, Atom(kind, arg))
    return at


def _atom_const(at: Atom, e: int = 1) -> Constant:
    return Constant(((((at, e),), Fraction(1)),), ())


def const_exp(a: Constant) -> Constant:
    a = _c(a)
    if a.is_zero:
        return ONE
    if a.den:
        return _atom_const(_atom("exp", a))
    result = ONE
    rest: Poly = {}
    for m, q in a.num:
        if len(m) == 1 and m[0][1] == 1 and m[0][0].kind == "log" and q.denominator == 1:
            result = const_mul(result, const_pow(m[0][0].arg, int(q)))
        else:
            rest[m] = q
    if rest:
        result = const_mul(result, _atom_const(_atom("exp", _make(rest))))
    return result


def exp_of_rational(q: Fraction) -> Constant:
    """exp(q) written canonically as exp(1/d)**n for q = n/d.

    Used by the series engine so that e.g. ``e*e`` and ``exp(2)`` coming from
    different expansion paths share one representation.
    """
    q = Fraction(q)
    if q == 0:
        return ONE
    base = _atom("exp", const(Fraction(1, q.denominator)))
    return _make({((base, q.numerator),): Fraction(1)})


def _factor_int(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _log_rational(q: Fraction) -> Constant:
    if q <= 0:
        raise ValueError("log of nonpositive rational")
    out: Poly = {}
    for p, e in _factor_int(q.numerator).items():
        out[((_atom("log", const(p)), 1),)] = Fraction(e)
    for p, e in _factor_int(q.denominator).items():
        m = ((_atom("log", const(p)), 1),)
        out[m] = out.get(m, 0) - e
    return _make(out)


def const_log(a: Constant, precision_cap: int = DEFAULT_PRECISION_CAP) -> Constant:
    a = _c(a)
    q = a.rational
    if q is not None:
        return _log_rational(q)
    s = const_sign(a, precision_cap)
    if s is None or s < 0:
        raise ValueError(f"log of possibly nonpositive constant {a}")
    if a.is_single_term:
        m, q = a.num[0]
        out = _log_rational(abs(q))
        logpart = []
        for at, e in m:
            if at.kind == "exp":
                out = const_add(out, const_mul(const(e), at.arg))
            else:
                logpart.append((at, e))
        if logpart:
            inner = _make({tuple(logpart): Fraction(1 if q > 0 else -1)})
            out = const_add(out, _atom_const(_atom("log", inner)))
        return out
    if not a.den:
        lc = abs(a.num[0][1])
        rest = _make({m: v / lc for m, v in a.num})
        return const_add(_log_rational(lc), _atom_const(_atom("log", rest)))
    return _atom_const(_atom("log", a))




# ---------------------------------------------------------------------------
# rendering

def _fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _fmt_mono(m: Mono) -> str:
    parts = []
    for at, e in m:
        parts.append(at.key if e == 1 else f"{at.key}^{e}" if e > 0 else f"{at.key}^({e})")
    return "*".join(parts)


def _fmt_term(m: Mono, q: Fraction, first: bool) -> str:
    sign = "-" if q < 0 else ("" if first else "+")
    q = abs(q)
    if not m:
        return sign + _fmt_q(q)
    body = _fmt_mono(m)
    if q.numerator != 1:
        body = f"{q.numerator}*{body}"
    if q.denominator != 1:
        body = f"{body}/{q.denominator}"
    return sign + body


def _fmt_poly(p: tuple) -> str:
    if not p:
        return "0"
    return "".join(_fmt_term(m, q, i == 0) for i, (m, q) in enumerate(p))


def _render(num: tuple, den: tuple) -> str:
    s = _fmt_poly(num)
    if not den:
        return s
    if len(num) > 1:
        s = f"({s})"
    facs = []
    for p, k in den:
        f = f"({_fmt_poly(p)})"
        facs.append(f if k == 1 else f"{f}^{k}")
    d = "*".join(facs)
    return f"{s}/{d}" if len(facs) == 1 else f"{s}/({d})"


# ---------------------------------------------------------------------------
# membership in E+ / E

def _poly_membership(p: tuple) -> EMembership:
    allpos = True
    for m, q in p:
        for at, _ in m:
            if at.kind != "exp" or not at.arg.flag.in_e:
                return EMembership.Unknown
        if q <= 0:
            allpos = False
    return EMembership.InEPlus if allpos else EMembership.InE


def _membership(c: Constant) -> EMembership:
    if c.is_zero:
        return EMembership.InE
    num = _poly_membership(c.num)
    if num is EMembership.Unknown:
        return num
    for p, _ in c.den:
        if _poly_membership(p) is not EMembership.InEPlus:
            return EMembership.Unknown
    return num


# ---------------------------------------------------------------------------
# interval evaluation

_iv_lock = threading.RLock()


def _iv_atom(at: Atom, wp: int):
    cache = at.arg._cache
    key = ("atom", at.kind, wp)
    v = cache.get(key)
    if v is None:
        x = _iv_eval(at.arg, wp)
        if at.kind == "exp":
            v = iv.exp(x)
        else:
            if not x.a > 0:
                raise ValueError(f"log of possibly nonpositive value {at.arg}")
            v = iv.log(x)
        cache[key] = v
    return v


def _iv_rat(q: Fraction):
    return iv.mpf(q.numerator) / q.denominator


def _iv_poly(p: tuple, wp: int):
    total = iv.mpf(0)
    for m, q in p:
        t = _iv_rat(q)
        for at, e in m:
            t = t * (_iv_atom(at, wp) ** e)
        total = total + t
    return total


def _iv_eval(c: Constant, wp: int):
    key = ("val", wp)
    v = c._cache.get(key)
    if v is not None:
        return v
    v = _iv_poly(c.num, wp)
    for p, k in c.den:
        d = _iv_poly(p, wp) ** k
        if d.a <= 0 <= d.b:
            raise ZeroDivisionError(f"denominator of {c} not separated from 0")
        v = v / d
    c._cache[key] = v
    return v


def _raw_fraction(raw) -> Fraction:
    sign, man, exp, bc = raw
    if not man:
        if raw == mpmath.libmp.fzero:
            return Fraction(0)
        raise OverflowError("infinite interval endpoint")
    v = Fraction(int(man) * 2 ** exp) if exp >= 0 else Fraction(int(man), 2 ** -exp)
    return -v if sign else v


def _endpoints(v) -> tuple[Fraction, Fraction]:
    """Exact rational endpoints of an mpmath interval (no rounding)."""
    lo, hi = v._mpi_
    return _raw_fraction(lo), _raw_fraction(hi)


def _to_fraction(x) -> Fraction:
    if hasattr(x, "_mpi_"):
        return _endpoints(x)[0]
    return _raw_fraction(mpmath.mpf(x)._mpf_)


def _eval_at(c: Constant, wp: int):
    with _iv_lock:
        old = iv.prec
        iv.prec = wp
        try:
            return _iv_eval(c, wp)
        finally:
            iv.prec = old


def eval_interval(c: Constant, precision: int = 53) -> Interval:
    """Rigorous enclosure of ``c``; width <= 2**-precision unless the working
    precision limit is reached first."""
    c = _c(c)
    q = c.rational
    if q is not None:
        return Interval(q, q)
    target = Fraction(1, 2 ** precision)
    wp = precision + 32
    last = None
    while wp <= _MAX_WORKPREC:
        try:
            v = _eval_at(c, wp)
        except ZeroDivisionError:
            v = None
        except ValueError:
            v = None
        if v is not None:
            last = Interval(*_endpoints(v))
            if last.width <= target:
                return last
        wp *= 2
    if last is None:
        raise ZeroDivisionError(f"cannot evaluate {c}: obstruction at maximum precision")
    return last


def const_sign(c: Constant, precision_cap: int = DEFAULT_PRECISION_CAP) -> int | None:
    """+1, -1, 0 (exact zero) or None when the cap is reached."""
    c = _c(c)
    if c.is_zero:
        return 0
    q = c.rational
    if q is not None:
        return 1 if q > 0 else -1
    # normalize orientation so that sign(-c) = -sign(c) exactly
    flip = 1
    if c.num[0][1] < 0:
        c = const_neg(c)
        flip = -1
    key = ("sign", precision_cap)
    if key in c._cache:
        s = c._cache[key]
        return None if s is None else s * flip
    s = None
    wp = 32
    while True:
        try:
            v = _eval_at(c, wp)
            if v.a > 0:
                s = 1
            elif v.b < 0:
                s = -1
        except (ZeroDivisionError, ValueError):
            pass
        if s is not None or wp >= precision_cap:
            break
        wp = min(wp * 2, precision_cap)
    c._cache[key] = s
    return None if s is None else s * flip


def cmp_const(a, b, precision_cap: int = DEFAULT_PRECISION_CAP) -> Ordering:
    d = const_sub(_c(a), _c(b))
    if d.is_zero:
        return Ordering.EqualExact
    s = const_sign(d, precision_cap)
    if s is None:
        return Ordering.Unknown
    return Ordering.Greater if s > 0 else Ordering.Less


def require_sign(c: Constant, precision_cap: int = DEFAULT_PRECISION_CAP) -> int:
    s = const_sign(c, precision_cap)
    if s is None:
        raise UndeterminedError(f"sign of {c} unknown at {precision_cap} bits", "precision")
    return s


def to_mpf(c: Constant, dps: int = 30):
    """Midpoint of a tight enclosure, for display and numeric cross-checks."""
    i = eval_interval(c, int(dps * 3.33) + 8)
    with mpmath.workdps(dps + 10):
        return (mpmath.mpf(i.lo.numerator) / i.lo.denominator + mpmath.mpf(i.hi.numerator) / i.hi.denominator) / 2


def const_from_terms(terms: Iterable[tuple[Fraction, Constant]]) -> Constant:
    out = ZERO
    for q, c in terms:
        out = const_add(out, const_mul(const(q), c))
    return out


ZERO = Constant((), ())
ONE = const(1)
E = const_exp(ONE)
