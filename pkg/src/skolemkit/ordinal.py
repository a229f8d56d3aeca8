"""Ordinals below epsilon_0 in hereditary Cantor normal form.

An :class:`Ordinal` is an immutable tuple of ``(exponent, coefficient)``
pairs with strictly decreasing exponents.  Besides the classical
(non-commutative) operations this module provides the Hessenberg natural
sum and product, their transfinite iterates, and a handful of order-type
bound calculators used for Skolem-function fragments.
"""
from __future__ import annotations

import functools
import re
from typing import Iterable, Union

from .errors import ParseError, PreconditionError, ResourceLimitError

__all__ = [
    "Ordinal", "Epsilon0", "EPSILON_0", "ZERO", "ONE", "OMEGA",
    "cmp_ordinal", "add", "mul", "pow", "hsum", "hprod", "hsum_iter", "cexp",
    "omega_tower", "finite_sums_bound", "dries_bound",
    "is_additively_closed", "is_multiplicatively_closed",
    "parse_ordinal", "format_ordinal", "nat", "omega_power",
]

MAX_TOWER = 200


class Ordinal:
    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Iterable[tuple["Ordinal", int]] = (), *, _trusted: bool = False):
        terms = tuple(terms)
        if not _trusted:
            prev = None
            for e, c in terms:
                if not isinstance(e, Ordinal):
                    raise TypeError("exponent must be an Ordinal")
                if not isinstance(c, int) or c < 1:
                    raise ValueError("coefficients must be positive integers")
                if prev is not None and _cmp(prev, e) <= 0:
                    raise ValueError("exponents must be strictly decreasing")
                prev = e
        self.terms = terms
        self._hash = hash(terms)

    # ---- basic protocol -------------------------------------------------
    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if isinstance(other, int):
            other = nat(other)
        if not isinstance(other, Ordinal):
            return NotImplemented
        return self._hash == other._hash and self.terms == other.terms

    def __lt__(self, other: "Ordinal") -> bool:
        return _cmp(self, _coerce(other)) < 0

    def __le__(self, other: "Ordinal") -> bool:
        return _cmp(self, _coerce(other)) <= 0

    def __gt__(self, other: "Ordinal") -> bool:
        return _cmp(self, _coerce(other)) > 0

    def __ge__(self, other: "Ordinal") -> bool:
        return _cmp(self, _coerce(other)) >= 0

    def __add__(self, other):
        return add(self, _coerce(other))

    def __radd__(self, other):
        return add(_coerce(other), self)

    def __mul__(self, other):
        return mul(self, _coerce(other))

    def __rmul__(self, other):
        return mul(_coerce(other), self)

    def __pow__(self, other):
        return pow(self, _coerce(other))

    def __rpow__(self, other):
        return pow(_coerce(other), self)

    def __repr__(self) -> str:
        return f"Ordinal({format_ordinal(self)!r})"

    def __str__(self) -> str:
        return format_ordinal(self)

    # ---- structure --------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_finite(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not self.terms[0][0].terms)

    @property
    def is_limit(self) -> bool:
        return bool(self.terms) and bool(self.terms[-1][0].terms)

    @property
    def is_successor(self) -> bool:
        return bool(self.terms) and not self.terms[-1][0].terms

    def finite_value(self) -> int:
        if not self.is_finite:
            raise ValueError(f"{self} is not finite")
        return self.terms[0][1] if self.terms else 0

    def split_limit(self) -> tuple["Ordinal", int]:
        """Return ``(lam, k)`` with ``self = lam + k``, ``lam`` limit or zero."""
        if self.terms and not self.terms[-1][0].terms:
            return Ordinal(self.terms[:-1], _trusted=True), self.terms[-1][1]
        return self, 0

    @property
    def leading_exponent(self) -> "Ordinal":
        if not self.terms:
            raise ValueError("zero has no leading exponent")
        return self.terms[0][0]


ZERO = Ordinal((), _trusted=True)
ONE = Ordinal(((ZERO, 1),), _trusted=True)
OMEGA = Ordinal(((ONE, 1),), _trusted=True)

_nat_cache: dict[int, Ordinal] = {0: ZERO, 1: ONE}


def nat(n: int) -> Ordinal:
    if n < 0:
        raise ValueError("ordinals are nonnegative")
    o = _nat_cache.get(n)
    if o is None:
        o = Ordinal(((ZERO, n),), _trusted=True)
        if n < 1024:
            _nat_cache[n] = o
    return o


def omega_power(e: Ordinal, c: int = 1) -> Ordinal:
    """omega^e * c."""
    return Ordinal(((e, c),), _trusted=True)


def _coerce(v) -> Ordinal:
    if isinstance(v, Ordinal):
        return v
    if isinstance(v, int) and not isinstance(v, bool):
        return nat(v)
    raise TypeError(f"cannot treat {v!r} as an ordinal")


class Epsilon0:
    """Symbolic token for epsilon_0, the first fixed point of x -> omega^x."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __str__(self) -> str:
        return "e0"

    def __repr__(self) -> str:
        return "EPSILON_0"

    def __gt__(self, other) -> bool:
        return isinstance(other, Ordinal)

    def __lt__(self, other) -> bool:
        return False


EPSILON_0 = Epsilon0()


# ---------------------------------------------------------------------------
# comparison

def _cmp(a: Ordinal, b: Ordinal) -> int:
    if a is b:
        return 0
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        if ea is not eb:
            c = _cmp(ea, eb)
            if c:
                return c
        if ca != cb:
            return -1 if ca < cb else 1
    la, lb = len(a.terms), len(b.terms)
    return (la > lb) - (la < lb)


def cmp_ordinal(a: Ordinal, b: Ordinal) -> str:
    c = _cmp(_coerce(a), _coerce(b))
    return "Less" if c < 0 else "Greater" if c > 0 else "Equal"


# ---------------------------------------------------------------------------
# classical arithmetic

def add(a: Ordinal, b: Ordinal) -> Ordinal:
    if a.__class__ is not Ordinal or b.__class__ is not Ordinal:
        a, b = _coerce(a), _coerce(b)
    if not b.terms:
        return a
    if not a.terms:
        return b
    e0, c0 = b.terms[0]
    out = []
    for e, c in a.terms:
        s = _cmp(e, e0)
        if s > 0:
            out.append((e, c))
        elif s == 0:
            out.append((e, c + c0))
            out.extend(b.terms[1:])
            return Ordinal(out, _trusted=True)
        else:
            break
    out.extend(b.terms)
    return Ordinal(out, _trusted=True)


def mul(a: Ordinal, b: Ordinal) -> Ordinal:
    if a.__class__ is not Ordinal or b.__class__ is not Ordinal:
        a, b = _coerce(a), _coerce(b)
    if not a.terms or not b.terms:
        return ZERO
    a0, ac = a.terms[0]
    out = []
    for e, c in b.terms:
        if e.terms:
            out.append((add(a0, e), c))
        else:
            out.append((a0, ac * c))
            out.extend(a.terms[1:])
    return Ordinal(out, _trusted=True)


def _finite_pow(a: Ordinal, k: int, op) -> Ordinal:
    result, base = ONE, a
    while k:
        if k & 1:
            result = op(result, base)
        k >>= 1
        if k:
            base = op(base, base)
    return result


def _div_omega(lam: Ordinal) -> Ordinal:
    """gamma with omega * gamma = lam, for a limit ordinal lam."""
    out = []
    for e, c in lam.terms:
        if e.is_finite:
            out.append((nat(e.finite_value() - 1), c))
        else:
            out.append((e, c))
    return Ordinal(out, _trusted=True)


def pow(a: Ordinal, b: Ordinal) -> Ordinal:  # noqa: A001 - ordinal exponentiation
    a, b = _coerce(a), _coerce(b)
    if not b.terms:
        return ONE
    if not a.terms:
        return ZERO
    if a == ONE:
        return ONE
    lam, k = b.split_limit()
    if a.is_finite:
        n = a.finite_value()
        if not lam.terms:
            return nat(n ** k)
        return omega_power(_div_omega(lam), n ** k)
    head = omega_power(mul(a.leading_exponent, lam)) if lam.terms else ONE
    return mul(head, _finite_pow(a, k, mul))


# ---------------------------------------------------------------------------
# Hessenberg operations

def hsum(a: Ordinal, b: Ordinal) -> Ordinal:
    if a.__class__ is not Ordinal or b.__class__ is not Ordinal:
        a, b = _coerce(a), _coerce(b)
    if not a.terms:
        return b
    if not b.terms:
        return a
    out = []
    i = j = 0
    at, bt = a.terms, b.terms
    while i < len(at) and j < len(bt):
        s = _cmp(at[i][0], bt[j][0])
        if s > 0:
            out.append(at[i]); i += 1
        elif s < 0:
            out.append(bt[j]); j += 1
        else:
            out.append((at[i][0], at[i][1] + bt[j][1])); i += 1; j += 1
    out.extend(at[i:])
    out.extend(bt[j:])
    return Ordinal(out, _trusted=True)


def hprod(a: Ordinal, b: Ordinal) -> Ordinal:
    if a.__class__ is not Ordinal or b.__class__ is not Ordinal:
        a, b = _coerce(a), _coerce(b)
    if not a.terms or not b.terms:
        return ZERO
    acc: dict[Ordinal, int] = {}
    for ea, ca in a.terms:
        for eb, cb in b.terms:
            e = hsum(ea, eb)
            acc[e] = acc.get(e, 0) + ca * cb
    keys = sorted(acc, key=functools.cmp_to_key(_cmp), reverse=True)
    return Ordinal(((e, acc[e]) for e in keys), _trusted=True)


def _scale(a: Ordinal, k: int) -> Ordinal:
    """k-fold natural sum of a."""
    if k == 0:
        return ZERO
    return Ordinal(((e, c * k) for e, c in a.terms), _trusted=True)


def hsum_iter(a: Ordinal, b: Ordinal) -> Ordinal:
    """Natural sum of ``b`` copies of ``a`` (closed form)."""
    a, b = _coerce(a), _coerce(b)
    lam, k = b.split_limit()
    return add(mul(a, lam), _scale(a, k))


def cexp(a: Ordinal, b: Ordinal) -> Ordinal:
    """Natural product of ``b`` copies of ``a`` (closed form)."""
    a, b = _coerce(a), _coerce(b)
    lam, k = b.split_limit()
    return hprod(pow(a, lam), _finite_pow(a, k, hprod))


# ---------------------------------------------------------------------------
# towers and bounds

def omega_tower(n: int) -> Ordinal:
    if n < 0:
        raise PreconditionError("omega_tower needs n >= 0")
    if n > MAX_TOWER:
        raise ResourceLimitError(f"omega_tower({n}) exceeds nesting cap {MAX_TOWER}")
    o = ONE
    for _ in range(n):
        o = omega_power(o)
    return o


def finite_sums_bound(alpha: Ordinal, beta: Ordinal) -> Ordinal:
    """(alpha^omega)^(natural power beta): bound on order types of finite sums."""
    alpha, beta = _coerce(alpha), _coerce(beta)
    if alpha < nat(2) or beta < ONE:
        raise PreconditionError("finite_sums_bound needs alpha >= 2 and beta >= 1")
    return cexp(pow(alpha, OMEGA), beta)


def dries_bound(alpha: Ordinal) -> Ordinal:
    return pow(OMEGA, mul(OMEGA, _coerce(alpha)))


def is_additively_closed(a: Ordinal) -> bool:
    # 0 is vacuously closed; otherwise exactly the powers omega^d
    a = _coerce(a)
    return not a.terms or (len(a.terms) == 1 and a.terms[0][1] == 1)


def is_multiplicatively_closed(a: Ordinal) -> bool:
    # 0, 1, 2 vacuously; otherwise omega^(omega^d)
    a = _coerce(a)
    if a.is_finite:
        return a.finite_value() <= 2
    return len(a.terms) == 1 and a.terms[0][1] == 1 and is_additively_closed(a.terms[0][0]) \
        and a.terms[0][0].terms != ()


# ---------------------------------------------------------------------------
# text form

def format_ordinal(a: Ordinal) -> str:
    if isinstance(a, Epsilon0):
        return "e0"
    if not a.terms:
        return "0"
    parts = []
    for e, c in a.terms:
        if not e.terms:
            parts.append(str(c))
            continue
        if e == ONE:
            s = "w"
        elif e.is_finite or e == OMEGA:
            s = f"w^{format_ordinal(e)}"
        else:
            s = f"w^({format_ordinal(e)})"
        parts.append(s if c == 1 else f"{s}*{c}")
    return " + ".join(parts)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(.))")
_FUNCS2 = {"hsum": hsum, "hprod": hprod, "hsum_iter": hsum_iter, "cexp": cexp, "pow": pow, "sumbound": finite_sums_bound}
_FUNCS1 = {"driesbound": dries_bound}


class _OrdinalParser:
    def __init__(self, text: str):
        self.text = text
        self.toks: list[tuple[str, str, int]] = []
        for m in _TOKEN.finditer(text):
            if m.group(1):
                self.toks.append(("nat", m.group(1), m.start(1)))
            elif m.group(2):
                self.toks.append(("name", m.group(2), m.start(2)))
            elif m.group(3):
                self.toks.append(("op", m.group(3), m.start(3)))
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("eof", "", len(self.text))

    def take(self, kind=None, value=None):
        t = self.peek()
        if (kind and t[0] != kind) or (value is not None and t[1] != value):
            want = value or kind
            raise ParseError(f"expected {want!r}, found {t[1] or 'end of input'!r}", self.text, t[2])
        self.i += 1
        return t

    def parse(self) -> Ordinal:
        v = self.sum()
        if self.peek()[0] != "eof":
            t = self.peek()
            raise ParseError(f"unexpected {t[1]!r}", self.text, t[2])
        return v

    def sum(self) -> Ordinal:
        v = self.prod()
        while self.peek()[:2] == ("op", "+"):
            self.take()
            v = add(v, self.prod())
        return v

    def prod(self) -> Ordinal:
        v = self.atom()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            v = mul(v, self.atom())
        return v

    def atom(self) -> Ordinal:
        kind, val, pos = self.peek()
        if kind == "nat":
            self.take()
            return nat(int(val))
        if kind == "op" and val == "(":
            self.take()
            v = self.sum()
            self.take("op", ")")
            return v
        if kind == "name" and val in ("w", "omega") and not self._call_follows():
            self.take()
            if self.peek()[:2] == ("op", "^"):
                self.take()
                return omega_power(self.atom())
            return OMEGA
        if kind == "name":
            self.take()
            self.take("op", "(")
            if val == "omega":
                n = int(self.take("nat")[1])
                self.take("op", ")")
                return omega_tower(n)
            if val in _FUNCS1:
                v = _FUNCS1[val](self.sum())
                self.take("op", ")")
                return v
            if val in _FUNCS2:
                x = self.sum()
                self.take("op", ",")
                y = self.sum()
                self.take("op", ")")
                return _FUNCS2[val](x, y)
            raise ParseError(f"unknown function {val!r}", self.text, pos)
        raise ParseError(f"unexpected {val or 'end of input'!r}", self.text, pos)

    def _call_follows(self) -> bool:
        nxt = self.toks[self.i + 1] if self.i + 1 < len(self.toks) else None
        return self.peek()[1] == "omega" and nxt is not None and nxt[1] == "("


def parse_ordinal(text: str) -> Ordinal:
    return _OrdinalParser(text).parse()


OrdinalLike = Union[Ordinal, int]
