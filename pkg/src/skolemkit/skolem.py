"""Skolem terms: syntax, normal forms, components and regular functions.

Terms are immutable ASTs over ``1``, ``x``, ``+``, ``*`` and ``^``.  Natural
literals are sugar for sums of ones (stored as balanced ``+`` trees so that
large literals stay shallow).

Normalization rewrites a term into a finite sum of finite products of
components using distributivity and the power identities

    (f1*f2)^g = f1^g * f2^g,   f^(g1+g2) = f^g1 * f^g2,   (f^g1)^g2 = f^(g1*g2),

with natural numbers split into primes and sum bases factored over N.
Components in normal form are ``x`` and powers ``b^(c1*...*ck)`` whose base
is ``x``, a prime, or a sum that does not factor over N.
"""
from __future__ import annotations

import enum
import functools
import itertools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

import sympy

from . import ordinal as O
from .errors import ParseError, PreconditionError, ResourceLimitError, UndeterminedError

__all__ = [
    "Term", "ONE", "X", "parse", "format_term", "nat_term", "add", "mul", "power",
    "NormalForm", "normalize", "is_component", "is_additively_irreducible",
    "is_multiplicatively_irreducible", "Case", "Classification", "classify",
    "is_regular_below_xx", "stratify", "fragment_index", "order_type_bound",
    "BoundSpec", "TwoPow2x", "TwoPowNx", "TwoPowXx", "enumerate_terms", "Corpus",
    "build_corpus",
]

MAX_LITERAL = 10 ** 6
MAX_NATURAL_EXPONENT = 64


# ---------------------------------------------------------------------------
# AST

class Term:
    __slots__ = ("kind", "left", "right", "_hash", "_size", "_key", "_nat")

    def __init__(self, kind: str, left: "Term | None" = None, right: "Term | None" = None):
        self.kind = kind
        self.left = left
        self.right = right
        self._hash = hash((kind, left, right))
        if kind in ("one", "x"):
            self._size = 1
        else:
            self._size = 1 + left._size + right._size
        if kind == "one":
            self._nat = 1
        elif kind == "add" and left._nat and right._nat:
            self._nat = left._nat + right._nat
        else:
            self._nat = 0
        self._key = None

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        return (isinstance(other, Term) and self._hash == other._hash and self.kind == other.kind
                and self.left == other.left and self.right == other.right)

    def __repr__(self):
        return f"Term({format_term(self)!r})"

    def __str__(self):
        return format_term(self)

    @property
    def size(self) -> int:
        """AST node count, with a literal n counting as 1+...+1."""
        return self._size

    @property
    def natural(self) -> Optional[int]:
        """The value when the term is a sum of ones, else None."""
        return self._nat or None

    @property
    def key(self) -> str:
        if self._key is None:
            self._key = format_term(self)
        return self._key

    def __add__(self, o):
        return add(self, o)

    def __mul__(self, o):
        return mul(self, o)

    def __pow__(self, o):
        return power(self, o)


ONE = Term("one")
X = Term("x")


def _t(v) -> Term:
    if isinstance(v, Term):
        return v
    if isinstance(v, int):
        return nat_term(v)
    if isinstance(v, str):
        return parse(v)
    raise TypeError(f"not a Skolem term: {v!r}")


def add(a, b) -> Term:
    return Term("add", _t(a), _t(b))


def mul(a, b) -> Term:
    return Term("mul", _t(a), _t(b))


def power(a, b) -> Term:
    return Term("pow", _t(a), _t(b))


@functools.lru_cache(maxsize=4096)
def nat_term(n: int) -> Term:
    if n < 1:
        raise ValueError("Skolem literals are >= 1")
    if n > MAX_LITERAL:
        raise ResourceLimitError(f"literal {n} exceeds cap {MAX_LITERAL}")
    if n == 1:
        return ONE
    if n <= 3:
        return Term("add", nat_term(n - 1), ONE)
    h = n // 2
    return Term("add", nat_term(n - h), nat_term(h))


# ---------------------------------------------------------------------------
# text form

def format_term(t: Term) -> str:
    return _fmt(t, 0)


def _fmt(t: Term, level: int) -> str:
    # level 0: sum context, 1: product, 2: exponent, 3: power base
    if t._nat:
        return str(t._nat)
    if t.kind == "x":
        return "x"
    if t.kind == "add":
        s = f"{_fmt(t.left, 0)} + {_fmt(t.right, 1)}"
        return s if level == 0 else f"({s})"
    if t.kind == "mul":
        s = f"{_fmt(t.left, 1)}*{_fmt(t.right, 2)}"
        return s if level <= 1 else f"({s})"
    base = _fmt(t.left, 3)
    ex = t.right
    es = _fmt(ex, 2)
    if ex.kind == "pow":
        es = f"({es})"
    s = f"{base}^{es}"
    return f"({s})" if level == 3 else s


_TOK = re.compile(r"\s*(?:(\d+)|(x)|([()+*^]))")


def parse(text: str) -> Term:
    toks: list[tuple[str, str, int]] = []
    pos = 0
    text_s = text
    while pos < len(text_s):
        m = _TOK.match(text_s, pos)
        if not m or m.end() == pos:
            if text_s[pos:].strip() == "":
                break
            bad = pos + (len(text_s[pos:]) - len(text_s[pos:].lstrip()))
            raise ParseError(f"unexpected character {text_s[bad]!r}", text, bad)
        if m.group(1):
            toks.append(("nat", m.group(1), m.start(1)))
        elif m.group(2):
            toks.append(("x", "x", m.start(2)))
        elif m.group(3):
            toks.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    i = 0

    def peek():
        return toks[i] if i < len(toks) else ("eof", "", len(text))

    def take(val=None):
        nonlocal i
        t = peek()
        if val is not None and t[1] != val:
            raise ParseError(f"expected {val!r}, found {t[1] or 'end of input'!r}", text, t[2])
        i += 1
        return t

    def p_sum():
        v = p_prod()
        while peek()[:2] == ("op", "+"):
            take()
            v = add(v, p_prod())
        return v

    def p_prod():
        v = p_pow()
        while peek()[:2] == ("op", "*"):
            take()
            v = mul(v, p_pow())
        return v

    def p_pow():
        b = p_atom()
        if peek()[:2] == ("op", "^"):
            take()
            return power(b, p_pow())
        return b

    def p_atom():
        kind, val, p = peek()
        if kind == "x":
            take()
            return X
        if kind == "nat":
            take()
            n = int(val)
            if n < 1:
                raise ParseError("literal must be >= 1", text, p)
            return nat_term(n)
        if kind == "op" and val == "(":
            take()
            v = p_sum()
            take(")")
            return v
        raise ParseError(f"unexpected {val or 'end of input'!r}", text, p)

    if not toks:
        raise ParseError("empty expression", text, 0)
    v = p_sum()
    if peek()[0] != "eof":
        raise ParseError(f"unexpected {peek()[1]!r}", text, peek()[2])
    return v


# ---------------------------------------------------------------------------
# exact values at small integers (used for fingerprints)

_BIT_CAP = 1 << 20


def value_at(t: Term, x: int, _memo: dict | None = None) -> Optional[int]:
    """Exact integer value at integer x, or None when it exceeds the bit cap."""
    memo = _memo if _memo is not None else {}
    k = (t, x)
    if k in memo:
        return memo[k]
    if t.kind == "one":
        v = 1
    elif t.kind == "x":
        v = x
    else:
        a = value_at(t.left, x, memo)
        b = value_at(t.right, x, memo)
        if a is None or b is None:
            v = None
        elif t.kind == "add":
            v = a + b
        elif t.kind == "mul":
            v = a * b if a.bit_length() + b.bit_length() <= _BIT_CAP else None
        else:
            if a == 1:
                v = 1
            elif b * a.bit_length() > _BIT_CAP:
                v = None
            else:
                v = a ** b
    memo[k] = v
    return v


# ---------------------------------------------------------------------------
# normal forms
#
# Internal polynomial: dict {product: n} with product a sorted tuple of
# (Comp, multiplicity) and n a positive natural.

class Comp:
    __slots__ = ("base", "exps", "key", "_hash")

    def __init__(self, base, exps: tuple):
        self.base = base    # "x", a prime int, or a frozen sum polynomial (tuple)
        self.exps = exps    # product (tuple of (Comp, mult)); empty only for x
        self.key = _comp_key(base, exps)
        self._hash = hash(self.key)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return isinstance(other, Comp) and self.key == other.key

    def __repr__(self):
        return f"Comp({self.key})"

    def term(self) -> Term:
        return parse(self.key)


def _prod_key(prod: tuple, coeff: int = 1) -> str:
    parts = []
    for c, k in prod:
        parts.extend([c.key] * k)
    if coeff != 1 or not parts:
        parts.append(str(coeff))
    return "*".join(parts)


def _poly_key(poly: tuple) -> str:
    return " + ".join(_prod_key(p, n) for p, n in poly)


def _factor_key(c: "Comp") -> str:
    return c.key if c.base == "x" and not c.exps else f"({c.key})"


def _comp_key(base, exps: tuple) -> str:
    if base == "x" and not exps:
        return "x"
    if base == "x":
        b = "x"
    elif isinstance(base, int):
        b = str(base)
    else:
        b = f"({_poly_key(base)})"
    flat = [c for c, k in exps for _ in range(k)]
    if len(flat) == 1 and flat[0].base == "x" and not flat[0].exps:
        e = "x"
    elif len(flat) == 1:
        e = f"({flat[0].key})"
    else:
        e = "(" + "*".join(_factor_key(c) if c.exps else c.key for c in flat) + ")"
    return f"{b}^{e}"


CX = Comp("x", ())


def _prod_mul(a: tuple, b: tuple) -> tuple:
    d: dict = {}
    for c, k in itertools.chain(a, b):
        d[c] = d.get(c, 0) + k
    return tuple(sorted(d.items(), key=lambda t: t[0].key))


def _p_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for p, n in b.items():
        out[p] = out.get(p, 0) + n
    return out


def _p_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for pa, na in a.items():
        for pb, nb in b.items():
            p = _prod_mul(pa, pb)
            out[p] = out.get(p, 0) + na * nb
    return out


def _p_pow(a: dict, n: int) -> dict:
    if n > MAX_NATURAL_EXPONENT and len(a) > 1:
        raise ResourceLimitError(f"natural exponent {n} too large to expand")
    out = {(): 1}
    base = a
    while n:
        if n & 1:
            out = _p_mul(out, base)
        n >>= 1
        if n:
            base = _p_mul(base, base)
    return out


def _freeze_poly(p: dict) -> tuple:
    # cheap growth proxy: nesting height, then degree, so sums read "x^x + x + 1"
    return tuple(sorted(p.items(), key=lambda t: (-max((_height(c) for c, _ in t[0]), default=-1),
                                                  -sum(k for _, k in t[0]), _prod_key(t[0], t[1]))))


def _height(c: "Comp") -> int:
    if not c.exps:
        return 0
    return 1 + max(_height(e) for e, _ in c.exps)


def _primes(n: int) -> dict[int, int]:
    return {int(p): int(k) for p, k in sympy.factorint(n).items()}


@functools.lru_cache(maxsize=65536)
def _factor_over_n(poly: tuple) -> tuple[int, tuple, tuple]:
    """Split a multi-term polynomial into (content, monomial part, sum factors).

    ``sum factors`` is a tuple of (frozen poly, multiplicity) whose members do
    not factor further with natural coefficients.
    """
    comps = sorted({c for p, _ in poly for c, _ in p}, key=lambda c: c.key)
    syms = sympy.symbols(f"s0:{len(comps)}") if comps else ()
    index = {c: s for c, s in zip(comps, syms)}
    expr = sympy.Integer(0)
    for p, n in poly:
        t = sympy.Integer(n)
        for c, k in p:
            t *= index[c] ** k
        expr += t
    content, facs = sympy.factor_list(expr)
    content = int(content)
    singles: list = []
    for f, k in facs:
        singles.extend([sympy.Poly(f, *syms)] * k)
    mono: dict = {}
    sums: list = []
    rest = []
    for f in singles:
        if len(f.terms()) == 1:
            (exps, coef), = f.terms()
            content *= int(coef)
            for s_i, e in enumerate(exps):
                if e:
                    mono[comps[s_i]] = mono.get(comps[s_i], 0) + e
        else:
            rest.append(f)
    if content < 0:
        raise ResourceLimitError("unexpected negative content in factorization")
    for group in _nonneg_groups(rest):
        prod = group[0]
        for g in group[1:]:
            prod = prod * g
        d: dict = {}
        for exps, coef in prod.terms():
            key = tuple(sorted(((comps[s_i], e) for s_i, e in enumerate(exps) if e), key=lambda t: t[0].key))
            d[key] = d.get(key, 0) + int(coef)
        sums.append(_freeze_poly(d))
    counted: dict = {}
    for s in sums:
        counted[s] = counted.get(s, 0) + 1
    mono_t = tuple(sorted(mono.items(), key=lambda t: t[0].key))
    sum_t = tuple(sorted(counted.items(), key=lambda t: _poly_key(t[0])))
    return content, mono_t, sum_t


def _nonneg(p) -> bool:
    return all(c >= 0 for c in p.coeffs())


def _nonneg_groups(factors: list) -> list[list]:
    """Finest grouping of Z-irreducible factors into N-coefficient products."""
    if not factors:
        return []
    n = len(factors)
    idx = list(range(n))
    for size in range(1, n + 1):
        for sub in itertools.combinations(idx, size):
            prod = factors[sub[0]]
            for j in sub[1:]:
                prod = prod * factors[j]
            if not _nonneg(prod):
                continue
            rest = [factors[j] for j in idx if j not in sub]
            if rest:
                rp = rest[0]
                for r in rest[1:]:
                    rp = rp * r
                if not _nonneg(rp):
                    continue
            return [[factors[j] for j in sub]] + _nonneg_groups(rest)
    return [factors]


def _comp_pow(c: Comp, P: tuple) -> Comp:
    return Comp(c.base, _prod_mul(c.exps, P))


def _base_pow(B: dict, P: tuple) -> dict:
    """B^P for a product P of components (P nonempty)."""
    if B == {(): 1}:
        return B
    if len(B) == 1:
        (prod, n), = B.items()
        out: dict = {}
        for p, k in _primes(n).items():
            c = Comp(p, P)
            out[c] = out.get(c, 0) + k
        for c, k in prod:
            cc = _comp_pow(c, P)
            out[cc] = out.get(cc, 0) + k
        return {tuple(sorted(out.items(), key=lambda t: t[0].key)): 1}
    content, mono, sums = _factor_over_n(_freeze_poly(B))
    out = {}
    if content > 1:
        for p, k in _primes(content).items():
            c = Comp(p, P)
            out[c] = out.get(c, 0) + k
    for c, k in mono:
        cc = _comp_pow(c, P)
        out[cc] = out.get(cc, 0) + k
    for s, k in sums:
        cc = Comp(s, P)
        out[cc] = out.get(cc, 0) + k
    return {tuple(sorted(out.items(), key=lambda t: t[0].key)): 1}


_norm_cache: dict = {}


def _norm(t: Term) -> dict:
    r = _norm_cache.get(t)
    if r is not None:
        return r
    if t._nat:
        r = {(): t._nat}
    elif t.kind == "x":
        r = {((CX, 1),): 1}
    elif t.kind == "add":
        r = _p_add(_norm(t.left), _norm(t.right))
    elif t.kind == "mul":
        r = _p_mul(_norm(t.left), _norm(t.right))
    else:
        B = _norm(t.left)
        G = _norm(t.right)
        r = {(): 1}
        for P, n in G.items():
            f = B if not P else _base_pow(B, P)
            r = _p_mul(r, _p_pow(f, n))
    if len(_norm_cache) > 500_000:
        _norm_cache.clear()
    _norm_cache[t] = r
    return r


@dataclass(frozen=True)
class Summand:
    coeff: int
    factors: tuple  # tuple of component Terms, descending

    def term(self) -> Term:
        t = None
        for f in self.factors:
            t = f if t is None else mul(t, f)
        if self.coeff != 1 or t is None:
            c = nat_term(self.coeff)
            t = c if t is None else mul(t, c)
        return t

    def __str__(self):
        parts = [_fmt(f, 1) for f in self.factors]
        if self.coeff != 1 or not parts:
            parts.append(str(self.coeff))
        return "*".join(parts)


@dataclass(frozen=True)
class NormalForm:
    summands: tuple  # of Summand, descending
    key: str = field(compare=False)

    def term(self) -> Term:
        t = None
        for s in self.summands:
            st = s.term()
            t = st if t is None else add(t, st)
        return t

    def __str__(self):
        return " + ".join(str(s) for s in self.summands)

    @property
    def n_summands(self) -> int:
        return sum(s.coeff for s in self.summands)


def _sort_desc(terms: list[Term]) -> list[Term]:
    from .asymptotics import compare, Verdict

    def cmp(a: Term, b: Term) -> int:
        if a == b:
            return 0
        try:
            v = compare(a, b, check_oracle=False).verdict
        except UndeterminedError:
            v = Verdict.Undetermined
        if v is Verdict.Less:
            return 1
        if v is Verdict.Greater:
            return -1
        return (a.key > b.key) - (a.key < b.key)

    return sorted(terms, key=functools.cmp_to_key(cmp))


def normalize(term) -> NormalForm:
    term = _t(term)
    poly = _norm(term)
    items = []
    for prod, n in poly.items():
        comps = [c.term() for c, k in prod for _ in range(k)]
        items.append((prod, n, comps))
    summands = []
    for prod, n, comps in items:
        summands.append(Summand(n, tuple(_sort_desc(comps))))
    by_term = {s.term(): s for s in summands}
    ordered = [by_term[t] for t in _sort_desc(list(by_term))]
    return NormalForm(tuple(ordered), _poly_key(_freeze_poly(poly)))


def normal_key(term) -> str:
    """Canonical string of the normal form (cheap; no asymptotic sorting)."""
    return _poly_key(_freeze_poly(_norm(_t(term))))


def _single_comp(poly: dict) -> Optional[Comp]:
    if len(poly) == 1:
        (prod, n), = poly.items()
        if n == 1 and len(prod) == 1 and prod[0][1] == 1:
            return prod[0][0]
    return None


def is_additively_irreducible(term) -> bool:
    poly = _norm(_t(term))
    return len(poly) == 1 and next(iter(poly.values())) == 1


def _mult_factors(poly: dict) -> int:
    """Number of nonunit multiplicative factors visible over N."""
    if len(poly) == 1:
        (prod, n), = poly.items()
        k = sum(m for _, m in prod)
        k += sum(_primes(n).values()) if n > 1 else 0
        return k
    content, mono, sums = _factor_over_n(_freeze_poly(poly))
    return (sum(_primes(content).values()) if content > 1 else 0) + sum(k for _, k in mono) \
        + sum(k for _, k in sums)


def is_multiplicatively_irreducible(term) -> bool:
    return _mult_factors(_norm(_t(term))) <= 1


def is_component(term) -> bool:
    poly = _norm(_t(term))
    return poly == {(): 1} or _single_comp(poly) is not None


# ---------------------------------------------------------------------------
# classification by structural case

class Case(enum.Enum):
    Case1_Product = "Case1_Product"
    Case2_Power = "Case2_Power"
    Case3_SumWithComparableComponent = "Case3_SumWithComparableComponent"
    Case4_Atom = "Case4_Atom"


@dataclass(frozen=True)
class Classification:
    case: Case
    f: Optional[Term] = None
    g: Optional[Term] = None
    f_is_component: bool = True

    def __str__(self):
        if self.case is Case.Case4_Atom:
            return self.case.value
        s = f"{self.case.value} f={format_term(self.f)} g={format_term(self.g)}"
        if not self.f_is_component:
            s += " (f not a component)"
        return s


def _prod_term(prod: tuple, coeff: int = 1) -> Term:
    return parse(_prod_key(prod, coeff))


def _poly_term(poly: dict) -> Term:
    return parse(_poly_key(_freeze_poly(poly)))


def classify(term) -> Classification:
    term = _t(term)
    poly = _norm(term)
    if poly == {(): 1}:
        return Classification(Case.Case4_Atom, ONE, None)
    if poly == {((CX, 1),): 1}:
        return Classification(Case.Case4_Atom, X, None)
    if len(poly) == 1:
        (prod, n), = poly.items()
        flat = [c for c, k in prod for _ in range(k)]
        if not flat:
            return Classification(Case.Case3_SumWithComparableComponent, ONE, nat_term(n - 1))
        if n == 1 and len(flat) == 1:
            c = flat[0]
            gs = [e for e, k in c.exps for _ in range(k)]
            g = min(gs, key=lambda e: e.key)  # any exponent factor works
            rest = list(gs)
            rest.remove(g)
            base = Comp(c.base, ()) if c.base == "x" else None
            if rest:
                fb = Comp(c.base, tuple(sorted(_count(rest).items(), key=lambda t: t[0].key)))
                f = fb.term()
            elif isinstance(c.base, int):
                f = nat_term(c.base)
            elif base is not None:
                f = X
            else:
                f = parse(_poly_key(c.base))
            return Classification(Case.Case2_Power, f, g.term())
        terms = _sort_desc([c.term() for c in flat])
        if len(flat) >= 2:
            g = None
            for t in terms[1:]:
                g = t if g is None else mul(g, t)
            if n != 1:
                g = mul(g, nat_term(n))
            return Classification(Case.Case1_Product, terms[0], g)
        c = terms[0]
        g = c if n == 2 else mul(c, nat_term(n - 1))
        return Classification(Case.Case3_SumWithComparableComponent, c, g)
    # several summands: first try a product split with both factors >= x
    content, mono, sums = _factor_over_n(_freeze_poly(poly))
    nfac = sum(k for _, k in mono) + sum(k for _, k in sums)
    if nfac >= 2:
        factors = [parse(c.key) for c, k in mono for _ in range(k)]
        factors += [parse(_poly_key(s)) for s, k in sums for _ in range(k)]
        factors = _sort_desc(factors)
        g = None
        for t in factors[1:]:
            g = t if g is None else mul(g, t)
        if content > 1:
            g = mul(g, nat_term(content))
        return Classification(Case.Case1_Product, factors[0], g)
    summands = [(_prod_term(p, 1), p, k) for p, k in poly.items()]
    order = _sort_desc([s[0] for s in summands])
    lead_t = order[0]
    lead = next(s for s in summands if s[0] == lead_t)
    _, prod, k = lead
    rest = dict(poly)
    if rest[prod] == 1:
        del rest[prod]
    else:
        rest[prod] -= 1
    is_comp = len(prod) == 1 and prod[0][1] == 1
    return Classification(Case.Case3_SumWithComparableComponent, lead_t, _poly_term(rest), is_comp)


def _count(items) -> dict:
    d: dict = {}
    for it in items:
        d[it] = d.get(it, 0) + 1
    return d


# ---------------------------------------------------------------------------
# regular functions and fragments

def _two_pow_nx(n: int) -> Term:
    return power(nat_term(2), power(nat_term(n), X)) if n > 1 else nat_term(2)


_TWO_POW_XX = power(nat_term(2), power(X, X))


def _cmp(f: Term, g: Term):
    from .asymptotics import compare
    return compare(f, g)


def _verdict(f: Term, g: Term):
    from .asymptotics import Verdict
    r = _cmp(f, g)
    if r.verdict is Verdict.Undetermined:
        raise UndeterminedError(f"cannot order {format_term(f)} and {format_term(g)}: {r.reason}",
                                r.reason_kind or "depth")
    return r.verdict


def _numeric_equal(f: Term, g: Term) -> bool:
    from .oracle import numeric_compare
    from .errors import OracleRangeError
    try:
        return numeric_compare(f, g, [Fraction(3), Fraction(5), Fraction(8)], precision=128) \
            == "Indistinguishable"
    except OracleRangeError:
        return True  # cannot refute numerically at representable points


def _equal(f: Term, g: Term) -> bool:
    from .asymptotics import Verdict
    if f == g or normal_key(f) == normal_key(g):
        return True
    v = _verdict(f, g)
    return v is Verdict.EqualToDepth and _numeric_equal(f, g)


def fragment_index(f, max_n: int = 4096) -> int:
    """Least n >= 1 with f < 2^(n^x)."""
    from .asymptotics import Verdict
    f = _t(f)
    if _verdict(f, _TWO_POW_XX) is not Verdict.Less:
        raise PreconditionError(f"{format_term(f)} is not below 2^(x^x)")
    # 2^(n^x) is increasing in n; bracket then bisect
    def below(n):
        return _verdict(f, _two_pow_nx(n)) is Verdict.Less

    if below(1):
        return 1
    lo, hi = 1, 2
    while not below(hi):
        lo, hi = hi, hi * 2
        if hi > max_n:
            raise ResourceLimitError(f"fragment index exceeds {max_n}")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if below(mid):
            hi = mid
        else:
            lo = mid
    return hi


def is_regular_below_xx(term) -> bool:
    from .asymptotics import Verdict
    t = _t(term)
    v = _verdict(t, _TWO_POW_XX)
    if v is Verdict.Greater:
        raise PreconditionError(f"{format_term(t)} is above 2^(x^x)")
    if v is Verdict.EqualToDepth:
        return _numeric_equal(t, _TWO_POW_XX)
    if t.natural is not None:
        return t.natural == 2
    n = fragment_index(t)
    if n <= 2:
        return False   # below 2^(2^x) only the constant 2 is regular
    return _equal(t, _two_pow_nx(n - 1))


def _stratum(n: int, k: int) -> Term:
    """2^(n^x * x^k)."""
    e = power(nat_term(n), X) if n > 1 else None
    if k:
        xk = X if k == 1 else power(X, nat_term(k))
        e = xk if e is None else mul(e, xk)
    if e is None:
        e = ONE
    return power(nat_term(2), e)


def _stratify_bound(f: Term, n: int) -> int:
    """An upper bound for the stratification index by structural recursion."""
    from .asymptotics import Verdict
    if _verdict(f, _stratum(n, 0)) is Verdict.Less:
        return 0
    c = classify(f)
    if c.case is Case.Case4_Atom:
        return 1
    if c.case in (Case.Case1_Product, Case.Case3_SumWithComparableComponent):
        # a, b < 2^(n^x x^k)  =>  a*b, a+b < 2^(n^x x^(k+1))
        return max(_stratify_bound(c.f, n), _stratify_bound(c.g, n)) + 1
    # power f^g: f < 2^(n^x x^k), g <= x^j gives f^g < 2^(n^x x^(k+j+1))
    kf = _stratify_bound(c.f, n)
    j = 0
    while _verdict(c.g, power(X, nat_term(j + 1)) if j else X) is not Verdict.Less:
        j += 1
        if j > 64:
            return -1
    return kf + j + 1


def stratify(f, n: int, max_k: int = 256) -> int:
    """Least k with f < 2^(n^x * x^k); requires f < 2^((n+1)^x)."""
    from .asymptotics import Verdict
    f = _t(f)
    if n < 1:
        raise PreconditionError("n must be >= 1")
    if _verdict(f, _two_pow_nx(n + 1)) is not Verdict.Less:
        raise PreconditionError(f"{format_term(f)} is not below 2^({n + 1}^x)")
    bound = _stratify_bound(f, n)
    if bound < 0 or _verdict(f, _stratum(n, bound)) is not Verdict.Less:
        bound = max_k
    for k in range(0, bound + 1):
        if _verdict(f, _stratum(n, k)) is Verdict.Less:
            return k
    raise ResourceLimitError(f"no stratum found up to k = {bound}")


class BoundSpec:
    pass


@dataclass(frozen=True)
class TwoPow2x(BoundSpec):
    pass


@dataclass(frozen=True)
class TwoPowNx(BoundSpec):
    n: int


@dataclass(frozen=True)
class TwoPowXx(BoundSpec):
    pass


def order_type_bound(spec: BoundSpec):
    """Order-type bound for the Skolem functions below the given threshold.

    ``TwoPowNx(N)`` refers to 2^(N^x), N >= 2, bounded by omega_(N+1).
    """
    if isinstance(spec, TwoPow2x):
        return O.omega_tower(3)
    if isinstance(spec, TwoPowNx):
        if spec.n < 2:
            raise PreconditionError("2^(N^x) bound needs N >= 2")
        return O.omega_tower(spec.n + 1)
    if isinstance(spec, TwoPowXx):
        return O.EPSILON_0
    raise TypeError(f"unknown bound spec {spec!r}")


# ---------------------------------------------------------------------------
# corpus enumeration

_FP_POINTS = (2, 3, 5)


def _fingerprint(t: Term, memo: dict) -> tuple:
    return tuple(value_at(t, x, memo) for x in _FP_POINTS)


@dataclass
class Corpus:
    """Deduplicated representatives by size, plus dedup caveats."""
    by_size: dict = field(default_factory=dict)
    caveats: list = field(default_factory=list)   # (kept, dropped, reason)
    undetermined: list = field(default_factory=list)  # pairs kept apart

    def terms(self, max_size: Optional[int] = None) -> list[Term]:
        out = []
        for s in sorted(self.by_size):
            if max_size is None or s <= max_size:
                out.extend(self.by_size[s])
        return out


_corpus_cache: dict = {}


def build_corpus(max_size: int, cap: int = 13) -> Corpus:
    """Representatives of all distinct Skolem functions with AST size <= max_size."""
    if max_size > cap:
        raise ResourceLimitError(f"enumeration size {max_size} exceeds cap {cap}")
    from .asymptotics import compare, Verdict
    best = None
    for k, v in _corpus_cache.items():
        if k >= max_size:
            best = v if best is None or k < best[0] else best
    if best is not None:
        corpus = Corpus({s: l for s, l in best[1].by_size.items() if s <= max_size},
                        best[1].caveats, best[1].undetermined)
        return corpus
    corpus = Corpus()
    memo: dict = {}
    buckets: dict = {}
    seen_nf: set = set()

    def consider(t: Term) -> bool:
        nk = normal_key(t)
        if nk in seen_nf:
            return False
        fp = _fingerprint(t, memo)
        for r in buckets.get(fp, []):
            try:
                v = compare(t, r).verdict
            except UndeterminedError:
                v = Verdict.Undetermined
            if v is Verdict.EqualToDepth and _numeric_equal(t, r):
                corpus.caveats.append((r, t, "EqualToDepth with numeric agreement"))
                seen_nf.add(nk)
                return False
            if v is Verdict.Undetermined:
                corpus.undetermined.append((r, t))
        buckets.setdefault(fp, []).append(t)
        seen_nf.add(nk)
        return True

    for size in range(1, max_size + 1):
        reps = []
        if size == 1:
            cands = [ONE, X]
        else:
            cands = []
            for a in range(1, size - 1):
                b = size - 1 - a
                if a not in corpus.by_size or b not in corpus.by_size:
                    continue
                for t1 in corpus.by_size[a]:
                    for t2 in corpus.by_size[b]:
                        if a <= b:
                            cands.append(add(t1, t2))
                            cands.append(mul(t1, t2))
                        cands.append(power(t1, t2))
        for t in cands:
            if consider(t):
                reps.append(t)
        if reps:
            corpus.by_size[size] = reps
    _corpus_cache[max_size] = (max_size, corpus)
    return corpus


def enumerate_terms(max_size: int) -> Iterator[Term]:
    """Stream distinct Skolem terms of AST size <= max_size (deterministic)."""
    yield from build_corpus(max_size).terms()


def raw_term_count(size: int) -> int:
    """Number of raw ASTs of exactly ``size`` nodes over {1, x, +, *, ^}."""
    if size % 2 == 0:
        return 0
    leaves = (size + 1) // 2
    return math.comb(2 * (leaves - 1), leaves - 1) // leaves * 2 ** leaves * 3 ** (leaves - 1)
