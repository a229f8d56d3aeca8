"""Independent ordinal arithmetic used only as a test oracle.

Ordinals below epsilon_0 are nested tuples ``((exp, coeff), ...)`` with
exponents descending.  Nothing here imports the library: classical sums come
from absorption, natural sums from the best ordering of unit summands, and
iterated operations from literal transfinite recursion with a sup detector
at limit stages.
"""
from __future__ import annotations

import functools
import itertools

ZERO = ()
ONE = ((ZERO, 1),)
W = ((ONE, 1),)


def nat(n: int):
    return ((ZERO, n),) if n else ZERO


def w_pow(e, c: int = 1):
    return ((e, c),)


def cmp(a, b) -> int:
    for (ea, ca), (eb, cb) in zip(a, b):
        s = cmp(ea, eb)
        if s:
            return s
        if ca != cb:
            return 1 if ca > cb else -1
    return (len(a) > len(b)) - (len(a) < len(b))


def lt(a, b) -> bool:
    return cmp(a, b) < 0


def units(a) -> list:
    """Expand coefficients: w^e*3 becomes three copies of w^e."""
    return [e for e, c in a for _ in range(c)]


def _add_term(acc: list, e, k: int = 1) -> list:
    # absorption: every summand strictly below w^e vanishes
    kept = [(f, c) for f, c in acc if cmp(f, e) >= 0]
    if kept and cmp(kept[-1][0], e) == 0:
        kept[-1] = (e, kept[-1][1] + k)
    else:
        kept.append((e, k))
    return kept


def _add_unit(acc: list, e) -> list:
    return _add_term(acc, e)


def add(a, b):
    acc = list(a)
    for e, k in b:
        acc = _add_term(acc, e, k)
    return tuple(acc)


def _sorted_sum(pairs) -> tuple:
    """Classical sum of w^e*k pieces taken in descending order of e."""
    acc: list = []
    for e, k in sorted(pairs, key=functools.cmp_to_key(lambda p, q: cmp(p[0], q[0])), reverse=True):
        acc = _add_term(acc, e, k)
    return tuple(acc)


def sum_of_units(es) -> tuple:
    acc: list = []
    for e in es:
        acc = _add_unit(acc, e)
    return tuple(acc)


def hsum(a, b):
    """Natural sum: the best ordering of all summands is descending."""
    return _sorted_sum(list(a) + list(b))


def hsum_bruteforce(a, b):
    """Maximum classical sum over every ordering of the unit summands."""
    es = units(a) + units(b)
    best = ZERO
    for perm in set(itertools.permutations(range(len(es)))):
        s = sum_of_units(es[i] for i in perm)
        if lt(best, s):
            best = s
    return best


def hprod(a, b):
    return _sorted_sum([(hsum(e, f), c * d) for e, c in a for f, d in b])


def mul(a, b):
    """Classical product, distributing over the right factor."""
    if not a or not b:
        return ZERO
    lead = a[0][0]
    out = ZERO
    for e, c in b:
        if e == ZERO:
            # a*c: the lead coefficient multiplies, lower terms survive once
            piece = ((a[0][0], a[0][1] * c),) + tuple(a[1:])
        else:
            piece = ((add(lead, e), c),)
        out = add(out, piece)
    return out


def succ(a):
    return add(a, ONE)


def is_limit(a) -> bool:
    return bool(a) and a[-1][0] != ZERO


# ---------------------------------------------------------------------------
# sup detection

def sup(seq: list):
    """Supremum of an increasing sequence sampled at m = 0..M-1.

    Finds the first CNF position that has not settled over the last samples.
    If the exponent there settles while its coefficient grows, the sup is
    prefix + w^(e+1); if the exponent keeps growing, recurse on exponents.
    """
    tail = seq[-3:]
    for a, b in zip(tail, tail[1:]):
        if not lt(a, b):
            if a == b and all(x == tail[-1] for x in tail):
                return tail[-1]  # eventually constant
            raise AssertionError("sequence not increasing")
    pos = 0
    while all(len(s) > pos for s in tail) and all(s[pos] == tail[0][pos] for s in tail):
        pos += 1
    prefix = tail[0][:pos]
    exps = [s[pos][0] if len(s) > pos else None for s in tail]
    if any(e is None for e in exps):
        raise AssertionError("cannot read sup: sequence shrinks at the growth position")
    if all(e == exps[0] for e in exps):
        coeffs = [s[pos][1] for s in tail]
        if not all(x < y for x, y in zip(coeffs, coeffs[1:])):
            raise AssertionError("cannot read sup: coefficient not growing")
        return add(prefix, w_pow(succ(exps[0])))
    e_seq = [s[pos][0] for s in seq if len(s) > pos]
    return add(prefix, w_pow(sup(e_seq)))


# ---------------------------------------------------------------------------
# transfinite recursion over indices below w^3, written w^2*a + w*b + c

SAMPLES = 7


def recursion(step, base, index):
    """F(0) = base, F(g+1) = step(F(g)), F(limit) = sup of F below."""
    memo: dict = {}

    def F(a: int, b: int, c: int):
        k = (a, b, c)
        if k in memo:
            return memo[k]
        if c:
            v = step(F(a, b, c - 1))
        elif a == 0 and b == 0:
            v = base
        elif b:
            v = sup([F(a, b - 1, m) for m in range(SAMPLES)])
        else:
            v = sup([F(a - 1, m, 0) for m in range(SAMPLES)])
        memo[k] = v
        return v

    return F(*index)


def index_of(g) -> tuple[int, int, int]:
    """(a, b, c) with g = w^2*a + w*b + c; g must be below w^3."""
    a = b = c = 0
    for e, k in g:
        if e == ZERO:
            c = k
        elif e == ONE:
            b = k
        elif e == nat(2):
            a = k
        else:
            raise ValueError("index must be below w^3")
    return a, b, c


def iterated_hsum(a, g):
    return recursion(lambda s: hsum(s, a), ZERO, index_of(g))


def iterated_hprod(a, g):
    return recursion(lambda s: hprod(s, a), ONE, index_of(g))


def power(a, g):
    return recursion(lambda s: mul(s, a), ONE, index_of(g))
