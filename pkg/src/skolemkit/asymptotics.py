"""Asymptotic comparison of Skolem terms through their series expansions.

The symbolic engine decides; the ln-space oracle is a tripwire.  Every strict
verdict of :func:`compare` is checked numerically at the configured sample
points (pushed to larger x when the samples disagree) and a persistent
contradiction raises :class:`EngineFault`.
"""
from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from . import constants as C
from . import transseries as T
from .config import get_config
from .constants import Constant, EMembership, Ordering
from .errors import (EngineFault, OracleRangeError, PreconditionError, ResourceLimitError,
                     UndeterminedError)
from .skolem import ONE, Term, _t, build_corpus, format_term

__all__ = [
    "Verdict", "CmpResult", "Relation", "DomRelation", "Undetermined", "LimitResult",
    "expand", "compare", "dom_rel", "is_sim", "limit_ratio", "asymp_c", "sim_c",
    "ratio_class_coefficient", "ratio_spectrum", "Spectrum",
]

MARGIN = 2
MAX_WORKING_DEPTH = 64


class Verdict(enum.Enum):
    Less = "Less"
    Greater = "Greater"
    EqualToDepth = "EqualToDepth"
    Undetermined = "Undetermined"


@dataclass
class CmpResult:
    verdict: Verdict
    depth: int
    reason: str = ""
    reason_kind: Optional[str] = None  # "precision" or "depth"
    oracle_check: dict = field(default_factory=dict)

    def __str__(self):
        if self.verdict is Verdict.EqualToDepth:
            return f"EqualToDepth({self.depth})"
        if self.verdict is Verdict.Undetermined:
            return f"Undetermined({self.reason_kind}: {self.reason})"
        return self.verdict.value

    def to_json(self) -> dict:
        d = {"verdict": self.verdict.value, "depth": self.depth}
        if self.verdict is Verdict.Undetermined:
            d["reason"] = self.reason
            d["reason_kind"] = self.reason_kind
        if self.oracle_check:
            d["oracle_check"] = self.oracle_check
        return d


@dataclass(frozen=True)
class Undetermined:
    """Third truth value for relations the engine cannot settle."""
    reason: str
    kind: str = "depth"

    def __bool__(self):
        raise TypeError("Undetermined has no truth value; test with `is True`")


class Relation(enum.Enum):
    StrictlyDominated = "StrictlyDominated"
    SameArchimedeanClass = "SameArchimedeanClass"
    StrictlyDominates = "StrictlyDominates"


@dataclass(frozen=True)
class DomRelation:
    rel: Relation
    ratio: Optional[Constant] = None


@dataclass(frozen=True)
class LimitResult:
    kind: str  # "Zero", "Finite" or "Infinite"
    ratio: Optional[Constant] = None

    def __str__(self):
        return f"Finite({self.ratio.render()})" if self.kind == "Finite" else self.kind


# ---------------------------------------------------------------------------
# expansion

_expand_cache: dict = {}


def _raw_expand(t: Term, w: int) -> T.TruncatedSeries:
    key = (t, w, get_config().precision_cap)
    s = _expand_cache.get(key)
    if s is not None:
        return s
    if t._nat:
        s = T.series_const(t._nat)
    elif t.kind == "x":
        s = T.series_x()
    else:
        a = _raw_expand(t.left, w)
        b = _raw_expand(t.right, w)
        if t.kind == "add":
            s = T.series_add(a, b, w)
        elif t.kind == "mul":
            s = T.series_mul(a, b, w)
        else:
            s = T.series_pow(a, b, w)
    s = T.TruncatedSeries(s.terms, s.error, ("term", t.key))
    if len(_expand_cache) > 200_000:
        _expand_cache.clear()
    _expand_cache[key] = s
    return s


def expand(term, depth: Optional[int] = None) -> T.TruncatedSeries:
    """Series expansion of ``term`` with (when available) ``depth`` kept terms.

    Intermediate results run at a larger working depth; the working depth is
    doubled while cancellations leave fewer than ``depth`` known terms.
    """
    t = _t(term)
    depth = get_config().depth if depth is None else depth
    if depth < 1:
        raise PreconditionError("depth must be >= 1")
    w = depth + MARGIN
    while True:
        s = _raw_expand(t, w)
        if len(s.terms) >= depth or s.error is None or w >= MAX_WORKING_DEPTH:
            break
        w = min(2 * w, MAX_WORKING_DEPTH)
    return s.truncate(depth)


# ---------------------------------------------------------------------------
# comparison

def _symbolic(f: Term, g: Term, depth: int) -> CmpResult:
    try:
        ef = expand(f, depth)
        eg = expand(g, depth)
        d = T.series_sub(ef, eg, depth)
        if d.terms:
            s = C.const_sign(d.terms[0][1], get_config().precision_cap)
            if s is None:
                return CmpResult(Verdict.Undetermined, depth,
                                 f"sign of leading difference coefficient {d.terms[0][1]} unknown",
                                 "precision")
            return CmpResult(Verdict.Less if s < 0 else Verdict.Greater, depth)
        if d.error is None or (ef.terms == eg.terms and ef.error is eg.error):
            return CmpResult(Verdict.EqualToDepth, depth)
        return CmpResult(Verdict.Undetermined, depth, "difference hidden below truncation error", "depth")
    except UndeterminedError as e:
        return CmpResult(Verdict.Undetermined, depth, str(e), e.reason)


def _oracle_check(f: Term, g: Term, res: CmpResult, rounds: int = 6) -> None:
    from .oracle import numeric_compare

    xs = list(get_config().oracle_points)
    want = res.verdict.value
    tried: list = []
    resid: list = []
    for _ in range(rounds):
        resid = []
        try:
            got = numeric_compare(f, g, xs, residuals=resid)
        except OracleRangeError as e:
            res.oracle_check = {"x_values": [str(x) for x in tried + xs], "residuals": [],
                                "note": f"oracle out of range: {e}"}
            return
        tried.extend(xs)
        if got == want or got == "Indistinguishable":
            res.oracle_check = {"x_values": [str(x) for x in xs],
                                "residuals": [_fmt_iv(r) for r in resid], "numeric": got}
            return
        # disagreement may be a crossing beyond the sampled range
        xs = [x * 4 for x in xs]
    raise EngineFault(
        f"symbolic verdict {want} for {format_term(f)} vs {format_term(g)} contradicts the "
        f"numeric oracle up to x = {xs[-1] / 4}")


def _fmt_iv(r) -> list:
    return C.iv_decimal(r, 12)


@functools.lru_cache(maxsize=1 << 18)
def _compare_cached(f: Term, g: Term, depth: int, cap: int, check: bool, points: tuple) -> CmpResult:
    if f == g:
        return CmpResult(Verdict.EqualToDepth, depth)
    res = _symbolic(f, g, depth)
    if check and res.verdict in (Verdict.Less, Verdict.Greater):
        _oracle_check(f, g, res)
    return res


def compare(f, g, depth: Optional[int] = None, *, check_oracle: bool = True) -> CmpResult:
    f, g = _t(f), _t(g)
    cfg = get_config()
    depth = cfg.depth if depth is None else depth
    r = _compare_cached(f, g, depth, cfg.precision_cap, check_oracle, tuple(cfg.oracle_points))
    return CmpResult(r.verdict, r.depth, r.reason, r.reason_kind, dict(r.oracle_check))


# ---------------------------------------------------------------------------
# dominance, equivalence, limits

def _lead(term, depth=None):
    s = expand(term, depth)
    if not s.terms:
        raise UndeterminedError(f"no known terms in the expansion of {format_term(_t(term))}", "depth")
    return s.terms[0]


def _mono_cmp(a: T.Monomial, b: T.Monomial) -> int:
    r = T.cmp_monomial(a, b)
    if r == "Undetermined":
        raise UndeterminedError("monomial comparison undetermined", "depth")
    return {"Less": -1, "Equal": 0, "Greater": 1}[r]


def dom_rel(f, g, depth: Optional[int] = None) -> DomRelation:
    mf, cf = _lead(f, depth)
    mg, cg = _lead(g, depth)
    s = _mono_cmp(mf, mg)
    if s < 0:
        return DomRelation(Relation.StrictlyDominated)
    if s > 0:
        return DomRelation(Relation.StrictlyDominates)
    return DomRelation(Relation.SameArchimedeanClass, C.const_div(cf, cg, get_config().precision_cap))


def is_sim(f, g, depth: Optional[int] = None) -> Union[bool, Undetermined]:
    try:
        mf, cf = _lead(f, depth)
        mg, cg = _lead(g, depth)
        if _mono_cmp(mf, mg) != 0:
            return False
    except UndeterminedError as e:
        return Undetermined(str(e), e.reason)
    o = C.cmp_const(cf, cg, get_config().precision_cap)
    if o is Ordering.EqualExact:
        return True
    if o is Ordering.Unknown:
        return Undetermined(f"cannot decide whether {cf} equals {cg}", "precision")
    return False


def limit_ratio(f, g, depth: Optional[int] = None) -> LimitResult:
    d = dom_rel(f, g, depth)
    if d.rel is Relation.StrictlyDominated:
        return LimitResult("Zero")
    if d.rel is Relation.StrictlyDominates:
        return LimitResult("Infinite")
    return LimitResult("Finite", d.ratio)


def _c_series(c, depth: int) -> tuple[T.TruncatedSeries, bool]:
    """Expansion of c and whether c is a constant (finite)."""
    if isinstance(c, (int, Fraction)) and not isinstance(c, bool):
        q = Fraction(c)
        if q < 1:
            raise PreconditionError("c must be >= 1")
        return T.series_const(C.const(q)), True
    ct = _t(c)
    if compare(ct, ONE, depth).verdict is Verdict.Less:
        raise PreconditionError("c must be >= 1")
    s = expand(ct, depth)
    finite = s.error is None and len(s.terms) == 1 and s.terms[0][0] is T.ONE_M
    return s, finite


def _scaled_difference(f, g, c, depth: int) -> T.TruncatedSeries:
    """c*(f - g), retrying deeper while cancellation hides the lead."""
    d = depth
    while True:
        cs, _ = _c_series(c, d)
        diff = T.series_sub(expand(f, d), expand(g, d), d)
        out = T.series_mul(cs, diff, d)
        if out.terms or out.error is None or d >= MAX_WORKING_DEPTH:
            return out
        d = min(2 * d, MAX_WORKING_DEPTH)


def _against(f, g, c, depth: Optional[int], strict: bool) -> Union[bool, Undetermined]:
    depth = get_config().depth if depth is None else depth
    try:
        mg, _ = _lead(g, depth)
        cd = _scaled_difference(_t(f), _t(g), c, depth)
        if cd.terms:
            s = _mono_cmp(cd.terms[0][0], mg)
            return s < 0 if strict else s <= 0
        if cd.error is None:
            return True
        s = _mono_cmp(cd.error, mg)
        if s < 0 or (s == 0 and not strict):
            return True
        return Undetermined("difference hidden below truncation error", "depth")
    except UndeterminedError as e:
        return Undetermined(str(e), e.reason)


def asymp_c(f, g, c, depth: Optional[int] = None) -> Union[bool, Undetermined]:
    """f and g of the same c-class: c*(f - g) dominated by g."""
    return _against(f, g, c, depth, strict=False)


def sim_c(f, g, c, depth: Optional[int] = None) -> Union[bool, Undetermined]:
    """f^c ~ g^c: c*(f - g) strictly dominated by g."""
    return _against(f, g, c, depth, strict=True)


def _is_one(c) -> bool:
    if isinstance(c, (int, Fraction)) and not isinstance(c, bool):
        return c == 1
    return _t(c).natural == 1


def ratio_class_coefficient(h, Q, c=1, depth: Optional[int] = None) -> Constant:
    """The r with (h/Q)^c = r + o(1)."""
    depth = get_config().depth if depth is None else depth
    cap = get_config().precision_cap
    ok = asymp_c(h, Q, c, depth)
    if ok is not True:
        raise PreconditionError(f"asymp_c({h}, {Q}, {c}) does not hold: {ok}")
    d = dom_rel(h, Q, depth)
    if d.ratio is None:
        raise PreconditionError("h and Q are not in the same archimedean class")
    if _is_one(c):
        return d.ratio
    cs, finite = _c_series(c, depth)
    if finite:
        q = cs.terms[0][1].rational
        if q is not None and q.denominator == 1:
            return C.const_pow(d.ratio, int(q))
        return T._engine_exp(C.const_mul(cs.terms[0][1], C.const_log(d.ratio, cap)))
    # c infinite: h/Q = 1 + s/c + o(1/c) and r = exp(s)
    z = T.series_sub(T.series_mul(expand(h, depth), T.series_inverse(expand(Q, depth), depth), depth),
                     T.series_const(1), depth)
    cz = T.series_mul(cs, z, depth)
    s = cz.coefficient(T.ONE_M)
    if cz.terms and _mono_cmp(cz.terms[0][0], T.ONE_M) > 0:
        raise PreconditionError("c*(h/Q - 1) is not bounded")
    if s is None:
        if cz.error is not None and _mono_cmp(cz.error, T.ONE_M) >= 0:
            raise UndeterminedError("constant term of c*(h/Q - 1) hidden by truncation", "depth")
        s = C.ZERO
    return T._engine_exp(s)


# ---------------------------------------------------------------------------
# spectra

@dataclass
class Spectrum:
    ratios: list                      # ascending Constants
    enclosures: list                  # Interval per ratio at the probe precision
    sources: list                     # a term realizing each ratio
    min_gap: Optional[Fraction]
    undetermined: list = field(default_factory=list)  # (description, reason)

    @property
    def strictly_increasing(self) -> bool:
        return all(a.hi < b.lo for a, b in zip(self.enclosures, self.enclosures[1:]))


def ratio_spectrum(Q, size_bound: int, precision: int = 128, depth: Optional[int] = None) -> Spectrum:
    """Distinct leading ratios h/Q over corpus terms h in the archimedean class of Q."""
    Q = _t(Q)
    if size_bound < 1:
        raise PreconditionError("size bound must be >= 1 (empty corpus)")
    cap = get_config().precision_cap
    corpus = build_corpus(size_bound)
    found: dict = {}
    undetermined: list = []
    for h in corpus.terms():
        try:
            d = dom_rel(h, Q, depth)
        except UndeterminedError as e:
            undetermined.append((format_term(h), str(e)))
            continue
        if d.rel is Relation.SameArchimedeanClass and d.ratio.key not in found:
            found[d.ratio.key] = (d.ratio, h)
    # merge exactly equal ratios with different canonical forms
    uniq: list = []
    for r, h in found.values():
        dup = False
        for u, _ in uniq:
            o = C.cmp_const(r, u, cap)
            if o is Ordering.EqualExact:
                dup = True
                break
        if not dup:
            uniq.append((r, h))

    def cmp(a, b):
        o = C.cmp_const(a[0], b[0], cap)
        if o is Ordering.Less:
            return -1
        if o is Ordering.Greater:
            return 1
        return (a[0].key > b[0].key) - (a[0].key < b[0].key)

    uniq.sort(key=functools.cmp_to_key(cmp))
    encl = [C.eval_interval(r, precision) for r, _ in uniq]
    gaps = []
    for i in range(len(uniq) - 1):
        a, b = encl[i], encl[i + 1]
        if a.hi < b.lo:
            gaps.append(b.lo - a.hi)
        else:
            undetermined.append((f"{uniq[i][0].render()} vs {uniq[i + 1][0].render()}",
                                 "enclosures overlap"))
    return Spectrum([r for r, _ in uniq], encl, [h for _, h in uniq],
                    min(gaps) if gaps else None, undetermined)
