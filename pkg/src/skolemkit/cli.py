"""Command-line front end.

Every command first builds a plain JSON-able payload; the text output is
rendered from that payload alone, so ``--output json`` carries exactly the
information needed to reproduce the text form.

Exit codes: 0 success, 1 engine fault, 2 parse error, 3 undetermined
verdict, 4 precondition violation, 5 resource or range limit.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Callable, Optional, Sequence

from . import asymptotics as A
from . import constants as C
from . import ordinal as O
from . import oracle as N
from . import skolem as S
from . import transseries as T
from .config import Config, from_env, use_config
from .errors import (EngineFault, ParseError, PreconditionError, ResourceLimitError,
                     UndeterminedError)

EXIT_OK, EXIT_FAULT, EXIT_PARSE, EXIT_UNDETERMINED, EXIT_PRECONDITION, EXIT_RESOURCE = 0, 1, 2, 3, 4, 5


class _Undetermined(Exception):
    """Raised after a payload is built when the verdict itself is undetermined."""

    def __init__(self, payload: dict, reason: str):
        self.payload = payload
        self.reason = reason


def _enclosure(c: C.Constant, bits: int = 64) -> list:
    return list(C.eval_interval(c, bits).decimal(15))


# ---------------------------------------------------------------------------
# payload builders

def _series_payload(s: T.TruncatedSeries) -> dict:
    terms = []
    for m, c in s.terms:
        neg = C.const_sign(c, 64) == -1
        a = C.const_neg(c) if neg else c
        terms.append({
            "monomial": T.render_monomial(m),
            "coeff_expr": c.render(),
            "coeff_enclosure": _enclosure(c),
            "sign": "-" if neg else "+",
            "factor": T._fmt_coeff_factor(a) if m is not T.ONE_M else str(a),
        })
    return {"terms": terms, "error_order": T.render_monomial(s.error) if s.error is not None else None}


def _render_series(p: dict) -> str:
    out = []
    for i, t in enumerate(p["terms"]):
        if t["monomial"] == "1":
            body = t["factor"]
        elif t["factor"] == "1":
            body = t["monomial"]
        else:
            body = f"{t['factor']}*{t['monomial']}"
        if i == 0:
            out.append(("-" if t["sign"] == "-" else "") + body)
        else:
            out.append((" - " if t["sign"] == "-" else " + ") + body)
    s = "".join(out)
    if p["error_order"] is not None:
        s = f"{s} + O({p['error_order']})" if s else f"O({p['error_order']})"
    return s or "0"


def cmd_expand(a, cfg: Config) -> dict:
    s = A.expand(S.parse(a.expr), cfg.depth)
    return {"command": "expand", "expr": a.expr, "depth": cfg.depth, "series": _series_payload(s)}


def cmd_compare(a, cfg: Config) -> dict:
    r = A.compare(S.parse(a.f), S.parse(a.g), cfg.depth)
    p = {"command": "compare", **r.to_json()}
    if r.verdict is A.Verdict.Undetermined:
        raise _Undetermined(p, f"{r.reason_kind}: {r.reason}")
    return p


def _ratio(c: C.Constant) -> dict:
    return {"expr": c.render(), "enclosure": _enclosure(c), "flag": c.flag.name}


def cmd_limit(a, cfg: Config) -> dict:
    r = A.limit_ratio(S.parse(a.f), S.parse(a.g), cfg.depth)
    p = {"command": "limit", "result": r.kind}
    if r.ratio is not None:
        p["ratio"] = _ratio(r.ratio)
    return p


def cmd_classify(a, cfg: Config) -> dict:
    c = S.classify(S.parse(a.expr))
    return {"command": "classify", "case": c.case.value,
            "f": S.format_term(c.f) if c.f is not None and c.case is not S.Case.Case4_Atom else None,
            "g": S.format_term(c.g) if c.g is not None else None,
            "f_is_component": c.f_is_component}


def cmd_normalize(a, cfg: Config) -> dict:
    nf = S.normalize(S.parse(a.expr))
    return {"command": "normalize", "summands": [
        {"coeff": s.coeff, "factors": [S.format_term(f) for f in s.factors], "text": str(s)}
        for s in nf.summands]}


def cmd_regular(a, cfg: Config) -> dict:
    return {"command": "regular", "result": S.is_regular_below_xx(S.parse(a.expr))}


def cmd_stratify(a, cfg: Config) -> dict:
    return {"command": "stratify", "k": S.stratify(S.parse(a.expr), a.n)}


def cmd_fragment(a, cfg: Config) -> dict:
    return {"command": "fragment", "n": S.fragment_index(S.parse(a.expr))}


def cmd_spectrum(a, cfg: Config) -> dict:
    sp = A.ratio_spectrum(S.parse(a.q), a.size, depth=cfg.depth)
    return {"command": "spectrum",
            "ratios": [{**_ratio(r), "enclosure": list(e.decimal(20)), "source": S.format_term(h)}
                       for r, e, h in zip(sp.ratios, sp.enclosures, sp.sources)],
            "min_gap": None if sp.min_gap is None else C.Interval(sp.min_gap, sp.min_gap).decimal(10)[0],
            "undetermined": [{"item": i, "reason": r} for i, r in sp.undetermined]}


def cmd_ordinal(a, cfg: Config) -> dict:
    return {"command": "ordinal", "result": O.format_ordinal(O.parse_ordinal(a.expr))}


def cmd_bound(a, cfg: Config) -> dict:
    if a.kind == "2pow2x":
        spec = S.TwoPow2x()
    elif a.kind == "2powxx":
        spec = S.TwoPowXx()
    else:
        if a.n is None:
            raise PreconditionError("2pownx needs N")
        spec = S.TwoPowNx(a.n)
    return {"command": "bound", "result": O.format_ordinal(S.order_type_bound(spec))}


def cmd_oracle(a, cfg: Config) -> dict:
    import mpmath
    v = N.eval_ln(S.parse(a.expr), Fraction(a.at), a.prec)
    digits = max(15, int(a.prec * 0.30103) - 2)
    p = {"command": "oracle", "x": a.at, "precision": a.prec,
         "ln_value": mpmath.nstr(v.ln_value, digits),
         "error_bound": C.decimal_bound(C._to_fraction(v.error_bound), 5, up=True),
         "value_enclosure": None}
    enc = v.value_enclosure(a.prec)
    if enc is not None:
        p["value_enclosure"] = C.iv_decimal(enc, digits)
    return p


def render_text(p: dict) -> str:
    """Text form of any command payload."""
    cmd = p["command"]
    if cmd == "expand":
        return _render_series(p["series"])
    if cmd == "compare":
        v = p["verdict"]
        if v == "EqualToDepth":
            return f"EqualToDepth({p['depth']})"
        if v == "Undetermined":
            return f"Undetermined ({p['reason_kind']}: {p['reason']})"
        return v
    if cmd == "limit":
        if p["result"] == "Finite":
            r = p["ratio"]
            return f"Finite({r['expr']}) in [{r['enclosure'][0]}, {r['enclosure'][1]}] {r['flag']}"
        return p["result"]
    if cmd == "classify":
        if p["case"] == "Case4_Atom":
            return p["case"]
        s = f"{p['case']} f={p['f']} g={p['g']}"
        return s if p["f_is_component"] else s + " (f not a component)"
    if cmd == "normalize":
        return " + ".join(s["text"] for s in p["summands"])
    if cmd == "regular":
        return "true" if p["result"] else "false"
    if cmd == "stratify":
        return str(p["k"])
    if cmd == "fragment":
        return str(p["n"])
    if cmd == "spectrum":
        lines = [f"{r['expr']}  [{r['enclosure'][0]}, {r['enclosure'][1]}]  {r['flag']}  from {r['source']}"
                 for r in p["ratios"]]
        lines.append(f"min_gap: {p['min_gap']}")
        lines.extend(f"undetermined: {u['item']} ({u['reason']})" for u in p["undetermined"])
        return "\n".join(lines)
    if cmd in ("ordinal", "bound"):
        return p["result"]
    if cmd == "oracle":
        s = f"ln = {p['ln_value']} +/- {p['error_bound']}"
        if p["value_enclosure"] is not None:
            s += f"\nvalue in [{p['value_enclosure'][0]}, {p['value_enclosure'][1]}]"
        return s
    raise ValueError(f"unknown payload {cmd!r}")


# ---------------------------------------------------------------------------
# argument parsing

def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--depth", type=int, default=None, help="series terms kept")
    common.add_argument("--prec", dest="cap", type=int, default=None, help="precision cap in bits")
    common.add_argument("--output", choices=("text", "json"), default=None)

    p = argparse.ArgumentParser(prog="skolemkit", parents=[common],
                                description="Asymptotics of Skolem functions and ordinal bounds.")
    sub = p.add_subparsers(dest="cmd", required=True)

    def add(name, fn: Callable, help_: str, parents=(common,)):
        sp = sub.add_parser(name, parents=list(parents), help=help_)
        sp.set_defaults(fn=fn)
        return sp

    add("expand", cmd_expand, "series expansion").add_argument("expr")
    sp = add("compare", cmd_compare, "eventual order of F and G")
    sp.add_argument("f"), sp.add_argument("g")
    sp = add("limit", cmd_limit, "limit of F/G")
    sp.add_argument("f"), sp.add_argument("g")
    add("classify", cmd_classify, "structural case of a term").add_argument("expr")
    add("normalize", cmd_normalize, "sum-of-products-of-components form").add_argument("expr")
    add("regular", cmd_regular, "is the term a regular function below 2^(x^x)").add_argument("expr")
    sp = add("stratify", cmd_stratify, "least k with EXPR < 2^(N^x * x^k)")
    sp.add_argument("expr"), sp.add_argument("n", type=int)
    add("fragment", cmd_fragment, "least n with EXPR < 2^(n^x)").add_argument("expr")
    sp = add("spectrum", cmd_spectrum, "leading ratios h/Q over the size-bounded corpus")
    sp.add_argument("q"), sp.add_argument("size", type=int)
    add("ordinal", cmd_ordinal, "evaluate an ordinal expression").add_argument("expr")
    sp = add("bound", cmd_bound, "order-type bound for a threshold")
    sp.add_argument("kind", choices=("2pow2x", "2pownx", "2powxx"))
    sp.add_argument("n", type=int, nargs="?")
    sp = add("oracle", cmd_oracle, "ln-space numeric value", parents=())
    sp.add_argument("expr")
    sp.add_argument("--output", choices=("text", "json"), default=None)
    sp.add_argument("--at", required=True, help="rational point x > 1")
    sp.add_argument("--prec", dest="prec", type=int, default=128, help="working bits")
    return p


def _config(ns) -> Config:
    cfg = from_env()
    changes = {}
    if getattr(ns, "depth", None) is not None:
        changes["depth"] = ns.depth
    if getattr(ns, "cap", None) is not None and ns.cmd != "oracle":
        changes["precision_cap"] = ns.cap
    if ns.output is not None:
        changes["output"] = ns.output
    return cfg.with_(**changes) if changes else cfg


def _emit(p: dict, cfg: Config, out) -> None:
    if cfg.output == "json":
        out.write(json.dumps(p, sort_keys=True) + "\n")
    else:
        out.write(render_text(p) + "\n")


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    ns = _parser().parse_args(argv)
    try:
        cfg = _config(ns)
    except ValueError as e:
        err.write(f"error: {e}\n")
        return EXIT_PRECONDITION
    try:
        with use_config(cfg):
            p = ns.fn(ns, cfg)
        _emit(p, cfg, out)
        return EXIT_OK
    except _Undetermined as u:
        _emit(u.payload, cfg, out)
        err.write(f"undetermined: {u.reason}\n")
        return EXIT_UNDETERMINED
    except ParseError as e:
        err.write(f"parse error: {e}\n")
        return EXIT_PARSE
    except UndeterminedError as e:
        err.write(f"undetermined: {e.reason}: {e}\n")
        return EXIT_UNDETERMINED
    except PreconditionError as e:
        err.write(f"precondition violated: {e}\n")
        return EXIT_PRECONDITION
    except ResourceLimitError as e:
        err.write(f"resource limit: {e}\n")
        return EXIT_RESOURCE
    except EngineFault as e:
        err.write(f"engine fault: {e}\n")
        return EXIT_FAULT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
