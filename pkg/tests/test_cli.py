import io
import json
import subprocess
import sys
from decimal import Decimal

import pytest

from skolemkit import cli


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


class TestCommands:
    def test_expand(self):
        code, out, _ = call("expand", "(x+1)^x", "--depth", "2")
        assert code == 0
        assert out.strip() == "e*x^x - (e/2)*x^(x-1) + O(x^(x-2))"

    def test_bound(self):
        assert call("bound", "2pownx", "3")[1].strip() == "w^(w^(w^w))"
        assert call("bound", "2pow2x")[1].strip() == "w^(w^w)"
        assert call("bound", "2powxx")[1].strip() == "e0"

    def test_compare(self):
        code, out, _ = call("compare", "x^x", "2^x")
        assert (code, out.strip()) == (0, "Greater")

    @pytest.mark.parametrize("argv,first", [
        (("limit", "(x+1)^x", "x^x"), "Finite(e)"),
        (("classify", "x*x"), "Case1_Product"),
        (("regular", "2^(2^x)"), "true"),
        (("stratify", "2^(x*x)*2^x", "1"), "3"),
        (("fragment", "x^x"), "2"),
        (("ordinal", "hsum(w+1, w*2)"), "w*3 + 1"),
        (("normalize", "4^x"), "2^x*2^x"),
    ])
    def test_text(self, argv, first):
        code, out, _ = call(*argv)
        assert code == 0
        assert out.split("\n")[0].startswith(first)

    def test_oracle(self):
        code, out, _ = call("oracle", "2^(2^x)", "--at", "10")
        assert code == 0 and out.startswith("ln = 709.78271289338")

    def test_spectrum(self):
        code, out, _ = call("spectrum", "x", "5")
        assert code == 0
        assert [l.split()[0] for l in out.splitlines() if l[0].isdigit()] == ["1", "2", "3"]


class TestExitCodes:
    def test_parse(self):
        code, _, err = call("expand", "x-1")
        assert code == 2 and "position 1" in err

    def test_undetermined(self):
        code, _, err = call("compare", "x^((x+1)^x)", "x^((x+1)^x+1)", "--depth", "1")
        assert code == 3 and err.startswith("undetermined: depth")

    def test_precondition(self):
        assert call("stratify", "2^(2^x)", "1")[0] == 4
        assert call("fragment", "2^(x^x)")[0] == 4

    def test_resource(self):
        code, _, err = call("oracle", "2^(2^(2^x))", "--at", "100")
        assert code == 5 and "resource limit" in err

    def test_bad_depth(self):
        assert call("expand", "x", "--depth", "0")[0] == 4


ROUND_TRIP = [
    ("expand", "(x+1)^x", "--depth", "3"),
    ("compare", "x^x", "2^x"),
    ("compare", "4^x", "2^x*2^x"),
    ("limit", "(x+1)^x", "x^x"),
    ("limit", "2^x", "x^x"),
    ("classify", "x^x + x"),
    ("regular", "2^x"),
    ("stratify", "x", "1"),
    ("fragment", "2^(3^x)*2"),
    ("spectrum", "x", "5"),
    ("ordinal", "cexp(w+1, 2)"),
    ("bound", "2pownx", "4"),
    ("oracle", "x^x", "--at", "10"),
    ("normalize", "(x+1)*(x+1)"),
]


class TestJson:
    @pytest.mark.parametrize("argv", ROUND_TRIP, ids=lambda a: " ".join(a))
    def test_round_trip(self, argv):
        code, text, _ = call(*argv)
        code_j, js, _ = call(*argv, "--output", "json")
        assert code == code_j == 0
        payload = json.loads(js)
        assert cli.render_text(payload) + "\n" == text

    def test_expand_schema(self):
        p = json.loads(call("expand", "(x+1)^x", "--depth", "2", "--output", "json")[1])
        series = p["series"]
        t0 = series["terms"][0]
        assert {"monomial", "coeff_expr", "coeff_enclosure"} <= t0.keys()
        assert t0["monomial"] == "x^x" and t0["coeff_expr"] == "e"
        lo, hi = (Decimal(v) for v in t0["coeff_enclosure"])
        assert lo < Decimal("2.718281828459045235") < hi
        assert series["error_order"] == "x^(x-2)"

    def test_compare_schema(self):
        p = json.loads(call("compare", "x^x", "2^x", "--output", "json")[1])
        assert p["verdict"] == "Greater" and "x_values" in p["oracle_check"]


class TestDeterminism:
    def test_byte_identical(self):
        a = call("spectrum", "x^x", "7", "--output", "json")[1]
        b = call("spectrum", "x^x", "7", "--output", "json")[1]
        assert a == b

    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("SKOLEMKIT_DEPTH", "2")
        assert call("expand", "(x+1)^x")[1].strip() == "e*x^x - (e/2)*x^(x-1) + O(x^(x-2))"
        monkeypatch.setenv("SKOLEMKIT_OUTPUT", "json")
        assert json.loads(call("compare", "x", "1")[1])["verdict"] == "Greater"

    def test_console_entry(self):
        r = subprocess.run([sys.executable, "-m", "skolemkit.cli", "compare", "x^x", "2^x"],
                           capture_output=True, text=True)
        assert r.returncode == 0 and r.stdout.strip() == "Greater"
