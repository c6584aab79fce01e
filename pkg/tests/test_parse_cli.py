import json
import os
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest
from hypothesis import given, settings, strategies as st

from c2steenrod import dual as D
from c2steenrod.checks import load_corpus
from c2steenrod.cli import execute
from c2steenrod.ops import BmuElem
from c2steenrod.parse import ParseError, infer_kind, parse_expression, parse_raw, render_expression
from c2steenrod.point import Neg, PointElem, Pos

SCHEMA = json.loads(resources.files("c2steenrod").joinpath("data/report.schema.json").read_text())


def test_grammar_examples():
    assert parse_expression("tau0^2") == parse_expression("tau1*a + xi1*u + xi1*tau0*a")
    assert parse_expression("u*a") == PointElem.of(Pos(1, 1))
    assert parse_expression("th/(a^2*u)") == PointElem.of(Neg(2, 1))
    assert parse_expression("th/u^3") == PointElem.of(Neg(0, 3))
    assert parse_expression("(u + a)^2") == PointElem.of(Pos(2, 0), Pos(0, 2))
    assert parse_expression("u + u") == PointElem()
    assert parse_expression("  u*a  ") == parse_expression("u*a")


def test_kind_inference():
    assert infer_kind(parse_raw("u + th")) == "point"
    assert infer_kind(parse_raw("xi1*u")) == "dual"
    assert infer_kind(parse_raw("c*b^-2")) == "bmu"
    assert infer_kind(parse_raw("t + xi1*t^2 + O(t^3)")) == "series"
    assert isinstance(parse_expression("u", "dual"), D.ASElem)


@pytest.mark.parametrize("text,pos", [
    ("u +", 3), ("u ** a", 3), ("th^2", 0), ("q", 0), ("u^-1", 0), ("2*u", 0), ("u $ a", 2),
])
def test_parse_errors(text, pos):
    with pytest.raises(ParseError) as info:
        parse_expression(text)
    assert info.value.pos == pos


def test_kind_mismatch():
    with pytest.raises(ParseError):
        parse_expression("b + xi1")
    with pytest.raises(ParseError):
        parse_expression("xi1", "point")
    with pytest.raises(ParseError):
        parse_expression("u + O(t^3)")


small = st.tuples(st.integers(0, 5), st.integers(0, 5))
classes = st.one_of(small.map(lambda t: Pos(*t)), small.map(lambda t: Neg(*t)))
monos = st.builds(D.ASMono, st.tuples(st.integers(0, 3), st.integers(0, 3)).map(lambda t: Pos(*t)),
                  st.lists(st.integers(0, 3), max_size=3).map(lambda l: D._strip(tuple(l))),
                  st.integers(0, 15))
bmu_terms = st.tuples(classes, st.integers(0, 1), st.integers(-4, 6))


@settings(max_examples=60, deadline=None)
@given(st.lists(classes, max_size=5))
def test_point_round_trip(cs):
    x = PointElem(cs)
    assert parse_expression(render_expression(x), "point") == x


@settings(max_examples=60, deadline=None)
@given(st.lists(monos, max_size=4))
def test_dual_round_trip(ms):
    x = D.ASElem(ms)
    assert parse_expression(render_expression(x), "dual") == x


@settings(max_examples=60, deadline=None)
@given(st.lists(bmu_terms, max_size=4))
def test_bmu_round_trip(ts):
    x = BmuElem(ts)
    assert parse_expression(render_expression(x), "bmu") == x


def test_spec_commands():
    rep, code, _ = execute(["--format", "json", "action-derive", "--k", "1"])
    assert (code, rep["status"], rep["payload"]["result"]) == (0, "ok", "tau2 + tau0*xi2")
    rep, code, _ = execute(["nishida", "--elem", "c", "--window", "8"])
    assert (code, rep["status"]) == (0, "ok")
    rep, code, _ = execute(["qop", "--op", "3rho", "--elem", "tau0"])
    assert (code, rep["status"]) == (2, "undetermined")


def test_exit_codes():
    assert execute(["normal-form", "--elem", "u^-1"])[1] == 3
    assert execute(["no-such-command"])[1] == 3
    assert execute(["etar", "--elem", "th/a^4", "--ceiling", "3"])[1] == 2
    assert execute(["cotor", "--smax", "1", "--bound", "3"])[1] == 1
    assert execute(["cotor", "--smax", "1", "--bound", "3", "--corrected"])[1] == 0
    assert execute(["--budget", "5", "ext", "--smax", "4", "--nmax", "4"])[1] == 2


def test_corpus_reports_match_schema():
    for code, args in load_corpus():
        rep, got, out = execute(["--format", "json"] + args)
        assert got == code, args
        if out:
            jsonschema.validate(json.loads(out), SCHEMA)


def test_text_and_ascii_formats():
    _rep, code, out = execute(["--format", "ascii", "ext", "--smax", "3", "--nmax", "3"])
    assert code == 0
    assert out.splitlines()[-1] == "n*rho - 1 line: all zero"
    _rep, code, out = execute(["conjugate", "--gen", "xi", "--index", "2"])
    assert out == "xi2 + xi1^3"


def _run(args, hashseed):
    env = dict(os.environ, PYTHONHASHSEED=str(hashseed))
    return subprocess.run([sys.executable, "-m", "c2steenrod", "--format", "json"] + args,
                          capture_output=True, env=env, timeout=300)


@pytest.mark.parametrize("args", [
    ["psi", "--elem", "tau2*xi1"],
    ["ext", "--smax", "3", "--nmax", "3"],
    ["coaction", "--elem", "c*b^-1", "--cap", "6"],
])
def test_byte_determinism_across_processes(args):
    runs = [_run(args, seed) for seed in (0, 1, 12345)]
    assert len({r.stdout for r in runs}) == 1
    assert {r.returncode for r in runs} == {0}
