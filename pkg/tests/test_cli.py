"""CLI and DSL tests: grammar, round-trips, subcommands, exit codes, JSON."""

import io
import json
import random

import pytest

from refalg.cli import DslError, parse_dsl, run
from refalg.laws import GenCfg, gen
from refalg.terms import (
    Choice,
    Env,
    FinIter,
    Pgm,
    Seq,
    StateSpace,
    Tau,
    Top,
    render,
)

S2 = StateSpace(2)


def invoke(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


# -- parsing ---------------------------------------------------------------

def test_parse_seq_example():
    assert parse_dsl("tau ; pgm{(0,1)}", S2) == Seq(Tau(), Pgm(frozenset({(0, 1)})))


def test_parse_precedence_example():
    c = parse_dsl("pgm{(0,0)} | env{(0,0)} ; top", S2)
    assert c == Choice(Pgm(frozenset({(0, 0)})),
                       Seq(Env(frozenset({(0, 0)})), Top()))


def test_parse_out_of_range_state():
    with pytest.raises(DslError) as exc:
        parse_dsl("fin(pgm{(0,2)})", S2)
    assert exc.value.line == 1 and exc.value.col > 1


def test_parse_left_assoc():
    c = parse_dsl("tau ; tau ; top", S2)
    assert c == Seq(Seq(Tau(), Tau()), Top())


def test_parse_operator_levels():
    c = parse_dsl("tau ; tau && tau || tau & tau | tau", S2)
    # loosest operator at the root
    assert isinstance(c, Choice)


def test_parse_iterations_and_pow():
    assert parse_dsl("fin(tau)", S2) == FinIter(Tau())
    c = parse_dsl("pow(tau,2)", S2, bound=3)
    assert c.count == 2
    with pytest.raises(DslError):
        parse_dsl("pow(tau,9)", S2, bound=3)


def test_parse_syntax_error_position():
    with pytest.raises(DslError) as exc:
        parse_dsl("tau ;; tau", S2)
    assert exc.value.col == 6


def test_parse_unknown_name():
    with pytest.raises(DslError):
        parse_dsl("banana", S2)


def test_parse_empty_sets():
    assert parse_dsl("pgm{}", S2) == Pgm(frozenset())
    assert parse_dsl("test{}", S2).states == frozenset()


def test_roundtrip_random_commands():
    gcfg = GenCfg(seed=2024, state_size=2, bound=3)
    rng = random.Random(8)
    for _ in range(200):
        c = gen("command", gcfg, rng)
        assert parse_dsl(render(c, S2), S2) == c
        assert parse_dsl(render(c), S2) == c


def test_roundtrip_macros():
    for src in ("skip", "chaos", "term", "guar{(0,1)}", "rely{}",
                "post{0,1}", "assert{}"):
        c = parse_dsl(src, S2)
        assert render(c, S2) == src


# -- subcommands -------------------------------------------------------------

def test_equiv_skip_par_chaos():
    code, out, _ = invoke(["equiv", "skip || chaos", "chaos",
                           "--states", "2", "--bound", "2"])
    assert code == 0
    assert out.strip() == "true"


def test_check_rely_weaken_direction():
    code, _, _ = invoke(["check", "rely{(0,0),(1,1)}", "refines", "rely{}",
                         "--states", "2", "--bound", "2"])
    assert code == 1
    code, _, _ = invoke(["check", "rely{}", "refines", "rely{(0,0),(1,1)}",
                         "--states", "2", "--bound", "2"])
    assert code == 0


def test_parse_error_exit_code():
    code, _, err = invoke(["equiv", "skip |", "chaos", "--states", "2"])
    assert code == 2
    assert "parse error" in err


def test_usage_error_exit_code():
    code, _, _ = invoke(["check", "tau", "notrefines", "tau"])
    assert code == 2
    code, _, _ = invoke(["frobnicate"])
    assert code == 2


def test_trace_count():
    code, out, _ = invoke(["trace-count", "top", "--states", "2", "--bound", "1"])
    assert code == 0
    assert out.strip() == "30"


def test_expand_output():
    code, out, _ = invoke(["expand", "pgm{(0,1)}", "--states", "2"])
    assert code == 0
    assert "term {}" in out
    assert "pi(0,1)" in out


def test_expand_json_depth():
    code, out, _ = invoke(["expand", "pgm{(0,1)} ; env{(1,1)}",
                           "--states", "2", "--json", "--depth", "2"])
    assert code == 0
    doc = json.loads(out)
    assert doc["branches"][0]["label"] == "pi"
    assert isinstance(doc["branches"][0]["continuation"], dict)


def test_laws_single_law_json_schema():
    code, out, _ = invoke(["laws", "--law", "par_comm", "--states", "2",
                           "--bound", "2", "--trials", "4", "--seed", "11",
                           "--json"])
    assert code == 0
    docs = json.loads(out)
    assert len(docs) == 1
    doc = docs[0]
    assert set(doc) == {"law", "trials", "passes", "skipped", "seed",
                        "states", "bound", "status", "counterexample"}
    assert doc["status"] == "pass"
    assert doc["seed"] == 11 and doc["states"] == 2 and doc["bound"] == 2
    assert doc["counterexample"] is None


def test_laws_unknown_law():
    code, _, err = invoke(["laws", "--law", "no_such_law"])
    assert code == 2
    assert "no_such_law" in err


def test_laws_family_run():
    code, out, _ = invoke(["laws", "--family", "tests", "--states", "2",
                           "--bound", "2", "--trials", "3", "--json"])
    assert code == 0
    docs = json.loads(out)
    assert docs[0]["law"] == "compatible_set.tests"
    assert docs[0]["status"] == "pass"


def test_laws_json_determinism_single_law():
    argv = ["laws", "--law", "interchange.par_seq", "--states", "2",
            "--bound", "2", "--trials", "5", "--seed", "3", "--json"]
    _, out1, _ = invoke(argv)
    _, out2, _ = invoke(argv)
    assert out1 == out2
