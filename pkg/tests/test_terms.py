"""Syntax-level tests: construction, validation, rendering."""

import pytest

from refalg.terms import (
    Bot,
    Choice,
    Env,
    FinIter,
    FixedIter,
    InfIter,
    Meet,
    OmIter,
    Par,
    Pgm,
    Seq,
    StateSpace,
    Tau,
    Test,
    Top,
    WConj,
    assert_cmd,
    is_atomic_step,
    negate_test,
    pseudo_atomic,
    render,
    subterms,
    validate,
)


S2 = StateSpace(2)


def test_state_space():
    assert S2.states == frozenset({0, 1})
    assert len(S2.univ) == 4
    with pytest.raises(ValueError):
        StateSpace(0)


def test_commands_are_hashable_and_comparable():
    a = Seq(Tau(), Pgm(frozenset({(0, 1)})))
    b = Seq(Tau(), Pgm(frozenset({(0, 1)})))
    assert a == b
    assert hash(a) == hash(b)
    assert a != Seq(Tau(), Env(frozenset({(0, 1)})))


def test_validate_accepts_in_range():
    c = Choice(Pgm(frozenset({(0, 1)})), Test(frozenset({1})))
    assert validate(c, S2) is None


def test_validate_reports_path():
    bad = Seq(Tau(), Pgm(frozenset({(0, 2)})))
    msg = validate(bad, S2)
    assert msg is not None and "right" in msg


def test_fixed_iter_count_must_be_natural():
    with pytest.raises(ValueError):
        FixedIter(Tau(), -1)


def test_negate_test():
    t = frozenset({0})
    assert negate_test(t, S2) == frozenset({1})
    assert negate_test(negate_test(t, S2), S2) == t


def test_assert_cmd_shape():
    c = assert_cmd(frozenset({0}), S2)
    assert isinstance(c, Choice)
    assert c.left == Tau()
    assert c.right == Seq(Test(frozenset({1})), Top())


def test_is_atomic_step():
    assert is_atomic_step(Pgm(frozenset({(0, 0)})))
    assert is_atomic_step(Choice(Pgm(frozenset()), Env(frozenset({(1, 1)}))))
    assert is_atomic_step(Bot())
    assert not is_atomic_step(Tau())
    assert not is_atomic_step(Seq(Pgm(frozenset()), Tau()))


def test_pseudo_atomic_shape_and_guard():
    a = Pgm(frozenset({(0, 1)}))
    b = Env(frozenset({(1, 0)}))
    p = pseudo_atomic(a, b)
    assert p == Choice(a, Seq(b, Top()))
    with pytest.raises(ValueError):
        pseudo_atomic(Tau(), b)


def test_subterms():
    c = Seq(Tau(), FinIter(Bot()))
    subs = list(subterms(c))
    assert Tau() in subs and Bot() in subs and FinIter(Bot()) in subs and c in subs


def test_render_precedence():
    # ';' binds tighter than '|'
    c = Choice(Pgm(frozenset({(0, 0)})), Seq(Env(frozenset({(0, 0)})), Top()))
    assert render(c) == "pgm{(0,0)} | env{(0,0)} ; top"


def test_render_parenthesises_loose_children():
    c = Seq(Choice(Tau(), Bot()), Top())
    assert render(c) == "(tau | bot) ; top"


def test_render_left_assoc_right_child():
    # a ; (b ; c) must keep its parentheses to stay distinguishable
    c = Seq(Tau(), Seq(Bot(), Top()))
    assert render(c) == "tau ; (bot ; top)"
    d = Seq(Seq(Tau(), Bot()), Top())
    assert render(d) == "tau ; bot ; top"


def test_render_iterations():
    assert render(FinIter(Tau())) == "fin(tau)"
    assert render(OmIter(Tau())) == "om(tau)"
    assert render(InfIter(Tau())) == "inf(tau)"
    assert render(FixedIter(Tau(), 3)) == "pow(tau,3)"


def test_render_sugar():
    from refalg import rg

    assert render(rg.skip(S2), S2) == "skip"
    assert render(rg.chaos(S2), S2) == "chaos"
    assert render(rg.term_cmd(S2), S2) == "term"
    g = frozenset({(0, 0), (1, 1)})
    assert render(rg.guar(g, S2), S2) == "guar{(0,0),(1,1)}"
    assert render(rg.rely(g, S2), S2) == "rely{(0,0),(1,1)}"
    assert render(rg.post(frozenset({0}), S2), S2) == "post{0}"
    assert render(assert_cmd(frozenset({0}), S2), S2) == "assert{0}"


def test_render_without_space_keeps_raw_shape():
    from refalg import rg

    # without a state space there is no sugar
    assert "om(" in render(rg.skip(S2))


def test_meet_and_wconj_render_distinct():
    c = Meet(Tau(), Bot())
    d = WConj(Tau(), Bot())
    assert render(c) == "tau & bot"
    assert render(d) == "tau && bot"
    assert render(Par(Tau(), Bot())) == "tau || bot"
