"""Rely/guarantee combinator tests."""

import random

import pytest

from refalg import rg
from refalg.terms import Choice, Env, Par, Pgm, StateSpace, WConj
from refalg.traces import ModelCfg, Trace, denote, equiv, refines

S2 = StateSpace(2)
CFG = ModelCfg(S2, 3, debug=True)


def test_bigstep_constants():
    assert rg.bigstep_pi(S2) == Pgm(S2.univ)
    assert rg.bigstep_eps(S2) == Env(S2.univ)
    assert rg.bigstep_alpha(S2) == Choice(Pgm(S2.univ), Env(S2.univ))


def test_skip_only_environment_steps():
    d = denote(rg.skip(S2), CFG)
    assert all(lab == "eps" for t in d for lab, _ in t.steps)
    assert Trace(0, (), "ok") in d


def test_chaos_dominates_skip():
    assert refines(rg.chaos(S2), rg.skip(S2), CFG)
    assert not refines(rg.skip(S2), rg.chaos(S2), CFG)


def test_chaos_never_aborts():
    d = denote(rg.chaos(S2), CFG)
    assert all(t.status != "abort" for t in d)


def test_guar_restricts_program_steps():
    g = frozenset({(0, 1)})
    d = denote(rg.guar(g, S2), CFG)
    for t in d:
        pre = t.init
        for lab, post in t.steps:
            if lab == "pi":
                assert (pre, post) in g
            pre = post


def test_rely_aborts_outside_relation():
    r = frozenset({(0, 0), (1, 1)})
    d = denote(rg.rely(r, S2), CFG)
    # an environment step breaking r may abort
    assert Trace(0, (("eps", 1),), "abort") in d
    # within r it does not have to
    assert all(
        t.status != "abort" or any((a, b) not in r
                                   for (a, b) in _env_pairs(t))
        for t in d
    )


def _env_pairs(t):
    pre = t.init
    for lab, post in t.steps:
        if lab == "eps":
            yield (pre, post)
        pre = post


def test_term_terminates():
    d = denote(rg.term_cmd(S2), CFG)
    assert all(t.status != "abort" for t in d)
    assert Trace(0, (), "ok") in d


def test_post_establishes_condition():
    t1 = frozenset({1})
    d = denote(rg.post(t1, S2), CFG)
    for t in d:
        if t.status == "ok":
            assert t.final_state() in t1


def test_rely_par_guar_collapse():
    for bits in range(16):
        r = frozenset(p for i, p in enumerate(sorted(S2.univ)) if bits >> i & 1)
        assert equiv(Par(rg.rely(r, S2), rg.guar(r, S2)), rg.rely(r, S2), CFG)


def test_parallel_spec_equality():
    for b1 in range(4):
        for b2 in range(4):
            t1 = frozenset(q for q in range(2) if b1 >> q & 1)
            t2 = frozenset(q for q in range(2) if b2 >> q & 1)
            assert equiv(
                rg.post(t1 & t2, S2),
                Par(rg.post(t1, S2), rg.post(t2, S2)),
                CFG,
            )


def test_intro_parallel_chain_well_formed():
    ch = rg.intro_parallel(
        frozenset(), frozenset({(0, 0)}), frozenset({(1, 1)}),
        frozenset({0}), frozenset({1}), S2,
    )
    assert ch.well_formed()
    assert len(ch.steps) == 4
    assert ch.steps[0].start == WConj(rg.rely(frozenset(), S2),
                                      rg.post(frozenset(), S2))


def test_intro_parallel_rejects_unrelated_rely():
    with pytest.raises(rg.PreconditionViolated):
        rg.intro_parallel(
            frozenset({(0, 1)}), frozenset(), frozenset(),
            frozenset(), frozenset(), S2,
        )


def test_verify_chain_random_instances():
    rng = random.Random(7)
    for _ in range(8):
        r = frozenset(p for p in S2.univ if rng.random() < 0.4)
        r1 = r | frozenset(p for p in S2.univ if rng.random() < 0.3)
        r2 = r | frozenset(p for p in S2.univ if rng.random() < 0.3)
        t1 = frozenset(q for q in S2.states if rng.random() < 0.6)
        t2 = frozenset(q for q in S2.states if rng.random() < 0.6)
        ch = rg.intro_parallel(r, r1, r2, t1, t2, S2)
        ok, failure = rg.verify_chain(ch, CFG)
        assert ok, failure


def test_verify_chain_flags_bogus_step():
    from refalg.rg import ChainStep, RefinementChain
    from refalg.terms import Bot, Top

    bogus = RefinementChain((ChainStep(Bot(), Top(), "nonsense", ()),))
    ok, failure = rg.verify_chain(bogus, CFG)
    assert not ok and failure.index == 0
    assert failure.witness


def test_render_chain_format():
    ch = rg.intro_parallel(
        frozenset(), frozenset({(0, 0)}), frozenset({(1, 1)}),
        frozenset({0}), frozenset({1}), S2,
    )
    text = rg.render_chain(ch, S2)
    assert ">= { parallel_spec" in text
    assert text.count(">=") == 4
    assert "rely{}" in text
