"""Law-suite machinery tests: generators, checking, shrinking, reports.

The heavyweight full-suite runs live in test_acceptance.py; here we check
the machinery itself on small trial counts.
"""

import random

from refalg.laws import (
    FAMILIES,
    GenCfg,
    Law,
    check_compatible_set,
    check_law,
    gen,
    registry,
    strict_chaos_skip_counterexample,
    strict_interchange_counterexample,
)
from refalg.terms import (
    Bot,
    Choice,
    Command,
    Seq,
    Top,
    is_atomic_step,
    validate,
)

CFG = GenCfg(seed=7, state_size=2, bound=2, trials=3)


def test_registry_size_and_names_unique():
    laws = registry()
    assert len(laws) >= 45
    names = [l.name for l in laws]
    assert len(names) == len(set(names))


def test_registry_covers_operator_pairs():
    names = {l.name for l in registry()}
    for pair in ("par_seq", "conj_seq", "conj_par"):
        assert "interchange." + pair in names
    # the atomic suite is replayed for pseudo-atomic generators
    assert "atomic_sync_eta.atomic.par_seq" in names
    assert "atomic_sync_eta.pseudo.par_seq" in names


def test_generators_are_deterministic():
    a = gen("command", CFG, random.Random("x"))
    b = gen("command", CFG, random.Random("x"))
    assert a == b


def test_generated_commands_validate():
    rng = random.Random(3)
    s = CFG.space()
    for _ in range(100):
        c = gen("command", CFG, rng)
        assert isinstance(c, Command)
        assert validate(c, s) is None


def test_generated_atomics_are_atomic():
    rng = random.Random(4)
    for _ in range(30):
        assert is_atomic_step(gen("atomic", CFG, rng))


def test_generated_pseudo_atomic_shape():
    rng = random.Random(5)
    p = gen("pseudo-atomic", CFG, rng)
    assert isinstance(p, Choice)
    assert isinstance(p.right, Seq) and p.right.right == Top()


def test_check_law_passes_sound_law():
    law = next(l for l in registry() if l.name == "choice_comm")
    rep = check_law(law, CFG)
    assert rep.status == "pass"
    assert rep.passes == rep.trials == CFG.trials
    assert rep.skipped == 0


def test_check_law_catches_unsound_law():
    bogus = Law(
        name="bogus_tau_is_bot",
        ref="deliberately false",
        kind="equality",
        vars=(("c", "command"),),
        make=lambda e, s: __import__("refalg.laws", fromlist=["_eq"])._eq(
            Seq(e["c"], Bot()), Bot()),
    )
    rep = check_law(bogus, CFG)
    assert rep.status == "fail"
    assert rep.failure is not None
    assert rep.failure.violation in ("lhs-missing", "rhs-extra")
    assert rep.failure.witness


def test_shrinking_produces_small_counterexample():
    bogus = Law(
        name="bogus_seq_comm",
        ref="deliberately false",
        kind="equality",
        vars=(("c", "command"), ("d", "command")),
        make=lambda e, s: __import__("refalg.laws", fromlist=["_eq"])._eq(
            Seq(e["c"], e["d"]), Seq(e["d"], e["c"])),
    )
    rep = check_law(bogus, CFG)
    assert rep.status == "fail"
    # shrinking should reduce at least one binding to a leaf command
    assert any(b in ("bot", "tau") or len(b) < 25
               for b in rep.failure.bindings.values())


def test_conditional_laws_do_not_skip_everything():
    for name in ("finite_iter_induct", "iter_induct", "inf_iter_induct"):
        law = next(l for l in registry() if l.name == name)
        rep = check_law(law, CFG)
        assert rep.status == "pass"
        assert rep.trials >= CFG.trials // 2, name


def test_compatible_families():
    for fam in FAMILIES:
        rep = check_compatible_set(fam, CFG)
        assert rep.status == "pass", fam


def test_strictness_witnesses():
    cfg = GenCfg(seed=7, state_size=2, bound=3, trials=1)
    env, witness = strict_interchange_counterexample(cfg)
    assert witness
    assert strict_chaos_skip_counterexample(cfg)


def test_reports_deterministic_across_runs():
    law = next(l for l in registry() if l.name == "interchange.par_seq")
    r1 = check_law(law, CFG)
    r2 = check_law(law, CFG)
    assert r1 == r2
