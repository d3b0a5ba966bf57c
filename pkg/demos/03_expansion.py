"""Expand commands into head-normal form and cross-check against the
trace model.

An expanded form records which initial states abort, which may
terminate immediately, and a branch map from first steps to residual
commands. Comparing expansions depth by depth gives an independent
equivalence check.
"""

import random

from refalg import (
    Choice,
    Env,
    ModelCfg,
    Pgm,
    Seq,
    StateSpace,
    Tau,
    cross_check,
    equiv,
    equiv_by_expansion,
    expand,
    rebuild,
)
from refalg.laws import GenCfg, gen

s = StateSpace(2)
cfg = ModelCfg(s, bound=2)

c = Choice(Seq(Pgm(frozenset({(0, 1)})), Tau()), Env(frozenset({(1, 1)})))
form = expand(c, s)
print("abort states:", sorted(form.abort_states))
print("term states:", sorted(form.term_states))
for (label, pre, post), residual in form.branches:
    print("branch %s %d->%d" % (label, pre, post))

# rebuild turns a form back into a command with the same meaning
assert equiv(rebuild(form, s), c, cfg)

# equivalence by expansion agrees with the trace model
d = Choice(Env(frozenset({(1, 1)})), Seq(Pgm(frozenset({(0, 1)})), Tau()))
print(equiv_by_expansion(c, d, 2, s))
print(equiv_by_expansion(c, Tau(), 2, s))

# randomized agreement check between both decision procedures
rng = random.Random("expansion-demo")
gcfg = GenCfg(seed=0, state_size=2, bound=2)
disagreements = 0
for _ in range(50):
    a = gen("command", gcfg, rng)
    b = gen("command", gcfg, rng)
    report = cross_check(a, b, cfg)
    if not report.agree:
        disagreements += 1
        print("disagree:", report)
print("disagreements over 50 random pairs:", disagreements)
