"""Build command terms and print them in the concrete syntax.

Shows the constructors, the precedence of the infix operators, and how
the renderer re-sugars common shapes (skip, chaos, guar, rely, ...).
"""

from refalg import (
    Bot,
    Choice,
    Env,
    Par,
    Pgm,
    Seq,
    StateSpace,
    Tau,
    Test,
    Top,
    WConj,
    assert_cmd,
    parse_dsl,
    render,
    validate,
)
from refalg.rg import chaos, guar, rely, skip

s = StateSpace(2)

# A few primitive commands over a two-state space.
print(render(Bot()))
print(render(Top()))
print(render(Test(frozenset({0}))))
print(render(Pgm(frozenset({(0, 1), (1, 0)}))))

# Sequential composition binds tighter than parallel, which binds
# tighter than choice.  Parentheses appear only where needed.
c = Choice(Seq(Tau(), Pgm(s.univ)), Par(Env(s.univ), Top()))
print(render(c))

d = Seq(Choice(Tau(), Bot()), Test(frozenset({1})))
print(render(d))  # the choice needs parens under ;

# Assertions are sugar for a choice with an aborting branch.
a = assert_cmd(frozenset({0}), s)
print(render(a))

# Macro shapes render back under their names.
print(render(skip(s)))
print(render(chaos(s)))
print(render(guar(frozenset({(0, 0), (1, 1)}), s)))
print(render(rely(frozenset({(0, 1)}), s)))

# render and parse_dsl are inverses.
src = "pgm{(0,1)} ; (tau | bot) || env{(1,1)}"
c2 = parse_dsl(src, s)
print(render(c2))
assert parse_dsl(render(c2), s) == c2

# validate reports where a term falls outside the state space
bad = Pgm(frozenset({(0, 5)}))
print(validate(bad, s))
print(validate(c, s))  # None means well formed
