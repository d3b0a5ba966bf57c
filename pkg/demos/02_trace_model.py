"""Denote commands as bounded, prefix- and abort-closed trace sets."""

from refalg import (
    Bot,
    Env,
    ModelCfg,
    Pgm,
    Seq,
    StateSpace,
    Tau,
    Top,
    denote,
    refines,
    render_trace,
)

cfg = ModelCfg(StateSpace(2), bound=2)

# tau does nothing: for each initial state we get the terminated trace,
# its incomplete prefix, and the floor is shared by every command.
for t in sorted(denote(Tau(), cfg)):
    print(render_trace(t))

print()

# a program step relates states through its pairs
step = Pgm(frozenset({(0, 1)}))
for t in sorted(denote(step, cfg)):
    print(render_trace(t))

print()

# top is the abort command; closure pads it out with every extension
# up to the bound, which is why its trace set is the whole universe
u = denote(Top(), cfg)
print("traces in top at bound 2:", len(u))

# bot is refined by everything, top refines everything
assert refines(Top(), Tau(), cfg)
assert refines(Tau(), Bot(), cfg)
assert not refines(Bot(), Tau(), cfg)

# sequential composition glues terminated traces to matching starts
two = Seq(Pgm(frozenset({(0, 1)})), Env(frozenset({(1, 0)})))
for t in sorted(denote(two, cfg)):
    if t.status == "ok":
        print(render_trace(t))

# abort on the left swallows the right operand entirely
assert denote(Seq(Top(), Bot()), cfg) == denote(Top(), cfg)
