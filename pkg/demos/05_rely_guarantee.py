"""Rely/guarantee reasoning: the derived commands and a verified
refinement chain introducing a parallel composition."""

from refalg import (
    ModelCfg,
    Par,
    StateSpace,
    WConj,
    denote,
    equiv,
    guar,
    intro_parallel,
    post,
    refines,
    rely,
    render,
    render_chain,
    skip,
    term_cmd,
    verify_chain,
)

s = StateSpace(2)
cfg = ModelCfg(s, bound=3)

identity = frozenset({(0, 0), (1, 1)})
anywhere = s.univ

# guar g only ever takes program steps inside g
g = guar(identity, s)
print(render(g))

# rely r behaves like chaos while the environment stays inside r,
# and aborts on the first environment step outside it
r = rely(identity, s)
print(render(r))

# a rely composed in parallel with a matching guarantee collapses:
# the guarantee only produces program steps the rely already tolerates
collapsed = Par(rely(identity, s), guar(identity, s))
assert equiv(collapsed, rely(identity, s), cfg)
print("rely || guar == rely   (matching relations)")

# term terminates, skip is its environment-only special case
assert refines(term_cmd(s), skip(s), cfg)

# postcondition specifications take a set of acceptable final states
spec = post(frozenset({1}), s)
print(render(spec))

# introduce a parallel decomposition of a conjoined postcondition spec,
# splitting the termination work between two threads: the composition
# establishes t1 & t2 when the components establish t1 and t2
t1 = frozenset({0, 1})
t2 = frozenset({1})
chain = intro_parallel(identity, anywhere, anywhere, t1, t2, s)
print()
print(render_chain(chain, s))

ok, failure = verify_chain(chain, cfg)
print("chain verified:", ok)
