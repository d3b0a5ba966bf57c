"""Symbolic head-normal forms: a second, oracle-independent engine.

Every command is flattened one step at a time into an expanded form made of

* ``abort_states``  -- states from which the command can abort immediately,
* ``term_states``   -- states from which it can terminate immediately, and
* ``branches``      -- a map from one concrete step ``(label, pre, post)``
  to the continuation command after taking that step.

Both state sets are exact zero-step observations of the denotation (abort
closure makes every abort state a termination state too, so
``abort_states <= term_states``).  Iteration nodes are not unrolled
recursively; their zero-step observations are closed-form fixed-point
solutions over the test lattice, which keeps expansion total even for
self-feeding unfoldings such as the infinite iteration of a test.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from . import traces
from .terms import (
    Bot,
    Choice,
    Command,
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
    negate_test,
)
from .traces import EPS, PI, ModelCfg, denote, render_trace

Step = Tuple[str, int, int]  # (label, pre-state, post-state)


@dataclass(frozen=True)
class ExpandedForm:
    abort_states: frozenset
    term_states: frozenset
    branches: "Tuple[Tuple[Step, Command], ...]"  # sorted items, hashable

    def branch_map(self) -> Dict[Step, Command]:
        return dict(self.branches)


def _form(abort, term, branches: Dict[Step, Command]) -> ExpandedForm:
    return ExpandedForm(
        frozenset(abort),
        frozenset(term) | frozenset(abort),
        tuple(sorted(branches.items())),
    )


def _merge(branches: Dict[Step, Command], key: Step, cont: Command) -> None:
    old = branches.get(key)
    if old is None:
        branches[key] = cont
    elif old != cont:
        branches[key] = Choice(old, cont)


_PAR_LABEL = {(PI, EPS): PI, (EPS, PI): PI, (EPS, EPS): EPS}
_CONJ_LABEL = {(PI, PI): PI, (EPS, EPS): EPS}

_EXPAND_CACHE: Dict[Tuple[Command, int], ExpandedForm] = {}


def clear_cache() -> None:
    _EXPAND_CACHE.clear()


def expand(c: Command, s: StateSpace) -> ExpandedForm:
    """Head normal form of c over the given state space."""
    key = (c, s.size)
    hit = _EXPAND_CACHE.get(key)
    if hit is None:
        hit = _expand(c, s)
        _EXPAND_CACHE[key] = hit
    return hit


def _expand(c: Command, s: StateSpace) -> ExpandedForm:
    allq = s.states
    if isinstance(c, Bot):
        return _form((), (), {})
    if isinstance(c, Top):
        return _form(allq, allq, {})
    if isinstance(c, Tau):
        return _form((), allq, {})
    if isinstance(c, Test):
        return _form((), c.states, {})
    if isinstance(c, (Pgm, Env)):
        lab = PI if isinstance(c, Pgm) else EPS
        branches: Dict[Step, Command] = {}
        for a, b in c.pairs:
            _merge(branches, (lab, a, b), Tau())
        return _form((), (), branches)
    if isinstance(c, Choice):
        fl, fr = expand(c.left, s), expand(c.right, s)
        branches = fl.branch_map()
        for key, cont in fr.branches:
            _merge(branches, key, cont)
        return _form(
            fl.abort_states | fr.abort_states,
            fl.term_states | fr.term_states,
            branches,
        )
    if isinstance(c, Meet):
        return _expand_meet(c, s)
    if isinstance(c, Seq):
        return _expand_seq(expand(c.left, s), c.right, s)
    if isinstance(c, (Par, WConj)):
        table = _PAR_LABEL if isinstance(c, Par) else _CONJ_LABEL
        op = type(c)
        fl, fr = expand(c.left, s), expand(c.right, s)
        branches = {}
        for (l1, pre1, post1), c1 in fl.branches:
            for (l2, pre2, post2), c2 in fr.branches:
                if pre1 != pre2 or post1 != post2:
                    continue
                lab = table.get((l1, l2))
                if lab is None:
                    continue
                _merge(branches, (lab, pre1, post1), op(c1, c2))
        return _form(
            fl.abort_states | fr.abort_states,
            fl.term_states & fr.term_states,
            branches,
        )
    if isinstance(c, FixedIter):
        if c.count == 0:
            return _expand(Tau(), s)
        return _expand_seq(expand(c.body, s), FixedIter(c.body, c.count - 1), s)
    if isinstance(c, (FinIter, OmIter, InfIter)):
        return _expand_iter(c, s)
    raise TypeError("unknown command: %r" % (c,))


def _expand_seq(fl: ExpandedForm, right: Command, s: StateSpace) -> ExpandedForm:
    """Expanded form of (left ; right) given left's form."""
    fr = expand(right, s)
    abort = fl.abort_states | (fl.term_states & fr.abort_states)
    term = fl.term_states & fr.term_states
    branches: Dict[Step, Command] = {}
    for key, cont in fl.branches:
        _merge(branches, key, Seq(cont, right))
    for key, cont in fr.branches:
        if key[1] in fl.term_states:  # domain-restrict to left's term test
            _merge(branches, key, cont)
    return _form(abort, term, branches)


def _expand_meet(c: Meet, s: StateSpace) -> ExpandedForm:
    fl, fr = expand(c.left, s), expand(c.right, s)
    abort = fl.abort_states & fr.abort_states
    term = fl.term_states & fr.term_states
    # A side in an abort state offers every step with an unconstrained
    # continuation, so intersect against that effective branch map.
    branches: Dict[Step, Command] = {}
    keys = {k for k, _ in fl.branches} | {k for k, _ in fr.branches}
    keys |= {
        (lab, pre, post)
        for lab in (PI, EPS)
        for pre in fl.abort_states | fr.abort_states
        for post in range(s.size)
    }
    lm, rm = fl.branch_map(), fr.branch_map()
    for key in keys:
        cl = _effective(lm, fl.abort_states, key)
        cr = _effective(rm, fr.abort_states, key)
        if cl is None or cr is None:
            continue
        _merge(branches, key, Meet(cl, cr))
    return _form(abort, term, branches)


def _effective(bmap, abort_states, key) -> Optional[Command]:
    if key[1] in abort_states:
        return Top()
    return bmap.get(key)


def _expand_iter(c: Command, s: StateSpace) -> ExpandedForm:
    """Closed-form head normal forms of the iteration operators.

    Writing A/T for the body's zero-step abort/termination state sets, the
    star, omega and infinite iterations satisfy X = tau | body;X (least),
    X = tau | body;X (greatest) and X = body;X (greatest) respectively.
    Solving those equations over the finite test lattice gives:

    * star:      abort A,      term all
    * omega:     abort A | T,  term all   (at a state where the body can
      terminate immediately, the greatest solution absorbs every behaviour)
    * infinite:  abort A | T,  term A | T (never genuinely terminates)

    Branch structure in all three cases is the body's, each continuation
    sequenced with the iteration itself.
    """
    fb = expand(c.body, s)
    branches: Dict[Step, Command] = {}
    for key, cont in fb.branches:
        _merge(branches, key, Seq(cont, c))
    if isinstance(c, FinIter):
        return _form(fb.abort_states, s.states, branches)
    if isinstance(c, OmIter):
        return _form(fb.abort_states | fb.term_states, s.states, branches)
    # InfIter
    sink = fb.abort_states | fb.term_states
    return _form(sink, sink, branches)


# ---------------------------------------------------------------------------
# Uses of expansion
# ---------------------------------------------------------------------------

def rebuild(form: ExpandedForm, s: StateSpace) -> Command:
    """Reassemble an expanded form into a command: the assertion that the
    command has not aborted, sequenced with the choice between immediate
    termination and each step-prefixed continuation."""
    body: Command = Test(frozenset(form.term_states))
    for (lab, pre, post), cont in form.branches:
        step = Pgm(frozenset({(pre, post)})) if lab == PI else Env(
            frozenset({(pre, post)})
        )
        body = Choice(body, Seq(step, cont))
    return Seq(assert_cmd(negate_test(frozenset(form.abort_states), s), s), body)


def equiv_by_expansion(c: Command, d: Command, depth: int, s: StateSpace) -> bool:
    """Bounded bisimulation over expanded forms.

    Compares abort and termination state sets at every reachable node, and
    label-matched branch keys (outside abort states, where behaviour is
    unconstrained anyway), recursing into continuations to the given depth.
    """
    return _eqx(c, d, depth, s, set())


def _eqx(c: Command, d: Command, depth: int, s: StateSpace, seen) -> bool:
    if c == d:
        return True
    key = (c, d, depth)
    if key in seen:
        return True  # coinductive: assumed equal on this path
    seen.add(key)
    fc, fd = expand(c, s), expand(d, s)
    if fc.abort_states != fd.abort_states or fc.term_states != fd.term_states:
        return False
    if depth == 0:
        return True
    cm, dm = fc.branch_map(), fd.branch_map()
    live_c = {k for k in cm if k[1] not in fc.abort_states}
    live_d = {k for k in dm if k[1] not in fd.abort_states}
    if live_c != live_d:
        return False
    for k in live_c:
        if not _eqx(cm[k], dm[k], depth - 1, s, seen):
            return False
    return True


@dataclass(frozen=True)
class AgreementReport:
    oracle_equal: bool
    expansion_equal: bool
    witness: Optional[str] = None  # rendered trace, when the oracle differs

    @property
    def agree(self) -> bool:
        return self.oracle_equal == self.expansion_equal


def cross_check(c: Command, d: Command, cfg: ModelCfg) -> AgreementReport:
    """Run both engines on the same pair and compare their verdicts."""
    dc, dd = denote(c, cfg), denote(d, cfg)
    oracle = dc == dd
    symbolic = equiv_by_expansion(c, d, cfg.bound, cfg.space)
    witness = None
    if not oracle:
        diff = (dc - dd) or (dd - dc)
        witness = render_trace(min(diff, key=_trace_key))
    return AgreementReport(oracle, symbolic, witness)


def roundtrip_ok(c: Command, cfg: ModelCfg) -> bool:
    """Soundness of expansion: rebuilding the head normal form preserves
    the denotation."""
    return denote(c, cfg) == denote(rebuild(expand(c, cfg.space), cfg.space), cfg)


def _trace_key(t: traces.Trace):
    return (len(t.steps), t.init, t.steps, t.status)
