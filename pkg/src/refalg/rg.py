"""Rely/guarantee layer: derived commands and replayable refinement chains.

All derived commands are definitional macros that expand eagerly to core
syntax, so the trace oracle, the expansion engine and the law suite handle
them with no special cases.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

from .terms import (
    Choice,
    Command,
    Env,
    FinIter,
    OmIter,
    Par,
    Pgm,
    Relation,
    Seq,
    StateSpace,
    Test,
    TestPred,
    Top,
    WConj,
    complement,
)
from .traces import ModelCfg, denote, refines, render_trace


# ---------------------------------------------------------------------------
# Definitional macros
# ---------------------------------------------------------------------------

def bigstep_pi(s: StateSpace) -> Command:
    """Any single program transition."""
    return Pgm(s.univ)


def bigstep_eps(s: StateSpace) -> Command:
    """Any single environment transition."""
    return Env(s.univ)


def bigstep_alpha(s: StateSpace) -> Command:
    """Any single transition, program or environment."""
    return Choice(bigstep_pi(s), bigstep_eps(s))


def skip(s: StateSpace) -> Command:
    """Any finite or infinite sequence of environment transitions; the
    neutral element of parallel composition."""
    return OmIter(bigstep_eps(s))


def chaos(s: StateSpace) -> Command:
    """Any finite or infinite sequence of transitions; the neutral element
    of weak conjunction."""
    return OmIter(bigstep_alpha(s))


def guar(g: Relation, s: StateSpace) -> Command:
    """Restrict program transitions to g; environment unconstrained."""
    return OmIter(Choice(Pgm(g), bigstep_eps(s)))


def rely(r: Relation, s: StateSpace) -> Command:
    """Unconstrained, but aborts after an environment transition that
    violates r."""
    body = Choice(bigstep_alpha(s), Seq(Env(complement(r, s)), Top()))
    return OmIter(body)


def term_cmd(s: StateSpace) -> Command:
    """Performs finitely many program transitions; environment
    unconstrained."""
    return Seq(FinIter(bigstep_alpha(s)), OmIter(bigstep_eps(s)))


def post(t: TestPred, s: StateSpace) -> Command:
    """Terminate in a state satisfying t (test-based specification)."""
    return Seq(term_cmd(s), Test(t))


# ---------------------------------------------------------------------------
# Refinement chains
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChainStep:
    start: Command
    end: Command
    law: str
    bindings: Tuple[Tuple[str, str], ...] = ()


@dataclass(frozen=True)
class RefinementChain:
    steps: Tuple[ChainStep, ...]

    def well_formed(self) -> bool:
        return all(
            a.end == b.start for a, b in zip(self.steps, self.steps[1:])
        )


@dataclass(frozen=True)
class ChainFailure:
    index: int
    witness: str


class PreconditionViolated(ValueError):
    pass


def intro_parallel(
    r: Relation,
    r1: Relation,
    r2: Relation,
    t1: TestPred,
    t2: TestPred,
    s: StateSpace,
) -> RefinementChain:
    """The rely/guarantee parallel-introduction derivation as an explicit
    chain of justified refinement steps.

    Requires r to imply both component relies (r <= r1 and r <= r2).
    """
    if not (r <= r1 and r <= r2):
        raise PreconditionViolated("r must be contained in both r1 and r2")

    def fr(x):
        items = sorted(x)
        if items and isinstance(items[0], tuple):
            return "{" + ",".join("(%d,%d)" % p for p in items) + "}"
        return "{" + ",".join(str(q) for q in items) + "}"

    c0 = WConj(rely(r, s), post(t1 & t2, s))
    c1 = WConj(rely(r, s), Par(post(t1, s), post(t2, s)))
    c2 = WConj(
        rely(r1, s), WConj(rely(r2, s), Par(post(t1, s), post(t2, s)))
    )
    c3 = WConj(
        rely(r1, s),
        Par(WConj(guar(r2, s), post(t1, s)), WConj(rely(r2, s), post(t2, s))),
    )
    c4 = Par(
        WConj(rely(r1, s), WConj(guar(r2, s), post(t1, s))),
        WConj(guar(r1, s), WConj(rely(r2, s), post(t2, s))),
    )
    steps = (
        ChainStep(
            c0, c1, "parallel_spec", (("t1", fr(t1)), ("t2", fr(t2)))
        ),
        ChainStep(
            c1,
            c2,
            "conj_idem+rely_weaken",
            (("r", fr(r)), ("r1", fr(r1)), ("r2", fr(r2))),
        ),
        ChainStep(
            c2,
            c3,
            "rely_guar_intro",
            (("r", fr(r2)), ("c1", "post t2"), ("c2", "post t1")),
        ),
        ChainStep(
            c3,
            c4,
            "rely_guar_intro",
            (("r", fr(r1)), ("c1", "guar r2 && post t1"), ("c2", "rely r2 && post t2")),
        ),
    )
    return RefinementChain(steps)


def verify_chain(ch: RefinementChain, cfg: ModelCfg):
    """Replay a chain against the trace oracle.

    Returns (True, None) when every step is a valid refinement, otherwise
    (False, ChainFailure) with the first failing step index and a witness
    trace present in the step's right side but not its left.
    """
    if not ch.well_formed():
        raise ValueError("chain endpoints do not match up")
    for i, step in enumerate(ch.steps):
        if not refines(step.start, step.end, cfg):
            diff = denote(step.end, cfg) - denote(step.start, cfg)
            witness = render_trace(min(diff, key=lambda t: (len(t.steps), t.init, t.steps, t.status)))
            return False, ChainFailure(i, witness)
    return True, None


def render_chain(ch: RefinementChain, s: Optional[StateSpace] = None) -> str:
    """Numbered steps, each `>= { law [bindings] }` between rendered
    commands."""
    from .terms import render

    if not ch.steps:
        return "(empty chain)"
    lines = ["    " + render(ch.steps[0].start, s)]
    for i, step in enumerate(ch.steps):
        binds = " ".join("%s=%s" % kv for kv in step.bindings)
        just = step.law + ((" [" + binds + "]") if binds else "")
        lines.append("%2d. >= { %s }" % (i + 1, just))
        lines.append("    " + render(step.end, s))
    return "\n".join(lines)
