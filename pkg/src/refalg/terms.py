"""Command term language for the concurrent refinement algebra.

Commands are finite immutable trees over the lattice constants (bot, top),
the no-op test tau, instantaneous tests, atomic program/environment steps,
the binary operators (choice, meet, sequential, parallel, weak conjunction)
and the three iteration operators plus fixed powers.

States are dense integers ``0 .. size-1`` of an ambient :class:`StateSpace`,
so relations and tests are plain frozensets of ints / int pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

Relation = frozenset  # of (state, state) pairs
TestPred = frozenset  # of states


@dataclass(frozen=True)
class StateSpace:
    """The finite program-state set; states are 0 .. size-1."""

    size: int

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("state space must have at least one state")

    @property
    def states(self) -> frozenset:
        return frozenset(range(self.size))

    @property
    def univ(self) -> Relation:
        """The universal relation over the space."""
        return frozenset(
            (a, b) for a in range(self.size) for b in range(self.size)
        )


def rel(*pairs) -> Relation:
    """Convenience constructor for relations."""
    return frozenset(pairs)


def test(*states) -> TestPred:
    """Convenience constructor for test predicates."""
    return frozenset(states)


class Command:
    """Base class for command terms.  All subclasses are frozen dataclasses."""

    __slots__ = ()


@dataclass(frozen=True)
class Bot(Command):
    """The everywhere-infeasible command (lattice bottom, 'magic')."""


@dataclass(frozen=True)
class Top(Command):
    """The aborting command (lattice top); allows any behaviour at all."""


@dataclass(frozen=True)
class Tau(Command):
    """The no-operation command: terminates immediately from every state."""


@dataclass(frozen=True)
class Test(Command):
    """Instantaneous test: terminates from states in the predicate,
    infeasible elsewhere."""

    states: TestPred

    __test__ = False  # not a pytest case despite the name


@dataclass(frozen=True)
class Pgm(Command):
    """Atomic program step: one pi-labelled transition per relation pair."""

    pairs: Relation


@dataclass(frozen=True)
class Env(Command):
    """Atomic environment step: one eps-labelled transition per pair."""

    pairs: Relation


@dataclass(frozen=True)
class Choice(Command):
    """Nondeterministic choice (binary lattice join)."""

    left: Command
    right: Command


@dataclass(frozen=True)
class Meet(Command):
    """Strong conjunction (binary lattice meet)."""

    left: Command
    right: Command


@dataclass(frozen=True)
class Seq(Command):
    """Sequential composition."""

    left: Command
    right: Command


@dataclass(frozen=True)
class Par(Command):
    """Synchronous parallel composition."""

    left: Command
    right: Command


@dataclass(frozen=True)
class WConj(Command):
    """Weak conjunction: behaves as both operands unless one aborts."""

    left: Command
    right: Command


@dataclass(frozen=True)
class FixedIter(Command):
    """Fixed iteration to an explicit natural-number power."""

    body: Command
    count: int

    def __post_init__(self):
        if self.count < 0:
            raise ValueError("iteration power must be a natural number")


@dataclass(frozen=True)
class FinIter(Command):
    """Finite iteration (Kleene star; least fixed point)."""

    body: Command


@dataclass(frozen=True)
class OmIter(Command):
    """Finite-or-infinite iteration (omega; greatest fixed point of the
    star unfolding)."""

    body: Command


@dataclass(frozen=True)
class InfIter(Command):
    """Strictly infinite iteration (greatest fixed point of prefixing)."""

    body: Command


BINARY_TYPES = (Choice, Meet, Seq, Par, WConj)
ITER_TYPES = (FixedIter, FinIter, OmIter, InfIter)


@dataclass(frozen=True)
class OpPair:
    """One of the three synchronisation/sequencing operator pairings.

    ``sync`` is the synchronous operator (commutative), ``seq_like`` the
    sequencing-style operator it interchanges with; ``eta`` / ``iota`` name
    their neutral elements (iota is the big-step neutral of ``sync`` on
    atomic commands).
    """

    name: str
    sync: type  # Par or WConj
    seq_like: type  # Seq or Par


PAIR_PAR_SEQ = OpPair("par/seq", Par, Seq)
PAIR_CONJ_SEQ = OpPair("conj/seq", WConj, Seq)
PAIR_CONJ_PAR = OpPair("conj/par", WConj, Par)

OP_PAIRS = (PAIR_PAR_SEQ, PAIR_CONJ_SEQ, PAIR_CONJ_PAR)


def subterms(c: Command) -> Iterable[Command]:
    """Yield c and every subterm, preorder."""
    yield c
    if isinstance(c, BINARY_TYPES):
        yield from subterms(c.left)
        yield from subterms(c.right)
    elif isinstance(c, ITER_TYPES):
        yield from subterms(c.body)


def validate(c: Command, s: StateSpace) -> Optional[str]:
    """Check every relation/test in c against the state space.

    Returns None when c is valid, otherwise a path string (sequence of
    'left'/'right'/'body' moves from the root) locating the first offending
    subterm.
    """
    return _validate(c, s, ())


def _validate(c: Command, s: StateSpace, path: Tuple[str, ...]):
    if isinstance(c, Test):
        if any(not (0 <= q < s.size) for q in c.states):
            return _path_str(path)
    elif isinstance(c, (Pgm, Env)):
        for a, b in c.pairs:
            if not (0 <= a < s.size and 0 <= b < s.size):
                return _path_str(path)
    elif isinstance(c, BINARY_TYPES):
        return _validate(c.left, s, path + ("left",)) or _validate(
            c.right, s, path + ("right",)
        )
    elif isinstance(c, ITER_TYPES):
        return _validate(c.body, s, path + ("body",))
    return None


def _path_str(path):
    return "violation at " + ("/".join(path) if path else "root")


def negate_test(t: TestPred, s: StateSpace) -> TestPred:
    """Complement of a test within the state space."""
    return s.states - t


def complement(r: Relation, s: StateSpace) -> Relation:
    """Complement of a relation within univ of the state space."""
    return s.univ - r


def assert_cmd(t: TestPred, s: StateSpace) -> Command:
    """The assertion on t: terminates like tau, but aborts where t fails."""
    return Choice(Tau(), Seq(Test(negate_test(t, s)), Top()))


def is_atomic_step(c: Command) -> bool:
    """True for single-step commands: Pgm, Env, choices thereof, or Bot."""
    if isinstance(c, (Pgm, Env, Bot)):
        return True
    if isinstance(c, Choice):
        return is_atomic_step(c.left) and is_atomic_step(c.right)
    return False


def pseudo_atomic(a: Command, b: Command) -> Command:
    """Build the pseudo-atomic command: do step a, or do step b then abort."""
    if not is_atomic_step(a) or not is_atomic_step(b):
        raise ValueError("pseudo_atomic requires atomic-step arguments")
    return Choice(a, Seq(b, Top()))


# ---------------------------------------------------------------------------
# Rendering.  The textual syntax is shared with the DSL parser in cli.py.
# Precedence, tightest binding first:  ;  &&  ||  &  |   (all left assoc).
# ---------------------------------------------------------------------------

_PREC = {Seq: 5, WConj: 4, Par: 3, Meet: 2, Choice: 1}
_OPTOK = {Seq: ";", WConj: "&&", Par: "||", Meet: "&", Choice: "|"}


def _fmt_test(states) -> str:
    return "{" + ",".join(str(q) for q in sorted(states)) + "}"


def _fmt_rel(pairs) -> str:
    return "{" + ",".join("(%d,%d)" % p for p in sorted(pairs)) + "}"


def render(c: Command, s: Optional[StateSpace] = None) -> str:
    """Render a command in the DSL syntax.

    When a state space is supplied, known derived shapes (skip, chaos, term,
    guar, rely, post, assert) are re-sugared for readability; the output
    still parses back to the identical term.
    """
    sugar = _sugar_table(s) if s is not None else {}
    return _render(c, 0, sugar)


def _render(c: Command, outer: int, sugar) -> str:
    if sugar:
        name = sugar.get(c)
        if name is not None:
            return name
    if isinstance(c, Bot):
        return "bot"
    if isinstance(c, Top):
        return "top"
    if isinstance(c, Tau):
        return "tau"
    if isinstance(c, Test):
        return "test" + _fmt_test(c.states)
    if isinstance(c, Pgm):
        return "pgm" + _fmt_rel(c.pairs)
    if isinstance(c, Env):
        return "env" + _fmt_rel(c.pairs)
    if isinstance(c, FinIter):
        return "fin(%s)" % _render(c.body, 0, sugar)
    if isinstance(c, OmIter):
        return "om(%s)" % _render(c.body, 0, sugar)
    if isinstance(c, InfIter):
        return "inf(%s)" % _render(c.body, 0, sugar)
    if isinstance(c, FixedIter):
        return "pow(%s,%d)" % (_render(c.body, 0, sugar), c.count)
    prec = _PREC[type(c)]
    text = "%s %s %s" % (
        _render(c.left, prec, sugar),
        _OPTOK[type(c)],
        # left-associative: right child needs strictly tighter binding
        _render(c.right, prec + 1, sugar),
    )
    return "(" + text + ")" if prec < outer else text


def _sugar_table(s: StateSpace):
    # Local import: rg builds its macros out of this module.
    from . import rg

    table = {
        rg.skip(s): "skip",
        rg.chaos(s): "chaos",
        rg.term_cmd(s): "term",
    }
    # guar/rely/post/assert families over every relation would be huge; only
    # re-sugar the argument actually embedded in the term when rendering, so
    # build lazily per command instead.  Keeping just the constants here is a
    # deliberate compromise; structured shapes are matched in _sugar_shape.
    return _ShapeSugar(table, s)


class _ShapeSugar(dict):
    """Sugar lookup that also pattern-matches guar/rely/post/assert shapes."""

    def __init__(self, base, space):
        super().__init__(base)
        self._space = space

    def get(self, c, default=None):
        hit = super().get(c)
        if hit is not None:
            return hit
        from . import rg

        s = self._space
        if isinstance(c, OmIter):
            body = c.body
            if isinstance(body, Choice) and isinstance(body.left, Pgm) and body.right == Env(s.univ):
                return "guar" + _fmt_rel(body.left.pairs)
            if (
                isinstance(body, Choice)
                and body.left == Choice(Pgm(s.univ), Env(s.univ))
                and isinstance(body.right, Seq)
                and isinstance(body.right.left, Env)
                and body.right.right == Top()
            ):
                return "rely" + _fmt_rel(s.univ - body.right.left.pairs)
        if isinstance(c, Seq) and c.left == rg.term_cmd(s) and isinstance(c.right, Test):
            return "post" + _fmt_test(c.right.states)
        if (
            isinstance(c, Choice)
            and c.left == Tau()
            and isinstance(c.right, Seq)
            and isinstance(c.right.left, Test)
            and c.right.right == Top()
        ):
            return "assert" + _fmt_test(s.states - c.right.left.states)
        return default
