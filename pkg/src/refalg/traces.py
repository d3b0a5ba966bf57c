"""Ground-truth denotational semantics: bounded Aczel-trace sets.

A trace records an initial state, a sequence of labelled steps
(``pi`` = program transition, ``eps`` = environment transition, each with a
post-state) and a final status: terminated (``ok``), ``abort`` or ``inc``
(incomplete).  A command denotes a finite set of traces of length at most
``ModelCfg.bound`` that is prefix closed, abort closed and contains the
empty incomplete trace for every initial state (the closure floor).

All operations are pure; trace sets are canonical frozensets so equality is
structural.  When ``ModelCfg.debug`` is set, the three closure invariants
are asserted after every trace-set operation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Tuple

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
)

PI = "pi"
EPS = "eps"

TERM = "ok"
ABORT = "abort"
INC = "inc"

STATUSES = (TERM, ABORT, INC)


class Trace(tuple):
    """An Aczel trace: (init, steps, status) as a lightweight tuple.

    Traces are created by the million inside closure passes, so this is a
    bare tuple subclass rather than a dataclass.
    """

    __slots__ = ()

    def __new__(cls, init: int, steps: Tuple[Tuple[str, int], ...], status: str):
        return tuple.__new__(cls, (init, steps, status))

    @property
    def init(self) -> int:
        return tuple.__getitem__(self, 0)

    @property
    def steps(self) -> Tuple[Tuple[str, int], ...]:
        return tuple.__getitem__(self, 1)

    @property
    def status(self) -> str:
        return tuple.__getitem__(self, 2)

    def final_state(self) -> int:
        steps = tuple.__getitem__(self, 1)
        return steps[-1][1] if steps else tuple.__getitem__(self, 0)

    def states(self) -> Tuple[int, ...]:
        return (self.init,) + tuple(post for _, post in self.steps)

    def __repr__(self) -> str:
        return "Trace(%r, %r, %r)" % (self.init, self.steps, self.status)


TraceSet = FrozenSet[Trace]


def render_trace(t: Trace) -> str:
    """`<init> [label(post) ...] <status>`, e.g. `0 [pi(1) eps(1)] ok`."""
    body = " ".join("%s(%d)" % (lab, post) for lab, post in t.steps)
    return "%d [%s] %s" % (t.init, body, t.status)


class ClosureViolation(AssertionError):
    pass


class FixpointDiverged(RuntimeError):
    """Raised when Kleene iteration exceeds its cap; indicates a
    non-monotone caller."""


@dataclass(frozen=True)
class ModelCfg:
    space: StateSpace
    bound: int
    debug: bool = False

    def __post_init__(self):
        if self.bound < 1:
            raise ValueError("step bound must be at least 1")

    @property
    def size(self) -> int:
        return self.space.size

    def floor(self) -> TraceSet:
        return frozenset(Trace(q, (), INC) for q in range(self.size))

    def universe(self) -> TraceSet:
        """All traces respecting the bound: the denotation of top."""
        return _universe(self.size, self.bound)


def _all_step_seqs(size: int, length: int):
    step_choices = [(lab, post) for lab in (PI, EPS) for post in range(size)]
    return itertools.product(step_choices, repeat=length)


def _universe(size: int, bound: int) -> TraceSet:
    out = []
    for init in range(size):
        for k in range(bound + 1):
            for steps in _all_step_seqs(size, k):
                for st in STATUSES:
                    out.append(Trace(init, tuple(steps), st))
    return frozenset(out)


_UNIVERSE_CACHE: Dict[Tuple[int, int], TraceSet] = {}


def universe(cfg: ModelCfg) -> TraceSet:
    key = (cfg.size, cfg.bound)
    ts = _UNIVERSE_CACHE.get(key)
    if ts is None:
        ts = _universe(cfg.size, cfg.bound)
        _UNIVERSE_CACHE[key] = ts
    return ts


# ---------------------------------------------------------------------------
# Closure
# ---------------------------------------------------------------------------

def close(raw, cfg: ModelCfg) -> TraceSet:
    """Least superset of raw satisfying prefix closure, abort closure and
    the nonemptiness floor.

    Abort closure reads 'all possible extensions' as: any continuation of
    the aborting trace's steps, with any final status, up to the bound.
    """
    out = set(raw)
    add = out.add
    mk = tuple.__new__
    bound = cfg.bound
    # Abort closure first: a worklist of aborted traces, each contributing
    # its same-steps status variants and its one-step aborted extensions.
    # Iterating the one-step rule reaches every extension up to the bound
    # without re-enumerating already-present ones.
    pending = [t for t in raw if t[2] == ABORT]
    steps_menu = [((lab, post),) for lab in (PI, EPS) for post in range(cfg.size)]
    while pending:
        init, steps, _ = t = pending.pop()
        add(mk(Trace, (init, steps, TERM)))
        add(mk(Trace, (init, steps, INC)))
        if len(steps) < bound:
            for step in steps_menu:
                ext = mk(Trace, (init, steps + step, ABORT))
                if ext not in out:
                    add(ext)
                    pending.append(ext)
    # Prefix closure: walk each trace's step-prefixes from longest to
    # shortest and stop at the first one already present; a present prefix
    # had its own prefixes added when it first entered the set.
    for init, steps, _ in list(out):
        for k in range(len(steps), -1, -1):
            p = mk(Trace, (init, steps[:k], INC))
            if p in out:
                break
            add(p)
    # Nonemptiness floor.
    out.update(cfg.floor())
    return _finish(out, cfg)


def _finish(traces, cfg: ModelCfg) -> TraceSet:
    ts = frozenset(traces)
    if cfg.debug:
        assert_closed(ts, cfg)
    return ts


def assert_closed(ts: TraceSet, cfg: ModelCfg) -> None:
    """Raise ClosureViolation unless ts satisfies all three invariants."""
    for q in range(cfg.size):
        if Trace(q, (), INC) not in ts:
            raise ClosureViolation("missing floor trace for state %d" % q)
    step_choices = [(lab, post) for lab in (PI, EPS) for post in range(cfg.size)]
    for t in ts:
        if len(t.steps) > cfg.bound:
            raise ClosureViolation("trace exceeds bound: " + render_trace(t))
        for k in range(len(t.steps) + 1):
            if Trace(t.init, t.steps[:k], INC) not in ts:
                raise ClosureViolation("prefix missing for " + render_trace(t))
        if t.status == ABORT:
            # One-step extensions plus same-length status variants suffice:
            # the added aborted extensions are themselves members and carry
            # the obligation forward inductively.
            for st in STATUSES:
                if Trace(t.init, t.steps, st) not in ts:
                    raise ClosureViolation(
                        "abort variant missing for " + render_trace(t)
                    )
            if len(t.steps) < cfg.bound:
                for step in step_choices:
                    if Trace(t.init, t.steps + (step,), ABORT) not in ts:
                        raise ClosureViolation(
                            "abort extension missing for " + render_trace(t)
                        )


# ---------------------------------------------------------------------------
# Primitive denotations
# ---------------------------------------------------------------------------

def _den_bot(cfg):
    return _finish(cfg.floor(), cfg)


def _den_tau(cfg):
    out = set(cfg.floor())
    out.update(Trace(q, (), TERM) for q in range(cfg.size))
    return _finish(out, cfg)


def _den_test(states, cfg):
    out = set(cfg.floor())
    out.update(Trace(q, (), TERM) for q in states)
    return _finish(out, cfg)


def _den_step(label, pairs, cfg):
    raw = {Trace(a, ((label, b),), TERM) for a, b in pairs}
    return close(raw, cfg)


# ---------------------------------------------------------------------------
# Operators on trace sets
# ---------------------------------------------------------------------------

_SEQ_CACHE: Dict[Tuple[TraceSet, TraceSet, int], TraceSet] = {}
_SEQ_LEFT_CACHE: Dict[TraceSet, tuple] = {}

# Cache eviction is budgeted by stored trace count rather than entry count:
# at larger configurations a single denotation holds thousands of traces, so
# counting entries badly underestimates the footprint.  Overflow drops the
# oldest half (dicts iterate in insertion order), keeping recent entries hot.
_SEQ_BUDGET = 2_000_000
_LEFT_BUDGET = 1_000_000
_SYNC_BUDGET = 2_000_000
_DEN_BUDGET = 4_000_000
_seq_stored = [0]
_left_stored = [0]
_sync_stored = [0]
_den_stored = [0]


def _evict_half(cache: dict, stored: list, budget: int, measure) -> None:
    if stored[0] <= budget:
        return
    goal = budget // 2
    for key in list(cache):
        if stored[0] <= goal:
            break
        stored[0] -= measure(key, cache.pop(key))
    if not cache:
        stored[0] = 0


def seq_sets(left: TraceSet, right: TraceSet, cfg: ModelCfg) -> TraceSet:
    """Sequential composition of denotations.

    Non-terminated traces of the left pass through; terminated left traces
    glue with right traces starting at the matching state.  A glued trace
    that would exceed the bound equals the glue with a shorter incomplete
    prefix of the right trace (which prefix closure guarantees is present),
    so overlong glues are simply dropped.
    """
    univ = universe(cfg)
    if left is univ or left == univ:
        # abort everywhere annihilates whatever follows
        return univ
    skey = (left, right, cfg.bound)
    hit = _SEQ_CACHE.get(skey)
    if hit is not None:
        return hit
    # The left operand is stable across fixed-point iterations, so its
    # split into passthrough traces and terminated-glue buckets is cached.
    prep = _SEQ_LEFT_CACHE.get(left)
    if prep is None:
        nonterm = frozenset(t for t in left if t[2] != TERM)
        # terminated traces bucketed by (final state, step length)
        buckets: Dict[Tuple[int, int], list] = {}
        for init, steps, status in left:
            if status == TERM:
                fin = steps[-1][1] if steps else init
                buckets.setdefault((fin, len(steps)), []).append((init, steps))
        prep = (nonterm, buckets)
        _evict_half(_SEQ_LEFT_CACHE, _left_stored, _LEFT_BUDGET,
                    lambda k, v: len(k))
        _SEQ_LEFT_CACHE[left] = prep
        _left_stored[0] += len(left)
    nonterm, buckets = prep
    if not buckets:
        # nothing terminates on the left, so nothing is glued
        return left
    out = set(nonterm)
    add = out.add
    mk = tuple.__new__
    get = buckets.get
    bound = cfg.bound
    lengths = sorted({l for _, l in buckets})
    for uinit, usteps, ustatus in right:
        room = bound - len(usteps)
        for m in lengths:
            if m > room:
                break
            for init, steps in get((uinit, m), ()):
                add(mk(Trace, (init, steps + usteps, ustatus)))
    # A glue can strand an aborted trace without its extensions when the
    # right operand cannot terminate somewhere (e.g. sequencing with bot):
    # the terminated extensions of a passed-through aborted trace only
    # reappear when the right operand has an immediately-terminating trace
    # to glue them with.  If it has one at every state, closure is
    # preserved and re-closing is skipped.
    if all(Trace(q, (), TERM) in right for q in range(cfg.size)):
        result = _finish(out, cfg)
    else:
        result = close(out, cfg)
    _evict_half(_SEQ_CACHE, _seq_stored, _SEQ_BUDGET, lambda k, v: len(v))
    _SEQ_CACHE[skey] = result
    _seq_stored[0] += len(result)
    return result


_PAR_LABEL = {(PI, EPS): PI, (EPS, PI): PI, (EPS, EPS): EPS}
_CONJ_LABEL = {(PI, PI): PI, (EPS, EPS): EPS}


def _combine_status(s1: str, s2: str):
    if s1 == ABORT or s2 == ABORT:
        return ABORT
    if s1 == s2:
        return s1  # ok/ok or inc/inc
    return None  # ok with inc is excluded


_STATUS_COMBO = {
    (s1, s2): _combine_status(s1, s2) for s1 in STATUSES for s2 in STATUSES
}


# Label vectors are short (at most the bound), so pointwise combination of
# two of them under a table has few distinct inputs; memoize globally.
_LABEL_COMBO_CACHE: Dict[Tuple[int, Tuple[str, ...], Tuple[str, ...]], object] = {}
_SYNC_CACHE: Dict[Tuple[int, TraceSet, TraceSet], TraceSet] = {}


def _combine_labels(lv1, lv2, table):
    key = (id(table), lv1, lv2)
    hit = _LABEL_COMBO_CACHE.get(key, False)
    if hit is not False:
        return hit
    out = []
    for l1, l2 in zip(lv1, lv2):
        lab = table.get((l1, l2))
        if lab is None:
            out = None
            break
        out.append(lab)
    result = tuple(out) if out is not None else None
    _LABEL_COMBO_CACHE[key] = result
    return result


def sync_sets(left: TraceSet, right: TraceSet, table, cfg: ModelCfg) -> TraceSet:
    """Pointwise synchronisation: identical initial state and state
    sequence, labels combined per table, aborted status dominating."""
    univ = universe(cfg)
    if left == univ or right == univ:
        # abort everywhere synchronises with anything into abort everywhere
        return univ
    skey = (id(table), left, right, cfg.bound)
    hit = _SYNC_CACHE.get(skey)
    if hit is not None:
        return hit
    by_states: Dict[Tuple[int, ...], list] = {}
    for init, steps, status in right:
        lv = tuple(lab for lab, _ in steps)
        key = (init,) + tuple(post for _, post in steps)
        by_states.setdefault(key, []).append((lv, status))
    out = set()
    add = out.add
    mk = tuple.__new__
    get_group = by_states.get
    status_combo = _STATUS_COMBO
    combo_cache = _LABEL_COMBO_CACHE
    tid = id(table)
    for init, steps, s1 in left:
        posts = tuple(post for _, post in steps)
        group = get_group((init,) + posts)
        if not group:
            continue
        lv1 = tuple(lab for lab, _ in steps)
        for lv2, s2 in group:
            status = status_combo[s1, s2]
            if status is None:
                continue
            ckey = (tid, lv1, lv2)
            labels = combo_cache.get(ckey, False)
            if labels is False:
                labels = _combine_labels(lv1, lv2, table)
            if labels is None:
                continue
            add(mk(Trace, (init, tuple(zip(labels, posts)), status)))
    # Synchronising with an aborted operand can leave abort/prefix holes;
    # re-close.
    result = close(out, cfg)
    _evict_half(_SYNC_CACHE, _sync_stored, _SYNC_BUDGET, lambda k, v: len(v))
    _SYNC_CACHE[skey] = result
    _sync_stored[0] += len(result)
    return result


def meet_sets(left: TraceSet, right: TraceSet, cfg: ModelCfg) -> TraceSet:
    return _finish(left & right, cfg)


def join_sets(left: TraceSet, right: TraceSet, cfg: ModelCfg) -> TraceSet:
    return _finish(left | right, cfg)


# ---------------------------------------------------------------------------
# Fixed points
# ---------------------------------------------------------------------------

def lfp(f: Callable[[TraceSet], TraceSet], cfg: ModelCfg) -> TraceSet:
    """Least fixed point of a monotone trace-set map, by Kleene iteration
    from the closure floor."""
    return _iterate(f, _finish(cfg.floor(), cfg), cfg)


def gfp(f: Callable[[TraceSet], TraceSet], cfg: ModelCfg) -> TraceSet:
    """Greatest fixed point, by Kleene iteration from the full universe."""
    return _iterate(f, _finish(universe(cfg), cfg), cfg)


def _iterate(f, start: TraceSet, cfg: ModelCfg) -> TraceSet:
    cap = len(universe(cfg)) + 1
    cur = start
    for _ in range(cap):
        nxt = f(cur)
        if nxt == cur:
            return _finish(cur, cfg)
        cur = nxt
    raise FixpointDiverged("fixed-point iteration exceeded its cap")


# ---------------------------------------------------------------------------
# Denotation
# ---------------------------------------------------------------------------

_DEN_CACHE: Dict[Tuple[Command, int, int], TraceSet] = {}


def clear_cache() -> None:
    _DEN_CACHE.clear()
    _SEQ_CACHE.clear()
    _SEQ_LEFT_CACHE.clear()
    _SYNC_CACHE.clear()
    _den_stored[0] = _seq_stored[0] = _left_stored[0] = _sync_stored[0] = 0


def denote(c: Command, cfg: ModelCfg) -> TraceSet:
    key = (c, cfg.size, cfg.bound)
    hit = _DEN_CACHE.get(key)
    if hit is not None:
        if cfg.debug:
            assert_closed(hit, cfg)
        return hit
    ts = _denote(c, cfg)
    _evict_half(_DEN_CACHE, _den_stored, _DEN_BUDGET, lambda k, v: len(v))
    _DEN_CACHE[key] = ts
    _den_stored[0] += len(ts)
    return ts


def _denote(c: Command, cfg: ModelCfg) -> TraceSet:
    if isinstance(c, Bot):
        return _den_bot(cfg)
    if isinstance(c, Top):
        return _finish(universe(cfg), cfg)
    if isinstance(c, Tau):
        return _den_tau(cfg)
    if isinstance(c, Test):
        return _den_test(c.states, cfg)
    if isinstance(c, Pgm):
        return _den_step(PI, c.pairs, cfg)
    if isinstance(c, Env):
        return _den_step(EPS, c.pairs, cfg)
    if isinstance(c, Choice):
        return join_sets(denote(c.left, cfg), denote(c.right, cfg), cfg)
    if isinstance(c, Meet):
        return meet_sets(denote(c.left, cfg), denote(c.right, cfg), cfg)
    if isinstance(c, Seq):
        return seq_sets(denote(c.left, cfg), denote(c.right, cfg), cfg)
    if isinstance(c, Par):
        return sync_sets(denote(c.left, cfg), denote(c.right, cfg), _PAR_LABEL, cfg)
    if isinstance(c, WConj):
        return sync_sets(denote(c.left, cfg), denote(c.right, cfg), _CONJ_LABEL, cfg)
    if isinstance(c, FixedIter):
        acc = _den_tau(cfg)
        body = denote(c.body, cfg)
        for _ in range(c.count):
            acc = seq_sets(body, acc, cfg)
        return acc
    if isinstance(c, FinIter):
        body = denote(c.body, cfg)
        tau = _den_tau(cfg)
        return lfp(lambda y: join_sets(tau, seq_sets(body, y, cfg), cfg), cfg)
    if isinstance(c, OmIter):
        body = denote(c.body, cfg)
        tau = _den_tau(cfg)
        return gfp(lambda y: join_sets(tau, seq_sets(body, y, cfg), cfg), cfg)
    if isinstance(c, InfIter):
        body = denote(c.body, cfg)
        return gfp(lambda y: seq_sets(body, y, cfg), cfg)
    raise TypeError("unknown command: %r" % (c,))


def refines(c: Command, d: Command, cfg: ModelCfg) -> bool:
    """c is refined by d: every behaviour of d is a behaviour of c."""
    return denote(d, cfg) <= denote(c, cfg)


def equiv(c: Command, d: Command, cfg: ModelCfg) -> bool:
    return denote(c, cfg) == denote(d, cfg)


def short_traces(ts: TraceSet, cfg: ModelCfg) -> TraceSet:
    """Boundary-insensitive view: only traces strictly shorter than the
    bound.  Diagnostic aid for triaging suspected truncation artifacts."""
    return frozenset(t for t in ts if len(t.steps) < cfg.bound)


def equiv_below_bound(c: Command, d: Command, cfg: ModelCfg) -> bool:
    return short_traces(denote(c, cfg), cfg) == short_traces(denote(d, cfg), cfg)
