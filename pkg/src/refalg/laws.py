"""Machine-checkable catalog of the algebra's axioms and derived laws.

Every law is checked by randomized instantiation against the trace oracle:
equalities as set equalities of denotations, refinements as containments,
conditional laws as implications whose hypotheses are themselves decided by
the oracle.  Abstract synchronisation laws are instantiated once per
applicable operator pairing, and the whole atomic-algebra suite is replayed
verbatim with pseudo-atomic generators.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import rg
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
    render,
    subterms,
)
from .traces import (
    EPS,
    PI,
    TERM,
    ABORT,
    ModelCfg,
    clear_cache,
    denote,
    render_trace,
)

RETRY_CAP = 40


@dataclass(frozen=True)
class GenCfg:
    seed: int
    max_depth: int = 3
    state_size: int = 2
    bound: int = 3
    trials: int = 50

    def __post_init__(self):
        if self.trials < 1 or self.max_depth < 1:
            raise ValueError("trials and max_depth must be positive")

    def space(self) -> StateSpace:
        return StateSpace(self.state_size)


@dataclass(frozen=True)
class Instance:
    """One generated instantiation of a law.

    hyps is a tuple of ('eq'|'ref', lhs, rhs) side conditions; relation is
    'eq' or 'ref' (lhs is refined by rhs) for the conclusion.
    """

    relation: str
    lhs: Command
    rhs: Command
    hyps: Tuple[Tuple[str, Command, Command], ...] = ()


@dataclass(frozen=True)
class Law:
    name: str
    ref: str
    kind: str  # "equality" | "refinement" | "conditional"
    vars: Tuple[Tuple[str, str], ...]
    make: Callable[[dict, StateSpace], Instance]
    op_pair: Optional[str] = None
    fallback: Optional[Callable[[random.Random, "GenCfg", StateSpace], dict]] = None


@dataclass(frozen=True)
class Failure:
    bindings: Dict[str, str]
    witness: str
    violation: str  # "lhs-missing" | "rhs-extra"


@dataclass(frozen=True)
class LawReport:
    law: str
    trials: int
    passes: int
    skipped: int
    failure: Optional[Failure] = None

    @property
    def status(self) -> str:
        return "pass" if self.failure is None else "fail"


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

SORTS = (
    "command",
    "test",
    "atomic",
    "pseudo-atomic",
    "relation",
    "natural",
    "commands",
    "iterated-atomic",
    "iterated-pseudo-atomic",
)


def gen(sort: str, cfg: GenCfg, rng: Optional[random.Random] = None):
    """Sample one value of the given sort; deterministic in the rng/seed."""
    if rng is None:
        rng = random.Random(cfg.seed)
    s = cfg.space()
    if sort == "command":
        return _gen_command(rng, s, cfg.max_depth)
    if sort == "test":
        return _gen_test(rng, s)
    if sort == "relation":
        return _gen_relation(rng, s)
    if sort == "atomic":
        return _gen_atomic(rng, s)
    if sort == "pseudo-atomic":
        return _gen_pseudo_atomic(rng, s)
    if sort == "natural":
        return rng.randint(0, min(cfg.bound, 3))
    if sort == "commands":
        return tuple(
            _gen_command(rng, s, max(1, cfg.max_depth - 1))
            for _ in range(rng.randint(1, 4))
        )
    if sort == "iterated-atomic":
        return _gen_fixed_point(rng, s, _gen_atomic)
    if sort == "iterated-pseudo-atomic":
        return _gen_fixed_point(rng, s, _gen_pseudo_atomic)
    raise ValueError("unknown sort: %r" % sort)


def _gen_test(rng, s):
    return frozenset(q for q in range(s.size) if rng.random() < 0.5)


def _gen_relation(rng, s):
    return frozenset(p for p in s.univ if rng.random() < 0.5)


def _gen_atomic(rng, s):
    return Choice(Pgm(_gen_relation(rng, s)), Env(_gen_relation(rng, s)))


def _gen_pseudo_atomic(rng, s):
    from .terms import pseudo_atomic

    return pseudo_atomic(_gen_atomic(rng, s), _gen_atomic(rng, s))


def _gen_fixed_point(rng, s, gen_atom):
    body = gen_atom(rng, s)
    return FinIter(body) if rng.random() < 0.5 else OmIter(body)


_LEAVES = ("bot", "top", "tau", "test", "pgm", "env")
_NODES = (
    "choice",
    "meet",
    "seq",
    "seq",
    "par",
    "wconj",
    "fin",
    "om",
    "inf",
    "pow",
)


def _gen_command(rng, s, depth) -> Command:
    if depth <= 0 or rng.random() < 0.3:
        kind = rng.choice(_LEAVES)
        if kind == "bot":
            return Bot()
        if kind == "top":
            return Top()
        if kind == "tau":
            return Tau()
        if kind == "test":
            return Test(_gen_test(rng, s))
        if kind == "pgm":
            return Pgm(_gen_relation(rng, s))
        return Env(_gen_relation(rng, s))
    kind = rng.choice(_NODES)
    if kind in ("fin", "om", "inf"):
        body = _gen_command(rng, s, depth - 1)
        return {"fin": FinIter, "om": OmIter, "inf": InfIter}[kind](body)
    if kind == "pow":
        return FixedIter(_gen_command(rng, s, depth - 1), rng.randint(0, 2))
    left = _gen_command(rng, s, depth - 1)
    right = _gen_command(rng, s, depth - 1)
    ctor = {
        "choice": Choice,
        "meet": Meet,
        "seq": Seq,
        "par": Par,
        "wconj": WConj,
    }[kind]
    return ctor(left, right)


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

# Operator pairings: (sync op, seq-like op); eta/iota/I are built per space.
_PAIRS = ("par_seq", "conj_seq", "conj_par")
_PAIR_OPS = {"par_seq": (Par, Seq), "conj_seq": (WConj, Seq), "conj_par": (WConj, Par)}
# pairings whose seq-like operator is genuine sequential composition; only
# these carry iteration/atomic-algebra structure
_SEQ_PAIRS = ("par_seq", "conj_seq")


def _ops(pair):
    return _PAIR_OPS[pair]


def _eta(pair, s: StateSpace) -> Command:
    return Tau() if pair in _SEQ_PAIRS else rg.skip(s)


def _big_i(pair, s: StateSpace) -> Command:
    return rg.skip(s) if pair == "par_seq" else rg.chaos(s)


def _iota(pair, s: StateSpace) -> Command:
    # atomic neutral element of the sync operator
    return rg.bigstep_eps(s) if pair == "par_seq" else rg.bigstep_alpha(s)


def _choice_all(cmds: Sequence[Command]) -> Command:
    out = cmds[0]
    for c in cmds[1:]:
        out = Choice(out, c)
    return out


def _meet_all(cmds: Sequence[Command]) -> Command:
    out = cmds[0]
    for c in cmds[1:]:
        out = Meet(out, c)
    return out


def _eq(lhs, rhs, hyps=()):
    return Instance("eq", lhs, rhs, tuple(hyps))


def _ref(lhs, rhs, hyps=()):
    return Instance("ref", lhs, rhs, tuple(hyps))


def _law(name, ref, kind, varspec, make, op_pair=None, fallback=None):
    return Law(name, ref, kind, tuple(varspec), make, op_pair, fallback)


def _atomic_suite(pair: str, sort: str, suffix: str) -> List[Law]:
    """The atomic-algebra laws for one operator pairing; replayed verbatim
    for pseudo-atomic generators by swapping the sort."""
    sync, odot = _ops(pair)
    tag = "%s.%s" % (suffix, pair)
    a2 = (("a1", sort), ("a2", sort))
    ac2 = a2 + (("c1", "command"), ("c2", "command"))
    laws = [
        _law(
            "sync_interchange_odot." + tag,
            "atomic interchange is an equality",
            "equality",
            ac2,
            lambda e, s, sync=sync, odot=odot: _eq(
                sync(odot(e["a1"], e["c1"]), odot(e["a2"], e["c2"])),
                odot(sync(e["a1"], e["a2"]), sync(e["c1"], e["c2"])),
            ),
            pair,
        ),
        _law(
            "atomic_interchange_inf_iter." + tag,
            "infinite iterations synchronise stepwise",
            "equality",
            a2,
            lambda e, s, sync=sync: _eq(
                sync(InfIter(e["a1"]), InfIter(e["a2"])),
                InfIter(sync(e["a1"], e["a2"])),
            ),
            pair,
        ),
        _law(
            "atomic_sync_eta." + tag,
            "a step cannot synchronise with immediate termination",
            "equality",
            (("a1", sort),),
            lambda e, s, sync=sync, pair=pair: _eq(
                sync(_eta(pair, s), e["a1"]), Bot()
            ),
            pair,
        ),
        _law(
            "atomic_neutral." + tag,
            "the big-step neutral element is neutral on atomics",
            "equality",
            (("a1", sort),),
            lambda e, s, sync=sync, pair=pair: _eq(
                sync(_iota(pair, s), e["a1"]), e["a1"]
            ),
            pair,
        ),
        _law(
            "atomic_odot_sync_eta." + tag,
            "a step-prefixed command cannot synchronise with termination",
            "equality",
            (("a1", sort), ("c1", "command")),
            lambda e, s, sync=sync, odot=odot, pair=pair: _eq(
                sync(_eta(pair, s), odot(e["a1"], e["c1"])), Bot()
            ),
            pair,
        ),
        _law(
            "atomic_sync_fixed_iter_prefix." + tag,
            "equal fixed powers synchronise stepwise, with continuations",
            "equality",
            ac2 + (("i", "natural"),),
            lambda e, s, sync=sync, odot=odot: _eq(
                sync(
                    odot(FixedIter(e["a1"], e["i"]), e["c1"]),
                    odot(FixedIter(e["a2"], e["i"]), e["c2"]),
                ),
                odot(
                    FixedIter(sync(e["a1"], e["a2"]), e["i"]),
                    sync(e["c1"], e["c2"]),
                ),
            ),
            pair,
        ),
        _law(
            "atomic_sync_fixed_iter." + tag,
            "equal fixed powers synchronise stepwise",
            "equality",
            a2 + (("i", "natural"),),
            lambda e, s, sync=sync: _eq(
                sync(FixedIter(e["a1"], e["i"]), FixedIter(e["a2"], e["i"])),
                FixedIter(sync(e["a1"], e["a2"]), e["i"]),
            ),
            pair,
        ),
        _law(
            "atomic_sync_finite_iter_prefix." + tag,
            "stars synchronise until one side is exhausted",
            "equality",
            ac2,
            lambda e, s, sync=sync, odot=odot: _eq(
                sync(
                    odot(FinIter(e["a1"]), e["c1"]),
                    odot(FinIter(e["a2"]), e["c2"]),
                ),
                odot(
                    FinIter(sync(e["a1"], e["a2"])),
                    Choice(
                        sync(e["c1"], odot(FinIter(e["a2"]), e["c2"])),
                        sync(odot(FinIter(e["a1"]), e["c1"]), e["c2"]),
                    ),
                ),
            ),
            pair,
        ),
        _law(
            "atomic_sync_finite_iter." + tag,
            "star distributes through synchronisation of steps",
            "equality",
            a2,
            lambda e, s, sync=sync: _eq(
                sync(FinIter(e["a1"]), FinIter(e["a2"])),
                FinIter(sync(e["a1"], e["a2"])),
            ),
            pair,
        ),
        _law(
            "atomic_sync_finite_iter_infinite." + tag,
            "a star against an infinite iteration",
            "equality",
            (("a1", sort), ("a2", sort), ("c1", "command")),
            lambda e, s, sync=sync, odot=odot: _eq(
                sync(odot(FinIter(e["a1"]), e["c1"]), InfIter(e["a2"])),
                odot(
                    FinIter(sync(e["a1"], e["a2"])),
                    sync(e["c1"], InfIter(e["a2"])),
                ),
            ),
            pair,
        ),
        _law(
            "atomic_sync_iter_infinite." + tag,
            "an omega iteration against an infinite iteration",
            "equality",
            (("a1", sort), ("a2", sort), ("c1", "command")),
            lambda e, s, sync=sync, odot=odot: _eq(
                sync(odot(OmIter(e["a1"]), e["c1"]), InfIter(e["a2"])),
                odot(
                    OmIter(sync(e["a1"], e["a2"])),
                    sync(e["c1"], InfIter(e["a2"])),
                ),
            ),
            pair,
        ),
        _law(
            "atomic_sync_iter_prefix." + tag,
            "omega iterations synchronise until one side is exhausted",
            "equality",
            ac2,
            lambda e, s, sync=sync, odot=odot: _eq(
                sync(
                    odot(OmIter(e["a1"]), e["c1"]),
                    odot(OmIter(e["a2"]), e["c2"]),
                ),
                odot(
                    OmIter(sync(e["a1"], e["a2"])),
                    Choice(
                        sync(e["c1"], odot(OmIter(e["a2"]), e["c2"])),
                        sync(odot(OmIter(e["a1"]), e["c1"]), e["c2"]),
                    ),
                ),
            ),
            pair,
        ),
        _law(
            "atomic_sync_iter." + tag,
            "omega distributes through synchronisation of steps",
            "equality",
            a2,
            lambda e, s, sync=sync: _eq(
                sync(OmIter(e["a1"]), OmIter(e["a2"])),
                OmIter(sync(e["a1"], e["a2"])),
            ),
            pair,
        ),
    ]
    return laws


def _fp_suite(pair: str, sort: str, suffix: str) -> List[Law]:
    """Distribution laws for iterated-atomic (or pseudo-atomic) fixed
    points: the strengthened, equality forms."""
    sync, odot = _ops(pair)
    tag = "%s.%s" % (suffix, pair)
    return [
        _law(
            "atomic_fp_sync_eta." + tag,
            "an iterated step synchronises neutrally with termination",
            "equality",
            (("d", sort),),
            lambda e, s, sync=sync, pair=pair: _eq(
                sync(e["d"], _eta(pair, s)), _eta(pair, s)
            ),
            pair,
        ),
        _law(
            "atomic_fp_distrib_seq." + tag,
            "an iterated step distributes into sequential composition",
            "equality",
            (("d", sort), ("c1", "command"), ("c2", "command")),
            lambda e, s, sync=sync, odot=odot: _eq(
                sync(e["d"], odot(e["c1"], e["c2"])),
                odot(sync(e["d"], e["c1"]), sync(e["d"], e["c2"])),
            ),
            pair,
        ),
        _law(
            "sync_distrib_iter_succ." + tag,
            "strong distribution into fixed powers",
            "equality",
            (("d", sort), ("c1", "command"), ("i", "natural")),
            lambda e, s, sync=sync: _eq(
                sync(e["d"], FixedIter(e["c1"], e["i"] + 1)),
                FixedIter(sync(e["d"], e["c1"]), e["i"] + 1),
            ),
            pair,
        ),
        _law(
            "sync_distrib_finite_iter." + tag,
            "strong distribution into finite iteration",
            "equality",
            (("d", sort), ("c1", "command")),
            lambda e, s, sync=sync: _eq(
                sync(e["d"], FinIter(e["c1"])),
                FinIter(sync(e["d"], e["c1"])),
            ),
            pair,
        ),
    ]


def _weak_distrib_suite(pair: str) -> List[Law]:
    sync, odot = _ops(pair)

    def d_hyp(e, s):
        return ("ref", e["d"], odot(e["d"], e["d"]))

    def eta_hyp(e, s):
        return ("ref", sync(e["d"], _eta(pair, s)), _eta(pair, s))

    def fb(rng, cfg, s):
        # iterations of atomics satisfy both hypotheses
        env = {"d": _gen_fixed_point(rng, s, _gen_atomic)}
        env["c1"] = _gen_command(rng, s, cfg.max_depth - 1)
        env["c2"] = _gen_command(rng, s, cfg.max_depth - 1)
        env["i"] = rng.randint(0, 2)
        return env

    laws = [
        _law(
            "weak_sync_distrib_odot." + pair,
            "weak distribution given a self-absorbing d",
            "conditional",
            (("d", "command"), ("c1", "command"), ("c2", "command")),
            lambda e, s, sync=sync, odot=odot: _ref(
                sync(e["d"], odot(e["c1"], e["c2"])),
                odot(sync(e["d"], e["c1"]), sync(e["d"], e["c2"])),
                hyps=(d_hyp(e, s),),
            ),
            pair,
            fallback=fb,
        )
    ]
    if pair in _SEQ_PAIRS:
        laws += [
            _law(
                "weak_sync_distrib_iter_zero." + pair,
                "weak distribution into the zero power",
                "conditional",
                (("d", "command"), ("c1", "command")),
                lambda e, s, sync=sync: _ref(
                    sync(e["d"], FixedIter(e["c1"], 0)),
                    FixedIter(sync(e["d"], e["c1"]), 0),
                    hyps=(eta_hyp(e, s),),
                ),
                pair,
                fallback=fb,
            ),
            _law(
                "weak_sync_distrib_iter_succ." + pair,
                "weak distribution into successor powers",
                "conditional",
                (("d", "command"), ("c1", "command"), ("i", "natural")),
                lambda e, s, sync=sync: _ref(
                    sync(e["d"], FixedIter(e["c1"], e["i"] + 1)),
                    FixedIter(sync(e["d"], e["c1"]), e["i"] + 1),
                    hyps=(d_hyp(e, s),),
                ),
                pair,
                fallback=fb,
            ),
            _law(
                "weak_sync_distrib_finite_iter." + pair,
                "weak distribution into finite iteration",
                "conditional",
                (("d", "command"), ("c1", "command")),
                lambda e, s, sync=sync: _ref(
                    sync(e["d"], FinIter(e["c1"])),
                    FinIter(sync(e["d"], e["c1"])),
                    hyps=(d_hyp(e, s), eta_hyp(e, s)),
                ),
                pair,
                fallback=fb,
            ),
        ]
    return laws


def registry() -> List[Law]:
    """The full law catalog."""
    laws: List[Law] = []
    C = "command"

    # -- lattice and monoid structure ------------------------------------
    laws += [
        _law("choice_comm", "binary choice commutes", "equality",
             (("c", C), ("d", C)),
             lambda e, s: _eq(Choice(e["c"], e["d"]), Choice(e["d"], e["c"]))),
        _law("choice_idem", "binary choice is idempotent", "equality",
             (("c", C),),
             lambda e, s: _eq(Choice(e["c"], e["c"]), e["c"])),
        _law("meet_comm", "strong conjunction commutes", "equality",
             (("c", C), ("d", C)),
             lambda e, s: _eq(Meet(e["c"], e["d"]), Meet(e["d"], e["c"]))),
        _law("meet_idem", "strong conjunction is idempotent", "equality",
             (("c", C),),
             lambda e, s: _eq(Meet(e["c"], e["c"]), e["c"])),
        _law("seq_assoc", "sequential composition associates", "equality",
             (("c", C), ("d", C), ("e", C)),
             lambda e, s: _eq(Seq(Seq(e["c"], e["d"]), e["e"]),
                              Seq(e["c"], Seq(e["d"], e["e"])))),
        _law("par_assoc", "parallel composition associates", "equality",
             (("c", C), ("d", C), ("e", C)),
             lambda e, s: _eq(Par(Par(e["c"], e["d"]), e["e"]),
                              Par(e["c"], Par(e["d"], e["e"])))),
        _law("conj_assoc", "weak conjunction associates", "equality",
             (("c", C), ("d", C), ("e", C)),
             lambda e, s: _eq(WConj(WConj(e["c"], e["d"]), e["e"]),
                              WConj(e["c"], WConj(e["d"], e["e"])))),
        _law("par_comm", "parallel composition commutes", "equality",
             (("c", C), ("d", C)),
             lambda e, s: _eq(Par(e["c"], e["d"]), Par(e["d"], e["c"]))),
        _law("conj_comm", "weak conjunction commutes", "equality",
             (("c", C), ("d", C)),
             lambda e, s: _eq(WConj(e["c"], e["d"]), WConj(e["d"], e["c"]))),
        _law("conj_idem", "weak conjunction is idempotent", "equality",
             (("c", C),),
             lambda e, s: _eq(WConj(e["c"], e["c"]), e["c"])),
        _law("seq_neutral_left", "no-op is a left neutral of sequencing",
             "equality", (("c", C),),
             lambda e, s: _eq(Seq(Tau(), e["c"]), e["c"])),
        _law("seq_neutral_right", "no-op is a right neutral of sequencing",
             "equality", (("c", C),),
             lambda e, s: _eq(Seq(e["c"], Tau()), e["c"])),
        _law("par_neutral", "skip is the neutral of parallel", "equality",
             (("c", C),),
             lambda e, s: _eq(Par(rg.skip(s), e["c"]), e["c"])),
        _law("conj_neutral", "chaos is the neutral of weak conjunction",
             "equality", (("c", C),),
             lambda e, s: _eq(WConj(rg.chaos(s), e["c"]), e["c"])),
    ]

    # -- quantale structure: distribution and annihilation ---------------
    laws += [
        _law("seq_distrib_choice_left",
             "sequencing distributes from the left over non-empty choice",
             "equality", (("d", C), ("cs", "commands")),
             lambda e, s: _eq(
                 Seq(e["d"], _choice_all(e["cs"])),
                 _choice_all([Seq(e["d"], c) for c in e["cs"]]))),
        _law("seq_distrib_choice_right",
             "sequencing distributes from the right over non-empty choice",
             "equality", (("d", C), ("cs", "commands")),
             lambda e, s: _eq(
                 Seq(_choice_all(e["cs"]), e["d"]),
                 _choice_all([Seq(c, e["d"]) for c in e["cs"]]))),
        _law("par_distrib_choice",
             "parallel distributes over non-empty choice", "equality",
             (("d", C), ("cs", "commands")),
             lambda e, s: _eq(
                 Par(e["d"], _choice_all(e["cs"])),
                 _choice_all([Par(e["d"], c) for c in e["cs"]]))),
        _law("conj_distrib_choice",
             "weak conjunction distributes over non-empty choice",
             "equality", (("d", C), ("cs", "commands")),
             lambda e, s: _eq(
                 WConj(e["d"], _choice_all(e["cs"])),
                 _choice_all([WConj(e["d"], c) for c in e["cs"]]))),
        _law("bot_seq_annihilate",
             "sequencing is a right quantale: bot sequenced is bot",
             "equality", (("c", C),),
             lambda e, s: _eq(Seq(Bot(), e["c"]), Bot())),
        _law("top_seq_annihilate", "abort annihilates sequencing from the left",
             "equality", (("c", C),),
             lambda e, s: _eq(Seq(Top(), e["c"]), Top())),
        _law("top_par_annihilate", "abort annihilates parallel", "equality",
             (("c", C),),
             lambda e, s: _eq(Par(Top(), e["c"]), Top())),
        _law("top_conj_annihilate", "abort annihilates weak conjunction",
             "equality", (("c", C),),
             lambda e, s: _eq(WConj(Top(), e["c"]), Top())),
    ]

    # -- iteration and fixed points ---------------------------------------
    laws += [
        _law("iter_zero", "the zero power is the no-op", "equality",
             (("c", C),),
             lambda e, s: _eq(FixedIter(e["c"], 0), Tau())),
        _law("iter_succ", "successor powers peel one copy", "equality",
             (("c", C), ("i", "natural")),
             lambda e, s: _eq(FixedIter(e["c"], e["i"] + 1),
                              Seq(e["c"], FixedIter(e["c"], e["i"])))),
        _law("finite_iter_unfold", "star unfolds one step", "equality",
             (("c", C),),
             lambda e, s: _eq(FinIter(e["c"]),
                              Choice(Tau(), Seq(e["c"], FinIter(e["c"]))))),
        _law("iter_unfold", "omega unfolds one step", "equality",
             (("c", C),),
             lambda e, s: _eq(OmIter(e["c"]),
                              Choice(Tau(), Seq(e["c"], OmIter(e["c"]))))),
        _law("inf_iter_unfold", "infinite iteration unfolds one step",
             "equality", (("c", C),),
             lambda e, s: _eq(InfIter(e["c"]), Seq(e["c"], InfIter(e["c"])))),
        _law("finite_iter_induct", "star induction", "conditional",
             (("y", C), ("c", C), ("d", C)),
             lambda e, s: _ref(
                 e["y"], Seq(FinIter(e["c"]), e["d"]),
                 hyps=(("ref", e["y"], Choice(e["d"], Seq(e["c"], e["y"]))),)),
             fallback=lambda rng, cfg, s: {
                 "c": _gen_command(rng, s, cfg.max_depth - 1),
                 "d": _gen_command(rng, s, cfg.max_depth - 1),
                 "y": Top(),
             }),
        _law("iter_induct", "omega induction", "conditional",
             (("y", C), ("c", C), ("d", C)),
             lambda e, s: _ref(
                 Seq(OmIter(e["c"]), e["d"]), e["y"],
                 hyps=(("ref", Choice(e["d"], Seq(e["c"], e["y"])), e["y"]),)),
             fallback=lambda rng, cfg, s: {
                 "c": _gen_command(rng, s, cfg.max_depth - 1),
                 "d": _gen_command(rng, s, cfg.max_depth - 1),
                 "y": Bot(),
             }),
        _law("inf_iter_induct", "infinite-iteration induction", "conditional",
             (("y", C), ("c", C)),
             lambda e, s: _ref(
                 InfIter(e["c"]), e["y"],
                 hyps=(("ref", Seq(e["c"], e["y"]), e["y"]),)),
             fallback=lambda rng, cfg, s: {
                 "c": _gen_command(rng, s, cfg.max_depth - 1),
                 "y": Bot(),
             }),
        _law("finite_to_fixed", "star is refined by every fixed power",
             "refinement", (("c", C), ("i", "natural")),
             lambda e, s: _ref(FinIter(e["c"]), FixedIter(e["c"], e["i"]))),
        _law("finite_iter_decompose",
             "star equals the choice of all fixed powers up to the bound",
             "equality", (("a", "atomic"),),
             lambda e, s: _eq(
                 FinIter(e["a"]),
                 _choice_all([FixedIter(e["a"], i)
                              for i in range(_DECOMPOSE_BOUND[0] + 1)]))),
    ]

    # -- interchange laws and biquantale consequences ---------------------
    for pair in _PAIRS:
        sync, odot = _ops(pair)
        laws += [
            _law("interchange." + pair,
                 "weak interchange between the operator pair", "refinement",
                 (("c1", C), ("c2", C), ("d1", C), ("d2", C)),
                 lambda e, s, sync=sync, odot=odot: _ref(
                     sync(odot(e["c1"], e["c2"]), odot(e["d1"], e["d2"])),
                     odot(sync(e["c1"], e["d1"]), sync(e["c2"], e["d2"]))),
                 pair),
            _law("iota_to_eta." + pair,
                 "the sync neutral refines the seq-like neutral",
                 "refinement", (),
                 lambda e, s, pair=pair: _ref(_big_i(pair, s), _eta(pair, s)),
                 pair),
            _law("eta_sync_eta." + pair,
                 "the seq-like neutral synchronises with itself", "equality",
                 (),
                 lambda e, s, sync=sync, pair=pair: _eq(
                     sync(_eta(pair, s), _eta(pair, s)), _eta(pair, s)),
                 pair),
            _law("iota_odot_iota." + pair,
                 "the sync neutral absorbs its own sequencing", "equality",
                 (),
                 lambda e, s, odot=odot, pair=pair: _eq(
                     odot(_big_i(pair, s), _big_i(pair, s)), _big_i(pair, s)),
                 pair),
        ]
        laws += _weak_distrib_suite(pair)

    for op_name, sync in (("par", Par), ("conj", WConj)):
        laws.append(_law(
            "whole_if_first." + op_name,
            "a command unable to synchronise with no-op stays unable",
            "conditional",
            (("c1", C), ("c2", C)),
            lambda e, s, sync=sync: _eq(
                sync(Tau(), Seq(e["c1"], e["c2"])), Bot(),
                hyps=(("eq", sync(Tau(), e["c1"]), Bot()),)),
            fallback=lambda rng, cfg, s: {
                "c1": _gen_atomic(rng, s),
                "c2": _gen_command(rng, s, cfg.max_depth - 1),
            }))

    # -- tests and assertions ---------------------------------------------
    laws += [
        _law("eta_to_test", "every test refines the no-op", "refinement",
             (("t", "test"),),
             lambda e, s: _ref(Tau(), Test(e["t"]))),
        _law("test_negate_involution", "negation of tests is an involution",
             "equality", (("t", "test"),),
             lambda e, s: _eq(
                 Test(negate_test(negate_test(e["t"], s), s)), Test(e["t"]))),
        _law("test_meet_negate", "a test and its negation are disjoint",
             "equality", (("t", "test"),),
             lambda e, s: _eq(Meet(Test(e["t"]), Test(negate_test(e["t"], s))),
                              Bot())),
        _law("test_choice_negate", "a test or its negation is the no-op",
             "equality", (("t", "test"),),
             lambda e, s: _eq(
                 Choice(Test(e["t"]), Test(negate_test(e["t"], s))), Tau())),
        _law("test_seq_test", "sequencing tests is their conjunction",
             "equality", (("t1", "test"), ("t2", "test")),
             lambda e, s: _eq(Seq(Test(e["t1"]), Test(e["t2"])),
                              Test(e["t1"] & e["t2"]))),
        _law("test_par_test", "parallel of tests is their conjunction",
             "equality", (("t1", "test"), ("t2", "test")),
             lambda e, s: _eq(Par(Test(e["t1"]), Test(e["t2"])),
                              Test(e["t1"] & e["t2"]))),
        _law("test_conj_test", "weak conjunction of tests is their conjunction",
             "equality", (("t1", "test"), ("t2", "test")),
             lambda e, s: _eq(WConj(Test(e["t1"]), Test(e["t2"])),
                              Test(e["t1"] & e["t2"]))),
        _law("test_distrib_par", "a test distributes into parallel",
             "equality", (("t", "test"), ("c1", C), ("c2", C)),
             lambda e, s: _eq(
                 Seq(Test(e["t"]), Par(e["c1"], e["c2"])),
                 Par(Seq(Test(e["t"]), e["c1"]), Seq(Test(e["t"]), e["c2"])))),
        _law("test_distrib_conj", "a test distributes into weak conjunction",
             "equality", (("t", "test"), ("c1", C), ("c2", C)),
             lambda e, s: _eq(
                 Seq(Test(e["t"]), WConj(e["c1"], e["c2"])),
                 WConj(Seq(Test(e["t"]), e["c1"]),
                       Seq(Test(e["t"]), e["c2"])))),
        _law("final_test_par", "a final test pulls out of parallel",
             "equality", (("t", "test"), ("c1", C), ("c2", C)),
             lambda e, s: _eq(
                 Par(Seq(e["c1"], Test(e["t"])), e["c2"]),
                 Seq(Par(e["c1"], e["c2"]), Test(e["t"])))),
        _law("final_test_conj", "a final test pulls out of weak conjunction",
             "equality", (("t", "test"), ("c1", C), ("c2", C)),
             lambda e, s: _eq(
                 WConj(Seq(e["c1"], Test(e["t"])), e["c2"]),
                 Seq(WConj(e["c1"], e["c2"]), Test(e["t"])))),
        _law("assert_alt", "alternative form of the assertion", "equality",
             (("t", "test"),),
             lambda e, s: _eq(
                 assert_cmd(e["t"], s),
                 Choice(Test(e["t"]),
                        Seq(Test(negate_test(e["t"], s)), Top())))),
        _law("assert_seq", "an assertion followed by a command", "equality",
             (("t", "test"), ("c", C)),
             lambda e, s: _eq(
                 Seq(assert_cmd(e["t"], s), e["c"]),
                 Choice(e["c"], Seq(Test(negate_test(e["t"], s)), Top())))),
    ]

    # -- atomic algebra, and its pseudo-atomic replay ----------------------
    for pair in _SEQ_PAIRS:
        laws += _atomic_suite(pair, "atomic", "atomic")
        laws += _atomic_suite(pair, "pseudo-atomic", "pseudo")
        laws += _fp_suite(pair, "iterated-atomic", "atomic")
        laws += _fp_suite(pair, "iterated-pseudo-atomic", "pseudo")

    # -- program/environment steps and rely/guarantee ----------------------
    laws += [
        _law("pstep_conj_pstep", "program steps conjoin by intersection",
             "equality", (("g1", "relation"), ("g2", "relation")),
             lambda e, s: _eq(WConj(Pgm(e["g1"]), Pgm(e["g2"])),
                              Pgm(e["g1"] & e["g2"]))),
        _law("estep_conj_estep", "environment steps conjoin by intersection",
             "equality", (("g1", "relation"), ("g2", "relation")),
             lambda e, s: _eq(WConj(Env(e["g1"]), Env(e["g2"])),
                              Env(e["g1"] & e["g2"]))),
        _law("pstep_conj_estep", "program and environment steps are disjoint",
             "equality", (("g1", "relation"), ("g2", "relation")),
             lambda e, s: _eq(WConj(Pgm(e["g1"]), Env(e["g2"])), Bot())),
        _law("pstep_par_estep", "parallel matches a program step with an "
             "environment step", "equality",
             (("g1", "relation"), ("g2", "relation")),
             lambda e, s: _eq(Par(Pgm(e["g1"]), Env(e["g2"])),
                              Pgm(e["g1"] & e["g2"]))),
        _law("estep_par_estep", "parallel matches environment steps",
             "equality", (("g1", "relation"), ("g2", "relation")),
             lambda e, s: _eq(Par(Env(e["g1"]), Env(e["g2"])),
                              Env(e["g1"] & e["g2"]))),
        _law("pstep_par_pstep", "two program steps cannot synchronise",
             "equality", (("g1", "relation"), ("g2", "relation")),
             lambda e, s: _eq(Par(Pgm(e["g1"]), Pgm(e["g2"])), Bot())),
        _law("step_weaken", "shrinking a step relation is a refinement",
             "refinement", (("g1", "relation"), ("g2", "relation")),
             lambda e, s: _ref(Pgm(e["g1"] | e["g2"]), Pgm(e["g2"]))),
        _law("guar_conj", "guarantees conjoin by relation intersection",
             "equality", (("g1", "relation"), ("g2", "relation")),
             lambda e, s: _eq(WConj(rg.guar(e["g1"], s), rg.guar(e["g2"], s)),
                              rg.guar(e["g1"] & e["g2"], s))),
        _law("guar_par", "guarantees parallel by relation union", "equality",
             (("g1", "relation"), ("g2", "relation")),
             lambda e, s: _eq(Par(rg.guar(e["g1"], s), rg.guar(e["g2"], s)),
                              rg.guar(e["g1"] | e["g2"], s))),
        _law("guar_distrib_seq",
             "a guarantee distributes over sequential composition",
             "equality", (("g1", "relation"), ("c1", C), ("c2", C)),
             lambda e, s: _eq(
                 WConj(rg.guar(e["g1"], s), Seq(e["c1"], e["c2"])),
                 Seq(WConj(rg.guar(e["g1"], s), e["c1"]),
                     WConj(rg.guar(e["g1"], s), e["c2"])))),
        _law("term_par_term", "two terminating commands in parallel terminate",
             "equality", (),
             lambda e, s: _eq(Par(rg.term_cmd(s), rg.term_cmd(s)),
                              rg.term_cmd(s))),
        _law("rely_weaken", "weakening the rely relation is a refinement",
             "refinement", (("r1", "relation"), ("r2", "relation")),
             lambda e, s: _ref(rg.rely(e["r1"] & e["r2"], s),
                               rg.rely(e["r2"], s))),
        _law("rely_conj", "relies conjoin by relation intersection",
             "equality", (("r1", "relation"), ("r2", "relation")),
             lambda e, s: _eq(WConj(rg.rely(e["r1"], s), rg.rely(e["r2"], s)),
                              rg.rely(e["r1"] & e["r2"], s))),
        _law("rely_par_guar", "a rely absorbs a parallel guarantee of itself",
             "equality", (("r1", "relation"),),
             lambda e, s: _eq(Par(rg.rely(e["r1"], s), rg.guar(e["r1"], s)),
                              rg.rely(e["r1"], s))),
        _law("rely_distrib_seq",
             "a rely distributes over sequential composition", "equality",
             (("r1", "relation"), ("c1", C), ("c2", C)),
             lambda e, s: _eq(
                 WConj(rg.rely(e["r1"], s), Seq(e["c1"], e["c2"])),
                 Seq(WConj(rg.rely(e["r1"], s), e["c1"]),
                     WConj(rg.rely(e["r1"], s), e["c2"])))),
        _law("rely_guar_intro",
             "one side of a parallel may use a rely the other guarantees",
             "refinement", (("r1", "relation"), ("c1", C), ("c2", C)),
             lambda e, s: _ref(
                 WConj(rg.rely(e["r1"], s), Par(e["c1"], e["c2"])),
                 Par(WConj(rg.rely(e["r1"], s), e["c1"]),
                     WConj(rg.guar(e["r1"], s), e["c2"])))),
        _law("rely_guar_intro_symmetric",
             "symmetric rely/guarantee introduction", "refinement",
             (("r1", "relation"), ("e1", "relation"), ("e2", "relation"),
              ("c1", C), ("c2", C)),
             lambda e, s: _ref(
                 WConj(rg.rely(e["r1"], s), Par(e["c1"], e["c2"])),
                 Par(WConj(rg.rely(e["r1"] | e["e1"], s),
                           WConj(rg.guar(e["r1"] | e["e2"], s), e["c1"])),
                     WConj(rg.guar(e["r1"] | e["e1"], s),
                           WConj(rg.rely(e["r1"] | e["e2"], s), e["c2"]))))),
        _law("parallel_spec", "specifications split across parallel",
             "equality", (("t1", "test"), ("t2", "test")),
             lambda e, s: _eq(rg.post(e["t1"] & e["t2"], s),
                              Par(rg.post(e["t1"], s), rg.post(e["t2"], s)))),
        _law("introduce_parallel",
             "the rely/guarantee parallel introduction law", "refinement",
             (("r1", "relation"), ("e1", "relation"), ("e2", "relation"),
              ("t1", "test"), ("t2", "test")),
             lambda e, s: _ref(
                 WConj(rg.rely(e["r1"], s), rg.post(e["t1"] & e["t2"], s)),
                 Par(WConj(rg.rely(e["r1"] | e["e1"], s),
                           WConj(rg.guar(e["r1"] | e["e2"], s),
                                 rg.post(e["t1"], s))),
                     WConj(rg.guar(e["r1"] | e["e1"], s),
                           WConj(rg.rely(e["r1"] | e["e2"], s),
                                 rg.post(e["t2"], s)))))),
    ]

    # -- expansion soundness ------------------------------------------------
    laws.append(_law(
        "expanded_form_roundtrip",
        "every command equals its reassembled head normal form",
        "equality", (("c", C),),
        lambda e, s: _eq(e["c"], _rebuilt(e["c"], s))))

    return laws


def _rebuilt(c: Command, s: StateSpace) -> Command:
    from .expansion import expand, rebuild

    return rebuild(expand(c, s), s)


# finite_iter_decompose needs the model bound at instantiation time; stored
# here by check_law for the build closure above.
_DECOMPOSE_BOUND = [3]


# ---------------------------------------------------------------------------
# Checking
# ---------------------------------------------------------------------------

def _rng_for(cfg: GenCfg, law_name: str, trial: int) -> random.Random:
    return random.Random("%d:%s:%d" % (cfg.seed, law_name, trial))


def _holds(rel: str, lhs: Command, rhs: Command, mcfg: ModelCfg) -> bool:
    if rel == "eq":
        return denote(lhs, mcfg) == denote(rhs, mcfg)
    return denote(rhs, mcfg) <= denote(lhs, mcfg)


def _violation(inst: Instance, mcfg: ModelCfg):
    dl, dr = denote(inst.lhs, mcfg), denote(inst.rhs, mcfg)
    missing = dr - dl
    if missing:
        return "lhs-missing", _min_trace(missing)
    return "rhs-extra", _min_trace(dl - dr)


def _min_trace(ts):
    return min(ts, key=lambda t: (len(t.steps), t.init, t.steps, t.status))


def _render_binding(v, s: StateSpace) -> str:
    if isinstance(v, Command):
        return render(v, s)
    if isinstance(v, tuple):
        return "[" + ", ".join(_render_binding(x, s) for x in v) + "]"
    if isinstance(v, frozenset):
        items = sorted(v)
        if items and isinstance(items[0], tuple):
            return "{" + ",".join("(%d,%d)" % p for p in items) + "}"
        return "{" + ",".join(str(q) for q in items) + "}"
    return str(v)


def check_law(law: Law, cfg: GenCfg, debug: bool = False) -> LawReport:
    """Run cfg.trials randomized instantiations of one law."""
    s = cfg.space()
    mcfg = ModelCfg(s, cfg.bound, debug=debug)
    _DECOMPOSE_BOUND[0] = cfg.bound
    # denotation caches pay for themselves within one law's trials but
    # accumulate without bound across laws at larger configurations
    clear_cache()
    passes = 0
    skipped = 0
    executed = 0
    for trial in range(cfg.trials):
        rng = _rng_for(cfg, law.name, trial)
        inst = None
        env = None
        for _ in range(RETRY_CAP):
            env = {name: gen(sort, cfg, rng) for name, sort in law.vars}
            cand = law.make(env, s)
            if all(_holds(rel, l, r, mcfg) for rel, l, r in cand.hyps):
                inst = cand
                break
        if inst is None and law.fallback is not None:
            env = law.fallback(rng, cfg, s)
            cand = law.make(env, s)
            if all(_holds(rel, l, r, mcfg) for rel, l, r in cand.hyps):
                inst = cand
        if inst is None:
            skipped += 1
            continue
        executed += 1
        if _holds(inst.relation, inst.lhs, inst.rhs, mcfg):
            passes += 1
            continue
        env = _shrink(law, env, s, mcfg)
        inst = law.make(env, s)
        violation, witness = _violation(inst, mcfg)
        failure = Failure(
            bindings={k: _render_binding(v, s) for k, v in sorted(env.items())},
            witness=render_trace(witness),
            violation=violation,
        )
        return LawReport(law.name, executed, passes, skipped, failure)
    return LawReport(law.name, executed, passes, skipped, None)


def _shrink(law: Law, env: dict, s: StateSpace, mcfg: ModelCfg) -> dict:
    """Greedy counterexample shrinking: replace command subterms by bot or
    the no-op while the law still fails."""

    def fails(candidate) -> bool:
        try:
            inst = law.make(candidate, s)
        except Exception:
            return False
        if not all(_holds(rel, l, r, mcfg) for rel, l, r in inst.hyps):
            return False
        return not _holds(inst.relation, inst.lhs, inst.rhs, mcfg)

    changed = True
    rounds = 0
    while changed and rounds < 20:
        changed = False
        rounds += 1
        for name, value in list(env.items()):
            if not isinstance(value, Command):
                continue
            for replacement in (Bot(), Tau()):
                for sub in set(subterms(value)):
                    if sub == replacement:
                        continue
                    cand_cmd = _replace(value, sub, replacement)
                    cand = dict(env, **{name: cand_cmd})
                    if fails(cand):
                        env = cand
                        changed = True
                        break
                if changed:
                    break
            if changed:
                break
    return env


def _replace(c: Command, old: Command, new: Command) -> Command:
    if c == old:
        return new
    if isinstance(c, (Choice, Meet, Seq, Par, WConj)):
        return type(c)(_replace(c.left, old, new), _replace(c.right, old, new))
    if isinstance(c, (FinIter, OmIter, InfIter)):
        return type(c)(_replace(c.body, old, new))
    if isinstance(c, FixedIter):
        return FixedIter(_replace(c.body, old, new), c.count)
    return c


def check_all(cfg: GenCfg, debug: bool = False,
              progress: Optional[Callable[[LawReport], None]] = None) -> List[LawReport]:
    """Check every registry law; deterministic given the seed."""
    reports = []
    for law in registry():
        rep = check_law(law, cfg, debug=debug)
        if progress is not None:
            progress(rep)
        reports.append(rep)
    return reports


# ---------------------------------------------------------------------------
# Compatible sets
# ---------------------------------------------------------------------------

FAMILIES = ("tests", "atomics", "pseudo-atomics")


def _semantic_test_member(c: Command, mcfg: ModelCfg) -> bool:
    d = denote(c, mcfg)
    t = frozenset(t.init for t in d if not t.steps and t.status == TERM)
    return d == denote(Test(t), mcfg)


def _one_step_pairs(d, status, label):
    return frozenset(
        (t.init, t.steps[0][1])
        for t in d
        if len(t.steps) == 1 and t.status == status and t.steps[0][0] == label
    )


def _semantic_atomic_member(c: Command, mcfg: ModelCfg) -> bool:
    d = denote(c, mcfg)
    cand = Choice(Pgm(_one_step_pairs(d, TERM, PI)),
                  Env(_one_step_pairs(d, TERM, EPS)))
    return d == denote(cand, mcfg)


def _semantic_pseudo_member(c: Command, mcfg: ModelCfg) -> bool:
    d = denote(c, mcfg)
    a = Choice(Pgm(_one_step_pairs(d, TERM, PI)),
               Env(_one_step_pairs(d, TERM, EPS)))
    b = Choice(Pgm(_one_step_pairs(d, ABORT, PI)),
               Env(_one_step_pairs(d, ABORT, EPS)))
    return d == denote(Choice(a, Seq(b, Top())), mcfg)


_FAMILY = {
    "tests": (lambda rng, s: Test(_gen_test(rng, s)), _semantic_test_member),
    "atomics": (_gen_atomic, _semantic_atomic_member),
    "pseudo-atomics": (_gen_pseudo_atomic, _semantic_pseudo_member),
}


def check_compatible_set(family: str, cfg: GenCfg, debug: bool = False) -> LawReport:
    """Check closure under suprema, non-empty infima and synchronisation,
    plus right distribution of sequencing into the family's infima."""
    if family not in _FAMILY:
        raise ValueError("unknown family: %r" % family)
    sample, member = _FAMILY[family]
    s = cfg.space()
    mcfg = ModelCfg(s, cfg.bound, debug=debug)
    name = "compatible_set." + family
    passes = 0
    for trial in range(cfg.trials):
        rng = _rng_for(cfg, name, trial)
        zs = [sample(rng, s) for _ in range(rng.randint(1, 4))]
        c = _gen_command(rng, s, max(1, cfg.max_depth - 1))
        sup = _choice_all(zs)
        inf = _meet_all(zs)
        checks = [
            ("sup-closed", lambda: member(sup, mcfg)),
            ("inf-closed", lambda: member(inf, mcfg)),
            ("par-closed", lambda: member(Par(zs[0], zs[-1]), mcfg)),
            ("conj-closed", lambda: member(WConj(zs[0], zs[-1]), mcfg)),
            ("inf-distrib", lambda: denote(Seq(inf, c), mcfg)
             == denote(_meet_all([Seq(z, c) for z in zs]), mcfg)),
        ]
        bad = next((label for label, f in checks if not f()), None)
        if bad is not None:
            failure = Failure(
                bindings={
                    "Z": _render_binding(tuple(zs), s),
                    "c": render(c, s),
                    "check": bad,
                },
                witness="",
                violation="lhs-missing",
            )
            return LawReport(name, trial + 1, passes, 0, failure)
        passes += 1
    return LawReport(name, cfg.trials, passes, 0, None)


# ---------------------------------------------------------------------------
# Strictness witnesses: the weak laws really are weak
# ---------------------------------------------------------------------------

def strict_interchange_counterexample(cfg: GenCfg):
    """A witness that the par/seq interchange refinement is not an equality.

    Returns (bindings, witness trace string).  The classic witness lets the
    left side overlap executions across the sequential boundary.
    """
    s = cfg.space()
    mcfg = ModelCfg(s, cfg.bound)
    eps = rg.bigstep_eps(s)
    # c1;c2 || d1;d2 with c1 two steps long and d1 one step long
    env = {"c1": Seq(eps, eps), "c2": Tau(), "d1": eps, "d2": eps}
    lhs = Par(Seq(env["c1"], env["c2"]), Seq(env["d1"], env["d2"]))
    rhs = Seq(Par(env["c1"], env["d1"]), Par(env["c2"], env["d2"]))
    dl, dr = denote(lhs, mcfg), denote(rhs, mcfg)
    assert dr <= dl and dl != dr, "expected a strict refinement"
    witness = _min_trace(dl - dr)
    return env, render_trace(witness)


def strict_chaos_skip_counterexample(cfg: GenCfg):
    """A witness that skip does not refine chaos (the converse of
    chaos >= skip fails): a program-step trace of chaos absent from skip."""
    s = cfg.space()
    mcfg = ModelCfg(s, cfg.bound)
    dl, dr = denote(rg.skip(s), mcfg), denote(rg.chaos(s), mcfg)
    assert dl < dr, "chaos must strictly dominate skip"
    witness = _min_trace(frozenset(t for t in dr - dl))
    return render_trace(witness)
