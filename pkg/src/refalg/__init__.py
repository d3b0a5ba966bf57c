"""A bounded trace model and law checker for a concurrent refinement
algebra with rely/guarantee combinators."""

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
    is_atomic_step,
    negate_test,
    pseudo_atomic,
    render,
    validate,
)
from .traces import (
    ClosureViolation,
    ModelCfg,
    Trace,
    denote,
    equiv,
    refines,
    render_trace,
)
from .expansion import (
    AgreementReport,
    ExpandedForm,
    cross_check,
    equiv_by_expansion,
    expand,
    rebuild,
    roundtrip_ok,
)
from .laws import (
    Failure,
    GenCfg,
    Law,
    LawReport,
    check_all,
    check_compatible_set,
    check_law,
    gen,
    registry,
)
from .rg import (
    ChainFailure,
    ChainStep,
    PreconditionViolated,
    RefinementChain,
    chaos,
    guar,
    intro_parallel,
    post,
    rely,
    render_chain,
    skip,
    term_cmd,
    verify_chain,
)
from .cli import DslError, parse_dsl, run

__all__ = [
    "AgreementReport", "Bot", "ChainFailure", "ChainStep", "Choice",
    "ClosureViolation", "Command", "DslError", "Env", "ExpandedForm",
    "Failure", "FinIter", "FixedIter", "GenCfg", "InfIter", "Law",
    "LawReport", "Meet", "ModelCfg", "OmIter", "Par", "Pgm",
    "PreconditionViolated", "RefinementChain", "Seq", "StateSpace", "Tau",
    "Test", "Top", "Trace", "WConj", "assert_cmd", "chaos", "check_all",
    "check_compatible_set", "check_law", "cross_check", "denote", "equiv",
    "equiv_by_expansion", "expand", "gen", "guar", "intro_parallel",
    "is_atomic_step", "negate_test", "parse_dsl", "post", "pseudo_atomic",
    "rebuild", "refines", "registry", "rely", "render", "render_chain",
    "render_trace", "roundtrip_ok", "run", "skip", "term_cmd", "validate",
    "verify_chain",
]
