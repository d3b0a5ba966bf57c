"""Command-line front end: a small textual syntax for commands plus
refinement / equivalence / expansion queries and law-suite runs.

Exit codes: 0 pass/true, 1 fail/false, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import List, Optional, Tuple

from . import rg
from .expansion import expand
from .laws import (
    FAMILIES,
    GenCfg,
    LawReport,
    check_all,
    check_compatible_set,
    check_law,
    registry,
)
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
    render,
)
from .traces import ModelCfg, denote


class DslError(ValueError):
    """Syntax or validation error with a source position."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__("%d:%d: %s" % (line, col, message))
        self.line = line
        self.col = col


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<name>[a-zA-Z][a-zA-Z-]*)
      | (?P<int>\d+)
      | (?P<op>\|\||&&|[|&;(){},])
    """,
    re.VERBOSE,
)


def _tokenize(src: str):
    """Yield (kind, text, line, col) tuples; kind is 'name', 'int' or the
    operator text itself."""
    line, col = 1, 1
    pos = 0
    out = []
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise DslError("unexpected character %r" % src[pos], line, col)
        text = m.group(0)
        kind = m.lastgroup
        if kind != "ws":
            out.append((text if kind == "op" else kind, text, line, col))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
        pos = m.end()
    out.append(("eof", "", line, col))
    return out


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

# binary levels from loosest to tightest; ';' binds tightest of the five
_LEVELS: List[Tuple[str, type]] = [
    ("|", Choice),
    ("&", Meet),
    ("||", Par),
    ("&&", WConj),
    (";", Seq),
]

_NULLARY = {"bot": Bot, "top": Top, "tau": Tau}
_MACRO_NULLARY = {"skip": rg.skip, "chaos": rg.chaos, "term": rg.term_cmd}
_ITER_NAMES = {"fin": FinIter, "om": OmIter, "inf": InfIter}
_TEST_LIKE = ("test", "assert", "post")
_REL_LIKE = ("pgm", "env", "guar", "rely")


class _Parser:
    def __init__(self, src: str, space: StateSpace, bound: Optional[int] = None):
        self.tokens = _tokenize(src)
        self.i = 0
        self.space = space
        self.bound = bound

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        kind, _, line, col = tok if tok is not None else self.peek()
        raise DslError(message, line, col)

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            self.error("expected %r, found %r" % (kind, tok[1] or "end of input"), tok)
        return tok

    def parse(self) -> Command:
        c = self.parse_level(0)
        tok = self.peek()
        if tok[0] != "eof":
            self.error("unexpected %r" % tok[1], tok)
        return c

    def parse_level(self, idx: int) -> Command:
        if idx == len(_LEVELS):
            return self.parse_atom()
        op, ctor = _LEVELS[idx]
        left = self.parse_level(idx + 1)
        while self.peek()[0] == op:
            self.next()
            left = ctor(left, self.parse_level(idx + 1))
        return left

    def parse_atom(self) -> Command:
        tok = self.next()
        kind, text, line, col = tok
        if kind == "(":
            inner = self.parse_level(0)
            self.expect(")")
            return inner
        if kind != "name":
            self.error("expected a command, found %r" % (text or "end of input"), tok)
        if text in _NULLARY:
            return _NULLARY[text]()
        if text in _MACRO_NULLARY:
            return _MACRO_NULLARY[text](self.space)
        if text in _ITER_NAMES:
            self.expect("(")
            body = self.parse_level(0)
            self.expect(")")
            return _ITER_NAMES[text](body)
        if text == "pow":
            self.expect("(")
            body = self.parse_level(0)
            self.expect(",")
            n = self.parse_int()
            self.expect(")")
            if self.bound is not None and n > self.bound:
                self.error("pow exponent %d exceeds the bound %d" % (n, self.bound), tok)
            return FixedIter(body, n)
        if text in _TEST_LIKE:
            states = self.parse_state_set()
            if text == "test":
                return Test(states)
            if text == "assert":
                return assert_cmd(states, self.space)
            return rg.post(states, self.space)
        if text in _REL_LIKE:
            pairs = self.parse_relation()
            if text == "pgm":
                return Pgm(pairs)
            if text == "env":
                return Env(pairs)
            if text == "guar":
                return rg.guar(pairs, self.space)
            return rg.rely(pairs, self.space)
        self.error("unknown command %r" % text, tok)

    def parse_int(self) -> int:
        tok = self.expect("int")
        return int(tok[1])

    def parse_state(self) -> int:
        tok = self.expect("int")
        q = int(tok[1])
        if q >= self.space.size:
            self.error("state %d out of range for %d states" % (q, self.space.size), tok)
        return q

    def parse_state_set(self):
        self.expect("{")
        states = set()
        if self.peek()[0] != "}":
            states.add(self.parse_state())
            while self.peek()[0] == ",":
                self.next()
                states.add(self.parse_state())
        self.expect("}")
        return frozenset(states)

    def parse_relation(self):
        self.expect("{")
        pairs = set()
        if self.peek()[0] != "}":
            pairs.add(self.parse_pair())
            while self.peek()[0] == ",":
                self.next()
                pairs.add(self.parse_pair())
        self.expect("}")
        return frozenset(pairs)

    def parse_pair(self):
        self.expect("(")
        a = self.parse_state()
        self.expect(",")
        b = self.parse_state()
        self.expect(")")
        return (a, b)


def parse_dsl(src: str, s: StateSpace, bound: Optional[int] = None) -> Command:
    """Parse the textual command syntax; raises DslError on bad input."""
    return _Parser(src, s, bound).parse()


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

def report_json(rep: LawReport, cfg: GenCfg) -> dict:
    ce = None
    if rep.failure is not None:
        ce = {
            "bindings": dict(sorted(rep.failure.bindings.items())),
            "witness": rep.failure.witness,
            "violation": rep.failure.violation,
        }
    return {
        "law": rep.law,
        "trials": rep.trials,
        "passes": rep.passes,
        "skipped": rep.skipped,
        "seed": cfg.seed,
        "states": cfg.state_size,
        "bound": cfg.bound,
        "status": rep.status,
        "counterexample": ce,
    }


def _report_line(rep: LawReport) -> str:
    line = "%-4s %s (%d/%d passed, %d skipped)" % (
        rep.status, rep.law, rep.passes, rep.trials, rep.skipped)
    if rep.failure is not None:
        line += "\n     violation: %s  witness: %s" % (
            rep.failure.violation, rep.failure.witness)
        for k, v in sorted(rep.failure.bindings.items()):
            line += "\n     %s = %s" % (k, v)
    return line


def _render_form(c: Command, s: StateSpace, depth: int, indent: str = "") -> str:
    form = expand(c, s)
    lines = [
        indent + "assert " + _fmt_set(sorted(s.states - form.abort_states)),
        indent + "term " + _fmt_set(sorted(form.term_states)),
    ]
    for (label, pre, post), cont in sorted(form.branches,
                                           key=lambda kv: (kv[0][0], kv[0][1], kv[0][2])):
        head = "%s%s(%d,%d) ->" % (indent, label, pre, post)
        if depth > 1:
            lines.append(head)
            lines.append(_render_form(cont, s, depth - 1, indent + "  "))
        else:
            lines.append("%s %s" % (head, render(cont, s)))
    return "\n".join(lines)


def _fmt_set(states) -> str:
    return "{" + ",".join(str(q) for q in states) + "}"


# ---------------------------------------------------------------------------
# Driver
# ---------------------------------------------------------------------------

def _build_argparser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--states", type=int, default=2, metavar="N",
                        help="number of program states (default 2)")
    common.add_argument("--bound", type=int, default=3, metavar="N",
                        help="trace length bound (default 3)")
    common.add_argument("--trials", type=int, default=50, metavar="K",
                        help="trials per law (default 50)")
    common.add_argument("--seed", type=int, default=42, metavar="S",
                        help="random seed (default 42)")
    common.add_argument("--json", action="store_true",
                        help="emit a JSON report instead of text")
    common.add_argument("--debug-closure", action="store_true",
                        help="assert trace-set closure after every operation")

    p = argparse.ArgumentParser(
        prog="refalg",
        description="bounded-model checker for a concurrent refinement algebra")
    sub = p.add_subparsers(dest="cmd", required=True)

    pc = sub.add_parser("check", parents=[common],
                        help="decide a refinement between two commands")
    pc.add_argument("lhs")
    pc.add_argument("keyword", choices=["refines"], metavar="refines")
    pc.add_argument("rhs")

    pe = sub.add_parser("equiv", parents=[common],
                        help="decide equivalence of two commands")
    pe.add_argument("lhs")
    pe.add_argument("rhs")

    px = sub.add_parser("expand", parents=[common],
                        help="print the head normal form of a command")
    px.add_argument("command")
    px.add_argument("--depth", type=int, default=1, metavar="K",
                    help="levels of branch continuations to expand")

    pl = sub.add_parser("laws", parents=[common],
                        help="run the randomized law suite")
    pl.add_argument("--law", metavar="NAME", default=None,
                    help="run a single law by name")
    pl.add_argument("--family", choices=["tests", "atomics", "pseudo"],
                    default=None, help="check one compatible-set family only")

    pt = sub.add_parser("trace-count", parents=[common],
                        help="count the traces denoted by a command")
    pt.add_argument("command")
    return p


def _parse_or_exit(src: str, space: StateSpace, bound: int, out) -> Command:
    try:
        return parse_dsl(src, space, bound)
    except DslError as exc:
        print("parse error in %r: %s" % (src, exc), file=out)
        raise SystemExit(2)


def _family_reports(family: Optional[str], cfg: GenCfg, debug: bool) -> List[LawReport]:
    if family is None:
        names = FAMILIES
    else:
        names = ({"pseudo": "pseudo-atomics"}.get(family, family),)
    return [check_compatible_set(f, cfg, debug=debug) for f in names]


def run(argv: List[str], stdout=None, stderr=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    parser = _build_argparser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    if args.states < 1 or args.bound < 0 or args.trials < 1:
        print("states must be >= 1, bound >= 0, trials >= 1", file=stderr)
        return 2
    space = StateSpace(args.states)
    mcfg = ModelCfg(space, args.bound, debug=args.debug_closure)

    try:
        if args.cmd == "check":
            lhs = _parse_or_exit(args.lhs, space, args.bound, stderr)
            rhs = _parse_or_exit(args.rhs, space, args.bound, stderr)
            ok = denote(rhs, mcfg) <= denote(lhs, mcfg)
            _emit_bool(args, "refines", ok, stdout)
            return 0 if ok else 1

        if args.cmd == "equiv":
            lhs = _parse_or_exit(args.lhs, space, args.bound, stderr)
            rhs = _parse_or_exit(args.rhs, space, args.bound, stderr)
            ok = denote(lhs, mcfg) == denote(rhs, mcfg)
            _emit_bool(args, "equiv", ok, stdout)
            return 0 if ok else 1

        if args.cmd == "expand":
            c = _parse_or_exit(args.command, space, args.bound, stderr)
            if args.depth < 1:
                print("--depth must be >= 1", file=stderr)
                return 2
            if args.json:
                print(_expand_json(c, space, args.depth), file=stdout)
            else:
                print(_render_form(c, space, args.depth), file=stdout)
            return 0

        if args.cmd == "trace-count":
            c = _parse_or_exit(args.command, space, args.bound, stderr)
            n = len(denote(c, mcfg))
            if args.json:
                print(json.dumps({"command": render(c, space), "states": args.states,
                                  "bound": args.bound, "count": n}), file=stdout)
            else:
                print(n, file=stdout)
            return 0

        # laws
        cfg = GenCfg(seed=args.seed, state_size=args.states,
                     bound=args.bound, trials=args.trials)
        debug = args.debug_closure
        if args.law is not None:
            table = {law.name: law for law in registry()}
            if args.law not in table:
                print("unknown law %r" % args.law, file=stderr)
                return 2
            reports = [check_law(table[args.law], cfg, debug=debug)]
        elif args.family is not None:
            reports = _family_reports(args.family, cfg, debug)
        else:
            reports = check_all(cfg, debug=debug)
            reports += _family_reports(None, cfg, debug)
        if args.json:
            print(json.dumps([report_json(r, cfg) for r in reports], indent=2),
                  file=stdout)
        else:
            for rep in reports:
                print(_report_line(rep), file=stdout)
            bad = sum(1 for r in reports if r.status != "pass")
            print("%d laws checked, %d failed" % (len(reports), bad), file=stdout)
        return 0 if all(r.status == "pass" for r in reports) else 1
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2


def _emit_bool(args, key: str, ok: bool, out) -> None:
    if args.json:
        print(json.dumps({key: ok, "states": args.states, "bound": args.bound}),
              file=out)
    else:
        print("true" if ok else "false", file=out)


def _expand_json(c: Command, s: StateSpace, depth: int):
    return json.dumps(_expand_dict(c, s, depth), indent=2)


def _expand_dict(c: Command, s: StateSpace, depth: int) -> dict:
    form = expand(c, s)
    branches = []
    for (label, pre, post), cont in sorted(form.branches,
                                           key=lambda kv: (kv[0][0], kv[0][1], kv[0][2])):
        entry = {"label": label, "pre": pre, "post": post}
        if depth > 1:
            entry["continuation"] = _expand_dict(cont, s, depth - 1)
        else:
            entry["continuation"] = render(cont, s)
        branches.append(entry)
    return {
        "abort": sorted(form.abort_states),
        "term": sorted(form.term_states),
        "branches": branches,
    }


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
