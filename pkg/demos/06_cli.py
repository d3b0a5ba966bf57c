"""Drive the command-line interface in process.

The same entry point backs the installed `refalg` console script; calling
run() directly makes the demo self-contained and shows the exit codes.
"""

import io

from refalg.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    print("$ refalg " + " ".join(argv))
    text = out.getvalue() + err.getvalue()
    print(text.rstrip())
    print("(exit %d)" % code)
    print()
    return code


# refinement and equivalence checks over the DSL
call("check", "tau ; tau", "refines", "tau", "--states", "2", "--bound", "2")
call("equiv", "skip || skip", "skip", "--states", "2", "--bound", "2")
call("check", "bot", "refines", "tau", "--states", "2", "--bound", "2")

# expansion to head-normal form, plain and as JSON
call("expand", "pgm{(0,1)} ; tau", "--states", "2", "--bound", "2")
call("expand", "chaos", "--states", "2", "--bound", "2", "--depth", "1", "--json")

# counting the trace denotation
call("trace-count", "top", "--states", "2", "--bound", "1")

# a single law as machine-readable JSON
call("laws", "--law", "seq_assoc", "--states", "2", "--bound", "2",
     "--trials", "5", "--seed", "1", "--json")

# parse errors report a position and exit 2
call("trace-count", "tau ;; tau", "--states", "2", "--bound", "2")
