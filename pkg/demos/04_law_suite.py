"""Run the algebraic law suite at a small configuration and poke at a
single law by hand."""

from refalg import GenCfg, check_all, check_law, registry
from refalg.laws import Instance, Law, strict_interchange_counterexample
from refalg.terms import Par, Seq

cfg = GenCfg(seed=7, state_size=2, bound=2, trials=10)

laws = registry()
print("laws in the registry:", len(laws))

# check one law directly and look at the report
by_name = {law.name: law for law in laws}
rep = check_law(by_name["seq_assoc"], cfg)
print(rep.law, rep.status, "passes=%d skipped=%d" % (rep.passes, rep.skipped))

# a deliberately wrong claim fails with a shrunk counterexample
bogus = Law(
    name="par_equals_seq",
    ref="demo of a failing law",
    kind="equality",
    vars=(("c", "command"), ("d", "command")),
    make=lambda e, s: Instance("eq", Par(e["c"], e["d"]), Seq(e["c"], e["d"])),
)
rep = check_law(bogus, cfg)
print(rep.law, rep.status)
if rep.failure is not None:
    for name, term in sorted(rep.failure.bindings.items()):
        print("  %s = %s" % (name, term))
    print("  witness:", rep.failure.witness, "(%s)" % rep.failure.violation)

# the par/seq interchange law is a refinement, not an equality;
# this builds a concrete pair witnessing the strict direction
bindings, witness = strict_interchange_counterexample(cfg)
print("strict interchange witness:", witness)

# the whole suite at this small configuration
reports = check_all(cfg)
bad = [r for r in reports if r.status == "fail"]
print("checked %d laws, %d failures" % (len(reports), len(bad)))
