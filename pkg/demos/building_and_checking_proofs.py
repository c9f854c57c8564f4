# Build a small feasibility proof by hand, check it, and round-trip it
# through the JSON serialization.

from feaslab.kernel import check, cut, serialize_proof, parse_proof, theory_leaf
from feaslab.lang import sequent_str
from feaslab.theories import arith_feasibility

th = arith_feasibility()

# F(0) is an axiom; F:successor steps from F(x) to F(s(x)).
p0 = theory_leaf(th, "F(0)", {})
print(sequent_str(p0.conclusion))

# theory_leaf gives the axiom with its antecedent as open assumptions,
# so a cut against |- F(0) discharges them one at a time
step = theory_leaf(th, "F:successor", {"x": p0.conclusion.succ[0].args[0]})
print(sequent_str(step.conclusion))

p1 = cut(p0, step, p0.conclusion.succ[0])
print(sequent_str(p1.conclusion))

stats = check(p1, th)
print("lines:", stats.lines, "cuts:", stats.cut_count)

# serialization is deterministic; parsing re-validates the rule tags
text = serialize_proof(p1)
again = parse_proof(text, th.signature)
assert serialize_proof(again) == text
check(again, th)
print("round-trip ok,", len(text), "bytes")
