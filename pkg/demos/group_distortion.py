# Distortion in the Baumslag-Solitar group BS(1,2) = <x, y | x y x^-1 = y^2>.
#
# Conjugating y by x^m yields y^(2^m): a word of length 2m + 1 names an
# element whose normal form needs 2^m letters.  Feasibility proofs track
# the short conjugated word, so proof length and word length both stay
# logarithmic in the element.

from feaslab.generators import gen_distorted
from feaslab.lang import group_signature, parse_term
from feaslab.oracle import distortion_table, word_metric_distance
from feaslab.semantics import eval_group_bs

sig = group_signature(("x", "y"))

# the defining relation, checked in the normal form arithmetic
lhs = eval_group_bs(parse_term("(x * y) * inv(x)", sig))
rhs = eval_group_bs(parse_term("y * y", sig))
assert lhs == rhs
print("x y x^-1 =", lhs, "= y^2")

# exact word metric by bidirectional BFS: y^8 is 6 letters, not 7
y8 = parse_term("((((((y * y) * y) * y) * y) * y) * y) * y", sig)
print("d(y^8) =", word_metric_distance(y8))

print()
print("n lines normal_form conj_len word_dist")
for r in distortion_table(3):
    print(r.n, r.proof_lines, r.normal_form, r.conjugated_length, r.word_distance)

# proof lines grow by 6 per stage while the named power squares
r = gen_distorted(5)
print()
print("stage 5:", r.stats.lines, "lines certify y^(2^32), desc", r.value_desc)
