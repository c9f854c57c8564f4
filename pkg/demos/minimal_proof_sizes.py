# How short can a feasibility proof be?  A dynamic program over
# derivation trees gives the floor; an enumerator rebuilds the optimum as
# a real proof and measures it, keeping the recurrence honest.

from feaslab.kernel import check
from feaslab.oracle import enumerate_min_proof, min_proof_lines, min_tree_table
from feaslab.theories import arith_feasibility

c = min_tree_table(32)
print("n :", list(range(0, 17)))
print("C :", [int(x) for x in c[:17]])

# 9 = 3*3 is the first n where multiplication beats counting
print("C(8) =", int(c[8]), " C(9) =", int(c[9]))

# the enumerated proof for 16 uses two squarings: 2 -> 4 -> 16
p = enumerate_min_proof(16)
th = arith_feasibility()
stats = check(p, th)
print("enumerated F(16):", stats.lines, "lines (table says", int(c[16]), ")")
assert stats.lines == int(c[16])

# against the generators: gen_square_cut(2) spends 25 lines with cuts to
# certify 16, while the minimal cut-free derivation needs only 11
print("min lines for", 2 ** (2**2), "=", min_proof_lines(16))

# custom rule costs shift the optimum
free_times = min_tree_table(16, costs=(1, 1, 0))
print("C(16) with free multiplication =", int(free_times[16]))
