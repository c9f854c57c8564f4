# Short proofs of enormous values.
#
# Each generator family keeps its line count affine in n while the value
# it certifies grows geometrically, doubly exponentially, or worse.  The
# point of the library is to make that gap measurable.

from feaslab.generators import (
    gen_geometric,
    gen_quantifier,
    gen_square_cut,
    gen_unary,
)

print("family          n   lines  value")
for n in (2, 4, 6):
    r = gen_unary(n)
    print(f"unary          {n:2d}   {r.stats.lines:5d}  {r.value_desc}")
for n in (2, 4, 6):
    r = gen_geometric(n)
    print(f"geometric      {n:2d}   {r.stats.lines:5d}  {r.value_desc}")
for n in (2, 4, 6):
    r = gen_square_cut(n)
    print(f"square-cut     {n:2d}   {r.stats.lines:5d}  {r.value_desc}")
for n in (0, 1, 2):
    r = gen_quantifier(n)
    print(f"quantifier     {n:2d}   {r.stats.lines:5d}  {r.value_desc}")

# the quantified family squares its exponent every stage: 15 extra lines
# buy a squaring of the *exponent*, so values reach 2^(2^(2^n))
r = gen_quantifier(4)
print("quantifier n=4:", r.stats.lines, "lines certify", r.value_desc)

# advertised values are computed by the semantic evaluator, not read off
# the proof, so the claim is independently checkable
assert gen_square_cut(5).advertised_value == 2 ** (2**5)
print("square-cut n=5 value re-verified:", 2 ** (2**5))
