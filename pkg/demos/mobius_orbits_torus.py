# Exact arithmetic on the projective line, Moebius orbits, and the
# winding growth of the Fibonacci torus map.

from fractions import Fraction

from feaslab.generators import gen_matrix_power, gen_rational_orbit
from feaslab.semantics import (
    INF,
    ExtRational,
    eigenvalues_sym2,
    mat2,
    mobius_apply,
    winding_growth,
)

A = mat2(2, 1, 1, 1)

# orbit of 0 under x -> (2x + 1)/(x + 1): convergents of the golden ratio
x = ExtRational(Fraction(0))
orbit = [x]
for _ in range(8):
    x = mobius_apply(A, x)
    orbit.append(x)
print("orbit:", " ".join(str(q) for q in orbit))

# infinity is a first-class point: the swap matrix passes through it
S = mat2(0, 1, 1, 0)
print("0 ->", mobius_apply(S, ExtRational(Fraction(0))), "->",
      mobius_apply(S, INF))

# proofs certify feasibility of deep orbit points: A^(2^n) applied to 0
r = gen_rational_orbit(A, 0, 3)
print("orbit proof n=3:", r.stats.lines, "lines for", r.value_desc)

# matrix powers by repeated squaring, with an entrywise feasibility proof
r = gen_matrix_power(A, 4)
print("A^16 =", r.value_desc, "in", r.stats.lines, "lines")

# eigenvalues and winding growth: sup norm of A^k (1,0) normalised by
# lambda^k settles fast
lam1, lam2 = eigenvalues_sym2(A)
print(f"eigenvalues {lam1:.12f} {lam2:.12f}")
for k in (1, 5, 10, 20, 30):
    norm, ratio = winding_growth(A, (1, 0), k)
    print(f"k={k:2d} norm={norm} ratio={ratio:.9f}")
