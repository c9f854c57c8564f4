"""Independent evaluators used to cross-check proofs and report values.

Five small calculators live here:

  * big naturals with a power-tower fallback (`nat_add`, `nat_mul`,
    `nat_pow`, `eval_nat`) so values like 2^(2^j) stay exact far beyond
    native digit budgets,
  * extended rationals with a point at infinity and the partial
    multiplication/division conventions (`ExtRational`),
  * exact 2x2 rational matrices, their Moebius action on the projective
    line, symmetric eigenvalues, and torus winding growth (`Mat2`),
  * Baumslag-Solitar BS(1,2) normal forms as dyadic pairs (`BSElement`),
  * reduced words in a free group (run-length encoded).

Everything is exact except the float eigenvalue/ratio helpers, which are
documented as such.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .lang import (
    App,
    Const,
    Formula,
    Atom,
    Not,
    BinOp,
    Quant,
    Term,
    Var,
    _children,
)


class SemanticsError(Exception):
    pass


class OpenTermError(SemanticsError):
    """Raised when a closed-term evaluator meets a free variable."""


class EvalBudgetError(SemanticsError):
    """Raised when an exact value cannot be kept within the digit budget."""


class UndefinedOperation(SemanticsError):
    """Raised for partial extended-rational operations (e.g. 1/0, inf+1)."""


# Exact integers are kept as Python ints while their decimal size stays
# within this budget; beyond it only power towers (or an error) remain.
DIGIT_BUDGET = 10_000
_LOG10_2 = math.log10(2)

# ints within the digit budget must remain printable/parseable
import sys as _sys

if hasattr(_sys, "set_int_max_str_digits"):
    if _sys.get_int_max_str_digits() < DIGIT_BUDGET + 100:
        _sys.set_int_max_str_digits(DIGIT_BUDGET + 100)


# ---------------------------------------------------------------------------
# Big naturals: int or PowerTower


class PowerTower:
    """base ** exp with exp itself an int or another PowerTower.

    Instances are normalized: the base is not itself a perfect power, and
    the value is too large to expand within DIGIT_BUDGET.
    """

    __slots__ = ("base", "exp")

    def __init__(self, base, exp):
        self.base = base
        self.exp = exp

    def __repr__(self):
        return nat_str(self)

    def __eq__(self, other):
        if isinstance(other, PowerTower):
            return nat_eq(self, other)
        if isinstance(other, int):
            return False
        return NotImplemented

    def __hash__(self):
        return hash((self.base, self.exp))


Big = Union[int, PowerTower]


def _reduce_base(b: int) -> tuple[int, int]:
    """Write b as c**m with the smallest possible c; returns (c, m).

    Exact for powers of two and for b within float range; oversized
    irregular bases are left alone (they do not arise from the term
    languages used here).
    """
    if b < 2:
        return b, 1
    if b & (b - 1) == 0:
        return 2, b.bit_length() - 1
    if b.bit_length() > 1000:
        return b, 1
    top = b.bit_length()
    for m in range(top, 1, -1):
        c = round(b ** (1.0 / m))
        for cand in (c - 1, c, c + 1):
            if cand >= 2 and cand**m == b:
                return cand, m
    return b, 1


def make_tower(base: int, exp: Big) -> Big:
    if isinstance(exp, int):
        if exp == 0:
            return 1
        if exp == 1:
            return base
        if base == 0:
            return 0
        if base == 1:
            return 1
        # expand while affordable
        if exp.bit_length() <= 64 and exp * math.log10(base) <= DIGIT_BUDGET:
            return base**exp
        c, m = _reduce_base(base)
        return PowerTower(c, exp * m) if m > 1 else PowerTower(base, exp)
    c, m = _reduce_base(base)
    if m > 1:
        exp = nat_mul(m, exp)
    return PowerTower(c if m > 1 else base, exp)


def _digits_budget_ok(a: int, b: int) -> bool:
    return (a.bit_length() + b.bit_length()) * _LOG10_2 <= DIGIT_BUDGET + 1


def nat_eq(a: Big, b: Big) -> bool:
    if isinstance(a, int) and isinstance(b, int):
        return a == b
    if isinstance(a, int) or isinstance(b, int):
        return False  # towers are always beyond the int budget
    return a.base == b.base and nat_eq(a.exp, b.exp)


def nat_add(a: Big, b: Big) -> Big:
    if isinstance(a, int) and isinstance(b, int):
        return a + b
    if nat_eq(a, b):
        return nat_mul(2, a)
    raise EvalBudgetError("sum of oversized values has no exact representation here")


def _as_power_of(base: int, n: int) -> Optional[int]:
    """k with base**k == n, if any."""
    if n < 1 or base < 2:
        return None
    k = 0
    while n % base == 0:
        n //= base
        k += 1
    return k if n == 1 else None


def nat_mul(a: Big, b: Big) -> Big:
    if isinstance(a, int) and isinstance(b, int):
        if a == 0 or b == 0:
            return 0
        if _digits_budget_ok(a, b):
            return a * b
        ca, ma = _reduce_base(a)
        cb, mb = _reduce_base(b)
        if ca == cb:
            return make_tower(ca, ma + mb)
        raise EvalBudgetError("product exceeds the digit budget")
    if isinstance(a, int):
        a, b = b, a
    # a is a tower
    if isinstance(b, int):
        if b == 0:
            return 0
        if b == 1:
            return a
        k = _as_power_of(a.base, b)
        if k is not None:
            return make_tower(a.base, nat_add(a.exp, k))
        raise EvalBudgetError("product of tower and unrelated factor")
    if a.base == b.base:
        return make_tower(a.base, nat_add(a.exp, b.exp))
    raise EvalBudgetError("product of towers with unrelated bases")


def nat_pow(a: Big, b: Big) -> Big:
    if isinstance(b, int) and b == 0:
        return 1
    if isinstance(a, int):
        if a == 0:
            return 0
        if a == 1:
            return 1
        if isinstance(b, int) and b.bit_length() <= 64 and b * math.log10(a) <= DIGIT_BUDGET:
            return a**b
        return make_tower(a, b)
    # tower ** b: (c^e)^b = c^(e*b)
    return make_tower(a.base, nat_mul(a.exp, b))


def nat_log2(a: Big) -> float:
    """Approximate log2; inf when even the logarithm overflows floats."""
    if isinstance(a, int):
        if a <= 0:
            return float("-inf")
        if a.bit_length() <= 1024:
            return math.log2(a)
        return float(a.bit_length() - 1)
    try:
        e = float(a.exp) if isinstance(a.exp, int) else 2.0 ** nat_log2(a.exp)
        return e * math.log2(a.base)
    except OverflowError:
        return float("inf")


def nat_str(a: Big) -> str:
    if isinstance(a, int):
        return str(a)
    return f"{a.base}^({nat_str(a.exp)})"


def eval_nat(t: Term, memo: Optional[dict] = None) -> Big:
    """Value of a closed arithmetic term over 0, s, +, *, exp."""
    if memo is None:
        memo = {}
    hit = memo.get(t)
    if hit is not None:
        return hit
    if isinstance(t, Var):
        raise OpenTermError(f"free variable {t.name}")
    if isinstance(t, Const):
        if t.sym == "0":
            return 0
        if t.sym == "1":
            return 1
        raise SemanticsError(f"constant {t.sym} has no natural-number value")
    sym = t.sym
    if sym == "s":
        out = nat_add(eval_nat(t.args[0], memo), 1)
    elif sym == "+":
        out = nat_add(eval_nat(t.args[0], memo), eval_nat(t.args[1], memo))
    elif sym == "*":
        out = nat_mul(eval_nat(t.args[0], memo), eval_nat(t.args[1], memo))
    elif sym == "exp":
        out = nat_pow(eval_nat(t.args[0], memo), eval_nat(t.args[1], memo))
    else:
        raise SemanticsError(f"symbol {sym} has no natural-number meaning")
    memo[t] = out
    return out


# ---------------------------------------------------------------------------
# Expanded symbol size (exp unfolded into repeated multiplication).
#
# Sizes combine as exact ints while affordable and degrade to float log2
# estimates beyond that; callers treat a float result as "about 2**x nodes".

_EXACT_BITS = 4096


def _sz_norm(x):
    if isinstance(x, int) and x.bit_length() > _EXACT_BITS:
        return math.log2(x)
    return x


def _sz_add(a, b):
    if isinstance(a, int) and isinstance(b, int):
        return _sz_norm(a + b)
    la = a if isinstance(a, float) else math.log2(max(a, 1))
    lb = b if isinstance(b, float) else math.log2(max(b, 1))
    hi, lo = max(la, lb), min(la, lb)
    if hi == float("inf"):
        return hi
    return hi + math.log2(1.0 + 2.0 ** max(lo - hi, -60.0))


def _sz_mul(a, b):
    if isinstance(a, int) and isinstance(b, int):
        return _sz_norm(a * b)
    la = a if isinstance(a, float) else math.log2(max(a, 1))
    lb = b if isinstance(b, float) else math.log2(max(b, 1))
    return la + lb


def _exp_multiplier(u: Term):
    """Exponent value as int or float log2, or None when not evaluable."""
    try:
        v = eval_nat(u)
    except SemanticsError:
        return None
    if isinstance(v, int):
        return v if v.bit_length() <= _EXACT_BITS else math.log2(v)
    return nat_log2(v)


def expanded_size(x, memo: Optional[dict] = None):
    """Tree size after unfolding exp(t, u) into value(u)-fold products.

    Returns an exact int, or a float log2 estimate once sizes leave the
    exact range.  Unevaluable exponents leave the exp node opaque.
    Explicit stack: shared subterms nest deeper than recursion allows.
    """
    if memo is None:
        memo = {}
    hit = memo.get(x)
    if hit is not None:
        return hit
    stack = [x]
    while stack:
        y = stack[-1]
        if y in memo:
            stack.pop()
            continue
        kids = _children(y)
        pending = [c for c in kids if c not in memo]
        if pending:
            stack.extend(pending)
            continue
        if isinstance(y, App) and y.sym == "exp":
            k = _exp_multiplier(y.args[1])
            if k is None or (isinstance(k, int) and k == 0):
                out = 1 + memo[y.args[0]] + memo[y.args[1]]
            else:
                base = memo[y.args[0]]
                # k copies of the base joined by k-1 product nodes
                out = _sz_add(_sz_mul(k, base), _sz_add(k, -1) if isinstance(k, int) else k)
        else:
            out = 1
            for c in kids:
                out = _sz_add(out, memo[c])
        memo[y] = out
        stack.pop()
    return memo[x]


# ---------------------------------------------------------------------------
# Extended rationals


@dataclass(frozen=True)
class ExtRational:
    """A rational number or the single point at infinity (num=None)."""

    num: Optional[Fraction]

    @staticmethod
    def of(value) -> "ExtRational":
        if isinstance(value, ExtRational):
            return value
        return ExtRational(Fraction(value))

    @property
    def is_inf(self) -> bool:
        return self.num is None

    def add(self, other: "ExtRational") -> "ExtRational":
        if self.is_inf or other.is_inf:
            raise UndefinedOperation("sum involving inf is undefined")
        return ExtRational(self.num + other.num)

    def neg(self) -> "ExtRational":
        if self.is_inf:
            raise UndefinedOperation("negation of inf is undefined")
        return ExtRational(-self.num)

    def mul(self, other: "ExtRational") -> "ExtRational":
        if self.is_inf and other.is_inf:
            return INF
        if self.is_inf or other.is_inf:
            fin = other if self.is_inf else self
            # 0 * inf = inf * 0 = 0; a * inf = inf for nonzero finite a
            return ExtRational(Fraction(0)) if fin.num == 0 else INF
        return ExtRational(self.num * other.num)

    def inv(self) -> "ExtRational":
        if self.is_inf:
            return ExtRational(Fraction(0))
        if self.num == 0:
            raise UndefinedOperation("1/0 is undefined")
        return ExtRational(1 / self.num)

    def div(self, other: "ExtRational") -> "ExtRational":
        if not self.is_inf and other.is_inf:
            return ExtRational(Fraction(0))
        if self.is_inf:
            raise UndefinedOperation("inf as dividend is undefined")
        if other.num == 0:
            raise UndefinedOperation("division by zero is undefined")
        return ExtRational(self.num / other.num)

    def __str__(self):
        return "inf" if self.is_inf else str(self.num)


INF = ExtRational(None)


def parse_ext_rational(text: str) -> ExtRational:
    text = text.strip()
    if text == "inf":
        return INF
    return ExtRational(Fraction(text))


# interned terms are immutable, so values can be cached for the process
# lifetime; partial operations raise before caching and stay uncached
_RAT_EVAL_CACHE: dict = {}


def eval_rat(t: Term, memo: Optional[dict] = None) -> ExtRational:
    """Value of a closed term over 0, 1, inf, +, *, neg, inv."""
    if memo is None:
        memo = _RAT_EVAL_CACHE
    hit = memo.get(t)
    if hit is not None:
        return hit
    if isinstance(t, Var):
        raise OpenTermError(f"free variable {t.name}")
    if isinstance(t, Const):
        table = {"0": ExtRational(Fraction(0)), "1": ExtRational(Fraction(1)), "inf": INF}
        if t.sym not in table:
            raise SemanticsError(f"constant {t.sym} has no extended-rational value")
        return table[t.sym]
    sym = t.sym
    if sym == "+":
        out = eval_rat(t.args[0], memo).add(eval_rat(t.args[1], memo))
    elif sym == "*":
        out = eval_rat(t.args[0], memo).mul(eval_rat(t.args[1], memo))
    elif sym == "neg":
        out = eval_rat(t.args[0], memo).neg()
    elif sym == "inv":
        out = eval_rat(t.args[0], memo).inv()
    else:
        raise SemanticsError(f"symbol {sym} has no extended-rational meaning")
    memo[t] = out
    return out


# ---------------------------------------------------------------------------
# Exact 2x2 matrices and the projective action


@dataclass(frozen=True)
class Mat2:
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __mul__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __pow__(self, n: int) -> "Mat2":
        if n < 0:
            raise ValueError("only nonnegative matrix powers are supported")
        out = mat2(1, 0, 0, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    def trace(self) -> Fraction:
        return self.a + self.d

    def __str__(self):
        return f"({self.a} {self.b}; {self.c} {self.d})"


def mat2(a, b, c, d) -> Mat2:
    return Mat2(Fraction(a), Fraction(b), Fraction(c), Fraction(d))


def parse_mat2(text: str) -> Mat2:
    body = text.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    rows = body.split(";")
    if len(rows) != 2:
        raise SemanticsError(f"expected '(a b; c d)', got {text!r}")
    entries = []
    for row in rows:
        parts = row.split()
        if len(parts) != 2:
            raise SemanticsError(f"expected two entries per row in {text!r}")
        entries.extend(Fraction(p) for p in parts)
    return Mat2(*entries)


def mobius_apply(A: Mat2, x: ExtRational) -> ExtRational:
    """The projective action x -> (a x + b) / (c x + d); total for det != 0."""
    if A.det() == 0:
        raise SemanticsError("Moebius action needs det != 0")
    x = ExtRational.of(x)
    if x.is_inf:
        return ExtRational(A.a / A.c) if A.c != 0 else INF
    den = A.c * x.num + A.d
    num = A.a * x.num + A.b
    if den == 0:
        return INF
    return ExtRational(num / den)


def eigenvalues_sym2(A: Mat2) -> tuple[float, float]:
    """Eigenvalues of a symmetric 2x2 matrix, larger first (floats)."""
    if A.b != A.c:
        raise SemanticsError("eigenvalues_sym2 expects a symmetric matrix")
    tr = float(A.trace())
    disc = tr * tr - 4.0 * float(A.det())
    root = math.sqrt(disc)
    return ((tr + root) / 2.0, (tr - root) / 2.0)


def dominant_eigenvalue_abs(A: Mat2) -> float:
    tr = complex(float(A.trace()))
    disc = tr * tr - 4.0 * complex(float(A.det()))
    root = cmath.sqrt(disc)
    return max(abs((tr + root) / 2.0), abs((tr - root) / 2.0))


def winding_growth(A: Mat2, v: tuple[int, int], n: int) -> tuple[int, float]:
    """(sup-norm of A^n v computed exactly, that norm over lambda_max^n).

    A must be an integer matrix with determinant +-1 (a torus map) and v a
    nonzero integer vector.
    """
    for entry in (A.a, A.b, A.c, A.d):
        if entry.denominator != 1:
            raise SemanticsError("winding growth needs an integer matrix")
    if abs(A.det()) != 1:
        raise SemanticsError("winding growth needs det = +1 or -1")
    if v == (0, 0):
        raise SemanticsError("winding growth needs a nonzero vector")
    M = A**n
    w = (M.a * v[0] + M.b * v[1], M.c * v[0] + M.d * v[1])
    norm = max(abs(w[0]), abs(w[1]))
    lam = dominant_eigenvalue_abs(A)
    return int(norm), float(norm) / (lam**n)


# ---------------------------------------------------------------------------
# BS(1,2) normal forms.
#
# Elements act on Z[1/2] by z -> 2^t z + a with a = p / 2^k dyadic; the
# triple (p, k, t) is kept with k minimal (p odd or k == 0).  p may be a
# power tower for the very distorted elements.


@dataclass(frozen=True)
class BSElement:
    p: object  # int or PowerTower, possibly negative via (sign, magnitude)
    k: int
    t: int

    def __str__(self):
        p = self.p
        ptxt = nat_str(p) if isinstance(p, PowerTower) else str(p)
        if self.k == 0:
            return f"({ptxt}, {self.t})"
        return f"({ptxt}/2^{self.k}, {self.t})"


def _big_shift(p, s: int):
    """p * 2^s for s >= 0, p an int or PowerTower (possibly via sign trick)."""
    if s == 0:
        return p
    if isinstance(p, int):
        if (abs(p).bit_length() + s) * _LOG10_2 > DIGIT_BUDGET:
            if p == 0:
                return 0
            mag = nat_mul(make_tower(2, s), abs(p))
            return mag if p > 0 else _BigNeg(mag)
        return p << s
    if isinstance(p, _BigNeg):
        return _BigNeg(_big_shift(p.mag, s))
    return nat_mul(p, make_tower(2, s))


class _BigNeg:
    """Negative wrapper around a PowerTower magnitude."""

    __slots__ = ("mag",)

    def __init__(self, mag):
        self.mag = mag

    def __repr__(self):
        return f"-{nat_str(self.mag)}"


def _sign_mag(p):
    if isinstance(p, _BigNeg):
        return True, p.mag
    if isinstance(p, int):
        return p < 0, abs(p)
    return False, p


def _big_signed_add(x, y):
    if isinstance(x, int) and isinstance(y, int):
        return x + y
    if isinstance(x, int) and x == 0:
        return y
    if isinstance(y, int) and y == 0:
        return x
    xneg, xm = _sign_mag(x)
    yneg, ym = _sign_mag(y)
    if not isinstance(xm, int) and not isinstance(ym, int) and nat_eq(xm, ym):
        if xneg == yneg:
            total = nat_mul(2, xm)
            return _BigNeg(total) if xneg else total
        return 0
    raise EvalBudgetError("dyadic numerator leaves the representable range")


def bs_element(p, k: int, t: int) -> BSElement:
    """Canonical form: reduce the dyadic a = p/2^k until p is odd or k = 0."""
    if isinstance(p, int):
        while k > 0 and p != 0 and p % 2 == 0:
            p //= 2
            k -= 1
        if p == 0:
            k = 0
    elif k > 0:
        neg, mag = _sign_mag(p)
        if isinstance(mag, PowerTower) and mag.base == 2 and isinstance(mag.exp, int) and mag.exp >= k:
            mag = make_tower(2, mag.exp - k)
            p = _BigNeg(mag) if neg else mag
            k = 0
        else:
            raise EvalBudgetError("cannot canonicalize an oversized dyadic")
    return BSElement(p, k, t)


BS_IDENTITY = BSElement(0, 0, 0)
BS_X = BSElement(0, 0, 1)
BS_Y = BSElement(1, 0, 0)


def bs_mul(g: BSElement, h: BSElement) -> BSElement:
    """(a1, t1) * (a2, t2) = (a1 + 2^t1 a2, t1 + t2)."""
    k = max(g.k, h.k - g.t)
    x = _big_shift(g.p, k - g.k)
    y = _big_shift(h.p, k - h.k + g.t)
    return bs_element(_big_signed_add(x, y), k, g.t + h.t)


def bs_inv(g: BSElement) -> BSElement:
    # inverse of z -> 2^t z + a is z -> 2^-t z - a 2^-t
    shift = g.k + g.t
    p = g.p
    if isinstance(p, int):
        p = -p
    elif isinstance(p, _BigNeg):
        p = p.mag
    else:
        p = _BigNeg(p)
    if shift >= 0:
        return bs_element(p, shift, -g.t)
    return bs_element(_big_shift(p, -shift), 0, -g.t)


def bs_eq(g: BSElement, h: BSElement) -> bool:
    if g.k != h.k or g.t != h.t:
        return False
    a, b = g.p, h.p
    if isinstance(a, int) and isinstance(b, int):
        return a == b
    aneg, am = _sign_mag(a)
    bneg, bm = _sign_mag(b)
    if aneg != bneg:
        return False
    if isinstance(am, int) or isinstance(bm, int):
        return False
    return nat_eq(am, bm)


# ---------------------------------------------------------------------------
# Free-group words (run-length encoded, always reduced)

Word = tuple  # of (generator, nonzero int exponent) pairs


def free_reduce(pairs) -> Word:
    out = []
    for g, e in pairs:
        if e == 0:
            continue
        if out and out[-1][0] == g:
            merged = out[-1][1] + e
            out.pop()
            if merged:
                out.append((g, merged))
        else:
            out.append((g, e))
    return tuple(out)


def word_mul(w1: Word, w2: Word) -> Word:
    return free_reduce(list(w1) + list(w2))


def word_inv(w: Word) -> Word:
    return tuple((g, -e) for g, e in reversed(w))


def word_str(w: Word) -> str:
    if not w:
        return "e"
    parts = []
    for g, e in w:
        parts.append(g if e == 1 else f"{g}^{e}")
    return " ".join(parts)


def eval_group_free(t: Term, memo: Optional[dict] = None, vars_as_letters: bool = False) -> Word:
    """Reduced word of a group term; variables may count as fresh letters."""
    if memo is None:
        memo = {}
    hit = memo.get(t)
    if hit is not None:
        return hit
    if isinstance(t, Var):
        if not vars_as_letters:
            raise OpenTermError(f"free variable {t.name}")
        out = ((t.name, 1),)
    elif isinstance(t, Const):
        out = () if t.sym == "e" else ((t.sym, 1),)
    elif t.sym == "*":
        out = word_mul(
            eval_group_free(t.args[0], memo, vars_as_letters),
            eval_group_free(t.args[1], memo, vars_as_letters),
        )
    elif t.sym == "inv":
        out = word_inv(eval_group_free(t.args[0], memo, vars_as_letters))
    else:
        raise SemanticsError(f"symbol {t.sym} has no group meaning")
    memo[t] = out
    return out


def eval_group_bs(t: Term, memo: Optional[dict] = None) -> BSElement:
    """BS(1,2) normal form of a closed term over e, x, y, *, inv."""
    if memo is None:
        memo = {}
    hit = memo.get(t)
    if hit is not None:
        return hit
    if isinstance(t, Var):
        raise OpenTermError(f"free variable {t.name}")
    if isinstance(t, Const):
        table = {"e": BS_IDENTITY, "x": BS_X, "y": BS_Y}
        if t.sym not in table:
            raise SemanticsError(f"constant {t.sym} is not a BS(1,2) generator")
        return table[t.sym]
    if t.sym == "*":
        out = bs_mul(eval_group_bs(t.args[0], memo), eval_group_bs(t.args[1], memo))
    elif t.sym == "inv":
        out = bs_inv(eval_group_bs(t.args[0], memo))
    else:
        raise SemanticsError(f"symbol {t.sym} has no group meaning")
    memo[t] = out
    return out
