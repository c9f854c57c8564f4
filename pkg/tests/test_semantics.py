import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from feaslab.lang import arith_signature, parse_term, rational_signature
from feaslab.semantics import (
    BS_IDENTITY,
    BS_X,
    BS_Y,
    BSElement,
    EvalBudgetError,
    ExtRational,
    INF,
    Mat2,
    OpenTermError,
    PowerTower,
    UndefinedOperation,
    bs_element,
    bs_eq,
    bs_inv,
    bs_mul,
    eigenvalues_sym2,
    eval_nat,
    eval_rat,
    free_reduce,
    make_tower,
    mat2,
    mobius_apply,
    nat_add,
    nat_eq,
    nat_log2,
    nat_mul,
    nat_pow,
    nat_str,
    parse_ext_rational,
    parse_mat2,
    winding_growth,
    word_inv,
    word_mul,
)

ARITH = arith_signature()
RAT = rational_signature()


def ev(text):
    return eval_nat(parse_term(text, ARITH))


def rv(text):
    return eval_rat(parse_term(text, RAT))


# -- natural number evaluation ------------------------------------------------


def test_eval_nat_basics():
    assert ev("0") == 0
    assert ev("s(s(s(0)))") == 3
    assert ev("s(s(0)) * s(s(s(0)))") == 6
    assert ev("s(0) + s(s(0))") == 3
    assert ev("exp(s(s(0)), s(s(s(0))))") == 8


def test_eval_nat_open_term():
    with pytest.raises(OpenTermError):
        ev("x + 0")


def test_towers_beyond_digit_budget():
    v = make_tower(2, 10**6)
    assert isinstance(v, PowerTower)
    assert nat_str(v) == "2^(1000000)"
    assert nat_eq(v, make_tower(2, 10**6))
    assert not nat_eq(v, make_tower(2, 10**6 + 1))
    assert not nat_eq(v, 4)


def test_tower_arithmetic_laws():
    t = make_tower(2, 10**7)
    assert nat_eq(nat_mul(t, 2), make_tower(2, 10**7 + 1))
    assert nat_eq(nat_mul(t, t), make_tower(2, 2 * 10**7))
    assert nat_eq(nat_add(t, t), make_tower(2, 10**7 + 1))
    assert nat_eq(nat_pow(t, 3), make_tower(2, 3 * 10**7))
    assert nat_log2(t) == pytest.approx(10**7)
    with pytest.raises(EvalBudgetError):
        nat_add(t, 1)  # no exact representation for 2^10^7 + 1


def test_tower_base_reduction():
    # 4^k collapses onto base 2
    v = make_tower(4, 10**6)
    assert isinstance(v, PowerTower) and v.base == 2
    assert nat_eq(v, make_tower(2, 2 * 10**6))


def test_nat_pow_huge_exponent_stays_symbolic():
    e = make_tower(2, 2**40)  # exponent itself beyond exact range
    v = nat_pow(2, e)
    assert isinstance(v, PowerTower)
    assert nat_eq(v, make_tower(2, e))


def test_int_to_str_budget():
    # values inside the digit budget must print, even past the CPython default
    v = 2 ** 2 ** 14
    assert len(nat_str(v)) == 4933


# -- extended rationals --------------------------------------------------------


def test_parse_ext_rational():
    assert parse_ext_rational("3/4") == ExtRational(Fraction(3, 4))
    assert parse_ext_rational("inf") is INF or parse_ext_rational("inf").is_inf
    assert parse_ext_rational("-2") == ExtRational(Fraction(-2))


FIN = ExtRational(Fraction(5, 3))
ZERO = ExtRational(Fraction(0))


def test_defined_infinity_rules():
    # the four defined rules: inf*inf, a*inf (a != 0), 0*inf, a/inf
    assert INF.mul(INF).is_inf
    assert FIN.mul(INF).is_inf and INF.mul(FIN).is_inf
    assert ZERO.mul(INF) == ZERO and INF.mul(ZERO) == ZERO
    assert FIN.div(INF) == ZERO and ZERO.div(INF) == ZERO
    assert INF.inv() == ZERO  # 1/inf, the a=1 instance


def test_all_other_infinity_cases_undefined():
    undefined = [
        lambda: INF.add(FIN),
        lambda: FIN.add(INF),
        lambda: INF.add(INF),
        lambda: INF.neg(),
        lambda: INF.div(FIN),
        lambda: INF.div(ZERO),
        lambda: INF.div(INF),
    ]
    for f in undefined:
        with pytest.raises(UndefinedOperation):
            f()


def test_finite_partial_cases():
    with pytest.raises(UndefinedOperation):
        ZERO.inv()
    with pytest.raises(UndefinedOperation):
        FIN.div(ZERO)
    assert FIN.add(ZERO) == FIN
    assert FIN.inv() == ExtRational(Fraction(3, 5))
    assert FIN.neg() == ExtRational(Fraction(-5, 3))


def test_eval_rat_terms():
    assert rv("1 + 1") == ExtRational(Fraction(2))
    assert rv("inv(1 + 1)") == ExtRational(Fraction(1, 2))
    assert rv("neg(1) + 1") == ZERO
    assert rv("inf * (1 + 1)").is_inf
    assert rv("0 * inf") == ZERO
    with pytest.raises(UndefinedOperation):
        rv("inf + 1")
    with pytest.raises(UndefinedOperation):
        rv("inv(0)")


def test_eval_rat_reuses_interned_values():
    t = parse_term("inv(1 + 1) * inv(1 + 1)", RAT)
    assert eval_rat(t) == ExtRational(Fraction(1, 4))
    assert eval_rat(t) == ExtRational(Fraction(1, 4))  # cached path


# -- 2x2 matrices and the projective action ------------------------------------


A = mat2(2, 1, 1, 1)


def test_mat2_parse_and_str():
    assert parse_mat2("(2 1; 1 1)") == A
    assert str(A) == "(2 1; 1 1)"
    assert parse_mat2(str(mat2(Fraction(1, 2), 0, 0, 1))) == mat2(Fraction(1, 2), 0, 0, 1)


def test_mat2_power():
    assert A**2 == mat2(5, 3, 3, 2)
    assert A**4 == mat2(34, 21, 21, 13)
    assert A**0 == mat2(1, 0, 0, 1)
    got = A**16
    assert got == mat2(3524578, 2178309, 2178309, 1346269)


def test_mobius_basic():
    x0 = ExtRational(Fraction(0))
    assert mobius_apply(A, x0) == ExtRational(Fraction(1))
    assert mobius_apply(A, ExtRational(Fraction(-1))).is_inf  # denominator vanishes
    # x = inf maps to a/c
    assert mobius_apply(A, INF) == ExtRational(Fraction(2))
    rot = mat2(0, -1, 1, 0)
    assert mobius_apply(rot, INF) == ZERO


def test_mobius_homomorphism_spot():
    B = mat2(1, 1, 0, 1)
    x = ExtRational(Fraction(7, 2))
    assert mobius_apply(A * B, x) == mobius_apply(A, mobius_apply(B, x))


def test_eigenvalues_golden_mean_square():
    lam1, lam2 = eigenvalues_sym2(A)
    assert abs(lam1 - (3 + math.sqrt(5)) / 2) < 1e-12
    assert abs(lam2 - (3 - math.sqrt(5)) / 2) < 1e-12


def test_winding_growth():
    norm, ratio = winding_growth(A, (1, 0), 5)
    assert norm == 89
    lam = (3 + math.sqrt(5)) / 2
    assert ratio == pytest.approx(89 / lam**5)


# -- BS(1,2) normal forms --------------------------------------------------------


def test_bs_defining_relation():
    # y^2 = x y x^-1
    lhs = bs_mul(BS_Y, BS_Y)
    rhs = bs_mul(bs_mul(BS_X, BS_Y), bs_inv(BS_X))
    assert bs_eq(lhs, rhs)
    assert lhs == bs_element(2, 0, 0)


def test_bs_distortion_identity():
    # x^m y x^-m = y^(2^m)
    xm = BS_IDENTITY
    for m in range(8):
        conj = bs_mul(bs_mul(xm, BS_Y), bs_inv(xm))
        assert conj == bs_element(2**m, 0, 0)
        xm = bs_mul(xm, BS_X)


def test_bs_group_laws_small():
    # associativity and inverses over a small sample
    sample = [BS_IDENTITY, BS_X, BS_Y, bs_inv(BS_X), bs_element(3, 1, -2)]
    for g in sample:
        assert bs_mul(g, bs_inv(g)) == BS_IDENTITY
        assert bs_mul(BS_IDENTITY, g) == g
        for h in sample:
            for k in sample:
                assert bs_mul(bs_mul(g, h), k) == bs_mul(g, bs_mul(h, k))


def test_bs_canonical_form():
    assert bs_element(4, 2, 0) == BSElement(1, 0, 0)  # 4/2^2 = 1
    assert bs_element(6, 1, 5) == BSElement(3, 0, 5)
    assert bs_element(0, 3, 1) == BSElement(0, 0, 1)


def test_bs_oversized_powers():
    # y^a * y^a = y^(2a): dyadic parts add
    big = bs_element(make_tower(2, 10**6), 0, 0)
    assert bs_eq(bs_mul(big, big), bs_element(make_tower(2, 10**6 + 1), 0, 0))
    # conjugation by x doubles the exponent instead
    conj = bs_mul(bs_mul(BS_X, big), bs_inv(BS_X))
    assert bs_eq(conj, bs_element(make_tower(2, 10**6 + 1), 0, 0))


# -- free words -------------------------------------------------------------------


def test_free_reduce():
    assert free_reduce([("x", 1), ("x", -1)]) == ()
    assert free_reduce([("x", 2), ("x", 3)]) == (("x", 5),)
    assert word_mul((("x", 1),), (("x", -1), ("y", 2))) == (("y", 2),)
    assert word_inv((("x", 2), ("y", -1))) == (("y", 1), ("x", -2))


small_bs = st.builds(
    bs_element,
    st.integers(min_value=-12, max_value=12),
    st.integers(min_value=0, max_value=4),
    st.integers(min_value=-4, max_value=4),
)


@given(small_bs, small_bs, small_bs)
def test_bs_associativity_property(g, h, k):
    assert bs_mul(bs_mul(g, h), k) == bs_mul(g, bs_mul(h, k))


@given(small_bs)
def test_bs_inverse_property(g):
    assert bs_mul(g, bs_inv(g)) == BS_IDENTITY
    assert bs_mul(bs_inv(g), g) == BS_IDENTITY
