from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mcsp_sos.errors import BarInconsistency, NotBooleanZero, UnassignedVariable
from mcsp_sos.polynomials import (Polynomial, VarPool, bar_eliminate, boolean_points,
                                  complete_substitution, decompose_boolean_zero, evaluate,
                                  expand_witness, multilinearize, negation_axiom, parse_polynomial,
                                  substitute)

X, Y, Z = (Polynomial.var(i) for i in (1, 2, 3))

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
monos = st.lists(st.integers(1, 4), max_size=4).map(lambda l: tuple(sorted(l)))
polys = st.dictionaries(monos, coeffs, max_size=6).map(Polynomial)


def pool3():
    return VarPool([("x", 1), ("x", 2), ("x", 3)])


# ---------------------------------------------------------------- basics

def test_zero_coefficients_are_dropped():
    p = Polynomial({(1,): 1, (2,): 0})
    assert p.terms == {(1,): 1}
    assert (X - X).is_zero()


def test_fraction_coefficients_normalize_to_int():
    p = Polynomial({(1,): Fraction(4, 2)})
    assert type(p.terms[(1,)]) is int


def test_text_round_trip():
    pool = pool3()
    p = X * Y - Fraction(1, 2) * Z + 3
    text = p.to_text(pool)
    assert parse_polynomial(text, pool) == p
    assert Polynomial().to_text(pool) == "0"


@given(polys)
def test_text_round_trip_property(p):
    pool = VarPool([("x", i) for i in range(1, 5)])
    assert parse_polynomial(p.to_text(pool), pool) == p


def test_graded_lex_order_is_stable():
    pool = pool3()
    p = Z + X * Y + 1 + X
    assert p.to_text(pool) == "1 + 1*x(1) + 1*x(3) + 1*x(1)*x(2)"


# ---------------------------------------------------------------- multilinearize

def test_multilinearize_square():
    red, wit = multilinearize(X * X - X)
    assert red.is_zero()
    assert wit == [(Polynomial.const(1), 1)]


def test_multilinearize_with_cofactor():
    red, wit = multilinearize(X * X * Y - X * Y)
    assert red.is_zero()
    assert wit == [(Y, 1)]


def test_multilinearize_cube():
    p = X ** 3
    red, wit = multilinearize(p)
    assert red == X
    assert red + expand_witness(wit) == p


@given(polys)
def test_multilinearize_identity_and_idempotence(p):
    red, wit = multilinearize(p)
    assert red.is_multilinear()
    assert red + expand_witness(wit) == p
    assert multilinearize(red) == (red, [])
    for q, x in wit:
        assert q.degree() + 2 <= max(p.degree(), 2)


@given(polys)
def test_multilinearize_agrees_on_cube(p):
    red, _ = multilinearize(p)
    for pt in boolean_points(range(1, 5)):
        assert evaluate(red, pt) == evaluate(p, pt)


# ---------------------------------------------------------------- Boolean zeros

def test_decompose_examples():
    assert decompose_boolean_zero(X * X - X) == [(Polynomial.const(1), 1)]
    assert decompose_boolean_zero(Polynomial()) == []
    p = X * X * Y + X * Y * Y - 2 * X * Y
    wit = decompose_boolean_zero(p)
    assert sorted(wit, key=lambda t: t[1]) == [(Y, 1), (X, 2)]
    assert expand_witness(wit) == p


def test_decompose_rejects_nonzero():
    with pytest.raises(NotBooleanZero) as e:
        decompose_boolean_zero(X * Y - X)
    assert evaluate(X * Y - X, e.value.point) != 0


@given(polys, polys)
def test_decompose_round_trip(p, q):
    z = p * (X * X - X) + q * (Y * Y * Y - Y)
    wit = decompose_boolean_zero(z)
    assert expand_witness(wit) == z


# ---------------------------------------------------------------- evaluation

def test_evaluate_examples():
    assert evaluate(X * Y, {1: 1, 2: 1}) == 1
    pool = pool3()
    x, xb = pool.id(("x", 1)), pool.bar(pool.id(("x", 1)))
    for b in (0, 1):
        assert evaluate(negation_axiom(x, xb), {x: b, xb: 1 - b}) == 0
    par = (1 - 2 * X) * (1 - 2 * Y) * (1 - 2 * Z)
    assert evaluate(par, {1: 1, 2: 1, 3: 0}) == 1
    with pytest.raises(UnassignedVariable):
        evaluate(X * Y, {1: 1})


# ---------------------------------------------------------------- substitution

def test_substitute_examples():
    pool = pool3()
    x = pool.id(("x", 1))
    p = Polynomial.var(x) + Polynomial.var(pool.bar(x))
    assert substitute(p, {x: 1}, pool) == Polynomial.const(1)
    assert substitute(X * Y, {1: Y}) == Y
    xor = Y + Z - 2 * Y * Z
    got = substitute(1 - 2 * X, {1: xor})
    assert got == (1 - 2 * Y) * (1 - 2 * Z)


def test_bar_inconsistency():
    pool = pool3()
    x = pool.id(("x", 1))
    with pytest.raises(BarInconsistency):
        complete_substitution({x: 1, pool.bar(x): 1}, pool)
    complete_substitution({x: 1, pool.bar(x): 0}, pool)


def test_complete_substitution_maps_literals_to_bars():
    pool = pool3()
    x, y = pool.id(("x", 1)), pool.id(("x", 2))
    sig = complete_substitution({x: Polynomial.var(pool.bar(y))}, pool)
    assert sig[pool.bar(x)] == Polynomial.var(y)


def test_formal_substitution_keeps_powers():
    got = substitute(X * Y, {1: Y}, multilinear=False)
    assert got == Y * Y


booleanish = st.sampled_from([0, 1, "1*y(1)", "1*y(2)", "1 + -1*y(1)", "1*y(1)*y(2)", "1*y(1) + 1*y(2) + -2*y(1)*y(2)"])


def _img(tok):
    pool = VarPool([("y", 1), ("y", 2)])
    return tok if isinstance(tok, int) else parse_polynomial(tok, pool)


@given(polys, st.lists(booleanish, min_size=4, max_size=4), st.lists(booleanish, min_size=2, max_size=2))
def test_substitution_composes(p, rho_imgs, sig_imgs):
    # ρ: x1..x4 -> polynomials over ids 1,2 (shared), σ: ids 1,2 -> polynomials over 1,2
    rho = {i + 1: _img(t) for i, t in enumerate(rho_imgs)}
    sig = {i + 1: _img(t) for i, t in enumerate(sig_imgs)}
    once = substitute(substitute(p, rho), sig)
    comp = {v: (img if isinstance(img, int) else substitute(img, sig)) for v, img in rho.items()}
    both = substitute(p, comp)
    for pt in boolean_points([1, 2]):
        assert evaluate(once, pt) == evaluate(both, pt)


def test_bar_eliminate_identity():
    pool = pool3()
    x, y = pool.id(("x", 1)), pool.id(("x", 2))
    xb, yb = pool.bar(x), pool.bar(y)
    p = Polynomial({(x, yb): 3, (xb,): 1, (xb, yb): -2})
    q, mult = bar_eliminate(p, pool)
    assert not any(pool.is_bar(v) for v in q.variables())
    total = q
    for b, m in mult.items():
        total = total + m * negation_axiom(b, pool.bar(b))
    assert total == p
