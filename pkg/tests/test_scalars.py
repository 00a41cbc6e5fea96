"""Scalar tower tests.

The canonical-form and gcd claims are checked against an independent
oracle: evaluation at random rational points.  Two rational functions in
canonical form are equal iff they agree as functions, so pointwise
agreement at enough points plus structural equality of the canonical pair
is a sound cross-check.
"""

import math
import random
from fractions import Fraction

import pytest
import sympy

from solvlie.errors import (
    DivisionByZero,
    IncompatibleRadicands,
    NotRealValued,
    DenominatorVanishes,
)
from solvlie.scalars import (
    Quad, quad, Poly, RatFunc, Cond,
    as_scalar, param, evaluate_at, scalar_subs, scalar_to_text,
    sign_of, is_provably_nonzero, compare_real,
    squarefree_core, rational_sqrt, quad_sqrt,
    poly_gcd, poly_divexact, conjugate_scalar,
    fresh_param, reset_params,
)

rng = random.Random(20240817)


def rand_frac(span=9):
    n = rng.randint(-span, span)
    d = rng.randint(1, span)
    return Fraction(n, d)


def rand_quad(d=2):
    return quad(rand_frac(), rng.choice([1, -1]) * Fraction(rng.randint(1, 5)), d)


def rand_poly(names=("k", "l"), terms=3, deg=2):
    p = Poly.zero()
    for _ in range(terms):
        m = Poly.const(rand_frac())
        for n in names:
            m = m * Poly.var(n) ** rng.randint(0, deg)
        p = p + m
    return p


def rand_ratfunc():
    num = rand_poly()
    den = Poly.zero()
    while den.is_zero():
        den = rand_poly(terms=2, deg=1)
    return as_scalar(num) / as_scalar(den)


def eval_or_none(x, env):
    try:
        return evaluate_at(x, env)
    except DenominatorVanishes:
        return None


#----------------------------------------------------------------------------
# integers and square roots

def test_squarefree_core_splits_square_part():
    for n in list(range(-50, 0)) + list(range(1, 200)):
        core, s = squarefree_core(n)
        assert core * s * s == n
        assert all(e == 1 for e in sympy.factorint(abs(core)).values())


def test_rational_sqrt():
    assert rational_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert rational_sqrt(Fraction(2)) is None
    assert rational_sqrt(Fraction(-4)) is None
    assert rational_sqrt(Fraction(0)) == 0


def test_quad_sqrt_roundtrip():
    for _ in range(60):
        r = rand_quad(d=rng.choice([2, 3, 5, -1]))
        z = r * r
        s = quad_sqrt(z) if isinstance(z, Quad) else quad_sqrt(z, d=r.d)
        assert s is not None
        assert s * s == z
    assert quad_sqrt(Fraction(-1), d=-1) == quad(0, 1, -1)
    assert quad_sqrt(quad(0, 1, 2)) is None  # sqrt(sqrt(2)) leaves the field


#----------------------------------------------------------------------------
# Quad level

def test_quad_factory_normalizes():
    assert quad(3, 0, 5) == Fraction(3)
    assert quad(0, 1, 8) == Quad(0, 2, 2)
    assert quad(0, 1, 4) == Fraction(2)
    assert quad(1, Fraction(1, 2), 12) == Quad(1, 1, 3)
    with pytest.raises(ValueError):
        quad(0, 1, 0)


def test_quad_field_axioms_random():
    for _ in range(200):
        x, y, z = rand_quad(), rand_quad(), rand_quad()
        assert (x + y) + z == x + (y + z)
        assert x * (y + z) == x * y + x * z
        assert (x * y) * z == x * (y * z)
        assert x + (-x) == 0
        assert (x / y) * y == x
    one = Fraction(1)
    x = rand_quad()
    assert x * one == x and x + 0 == x


def test_quad_matches_float_arithmetic():
    s2 = math.sqrt(2)
    for _ in range(100):
        x, y = rand_quad(), rand_quad()
        fx = float(x.a) + float(x.b) * s2
        fy = float(y.a) + float(y.b) * s2
        for got, want in (
            (x + y, fx + fy), (x * y, fx * fy), (x - y, fx - fy),
            (x / y, fx / fy),
        ):
            gf = (float(got) if isinstance(got, Fraction)
                  else float(got.a) + float(got.b) * s2)
            assert gf == pytest.approx(want, rel=1e-9)


def test_quad_norm_multiplicative():
    for _ in range(100):
        x, y = rand_quad(3), rand_quad(3)
        p = x * y
        np_ = p.norm() if isinstance(p, Quad) else p * p
        assert np_ == x.norm() * y.norm()


def test_quad_conjugate_is_ring_map():
    x, y = rand_quad(5), rand_quad(5)
    assert conjugate_scalar(x * y) == conjugate_scalar(x) * conjugate_scalar(y)
    assert conjugate_scalar(x + y) == conjugate_scalar(x) + conjugate_scalar(y)


def test_quad_radicand_mixing_raises():
    with pytest.raises(IncompatibleRadicands):
        quad(0, 1, 2) + quad(0, 1, 3)
    with pytest.raises(IncompatibleRadicands):
        quad(1, 1, -1) * quad(1, 1, 5)


def test_quad_division_by_zero():
    with pytest.raises(DivisionByZero):
        quad(1, 1, 2) / Fraction(0)


#----------------------------------------------------------------------------
# polynomials

def test_poly_divexact_inverts_multiplication():
    for _ in range(40):
        f = rand_poly()
        g = Poly.zero()
        while g.is_zero():
            g = rand_poly(terms=2)
        assert poly_divexact(f * g, g) == f
    with pytest.raises(ValueError):
        poly_divexact(Poly.var("k"), Poly.var("l"))


def test_poly_gcd_common_factor():
    k = Poly.var("k")
    h = k * k - 1
    f = h * (k + 3)
    g = h * (k * k + 2)
    got = poly_gcd(f, g)
    assert got == h.monic()
    # oracle: the gcd divides both inputs and the cofactors are coprime
    assert poly_divexact(f, got) == k + 3


def test_poly_gcd_multivariate():
    k, l = Poly.var("k"), Poly.var("l")
    h = k + l
    got = poly_gcd(h * (k - l), h * l * 2)
    assert got == h
    assert poly_gcd(k * l, Poly.const(3)) == Poly.one()


def test_poly_gcd_quad_coefficients():
    # over Q(sqrt(2)) the polynomial k**2 - 2 splits
    k = Poly.var("k")
    r2 = quad(0, 1, 2)
    f = (k - Poly.const(r2)) * (k + 1)
    g = (k - Poly.const(r2)) * (k + 2)
    assert poly_gcd(f, g) == k - Poly.const(r2)


#----------------------------------------------------------------------------
# rational functions

def test_ratfunc_cancels_to_polynomial():
    k = param("k")
    x = (k * k - 1) / (k - 1)
    assert isinstance(x, RatFunc)
    assert x == k + 1
    # independent oracle: agree pointwise away from the cancelled pole
    for v in (2, 3, Fraction(7, 2), -5):
        assert evaluate_at(x, {"k": Fraction(v)}) == Fraction(v) + 1


def test_ratfunc_demotes_constants():
    k = param("k")
    assert k / k == 1 and isinstance(k / k, Fraction)
    assert k - k == 0
    assert (k + 1) * 0 == 0
    assert isinstance((2 * k + 2) / (k + 1), Fraction)


def test_ratfunc_monic_denominator():
    k, l = param("k"), param("l")
    x = k / (2 * l)
    assert isinstance(x, RatFunc)
    assert x.den.leading()[1] == 1
    y = (k + 1) / (3 - k)
    assert y.den.leading()[1] == 1
    # sqrt(2)*x/x style quotients must land on the same representative
    r2 = quad(0, 1, 2)
    a = (r2 * k) / (r2 * l)
    assert a == k / l


def test_ratfunc_field_axioms_random():
    for _ in range(60):
        x, y, z = rand_ratfunc(), rand_ratfunc(), rand_ratfunc()
        assert (x + y) + z == x + (y + z)
        assert x * (y + z) == x * y + x * z
        if not (isinstance(y, Fraction) and y == 0):
            assert (x / y) * y == x


def test_ratfunc_matches_pointwise_oracle():
    for _ in range(40):
        x, y = rand_ratfunc(), rand_ratfunc()
        got = x * y + x
        for _ in range(5):
            env = {"k": rand_frac(), "l": rand_frac()}
            vals = [eval_or_none(t, env) for t in (x, y, got)]
            if None in vals:
                continue
            assert vals[2] == vals[0] * vals[1] + vals[0]


def test_scalar_subs_partial():
    k, l = param("k"), param("l")
    x = (k + l) / k
    y = scalar_subs(x, {"l": Fraction(1)})
    assert y == (k + 1) / k
    z = scalar_subs(x, {"l": param("m") ** 2})
    assert evaluate_at(z, {"k": Fraction(1), "m": Fraction(2)}) == 5


def test_substitution_into_vanishing_denominator():
    k = param("k")
    with pytest.raises(DenominatorVanishes):
        scalar_subs(1 / (k - 1), {"k": Fraction(1)})
    with pytest.raises(DivisionByZero):
        (param("k") + 1) / 0


#----------------------------------------------------------------------------
# signs

def test_sign_of_constants():
    assert sign_of(Fraction(3, 2)) == "pos"
    assert sign_of(Fraction(0)) == "zero"
    assert sign_of(Fraction(-1)) == "neg"
    # 3 - 2*sqrt(2) > 0 but 3 - 2*sqrt(3) < 0
    assert sign_of(quad(3, -2, 2)) == "pos"
    assert sign_of(quad(3, -2, 3)) == "neg"
    assert sign_of(quad(0, 1, 5)) == "pos"
    with pytest.raises(NotRealValued):
        sign_of(quad(1, 1, -1))


def test_sign_of_polynomials():
    k = param("k")
    assert sign_of(k) == "unknown"
    assert sign_of(k ** 2) == "nonneg"
    assert sign_of(k ** 2 + 1) == "pos"
    assert sign_of(-(k ** 2) - 3) == "neg"
    assert sign_of(k ** 2, [Cond("nonzero", k)]) == "pos"
    assert sign_of(k ** 3, [Cond("pos", k)]) == "pos"
    assert sign_of(2 * k, [Cond("neg", k)]) == "neg"
    assert sign_of(k, [Cond("zero", k)]) == "zero"


def test_sign_of_uses_assumed_expressions():
    k, l = param("k"), param("l")
    c = k * l + 1
    assert sign_of(3 * c, [Cond("nonzero", c)]) == "nonzero"
    assert sign_of(-c, [Cond("pos", c)]) == "neg"
    assert sign_of(c, []) == "unknown"


def test_is_provably_nonzero_field_awareness():
    k = param("k")
    assert is_provably_nonzero(k ** 2 + 1, real=True)
    # k**2 + 1 vanishes at k = i, so it is not a unit over the complexified field
    assert not is_provably_nonzero(k ** 2 + 1, real=False)
    assert is_provably_nonzero(k, [Cond("nonzero", k)], real=False)
    assert is_provably_nonzero(k ** 2, [Cond("nonzero", k)], real=False)
    assert not is_provably_nonzero(k, real=True)
    assert is_provably_nonzero(quad(1, 1, -1), real=False)


def test_compare_real():
    assert compare_real(quad(0, 1, 2), Fraction(1)) == 1
    assert compare_real(Fraction(1), Fraction(1)) == 0
    with pytest.raises(ValueError):
        compare_real(param("k"), Fraction(0))


#----------------------------------------------------------------------------
# text

def test_scalar_text_forms():
    k, l = param("k"), param("l")
    assert scalar_to_text(Fraction(-3, 4)) == "-3/4"
    assert scalar_to_text(quad(1, -2, 5)) == "1 - 2*sqrt(5)"
    assert scalar_to_text(quad(0, 1, 2)) == "sqrt(2)"
    assert scalar_to_text(k ** 2 - k * l + 2) == "k^2 - k*l + 2"
    assert scalar_to_text((k + 1) / (k - 1)) == "(k + 1)/(k - 1)"
    assert scalar_to_text(quad(1, 1, 2) * k) == "(1 + sqrt(2))*k"


def test_fresh_param_counter():
    reset_params()
    assert fresh_param("t") == "t1"
    assert fresh_param("t") == "t2"
    assert fresh_param("t", avoid={"t3"}) == "t4"
    reset_params()
    assert fresh_param("t") == "t1"
