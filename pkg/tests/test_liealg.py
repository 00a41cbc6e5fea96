"""Structure-level checks for LieAlgebra on the shipped corpus.

Golden values (series dimensions, centers, normalizers, quotient
tables) were derived by hand from the bracket tables; each is small
enough to verify by direct computation on paper.  Randomized checks
(antisymmetry, Jacobi stability under complexification round trips)
use a fixed seed.
"""

import random
from fractions import Fraction

import pytest

from solvlie.algfile import parse_algebra, parse_element_expr
from solvlie.errors import (
    AlreadyComplex,
    NotAnIdeal,
    NotASubalgebra,
    NotSolvable,
    ParameterizedQuotientUnsupported,
)
from solvlie.liealg import LieAlgebra, ensure_solvable
from solvlie.linalg import Matrix, Subspace
from solvlie.scalars import param, reset_params

from solvlie.corpus import CORPUS_NAMES, corpus_algebra

rng = random.Random(46103)


def spanv(g, *texts):
    vectors = [parse_element_expr(g, t) for t in texts]
    space, splits = Subspace.span(vectors, g.dim)
    return space


def rand_vec(g):
    return tuple(
        Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(g.dim)
    )


#----------------------------------------------------------------------------
# bracket basics

def test_bracket_bilinear_golden():
    g = corpus_algebra("lemma3d")
    k = param("k")
    x = parse_element_expr(g, "X")
    y = (Fraction(0), Fraction(1), k)  # Y + k*Z
    assert g.bracket(x, y) == (0, 1, 2 * k)


def test_bracket_antisymmetry_random():
    for name in CORPUS_NAMES:
        g = corpus_algebra(name)
        for _ in range(10):
            x, y = rand_vec(g), rand_vec(g)
            lhs = g.bracket(x, y)
            rhs = g.bracket(y, x)
            assert all(a == -b for a, b in zip(lhs, rhs))


def test_ad_matrix_example43_is_diagonal_on_torus():
    g = corpus_algebra("example43")
    ad = g.ad(parse_element_expr(g, "e2"))
    expect = Matrix(
        [(2, 0, 0, 0), (0, 0, 0, 0), (0, 0, -3, 0), (0, 0, 0, -1)]
    )
    assert ad == expect


def test_jacobi_clean_on_corpus():
    for name in CORPUS_NAMES:
        assert corpus_algebra(name).jacobi_check() is None


def test_jacobi_witness_on_tampered_table():
    g = LieAlgebra(
        ("e1", "e2", "e3", "e4"),
        {
            (0, 1): (-2, 0, 0, 0),
            (0, 2): (0, 0, -1, 0),  # should be -e4; breaks Jacobi
            (1, 2): (0, 0, -3, 0),
            (1, 3): (0, 0, 0, -1),
        },
    )
    assert g.jacobi_check() == (0, 1, 2)


def test_structure_constants_reject_parameters():
    k = param("k")
    with pytest.raises(ValueError):
        LieAlgebra(("X", "Y"), {(0, 1): (0, k)})


#----------------------------------------------------------------------------
# series, center, solvability

SERIES_GOLDEN = {
    # name: (derived dims, lower central dims, nilpotent?)
    "lemma2d": ((2, 1, 0), (2, 1), False),
    "lemma3d": ((3, 2, 0), (3, 2), False),
    "example41": ((3, 2, 0), (3, 2), False),
    "remark41": ((3, 2, 0), (3, 2), False),
    "heisenberg": ((3, 1, 0), (3, 1, 0), True),
    "example43": ((4, 3, 1, 0), (4, 3), False),
    "example44a": ((4, 3, 1, 0), (4, 3), False),
    "example44b": ((5, 4, 2, 0), (5, 4), False),
}


def test_series_golden():
    for name, (derived, lower, nilp) in SERIES_GOLDEN.items():
        g = corpus_algebra(name)
        assert tuple(s.dim for s in g.derived_series()) == derived, name
        assert tuple(s.dim for s in g.lower_central_series()) == lower, name
        assert g.is_solvable(), name
        assert g.is_nilpotent() == nilp, name


def test_center_golden():
    assert corpus_algebra("heisenberg").center() == spanv(
        corpus_algebra("heisenberg"), "Z"
    )
    assert corpus_algebra("lemma3d").center().dim == 0
    assert corpus_algebra("example43").center().dim == 0
    g = corpus_algebra("example44a")
    assert g.center() == spanv(g, "C")


def test_not_solvable_raises():
    so3 = LieAlgebra(
        ("X", "Y", "Z"),
        {(0, 1): (0, 0, 1), (1, 2): (1, 0, 0), (0, 2): (0, -1, 0)},
    )
    assert so3.jacobi_check() is None
    assert not so3.is_solvable()
    with pytest.raises(NotSolvable):
        ensure_solvable(so3)


def test_centralizer_heisenberg():
    g = corpus_algebra("heisenberg")
    assert g.centralizer(spanv(g, "X")) == spanv(g, "X", "Z")
    assert g.centralizer(Subspace.full(3)) == spanv(g, "Z")


#----------------------------------------------------------------------------
# subalgebra and ideal predicates, normalizers

def test_lines_are_subalgebras():
    g = corpus_algebra("example43")
    for _ in range(5):
        line, _ = Subspace.span([rand_vec(g)], g.dim)
        assert g.is_subalgebra(line)


def test_ideal_predicates_lemma3d():
    g = corpus_algebra("lemma3d")
    assert g.is_ideal(spanv(g, "Y", "Z"))
    assert g.is_ideal(spanv(g, "Y"))
    assert g.is_ideal(spanv(g, "Z"))
    assert g.is_subalgebra(spanv(g, "X"))
    assert not g.is_ideal(spanv(g, "X"))
    k = param("k")
    line, _ = Subspace.span([(Fraction(0), Fraction(1), k)], 3)
    assert not g.is_ideal(line)


def test_parameterized_ideal_family_heisenberg():
    g = corpus_algebra("heisenberg")
    k = param("k")
    member, _ = Subspace.span(
        [(Fraction(1), k, Fraction(0)), (Fraction(0), Fraction(0), Fraction(1))], 3
    )
    assert g.is_ideal(member)


def test_normalizer_golden():
    g = corpus_algebra("lemma3d")
    assert g.normalizer(spanv(g, "X")) == spanv(g, "X")
    assert g.normalizer(spanv(g, "Y + Z")) == spanv(g, "Y", "Z")
    assert g.normalizer(spanv(g, "Y")) == Subspace.full(3)
    h = corpus_algebra("example43")
    assert h.normalizer(spanv(h, "e1")) == spanv(h, "e1", "e2", "e4")
    assert h.normalizer(spanv(h, "e2")) == spanv(h, "e2")


def test_normalizer_requires_subalgebra():
    g = corpus_algebra("example41")
    with pytest.raises(NotASubalgebra):
        g.normalizer(spanv(g, "X", "Y"))


def test_normalizer_of_parameterized_family():
    g = corpus_algebra("heisenberg")
    k = param("k")
    line, _ = Subspace.span([(Fraction(1), k, Fraction(0))], 3)
    n = g.normalizer(line)
    assert n.dim == 2
    assert n.contains((Fraction(1), k, Fraction(0)))
    assert n.contains((Fraction(0), Fraction(0), Fraction(1)))


#----------------------------------------------------------------------------
# quotients and restrictions

def test_quotient_lemma3d_mod_y():
    g = corpus_algebra("lemma3d")
    q = g.quotient(spanv(g, "Y"))
    assert q.algebra.labels == ("X~", "Z~")
    assert q.algebra.table == {(0, 1): (Fraction(0), Fraction(2))}
    v = parse_element_expr(g, "X + 3Y - Z")
    assert q.project(v) == (1, -1)
    assert q.project(q.lift((Fraction(2), Fraction(5)))) == (2, 5)


def test_quotient_rejects_non_ideal():
    g = corpus_algebra("lemma3d")
    with pytest.raises(NotAnIdeal):
        g.quotient(spanv(g, "X"))


def test_quotient_rejects_parameterized_base():
    g = corpus_algebra("heisenberg")
    k = param("k")
    member, _ = Subspace.span(
        [(Fraction(1), k, Fraction(0)), (Fraction(0), Fraction(0), Fraction(1))], 3
    )
    with pytest.raises(ParameterizedQuotientUnsupported):
        g.quotient(member)


def test_restriction_example43_normalizer():
    g = corpus_algebra("example43")
    r = g.restriction(spanv(g, "e1", "e2", "e4"))
    assert r.algebra.labels == ("e1", "e2", "e4")
    assert r.algebra.table == {
        (0, 1): (Fraction(-2), Fraction(0), Fraction(0)),
        (1, 2): (Fraction(0), Fraction(0), Fraction(-1)),
    }
    assert r.to_sub(parse_element_expr(g, "e1 - e4")) == [1, 0, -1]
    back = r.to_ambient((Fraction(1), Fraction(0), Fraction(-1)))
    assert back == parse_element_expr(g, "e1 - e4")


def test_restriction_rejects_non_subalgebra():
    g = corpus_algebra("example41")
    with pytest.raises(NotASubalgebra):
        g.restriction(spanv(g, "X", "Y"))


#----------------------------------------------------------------------------
# complexification and real points

def test_complexify_guard():
    g = corpus_algebra("example41")
    gc = g.complexify()
    assert gc.radicand == -1
    with pytest.raises(AlreadyComplex):
        gc.complexify()


def test_real_points_of_complex_eigenline_is_zero():
    g = corpus_algebra("example41").complexify()
    from solvlie.scalars import quad

    i = quad(0, 1, -1)
    eigline, _ = Subspace.span([(Fraction(0), Fraction(1), i)], 3)
    ad = g.ad(parse_element_expr(g, "X"))
    image = ad.matvec(eigline.rows[0])
    assert image == tuple(-i * e for e in eigline.rows[0])
    assert g.real_points(eigline).dim == 0
    pair = eigline.add(g.conjugate_space(eigline))
    assert g.real_points(pair) == spanv(g, "Y", "Z")


def test_complexify_then_real_points_is_identity():
    for name in CORPUS_NAMES:
        g = corpus_algebra(name)
        gc = g.complexify()
        for _ in range(25):
            k = rng.randint(0, g.dim)
            vecs = [rand_vec(g) for _ in range(k)]
            space, _ = Subspace.span(vecs, g.dim)
            assert gc.real_points(space) == space, name
