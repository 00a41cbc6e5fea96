"""Parser, serializer, and element-expression tests.

The corpus round trip is the main contract: serializing any shipped
algebra and re-reading it gives an identical LieAlgebra, including the
optional torus and nilradical hints.  Error cases pin down positions.
"""

import pytest

from solvlie.algfile import (
    algebra_to_text,
    parse_algebra,
    parse_element_expr,
)
from solvlie.corpus import CORPUS_NAMES, corpus_algebra
from solvlie.errors import (
    DuplicateBracket,
    JacobiViolation,
    ParseError,
    UnknownLabel,
)
from solvlie.linalg import eigenvalues
from solvlie.scalars import Fraction, param, scalar_params


def test_round_trip_corpus():
    for name in CORPUS_NAMES:
        g = corpus_algebra(name)
        h = parse_algebra(algebra_to_text(g))
        assert h == g, name
        assert h.name == g.name
        assert h.torus_hint == g.torus_hint
        assert h.nilradical_hint == g.nilradical_hint


def test_parse_minimal():
    g = parse_algebra("basis: X Y\n[X,Y] = Y\n")
    assert g.labels == ("X", "Y")
    assert g.table == {(0, 1): (Fraction(0), Fraction(1))}
    assert g.radicand is None
    assert g.name is None


def test_parse_reversed_pair_negates():
    a = parse_algebra("basis: X Y Z\n[X,Y] = Z\n")
    b = parse_algebra("basis: X Y Z\n[Y,X] = -Z\n")
    assert a == b


def test_parse_quad_field_tag():
    g = parse_algebra("field: quad:-2\nbasis: A B\n[A,B] = 3B\n")
    assert g.radicand == -2


def test_example43_torus_spectrum():
    g = corpus_algebra("example43")
    linear, quads = eigenvalues(g.ad((0, 1, 0, 0)))
    assert not quads
    assert dict(linear) == {
        Fraction(0): 1,
        Fraction(2): 1,
        Fraction(-3): 1,
        Fraction(-1): 1,
    }


#----------------------------------------------------------------------------
# element expressions

def test_element_simple():
    g = corpus_algebra("heisenberg")
    assert parse_element_expr(g, "X + 2Y") == (1, 2, 0)
    assert parse_element_expr(g, "X + 2*Y") == (1, 2, 0)
    assert parse_element_expr(g, "-Z") == (0, 0, -1)
    assert parse_element_expr(g, "1/2*X - 3/4*Z") == (
        Fraction(1, 2),
        0,
        Fraction(-3, 4),
    )
    assert parse_element_expr(g, "0") == (0, 0, 0)
    assert parse_element_expr(g, "X - X") == (0, 0, 0)


def test_element_parameters_autodeclared():
    g = corpus_algebra("example43")
    v = parse_element_expr(g, "e1 + c*e3 + d*e4")
    assert v[0] == 1 and v[1] == 0
    assert scalar_params(v[2]) == {"c"}
    assert scalar_params(v[3]) == {"d"}
    w = parse_element_expr(g, "k/2*e1")
    assert w[0] == param("k") / 2


def test_element_unknown_label():
    g = corpus_algebra("heisenberg")
    with pytest.raises(UnknownLabel):
        parse_element_expr(g, "X + Q")


def test_element_rejections():
    g = corpus_algebra("heisenberg")
    with pytest.raises(ParseError):
        parse_element_expr(g, "X * Y")  # label as coefficient
    with pytest.raises(ParseError):
        parse_element_expr(g, "2")  # no label
    with pytest.raises(ParseError):
        parse_element_expr(g, "X +")  # dangling operator
    with pytest.raises(ParseError):
        parse_element_expr(g, "X @ Y")  # bad character
    with pytest.raises(ParseError):
        parse_element_expr(g, "1.5*X")  # no decimal literals
    with pytest.raises(ParseError):
        parse_element_expr(g, "X Y")  # missing operator


#----------------------------------------------------------------------------
# file-level errors

def test_bracket_before_basis():
    with pytest.raises(ParseError) as info:
        parse_algebra("[X,Y] = Y\nbasis: X Y\n")
    assert info.value.line == 1


def test_unknown_header():
    with pytest.raises(ParseError):
        parse_algebra("flavor: strange\nbasis: X Y\n")


def test_duplicate_bracket_same_order():
    text = "basis: X Y Z\n[X,Y] = Z\n[X,Y] = -Z\n"
    with pytest.raises(DuplicateBracket) as info:
        parse_algebra(text)
    assert info.value.line == 3


def test_duplicate_bracket_reversed_order():
    text = "basis: X Y Z\n[X,Y] = Z\n[Y,X] = -Z\n"
    with pytest.raises(DuplicateBracket):
        parse_algebra(text)


def test_bracket_with_itself():
    with pytest.raises(ParseError):
        parse_algebra("basis: X Y\n[X,X] = Y\n")


def test_unknown_label_in_bracket():
    with pytest.raises(UnknownLabel) as info:
        parse_algebra("basis: X Y\n[X,W] = Y\n")
    assert info.value.line == 2


def test_parameters_rejected_in_files():
    with pytest.raises(ParseError):
        parse_algebra("basis: X Y\n[X,Y] = k*Y\n")


def test_jacobi_violation_with_witness():
    text = (
        "basis: e1 e2 e3 e4\n"
        "[e1,e2] = -2*e1\n"
        "[e1,e3] = -e3\n"  # tampered: the true table has -e4 here
        "[e2,e3] = -3*e3\n"
        "[e2,e4] = -e4\n"
    )
    with pytest.raises(JacobiViolation) as info:
        parse_algebra(text)
    assert info.value.args[1] == (0, 1, 2)


def test_error_column_positions():
    with pytest.raises(ParseError) as info:
        parse_algebra("basis: X Y\n[X,Y] $ Y\n")
    assert (info.value.line, info.value.col) == (2, 7)
