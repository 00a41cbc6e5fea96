"""Reading and writing algebra description files.

An ``.alg`` file is a line oriented text format::

    # symmetry algebra of the one dimensional heat flow, solvable part
    name: example43
    field: rational
    basis: e1 e2 e3 e4
    [e1,e2] = -2*e1
    [e1,e3] = -e4
    [e2,e3] = -3*e3
    [e2,e4] = -e4
    torus: e2
    nilradical: e1 e3 e4

Rules:

* ``#`` starts a comment that runs to the end of the line.
* ``basis:`` must precede every bracket line; labels are identifiers.
* ``field:`` is ``rational`` (default) or ``quad:d`` for a squarefree
  integer ``d``; structure constants in the file are always rational.
* A bracket line gives ``[A,B] = `` a linear combination of basis
  labels with rational coefficients (``2*e1``, ``-e4``, ``1/2*e3``,
  juxtaposition ``2e1`` is accepted).  Omitted pairs are zero.  Giving
  the same unordered pair twice, in either order, is an error.
* ``torus:`` and ``nilradical:`` are optional label lists recorded as
  hints for torus alignment; they do not change the algebra.

Parsed algebras are Jacobi checked on load.  Element expressions reuse
the bracket right-hand-side grammar, except that unknown identifiers in
coefficient position become parameters (``c*e3``), while an unknown
identifier in basis position is an error.
"""

import re
from fractions import Fraction

from .errors import DuplicateBracket, JacobiViolation, ParseError, UnknownLabel
from .liealg import LieAlgebra
from .linalg import vec_to_text
from .scalars import param

__all__ = [
    "parse_algebra",
    "parse_algebra_file",
    "parse_element_expr",
    "algebra_to_text",
]

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER_RE = re.compile(r"[0-9]+")
_SYMBOLS = "[],=+-*/:"


def _tokenize(text, line):
    """List of (kind, value, col) with 1-based columns; kinds: ident,
    number, or the symbol itself."""
    tokens = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch == "#":
            break
        if ch.isspace():
            pos += 1
            continue
        m = _IDENT_RE.match(text, pos)
        if m:
            tokens.append(("ident", m.group(), pos + 1))
            pos = m.end()
            continue
        m = _NUMBER_RE.match(text, pos)
        if m:
            tokens.append(("number", int(m.group()), pos + 1))
            pos = m.end()
            continue
        if ch in _SYMBOLS:
            tokens.append((ch, ch, pos + 1))
            pos += 1
            continue
        raise ParseError("unexpected character %r" % ch, line, pos + 1)
    return tokens


#----------------------------------------------------------------------------
# element expressions

def _parse_combination(tokens, labels, line, allow_params):
    """Coordinate list over the labels from a token stream.

    Grammar: one or more terms joined by + or -; each term is a product
    of factors joined by * (a number may also be juxtaposed in front of
    a label, as in 2e1); the last factor must be a basis label and the
    rest multiply into the coefficient.  A factor is a number, a
    rational division (k/2, 3/4), or an identifier; identifiers in
    coefficient position are parameters when allowed.
    """
    n = len(labels)
    index = {lab: k for k, lab in enumerate(labels)}
    out = [Fraction(0)] * n
    pos = 0

    if not tokens:
        raise ParseError("empty expression", line, 1)
    if len(tokens) == 1 and tokens[0][0] == "number" and tokens[0][1] == 0:
        return out

    def fail(msg, tok=None):
        col = tok[2] if tok is not None else (tokens[-1][2] if tokens else 1)
        raise ParseError(msg, line, col)

    while pos < len(tokens):
        sign = 1
        if tokens[pos][0] in "+-":
            if tokens[pos][0] == "-":
                sign = -1
            pos += 1
        atoms = []
        expect_atom = True
        while pos < len(tokens):
            kind, value, col = tokens[pos]
            if expect_atom:
                if kind == "number":
                    atoms.append(("number", Fraction(value), col))
                elif kind == "ident":
                    atoms.append(("ident", value, col))
                else:
                    fail("expected a number or identifier", tokens[pos])
                pos += 1
                expect_atom = False
                continue
            if kind == "/":
                if pos + 1 >= len(tokens) or tokens[pos + 1][0] != "number":
                    fail("expected an integer after /", tokens[pos])
                den = tokens[pos + 1][1]
                if den == 0:
                    fail("division by zero", tokens[pos + 1])
                akind, avalue, acol = atoms[-1]
                if akind == "number":
                    atoms[-1] = ("number", avalue / den, acol)
                else:
                    atoms.append(("number", Fraction(1, den), acol))
                pos += 2
                continue
            if kind == "*":
                pos += 1
                expect_atom = True
                continue
            if kind == "ident" and atoms[-1][0] == "number":
                # juxtaposition such as 2e1
                atoms.append(("ident", value, col))
                pos += 1
                continue
            break
        if expect_atom:
            fail("dangling operator")
        last = atoms[-1]
        if last[0] != "ident":
            fail("every term must end in a basis label", last)
        if last[1] not in index:
            raise UnknownLabel("unknown basis label %r" % last[1], line, last[2])
        coeff = Fraction(sign)
        for akind, avalue, acol in atoms[:-1]:
            if akind == "number":
                coeff = coeff * avalue
            else:
                if avalue in index:
                    raise ParseError(
                        "basis label %r used as a coefficient" % avalue, line, acol
                    )
                if not allow_params:
                    raise ParseError(
                        "parameters are not allowed here (%r)" % avalue, line, acol
                    )
                coeff = coeff * param(avalue)
        out[index[last[1]]] = out[index[last[1]]] + coeff
        if pos < len(tokens) and tokens[pos][0] not in "+-":
            fail("expected + or - between terms", tokens[pos])
    return out


def parse_element_expr(g, text, line=None):
    """Exact coordinate tuple of a linear combination of basis labels.

    Identifiers that are not basis labels are accepted in coefficient
    position (before ``*``) and declared as parameters.
    """
    tokens = _tokenize(text, line)
    return tuple(_parse_combination(tokens, g.labels, line, allow_params=True))


#----------------------------------------------------------------------------
# algebra files

_HEADER_KEYS = ("name", "field", "basis", "torus", "nilradical")


def _header_labels(tokens, lineno, what):
    labels = []
    for kind, value, col in tokens:
        if kind != "ident":
            raise ParseError("expected a label list after %s:" % what, lineno, col)
        labels.append(value)
    if not labels:
        raise ParseError("empty label list after %s:" % what, lineno, 1)
    return labels


def _parse_field(tokens, lineno):
    if len(tokens) == 1 and tokens[0][0] == "ident" and tokens[0][1] == "rational":
        return None
    # quad:d with d a possibly negative integer
    if (
        len(tokens) >= 3
        and tokens[0][0] == "ident"
        and tokens[0][1] == "quad"
        and tokens[1][0] == ":"
    ):
        rest = tokens[2:]
        sign = 1
        if rest and rest[0][0] == "-":
            sign = -1
            rest = rest[1:]
        if len(rest) == 1 and rest[0][0] == "number":
            d = sign * rest[0][1]
            if d in (0, 1):
                raise ParseError("quad radicand must not be 0 or 1", lineno, tokens[2][2])
            return d
    raise ParseError(
        "field must be 'rational' or 'quad:d'", lineno, tokens[0][2] if tokens else 1
    )


def parse_algebra(text, name=None):
    """LieAlgebra from ``.alg`` source text."""
    headers = {}
    labels = None
    radicand = None
    pairs = {}
    hint_tokens = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = _tokenize(raw, lineno)
        if not tokens:
            continue
        kind, value, col = tokens[0]
        if kind == "ident" and len(tokens) >= 2 and tokens[1][0] == ":":
            if value not in _HEADER_KEYS:
                raise ParseError("unknown header %r" % value, lineno, col)
            if value in headers:
                raise ParseError("repeated header %r" % value, lineno, col)
            headers[value] = lineno
            body = tokens[2:]
            if value == "name":
                if len(body) != 1 or body[0][0] != "ident":
                    raise ParseError("name must be one identifier", lineno, col)
                name = body[0][1]
            elif value == "field":
                radicand = _parse_field(body, lineno)
            elif value == "basis":
                labels = _header_labels(body, lineno, "basis")
                if len(set(labels)) != len(labels):
                    raise ParseError("repeated basis label", lineno, col)
            else:
                hint_tokens[value] = (lineno, body)
            continue
        if kind == "[":
            if labels is None:
                raise ParseError("bracket line before basis line", lineno, col)
            _parse_bracket_line(tokens, labels, lineno, pairs)
            continue
        raise ParseError("expected a header or bracket line", lineno, col)

    if labels is None:
        raise ParseError("missing basis line", len(text.splitlines()) or 1, 1)

    table = {}
    for (i, j), (lineno, coeffs, negate) in pairs.items():
        table[(i, j)] = tuple(-c if negate else c for c in coeffs)
    g = LieAlgebra(labels, table, radicand=radicand, name=name)

    witness = g.jacobi_check()
    if witness is not None:
        i, j, k = witness
        raise JacobiViolation(
            "Jacobi identity fails on (%s, %s, %s)"
            % (labels[i], labels[j], labels[k]),
            witness,
        )

    index = {lab: k for k, lab in enumerate(labels)}
    for what, (lineno, body) in hint_tokens.items():
        hint = []
        for lab in _header_labels(body, lineno, what):
            if lab not in index:
                raise UnknownLabel("unknown basis label %r" % lab, lineno, 1)
            hint.append(index[lab])
        if what == "torus":
            g.torus_hint = tuple(hint)
        else:
            g.nilradical_hint = tuple(hint)
    return g


def _parse_bracket_line(tokens, labels, lineno, pairs):
    def expect(pos, kind, what):
        if pos >= len(tokens) or tokens[pos][0] != kind:
            col = tokens[pos][2] if pos < len(tokens) else tokens[-1][2]
            raise ParseError("expected %s" % what, lineno, col)
        return tokens[pos]

    expect(0, "[", "'['")
    a = expect(1, "ident", "a basis label")
    expect(2, ",", "','")
    b = expect(3, "ident", "a basis label")
    expect(4, "]", "']'")
    expect(5, "=", "'='")
    index = {lab: k for k, lab in enumerate(labels)}
    if a[1] not in index:
        raise UnknownLabel("unknown basis label %r" % a[1], lineno, a[2])
    if b[1] not in index:
        raise UnknownLabel("unknown basis label %r" % b[1], lineno, b[2])
    i, j = index[a[1]], index[b[1]]
    if i == j:
        raise ParseError("bracket of a label with itself is zero", lineno, a[2])
    coeffs = _parse_combination(tokens[6:], labels, lineno, allow_params=False)
    key = (min(i, j), max(i, j))
    if key in pairs:
        raise DuplicateBracket(
            "bracket pair (%s, %s) given twice" % (a[1], b[1]), lineno, a[2]
        )
    pairs[key] = (lineno, coeffs, j < i)


def parse_algebra_file(path):
    """LieAlgebra from an ``.alg`` file; the stem names the algebra."""
    import os

    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    stem = os.path.splitext(os.path.basename(path))[0]
    return parse_algebra(text, name=stem)


def algebra_to_text(g):
    """Canonical ``.alg`` source for an algebra; inverse of parse_algebra."""
    lines = []
    if g.name:
        lines.append("name: %s" % g.name)
    lines.append(
        "field: %s" % ("rational" if g.radicand is None else "quad:%d" % g.radicand)
    )
    lines.append("basis: %s" % " ".join(g.labels))
    for (i, j) in sorted(g.table):
        lines.append(
            "[%s,%s] = %s"
            % (g.labels[i], g.labels[j], vec_to_text(g.table[(i, j)], g.labels))
        )
    if g.torus_hint is not None:
        lines.append("torus: %s" % " ".join(g.labels[i] for i in g.torus_hint))
    if g.nilradical_hint is not None:
        lines.append("nilradical: %s" % " ".join(g.labels[i] for i in g.nilradical_hint))
    return "\n".join(lines) + "\n"
