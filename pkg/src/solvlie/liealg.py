"""Finite dimensional Lie algebras given by exact structure constants.

A ``LieAlgebra`` stores an ordered basis (as printable labels) and the
brackets of basis pairs::

    [e_i, e_j] = sum_k  table[(i, j)][k] * e_k        for i < j

Pairs absent from the table bracket to zero, and ``[e_j, e_i]`` is minus
the stored value.  Structure constants are exact scalars without
parameters: ``Fraction`` entries for a rational algebra, or ``Quad``
entries sharing the algebra's radicand.  Elements of the algebra are
plain coordinate tuples and MAY carry parameters; every operation that
takes elements extends bilinearly over the scalar tower.

Subspaces of an algebra (ideals, subalgebras, centralizers, ...) are
``linalg.Subspace`` values in the algebra's coordinates.  The quotient
and restriction constructors return small map objects that carry the
derived algebra together with exact coordinate transport in both
directions, so classification code can descend to a smaller algebra and
pull answers back without loss.
"""

from .errors import (
    AlreadyComplex,
    JacobiViolation,
    NotAnIdeal,
    NotASubalgebra,
    NotSolvable,
    ParameterizedQuotientUnsupported,
)
from .linalg import (
    Matrix,
    Subspace,
    kernel,
    unit_vector,
    vec,
    vec_add,
    vec_is_zero,
    vec_scale,
    vec_to_text,
)
from .scalars import (
    Fraction,
    Poly,
    as_scalar,
    conjugate_scalar,
    is_zero_scalar,
    radicand_of,
    scalar_params,
    scalar_subs,
)

__all__ = [
    "LieAlgebra",
    "QuotientMap",
    "RestrictionMap",
    "ensure_solvable",
]


def _check_constant(value, radicand, where):
    value = as_scalar(value)
    if scalar_params(value):
        raise ValueError("structure constants must be parameter free (%s)" % where)
    r = radicand_of(value)
    if r is not None and r != radicand:
        raise ValueError(
            "structure constant radicand %r does not match algebra radicand %r (%s)"
            % (r, radicand, where)
        )
    return value


#----------------------------------------------------------------------------
# the algebra

class LieAlgebra:
    """Lie algebra on a labelled basis with an exact bracket table."""

    __slots__ = (
        "labels",
        "table",
        "radicand",
        "name",
        "torus_hint",
        "nilradical_hint",
        "_derived",
        "_lower_central",
        "_center",
    )

    def __init__(self, labels, table, radicand=None, name=None):
        labels = tuple(labels)
        if len(set(labels)) != len(labels):
            raise ValueError("basis labels must be distinct")
        if not labels:
            raise ValueError("algebra needs at least one basis vector")
        n = len(labels)
        clean = {}
        for key, coeffs in table.items():
            i, j = key
            if not (0 <= i < j < n):
                raise ValueError("bracket key %r must satisfy 0 <= i < j < dim" % (key,))
            coeffs = tuple(
                _check_constant(c, radicand, "[%s,%s]" % (labels[i], labels[j]))
                for c in coeffs
            )
            if len(coeffs) != n:
                raise ValueError("bracket value for %r has wrong length" % (key,))
            if not all(is_zero_scalar(c) for c in coeffs):
                clean[(i, j)] = coeffs
        self.labels = labels
        self.table = clean
        self.radicand = radicand
        self.name = name
        self.torus_hint = None
        self.nilradical_hint = None
        self._derived = None
        self._lower_central = None
        self._center = None

    @property
    def dim(self):
        return len(self.labels)

    def __repr__(self):
        return "<LieAlgebra %s dim=%d>" % (self.name or ",".join(self.labels), self.dim)

    def __eq__(self, other):
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        return (
            self.labels == other.labels
            and self.radicand == other.radicand
            and self.table == other.table
        )

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    #------------------------------------------------------------------
    # bracket and adjoint maps

    def zero_vector(self):
        return vec([0] * self.dim)

    def basis_vector(self, i):
        return unit_vector(self.dim, i)

    def basis_bracket(self, i, j):
        """[e_i, e_j] as a coordinate tuple."""
        if i == j:
            return self.zero_vector()
        if i < j:
            got = self.table.get((i, j))
            return vec(got) if got is not None else self.zero_vector()
        got = self.table.get((j, i))
        return vec_scale(-1, vec(got)) if got is not None else self.zero_vector()

    def bracket(self, x, y):
        """[x, y] for coordinate tuples, bilinear over exact scalars."""
        x = vec(x)
        y = vec(y)
        out = self.zero_vector()
        for (i, j), coeffs in self.table.items():
            c = x[i] * y[j] - x[j] * y[i]
            if is_zero_scalar(c):
                continue
            out = vec_add(out, vec_scale(c, coeffs))
        return out

    def ad(self, x):
        """Matrix of ad(x): y -> [x, y] acting on coordinate columns."""
        cols = [self.bracket(x, self.basis_vector(j)) for j in range(self.dim)]
        rows = [vec(col[i] for col in cols) for i in range(self.dim)]
        return Matrix(rows)

    def jacobi_check(self):
        """Return None, or the first basis triple (i, j, k) violating Jacobi."""
        n = self.dim
        for i in range(n):
            ei = self.basis_vector(i)
            for j in range(i + 1, n):
                ej = self.basis_vector(j)
                for k in range(j + 1, n):
                    ek = self.basis_vector(k)
                    total = vec_add(
                        vec_add(
                            self.bracket(ei, self.bracket(ej, ek)),
                            self.bracket(ej, self.bracket(ek, ei)),
                        ),
                        self.bracket(ek, self.bracket(ei, ej)),
                    )
                    if not vec_is_zero(total):
                        return (i, j, k)
        return None

    #------------------------------------------------------------------
    # characteristic series

    def _span_of_brackets(self, left_rows, right_rows):
        vectors = []
        for a in left_rows:
            for b in right_rows:
                w = self.bracket(a, b)
                if not vec_is_zero(w):
                    vectors.append(w)
        space, splits = Subspace.span(vectors, self.dim)
        assert not splits, "structure constants are parameter free"
        return space

    def derived_series(self):
        """[g, g', g'', ...] down to the first repetition (a stable term)."""
        if self._derived is None:
            series = [Subspace.full(self.dim)]
            while True:
                rows = series[-1].rows
                nxt = self._span_of_brackets(rows, rows)
                if nxt.dim == series[-1].dim:
                    break
                series.append(nxt)
                if nxt.dim == 0:
                    break
            self._derived = tuple(series)
        return self._derived

    def lower_central_series(self):
        """[g, [g,g], [g,[g,g]], ...] down to the first stable term."""
        if self._lower_central is None:
            full = Subspace.full(self.dim)
            series = [full]
            while True:
                nxt = self._span_of_brackets(full.rows, series[-1].rows)
                if nxt.dim == series[-1].dim:
                    break
                series.append(nxt)
                if nxt.dim == 0:
                    break
            self._lower_central = tuple(series)
        return self._lower_central

    def derived_subalgebra(self):
        series = self.derived_series()
        return series[1] if len(series) > 1 else series[0]

    def is_solvable(self):
        return self.derived_series()[-1].dim == 0

    def is_nilpotent(self):
        return self.lower_central_series()[-1].dim == 0

    def center(self):
        """Z(g) = common kernel of all ad(e_i)."""
        if self._center is None:
            stacked = []
            for i in range(self.dim):
                stacked.extend(self.ad(self.basis_vector(i)).rows)
            space, splits = kernel_of_rows(self.dim, stacked)
            assert not splits
            self._center = space
        return self._center

    def centralizer(self, space):
        """{x : [x, s] = 0 for all s in space}."""
        stacked = []
        for b in space.rows:
            stacked.extend(self.ad(b).rows)
        out, splits = kernel_of_rows(self.dim, stacked)
        assert not splits, "centralizer of a parameter free space"
        return out

    def normalizer(self, space, conds=()):
        """{x : [x, space] is contained in space}; space must be a subalgebra."""
        if not self.is_subalgebra(space, conds):
            raise NotASubalgebra(
                "normalizer requested for a subspace that is not a subalgebra"
            )
        resid = _residual_matrix(space)
        stacked = []
        for b in space.rows:
            stacked.extend((resid * self.ad(b)).rows)
        out, splits = kernel_of_rows(self.dim, stacked, conds=conds)
        return out

    #------------------------------------------------------------------
    # subalgebra and ideal predicates

    def _residuals_vanish(self, space, vectors, conds):
        mapping = {}
        for c in conds:
            if c.kind == "zero" and _is_bare_param(c.expr):
                (mono, _), = c.expr.terms.items()
                mapping[mono[0][0]] = Fraction(0)
        for w in vectors:
            _, residual = space.reduce_vector(w)
            for entry in residual:
                if mapping:
                    entry = scalar_subs(entry, mapping)
                if not is_zero_scalar(entry):
                    return False
        return True

    def is_subalgebra(self, space, conds=()):
        """Exact check that [space, space] lies in space under the conditions."""
        rows = space.rows
        vectors = [
            self.bracket(rows[a], rows[b])
            for a in range(len(rows))
            for b in range(a + 1, len(rows))
        ]
        return self._residuals_vanish(space, vectors, conds)

    def is_ideal(self, space, conds=()):
        """Exact check that [g, space] lies in space under the conditions."""
        vectors = []
        for i in range(self.dim):
            ei = self.basis_vector(i)
            for b in space.rows:
                vectors.append(self.bracket(ei, b))
        return self._residuals_vanish(space, vectors, conds)

    #------------------------------------------------------------------
    # quotients and restrictions

    def quotient(self, ideal):
        """QuotientMap onto g/ideal, with section along non-pivot coordinates."""
        if ideal.has_params():
            raise ParameterizedQuotientUnsupported(
                "quotients need a parameter free ideal basis"
            )
        if not self.is_ideal(ideal):
            raise NotAnIdeal("quotient base is not an ideal")
        free = [c for c in range(self.dim) if c not in ideal.pivots]
        if not free:
            raise ValueError("quotient by the whole algebra is empty")
        labels = tuple(self.labels[c] + "~" for c in free)
        section = tuple(self.basis_vector(c) for c in free)

        def project(v):
            _, residual = ideal.reduce_vector(vec(v))
            return vec(residual[c] for c in free)

        table = {}
        for a in range(len(free)):
            for b in range(a + 1, len(free)):
                w = project(self.bracket(section[a], section[b]))
                if not vec_is_zero(w):
                    table[(a, b)] = w
        algebra = LieAlgebra(labels, table, radicand=self.radicand)
        return QuotientMap(self, algebra, ideal, section, tuple(free))

    def restriction(self, space, conds=()):
        """RestrictionMap for a subalgebra, with labels taken at pivot columns."""
        if not self.is_subalgebra(space, conds):
            raise NotASubalgebra("restriction requested for a non-subalgebra")
        rows = space.rows
        if not rows:
            raise ValueError("restriction to the zero subspace is empty")
        labels = tuple(self.labels[space.pivots[a]] for a in range(len(rows)))
        table = {}
        for a in range(len(rows)):
            for b in range(a + 1, len(rows)):
                coords, residual = space.reduce_vector(
                    self.bracket(rows[a], rows[b])
                )
                if not vec_is_zero(residual):
                    raise NotASubalgebra("bracket left the subspace during restriction")
                if not vec_is_zero(coords):
                    table[(a, b)] = coords
        algebra = LieAlgebra(labels, table, radicand=self.radicand)
        return RestrictionMap(self, algebra, space)

    #------------------------------------------------------------------
    # real versus complex scalars

    def complexify(self):
        """The same structure constants over Q(i); only rational algebras."""
        if self.radicand is not None:
            raise AlreadyComplex(
                "complexify needs a rational algebra, radicand is %r" % (self.radicand,)
            )
        out = LieAlgebra(self.labels, dict(self.table), radicand=-1, name=self.name)
        out.torus_hint = self.torus_hint
        out.nilradical_hint = self.nilradical_hint
        return out

    def conjugate_space(self, space):
        """Entrywise complex conjugate of a subspace of the complexified algebra."""
        rows = [vec(conjugate_scalar(e) for e in r) for r in space.rows]
        out, splits = Subspace.span(rows, self.dim)
        assert not splits
        return out

    def real_points(self, space):
        """Rational points of a subspace of the complexification.

        The result is a Subspace over the rationals inside the real form,
        of dimension dim(space intersect conj(space)).
        """
        stable = space.intersect(self.conjugate_space(space))
        rows = []
        for r in stable.rows:
            re = []
            im = []
            for entry in r:
                if radicand_of(entry) is None:
                    re.append(entry)
                    im.append(Fraction(0))
                else:
                    re.append(entry.a)
                    im.append(entry.b)
            rows.append(vec(re))
            rows.append(vec(im))
        out, splits = Subspace.span(rows, self.dim)
        assert not splits
        return out

    #------------------------------------------------------------------
    # display

    def element_text(self, v):
        return vec_to_text(v, self.labels)

    def space_text(self, space):
        if space.dim == 0:
            return "0"
        return "<" + ", ".join(self.element_text(r) for r in space.rows) + ">"


#----------------------------------------------------------------------------
# coordinate transport for quotients and restrictions

class QuotientMap:
    """Carries g -> g/ideal with an exact linear section."""

    __slots__ = ("source", "algebra", "ideal", "section", "free_columns")

    def __init__(self, source, algebra, ideal, section, free_columns):
        self.source = source
        self.algebra = algebra
        self.ideal = ideal
        self.section = section
        self.free_columns = free_columns

    def project(self, v):
        _, residual = self.ideal.reduce_vector(vec(v))
        return vec(residual[c] for c in self.free_columns)

    def lift(self, u):
        out = vec([0] * self.source.dim)
        for c, sec in zip(u, self.section):
            if not is_zero_scalar(as_scalar(c)):
                out = vec_add(out, vec_scale(c, sec))
        return out

    def lift_space(self, space):
        rows = [self.lift(r) for r in space.rows] + list(self.ideal.rows)
        out, splits = Subspace.span(rows, self.source.dim)
        assert not splits or space.has_params()
        return out


class RestrictionMap:
    """Carries a subalgebra h of g in its own coordinates."""

    __slots__ = ("source", "algebra", "space")

    def __init__(self, source, algebra, space):
        self.source = source
        self.algebra = algebra
        self.space = space

    def to_sub(self, v):
        coords, residual = self.space.reduce_vector(vec(v))
        if not vec_is_zero(residual):
            raise ValueError("vector is not in the subalgebra")
        return coords

    def to_ambient(self, coords):
        out = vec([0] * self.source.dim)
        for c, row in zip(coords, self.space.rows):
            if not is_zero_scalar(as_scalar(c)):
                out = vec_add(out, vec_scale(c, row))
        return out

    def space_to_ambient(self, space):
        rows = [self.to_ambient(r) for r in space.rows]
        out, splits = Subspace.span(rows, self.source.dim)
        return out


#----------------------------------------------------------------------------
# helpers

def _is_bare_param(expr):
    if not isinstance(expr, Poly) or len(expr.terms) != 1:
        return False
    (mono, coeff), = expr.terms.items()
    return len(mono) == 1 and mono[0][1] == 1 and coeff == 1


def _residual_matrix(space):
    """Matrix sending v to its residual after reduction against the space."""
    n = space.ambient
    cols = []
    for j in range(n):
        _, residual = space.reduce_vector(unit_vector(n, j))
        cols.append(residual)
    rows = [vec(col[i] for col in cols) for i in range(n)]
    return Matrix(rows)


def kernel_of_rows(width, rows, conds=()):
    """Kernel of the linear map given by stacked rows; empty stack is full."""
    if not rows:
        return Subspace.full(width), ()
    basis, splits = kernel(Matrix([vec(r) for r in rows]), conds=conds)
    space, more = Subspace.span(basis, width, conds)
    return space, tuple(splits) + tuple(more)


def ensure_solvable(g):
    """Raise NotSolvable unless g is solvable; return g for chaining."""
    if not g.is_solvable():
        raise NotSolvable(
            "algebra %s is not solvable (derived series stalls at dimension %d)"
            % (g.name or ",".join(g.labels), g.derived_series()[-1].dim)
        )
    return g
