"""Exact linear algebra over the scalar tower.

Vectors are tuples of scalars; Matrix wraps a tuple of such rows.  The
central primitive is a reduced row echelon form that understands
parameters: a pivot is only taken on an entry that is provably nonzero
under the ambient assumptions, and otherwise the reduction forks the
computation by *recording* the genericity condition it relied on (the
caller decides what to do with the fork).  rref processes columns left to
right, so the echelon basis of a subspace is canonical once the pivot
rule is fixed, and Subspace equality is just row equality.

Eigenvalue extraction (characteristic polynomial, factorization over the
ambient quadratic extension) is restricted to parameter free matrices;
everything else works over rational function entries.
"""

import itertools

import sympy

from .errors import (
    InconsistentSystem,
    AmbientMismatch,
    ParameterizedEntriesUnsupported,
    IrreducibleDegreeTooHigh,
    NonCommutingFamily,
)
from .scalars import (
    Fraction, Quad, quad, Cond,
    as_scalar, is_zero_scalar, is_provably_nonzero, scalar_params,
    scalar_subs, scalar_to_text, radicand_of, squarefree_core,
    rational_sqrt, quad_sqrt, poly_to_sympy, Poly, sympy_expr_to_poly,
)


#----------------------------------------------------------------------------
# vector helpers (tuples of scalars)

def vec(entries):
    return tuple(as_scalar(e) for e in entries)


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, v):
    return tuple(c * a for a in v)


def vec_is_zero(v):
    return all(is_zero_scalar(a) for a in v)


def vec_subs(v, mapping):
    return tuple(scalar_subs(a, mapping) for a in v)


def vec_params(v):
    out = set()
    for a in v:
        out |= scalar_params(as_scalar(a))
    return out


def unit_vector(n, i):
    return tuple(Fraction(1) if j == i else Fraction(0) for j in range(n))


def vec_to_text(v, labels):
    """Linear combination text like '2*X - Y + k*Z'."""
    parts = []
    for c, lab in zip(v, labels):
        c = as_scalar(c)
        if is_zero_scalar(c):
            continue
        if c == 1:
            t = lab
        elif c == -1:
            t = "-" + lab
        else:
            ct = scalar_to_text(c)
            if " " in ct:
                ct = "(%s)" % ct
            t = "%s*%s" % (ct, lab)
        parts.append(t)
    if not parts:
        return "0"
    out = parts[0]
    for t in parts[1:]:
        out += " - " + t[1:] if t.startswith("-") else " + " + t
    return out


#----------------------------------------------------------------------------
# matrices

class Matrix:

    __slots__ = ("rows",)

    def __init__(self, rows):
        self.rows = tuple(vec(r) for r in rows)
        if self.rows:
            w = len(self.rows[0])
            if any(len(r) != w for r in self.rows):
                raise AmbientMismatch("ragged matrix")

    @staticmethod
    def identity(n):
        return Matrix([unit_vector(n, i) for i in range(n)])

    @staticmethod
    def zeros(r, c):
        return Matrix([[Fraction(0)] * c for _ in range(r)])

    @property
    def shape(self):
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    def entry(self, i, j):
        return self.rows[i][j]

    def col(self, j):
        return tuple(r[j] for r in self.rows)

    def transpose(self):
        return Matrix(list(zip(*self.rows))) if self.rows else self

    def __add__(self, other):
        return Matrix([vec_add(a, b) for a, b in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return Matrix([vec_sub(a, b) for a, b in zip(self.rows, other.rows)])

    def __mul__(self, other):
        if isinstance(other, Matrix):
            n, m = self.shape
            m2, p = other.shape
            if m != m2:
                raise AmbientMismatch("shape mismatch %sx%s * %sx%s"
                                      % (n, m, m2, p))
            cols = other.transpose().rows
            return Matrix([[_dot(r, c) for c in cols] for r in self.rows])
        return Matrix([vec_scale(as_scalar(other), r) for r in self.rows])

    __rmul__ = __mul__

    def matvec(self, v):
        if len(v) != self.shape[1]:
            raise AmbientMismatch("vector length %d vs %d columns"
                                  % (len(v), self.shape[1]))
        return tuple(_dot(r, v) for r in self.rows)

    def subs(self, mapping):
        return Matrix([vec_subs(r, mapping) for r in self.rows])

    def has_params(self):
        return any(vec_params(r) for r in self.rows)

    def is_zero(self):
        return all(vec_is_zero(r) for r in self.rows)

    def trace(self):
        out = Fraction(0)
        for i, r in enumerate(self.rows):
            out = out + r[i]
        return out

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.rows == other.rows

    def __hash__(self):
        return hash(("Matrix", self.rows))

    def __repr__(self):
        return "Matrix(%r)" % (self.rows,)


def _dot(u, v):
    out = Fraction(0)
    for a, b in zip(u, v):
        if not (is_zero_scalar(a) or is_zero_scalar(b)):
            out = out + a * b
    return out


#----------------------------------------------------------------------------
# echelon forms

def rref(rows, conds=(), real=True):
    """Reduced row echelon form with parameter awareness.

    Returns (rows, pivot_columns, splits).  A pivot entry must be provably
    nonzero under conds; when only a possibly-zero parameterized entry is
    available in a column the reduction pivots on it anyway and appends
    the Cond('nonzero', entry) it assumed to splits (the generic branch).
    Columns whose entries are all identically zero are skipped.
    """
    rows = [vec(r) for r in rows]
    if not rows:
        return [], [], []
    ncols = len(rows[0])
    splits = []
    pivots = []
    top = 0
    for col in range(ncols):
        if top >= len(rows):
            break
        best = None
        for i in range(top, len(rows)):
            e = rows[i][col]
            if is_zero_scalar(e):
                continue
            if isinstance(e, (Fraction, Quad)):
                best = (0, i)
                break
            if is_provably_nonzero(e, conds, real):
                if best is None or best[0] > 1:
                    best = (1, i)
            elif best is None:
                best = (2, i)
        if best is None:
            continue
        kind, i = best
        rows[top], rows[i] = rows[i], rows[top]
        piv = rows[top][col]
        if kind == 2:
            splits.append(Cond("nonzero", piv))
        rows[top] = vec_scale(as_scalar(1) / piv, rows[top])
        for j in range(len(rows)):
            if j != top and not is_zero_scalar(rows[j][col]):
                rows[j] = vec_sub(rows[j], vec_scale(rows[j][col], rows[top]))
        pivots.append(col)
        top += 1
    return [r for r in rows if not vec_is_zero(r)], pivots, splits


class Subspace:
    """A linear subspace given by its canonical echelon basis."""

    __slots__ = ("ambient", "rows", "pivots")

    def __init__(self, ambient, rows, pivots):
        self.ambient = ambient
        self.rows = tuple(rows)
        self.pivots = tuple(pivots)

    @staticmethod
    def span(vectors, ambient, conds=(), real=True):
        """(Subspace, splits); splits records any genericity assumption the
        echelon reduction had to make about parameters in the vectors."""
        for v in vectors:
            if len(v) != ambient:
                raise AmbientMismatch("vector length %d in ambient %d"
                                      % (len(v), ambient))
        rows, pivots, splits = rref(vectors, conds, real)
        return Subspace(ambient, rows, pivots), splits

    @staticmethod
    def full(n):
        return Subspace(n, Matrix.identity(n).rows, tuple(range(n)))

    @staticmethod
    def zero(n):
        return Subspace(n, (), ())

    @property
    def dim(self):
        return len(self.rows)

    def reduce_vector(self, v):
        """(coords, residual) of v against the echelon basis: v equals
        sum(coords[i] * rows[i]) + residual and residual vanishes on every
        pivot column."""
        if len(v) != self.ambient:
            raise AmbientMismatch("vector length %d in ambient %d"
                                  % (len(v), self.ambient))
        coords = []
        r = vec(v)
        for row, p in zip(self.rows, self.pivots):
            c = r[p]
            coords.append(c)
            if not is_zero_scalar(c):
                r = vec_sub(r, vec_scale(c, row))
        return coords, r

    def contains(self, v):
        return vec_is_zero(self.reduce_vector(v)[1])

    def contains_space(self, other):
        return all(self.contains(r) for r in other.rows)

    def add(self, other, conds=(), real=True):
        if self.ambient != other.ambient:
            raise AmbientMismatch("subspaces in different ambients")
        space, _ = Subspace.span(list(self.rows) + list(other.rows),
                                 self.ambient, conds, real)
        return space

    def intersect(self, other, conds=(), real=True):
        """Intersection via the kernel of the stacked coefficient system:
        x in U cap W iff x = a.U = b.W for some coefficient rows a, b."""
        if self.ambient != other.ambient:
            raise AmbientMismatch("subspaces in different ambients")
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient)
        cols = []
        for j in range(self.ambient):
            cols.append([r[j] for r in self.rows]
                        + [-as_scalar(r[j]) for r in other.rows])
        ker, _ = kernel(Matrix(cols), conds, real)
        vecs = []
        for k in ker:
            a = k[:self.dim]
            v = tuple(_dot(a, col) for col in zip(*self.rows))
            vecs.append(v)
        space, _ = Subspace.span(vecs, self.ambient, conds, real)
        return space

    def complement_basis(self):
        """Standard basis vectors at the non pivot columns; together with
        rows they span the ambient space."""
        free = [j for j in range(self.ambient) if j not in self.pivots]
        return [unit_vector(self.ambient, j) for j in free]

    def subs(self, mapping, conds=(), real=True):
        space, _ = Subspace.span([vec_subs(r, mapping) for r in self.rows],
                                 self.ambient, conds, real)
        return space

    def has_params(self):
        return any(vec_params(r) for r in self.rows)

    def __eq__(self, other):
        return (isinstance(other, Subspace)
                and self.ambient == other.ambient
                and self.rows == other.rows)

    def __hash__(self):
        return hash(("Subspace", self.ambient, self.rows))

    def __repr__(self):
        return "Subspace(%d, %r)" % (self.ambient, self.rows)


def kernel(matrix, conds=(), real=True):
    """Basis of the null space (list of vectors, splits)."""
    rows, pivots, splits = rref(matrix.rows, conds, real)
    n = matrix.shape[1]
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, p in zip(rows, pivots):
            v[p] = -as_scalar(row[f])
        basis.append(tuple(v))
    return basis, splits


def solve_linear(matrix, rhs, conds=(), real=True):
    """One solution x of matrix * x = rhs, or raise InconsistentSystem.

    Works over rational function entries; the solution is generic in the
    parameters (splits from pivoting are folded into the second return
    value)."""
    aug = [tuple(r) + (b,) for r, b in zip(matrix.rows, rhs)]
    rows, pivots, splits = rref(aug, conds, real)
    n = matrix.shape[1]
    x = [Fraction(0)] * n
    for row, p in zip(rows, pivots):
        if p == n:
            raise InconsistentSystem("no solution")
        x[p] = as_scalar(row[n])
    return tuple(x), splits


def det(matrix):
    """Determinant by fraction-field elimination (parameters allowed)."""
    n, m = matrix.shape
    if n != m:
        raise AmbientMismatch("determinant of a %dx%d matrix" % (n, m))
    rows = [list(r) for r in matrix.rows]
    sign = 1
    out = as_scalar(1)
    for col in range(n):
        piv = None
        for i in range(col, n):
            if not is_zero_scalar(rows[i][col]):
                piv = i
                break
        if piv is None:
            return Fraction(0)
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            sign = -sign
        p = rows[col][col]
        out = out * p
        for i in range(col + 1, n):
            if not is_zero_scalar(rows[i][col]):
                f = rows[i][col] / p
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[col])]
    return sign * out


#----------------------------------------------------------------------------
# characteristic polynomial and eigen data

def char_poly(matrix):
    """Monic characteristic polynomial as a low-to-high coefficient list
    [c0, ..., c_{n-1}, 1], by the Faddeev-LeVerrier recursion.  Entries
    must be parameter free."""
    if matrix.has_params():
        raise ParameterizedEntriesUnsupported(
            "characteristic polynomial of a parameterized matrix")
    n = matrix.shape[0]
    if n != matrix.shape[1]:
        raise AmbientMismatch("characteristic polynomial of a nonsquare matrix")
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    m = Matrix.identity(n)
    for k in range(1, n + 1):
        am = matrix * m
        c = -(am.trace()) / k
        coeffs[n - k] = as_scalar(c)
        m = am + Matrix.identity(n) * c
    return coeffs


def _coeffs_to_sympy(coeffs, t):
    expr = sympy.Integer(0)
    for i, c in enumerate(coeffs):
        c = as_scalar(c)
        if isinstance(c, Quad):
            cc = (sympy.Rational(c.a.numerator, c.a.denominator)
                  + sympy.Rational(c.b.numerator, c.b.denominator)
                  * sympy.sqrt(c.d))
        else:
            cc = sympy.Rational(c.numerator, c.denominator)
        expr = expr + cc * t ** i
    return expr


def factor_poly(coeffs, d=None):
    """Factor a monic univariate polynomial over Q or Q(sqrt(d)).

    Returns (linear, quadratic): linear is a list of (root, multiplicity)
    and quadratic a list of ((b, c), multiplicity) for monic irreducible
    t**2 + b*t + c.  Raises IrreducibleDegreeTooHigh when an irreducible
    factor of degree three or more appears (no exact eigenvalue data in
    the supported tower).
    """
    t = sympy.Symbol("_t")
    expr = _coeffs_to_sympy(coeffs, t)
    if d is not None:
        _, factors = sympy.factor_list(expr, t, extension=sympy.sqrt(d))
    else:
        _, factors = sympy.factor_list(expr, t)
    linear = []
    quadratic = []
    for fac, mult in factors:
        p = sympy.Poly(fac, t, domain="EX")
        deg = p.degree()
        cs = [p.coeff_monomial(t ** i) for i in range(deg + 1)]
        cs = [sympy.Integer(0) if c is None else c for c in cs]
        lead = cs[deg]
        scal = [_sympy_to_scalar(c / lead, d) for c in cs]
        if deg == 1:
            linear.append((-scal[0], mult))
        elif deg == 2:
            quadratic.append(((scal[1], scal[0]), mult))
        elif deg > 2:
            raise IrreducibleDegreeTooHigh(
                "irreducible factor of degree %d" % deg)
    linear.sort(key=lambda rm: _scalar_sort_key(rm[0]))
    quadratic.sort(key=lambda qm: (_scalar_sort_key(qm[0][0]),
                                   _scalar_sort_key(qm[0][1])))
    return linear, quadratic


def _sympy_to_scalar(expr, d):
    expr = sympy.expand(expr)
    if expr.is_Rational:
        return Fraction(expr.p, expr.q)
    if d is None:
        raise IrreducibleDegreeTooHigh(
            "non rational coefficient %s over Q" % expr)
    root = sympy.sqrt(d)
    p = sympy.Poly(expr, root)
    b = p.coeff_monomial(root)
    a = p.coeff_monomial(1)
    a = sympy.Rational(a) if a is not None else sympy.Integer(0)
    b = sympy.Rational(b) if b is not None else sympy.Integer(0)
    return quad(Fraction(a.p, a.q), Fraction(b.p, b.q), d)


def _scalar_sort_key(x):
    x = as_scalar(x)
    if isinstance(x, Fraction):
        return (0, x, Fraction(0))
    if isinstance(x, Quad):
        return (1, x.a, x.b)
    return (2, Fraction(0), Fraction(0))


def split_quadratic(b, c, d=None):
    """Roots of t**2 + b*t + c in the ambient field, or None.

    The discriminant must be a square, possibly after extracting the
    ambient radicand; for negative discriminants this only succeeds over
    a complexified field (d < 0)."""
    disc = as_scalar(b) * b - 4 * as_scalar(c)
    r = quad_sqrt(disc, d)
    if r is None:
        return None
    half = Fraction(1, 2)
    return ((-b + r) * half, (-b - r) * half)


def eigenvalues(matrix, d=None):
    """(eigenvalues with multiplicity, irreducible quadratics) over the
    field Q(sqrt(d)); see factor_poly."""
    coeffs = char_poly(matrix)
    return factor_poly(coeffs, d)


def eigenspace(matrix, lam):
    n = matrix.shape[0]
    shifted = matrix - Matrix.identity(n) * lam
    basis, splits = kernel(shifted)
    if splits:
        raise ParameterizedEntriesUnsupported("parameterized eigenproblem")
    return basis


def matrix_restrict(matrix, space, conds=(), real=True):
    """Matrix of the action on an invariant subspace, in its echelon
    basis.  Raises InconsistentSystem when the space is not invariant."""
    out = []
    for r in space.rows:
        img = matrix.matvec(r)
        coords, resid = space.reduce_vector(img)
        if not vec_is_zero(resid):
            raise InconsistentSystem("subspace is not invariant")
        out.append(tuple(coords))
    # rows hold coordinates of images, so transpose to act on column
    # coordinate vectors the same way the ambient matrix does
    return Matrix(out).transpose()


def simultaneous_eigenspaces(matrices, d=None):
    """Joint eigenspace decomposition of a commuting family.

    Returns a list of (weights, basis_rows) where weights is the tuple of
    eigenvalues, one per matrix, on that joint eigenspace.  Only the part
    of the space where every matrix acts by an eigenvalue in Q(sqrt(d)) is
    returned.  Raises NonCommutingFamily if the family does not commute.
    """
    mats = list(matrices)
    for a, b in itertools.combinations(mats, 2):
        if not (a * b - b * a).is_zero():
            raise NonCommutingFamily("matrices do not commute")
    if not mats:
        return []
    n = mats[0].shape[0]
    pieces = [((), Subspace.full(n))]
    for a in mats:
        new = []
        for weights, space in pieces:
            if space.dim == 0:
                continue
            restr = matrix_restrict(a, space)
            linear, _ = eigenvalues(restr, d)
            for lam, _mult in linear:
                sub = eigenspace(restr, lam)
                vecs = []
                for k in sub:
                    v = tuple(_dot(k, col) for col in zip(*space.rows))
                    vecs.append(v)
                spc, _ = Subspace.span(vecs, n)
                if spc.dim:
                    new.append((weights + (lam,), spc))
        pieces = new
    return [(w, s) for w, s in pieces]


#----------------------------------------------------------------------------
# exterior powers

def wedge_indices(n, k):
    return list(itertools.combinations(range(n), k))


def minor(matrix, row_idx, col_idx):
    sub = Matrix([[matrix.entry(i, j) for j in col_idx] for i in row_idx])
    return det(sub)


def exterior_matrix(matrix, k):
    """Induced action on the k-th exterior power, in the basis of
    increasing index wedges: entry (I, J) is the (I, J) minor."""
    n = matrix.shape[0]
    idx = wedge_indices(n, k)
    return Matrix([[minor(matrix, I, J) for J in idx] for I in idx])


def wedge_coords(vectors, n):
    """Pluecker coordinates of the span of k vectors, ordered by
    wedge_indices(n, k)."""
    k = len(vectors)
    m = Matrix(vectors)
    return tuple(minor(m, tuple(range(k)), J) for J in wedge_indices(n, k))
