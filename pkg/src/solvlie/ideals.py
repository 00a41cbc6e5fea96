"""Enumeration of ideals of a solvable Lie algebra, stratum by stratum.

The set of d-dimensional ideals is organized into strata.  A stratum is a
fixed base subspace plus, optionally, a free Grassmannian choice: every
member is base + U where U runs over the free_dim-dimensional subspaces of
free_space.  Concrete strata (no free part, no parameters) are single
ideals.  This keeps families like "any line in the center" as one object
instead of an affine chart that misses boundary members.

Enumeration is bottom up.  Dimension one comes from the center together
with the joint eigenlines of the adjoint action on the center of the
derived subalgebra; higher dimensions quotient by each known stratum,
enumerate lines in the quotient, and pull back.  Families are swept with
one echelon chart per pivot pattern, and a merge pass recognizes when all
charts of a family extend uniformly, collapsing them back into a single
chartless stratum.

Everything is exact.  When an eigenvalue leaves the supported scalar tower
(rationals, or one square root extension) the enumeration raises rather
than guessing, and when a quotient's structure constants would depend on
chart parameters it raises ParameterizedQuotientUnsupported.
"""

import itertools
from fractions import Fraction

from .errors import (
    AmbiguousUnderConstraints,
    IrreducibleDegreeTooHigh,
    NotAnIdeal,
    ParameterizedEntriesUnsupported,
    ParameterizedQuotientUnsupported,
)
from .liealg import LieAlgebra, ensure_solvable
from .linalg import (
    Subspace,
    char_poly,
    factor_poly,
    matrix_restrict,
    simultaneous_eigenspaces,
    vec,
    vec_add,
    vec_is_zero,
    vec_params,
    vec_scale,
    vec_subs,
)
from .scalars import (
    Cond,
    fresh_param,
    is_zero_scalar,
    param,
    radicand_of,
    scalar_params,
    scalar_subs,
    scalar_to_text,
    squarefree_core,
)


class _AdoptField(Exception):
    """Internal signal: the eigenproblem needs Q(sqrt(radicand)).

    Raised while working over the plain rationals when every irreducible
    quadratic factor shares one squarefree discriminant core.  The callers
    retry (or restart the whole enumeration) over the extended field, so
    this never escapes the module.
    """

    def __init__(self, radicand):
        Exception.__init__(self, radicand)
        self.radicand = radicand


#----------------------------------------------------------------------------
# strata and lattices

class IdealStratum:
    """A family of ideals sharing one presentation.

    base is an echelon subspace, possibly with parameter entries when the
    stratum is one chart of a nested family.  free_space/free_dim describe
    a Grassmannian of complements: members are base + U for U any
    free_dim-dimensional subspace of free_space.  constraints are the
    parameter conditions under which the presentation is valid, and
    provenance is a chain of (tag, text) records tracing how the stratum
    was found (quotient ideals used, eigenvalue data, merges).
    """

    __slots__ = ("base", "free_space", "free_dim", "constraints", "provenance")

    def __init__(self, base, free_space=None, free_dim=0, constraints=(),
                 provenance=()):
        if free_dim:
            if free_space is None:
                raise ValueError("free_dim without a free_space")
            if free_space.ambient != base.ambient:
                raise ValueError("free_space in a different ambient space")
            if not 1 <= free_dim <= free_space.dim:
                raise ValueError("free_dim out of range")
            if free_dim == free_space.dim:
                # only one choice of U: collapse to a concrete stratum
                total = base.add(free_space)
                if total.dim != base.dim + free_space.dim:
                    raise ValueError("free_space overlaps the base")
                base = total
                free_space = None
                free_dim = 0
        else:
            free_space = None
        self.base = base
        self.free_space = free_space
        self.free_dim = free_dim
        self.constraints = tuple(constraints)
        self.provenance = tuple(provenance)

    @property
    def dim(self):
        """Dimension of every member."""
        return self.base.dim + self.free_dim

    @property
    def ambient(self):
        return self.base.ambient

    def is_concrete(self):
        return self.free_dim == 0 and not self.base.has_params()

    def has_params(self):
        if self.base.has_params():
            return True
        return self.free_space is not None and self.free_space.has_params()

    def param_names(self):
        names = set()
        for sp in (self.base, self.free_space):
            if sp is None:
                continue
            for r in sp.rows:
                names |= vec_params(r)
        return names

    def member(self):
        """The single member of a concrete stratum."""
        if not self.is_concrete():
            raise ValueError("member() needs a concrete stratum")
        return self.base

    def total(self):
        """Union of all members as a subspace (base + free_space)."""
        if self.free_space is None:
            return self.base
        return self.base.add(self.free_space)

    def covers(self, space):
        """Whether a concrete subspace is one of the members."""
        if self.base.has_params() or space.has_params():
            raise ParameterizedEntriesUnsupported(
                "membership test needs parameter free spaces")
        if space.ambient != self.ambient or space.dim != self.dim:
            return False
        if not space.contains_space(self.base):
            return False
        if self.free_dim == 0:
            return True
        return self.total().contains_space(space)

    def sample_member(self, rng, bound=5):
        """A random concrete member, for property tests."""
        n = self.ambient
        for _ in range(50):
            mapping = {nm: Fraction(rng.randint(-bound, bound))
                       for nm in self.param_names()}
            rows = [vec_subs(r, mapping) for r in self.base.rows]
            if self.free_dim:
                for _ in range(self.free_dim):
                    w = vec([0] * n)
                    for fr in self.free_space.rows:
                        w = vec_add(w, vec_scale(
                            Fraction(rng.randint(-bound, bound)), fr))
                    rows.append(w)
            space, splits = Subspace.span(rows, n)
            if not splits and space.dim == self.dim:
                return space
        raise ValueError("could not sample a member in 50 draws")

    def key(self):
        """Canonical sort/dedup key, invariant under parameter renaming."""
        mapping = _rename_map(_ordered_params((self.base, self.free_space)),
                              "c%d")
        def rows_text(sp):
            if sp is None:
                return ()
            return tuple(
                tuple(scalar_to_text(scalar_subs(e, mapping)) for e in r)
                for r in sp.rows)
        conds = tuple(sorted(
            "%s:%s" % (c.kind, scalar_to_text(scalar_subs(c.expr, mapping)))
            for c in self.constraints))
        return (self.dim, self.free_dim, rows_text(self.base),
                rows_text(self.free_space), conds)

    def __repr__(self):
        if self.free_dim:
            return ("IdealStratum(dim=%d, base_dim=%d, free_dim=%d)"
                    % (self.dim, self.base.dim, self.free_dim))
        return "IdealStratum(dim=%d, concrete)" % self.dim


class IdealLattice:
    """All ideal strata of one algebra, grouped by dimension.

    kind is "split" (ideals over the algebra's own field, possibly after
    adopting one square root) or "real" (ideals of a rational algebra kept
    over the rationals).  radicand records the field the enumeration ran
    over.  edges connect strata in consecutive nonempty dimensions with a
    containment tag: "all" when every member of the lower stratum lies in
    a member of the higher one, "some" when at least one does.
    """

    __slots__ = ("algebra", "kind", "radicand", "_by_dim", "edges")

    def __init__(self, algebra, kind, radicand, by_dim, edges):
        self.algebra = algebra
        self.kind = kind
        self.radicand = radicand
        self._by_dim = {d: tuple(strata) for d, strata in by_dim.items()}
        self.edges = tuple(edges)

    @property
    def dims(self):
        return tuple(sorted(self._by_dim))

    def strata(self, dim):
        return self._by_dim.get(dim, ())

    def all_strata(self):
        for d in self.dims:
            for st in self._by_dim[d]:
                yield d, st

    def stratum_count(self):
        return sum(len(v) for v in self._by_dim.values())

    def covering(self, space):
        """All (dim, index, stratum) whose members include the space."""
        out = []
        for i, st in enumerate(self._by_dim.get(space.dim, ())):
            if st.covers(space):
                out.append((space.dim, i, st))
        return out

    def __repr__(self):
        return ("IdealLattice(%s, kind=%s, %d strata)"
                % (self.algebra.name or "?", self.kind, self.stratum_count()))


#----------------------------------------------------------------------------
# parameter bookkeeping

def _ordered_params(spaces):
    names = []
    for sp in spaces:
        if sp is None:
            continue
        for r in sp.rows:
            for e in r:
                for nm in sorted(scalar_params(e)):
                    if nm not in names:
                        names.append(nm)
    return names

def _rename_map(names, pattern):
    return {nm: param(pattern % (i + 1)) for i, nm in enumerate(names)}

def _canonical(st):
    """Rename stratum parameters to k1, k2, ... in row scan order."""
    names = _ordered_params((st.base, st.free_space))
    if not names:
        return st
    # two stage rename so targets never collide with leftover sources
    stage1 = _rename_map(names, "_r%d")
    stage2 = {"_r%d" % (i + 1): param("k%d" % (i + 1))
              for i in range(len(names))}

    def conv_space(sp):
        if sp is None:
            return None
        return sp.subs(stage1).subs(stage2)

    def conv_cond(c):
        return Cond(c.kind, scalar_subs(scalar_subs(c.expr, stage1), stage2))

    return IdealStratum(conv_space(st.base), conv_space(st.free_space),
                        st.free_dim, tuple(conv_cond(c) for c in st.constraints),
                        st.provenance)

def _dedup(strata):
    """Sort by canonical key, drop duplicates, drop concrete strata that a
    parameter free family at the same dimension already covers."""
    ordered = sorted((_canonical(s) for s in strata), key=lambda s: s.key())
    unique = []
    seen = set()
    for s in ordered:
        k = s.key()
        if k in seen:
            continue
        seen.add(k)
        unique.append(s)
    out = []
    for s in unique:
        if s.is_concrete():
            swallowed = any(
                t.free_dim and not t.base.has_params() and t.covers(s.base)
                for t in unique if t is not s)
            if swallowed:
                continue
        out.append(s)
    return out


#----------------------------------------------------------------------------
# dimension one

def _abelian_action(g):
    """The center of the derived subalgebra and the adjoint action on it.

    The restricted matrices commute because brackets of basis vectors act
    trivially there, which is what makes a joint eigenline analysis valid.
    """
    gp = g.derived_subalgebra()
    if gp.dim == 0:
        return Subspace.zero(g.dim), []
    zp = g.centralizer(gp).intersect(gp)
    if zp.dim == 0:
        return zp, []
    mats = [matrix_restrict(g.ad(g.basis_vector(i)), zp)
            for i in range(g.dim)]
    return zp, mats

def _require_split(mats, rad):
    """Check every restricted characteristic polynomial splits into linear
    factors over the working field.

    Over the plain rationals, irreducible quadratics with one common
    squarefree discriminant core trigger _AdoptField; anything else (two
    incompatible cores, a quadratic that survives the extension, or an
    irreducible factor of degree three or more) raises
    IrreducibleDegreeTooHigh.
    """
    cores = set()
    for m in mats:
        _, quads = factor_poly(char_poly(m), rad)
        for (b, c), _mult in quads:
            if rad is not None:
                raise IrreducibleDegreeTooHigh(
                    "an eigenvalue needs a second square root extension")
            disc = b * b - 4 * c
            core, _ = squarefree_core(disc.numerator * disc.denominator)
            cores.add(core)
    if cores:
        if len(cores) > 1:
            raise IrreducibleDegreeTooHigh(
                "eigenvalues need incompatible square root extensions: "
                + ", ".join("sqrt(%d)" % c for c in sorted(cores)))
        raise _AdoptField(cores.pop())

def _one_dim(g, rad):
    """Strata of one dimensional ideals over Q(sqrt(rad)).

    A line spanned by v is an ideal exactly when v is a joint eigenvector
    of the adjoint action.  Zero weight lines are the lines in the center;
    a nonzero weight forces v into the derived subalgebra, and centrality
    there, so the remaining lines are the nonzero weight joint eigenlines
    of the action on the center of the derived subalgebra.
    """
    ensure_solvable(g)
    n = g.dim
    strata = []
    z = g.center()
    if z.dim:
        strata.append(IdealStratum(
            Subspace.zero(n), z, 1,
            provenance=(("center", "any line in the %d dimensional center"
                         % z.dim),)))
    zp, mats = _abelian_action(g)
    if zp.dim:
        _require_split(mats, rad)
        for weights, piece in simultaneous_eigenspaces(mats, rad):
            if all(not _nonzero_scalar(w) for w in weights):
                continue  # zero weight lines are central, already listed
            space = _unrestrict(piece, zp)
            text = "joint adjoint weights (%s)" % ", ".join(
                scalar_to_text(w) for w in weights)
            if space.dim == 1:
                strata.append(IdealStratum(
                    space, provenance=(("eigenline", text),)))
            else:
                strata.append(IdealStratum(
                    Subspace.zero(n), space, 1,
                    provenance=(("eigenline", text),
                                ("free", "any line in the %d dimensional "
                                 "weight space" % space.dim))))
    return _dedup(strata)

def _unrestrict(piece, space):
    """Map a subspace given in the coordinates of space.rows back to the
    ambient coordinates."""
    rows = []
    for r in piece.rows:
        w = vec([0] * space.ambient)
        for c, base_row in zip(r, space.rows):
            w = vec_add(w, vec_scale(c, base_row))
        rows.append(w)
    out, splits = Subspace.span(rows, space.ambient)
    assert not splits and out.dim == piece.dim
    return out

def _nonzero_scalar(x):
    return not is_zero_scalar(x)

def one_dim_ideals(g, d=None):
    """Strata of one dimensional ideals of g.

    Works over Q(sqrt(d)) when d is given, otherwise over the algebra's
    own field; if the eigenvalues need one square root extension of the
    rationals it is adopted automatically.
    """
    rad = d if d is not None else g.radicand
    try:
        return _one_dim(g, rad)
    except _AdoptField as need:
        return _one_dim(g, need.radicand)


#----------------------------------------------------------------------------
# extension to higher dimensions

def _grassmann_cells(space, free_dim, namer):
    """Echelon charts of the free_dim-subspaces of a given space.

    One chart per pivot pattern: the chart with pivots (p_1 < ... < p_u)
    has rows f_{p_i} + sum of parameter multiples of the later non pivot
    rows.  Together the charts cover the whole Grassmannian, which an
    affine slice alone would not.
    """
    base_rows = list(space.rows)
    w = len(base_rows)
    cells = []
    for pivots in itertools.combinations(range(w), free_dim):
        rows = []
        names = []
        for p in pivots:
            row = base_rows[p]
            for j in range(p + 1, w):
                if j in pivots:
                    continue
                nm = namer()
                names.append(nm)
                row = vec_add(row, vec_scale(param(nm), base_rows[j]))
            rows.append(row)
        cells.append((pivots, rows, names))
    return cells

def _quotient_algebra(g, member, rad):
    """Quotient of g by a member subspace, allowing chart parameters in the
    member as long as they cancel from the projected structure constants."""
    free_cols = tuple(c for c in range(g.dim) if c not in member.pivots)
    labels = tuple(g.labels[c] + "~" for c in free_cols)
    table = {}
    for a in range(len(free_cols)):
        for b in range(a + 1, len(free_cols)):
            w = g.basis_bracket(free_cols[a], free_cols[b])
            _, resid = member.reduce_vector(w)
            entry = vec(resid[c] for c in free_cols)
            if vec_params(entry):
                raise ParameterizedQuotientUnsupported(
                    "structure constants of the quotient depend on chart "
                    "parameters")
            if not vec_is_zero(entry):
                table[(a, b)] = entry
    return LieAlgebra(labels, table, radicand=rad), free_cols

def _lift_vec(free_cols, n, w):
    out = [Fraction(0)] * n
    for c, val in zip(free_cols, w):
        out[c] = val
    return vec(out)

def _extend_one(g, parent, member, rad):
    """Pull the one dimensional strata of g/member back to g.

    Returns (stratum, clean) pairs; clean marks pullbacks whose base is
    exactly the member (the shape the chart merge pass can absorb).
    """
    n = g.dim
    qalg, free_cols = _quotient_algebra(g, member, rad)
    out = []
    for qs in _one_dim(qalg, rad):
        rows = list(member.rows) + [_lift_vec(free_cols, n, r)
                                    for r in qs.base.rows]
        base, splits = Subspace.span(rows, n)
        if splits or base.dim != member.dim + qs.base.dim:
            raise ParameterizedQuotientUnsupported(
                "pullback degenerates for special chart parameter values")
        fspace = None
        if qs.free_dim:
            frows = [_lift_vec(free_cols, n, r) for r in qs.free_space.rows]
            fspace, fsplits = Subspace.span(frows, n)
            assert not fsplits and fspace.dim == qs.free_space.dim
        prov = parent.provenance + (
            ("extend", "one dimensional ideal of the quotient by %s"
             % g.space_text(member)),) + qs.provenance
        if base.has_params() and qs.free_dim:
            prov = prov + (("nested", "free choice inside a chart family"),)
        st = IdealStratum(base, fspace, qs.free_dim,
                          parent.constraints + qs.constraints, prov)
        clean = qs.base.dim == 0 and not qs.constraints
        out.append((st, clean))
    return out

def _try_merge(g, parent, recs):
    """Collapse a full chart sweep of a free family back into one
    chartless stratum (base, T, u + v).

    Valid when every chart of the parent produced exactly one clean
    pullback with the same free dimension v and the geometry checks below
    hold.  They are what is needed so that for any (u + v) dimensional V
    inside the joint free space T, base + V lands in some chart: V meets
    the parent free space in dimension at least u (the count needs v >=
    dim T - dim T0), that intersection picks a pivot pattern, and the
    rest of V can be pushed into that chart's free space because the
    chart's coefficient directions and T itself sit inside the hull of
    the base, the pivot rows and the chart free space.
    """
    u = parent.free_dim
    w = parent.free_space.dim
    expected = list(itertools.combinations(range(w), u))
    cells = {}
    for pivots, clean, st in recs:
        if pivots in cells:
            return None
        cells[pivots] = (clean, st)
    if sorted(cells) != expected:
        return None
    if not all(clean for clean, _ in cells.values()):
        return None
    strata = [cells[p][1] for p in expected]
    v = strata[0].free_dim
    if v == 0 or any(st.free_dim != v for st in strata):
        return None
    if any(st.constraints != parent.constraints for st in strata):
        return None
    b0 = parent.base
    t0 = parent.free_space
    if any(st.base.dim != b0.dim + u or not st.base.contains_space(b0)
           for st in strata):
        return None
    tm = t0
    for st in strata:
        tm = tm.add(st.free_space)
    if b0.dim and b0.add(tm).dim != b0.dim + tm.dim:
        return None
    if v < tm.dim - t0.dim:
        return None
    f = list(t0.rows)
    for pivots, st in zip(expected, strata):
        hull = b0.add(st.free_space)
        for p in pivots:
            for j in range(p + 1, w):
                if j not in pivots and not hull.contains(f[j]):
                    return None
        pivot_rows, _ = Subspace.span([f[p] for p in pivots], t0.ambient)
        if not hull.add(pivot_rows).contains_space(tm):
            return None
    return IdealStratum(
        b0, tm, u + v, parent.constraints,
        parent.provenance + (
            ("merge", "every free choice extends the same way"),))

def _extend(g, parents, rad):
    """All strata one dimension above the given ones."""
    namer = lambda: fresh_param("q")
    records = {}
    for idx, parent in enumerate(parents):
        if parent.free_dim:
            cells = _grassmann_cells(parent.free_space, parent.free_dim,
                                     namer)
        else:
            cells = [((), [], [])]
        recs = []
        for pivots, rows, names in cells:
            member, splits = Subspace.span(
                list(parent.base.rows) + rows, g.dim)
            if splits or member.dim != parent.dim:
                raise ParameterizedQuotientUnsupported(
                    "chart rows degenerate against the stratum base")
            for st, clean in _extend_one(g, parent, member, rad):
                recs.append((pivots, clean, st))
        records[idx] = recs
    out = []
    for idx, parent in enumerate(parents):
        recs = records[idx]
        merged = None
        if parent.free_dim and not parent.base.has_params():
            merged = _try_merge(g, parent, recs)
        if merged is not None:
            out.append(merged)
        else:
            out.extend(st for _, _, st in recs)
    return _dedup(out)

def _infer_radicand(g, known):
    if g.radicand is not None:
        return g.radicand
    for st in known:
        for sp in (st.base, st.free_space):
            if sp is None:
                continue
            for r in sp.rows:
                for e in r:
                    rad = radicand_of(e)
                    if rad is not None:
                        return rad
    return None

def extend_ideals(g, known, d=None):
    """Strata of ideals one dimension above the given strata.

    Each known stratum is swept chart by chart; the quotient by each chart
    member is formed, its one dimensional ideals enumerated, and the
    results pulled back along the quotient and deduplicated.
    """
    rad = d if d is not None else _infer_radicand(g, known)
    try:
        return _extend(g, list(known), rad)
    except _AdoptField as need:
        return _extend(g, list(known), need.radicand)


#----------------------------------------------------------------------------
# full lattices

def _edge_tag(a, b):
    """Containment tag between strata of consecutive dimensions.

    The checks are structural sufficient conditions; a missing edge means
    no containment was certified, not that none exists.  Chart strata with
    parameters in the base are skipped.
    """
    if a.base.has_params() or b.base.has_params():
        return None
    bt = b.total()
    bcap = b.base.dim + b.free_dim
    if bt.contains_space(a.total()):
        # either every single member fits after projecting past b's base,
        # or one member of b absorbs the whole family at once
        if (a.base.add(b.base).dim + a.free_dim <= bcap
                or a.total().add(b.base).dim <= bcap):
            return "all"
    if bt.contains_space(a.base) and a.free_space is not None:
        if (a.free_space.intersect(bt).dim >= a.free_dim
                and a.base.add(b.base).dim + a.free_dim <= bcap):
            return "some"
    return None

def _edges(by_dim):
    dims = [d for d in sorted(by_dim) if by_dim[d]]
    edges = []
    for lo, hi in zip(dims, dims[1:]):
        for i, a in enumerate(by_dim[lo]):
            for j, b in enumerate(by_dim[hi]):
                tag = _edge_tag(a, b)
                if tag is not None:
                    edges.append((lo, i, hi, j, tag))
    return edges

def _bookend_strata(g):
    zero = IdealStratum(Subspace.zero(g.dim),
                        provenance=(("trivial", "the zero ideal"),))
    full = IdealStratum(Subspace.full(g.dim),
                        provenance=(("trivial", "the whole algebra"),))
    return zero, full

def _enumerate(g, rad, proper_top):
    by_dim = {}
    zero, full = _bookend_strata(g)
    by_dim[0] = [zero]
    if proper_top >= 1:
        current = _one_dim(g, rad)
        by_dim[1] = current
        for dim in range(2, proper_top + 1):
            if not current:
                break
            current = _extend(g, current, rad)
            by_dim[dim] = current
    by_dim[g.dim] = [full]
    return by_dim

def enumerate_ideals(g, max_dim=None):
    """The full ideal lattice of g over its own field.

    When the eigenvalue data asks for one square root extension of the
    rationals the whole enumeration restarts over that field, so strata
    found before the extension was detected are not silently kept in the
    smaller field.  The result always contains the zero ideal and g; with
    max_dim given, proper ideals are only enumerated up to that dimension.
    """
    ensure_solvable(g)
    n = g.dim
    proper_top = n - 1 if max_dim is None else min(max_dim, n - 1)
    rad = g.radicand
    while True:
        try:
            by_dim = _enumerate(g, rad, proper_top)
            break
        except _AdoptField as need:
            rad = need.radicand
    return IdealLattice(g, "split", rad, by_dim, _edges(by_dim))


#----------------------------------------------------------------------------
# real ideals via complexification

def _rows_rational(space):
    return all(radicand_of(e) is None for r in space.rows for e in r)

def _verify_stratum(g, st):
    if st.is_concrete():
        ok = g.is_ideal(st.base, st.constraints)
    else:
        ok = all(g.is_ideal(member, st.constraints)
                 for _, member, _ in expand_charts(st))
    if not ok:
        raise NotAnIdeal("a mapped stratum fails the ideal check")

def _real_images(g, st):
    """Real strata obtained from one complex stratum.

    Rationally presented strata survive unchanged.  A concrete stratum
    with genuinely complex rows contributes its rational points and the
    rational points of its sum with the conjugate stratum; both are ideals
    of the real algebra, with a dimension step of at most the number of
    non real basis rows in either direction.
    """
    spaces = [st.base] + ([st.free_space] if st.free_space else [])
    if all(_rows_rational(sp) for sp in spaces):
        yield IdealStratum(st.base, st.free_space, st.free_dim,
                           st.constraints,
                           st.provenance + (
                               ("real", "already presented over the "
                                "rationals"),))
        return
    if st.base.has_params() or st.free_space is not None:
        if not _rows_rational(st.base):
            raise ParameterizedEntriesUnsupported(
                "real points of a chart family with non rational base")
        tr = g.real_points(st.free_space)
        if tr.dim >= st.free_dim:
            yield IdealStratum(
                st.base, tr, st.free_dim, st.constraints,
                st.provenance + (
                    ("real-free", "rational part of the free space"),))
        w = st.total()
        wc = w.add(g.conjugate_space(w))
        wr = g.real_points(wc)
        if wr.dim:
            yield IdealStratum(
                wr, constraints=st.constraints,
                provenance=st.provenance + (
                    ("real-points", "rational points of the family sum, "
                     "complex dimension %d, real dimension %d"
                     % (wc.dim, wr.dim)),
                    ("dimension-step", "%+d" % (wr.dim - st.dim))))
        return
    jr = g.real_points(st.base)
    if jr.dim:
        yield IdealStratum(
            jr, constraints=st.constraints,
            provenance=st.provenance + (
                ("real-points", "rational points of a complex ideal, "
                 "complex dimension %d, real dimension %d"
                 % (st.dim, jr.dim)),
                ("dimension-step", "%+d" % (jr.dim - st.dim))))
    w = st.base.add(g.conjugate_space(st.base))
    wr = g.real_points(w)
    if wr.dim:
        yield IdealStratum(
            wr, constraints=st.constraints,
            provenance=st.provenance + (
                ("real-points", "rational points of the ideal plus its "
                 "conjugate, complex dimension %d, real dimension %d"
                 % (w.dim, wr.dim)),
                ("dimension-step", "%+d" % (wr.dim - st.dim))))

def enumerate_ideals_real(g):
    """Ideals of a rational algebra that are defined over the rationals.

    Enumerates the complexification and maps every proper stratum back:
    rational presentations are kept, complex ones contribute their
    rational points and the rational points of stratum + conjugate.  Every
    candidate is checked with is_ideal before it is admitted.
    """
    if g.radicand is not None:
        raise ValueError("real enumeration starts from a rational algebra")
    ensure_solvable(g)
    n = g.dim
    complex_lattice = enumerate_ideals(g.complexify())
    bucket = {d: [] for d in range(1, n)}
    for dim in range(1, n):
        for st in complex_lattice.strata(dim):
            for image in _real_images(g, st):
                if image.dim == 0 or image.dim == n:
                    continue
                _verify_stratum(g, image)
                bucket[image.dim].append(image)
    zero, full = _bookend_strata(g)
    by_dim = {0: [zero]}
    for dim in range(1, n):
        by_dim[dim] = _dedup(bucket[dim])
    by_dim[n] = [full]
    return IdealLattice(g, "real", None, by_dim, _edges(by_dim))


#----------------------------------------------------------------------------
# chart expansion and queries

_CHART_LETTERS = "klmnpqrs"

def expand_charts(st):
    """Display charts of a stratum: (pivots, member, parameter names).

    One echelon chart per pivot pattern of the free choice, with fresh
    single letter parameters.  A concrete stratum yields itself with an
    empty pivot tuple.
    """
    if st.free_dim == 0:
        return [((), st.base, ())]
    used = st.param_names()
    counter = itertools.count()

    def namer():
        while True:
            i = next(counter)
            nm = (_CHART_LETTERS[i] if i < len(_CHART_LETTERS)
                  else "k%d" % (i - len(_CHART_LETTERS) + 2))
            if nm not in used:
                return nm

    out = []
    for pivots, rows, names in _grassmann_cells(st.free_space, st.free_dim,
                                                namer):
        member, splits = Subspace.span(list(st.base.rows) + rows,
                                       st.ambient)
        if splits or member.dim != st.dim:
            raise ParameterizedQuotientUnsupported(
                "chart rows degenerate against the stratum base")
        out.append((pivots, member, tuple(names)))
    return out

def _membership(space, x):
    """True / False, or raise when parameters leave it undecided."""
    _, resid = space.reduce_vector(x)
    if vec_is_zero(resid):
        return True
    for e in resid:
        if not scalar_params(e) and _nonzero_scalar(e):
            return False
    raise AmbiguousUnderConstraints(
        "membership depends on unresolved parameters")

def shape_of(g, x, lattice):
    """The smallest ideal of g containing x, from an enumerated lattice.

    Intersects, over every stratum, the smallest member containing x.
    Raises AmbiguousUnderConstraints when parameters in x (or in a chart
    stratum) leave a membership test undecided.
    """
    x = vec(x)
    if len(x) != g.dim:
        raise ValueError("element length does not match the algebra")
    if vec_is_zero(x):
        return lattice.strata(0)[0]
    for _, st in lattice.all_strata():
        if st.base.has_params():
            raise AmbiguousUnderConstraints(
                "the lattice still contains chart families with base "
                "parameters")
    xline, xsplits = Subspace.span([x], g.dim)
    if xsplits:
        raise AmbiguousUnderConstraints(
            "the element degenerates for special parameter values")
    shape = Subspace.full(g.dim)
    for _, st in lattice.all_strata():
        if st.free_dim == 0:
            if _membership(st.base, x):
                shape = shape.intersect(st.base)
            continue
        if not _membership(st.total(), x):
            continue
        if _membership(st.base, x):
            contribution = st.base
        else:
            contribution = st.base.add(xline)
        shape = shape.intersect(contribution)
    if not g.is_ideal(shape):
        raise NotAnIdeal("intersection of covering ideals is not an ideal")
    return IdealStratum(
        shape,
        provenance=(("shape", "smallest enumerated ideal containing %s"
                     % g.element_text(x)),))

def abelian_action_weights(g, d=None):
    """Joint weights of the adjoint action on the center of the derived
    subalgebra, with the radicand the computation settled on.

    Returns (pieces, radicand) where pieces is the joint eigenspace list.
    Useful for deciding whether a finite field cross check is faithful at
    a given prime (the weights must stay distinct after reduction).
    """
    rad = d if d is not None else g.radicand
    zp, mats = _abelian_action(g)
    if zp.dim == 0:
        return [], rad
    try:
        _require_split(mats, rad)
    except _AdoptField as need:
        rad = need.radicand
        _require_split(mats, rad)
    return simultaneous_eigenspaces(mats, rad), rad
