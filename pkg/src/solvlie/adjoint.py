"""One-parameter adjoint flows with exact formal time entries.

The inner automorphisms exp(t ad(x)) of a solvable algebra come in a few
shapes, and each shape admits an exact symbolic representation that never
evaluates a transcendental function:

* nilpotent ad(x): the exponential series terminates, so the flow is a
  genuine polynomial in a time parameter t;

* diagonalizable ad(x) with eigenvalues in the scalar field: in the
  eigenbasis the flow multiplies each coordinate by exp(w*t).  We write
  these multipliers as integer powers of formal unit symbols (one per
  rational direction of the weight lattice), so products of multipliers
  reduce by ordinary polynomial arithmetic: u^a * u^b = u^(a+b) and
  u^0 = 1 hold automatically.  Over a real base field the units carry a
  positivity condition; over a complexified algebra they are merely
  invertible, reflecting that complex time makes exp surjective onto the
  nonzero scalars;

* semisimple ad(x) with one pair of purely imaginary eigenvalue pairs
  +-b*i (b rational): the flow rotates each invariant plane, and we write
  the matrix entries with a formal cosine/sine pair whose defining
  relation and full-circle reachability are recorded on the generator;

* anything else is a mixed generator.  When the additive Jordan split of
  ad(x) has all-rational eigenvalues the two parts commute exactly and
  the flow is still computable (unit-scaled terminating series on each
  generalized eigenspace); otherwise applying the flow raises
  MixedGeneratorUnsupported with the obstruction spelled out.

A GroupWord strings generators together; normalizer_chain_factorization
builds the word that sweeps out the orbit of a line <x>: it climbs a
chain of subalgebras from <x> to the whole algebra, at each step adding
the smallest-index standard basis vector that normalizes the current
subalgebra, so the resulting factor order is deterministic.
"""

from fractions import Fraction
from math import factorial, gcd

from .errors import (
    AmbiguousUnderConstraints,
    ChainStuck,
    IrreducibleDegreeTooHigh,
    MixedGeneratorUnsupported,
    ParameterizedEntriesUnsupported,
)
from .linalg import (
    Matrix,
    Subspace,
    char_poly,
    eigenspace,
    factor_poly,
    kernel,
    solve_linear,
    unit_vector,
    vec,
    vec_add,
    vec_is_zero,
    vec_params,
    vec_scale,
    wedge_coords,
)
from .scalars import (
    Cond,
    Quad,
    fresh_param,
    is_zero_scalar,
    param,
    rational_sqrt,
)

_KINDS = ("unipotent", "scaling", "rotation", "mixed")


class FlowGenerator:
    """One-parameter flow exp(t ad(element)) in symbolic form.

    kind is one of "unipotent", "scaling", "rotation", "mixed"; data holds
    the kind-specific description (see the accessor properties).  The
    formal symbols introduced by the flow (time, units, cosine/sine) are
    fresh per generator, so factors of a word never share symbols.
    """

    __slots__ = ("algebra", "element", "matrix", "kind", "time_symbol",
                 "data")

    def __init__(self, algebra, element, matrix, kind, time_symbol, data):
        if kind not in _KINDS:
            raise ValueError("unknown flow kind %r" % (kind,))
        self.algebra = algebra
        self.element = vec(element)
        self.matrix = matrix
        self.kind = kind
        self.time_symbol = time_symbol
        self.data = data

    @property
    def nilpotency_index(self):
        """Least k with matrix**k == 0 (unipotent generators only)."""
        if self.kind != "unipotent":
            raise ValueError("only unipotent flows have a nilpotency index")
        return self.data["index"]

    @property
    def weights(self):
        """Eigenvalues, parallel to the rows of eigenbasis (scaling only)."""
        if self.kind != "scaling":
            raise ValueError("only scaling flows have weights")
        return self.data["weights"]

    @property
    def eigenbasis(self):
        """Matrix whose rows are an eigenbasis of ad(element) (scaling)."""
        if self.kind != "scaling":
            raise ValueError("only scaling flows have an eigenbasis")
        return self.data["eigenbasis"]

    @property
    def pairs(self):
        """Rotation planes: ((v, w), b) with ad(x) v = b w, ad(x) w = -b v."""
        if self.kind != "rotation":
            raise ValueError("only rotation flows have rotation planes")
        return self.data["pairs"]

    def symbols(self):
        """Formal symbol names this flow writes into vector entries."""
        out = []
        if self.kind == "unipotent":
            out.append(self.time_symbol)
        elif self.kind == "scaling":
            for key in ("unit", "irr_unit"):
                if self.data[key] is not None:
                    out.append(self.data[key])
        elif self.kind == "rotation":
            out.extend((self.data["cos"], self.data["sin"]))
        elif self.data.get("blocks") is not None:
            out.extend((self.time_symbol, self.data["unit"]))
        return tuple(out)

    def conditions(self):
        """Constraints the formal symbols satisfy, as Cond objects.  The
        cosine/sine relation c**2 + s**2 == 1 is not linear-sign shaped;
        it is recorded in data["relation"] instead."""
        d = self.algebra.radicand
        sign = "nonzero" if (d is not None and d < 0) else "pos"
        out = []
        if self.kind == "scaling":
            for key in ("unit", "irr_unit"):
                if self.data[key] is not None:
                    out.append(Cond(sign, param(self.data[key])))
        elif self.kind == "mixed" and self.data.get("blocks") is not None:
            out.append(Cond(sign, param(self.data["unit"])))
        return tuple(out)

    def identity_env(self):
        """Substitution mapping that specializes the flow to time zero."""
        env = {self.time_symbol: Fraction(0)}
        if self.kind == "scaling":
            for key in ("unit", "irr_unit"):
                if self.data[key] is not None:
                    env[self.data[key]] = Fraction(1)
        elif self.kind == "rotation":
            env[self.data["cos"]] = Fraction(1)
            env[self.data["sin"]] = Fraction(0)
        elif self.kind == "mixed" and self.data.get("blocks") is not None:
            env[self.data["unit"]] = Fraction(1)
        return env

    def __repr__(self):
        return "<%s flow of %s>" % (self.kind,
                                    self.algebra.element_text(self.element))


def _lcm(values):
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


def _weight_parts(w):
    """Split a weight into rational coordinates over the basis 1, sqrt(d)."""
    if isinstance(w, Quad):
        return Fraction(w.a), Fraction(w.b)
    return Fraction(w), Fraction(0)


def _int_unit_power(name, k):
    if k == 0:
        return Fraction(1)
    if k > 0:
        return param(name) ** k
    return Fraction(1) / (param(name) ** (-k))


def _coords_in(rows, v):
    """Coordinates of v in the (full, parameter-free) basis given by rows."""
    n = len(v)
    cols = Matrix([[rows[i][j] for i in range(len(rows))] for j in range(n)])
    coords, splits = solve_linear(cols, v)
    if splits:
        raise AmbiguousUnderConstraints(
            "coordinates in the eigenbasis depend on the parameters")
    return coords


def _nilpotency_index(matrix, n):
    pw = matrix
    for k in range(1, n + 1):
        if pw.is_zero():
            return k
        pw = pw * matrix
    return None


def classify_generator(g, x):
    """Classify exp(t ad(x)) into one of the supported flow shapes.

    x must have parameter-free coordinates.  Raises
    IrreducibleDegreeTooHigh when an eigenvalue of ad(x) lives outside
    the algebra's scalar field and the supported quadratic extensions.
    """
    x = vec(x)
    if vec_params(x):
        raise ParameterizedEntriesUnsupported(
            "cannot classify a flow generator with symbolic coordinates")
    n = g.dim
    m = g.ad(x)
    t = fresh_param("t")

    index = _nilpotency_index(m, n)
    if index is not None:
        return FlowGenerator(g, x, m, "unipotent", t, {"index": index})

    linear, quads = factor_poly(char_poly(m), g.radicand)
    if not quads:
        return _semisimple_or_jordan(g, x, m, t, linear)
    if g.radicand is not None:
        raise IrreducibleDegreeTooHigh(
            "eigenvalues of ad(%s) need a second square root extension"
            % g.element_text(x))
    return _rotation_or_mixed(g, x, m, t, linear, quads)


def _semisimple_or_jordan(g, x, m, t, linear):
    """All eigenvalues lie in the scalar field: scaling when ad(x) is
    diagonalizable, otherwise a mixed generator carrying its additive
    Jordan split (which is exact here, so the flow stays computable)."""
    n = g.dim
    rows = []
    weights = []
    for lam, mult in linear:
        for v in eigenspace(m, lam):
            rows.append(v)
            weights.append(lam)
    if len(rows) == n:
        parts = [_weight_parts(w) for w in weights]
        den_r = _lcm([a.denominator for a, _ in parts])
        den_q = _lcm([b.denominator for _, b in parts])
        powers = tuple((int(a * den_r), int(b * den_q)) for a, b in parts)
        data = {
            "weights": tuple(weights),
            "eigenbasis": Matrix(rows),
            "unit": fresh_param("u") if any(a for a, _ in powers) else None,
            "unit_den": den_r,
            "irr_unit": fresh_param("v") if any(b for _, b in powers)
                        else None,
            "irr_den": den_q,
            "powers": powers,
        }
        return FlowGenerator(g, x, m, "scaling", t, data)
    if any(isinstance(lam, Quad) for lam, _ in linear):
        data = {"obstruction": "ad(%s) is not semisimple and has "
                "irrational eigenvalues" % g.element_text(x),
                "blocks": None}
        return FlowGenerator(g, x, m, "mixed", t, data)
    # defective with rational eigenvalues: generalized eigenspaces still
    # exhaust the space because the characteristic polynomial splits, so
    # exp(t ad x) factors into a commuting unit scaling times a
    # terminating series on each block
    blocks = []
    for lam, mult in linear:
        shifted = m - lam * Matrix.identity(n)
        pw = shifted
        for _ in range(n - 1):
            pw = pw * shifted
        vecs, _ = kernel(pw)
        blocks.append((lam, tuple(vecs)))
    den = _lcm([Fraction(lam).denominator for lam, _ in blocks])
    data = {
        "obstruction": "ad(%s) is not semisimple" % g.element_text(x),
        "blocks": tuple(blocks),
        "unit": fresh_param("u"),
        "unit_den": den,
    }
    return FlowGenerator(g, x, m, "mixed", t, data)


def _rotation_or_mixed(g, x, m, t, linear, quads):
    """Quadratic factors over the rationals: a rotation when they are a
    single purely imaginary pair b*i with b rational and the action is
    semisimple with all other eigenvalues zero; otherwise mixed and not
    flowable."""
    n = g.dim

    def mixed(reason):
        data = {"obstruction": "ad(%s) %s" % (g.element_text(x), reason),
                "blocks": None}
        return FlowGenerator(g, x, m, "mixed", t, data)

    if any(not is_zero_scalar(b) for (b, _), _ in quads):
        return mixed("has eigenvalue pairs off the imaginary axis")
    cs = sorted({c for (_, c), _ in quads})
    if len(cs) > 1:
        return mixed("rotates invariant planes at different speeds")
    c = cs[0]
    beta = rational_sqrt(c) if c > 0 else None
    if beta is None:
        return mixed("has eigenvalues outside the Gaussian rationals")
    if any(lam != 0 for lam, _ in linear):
        return mixed("mixes scaling with rotation")
    fixed_mult = sum(mult for lam, mult in linear)
    fixed = eigenspace(m, Fraction(0)) if fixed_mult else []
    if len(fixed) != fixed_mult:
        return mixed("is not semisimple on its fixed subspace")
    plane_mult = sum(mult for _, mult in quads)
    plane, _ = kernel(m * m + c * Matrix.identity(n))
    if len(plane) != 2 * plane_mult:
        return mixed("is not semisimple on its rotation planes")

    pairs = []
    taken = Subspace.span(list(fixed), n)[0]
    for v in plane:
        if taken.contains(v):
            continue
        w = vec_scale(Fraction(1) / beta, m.matvec(v))
        pairs.append(((vec(v), vec(w)), beta))
        taken = taken.add(Subspace.span([v, w], n)[0])
    data = {
        "pairs": tuple(pairs),
        "fixed": tuple(vec(v) for v in fixed),
        "cos": fresh_param("c"),
        "sin": fresh_param("s"),
        "relation": "cos**2 + sin**2 == 1",
        "full_circle": True,
    }
    return FlowGenerator(g, x, m, "rotation", t, data)


def flow_apply(f, v):
    """Image of the element v under the flow of f, with formal entries.

    Unipotent flows give polynomials in the time symbol; scaling flows
    give unit monomials; rotation flows give linear expressions in the
    formal cosine/sine pair.  Mixed generators are only supported when
    classify_generator found an exact rational Jordan split."""
    v = vec(v)
    if f.kind == "unipotent":
        t = param(f.time_symbol)
        out = v
        term = v
        for k in range(1, f.data["index"]):
            term = f.matrix.matvec(term)
            out = vec_add(out, vec_scale(t ** k * Fraction(1, factorial(k)),
                                         term))
        return out
    if f.kind == "scaling":
        basis = f.data["eigenbasis"].rows
        coords = _coords_in(basis, v)
        out = vec([Fraction(0)] * len(v))
        for i, row in enumerate(basis):
            a, b = f.data["powers"][i]
            mono = Fraction(1)
            if a:
                mono = mono * _int_unit_power(f.data["unit"], a)
            if b:
                mono = mono * _int_unit_power(f.data["irr_unit"], b)
            out = vec_add(out, vec_scale(coords[i] * mono, row))
        return out
    if f.kind == "rotation":
        rows = list(f.data["fixed"])
        for (pv, pw), _ in f.data["pairs"]:
            rows.extend((pv, pw))
        coords = _coords_in(rows, v)
        out = vec([Fraction(0)] * len(v))
        k = len(f.data["fixed"])
        for i in range(k):
            out = vec_add(out, vec_scale(coords[i], rows[i]))
        cs = param(f.data["cos"])
        sn = param(f.data["sin"])
        for j, ((pv, pw), _) in enumerate(f.data["pairs"]):
            a, b = coords[k + 2 * j], coords[k + 2 * j + 1]
            out = vec_add(out, vec_scale(a * cs - b * sn, pv))
            out = vec_add(out, vec_scale(a * sn + b * cs, pw))
        return out
    return _flow_mixed(f, v)


def _flow_mixed(f, v):
    blocks = f.data.get("blocks")
    if blocks is None:
        raise MixedGeneratorUnsupported(f.data["obstruction"])
    rows = [r for _, brows in blocks for r in brows]
    coords = _coords_in(rows, v)
    n = len(v)
    t = param(f.time_symbol)
    out = vec([Fraction(0)] * n)
    i = 0
    for lam, brows in blocks:
        comp = vec([Fraction(0)] * n)
        for r in brows:
            comp = vec_add(comp, vec_scale(coords[i], r))
            i += 1
        # exp(t(M - lam)) is a terminating series on this block
        acc = comp
        term = comp
        for k in range(1, n):
            term = vec_add(f.matrix.matvec(term), vec_scale(-lam, term))
            if vec_is_zero(term):
                break
            acc = vec_add(acc, vec_scale(t ** k * Fraction(1, factorial(k)),
                                         term))
        mono = _int_unit_power(f.data["unit"],
                               int(Fraction(lam) * f.data["unit_den"]))
        out = vec_add(out, vec_scale(mono, acc))
    return out


def exterior_flow_apply(f, vectors):
    """Flow each wedge factor and expand into the canonical wedge basis.

    vectors is an ordered list of elements; the result is the coordinate
    tuple of the transformed wedge over wedge_indices(dim, len(vectors)),
    exact in the flow's formal symbols."""
    moved = [flow_apply(f, w) for w in vectors]
    return wedge_coords(moved, len(f.element))


class GroupWord:
    """Ordered product of flow generators.

    factors are listed in application order: factors[0] acts first, i.e.
    it is the rightmost factor when the product is written in the usual
    left-to-right operator notation.  chain optionally records the
    subalgebra chain a normalizer factorization climbed."""

    __slots__ = ("factors", "chain")

    def __init__(self, factors, chain=()):
        self.factors = tuple(factors)
        self.chain = tuple(chain)

    def __len__(self):
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)

    def apply(self, v):
        for f in self.factors:
            v = flow_apply(f, v)
        return v

    def apply_wedge(self, vectors):
        moved = list(vectors)
        for f in self.factors:
            moved = [flow_apply(f, w) for w in moved]
        return wedge_coords(moved, len(self.factors[0].element))

    def conditions(self):
        return tuple(c for f in self.factors for c in f.conditions())

    def identity_env(self):
        env = {}
        for f in self.factors:
            env.update(f.identity_env())
        return env

    def symbols(self):
        return tuple(s for f in self.factors for s in f.symbols())

    def __repr__(self):
        return "<GroupWord of %d factors>" % len(self.factors)


def _decided_membership(space, x):
    _, resid = space.reduce_vector(x)
    if vec_is_zero(resid):
        return True
    if any(not vec_params((e,)) and e != 0 for e in resid):
        return False
    raise AmbiguousUnderConstraints(
        "membership in the derived subalgebra depends on the parameters")


def _normalizes(g, e, space):
    """Whether [e, space] lands back in space, identically in any
    parameters (a parameter-dependent residual counts as failure)."""
    for row in space.rows:
        _, resid = space.reduce_vector(g.bracket(e, row))
        if not vec_is_zero(resid):
            return False
    return True


def _grow(space, extra, n):
    bigger, splits = Subspace.span(list(space.rows) + [extra], n)
    if splits:
        raise AmbiguousUnderConstraints(
            "the subalgebra chain degenerates for special parameter values")
    return bigger


def _grow_generic(space, extra, n):
    """Like _grow but keeps the generic branch when parameters pivot."""
    bigger, _ = Subspace.span(list(space.rows) + [extra], n)
    return bigger


def _factor_for(g, el):
    if vec_params(el):
        # the factor generated by the target element itself; it fixes the
        # target line, so reductions never need to expand its flow
        data = {"obstruction":
                "generator %s has symbolic coordinates"
                % g.element_text(el),
                "blocks": None}
        return FlowGenerator(g, el, g.ad(el), "mixed", fresh_param("t"),
                             data)
    return classify_generator(g, el)


def normalizer_chain_factorization(g, x):
    """Word of flows sweeping the orbit of the line <x>.

    For x in the derived subalgebra the word follows a chain of
    subalgebras <X1 = x> < <X1, X2> < ... = g where each step adds the
    smallest-index standard basis vector normalizing the current member,
    drawing from the derived subalgebra while any of it remains
    (ChainStuck if no vector qualifies).  Otherwise the complement comes
    first:
    x itself, then the remaining standard complement vectors of the
    derived subalgebra, then a basis of it.  Either way the factor list
    starts with the generator of <x> (the rightmost factor in product
    notation), so that factor stabilizes the target line."""
    x = vec(x)
    if vec_is_zero(x):
        raise ValueError("the zero element spans no line")
    n = g.dim
    gp = g.derived_subalgebra()
    elements = [x]
    # a leading parameter coefficient splits the span; the generic branch
    # is fine for bookkeeping because every reduction move revalidates
    # itself against the actual element
    space, _ = Subspace.span([x], n)
    spaces = [space]
    if _decided_membership(gp, x):
        while space.dim < n:
            # stay inside the derived subalgebra until it is exhausted:
            # it is nilpotent, so normalizers keep growing there, whereas
            # a greedy step outside can enter a self-normalizing dead end
            inside = not space.contains_space(gp)
            pick = None
            for e in space.complement_basis():
                if inside and not gp.contains(e):
                    continue
                if _normalizes(g, e, space):
                    pick = e
                    break
            if pick is None:
                raise ChainStuck(
                    "no standard basis vector normalizes %s"
                    % g.space_text(space))
            elements.append(pick)
            space = _grow(space, pick, n)
            spaces.append(space)
        # the chain never visits the pivot column of x itself, but the
        # flow along that coordinate direction can move x when x has
        # other components; add it so reductions can use it
        for c in spaces[0].pivots:
            e = unit_vector(n, c)
            try:
                if _decided_membership(spaces[0], e):
                    continue
            except AmbiguousUnderConstraints:
                pass  # distinct from the line for generic parameter values
            elements.append(e)
            spaces.append(space)
    else:
        # sweep every complement direction: a flow the reduction needs may
        # sit at a coordinate x already touches, so no early stop on span
        for e in gp.complement_basis():
            try:
                if _decided_membership(space, e):
                    continue
            except AmbiguousUnderConstraints:
                pass  # outside the line for generic parameter values
            elements.append(e)
            space = _grow_generic(space, e, n)
            spaces.append(space)
        for r in gp.rows:
            elements.append(vec(r))
            space = _grow_generic(space, r, n)
            spaces.append(space)
        if space.dim != n:
            raise ChainStuck("the complement sweep missed part of the "
                             "algebra")
    return GroupWord([_factor_for(g, el) for el in elements], spaces)
