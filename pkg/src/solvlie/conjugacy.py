"""Conjugacy classes of subalgebras under the inner automorphism group.

The classification is exact and dimension by dimension.  Lines come first:
every one-dimensional subspace lies in a unique smallest ideal (its shape),
so the ideal lattice cuts the projective space into strata, and each
stratum contributes candidate forms: generic elements with fresh parameter
coefficients and the exclusion constraints that keep them off the smaller
ideals.  A candidate is then pushed toward a canonical representative by a
greedy loop of exact moves along its chain factorization word:

* unipotent kill: a coordinate that depends linearly on the flow time
  with a provably nonvanishing coefficient is solved to zero exactly;

* scaling normalization: a parameter coordinate multiplied by a formal
  unit power is rescaled to +1 or -1, forking a sign case split (and a
  zero branch when the sign is unconstrained); over a complexified
  algebra units are merely invertible, so there is a single branch;

* rotation alignment: a line inside a rotation plane is carried to the
  plane's first axis, using the full circle of the rotation flow.

Every move is recorded in a ReductionTrace whose replay reproduces the
representative as a polynomial identity.  Parameters that survive are
moduli of a class family.  Higher dimensions extend each class through
its normalizer: lines of N(S)/S classified recursively pull back to the
classes of one dimension more.  Classes are separated by an invariant
signature (intersection dimensions against the characteristic series,
shape data, eigenvalue data of line generators) and, for signature ties,
by an exact orbit computation on wedge coordinates.  The orbit check
only ever certifies distinctness; it never claims two classes are
conjugate, so undecided pairs stay flagged.
"""

from fractions import Fraction

from .errors import (
    AmbiguousUnderConstraints,
    ChainStuck,
    IrreducibleDegreeTooHigh,
    MixedGeneratorUnsupported,
    NonCommutingFamily,
    NonDiagonalizableTorus,
    NonRationalWeights,
    ParameterizedQuotientUnsupported,
)
from .adjoint import classify_generator, flow_apply, normalizer_chain_factorization
from .ideals import enumerate_ideals, enumerate_ideals_real, expand_charts
from .liealg import ensure_solvable
from .linalg import (
    Matrix,
    Subspace,
    char_poly,
    eigenspace,
    factor_poly,
    matrix_restrict,
    simultaneous_eigenspaces,
    solve_linear,
    vec,
    vec_add,
    vec_is_zero,
    vec_params,
    vec_scale,
    vec_sub,
    vec_subs,
    wedge_coords,
)
from .scalars import (
    Cond,
    Poly,
    Quad,
    RatFunc,
    as_scalar,
    fresh_param,
    is_provably_nonzero,
    is_zero_scalar,
    param,
    scalar_params,
    scalar_subs,
    scalar_to_text,
    sign_of,
)

_MAX_PASSES = 8
_LETTER_POOL = "klmnpqrabdfgh"


#----------------------------------------------------------------------------
# result types

class CandidateForm:
    """Generic element of one shape stratum, with exclusion constraints.

    element has parameter coefficients; shape is the IdealStratum whose
    generic members the element ranges over; constraints are the Cond
    objects keeping it off every smaller ideal.
    """

    __slots__ = ("element", "shape", "constraints")

    def __init__(self, element, shape, constraints=()):
        self.element = vec(element)
        self.shape = shape
        self.constraints = tuple(constraints)

    def param_names(self):
        return sorted(vec_params(self.element))

    def __repr__(self):
        return "CandidateForm(shape_dim=%d, params=%s)" % (
            self.shape.dim, ",".join(self.param_names()) or "-")


class ReductionStep:
    """One recorded move: a flow factor, the solved symbol values, and the
    exact element before and after."""

    __slots__ = ("kind", "gen", "factor", "env", "rescale", "before",
                 "after", "data", "note")

    def __init__(self, kind, before, after, gen=None, factor=None, env=(),
                 rescale=Fraction(1), data=None, note=""):
        self.kind = kind
        self.gen = gen
        self.factor = vec(factor) if factor is not None else None
        self.env = tuple(env)
        self.rescale = rescale
        self.before = vec(before)
        self.after = vec(after)
        self.data = data or {}
        self.note = note

    def __repr__(self):
        return "<%s step>" % self.kind


class ReductionTrace:
    """Ordered list of moves from a candidate to its representative.

    replay applies each move again from scratch: flows are re-evaluated
    and the stored symbol assignments substituted, so agreement with the
    recorded output is a polynomial identity, not a bookkeeping check.
    """

    __slots__ = ("algebra", "start", "steps", "case_splits", "flags")

    def __init__(self, algebra, start, steps=(), case_splits=(), flags=()):
        self.algebra = algebra
        self.start = vec(start)
        self.steps = tuple(steps)
        self.case_splits = tuple(case_splits)
        self.flags = frozenset(flags)

    def extended(self, step, splits=(), flags=()):
        return ReductionTrace(self.algebra, self.start,
                              self.steps + (step,),
                              self.case_splits + tuple(splits),
                              self.flags | frozenset(flags))

    def with_flags(self, flags):
        return ReductionTrace(self.algebra, self.start, self.steps,
                              self.case_splits, self.flags | frozenset(flags))

    def replay(self, start=None):
        cur = vec(start) if start is not None else self.start
        for step in self.steps:
            env = dict(step.env)
            if step.kind == "substitute":
                cur = vec_subs(cur, env)
            elif step.kind == "unipotent-kill":
                cur = vec_subs(flow_apply(step.gen, cur), env)
            elif step.kind == "scaling-normalize":
                form = _scaling_orbit_form(step.gen, cur, step.data["ref"],
                                           step.data["m"], step.data["dt"])
                cur = vec_scale(step.rescale, vec_subs(form, env))
            elif step.kind == "rotation-normalize":
                moved = vec_subs(flow_apply(step.gen, cur), env)
                cur = vec_scale(step.rescale, moved)
            elif step.kind == "weight-kill":
                cur = _nilpotent_conjugate(self.algebra, step.factor, cur)
            else:
                raise ValueError("unknown step kind %r" % (step.kind,))
        return cur

    def __repr__(self):
        return "<ReductionTrace %d steps, %d splits>" % (
            len(self.steps), len(self.case_splits))


class InvariantSignature:
    """Conjugation invariants of a subalgebra.

    derived / lower_central hold the intersection dimensions against the
    characteristic series of the ambient algebra; center is the dimension
    of the intersection with the center; shape_dim is the dimension of the
    smallest enumerated ideal containing the subalgebra; eigen carries the
    eigenvalue data of a generator for one-dimensional subalgebras (kind
    plus projectively normalized weights, which do not depend on the
    choice of generator).
    """

    __slots__ = ("dim", "derived", "lower_central", "center", "shape_dim",
                 "eigen")

    def __init__(self, dim, derived, lower_central, center, shape_dim,
                 eigen=None):
        self.dim = dim
        self.derived = tuple(derived)
        self.lower_central = tuple(lower_central)
        self.center = center
        self.shape_dim = shape_dim
        self.eigen = eigen

    def as_tuple(self):
        return (self.dim, self.derived, self.lower_central, self.center,
                self.shape_dim, self.eigen)

    def __eq__(self, other):
        if not isinstance(other, InvariantSignature):
            return NotImplemented
        return self.as_tuple() == other.as_tuple()

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        return hash(self.as_tuple())

    def __repr__(self):
        return "InvariantSignature%r" % (self.as_tuple(),)


class SubalgebraClass:
    """One conjugacy class: a representative subalgebra, its surviving
    moduli constraints, the invariant signature, and how it was found."""

    __slots__ = ("dim", "representative", "constraints", "signature",
                 "provenance", "trace")

    def __init__(self, dim, representative, constraints, signature,
                 provenance=(), trace=None):
        self.dim = dim
        self.representative = representative
        self.constraints = tuple(constraints)
        self.signature = signature
        self.provenance = tuple(provenance)
        self.trace = trace

    def moduli(self):
        names = set()
        for r in self.representative.rows:
            names |= vec_params(r)
        return sorted(names)

    def flags(self):
        return sorted({tag for tag, _ in self.provenance
                       if tag in ("manual", "moduli-unverified",
                                  "possibly-conjugate")})

    def key(self):
        mapping = _class_rename(self.representative)
        rows = tuple(
            tuple(scalar_to_text(scalar_subs(e, mapping)) for e in r)
            for r in self.representative.rows)
        conds = tuple(sorted(
            "%s:%s" % (c.kind, scalar_to_text(scalar_subs(c.expr, mapping)))
            for c in self.constraints))
        return (self.dim, rows, conds)

    def __repr__(self):
        return "SubalgebraClass(dim=%d, moduli=%s)" % (
            self.dim, ",".join(self.moduli()) or "-")


def _class_rename(space):
    names = []
    for r in space.rows:
        for e in r:
            for nm in sorted(scalar_params(e)):
                if nm not in names:
                    names.append(nm)
    return {nm: param("k%d" % (i + 1)) for i, nm in enumerate(names)}


def class_text(g, cls):
    """Human readable form: representative span plus constraints."""
    text = g.space_text(cls.representative)
    if cls.constraints:
        text += " with " + ", ".join(
            _cond_text(c) for c in cls.constraints)
    return text


def _cond_text(c):
    word = {"nonzero": "%s != 0", "zero": "%s == 0", "pos": "%s > 0",
            "neg": "%s < 0"}[c.kind]
    return word % scalar_to_text(c.expr)


#----------------------------------------------------------------------------
# candidate forms

def _lattice_for(g):
    if g.radicand is None:
        return enumerate_ideals_real(g)
    return enumerate_ideals(g)


def candidate_forms_1d(g, lattice=None):
    """One generic line per shape stratum chart, covering all of g.

    The element of a chart of a stratum is normalized at a forced
    coordinate (one whose vanishing would land in a smaller ideal) when
    there is one, else branched over the leading nonzero coordinate.
    Exclusion constraints keep each branch off the smaller ideals, so the
    branches partition the nonzero elements of g.
    """
    if lattice is None:
        lattice = _lattice_for(g)
    used = set()

    def next_letter():
        for ch in _LETTER_POOL:
            if ch not in used:
                used.add(ch)
                return ch
        return fresh_param("k", avoid=used)

    forms = []
    for d in lattice.dims:
        if d == 0:
            continue
        for st in lattice.strata(d):
            lowers = [ls.total() for dd in lattice.dims if 0 < dd < d
                      for ls in lattice.strata(dd)]
            for _, member, chart_names in expand_charts(st):
                used.update(chart_names)
                exclusions = []
                for low in lowers:
                    e = member.intersect(low)
                    if e.dim:
                        exclusions.append(e)
                for element, conds in _element_branches(member, exclusions,
                                                        next_letter):
                    forms.append(CandidateForm(element, st, conds))
    return forms


def _element_branches(member, exclusions, next_letter):
    """Normalized generic elements of the member avoiding the exclusions,
    as (element, conds) pairs."""
    d = member.dim
    rows = member.rows
    n = member.ambient
    forced = None
    for i in range(d):
        others, _ = Subspace.span([rows[j] for j in range(d) if j != i], n)
        if any(e.dim == others.dim and e.contains_space(others)
               for e in exclusions):
            forced = i
            break
    charts = []
    if forced is not None:
        charts.append((forced, [j for j in range(d) if j != forced]))
    else:
        for i in range(d):
            charts.append((i, list(range(i + 1, d))))
    out = []
    for pivot, free_js in charts:
        element = vec(rows[pivot])
        for j in free_js:
            element = vec_add(element, vec_scale(param(next_letter()),
                                                 rows[j]))
        out.extend(_exclusion_branches(element, exclusions))
    return out


def _exclusion_branches(element, exclusions, conds=()):
    """Case analysis keeping the element off every exclusion subspace.

    Each exclusion demands a nonzero residual.  A residual with a nonzero
    constant entry costs nothing; a single parameter entry becomes a
    nonzero condition; several parameter entries split into the branch
    where the first is nonzero and the branch where it is set to zero.
    """
    for idx, exc in enumerate(exclusions):
        _, residual = exc.reduce_vector(element)
        if any(not scalar_params(e) and not is_zero_scalar(e)
               for e in residual):
            continue
        live = [e for e in residual
                if scalar_params(e) and not is_zero_scalar(e)]
        if not live:
            return []  # the whole branch sits inside the exclusion
        if len(live) == 1:
            conds = conds + (Cond("nonzero", live[0]),)
            continue
        first = live[0]
        name = _bare_param_name(first)
        if name is None:
            raise AmbiguousUnderConstraints(
                "exclusion residual %s is not a single parameter"
                % scalar_to_text(first))
        rest = exclusions[idx:]
        with_it = _exclusion_branches(element, rest,
                                      conds + (Cond("nonzero", first),))
        without = _exclusion_branches(
            vec_subs(element, {name: Fraction(0)}), rest, conds)
        return with_it + without
    return [(element, conds)]


def _bare_param_name(x):
    """The parameter name when x is a rational multiple of one parameter."""
    x = as_scalar(x)
    if isinstance(x, RatFunc):
        if x.den != Poly.one():
            return None
        x = x.num
    if not isinstance(x, Poly) or len(x.terms) != 1:
        return None
    (mono, coeff), = x.terms.items()
    if len(mono) != 1 or mono[0][1] != 1:
        return None
    if isinstance(coeff, Quad):
        return None
    return mono[0][0]


#----------------------------------------------------------------------------
# the move loop

class _Branch:
    __slots__ = ("element", "conds", "trace", "scaled", "rotated")

    def __init__(self, element, conds, trace, scaled=frozenset(),
                 rotated=frozenset()):
        self.element = vec(element)
        self.conds = tuple(conds)
        self.trace = trace
        self.scaled = scaled
        self.rotated = rotated


def reduce_element(g, form, lattice=None):
    """Reduce a candidate form to canonical representatives.

    Returns a list of SubalgebraClass, one per constraint branch the
    reduction forked into.  Branches the engine cannot finish (a mixed
    flow in the word, or no terminating move order) carry the flag
    "manual" in their provenance.
    """
    if lattice is None:
        lattice = _lattice_for(g)
    real = g.radicand is None or g.radicand >= 0
    start = _Branch(form.element, form.constraints,
                    ReductionTrace(g, form.element))
    queue = [start]
    done = []
    while queue:
        br = queue.pop(0)
        settled, children = _run_moves(g, br, real)
        queue.extend(children)
        if settled is not None:
            done.append(settled)
    classes = []
    for br in done:
        while True:
            cleaned = _reparametrize(br)
            if cleaned is None:
                break
            br = cleaned
        flags = sorted(br.trace.flags)
        rep = _line_span(br.element, g.dim)
        keep = [c for c in br.conds
                if scalar_params(c.expr) & vec_params(br.element)]
        provenance = [("candidate",
                       "shape stratum of dimension %d" % form.shape.dim)]
        provenance += [("manual", reason) for reason in flags
                       if isinstance(reason, str) and reason != "manual"]
        if "manual" in flags:
            provenance.append(("manual", "reduction left unfinished"))
        sig = invariant_signature(g, rep, lattice=lattice, conds=keep)
        classes.append(SubalgebraClass(1, rep, keep, sig,
                                       provenance, br.trace))
    return classes


def _run_moves(g, br, real):
    """Drive one branch to a fixpoint; forks return as new branches."""
    for _ in range(_MAX_PASSES):
        try:
            word = normalizer_chain_factorization(g, br.element)
        except (ChainStuck, AmbiguousUnderConstraints) as err:
            return _Branch(br.element, br.conds,
                           br.trace.with_flags(("manual", str(err)))), []
        factors = word.factors[1:]
        mixed = [f for f in factors if f.kind == "mixed"]
        changed = False
        for f in factors:
            if f.kind != "unipotent":
                continue
            while True:
                killed = _try_kill(g, f, br, real)
                if killed is None:
                    break
                br = killed
                changed = True
        if not changed:
            for f in factors:
                if f.kind != "scaling":
                    continue
                outcome = _try_scale(g, f, br, real)
                if outcome is None:
                    continue
                settled, children = outcome
                if settled is not None:
                    br = settled
                    changed = True
                    break
                return None, children
        if not changed:
            for f in factors:
                if f.kind != "rotation":
                    continue
                rotated = _try_rotate(g, f, br)
                if rotated is not None:
                    br = rotated
                    changed = True
                    break
        if not changed:
            # renaming an affine coefficient to a bare parameter can make
            # a scaling target out of a coordinate the moves above skipped
            cleaned = _reparametrize(br)
            if cleaned is not None:
                br = cleaned
                changed = True
        if not changed:
            if mixed:
                reasons = tuple(f.data["obstruction"] for f in mixed)
                return _Branch(br.element, br.conds,
                               br.trace.with_flags(("manual",) + reasons)), []
            return br, []
    return _Branch(br.element, br.conds,
                   br.trace.with_flags(("manual",
                                        "move loop did not settle"))), []


def _nonzero_count(v):
    return sum(1 for e in v if not is_zero_scalar(e))


def _reparametrize(br):
    """Collapse a coordinate whose expression is affine in a parameter
    that occurs nowhere else: an exact change of chart replacing the
    whole expression by one fresh modulus."""
    x = br.element
    per_coord = [scalar_params(e) for e in x]
    everywhere = set().union(*per_coord) if per_coord else set()
    for z in sorted(everywhere):
        hits = [i for i, s in enumerate(per_coord) if z in s]
        if len(hits) != 1:
            continue
        if any(z in scalar_params(c.expr) for c in br.conds):
            continue
        i = hits[0]
        expr = as_scalar(x[i])
        c = _lone_linear_coeff(expr, z)
        if c is None:
            continue
        rest = expr - c * param(z)
        if is_zero_scalar(rest) or z in scalar_params(rest):
            continue
        taken = everywhere | {nm for cond in br.conds
                              for nm in scalar_params(cond.expr)}
        nm = next((ch for ch in _LETTER_POOL if ch not in taken), None)
        if nm is None:
            nm = fresh_param("k", avoid=taken)
        value = (param(nm) - rest) / c
        x_new = vec_subs(x, {z: value})
        step = ReductionStep("substitute", x, x_new, env=((z, value),),
                             note="renames the free coefficient to %s" % nm)
        return _Branch(x_new, br.conds, br.trace.extended(step),
                       br.scaled, br.rotated)
    return None


def _lone_linear_coeff(expr, z):
    """The rational coefficient of z when expr is a polynomial in which z
    occurs only as the bare degree one monomial; None otherwise."""
    if isinstance(expr, RatFunc) and expr.den.is_const():
        expr = expr.num * (Fraction(1) / expr.den.const_value())
    if not isinstance(expr, Poly):
        return None
    c = None
    for mono, coeff in expr.terms.items():
        if any(nm == z for nm, _ in mono):
            if mono != ((z, 1),) or isinstance(coeff, Quad):
                return None
            c = coeff
    return c


def _line_span(x, n):
    """Span of one element; a leading parameter coefficient is kept in
    place instead of being divided out by echelonization."""
    span, splits = Subspace.span([x], n)
    if not splits:
        return span
    piv = None
    for i, e in enumerate(x):
        if not is_zero_scalar(e):
            if piv is None:
                piv = i
            if not scalar_params(e):
                piv = i
                break
    return Subspace(n, (tuple(x),), (piv,))


def _try_kill(g, f, br, real):
    """One unipotent kill: the lowest coordinate linear in the flow time
    with a provably nonvanishing coefficient, solved to zero exactly.
    Only kills that strictly decrease the number of nonzero coordinates
    are taken, so the loop terminates."""
    x = br.element
    y = flow_apply(f, x)
    t = f.time_symbol
    before = _nonzero_count(x)
    for j in range(len(x)):
        if is_zero_scalar(x[j]):
            continue
        delta = as_scalar(y[j]) - as_scalar(x[j])
        if is_zero_scalar(delta):
            continue
        coeff = scalar_subs(delta, {t: Fraction(1)})
        if not is_zero_scalar(delta - as_scalar(coeff) * param(t)):
            continue  # the coordinate is not linear in the time
        if not is_provably_nonzero(coeff, br.conds, real=real):
            continue
        t_star = -as_scalar(x[j]) / coeff
        x_new = vec_subs(y, {t: t_star})
        if _nonzero_count(x_new) >= before:
            continue
        step = ReductionStep("unipotent-kill", x, x_new, gen=f,
                             factor=f.element, env=((t, t_star),),
                             data={"coordinate": j},
                             note="clears %s" % g.labels[j])
        return _Branch(x_new, br.conds, br.trace.extended(step),
                       br.scaled, br.rotated)
    return None


def _coords_against(rows, v):
    """Coordinates of v in the given (not echelonized) spanning rows."""
    cols = Matrix([[rows[i][j] for i in range(len(rows))]
                   for j in range(len(v))])
    coords, splits = solve_linear(cols, v)
    if splits:
        raise AmbiguousUnderConstraints(
            "coordinates depend on the parameters")
    return coords


def _eigen_coords(f, v):
    return _coords_against(f.data["eigenbasis"].rows, v)


def _scaling_orbit_form(f, v, ref, mname, dt):
    """The flow image of v rewritten with m = unit**dt after dividing out
    the unit power of the reference eigencomponent.  All exponents are
    exact integers because dt divides every relative power in play."""
    basis = f.data["eigenbasis"].rows
    coords = _eigen_coords(f, v)
    powers = f.data["powers"]
    p_ref = powers[ref][0]
    m = param(mname)
    out = vec([Fraction(0)] * len(v))
    for i, row in enumerate(basis):
        c = as_scalar(coords[i])
        if is_zero_scalar(c):
            continue
        rel = powers[i][0] - p_ref
        q, r = divmod(rel, dt)
        if r:
            raise ValueError("relative power %d not divisible by %d"
                             % (rel, dt))
        if q > 0:
            c = c * m ** q
        elif q < 0:
            c = c * (Fraction(1) / (m ** (-q)))
        out = vec_add(out, vec_scale(c, row))
    return out


def _try_scale(g, f, br, real):
    """One scaling normalization.  Works projectively on the
    eigencomponents of the element: the ratio of a target component to a
    constant reference component, when the target's relative unit power
    divides all the others, is rescaled to +-1 (to 1 over a complexified
    algebra, where units are merely invertible).  Parameter ratios fork a
    sign case split plus a zero branch when unconstrained.  Returns
    (branch, []) when the sign is already decided, or (None, children)
    when the move forks."""
    if f.data["irr_unit"] is not None or f.data["unit"] is None:
        return None
    key = tuple(f.element)
    if key in br.scaled:
        return None
    x = br.element
    try:
        coords = _eigen_coords(f, x)
    except AmbiguousUnderConstraints:
        return None
    powers = [p for p, _ in f.data["powers"]]
    comps = [(i, as_scalar(coords[i]), powers[i])
             for i in range(len(coords))
             if not is_zero_scalar(coords[i])]
    anchors = [(i, c, p) for i, c, p in comps if not scalar_params(c)]
    if not anchors or len(comps) < 2:
        return None
    ref, c_ref, p_ref = anchors[0]
    moved = [(i, c, p - p_ref) for i, c, p in comps
             if i != ref and p != p_ref]
    if not moved:
        return None
    targets = []
    for i, c, rel in moved:
        if not all(r % rel == 0 for _, _, r in moved):
            continue
        ratio = as_scalar(c) / c_ref
        if scalar_params(ratio):
            if _bare_param_name(c) is not None:
                targets.append((i, c, rel, ratio))
        elif not isinstance(ratio, Quad) and ratio in (1, -1):
            continue
        else:
            targets.append((i, c, rel, ratio))
    if not targets:
        return None
    targets.sort(key=lambda item: (abs(item[2]), item[0]))
    tgt_i, tgt_c, dt, ratio = targets[0]
    scaled = br.scaled | {key}

    def normalized(eps, extra_cond):
        mname = fresh_param("m")
        value = as_scalar(eps) * c_ref / as_scalar(tgt_c)
        rescale = Fraction(1) / c_ref
        form = _scaling_orbit_form(f, x, ref, mname, dt)
        x_new = vec_scale(rescale, vec_subs(form, {mname: value}))
        conds = br.conds + ((extra_cond,) if extra_cond else ())
        step = ReductionStep(
            "scaling-normalize", x, x_new, gen=f, factor=f.element,
            env=((mname, value),), rescale=rescale,
            data={"ref": ref, "m": mname, "dt": dt,
                  "coordinate": tgt_i},
            note="sets the %s component to %d"
                 % (g.element_text(f.data["eigenbasis"].rows[tgt_i]), eps))
        splits = (extra_cond,) if extra_cond else ()
        return _Branch(x_new, conds, br.trace.extended(step, splits),
                       scaled, br.rotated)

    if not scalar_params(ratio):
        if not real:
            return normalized(1, None), []
        verdict = sign_of(ratio, br.conds)
        return normalized(1 if verdict == "pos" else -1, None), []
    pname = _bare_param_name(tgt_c)
    if not real:
        branches = [normalized(1, Cond("nonzero", ratio))]
        if not _conds_force_nonzero(ratio, br.conds, real):
            # the zero branch applied no flow, so the factor stays usable
            branches.append(_zero_branch(br, pname, br.scaled))
        return None, branches
    sign = sign_of(ratio, br.conds)
    if sign == "pos":
        return normalized(1, None), []
    if sign == "neg":
        return normalized(-1, None), []
    branches = [normalized(1, Cond("pos", ratio)),
                normalized(-1, Cond("neg", ratio))]
    if not _conds_force_nonzero(ratio, br.conds, real):
        # the zero branch applied no flow, so the factor stays usable
        branches.append(_zero_branch(br, pname, br.scaled))
    return None, branches


def _conds_force_nonzero(expr, conds, real):
    return is_provably_nonzero(expr, conds, real=real)


def _zero_branch(br, pname, scaled):
    env = {pname: Fraction(0)}
    x_new = vec_subs(br.element, env)
    step = ReductionStep("substitute", br.element, x_new,
                         env=((pname, Fraction(0)),),
                         note="case %s == 0" % pname)
    conds = tuple(c for c in conds_without(br.conds, pname))
    split = Cond("zero", param(pname))
    return _Branch(x_new, conds, br.trace.extended(step, (split,)),
                   scaled, br.rotated)


def conds_without(conds, pname):
    for c in conds:
        if pname in scalar_params(c.expr):
            continue
        yield c


def _try_rotate(g, f, br):
    """Align a line lying in one rotation plane with the plane's first
    axis.  The solved cosine/sine pair is kept formal: the substitution
    uses a fresh symbol for the inverse norm, and the identity holds for
    every value of it, while a real value with cos**2 + sin**2 == 1
    always exists because the plane norm is positive."""
    key = tuple(f.element)
    if key in br.rotated:
        return None
    x = br.element
    for (pv, pw), _beta in f.data["pairs"]:
        plane, _ = Subspace.span([pv, pw], len(x))
        _, residual = plane.reduce_vector(x)
        if not vec_is_zero(residual):
            continue
        coords = _coords_against([pv, pw], x)
        a, b = as_scalar(coords[0]), as_scalar(coords[1])
        if is_zero_scalar(b):
            return None  # already on the first axis
        lam = fresh_param("r")
        cname, sname = f.data["cos"], f.data["sin"]
        env = {cname: a * param(lam), sname: -b * param(lam)}
        rescale = Fraction(1) / (param(lam) * (a * a + b * b))
        moved = vec_subs(flow_apply(f, x), env)
        x_new = vec_scale(rescale, moved)
        step = ReductionStep(
            "rotation-normalize", x, x_new, gen=f, factor=f.element,
            env=tuple(env.items()), rescale=rescale,
            note="full circle reaches the first axis of the plane")
        return _Branch(x_new, br.conds, br.trace.extended(step),
                       br.scaled, br.rotated | {key})
    return None


#----------------------------------------------------------------------------
# invariants

def invariant_signature(g, s, lattice=None, conds=()):
    """Conjugation invariants of the subalgebra s (a Subspace).

    Parameterized representatives are sampled at a generic parameter
    point respecting the constraints; the moduli verification of
    classify_1d checks that the choice does not matter.
    """
    if lattice is None:
        lattice = _lattice_for(g)
    space = s
    if space.has_params():
        env = _generic_env(_space_params(space), conds)
        rows = [vec_subs(r, env) for r in space.rows]
        space, splits = Subspace.span(rows, g.dim)
        if splits or space.dim != s.dim:
            raise AmbiguousUnderConstraints(
                "the representative degenerates at the sample point")
    derived = tuple(space.intersect(m).dim for m in g.derived_series())
    lower = tuple(space.intersect(m).dim for m in g.lower_central_series())
    center = space.intersect(g.center()).dim
    shape_dim = _shape_dim(lattice, space)
    eigen = None
    if s.dim == 1 and not s.has_params():
        eigen = _line_eigen_data(g, space.rows[0])
    return InvariantSignature(s.dim, derived, lower, center, shape_dim,
                              eigen)


def _space_params(space):
    names = set()
    for r in space.rows:
        names |= vec_params(r)
    return sorted(names)


def _generic_env(names, conds, offset=0):
    """Deterministic generic rational values satisfying the sign
    conditions: distinct primes, with signs searched exhaustively."""
    primes = [2, 3, 5, 7, 11, 13, 17, 19]
    values = [Fraction(primes[(i + offset) % len(primes)])
              for i in range(len(names))]
    for mask in range(1 << len(names)):
        env = {nm: (v if not (mask >> i) & 1 else -v)
               for i, (nm, v) in enumerate(zip(names, values))}
        if _env_satisfies(env, conds):
            return env
    raise AmbiguousUnderConstraints(
        "no generic sample point satisfies the constraints")


def _env_satisfies(env, conds):
    for c in conds:
        value = scalar_subs(c.expr, env)
        if scalar_params(value):
            continue  # the condition involves other parameters
        value = as_scalar(value)
        if isinstance(value, Quad):
            return False
        ok = {"nonzero": value != 0, "zero": value == 0,
              "pos": value > 0, "neg": value < 0}[c.kind]
        if not ok:
            return False
    return True


def _shape_dim(lattice, space):
    """Dimension of the smallest enumerated ideal containing the space."""
    for d in lattice.dims:
        if d < space.dim:
            continue
        for st in lattice.strata(d):
            if st.free_dim == 0:
                if st.base.contains_space(space):
                    return d
                continue
            total = st.total()
            if not total.contains_space(space):
                continue
            joined = st.base.add(space)
            if joined.dim - st.base.dim <= st.free_dim:
                return d
    return lattice.algebra.dim


def _weight_sort_key(w):
    if isinstance(w, Quad):
        return (w.a, w.b)
    return (Fraction(w), Fraction(0))


def _line_eigen_data(g, x):
    """Eigenvalue data of ad(x), normalized so it only depends on the
    line through x: weights are taken projectively (ratios to a weight of
    largest absolute part, with the sign fixed by a lexicographic rule)."""
    try:
        f = classify_generator(g, x)
    except IrreducibleDegreeTooHigh:
        return ("irrational",)
    if f.kind == "unipotent":
        return ("unipotent", f.data["index"])
    if f.kind == "scaling":
        weights = list(f.data["weights"])
        nonzero = [w for w in weights if not is_zero_scalar(w)]
        if not nonzero:
            return ("scaling", ())
        w0 = max(nonzero, key=lambda w: (abs(_weight_sort_key(w)[0]),
                                         abs(_weight_sort_key(w)[1])))
        plus = sorted((_weight_sort_key(w / w0) for w in weights))
        minus = sorted((_weight_sort_key(w / (-w0)) for w in weights))
        return ("scaling", tuple(min(plus, minus)))
    if f.kind == "rotation":
        return ("rotation", len(f.data["pairs"]), len(f.data["fixed"]))
    blocks = f.data.get("blocks")
    if blocks is None:
        return ("mixed",)
    dims = tuple(sorted(len(rows) for _, rows in blocks))
    return ("mixed", dims)


#----------------------------------------------------------------------------
# whole-dimension classification

def classify_1d(g):
    """Conjugacy classes of one-dimensional subalgebras of g."""
    ensure_solvable(g)
    lattice = _lattice_for(g)
    classes = []
    for form in candidate_forms_1d(g, lattice):
        classes.extend(reduce_element(g, form, lattice))
    classes = _merge_classes(classes)
    out = []
    for cls in classes:
        out.append(_verify_moduli(g, cls, lattice))
    return tuple(out)


def _merge_classes(classes):
    seen = {}
    for cls in sorted(classes, key=lambda c: c.key()):
        k = cls.key()
        if k not in seen:
            seen[k] = cls
    return list(seen.values())


def _verify_moduli(g, cls, lattice):
    """Check that a parameter family is signature constant and that two
    sample members are orbit distinct; otherwise flag moduli-unverified."""
    names = cls.moduli()
    if not names:
        return cls
    try:
        env_a = _generic_env(names, cls.constraints)
        env_b = _generic_env(names, cls.constraints, offset=3)
        sample_a = _subs_space(cls.representative, env_a, g.dim)
        sample_b = _subs_space(cls.representative, env_b, g.dim)
        sig_a = invariant_signature(g, sample_a, lattice=lattice)
        sig_b = invariant_signature(g, sample_b, lattice=lattice)
        ok = (sig_a == sig_b
              and len(names) == 1
              and (_orbit_separates(g, sample_a, sample_b)
                   or _orbit_separates(g, sample_b, sample_a)))
    except (AmbiguousUnderConstraints, MixedGeneratorUnsupported,
            IrreducibleDegreeTooHigh):
        ok = False
    if ok:
        return cls
    return SubalgebraClass(
        cls.dim, cls.representative, cls.constraints, cls.signature,
        cls.provenance + (("moduli-unverified",
                           "family members not certified distinct"),),
        cls.trace)


def _subs_space(space, env, n):
    rows = [vec_subs(r, env) for r in space.rows]
    out, splits = Subspace.span(rows, n)
    if splits or out.dim != space.dim:
        raise AmbiguousUnderConstraints("sample member degenerates")
    return out


def extend_class(g, cls):
    """Classes of dimension dim+1 containing a member of cls.

    N(S) is computed exactly; when it equals S there are no extensions.
    Otherwise the lines of N(S)/S are classified recursively and pulled
    back to subalgebras S + line.
    """
    S = cls.representative
    N = g.normalizer(S, conds=cls.constraints)
    if N.dim == S.dim:
        return []
    try:
        restr = g.restriction(N, conds=cls.constraints)
    except ValueError as err:
        raise ParameterizedQuotientUnsupported(
            "normalizer restriction is parameter dependent: %s" % err)
    sub_rows = [restr.to_sub(r) for r in S.rows]
    sub_space, splits = Subspace.span(sub_rows, N.dim)
    if splits or sub_space.dim != S.dim:
        raise AmbiguousUnderConstraints(
            "the representative degenerates inside its normalizer")
    qmap = restr.algebra.quotient(sub_space)
    out = []
    for line_cls in classify_1d(qmap.algebra):
        line_cls = _avoid_collisions(line_cls, cls, qmap.algebra.dim)
        lifted = qmap.lift_space(line_cls.representative)
        ambient = restr.space_to_ambient(lifted)
        if ambient.dim != S.dim + 1:
            raise AmbiguousUnderConstraints(
                "the lifted line degenerates against the base")
        conds = cls.constraints + line_cls.constraints
        provenance = (("extension",
                       "normalizer of %s" % g.space_text(S)),)
        provenance += tuple((tag, text) for tag, text in line_cls.provenance
                            if tag in ("manual", "moduli-unverified"))
        sig = invariant_signature(g, ambient, conds=conds)
        out.append(SubalgebraClass(S.dim + 1, ambient, conds, sig,
                                   provenance, None))
    return out


def _avoid_collisions(line_cls, parent, qdim):
    """Rename the quotient class parameters away from the parent's."""
    taken = set(parent.moduli())
    for c in parent.constraints:
        taken |= scalar_params(c.expr)
    names = [nm for nm in line_cls.moduli() if nm in taken]
    for c in line_cls.constraints:
        names += [nm for nm in scalar_params(c.expr)
                  if nm in taken and nm not in names]
    if not names:
        return line_cls
    mapping = {}
    avoid = taken | set(line_cls.moduli())
    for nm in names:
        fresh = fresh_param("k", avoid=avoid)
        avoid.add(fresh)
        mapping[nm] = param(fresh)
    rows = [vec_subs(r, mapping) for r in line_cls.representative.rows]
    rep, splits = Subspace.span(rows, qdim)
    assert not splits
    conds = tuple(Cond(c.kind, scalar_subs(c.expr, mapping))
                  for c in line_cls.constraints)
    return SubalgebraClass(line_cls.dim, rep, conds, line_cls.signature,
                           line_cls.provenance, line_cls.trace)


def classify_all(g, max_dim=None):
    """The classification by dimension: {dim: tuple of classes}.

    Duplicates arriving along different extension paths merge when their
    canonical representatives agree.  Signature-tied pairs with different
    representatives run the orbit check; pairs it cannot separate are
    flagged possibly-conjugate on both sides rather than merged.
    """
    ensure_solvable(g)
    top = g.dim - 1 if max_dim is None else min(max_dim, g.dim)
    if top < 1:
        return {}
    blockers = (ParameterizedQuotientUnsupported, AmbiguousUnderConstraints,
                MixedGeneratorUnsupported, ChainStuck,
                IrreducibleDegreeTooHigh, NonCommutingFamily)
    out = {1: tuple(classify_1d(g))}
    d = 1
    while d < top:
        extended = []
        parents = []
        for cls in out[d]:
            try:
                extended.extend(extend_class(g, cls))
                parents.append(cls)
            except blockers as err:
                note = ("manual", "extension not attempted: %s" % err)
                parents.append(SubalgebraClass(
                    cls.dim, cls.representative, cls.constraints,
                    cls.signature, cls.provenance + (note,), cls.trace))
        out[d] = tuple(parents)
        if not extended:
            break
        out[d + 1] = tuple(_settle_level(g, _merge_classes(extended)))
        d += 1
    return out


def _settle_level(g, classes):
    """Flag signature ties the orbit computation cannot separate."""
    flagged = {id(c): [] for c in classes}
    for i in range(len(classes)):
        for j in range(i + 1, len(classes)):
            a, b = classes[i], classes[j]
            if a.signature != b.signature:
                continue
            if a.moduli() or b.moduli():
                continue
            try:
                if (_orbit_separates(g, a.representative, b.representative)
                        or _orbit_separates(g, b.representative,
                                            a.representative)):
                    continue
            except (MixedGeneratorUnsupported, AmbiguousUnderConstraints,
                    IrreducibleDegreeTooHigh):
                pass
            flagged[id(a)].append(b)
            flagged[id(b)].append(a)
    settled = []
    for c in classes:
        if flagged[id(c)]:
            others = "; ".join(g.space_text(o.representative)
                               for o in flagged[id(c)])
            settled.append(SubalgebraClass(
                c.dim, c.representative, c.constraints, c.signature,
                c.provenance + (("possibly-conjugate", others),), c.trace))
        else:
            settled.append(c)
    return settled


#----------------------------------------------------------------------------
# distinctness certificates

def distinguish(g, a, b):
    """Exact distinctness test for two classes of equal dimension.

    Returns "distinct_by_signature", "distinct_by_orbit_computation" or
    "possibly_conjugate".  The orbit computation follows the engine's
    fixed factor order, sweeping every basis flow; it proves distinctness
    by exhibiting a wedge coordinate that the orbit cannot produce, or a
    coordinate ratio whose sign the positive units cannot change.  It
    never claims conjugacy.
    """
    if a.dim != b.dim:
        raise ValueError("classes have different dimensions")
    if a.signature != b.signature:
        return "distinct_by_signature"
    if a.moduli() or b.moduli():
        return "possibly_conjugate"
    if a.key() == b.key():
        return "possibly_conjugate"
    try:
        if (_orbit_separates(g, a.representative, b.representative)
                or _orbit_separates(g, b.representative, a.representative)):
            return "distinct_by_orbit_computation"
    except (MixedGeneratorUnsupported, AmbiguousUnderConstraints,
            IrreducibleDegreeTooHigh):
        pass
    return "possibly_conjugate"


def _sweep_factors(g):
    """Basis flows in ascending order; mixed generators without an exact
    split cannot flow and are left out (under-sweeping only weakens the
    certificates, it never fabricates one)."""
    out = []
    for i in range(g.dim):
        f = classify_generator(g, g.basis_vector(i))
        if f.kind == "mixed" and f.data.get("blocks") is None:
            continue
        out.append(f)
    return out


def _orbit_separates(g, src, dst):
    """Certify that no group element in the sweep word maps the span of
    src to the span of dst, by wedge coordinates."""
    n = g.dim
    rows = [vec(r) for r in src.rows]
    positives = set()
    for f in _sweep_factors(g):
        rows = [flow_apply(f, r) for r in rows]
        for c in f.conditions():
            if c.kind == "pos":
                positives |= scalar_params(c.expr)
    orbit = wedge_coords(rows, n)
    target = wedge_coords([vec(r) for r in dst.rows], n)
    if any(scalar_params(t) for t in target):
        return False
    for o, t in zip(orbit, target):
        if is_zero_scalar(o) and not is_zero_scalar(t):
            return True
    live = [(o, as_scalar(t)) for o, t in zip(orbit, target)
            if not is_zero_scalar(o) and not is_zero_scalar(t)]
    for i in range(len(live)):
        for j in range(i + 1, len(live)):
            oi, ti = live[i]
            oj, tj = live[j]
            ratio = _monomial_parts(as_scalar(oi) / as_scalar(oj))
            if ratio is None:
                continue
            coeff, syms = ratio
            tr = ti / tj
            if not syms:
                if coeff != tr:
                    return True
                continue
            if not all(nm in positives for nm, _ in syms):
                continue
            if isinstance(coeff, Quad) or isinstance(tr, Quad):
                continue
            if (coeff > 0) != (tr > 0):
                return True
    return False


def _monomial_parts(x):
    """(coefficient, ((name, power), ...)) when x is a single monomial in
    the parameters, folding a monomial denominator into negative powers;
    None otherwise."""
    x = as_scalar(x)
    if isinstance(x, (Fraction, Quad)):
        return x, ()
    if isinstance(x, Poly):
        num, den = x, Poly.one()
    elif isinstance(x, RatFunc):
        num, den = x.num, x.den
    else:
        return None
    if len(num.terms) != 1 or len(den.terms) != 1:
        return None
    (nm_mono, nm_coeff), = num.terms.items()
    (dn_mono, dn_coeff), = den.terms.items()
    powers = dict(nm_mono)
    for name, k in dn_mono:
        powers[name] = powers.get(name, 0) - k
    coeff = as_scalar(nm_coeff) / as_scalar(dn_coeff)
    syms = tuple(sorted((name, k) for name, k in powers.items() if k))
    return coeff, syms


#----------------------------------------------------------------------------
# torus alignment

def align_with_torus(g, t_part, n_ideal, x):
    """Conjugate x into the centralizer of its torus component.

    g must split as t_part + n_ideal with n_ideal a nilpotent ideal and
    t_part abelian, acting diagonalizably on n_ideal with rational
    weights (NonDiagonalizableTorus / NonRationalWeights otherwise).
    Writing x = t + n, each component of n in a weight space where t acts
    with nonzero weight is killed by a unipotent flow along that weight
    vector, working from the shallowest level of the lower central
    series outward.  Returns (element, ReductionTrace).
    """
    x = vec(x)
    n = g.dim
    if t_part.add(n_ideal).dim != n or t_part.dim + n_ideal.dim != n:
        raise ValueError("t_part and n_ideal do not split the algebra")
    if not g.is_ideal(n_ideal):
        raise ValueError("n_ideal is not an ideal")
    for i, a in enumerate(t_part.rows):
        for b in t_part.rows[i + 1:]:
            if not vec_is_zero(g.bracket(a, b)):
                raise ValueError("t_part is not abelian")
    levels = _nilpotent_levels(g, n_ideal)
    pieces = _torus_weight_pieces(g, t_part, n_ideal)

    t_comp, _ = _split_along(t_part, n_ideal, x)
    if vec_params(t_comp):
        raise AmbiguousUnderConstraints(
            "the torus component has symbolic coordinates")
    trace = ReductionTrace(g, x)
    cur = x
    for _ in range((len(levels) + 1) * n * n):
        move = _next_weight_kill(g, t_part, n_ideal, pieces, levels,
                                 t_comp, cur)
        if move is None:
            break
        v, note = move
        nxt = _nilpotent_conjugate(g, v, cur)
        step = ReductionStep("weight-kill", cur, nxt, factor=v, note=note)
        trace = trace.extended(step)
        cur = nxt
    else:
        raise AssertionError("weight kills failed to terminate")
    return cur, trace


def _nilpotent_levels(g, n_ideal):
    """Lower central series of the ideal, top down; error if not
    nilpotent."""
    levels = [n_ideal]
    while levels[-1].dim:
        rows = []
        for a in n_ideal.rows:
            for b in levels[-1].rows:
                w = g.bracket(a, b)
                if not vec_is_zero(w):
                    rows.append(w)
        nxt, splits = Subspace.span(rows, g.dim)
        assert not splits
        if nxt.dim == levels[-1].dim:
            raise ValueError("n_ideal is not nilpotent")
        levels.append(nxt)
    return levels


def _torus_weight_pieces(g, t_part, n_ideal):
    """Joint weight decomposition of n_ideal under ad(t_part), with
    ambient basis rows; weights must be rational and exhaustive."""
    mats = []
    for r in t_part.rows:
        mats.append(matrix_restrict(g.ad(r), n_ideal))
    for m in mats:
        try:
            linear, quads = factor_poly(char_poly(m), None)
        except IrreducibleDegreeTooHigh:
            raise NonRationalWeights(
                "torus weights leave the rationals")
        if quads or any(isinstance(lam, Quad) for lam, _ in linear):
            raise NonRationalWeights("torus weights leave the rationals")
        if sum(len(eigenspace(m, lam)) for lam, _ in linear) != n_ideal.dim:
            raise NonDiagonalizableTorus(
                "the torus does not act diagonalizably on the ideal")
    pieces = simultaneous_eigenspaces(mats, None)
    if sum(sp.dim for _, sp in pieces) != n_ideal.dim:
        raise NonDiagonalizableTorus(
            "the joint weight spaces do not span the ideal")
    out = []
    for weights, sp in pieces:
        rows = []
        for coords in sp.rows:
            w = vec([Fraction(0)] * g.dim)
            for c, base in zip(coords, n_ideal.rows):
                if not is_zero_scalar(as_scalar(c)):
                    w = vec_add(w, vec_scale(c, base))
            rows.append(w)
        ambient, splits = Subspace.span(rows, g.dim)
        assert not splits
        out.append((tuple(weights), ambient))
    return out


def _split_along(t_part, n_ideal, x):
    """x = t + n with t in t_part and n in n_ideal, exactly."""
    rows = list(t_part.rows) + list(n_ideal.rows)
    cols = Matrix([[rows[i][j] for i in range(len(rows))]
                   for j in range(len(x))])
    coords, splits = solve_linear(cols, x)
    if splits:
        raise AmbiguousUnderConstraints("the splitting is parameterized")
    t_comp = vec([Fraction(0)] * len(x))
    for c, r in zip(coords[:t_part.dim], t_part.rows):
        if not is_zero_scalar(as_scalar(c)):
            t_comp = vec_add(t_comp, vec_scale(c, r))
    return t_comp, vec_sub(x, t_comp)


def _level_depth(levels, space):
    depth = 0
    for k, lv in enumerate(levels):
        if lv.contains_space(space):
            depth = k
    return depth


def _next_weight_kill(g, t_part, n_ideal, pieces, levels, t_comp, cur):
    """The shallowest nonzero-weight component of the ideal part of cur,
    as the flow direction that removes it."""
    _, n_comp = _split_along(t_part, n_ideal, cur)
    best = None
    for weights, sp in pieces:
        speed = _weight_speed(t_part, t_comp, weights)
        if is_zero_scalar(speed):
            continue
        w = _project_onto(sp, pieces, n_comp, g.dim)
        if vec_is_zero(w):
            continue
        depth = _level_depth(levels, sp)
        if best is None or depth < best[0]:
            best = (depth, w, speed, weights)
    if best is None:
        return None
    _, w, speed, weights = best
    v = vec_scale(Fraction(1) / speed, w)
    note = "kills the weight %s component" % (
        ",".join(scalar_to_text(as_scalar(q)) for q in weights))
    return v, note


def _weight_speed(t_part, t_comp, weights):
    """The eigenvalue of ad(t_comp) on the weight space: the weight
    functional evaluated at the torus component."""
    rows = list(t_part.rows)
    cols = Matrix([[rows[i][j] for i in range(len(rows))]
                   for j in range(len(t_comp))])
    coords, splits = solve_linear(cols, t_comp)
    assert not splits
    speed = Fraction(0)
    for c, w in zip(coords, weights):
        speed = speed + as_scalar(c) * as_scalar(w)
    return speed


def _project_onto(sp, pieces, v, n):
    """Component of v in the piece sp, along the other weight spaces."""
    rows = []
    sizes = []
    for _, piece in pieces:
        rows.extend(piece.rows)
        sizes.append(piece.dim)
    cols = Matrix([[rows[i][j] for i in range(len(rows))]
                   for j in range(n)])
    coords, splits = solve_linear(cols, v)
    if splits:
        raise AmbiguousUnderConstraints(
            "the weight decomposition is parameterized")
    out = vec([Fraction(0)] * n)
    offset = 0
    for (_, piece), size in zip(pieces, sizes):
        if piece is sp:
            for c, r in zip(coords[offset:offset + size], piece.rows):
                if not is_zero_scalar(as_scalar(c)):
                    out = vec_add(out, vec_scale(c, r))
        offset += size
    return out


def _nilpotent_conjugate(g, v, x):
    """exp(ad(v)) applied to x for v in a nilpotent ideal: the series
    terminates identically, parameters and all."""
    out = vec(x)
    term = vec(x)
    for k in range(1, g.dim + 2):
        term = vec_scale(Fraction(1, k), g.bracket(v, term))
        if vec_is_zero(term):
            return out
        out = vec_add(out, term)
    raise AssertionError("the series of a nilpotent flow did not stop")
