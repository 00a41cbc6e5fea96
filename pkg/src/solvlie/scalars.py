"""Exact scalar tower: rationals, quadratic extensions, rational functions.

Three kinds of scalar circulate through the package:

* ``Fraction``  -- plain rationals (the stdlib class, re-exported),
* ``Quad``      -- a + b*sqrt(d) with rational a, b and a fixed squarefree
                   integer radicand d (never 0 or 1, may be negative),
* ``RatFunc``   -- quotients of multivariate polynomials in named
                   parameters, with coefficients drawn from the two levels
                   below.

Arithmetic always returns the lowest level that can represent the result:
a ``Quad`` whose radical part cancels comes back as a ``Fraction``, a
``RatFunc`` whose variables cancel comes back as a constant.  Values are
kept canonical at all times, so ``==`` is a decision procedure:

* ``Quad`` keeps b != 0 and d squarefree (the factory ``quad`` enforces
  both, moving square factors of the radicand into b),
* ``RatFunc`` keeps num/den coprime with a *monic* denominator under the
  graded lexicographic order.  Monic, rather than any content-based
  convention, because the coefficient field may be Q(sqrt(d)) where
  "positive leading coefficient" does not pick a unique representative.

Only one radicand may be live inside any given value or operation; mixing
two different ones raises IncompatibleRadicands.

Monomial order: graded lexicographic, total degree first, ties broken
variable by variable in alphabetical order with the alphabetically earlier
variable counting as the larger one.
"""

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

import sympy

from .errors import (
    DivisionByZero,
    IncompatibleRadicands,
    NotRealValued,
    DenominatorVanishes,
)

__all__ = [
    "Fraction", "Quad", "quad", "Poly", "RatFunc", "Cond",
    "as_scalar", "param", "is_zero_scalar", "radicand_of", "scalar_params",
    "conjugate_scalar", "scalar_subs", "evaluate_at", "scalar_to_text",
    "sign_of", "is_provably_nonzero", "compare_real",
    "squarefree_core", "rational_sqrt", "quad_sqrt",
    "fresh_param", "reset_params",
]


#----------------------------------------------------------------------------
# integer / rational helpers

def squarefree_core(n):
    """Split an integer as core * s**2 with core squarefree.

    Returns (core, s); the sign of n goes into the core, so
    squarefree_core(-12) == (-3, 2).
    """
    if n == 0:
        return 0, 1
    sign = -1 if n < 0 else 1
    core, s = 1, 1
    for p, e in sympy.factorint(abs(n)).items():
        s *= p ** (e // 2)
        if e % 2:
            core *= p
    return sign * core, s


def rational_sqrt(q):
    """Exact square root of a Fraction, or None if it is not a square."""
    q = Fraction(q)
    if q < 0:
        return None
    rn = math.isqrt(q.numerator)
    rd = math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


#----------------------------------------------------------------------------
# quadratic extension Q(sqrt(d))

class Quad:
    """a + b*sqrt(d), b != 0, d squarefree and not 0 or 1.

    Build through the ``quad`` factory unless the invariants are already
    guaranteed; the factory demotes b == 0 to a plain Fraction and pulls
    square factors out of the radicand.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = d

    def conjugate(self):
        return Quad(self.a, -self.b, self.d)

    def norm(self):
        """Field norm a**2 - d*b**2, a Fraction, zero only for the zero
        element (which Quad never represents)."""
        return self.a * self.a - self.b * self.b * self.d

    #--- arithmetic ---

    def _join(self, other):
        """Coerce other to (a, b) over this radicand, or None."""
        if isinstance(other, Quad):
            if other.d != self.d:
                raise IncompatibleRadicands(
                    "cannot mix sqrt(%d) with sqrt(%d)" % (self.d, other.d))
            return other.a, other.b
        if isinstance(other, (int, Fraction)):
            return Fraction(other), Fraction(0)
        return None

    def __add__(self, other):
        ab = self._join(other)
        if ab is None:
            return NotImplemented
        return quad(self.a + ab[0], self.b + ab[1], self.d)

    __radd__ = __add__

    def __sub__(self, other):
        ab = self._join(other)
        if ab is None:
            return NotImplemented
        return quad(self.a - ab[0], self.b - ab[1], self.d)

    def __rsub__(self, other):
        ab = self._join(other)
        if ab is None:
            return NotImplemented
        return quad(ab[0] - self.a, ab[1] - self.b, self.d)

    def __mul__(self, other):
        ab = self._join(other)
        if ab is None:
            return NotImplemented
        oa, ob = ab
        return quad(self.a * oa + self.b * ob * self.d,
                    self.a * ob + self.b * oa, self.d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        ab = self._join(other)
        if ab is None:
            return NotImplemented
        oa, ob = ab
        if oa == 0 and ob == 0:
            raise DivisionByZero("division by zero")
        n = oa * oa - ob * ob * self.d
        # conjugate trick; n != 0 because sqrt(d) is irrational
        return quad((self.a * oa - self.b * ob * self.d) / n,
                    (self.b * oa - self.a * ob) / n, self.d)

    def __rtruediv__(self, other):
        ab = self._join(other)
        if ab is None:
            return NotImplemented
        n = self.norm()
        inv = quad(self.a / n, -self.b / n, self.d)
        return inv * ab[0] if ab[1] == 0 else inv * Quad(ab[0], ab[1], self.d)

    def __neg__(self):
        return Quad(-self.a, -self.b, self.d)

    def __pow__(self, e):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return (Fraction(1) / self) ** (-e)
        out = Fraction(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Quad):
            return (self.a, self.b, self.d) == (other.a, other.b, other.d)
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        return hash(("Quad", self.a, self.b, self.d))

    def __repr__(self):
        return "Quad(%s, %s, %s)" % (self.a, self.b, self.d)

    def __str__(self):
        return scalar_to_text(self)

    def __bool__(self):
        return True  # b != 0 makes the value irrational, hence nonzero


def quad(a, b, d):
    """Canonical constructor for Q(sqrt(d)) elements.

    Reduces the radicand to its squarefree core and demotes pure rationals
    to Fraction.
    """
    a, b = Fraction(a), Fraction(b)
    if b == 0:
        return a
    if not isinstance(d, int) or d in (0, 1):
        raise ValueError("radicand must be an integer other than 0 and 1")
    core, s = squarefree_core(d)
    if core == 1:
        return a + b * s
    return Quad(a, b * s, core)


#----------------------------------------------------------------------------
# monomials: tuples of (name, exponent), names sorted, exponents positive

def _mono_mul(m1, m2):
    e = dict(m1)
    for n, k in m2:
        e[n] = e.get(n, 0) + k
    return tuple(sorted((n, k) for n, k in e.items() if k))


def _mono_cmp(m1, m2):
    d1 = sum(e for _, e in m1)
    d2 = sum(e for _, e in m2)
    if d1 != d2:
        return -1 if d1 < d2 else 1
    e1, e2 = dict(m1), dict(m2)
    for n in sorted(set(e1) | set(e2)):
        a, b = e1.get(n, 0), e2.get(n, 0)
        if a != b:
            return 1 if a > b else -1
    return 0


_mono_key = functools.cmp_to_key(_mono_cmp)


def _mono_divides(m1, m2):
    """Does m1 divide m2?  Returns the quotient monomial or None."""
    e = dict(m2)
    for n, k in m1:
        if e.get(n, 0) < k:
            return None
        e[n] -= k
    return tuple(sorted((n, k) for n, k in e.items() if k))


#----------------------------------------------------------------------------
# multivariate polynomials

class Poly:
    """Sparse multivariate polynomial over Fraction or one Quad level.

    terms maps monomials to nonzero coefficients.  All Quad coefficients in
    one polynomial share a radicand (stored as ``radicand``, None when the
    coefficients are plain rationals).
    """

    __slots__ = ("terms", "radicand")

    def __init__(self, terms):
        clean = {}
        rad = None
        for m, c in terms.items():
            if isinstance(c, int):
                c = Fraction(c)
            if isinstance(c, Quad):
                if rad is not None and rad != c.d:
                    raise IncompatibleRadicands(
                        "polynomial mixes sqrt(%d) and sqrt(%d)" % (rad, c.d))
                rad = c.d
            elif c == 0:
                continue
            clean[m] = c
        self.terms = clean
        self.radicand = rad

    #--- constructors ---

    @staticmethod
    def const(c):
        if isinstance(c, int):
            c = Fraction(c)
        return Poly({(): c})

    @staticmethod
    def var(name):
        return Poly({((name, 1),): Fraction(1)})

    @staticmethod
    def zero():
        return Poly({})

    @staticmethod
    def one():
        return Poly.const(1)

    #--- queries ---

    def is_zero(self):
        return not self.terms

    def is_const(self):
        return not self.terms or set(self.terms) == {()}

    def const_value(self):
        return self.terms.get((), Fraction(0))

    def variables(self):
        names = set()
        for m in self.terms:
            for n, _ in m:
                names.add(n)
        return tuple(sorted(names))

    def degree(self):
        if not self.terms:
            return -1
        return max(sum(e for _, e in m) for m in self.terms)

    def degree_in(self, name):
        best = 0
        for m in self.terms:
            for n, e in m:
                if n == name:
                    best = max(best, e)
        return best

    def leading(self):
        """(monomial, coefficient) of the graded-lex leading term."""
        m = max(self.terms, key=_mono_key)
        return m, self.terms[m]

    def coeff_in(self, name, k):
        """Coefficient of name**k, as a polynomial in the other variables."""
        out = {}
        for m, c in self.terms.items():
            e = dict(m)
            if e.pop(name, 0) == k:
                out[tuple(sorted(e.items()))] = c
        return Poly(out)

    #--- arithmetic ---

    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction, Quad)):
            return Poly.const(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return Poly(out)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, e):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        out = Poly.one()
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def monic(self):
        if not self.terms:
            return self
        _, lc = self.leading()
        if lc == 1:
            return self
        inv = Fraction(1) / lc if isinstance(lc, Fraction) else lc ** -1
        return self * inv

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction, Quad)):
            return self.is_const() and self.const_value() == other
        return NotImplemented

    def __hash__(self):
        return hash(("Poly", frozenset(self.terms.items())))

    def __repr__(self):
        return "Poly(%s)" % (poly_to_text(self),)

    def __str__(self):
        return poly_to_text(self)


def poly_divexact(f, g):
    """Exact division f / g of polynomials; raises DivisionByZero for g = 0
    and ValueError when the division is not exact."""
    if g.is_zero():
        raise DivisionByZero("polynomial division by zero")
    if f.is_zero():
        return f
    quot = {}
    r = f
    gm, gc = g.leading()
    while not r.is_zero():
        rm, rc = r.leading()
        q = _mono_divides(gm, rm)
        if q is None:
            raise ValueError("inexact polynomial division")
        c = rc / gc
        quot[q] = c
        r = r - Poly({q: c}) * g
    return Poly(quot)


def _rem_univariate(f, g, x):
    """Remainder of f by g, both univariate in x over a coefficient field."""
    dg = g.degree_in(x)
    lg = g.coeff_in(x, dg).const_value()
    r = f
    while not r.is_zero() and r.degree_in(x) >= dg:
        dr = r.degree_in(x)
        lr = r.coeff_in(x, dr).const_value()
        m = ((x, dr - dg),) if dr > dg else ()
        r = r - g * Poly({m: lr / lg})
    return r


def poly_to_sympy(p, syms):
    expr = sympy.Integer(0)
    for m, c in p.terms.items():
        if isinstance(c, Quad):
            cc = (sympy.Rational(c.a.numerator, c.a.denominator)
                  + sympy.Rational(c.b.numerator, c.b.denominator)
                  * sympy.sqrt(c.d))
        else:
            cc = sympy.Rational(c.numerator, c.denominator)
        t = cc
        for n, e in m:
            t = t * syms[n] ** e
        expr = expr + t
    return expr


def _sympy_coeff_to_scalar(expr, d):
    if d is None:
        r = sympy.Rational(expr)
        return Fraction(r.p, r.q)
    root = sympy.sqrt(d)
    p = sympy.Poly(sympy.expand(expr), root)
    b = p.coeff_monomial(root)
    a = p.coeff_monomial(1)
    a = sympy.Rational(a) if a is not None else sympy.Integer(0)
    b = sympy.Rational(b) if b is not None else sympy.Integer(0)
    return quad(Fraction(a.p, a.q), Fraction(b.p, b.q), d)


def sympy_expr_to_poly(expr, names, d=None):
    syms = [sympy.Symbol(n) for n in names]
    if d is not None:
        hp = sympy.Poly(expr, *syms, domain="EX")
    else:
        hp = sympy.Poly(expr, *syms)
    terms = {}
    for mono, coeff in hp.as_dict().items():
        m = tuple(sorted((names[i], e) for i, e in enumerate(mono) if e))
        terms[m] = _sympy_coeff_to_scalar(coeff, d)
    return Poly(terms)


def _gcd_multivariate(f, g):
    """Multivariate gcd, delegated to sympy (the univariate and constant
    cases never reach this)."""
    names = sorted(set(f.variables()) | set(g.variables()))
    syms = {n: sympy.Symbol(n) for n in names}
    d = f.radicand if f.radicand is not None else g.radicand
    fe, ge = poly_to_sympy(f, syms), poly_to_sympy(g, syms)
    if d is not None:
        h = sympy.gcd(fe, ge, extension=True)
    else:
        h = sympy.gcd(fe, ge)
    return sympy_expr_to_poly(h, names, d)


def poly_gcd(f, g):
    """Monic gcd of multivariate polynomials over the coefficient field."""
    if f.is_zero():
        return g.monic()
    if g.is_zero():
        return f.monic()
    if f.is_const() or g.is_const():
        return Poly.one()
    names = sorted(set(f.variables()) | set(g.variables()))
    if len(names) == 1:
        x = names[0]
        a, b = f, g
        while not b.is_zero():
            a, b = b, _rem_univariate(a, b, x)
        return a.monic()
    return _gcd_multivariate(f, g).monic()


#----------------------------------------------------------------------------
# rational functions

class RatFunc:
    """num/den in canonical form: coprime, monic denominator, and never a
    constant (constants demote to Fraction or Quad).  Build through
    ``_ratfunc`` or the public ``param`` / arithmetic, not directly."""

    __slots__ = ("num", "den")

    def __init__(self, num, den):
        self.num = num
        self.den = den

    #--- arithmetic ---

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc(other, Poly.one())
        if isinstance(other, (int, Fraction, Quad)):
            return RatFunc(Poly.const(other), Poly.one())
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return _ratfunc(self.num * other.den + other.num * self.den,
                        self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return _ratfunc(self.num * other.den - other.num * self.den,
                        self.den * other.den)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return _ratfunc(other.num * self.den - self.num * other.den,
                        self.den * other.den)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return _ratfunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.num.is_zero():
            raise DivisionByZero("division by zero")
        return _ratfunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __pow__(self, e):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return _ratfunc(self.den, self.num) ** (-e)
        return _ratfunc(self.num ** e, self.den ** e)

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction, Quad, Poly)):
            return False  # canonical RatFunc is never constant
        return NotImplemented

    def __hash__(self):
        return hash(("RatFunc", self.num, self.den))

    def __repr__(self):
        return "RatFunc(%s)" % (scalar_to_text(self),)

    def __str__(self):
        return scalar_to_text(self)

    def __bool__(self):
        return True


def _ratfunc(num, den):
    """Canonicalize a Poly quotient, demoting constants."""
    if den.is_zero():
        raise DivisionByZero("division by zero")
    if num.is_zero():
        return Fraction(0)
    g = poly_gcd(num, den)
    if not (g.is_const() and g.const_value() == 1):
        num = poly_divexact(num, g)
        den = poly_divexact(den, g)
    _, lc = den.leading()
    if lc != 1:
        inv = Fraction(1) / lc if isinstance(lc, Fraction) else lc ** -1
        num = num * inv
        den = den * inv
    if den.is_const() and num.is_const():
        return num.const_value()
    return RatFunc(num, den)


def param(name):
    """The parameter with the given name, as a scalar."""
    return RatFunc(Poly.var(name), Poly.one())


#----------------------------------------------------------------------------
# generic scalar helpers

def as_scalar(x):
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, (Fraction, Quad, RatFunc)):
        return x
    if isinstance(x, Poly):
        return _ratfunc(x, Poly.one())
    raise TypeError("not a scalar: %r" % (x,))


def is_zero_scalar(x):
    return isinstance(x, (int, Fraction)) and x == 0


def radicand_of(x):
    if isinstance(x, Quad):
        return x.d
    if isinstance(x, RatFunc):
        return x.num.radicand if x.num.radicand is not None else x.den.radicand
    return None


def scalar_params(x):
    """Set of parameter names the scalar depends on."""
    if isinstance(x, RatFunc):
        return set(x.num.variables()) | set(x.den.variables())
    return set()


def conjugate_scalar(x):
    """Radicand conjugation sqrt(d) -> -sqrt(d), applied coefficientwise."""
    if isinstance(x, Quad):
        return x.conjugate()
    if isinstance(x, RatFunc):
        return _ratfunc(_poly_conj(x.num), _poly_conj(x.den))
    return as_scalar(x)


def _poly_conj(p):
    return Poly({m: (c.conjugate() if isinstance(c, Quad) else c)
                 for m, c in p.terms.items()})


def _poly_subs(p, mapping):
    """Evaluate a Poly with variables sent to scalars; unmapped variables
    stay as themselves."""
    out = Fraction(0)
    for m, c in p.terms.items():
        term = as_scalar(c)
        for n, e in m:
            v = mapping.get(n)
            if v is None:
                v = param(n)
            term = term * (as_scalar(v) ** e)
        out = out + term
    return out


def scalar_subs(x, mapping):
    """Substitute parameters by scalars (which may themselves carry
    parameters).  Raises DenominatorVanishes when a denominator collapses
    to zero."""
    x = as_scalar(x)
    if not isinstance(x, RatFunc):
        return x
    num = _poly_subs(x.num, mapping)
    den = _poly_subs(x.den, mapping)
    if is_zero_scalar(den):
        raise DenominatorVanishes(
            "denominator %s vanishes under %s" %
            (scalar_to_text(_ratfunc(x.den, Poly.one())),
             {k: scalar_to_text(as_scalar(v)) for k, v in mapping.items()}))
    return num / den


def evaluate_at(x, env):
    """Fully evaluate: every parameter of x must be mapped to a constant."""
    missing = scalar_params(as_scalar(x)) - set(env)
    if missing:
        raise KeyError("unassigned parameters: %s" % ", ".join(sorted(missing)))
    return scalar_subs(x, env)


#----------------------------------------------------------------------------
# text form

def _coeff_text(c, lead=False):
    """Render a coefficient for use in front of a variable part."""
    if isinstance(c, Quad):
        t = scalar_to_text(c)
        if c.a != 0:
            return "(%s)" % t
        return t
    return str(c)


def poly_to_text(p):
    if p.is_zero():
        return "0"
    parts = []
    for m in sorted(p.terms, key=_mono_key, reverse=True):
        c = p.terms[m]
        vtxt = "*".join(n if e == 1 else "%s^%d" % (n, e) for n, e in m)
        if not m:
            txt = scalar_to_text(c)
            if isinstance(c, Quad) and c.a != 0 and parts:
                txt = "(%s)" % txt
        elif c == 1:
            txt = vtxt
        elif c == -1:
            txt = "-" + vtxt
        else:
            txt = "%s*%s" % (_coeff_text(c), vtxt)
        parts.append(txt)
    out = parts[0]
    for t in parts[1:]:
        out += " - " + t[1:] if t.startswith("-") else " + " + t
    return out


def scalar_to_text(x):
    x = as_scalar(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, Quad):
        root = "sqrt(%d)" % x.d
        if x.b == 1:
            rad = root
        elif x.b == -1:
            rad = "-" + root
        else:
            rad = "%s*%s" % (x.b, root)
        if x.a == 0:
            return rad
        if rad.startswith("-"):
            return "%s - %s" % (x.a, rad[1:])
        return "%s + %s" % (x.a, rad)
    num, den = x.num, x.den
    if den.is_const() and den.const_value() == 1:
        return poly_to_text(num)
    return "(%s)/(%s)" % (poly_to_text(num), poly_to_text(den))


#----------------------------------------------------------------------------
# assumptions and signs

@dataclass(frozen=True)
class Cond:
    """One assumption about parameters: kind is 'nonzero', 'zero', 'pos'
    or 'neg', expr is the constrained scalar."""

    kind: str
    expr: object

    def __str__(self):
        sym = {"nonzero": "!=", "zero": "=", "pos": ">", "neg": "<"}[self.kind]
        return "%s %s 0" % (scalar_to_text(self.expr), sym)


def normalize_cond(cond):
    """Canonical form for deduplication.  'nonzero'/'zero' conditions are
    scale invariant, so the expression is replaced by its monic numerator."""
    expr = as_scalar(cond.expr)
    if cond.kind in ("nonzero", "zero") and isinstance(expr, RatFunc):
        expr = _ratfunc(expr.num.monic(), Poly.one())
    return Cond(cond.kind, expr)


# possibility sets over {-1, 0, 1}
_SIGN_SETS = {
    "pos": frozenset([1]), "neg": frozenset([-1]), "zero": frozenset([0]),
    "nonneg": frozenset([0, 1]), "nonpos": frozenset([-1, 0]),
    "nonzero": frozenset([-1, 1]), "unknown": frozenset([-1, 0, 1]),
}
_SET_NAMES = {v: k for k, v in _SIGN_SETS.items()}


def _set_mul(s1, s2):
    return frozenset(a * b for a in s1 for b in s2)


def _set_add(s1, s2):
    out = set()
    for a in s1:
        for b in s2:
            if a == 0:
                out.add(b)
            elif b == 0:
                out.add(a)
            elif a == b:
                out.add(a)
            else:
                out.update((-1, 0, 1))
    return frozenset(out)


def _const_sign_set(c):
    """Possibility set for a constant; exact for Fraction and real Quad."""
    if isinstance(c, Quad):
        if c.d < 0:
            raise NotRealValued(
                "no real sign for %s" % scalar_to_text(c))
        if c.a == 0:
            s = 1 if c.b > 0 else -1
        elif c.a > 0 and c.b > 0:
            s = 1
        elif c.a < 0 and c.b < 0:
            s = -1
        else:
            # compare |a| against |b|*sqrt(d) through the norm
            n = c.a * c.a - c.b * c.b * c.d
            s = (1 if c.a > 0 else -1) if n > 0 else (1 if c.b > 0 else -1)
        return _SIGN_SETS["pos" if s > 0 else "neg"]
    c = Fraction(c)
    if c == 0:
        return _SIGN_SETS["zero"]
    return _SIGN_SETS["pos" if c > 0 else "neg"]


def _var_sign_sets(conds):
    """Signs of bare parameters implied by the assumption list."""
    out = {}
    for cond in conds:
        expr = as_scalar(cond.expr)
        if isinstance(expr, RatFunc) and expr.den == Poly.one():
            t = expr.num.terms
            if len(t) == 1:
                (m, c), = t.items()
                if len(m) == 1 and m[0][1] == 1 and not isinstance(c, Quad):
                    name = m[0][0]
                    kind = cond.kind
                    if c < 0 and kind == "pos":
                        kind = "neg"
                    elif c < 0 and kind == "neg":
                        kind = "pos"
                    new = _SIGN_SETS[kind]
                    out[name] = out.get(name, _SIGN_SETS["unknown"]) & new
    return out


def _poly_sign_set(p, var_signs):
    total = _SIGN_SETS["zero"]
    for m, c in p.terms.items():
        s = _const_sign_set(c)
        for n, e in m:
            v = var_signs.get(n, _SIGN_SETS["unknown"])
            if e % 2 == 0:
                v = frozenset(x * x for x in v)
            s = _set_mul(s, v)
        total = _set_add(total, s)
    return total


def _match_cond(x, conds):
    """If x is a nonzero constant multiple of an assumed expression, return
    the implied possibility set, else None."""
    for cond in conds:
        expr = as_scalar(cond.expr)
        if is_zero_scalar(expr):
            continue
        try:
            r = x / expr
        except (DivisionByZero, IncompatibleRadicands):
            continue
        if isinstance(r, RatFunc):
            continue
        if cond.kind == "zero":
            return _SIGN_SETS["zero"]
        if is_zero_scalar(r):
            continue
        if cond.kind == "nonzero":
            return _SIGN_SETS["nonzero"]
        rs = _const_sign_set(r)
        base = _SIGN_SETS[cond.kind]
        return _set_mul(base, rs)
    return None


def sign_of(x, conds=()):
    """Sign of a real valued scalar under the given assumptions.

    Returns one of 'pos', 'neg', 'zero', 'nonneg', 'nonpos', 'nonzero' or
    'unknown'.  Raises NotRealValued for values outside the real subfield
    (negative radicand with a live radical part).  For rational functions
    the answer describes the value at every parameter point where the
    function is defined and the assumptions hold.
    """
    x = as_scalar(x)
    if isinstance(x, (Fraction, Quad)):
        return _SET_NAMES[_const_sign_set(x)]
    for cond in conds:
        if cond.kind == "zero":
            x = scalar_subs(x, _zero_env(cond, x))
            if not isinstance(x, RatFunc):
                return sign_of(x, conds)
    matched = _match_cond(x, conds)
    if matched is not None:
        return _SET_NAMES[matched]
    var_signs = _var_sign_sets(conds)
    ns = _poly_sign_set(x.num, var_signs)
    ds = _poly_sign_set(x.den, var_signs) - {0}
    return _SET_NAMES[_set_mul(ns, frozenset(ds))]


def _zero_env(cond, x):
    """Environment substituting a parameter assumed zero, when the
    condition pins down a single bare parameter."""
    expr = as_scalar(cond.expr)
    if isinstance(expr, RatFunc) and expr.den == Poly.one():
        t = expr.num.terms
        if len(t) == 1:
            (m, _), = t.items()
            if len(m) == 1 and m[0][1] == 1:
                return {m[0][0]: Fraction(0)}
    return {}


def is_provably_nonzero(x, conds=(), real=True):
    """Is x nonzero for every parameter choice respecting the assumptions?

    Over a real field this uses the sign lattice.  Over a complexified
    field squares do not help (k**2 + 1 has complex roots), so only direct
    consequences of the assumptions and single-term products of assumed
    nonzero parameters count.
    """
    x = as_scalar(x)
    if isinstance(x, Fraction):
        return x != 0
    if isinstance(x, Quad):
        return True
    matched = _match_cond(x, conds)
    if matched is not None:
        return 0 not in matched
    if real:
        try:
            if 0 not in _poly_sign_set(x.num, _var_sign_sets(conds)):
                return True
        except NotRealValued:
            pass
    # complex-safe fallback: a single monomial in assumed-nonzero parameters
    if x.den == Poly.one() and len(x.num.terms) == 1:
        (m, c), = x.num.terms.items()
        var_signs = _var_sign_sets(conds)
        return all(0 not in var_signs.get(n, _SIGN_SETS["unknown"])
                   for n, _ in m)
    return False


def compare_real(x, y, conds=()):
    """-1, 0 or 1 comparing two real valued scalars; ValueError when the
    assumptions do not decide the order."""
    s = sign_of(as_scalar(x) - as_scalar(y), conds)
    if s == "zero":
        return 0
    if s in ("pos",):
        return 1
    if s in ("neg",):
        return -1
    raise ValueError("order of %s and %s is undetermined" %
                     (scalar_to_text(x), scalar_to_text(y)))


#----------------------------------------------------------------------------
# square roots in the tower

def quad_sqrt(z, d=None):
    """A square root of z inside Q or Q(sqrt(d)), or None.

    For a Fraction z the root is looked for first in Q, then (when d is
    given) in the form r*sqrt(d).  For a Quad z the radicand is taken from
    z itself.
    """
    z = as_scalar(z)
    if isinstance(z, Fraction):
        r = rational_sqrt(z)
        if r is not None:
            return r
        if d is not None:
            r = rational_sqrt(Fraction(z, 1) / d)
            if r is not None:
                return quad(0, r, d)
        return None
    if not isinstance(z, Quad):
        return None
    # (alpha + beta*sqrt(d))**2 = a + b*sqrt(d) forces
    # alpha**2 = (a +- n)/2 with n**2 = a**2 - d*b**2 rational.
    n = rational_sqrt(z.norm())
    if n is None:
        return None
    for sgn in (1, -1):
        half = (z.a + sgn * n) / 2
        alpha = rational_sqrt(half)
        if alpha is not None and alpha != 0:
            beta = z.b / (2 * alpha)
            cand = quad(alpha, beta, z.d)
            if cand * cand == z:
                return cand
    # pure radical root: alpha = 0, beta**2 * d = a requires b = 0
    return None


#----------------------------------------------------------------------------
# fresh parameter names

_counters = {}


def fresh_param(prefix="k", avoid=()):
    """Next unused parameter name with the given prefix, skipping any name
    in avoid.  Deterministic within a session; see reset_params."""
    n = _counters.get(prefix, 0)
    while True:
        n += 1
        name = "%s%d" % (prefix, n)
        if name not in avoid:
            break
    _counters[prefix] = n
    return name


def reset_params():
    """Restart all fresh-name counters (used at CLI entry for reproducible
    output and in tests)."""
    _counters.clear()
