"""Brute force ideal counting over a small prime field.

This is the independent cross-check for the exact ideal enumeration.  The
structure constants are transplanted to F_p and the d-dimensional invariant
subspaces are counted by sweeping every reduced row echelon pattern, with
numpy evaluating the closure equations over all free entries at once.
Nothing here shares code with the exact engine; the two sides only meet in
the count comparison, which is the point of an oracle.

The closure condition for a candidate row space B is that ad(e_i) * row
reduces to zero against B for every basis generator e_i and every row.
With B in echelon form each residual coordinate is a polynomial of degree
at most two in the free entries, so a pivot pattern with m free entries
becomes a system of quadrics over F_p^m.  For dim <= 4 the largest pattern
has m = 4 (about 1.0e8 points at p = 101); the sweep evaluates the cheapest
equation on a full mesh of its own variables first and feeds only the
survivors to the remaining equations, which keeps the worst corpus algebra
around a second instead of a minute.
"""

import itertools
from fractions import Fraction

import numpy as np

from .errors import OracleInapplicable
from .linalg import vec_params
from .scalars import Quad, as_scalar

__all__ = [
    "is_odd_prime",
    "sqrt_mod",
    "scalar_mod",
    "ad_tensors_mod",
    "count_ideals_mod",
    "count_all_dims",
    "gaussian_binomial",
    "predicted_counts",
]


def is_odd_prime(p):
    if p < 3 or p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def sqrt_mod(a, p):
    """A square root of a mod p, or None.  Brute force; p stays small here."""
    a %= p
    for s in range((p + 1) // 2 + 1):
        if s * s % p == a:
            return s
    return None


def scalar_mod(x, p):
    """Image of an exact scalar in F_p.

    Fractions need an invertible denominator, Quad values need the radicand
    to be a square mod p; anything with parameters has no image at all.
    """
    x = as_scalar(x)
    if isinstance(x, Fraction):
        if x.denominator % p == 0:
            raise OracleInapplicable(
                "denominator %d vanishes mod %d" % (x.denominator, p)
            )
        return x.numerator * pow(x.denominator, -1, p) % p
    if isinstance(x, Quad):
        r = sqrt_mod(x.d, p)
        if r is None:
            raise OracleInapplicable(
                "radicand %d is not a square mod %d" % (x.d, p)
            )
        return (scalar_mod(x.a, p) + scalar_mod(x.b, p) * r) % p
    raise OracleInapplicable("parameterized scalar has no image in F_p")


def ad_tensors_mod(g, p):
    """ad(e_i) mod p for every basis vector, as n x n int64 arrays."""
    if not is_odd_prime(p):
        raise OracleInapplicable("modulus %d is not an odd prime" % p)
    n = g.dim
    ads = [np.zeros((n, n), dtype=np.int64) for _ in range(n)]
    for (i, j), coeffs in g.table.items():
        col = [scalar_mod(c, p) for c in coeffs]
        for c, value in enumerate(col):
            ads[i][c, j] = value
            ads[j][c, i] = (p - value) % p
    return ads


#----------------------------------------------------------------------------
# closure equations for one echelon pattern

def _cell_equations(ads, pivots, n, p):
    """Quadric system for "row space is an ideal" on one pivot pattern.

    Returns (equations, nvars): each equation maps a sorted tuple of
    variable indices (length 0, 1 or 2) to a nonzero coefficient mod p.
    Variables are the free entries of the echelon form, row major.
    """
    piv = list(pivots)
    var_index = {}
    for r, jr in enumerate(piv):
        for c in range(jr + 1, n):
            if c not in piv:
                var_index[(r, c)] = len(var_index)

    def entry_poly(r, c):
        if c == piv[r]:
            return {(): 1}
        key = var_index.get((r, c))
        return {} if key is None else {(key,): 1}

    equations = []
    seen = set()
    for ad in ads:
        for r in range(len(piv)):
            image = []
            for c in range(n):
                w = {}
                for t in range(n):
                    a = int(ad[c, t])
                    if a == 0:
                        continue
                    for mono, co in entry_poly(r, t).items():
                        w[mono] = (w.get(mono, 0) + a * co) % p
                image.append(w)
            for c in range(n):
                if c in piv:
                    continue
                eq = dict(image[c])
                for s in range(len(piv)):
                    factor = entry_poly(s, c)
                    if not factor or not image[piv[s]]:
                        continue
                    ((fmono, fco),) = factor.items()
                    for mono, co in image[piv[s]].items():
                        key = tuple(sorted(mono + fmono))
                        eq[key] = (eq.get(key, 0) - co * fco) % p
                eq = {k: v % p for k, v in eq.items() if v % p}
                if not eq:
                    continue
                fingerprint = tuple(sorted(eq.items()))
                if fingerprint not in seen:
                    seen.add(fingerprint)
                    equations.append(eq)
    equations.sort(key=lambda e: (len(_support(e)), len(e)))
    return equations, len(var_index)


def _support(eq):
    out = set()
    for mono in eq:
        out.update(mono)
    return out


def _eval_eq(eq, values, p):
    acc = 0
    for mono, co in eq.items():
        if not mono:
            term = co
        elif len(mono) == 1:
            term = values[mono[0]] * co
        else:
            term = values[mono[0]] * values[mono[1]] % p * co
        acc = acc + term
    if isinstance(acc, np.ndarray):
        return np.mod(acc, p)
    return acc % p


def _count_cell(ads, pivots, n, p):
    equations, nvars = _cell_equations(ads, pivots, n, p)
    if not equations:
        return p ** nvars
    if nvars == 0:
        return 0
    first = equations[0]
    first_vars = sorted(_support(first))
    if not first_vars:
        # a constant nonzero residual: no member of this pattern closes up
        return 0
    rest_vars = [v for v in range(nvars) if v not in first_vars]
    if p ** len(first_vars) > 50_000_000:
        raise OracleInapplicable(
            "echelon sweep mesh too large (%d variables at p=%d)"
            % (len(first_vars), p)
        )

    # Mesh only the variables the first equation sees; everything else is a
    # free factor until a later equation mentions it.
    mesh = {}
    for axis, v in enumerate(first_vars):
        shape = [1] * len(first_vars)
        shape[axis] = p
        mesh[v] = np.arange(p, dtype=np.int64).reshape(shape)
    values = [mesh.get(v, 0) for v in range(nvars)]
    keep = np.nonzero(_eval_eq(first, values, p) == 0)
    solved = {v: keep[axis].astype(np.int64) for axis, v in enumerate(first_vars)}
    width = next(iter(solved.values())).shape[0] if solved else 0
    if width == 0:
        return 0

    for eq in equations[1:]:
        new_vars = sorted(v for v in _support(eq) if v not in solved)
        if new_vars:
            # Outer product of the current survivors with a mesh over the
            # newly mentioned variables, then filter.
            expanded = {}
            for v, arr in solved.items():
                expanded[v] = arr.reshape([width] + [1] * len(new_vars))
            for axis, v in enumerate(new_vars):
                s = [1] * (len(new_vars) + 1)
                s[axis + 1] = p
                expanded[v] = np.arange(p, dtype=np.int64).reshape(s)
            values = [expanded.get(v, 0) for v in range(nvars)]
            keep = np.nonzero(_eval_eq(eq, values, p) == 0)
            old_vars = list(solved)
            solved = {v: solved[v][keep[0]] for v in old_vars}
            for axis, v in enumerate(new_vars):
                solved[v] = keep[axis + 1].astype(np.int64)
            for v in new_vars:
                rest_vars.remove(v)
        else:
            values = [solved.get(v, 0) for v in range(nvars)]
            keep = _eval_eq(eq, values, p) == 0
            solved = {v: arr[keep] for v, arr in solved.items()}
        width = next(iter(solved.values())).shape[0]
        if width == 0:
            return 0
    return width * p ** len(rest_vars)


def count_ideals_mod(g, p, dim):
    """Number of dim-dimensional ideals of g transplanted to F_p."""
    n = g.dim
    if n > 4:
        raise OracleInapplicable("exhaustive sweep is limited to dimension 4")
    if dim < 0 or dim > n:
        return 0
    if dim == 0 or dim == n:
        return 1
    ads = ad_tensors_mod(g, p)
    return sum(
        _count_cell(ads, pivots, n, p)
        for pivots in itertools.combinations(range(n), dim)
    )


def count_all_dims(g, p):
    """{dim: ideal count mod p} over the proper dimensions 1..n-1."""
    n = g.dim
    if n > 4:
        raise OracleInapplicable("exhaustive sweep is limited to dimension 4")
    ads = ad_tensors_mod(g, p)
    out = {}
    for dim in range(1, n):
        out[dim] = sum(
            _count_cell(ads, pivots, n, p)
            for pivots in itertools.combinations(range(n), dim)
        )
    return out


#----------------------------------------------------------------------------
# predicted counts from enumeration strata

def gaussian_binomial(w, f, q):
    """Number of f-dimensional subspaces of F_q^w, exactly."""
    if f < 0 or f > w:
        return 0
    num = 1
    den = 1
    for k in range(f):
        num *= q ** (w - k) - 1
        den *= q ** (k + 1) - 1
    assert num % den == 0
    return num // den


def _stratum_params(stratum):
    names = set()
    for row in stratum.base.rows:
        names.update(vec_params(row))
    return names


def predicted_counts(lattice, p):
    """{dim: count} the stratum list predicts over F_p.

    A stratum with an f-dimensional free choice inside a w-dimensional free
    space contributes one Gaussian binomial; parameters in the base
    contribute a factor p each (affine chart coordinates).  The prediction
    is only meaningful at primes where the relevant eigenvalues stay
    distinct and any adopted radicand has a square root; callers check that.
    """
    out = {}
    n = lattice.algebra.dim
    for dim in range(1, n):
        total = 0
        for stratum in lattice.strata(dim):
            w = stratum.free_space.dim if stratum.free_space is not None else 0
            count = gaussian_binomial(w, stratum.free_dim, p)
            count *= p ** len(_stratum_params(stratum))
            total += count
        out[dim] = total
    return out
