"""Exception taxonomy.

Every error raised on purpose by the package derives from SolvlieError, so
callers (and the command line driver) can sort failures into three buckets:
bad input, unsupported-but-legitimate input, and internal invariant
violations.  The class docstrings say which bucket each one belongs to.
"""


class SolvlieError(Exception):
    """Base class for all errors raised deliberately by this package."""


# --- scalar tower -----------------------------------------------------------

class DivisionByZero(SolvlieError):
    """Division by a scalar that is identically zero."""


class IncompatibleRadicands(SolvlieError):
    """Arithmetic tried to mix Quad values with different radicands."""


class NotRealValued(SolvlieError):
    """A sign was requested for a value outside the real subfield."""


class DenominatorVanishes(SolvlieError):
    """Substitution sent the denominator of a rational function to zero."""


# --- linear algebra ---------------------------------------------------------

class InconsistentSystem(SolvlieError):
    """A linear system required to be solvable has no solution."""


class AmbientMismatch(SolvlieError):
    """Vectors or subspaces from different ambient dimensions were mixed."""


class ParameterizedEntriesUnsupported(SolvlieError):
    """An operation needs parameter free matrix entries and got parameters."""


class IrreducibleDegreeTooHigh(SolvlieError):
    """Characteristic polynomial has an irreducible factor of degree > 2."""


class NonCommutingFamily(SolvlieError):
    """Joint eigenspace refinement was asked for a non commuting family."""


# --- Lie algebra layer ------------------------------------------------------

class NotASubalgebra(SolvlieError):
    """The given span is not closed under the bracket."""


class NotAnIdeal(SolvlieError):
    """The given subspace is not invariant under the adjoint action."""


class NotSolvable(SolvlieError):
    """The derived series of the algebra does not terminate at zero."""


class AlreadyComplex(SolvlieError):
    """Complexification was requested for an algebra that carries i already."""


class JacobiViolation(SolvlieError):
    """A structure constant table fails the Jacobi identity.

    Carries a witness triple of basis indices in ``args[1]`` when raised by
    ``LieAlgebra.jacobi_check``.
    """


# --- ideal enumeration ------------------------------------------------------

class ParameterizedQuotientUnsupported(SolvlieError):
    """Quotient by a family of ideals (free directions) is not defined."""


class AmbiguousUnderConstraints(SolvlieError):
    """The answer depends on where parameters sit relative to constraints."""


class OracleInapplicable(SolvlieError):
    """The finite field cross-check cannot run at this prime (a structure
    constant denominator vanishes mod p, or a needed radicand has no square
    root mod p)."""


# --- adjoint flows ----------------------------------------------------------

class MixedGeneratorUnsupported(SolvlieError):
    """No exact flow is available for this non semisimple, non nilpotent
    generator (its semisimple part has irrational eigenvalues)."""


class NonDiagonalizableTorus(SolvlieError):
    """Torus alignment needs a diagonalizable adjoint action and got none."""


class NonRationalWeights(SolvlieError):
    """Torus alignment needs rational weights and found irrational ones."""


class ChainStuck(SolvlieError):
    """Normalizer chain construction ran out of admissible extensions."""


# --- file format / CLI ------------------------------------------------------

class ParseError(SolvlieError):
    """Syntax error in an ``.alg`` file or element expression.

    Attributes ``line`` and ``col`` hold the 1-based position.
    """

    def __init__(self, message, line=None, col=None):
        super().__init__(message)
        self.line = line
        self.col = col

    def __str__(self):
        base = super().__str__()
        if self.line is not None:
            return "line %d, col %d: %s" % (self.line, self.col or 0, base)
        return base


class UnknownLabel(ParseError):
    """An element expression used a basis label the algebra does not have."""


class DuplicateBracket(ParseError):
    """The same bracket pair was defined twice in an ``.alg`` file."""
