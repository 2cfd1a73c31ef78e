"""Exception hierarchy.  Validation problems map to CLI exit code 2."""


class HypertoricError(Exception):
    """Base class for all package errors."""


class ValidationError(HypertoricError, ValueError):
    """Input data does not describe a valid problem."""


class NonPrimitiveSubtorus(ValidationError):
    """The columns of A do not come from a connected primitive subtorus."""


class RankDeficient(ValidationError):
    """A has rank smaller than its number of rows."""


class DimensionTooLarge(ValidationError):
    """An enumeration was requested beyond its supported size."""


class NotOnBase(ValidationError):
    """A query point b does not satisfy A b = beta."""


class BetaNotZero(ValidationError):
    """The operation is only defined for beta = 0."""


class NonUnitParameter(ValidationError):
    """A torus parameter does not have unit modulus."""


class PreconditionError(ValidationError):
    """A numeric check was asked for on data outside its domain."""


class RankDrop(HypertoricError):
    """A tangent frame has the wrong dimension (sample sits on a singular locus)."""


class InfeasibleTarget(HypertoricError):
    """A fiber sample could not be produced within tolerance."""
