"""Exception and warning types shared across the package."""


class PHSError(Exception):
    """Base class for all errors raised by this package."""


class SchemaError(PHSError):
    """A model document does not conform to the JSON schema."""


class ValidationError(PHSError):
    """System data violates a structural invariant (Hermitian-ness,
    positive definiteness, invertibility, shape)."""


class DomainError(PHSError):
    """An argument lies outside its admissible domain, e.g. zeta not in [0,1]."""


class ShapeError(PHSError):
    """A matrix argument has the wrong shape or symmetry for the operation."""


class SingularityError(PHSError):
    """A matrix that should be invertible is numerically singular."""


class PreconditionError(PHSError):
    """A test's standing assumption fails, so its verdict is inconclusive."""


class IllPosedError(PHSError):
    """Simulation of a system that does not generate a C0-semigroup was
    requested without the explicit opt-in flag."""


class ContinuityError(PHSError):
    """Eigenvalue crossing on the simulation grid; the diagonalizing
    transform is not smooth enough for the characteristics scheme."""


class StabilityError(PHSError):
    """Simulated field exceeded the blow-up guard."""


class SpecError(PHSError):
    """An initial-condition spec string names an unknown profile or has
    malformed arguments."""


class ContinuityWarning(UserWarning):
    """Eigenvalue ordering changes along a grid; smoothness of the
    diagonalizing transform is in doubt (non-fatal)."""
