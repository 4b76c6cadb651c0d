"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Shapes or sizes of the arguments are incompatible."""


class DomainError(ValueError):
    """A scalar argument lies outside the admissible domain."""


class NotContractionError(ValueError):
    """A matrix expected to be a contraction has operator norm > 1."""


class NotPSDError(ValueError):
    """A matrix expected to be positive semidefinite has a negative eigenvalue."""


class PreconditionError(ValueError):
    """An input violates a documented precondition."""


class FormatError(ValueError):
    """A serialized document is malformed or has an unsupported version."""


class CertificationError(RuntimeError):
    """A reported value could not be reproduced from its stored witness."""
