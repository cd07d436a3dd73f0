"""Exception types shared across the package."""


class DissipairError(Exception):
    """Base class for all package errors."""


class UnstableError(DissipairError):
    """The drift matrix has an eigenvalue with positive real part."""


class NonUniqueError(DissipairError):
    """Degenerate mode structure: the steady state is not unique."""


class ConfigError(DissipairError):
    """Invalid run configuration."""


class ChiralSymmetryError(DissipairError):
    """Hopping graph is not bipartite; carries a witness edge."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
