"""Exception types shared across the package."""


class GzzForgeError(Exception):
    """Base class for all package-specific failures."""


class DimensionError(GzzForgeError):
    """Mismatched or unsupported problem dimensions."""


class InfeasibleError(GzzForgeError):
    """No solution exists within the requested constraints."""


class ConvergenceError(GzzForgeError):
    """An iterative method exhausted its step budget."""


class SimulationError(GzzForgeError):
    """A circuit cannot be handled by the requested simulator."""


class ParseError(GzzForgeError):
    """Malformed circuit text or JSON input."""
