"""Exception types raised across the package."""


class DomainError(ValueError):
    """A parameter lies outside the domain an operation is defined on."""


class DimensionError(DomainError):
    """Sphere dimension is invalid or two points live in different dimensions."""


class ModelError(DomainError):
    """Operation not defined for the instance's model (e.g. circle-only diagnostics)."""


class InconsistencyError(RuntimeError):
    """Same/different-cluster constraints admit no valid 2-coloring."""
