"""Exception types shared across the package."""


class DimensionError(ValueError):
    """An operand has the wrong Hilbert-space dimension."""


class ContractViolation(ValueError):
    """Input violates a physical contract (non-Hermitian, negative eigenvalue, ...)."""


class DomainError(ValueError):
    """Parameter outside the domain of a formula."""


class StepSizeError(RuntimeError):
    """Integrator drift exceeded tolerance; retry with a smaller dt."""


class ConfigError(ValueError):
    """Invalid scenario configuration."""
