"""Exception types shared across the package."""


class DegeneracyError(ValueError):
    """Raised when an operation requires a gapped ground state but the gap is
    below tolerance (e.g. at the monopole point)."""


class NumericsError(RuntimeError):
    """Raised when a numerical result is outside its validity regime, e.g. a
    materially negative metric determinant."""


class ConfigError(ValueError):
    """Raised for invalid run configurations (unknown keys, bad values)."""
