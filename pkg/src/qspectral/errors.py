"""Exception hierarchy shared by every qspectral module."""


class QSpectralError(Exception):
    """Base class for all package errors."""


class ConfigError(QSpectralError, ValueError):
    """Unknown catalog id, bad parameter set, or invalid experiment config."""


class UsageError(QSpectralError, ValueError):
    """A request the caller should not have made (unknown table id, bad render target)."""


class ShapeError(QSpectralError, ValueError):
    """Fields or filters live on different grids."""


class SingularFilterError(QSpectralError, ArithmeticError):
    """A spectral filter denominator vanishes (or nearly so) at some mode."""


class DegenerateReferenceError(QSpectralError, ArithmeticError):
    """Relative error requested against a zero reference."""


class DegenerateInputError(QSpectralError, ValueError):
    """A zero field cannot be amplitude-encoded."""


class ValidationError(QSpectralError, ValueError):
    """A gate or circuit violates a structural invariant (non-unitary block, bad qubit)."""


class RangeError(QSpectralError, ValueError):
    """Value outside the representable range of a binary angle."""


class NormalizationError(QSpectralError, ValueError):
    """Block-encoding normalization smaller than the operator norm."""


class OracleDomainError(QSpectralError, ValueError):
    """Emulated oracle received an input outside its stated domain."""


class PrecisionCeilingError(QSpectralError, ValueError):
    """Requested precision needs more fixed-point bits than the configured ceiling."""


class PostSelectionFailure(QSpectralError, RuntimeError):
    """The ancilla-|0> branch carries (numerically) no probability."""
