"""Exception hierarchy.

Everything raised by this package derives from QcoolError so callers can
catch broadly.  Errors that are also value problems derive from ValueError
as well.
"""


class QcoolError(Exception):
    """Base class for all package errors."""


class ResourceLimitError(QcoolError):
    """A requested object would exceed a configured size cap."""


class ConfigError(QcoolError, ValueError):
    """A method configuration is malformed or internally inconsistent."""


class CycleError(QcoolError, ValueError):
    """Base class for invalid cycle lists."""


class DegenerateCycleError(CycleError):
    """A cycle repeats a state internally."""


class OverlappingCyclesError(CycleError):
    """Two cycles in one list share a state."""


class PhaseSynthesisError(QcoolError, ValueError):
    """Phase-bearing unitary is not synthesizable as a NOT-gate circuit."""


class PopulationInversionError(QcoolError, ValueError):
    """Excited population above 1/2 has no nonnegative temperature."""
