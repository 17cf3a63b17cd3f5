"""Exception types shared across the simulator."""


class OccNavError(Exception):
    """Base class for all simulator errors."""


class DomainError(OccNavError):
    """An argument is outside the domain an operation is defined on."""


class EncodingError(OccNavError):
    """A chip sequence violates the line-code structure."""


class SyncError(OccNavError):
    """No valid start symbol / codeword alignment could be found."""


class InsufficientDataError(OccNavError):
    """A stripe profile is too short to hold a complete codeword."""


class ScanError(OccNavError):
    """A capture produced no usable LED detections."""


class NonConvergenceError(OccNavError):
    """Navigation did not reach the target within the step budget."""

    def __init__(self, message, log=None):
        super().__init__(message)
        self.log = log


class ScenarioError(OccNavError):
    """A scenario config file is missing, malformed, or inconsistent."""
