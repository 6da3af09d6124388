"""Exception types shared across the package."""


class WheelsimError(Exception):
    """Base class for all wheelsim errors."""


class ParseError(WheelsimError):
    """A document could not be parsed; the message names the line or field."""


class ValidationError(WheelsimError):
    """A parsed document violates its invariants.

    ``violations`` lists every violation found, not just the first.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class DescriptorMismatch(WheelsimError):
    """Raw input does not match the device descriptor's axis layout."""


class InsufficientSamples(WheelsimError):
    """Too few resting samples to calibrate a device."""


class NonMonotonicTimestamps(WheelsimError):
    """A trace file's timestamps decreased."""


class SessionEnded(WheelsimError):
    """The session was ticked after it terminated."""


class SessionNotEnded(WheelsimError):
    """A report was requested from a session that is still running."""


class DecodeError(WheelsimError):
    """A wire message could not be decoded; the message names the bad path."""
