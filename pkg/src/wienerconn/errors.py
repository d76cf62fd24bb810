"""Exception types raised by the library."""


class WienerConnError(Exception):
    """Base class for library errors."""


class ParseError(WienerConnError, ValueError):
    """Malformed input file.

    ``line`` is the 1-based line number when known, ``section`` the STP
    section being read.
    """

    def __init__(self, message, line=None, section=None):
        prefix = []
        if section is not None:
            prefix.append(f"section {section}")
        if line is not None:
            prefix.append(f"line {line}")
        if prefix:
            message = f"{', '.join(prefix)}: {message}"
        super().__init__(message)
        self.line = line
        self.section = section


class InfeasibleError(WienerConnError):
    """No connector exists, e.g. query vertices in different components."""


class DisconnectedError(WienerConnError, ValueError):
    """A vertex set whose induced subgraph was required to be connected is not."""


class InstanceTooLargeError(WienerConnError):
    """An exact method refused an instance above its size guard."""
