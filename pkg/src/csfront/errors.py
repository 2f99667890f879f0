"""Shared exception classes.

Exit-code mapping used by the CLI: ConfigError -> 2, everything else -> 1.
"""


class CsfrontError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(CsfrontError):
    """Bad configuration value, missing resource path, or violated plan precondition."""


class InputError(CsfrontError):
    """An operation received input that violates its precondition."""


class FormatError(CsfrontError):
    """A file, line, or wire payload does not match its documented format."""


class DataError(CsfrontError):
    """Training or evaluation data is structurally valid but unusable (e.g. empty class)."""


class SizeError(CsfrontError):
    """A dataset is too small to satisfy a requested sampling ratio."""


class CoverageError(CsfrontError):
    """An aggregation is missing required cells."""


class InventoryError(CsfrontError):
    """A phoneme outside the unified inventory was produced or referenced."""


class TemplateError(CsfrontError):
    """A sentence template references an empty or unknown slot."""


class GenerationError(CsfrontError):
    """Bounded resampling failed to produce enough distinct outputs."""


class BackendError(CsfrontError):
    """Base class for external LID backend failures."""


class HandshakeError(BackendError):
    """The backend did not present the expected protocol handshake."""


class ProtocolError(BackendError):
    """The backend answered with a malformed response (wrong count or unknown label)."""


class TransportError(BackendError):
    """The backend process died or closed its streams mid-session."""
