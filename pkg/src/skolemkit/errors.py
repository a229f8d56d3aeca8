"""Exception hierarchy shared by every engine module.

Each class maps onto one CLI exit code (see ``cli.EXIT_CODES``).
"""
from __future__ import annotations


class SkolemKitError(Exception):
    """Base class for all engine errors."""


class ParseError(SkolemKitError, ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.text = text
        self.pos = pos
        where = f" at position {pos}" if text else ""
        super().__init__(f"{message}{where}")


class PreconditionError(SkolemKitError, ValueError):
    """An operation was called outside its documented domain."""


class UndeterminedError(SkolemKitError):
    """A sign or order decision could not be made within the configured caps.

    ``reason`` is one of ``"precision"`` (constant comparison hit the
    precision cap) or ``"depth"`` (series truncation hid the answer).
    """

    def __init__(self, message: str, reason: str = "precision"):
        self.reason = reason
        super().__init__(message)


class ResourceLimitError(SkolemKitError):
    """A configured size/precision/range limit was exceeded."""


class OracleRangeError(ResourceLimitError):
    """Numeric evaluation would need more range than ln-space offers."""


class EngineFault(SkolemKitError):
    """Symbolic and numeric answers disagree, or an internal invariant broke."""
