"""Exception hierarchy shared by the library and the command line."""

from __future__ import annotations


class CRCodesError(Exception):
    """Base class for every error raised by :mod:`crcodes`."""


class ParameterError(CRCodesError, ValueError):
    """An argument lies outside the domain of the operation."""


class ShapeError(CRCodesError, ValueError):
    """Matrix or vector dimensions are incompatible."""


class ParseError(CRCodesError, ValueError):
    """Malformed textual or JSON input."""


class GuardError(CRCodesError):
    """A configurable resource guard would be exceeded."""


class InconsistentDistributionError(CRCodesError, ValueError):
    """A weight distribution transforms to non-integral or negative counts."""


class MultigraphError(CRCodesError, ValueError):
    """The coset graph of a code with minimum distance below 3 is not simple."""


class DisconnectedGraphError(CRCodesError, ValueError):
    """Some vertex is unreachable from the base vertex."""


class MergeError(CRCodesError, ValueError):
    """A cell grouping does not yield an equitable quotient."""


class SearchInterrupted(CRCodesError):
    """A search stopped early; its frontier was written to ``checkpoint``."""

    def __init__(self, message: str, checkpoint: str | None = None, outcome=None):
        super().__init__(message)
        self.checkpoint = checkpoint
        self.outcome = outcome
