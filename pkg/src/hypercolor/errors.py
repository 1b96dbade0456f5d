"""Exception hierarchy shared by all hypercolor modules."""

from __future__ import annotations


class HypercolorError(Exception):
    """Base class for every error raised by this package."""


class NotHyperbolicError(HypercolorError, ValueError):
    pass


class IncompatibleSignatureError(HypercolorError, ValueError):
    """The face-count equation has no integer solution for (p, q, g)."""


class PatchOverflowError(HypercolorError):
    pass


class PairingIncompatibleError(HypercolorError):
    """The side pairings do not glue the patch into a closed trivalent surface.

    ``diagnostics`` holds whatever the builder learned before giving up.
    """

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class NoComplexError(HypercolorError):
    pass


class NotThreeColorableError(NoComplexError):
    pass


class TooFewFacesError(NoComplexError):
    pass


class ComplexCodeMismatchError(HypercolorError):
    pass


class ColorDependencyError(HypercolorError):
    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class OpenStringError(HypercolorError, ValueError):
    pass
