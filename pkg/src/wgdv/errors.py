"""Exception types shared across the package."""


class WgdvError(Exception):
    """Base class for all errors raised by this package."""


class PdbParseError(WgdvError):
    """A PDB file could not be parsed.

    Carries the 1-based line number of the offending record when known.
    """

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class ChainNotFoundError(WgdvError):
    """The requested chain id does not occur in the file."""


class DegenerateInputError(WgdvError):
    """Input too small or too flat for the requested operation."""


class GraphInputError(WgdvError):
    """A graph argument violates a precondition (disconnected, wrong size, ...)."""


class AtlasBuildError(WgdvError):
    """Internal consistency check failed while building the graphlet atlas."""


class PsnBuildError(WgdvError):
    """A protein structure network could not be constructed."""


class FormatError(WgdvError):
    """A serialized artifact (binary matrix, store index, manifest) is malformed."""


class FitError(WgdvError):
    """Classifier training failed to reach the requested tolerance."""
