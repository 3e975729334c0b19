"""Exception types shared across the package."""


class CitefieldsError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(CitefieldsError):
    """Raised in strict mode when the corpus reader hits an error-severity problem.

    Carries the triggering diagnostic as ``diagnostic``.
    """

    def __init__(self, diagnostic):
        self.diagnostic = diagnostic
        super().__init__(str(diagnostic))


class AnalysisError(CitefieldsError):
    """An analysis was asked for on inputs where its result is undefined."""
