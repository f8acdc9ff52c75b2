"""Exception hierarchy shared by the library, the orchestrator and the CLI."""
from typing import Optional, Sequence


class SymembedError(Exception):
    """Base class for every error raised by symembed."""


class RankMismatchError(SymembedError, ValueError):
    pass


class NotFiniteTypeError(SymembedError, ValueError):
    pass


class UnknownSpaceError(SymembedError, KeyError):
    def __str__(self):
        return f"unknown symmetric space: {self.args[0]!r}"


class InputDocumentError(SymembedError, ValueError):
    pass


class ValidationError(SymembedError):
    """A datum, monoid or embedding failed a named check.

    `axiom` names the failed condition, `index` the label or coordinate that
    witnesses it, and `failed` lists every failed predicate when several are
    checked together.
    """

    def __init__(self, message: str, axiom: Optional[str] = None,
                 index: Optional[object] = None, failed: Sequence[str] = ()):
        super().__init__(message)
        self.axiom = axiom
        self.index = index
        self.failed = list(failed)

    def to_dict(self):
        return {"error": str(self), "axiom": self.axiom,
                "index": self.index, "failed": self.failed}
