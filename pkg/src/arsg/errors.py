"""Exception hierarchy shared by all modules.

Every error carries a stable machine-readable ``code`` so the CLI and the
session API can report failures uniformly.
"""


class ArsgError(Exception):
    """Base class; ``code`` defaults to the class name."""

    @property
    def code(self):
        return type(self).__name__


# --- knowledge base ---
class DuplicateId(ArsgError):
    pass


class DuplicateSurfaceForm(ArsgError):
    pass


class CycleDetected(ArsgError):
    pass


class ColorMismatch(ArsgError):
    pass


class BadPolarity(ArsgError):
    pass


class BadLevel(ArsgError):
    pass


class UnknownConcept(ArsgError):
    pass


class ConflictingRedefinition(ArsgError):
    pass


# --- text preparation ---
class EmptyInput(ArsgError):
    pass


# --- grammar core ---
class SchemaMismatch(ArsgError):
    pass


class KindMismatch(ArsgError):
    pass


class UnsetSource(ArsgError):
    pass


class SchemaViolation(ArsgError):
    pass


# --- learning ---
class ReplayMismatch(ArsgError):
    pass


class UnknownSymbol(ArsgError):
    pass


# --- parsing ---
class NoApplicableRule(ArsgError):
    pass


class NoAction(ArsgError):
    pass


class ParseFailure(ArsgError):
    def __init__(self, message, partial_forest=None, stats=None):
        super().__init__(message)
        self.partial_forest = partial_forest or []
        self.stats = stats


# --- summarization ---
class MalformedTree(ArsgError):
    pass


class BadRequest(ArsgError):
    pass


# --- evaluation ---
class LeafMismatch(ArsgError):
    pass


class EmptyReference(ArsgError):
    pass


# --- transfer ---
class DanglingTarget(ArsgError):
    pass


class RoleSchemaBreak(ArsgError):
    pass


# --- annotation sessions ---
class NoLexicalCores(ArsgError):
    pass


class IllegalShift(ArsgError):
    pass


class IncompleteReduce(ArsgError):
    pass


class SessionClosed(ArsgError):
    pass


class NothingToUndo(ArsgError):
    pass


class NotReducedToRoot(ArsgError):
    pass


class SessionNotFound(ArsgError):
    pass
