class BibundleError(Exception):
    """Base class for every error raised by the bibundle library."""


class ShapeMismatch(BibundleError, ValueError):
    """Operands do not fit together (domain/codomain or groupoid mismatch)."""

    def __init__(self, message, left=None, right=None):
        super().__init__(message)
        self.left = left
        self.right = right


class GroupoidLawError(BibundleError, ValueError):
    """A constructor was handed data that fails a named axiom."""

    def __init__(self, axiom, detail=''):
        self.axiom = axiom
        self.detail = detail
        super().__init__(f'{axiom}: {detail}' if detail else axiom)


class NotAnEssentialEquivalence(BibundleError):
    def __init__(self, predicate):
        self.predicate = predicate
        super().__init__(f'functor is not an essential equivalence: {predicate} fails')


class SearchExhausted(BibundleError):
    """The backtracking search ran past its node budget."""


class GroupTooLarge(BibundleError):
    pass


class DocumentError(BibundleError):
    """A document could not be parsed; ``path`` locates the offending field."""

    def __init__(self, message, path='', code=None, witness=None):
        self.path = path
        self.code = code
        self.witness = witness
        super().__init__(f'{path}: {message}' if path else message)
