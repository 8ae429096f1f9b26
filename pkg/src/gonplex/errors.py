"""Exception hierarchy shared by all modules."""


class GonplexError(Exception):
    """Base class for every error raised by the package."""


class UsageError(GonplexError):
    """Bad parameters supplied by a caller (maps to CLI exit code 2)."""


class CompositeCharacteristic(UsageError):
    pass


class NotPrimePower(UsageError):
    pass


class SizeBound(UsageError):
    pass


class DivisionByZero(GonplexError, ZeroDivisionError):
    pass


class TowerMismatch(GonplexError):
    pass


class InternalInconsistency(GonplexError):
    """A mathematical invariant that must hold was found broken."""


class PlaneFormatError(UsageError):
    pass


class SamePoint(GonplexError):
    pass


class SameLine(GonplexError):
    pass


class AxiomViolation(GonplexError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class CharacteristicThree(UsageError):
    pass


class PlaneMismatch(GonplexError):
    pass


class NotBijective(GonplexError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotCertified(GonplexError):
    pass


class BudgetExceeded(GonplexError):
    def __init__(self, nodes):
        super().__init__(f"search budget exceeded after {nodes} nodes")
        self.nodes = nodes


class SearchExhausted(GonplexError):
    """The whole search tree was refuted: no basic bijection exists."""

    def __init__(self, nodes):
        super().__init__(f"search exhausted after {nodes} nodes, no bijection exists")
        self.nodes = nodes


class NoExtension(GonplexError):
    pass


class StaleInput(GonplexError):
    pass


class WordError(UsageError):
    pass


class BadAlphabet(WordError):
    pass


class BadPrefix(WordError):
    pass


class ProperPower(WordError):
    pass


class CyclicPower(WordError):
    pass


class SameLetter(UsageError):
    pass


class UncheckedPresentation(GonplexError):
    pass


class BadVertex(GonplexError):
    pass


class Disconnected(GonplexError):
    pass
