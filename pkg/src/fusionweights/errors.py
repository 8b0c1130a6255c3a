"""Exception hierarchy shared across the engine."""

from __future__ import annotations


class EngineError(Exception):
    """Base class for all engine-raised errors."""

    def record(self) -> dict:
        return {"type": type(self).__name__, "message": str(self)}


class MalformedSpec(EngineError):
    pass


class BudgetExceeded(EngineError):
    pass


class ElementNotInGroup(EngineError):
    pass


class NotNormal(EngineError):
    pass


class NotAbelian(EngineError):
    pass


class NonMatchingTargets(EngineError):
    pass


class NonSurjective(EngineError):
    pass


class UnknownName(EngineError):
    pass


class NoSuchQuotient(EngineError):
    pass


class UnsupportedValuation(EngineError):
    pass


class HypothesisFailed(EngineError):
    pass


class BadPrime(EngineError):
    pass


class LevelTooSmall(EngineError):
    pass


class ParseError(EngineError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownAtom(ParseError):
    pass
