"""Exception types shared across the package.

Every error raised on a bad game description, bad board, or bad request
derives from LudelabError so callers (CLI, service) can map them to
exit code 2 / HTTP 4xx uniformly.
"""

from __future__ import annotations


class LudelabError(Exception):
    """Base class for all domain errors."""


# --- parsing -------------------------------------------------------------

class ParseError(LudelabError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class UnbalancedParenthesis(ParseError):
    pass


class UnexpectedToken(ParseError):
    pass


class EmptyInput(ParseError):
    def __init__(self):
        super().__init__("empty input", 1, 1)


# --- validation ----------------------------------------------------------

class ValidationError(LudelabError):
    pass


class UnknownKeyword(ValidationError):
    def __init__(self, keyword: str, line: int = 0, column: int = 0):
        super().__init__(f"unknown ludeme keyword '{keyword}' (line {line}, column {column})")
        self.keyword = keyword


class ArityMismatch(ValidationError):
    pass


class KindMismatch(ValidationError):
    pass


class MissingSection(ValidationError):
    def __init__(self, section: str):
        super().__init__(f"missing required section: {section}")
        self.section = section


# --- boards --------------------------------------------------------------

class BoardError(LudelabError):
    pass


class SizeOutOfRange(BoardError):
    pass


class MalformedGraph(BoardError):
    pass


class TooLargeForExhaustive(BoardError):
    pass


# --- engine --------------------------------------------------------------

class EngineError(LudelabError):
    pass


class UnsupportedLudemeCombination(EngineError):
    pass


class PlacementConflict(EngineError):
    pass


class IllegalMove(EngineError):
    pass


class CalledOnTerminal(EngineError):
    pass


class StateBudgetExceeded(EngineError):
    pass


# --- analysis ------------------------------------------------------------

class DuplicateName(LudelabError):
    pass


class MetadataMismatch(LudelabError):
    pass


class TooFewTaxa(LudelabError):
    pass


class MissingLeafTrait(LudelabError):
    pass


class MissingDate(LudelabError):
    pass


# --- reconstruction ------------------------------------------------------

class InvalidSlotPath(LudelabError):
    pass


class EmptySlot(LudelabError):
    pass


class UnknownGame(LudelabError):
    pass
