"""Exception hierarchy shared by every module."""

from __future__ import annotations


class GroupError(Exception):
    """Base class for all engine errors."""


class NotAGroup(GroupError):
    pass


class NotPGroup(GroupError):
    pass


class SizeCeilingError(GroupError):
    pass


class ClosureTooLarge(SizeCeilingError):
    pass


class NotAbelian(GroupError):
    pass


class NoUniqueInvolution(GroupError):
    pass


class NotAHomomorphism(GroupError):
    def __init__(self, message: str, witness: tuple[int, int] | None = None):
        super().__init__(message)
        self.witness = witness


class NotBijective(NotAHomomorphism):
    pass


class NotGenerating(GroupError):
    pass


class OrderMismatch(GroupError):
    pass


class BadData(GroupError):
    pass


class UnknownName(GroupError):
    pass


class BadUGroup(GroupError):
    pass


class BadAction(GroupError):
    pass


class NoFpfFound(GroupError):
    pass


class FixedPointMismatch(GroupError):
    pass


class BudgetExceeded(GroupError):
    def __init__(self, message: str, partial: int = 0):
        super().__init__(message)
        self.partial = partial


class PreconditionViolated(GroupError):
    pass


class ParseError(GroupError):
    def __init__(self, message: str, line: int, col: int, expected: tuple[str, ...] = ()):
        where = f"line {line}, col {col}"
        if expected:
            message = f"{message} (expected one of: {', '.join(expected)})"
        super().__init__(f"{where}: {message}")
        self.line = line
        self.col = col
        self.expected = expected


class FormatError(GroupError):
    def __init__(self, message: str, lineno: int):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class EvalError(GroupError):
    pass
