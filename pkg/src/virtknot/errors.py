"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class VirtKnotError(ValueError):
    """Base class for all domain errors raised by virtknot."""


# gauss
class GaussCodeError(VirtKnotError):
    pass


class MalformedToken(GaussCodeError):
    pass


class CrossingVisitedTwiceOver(GaussCodeError):
    pass


class CrossingVisitedTwiceUnder(GaussCodeError):
    pass


class SignMismatch(GaussCodeError):
    pass


class MissingPartnerPass(GaussCodeError):
    pass


class UnknownCrossing(GaussCodeError):
    pass


# moves
class InapplicableMove(VirtKnotError):
    pass


# invariants
class TooManyCrossings(VirtKnotError):
    pass


class GroupTableInvalid(VirtKnotError):
    pass


# site
class SiteError(VirtKnotError):
    pass


class WrongCodomain(SiteError):
    pass


class CompositionMismatch(SiteError):
    pass


class NotFunctorial(SiteError):
    pass


# cli / corpus
class CorpusParseError(VirtKnotError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line
