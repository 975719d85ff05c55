"""Exceptions raised throughout the lab."""
import json


class RamseyLabError(Exception):
    """Base class of every error raised by the lab."""


class InvalidGraph(RamseyLabError, ValueError):
    """Bad vertex, loop, duplicate edge or size guard."""


class PatternTooLarge(RamseyLabError):
    pass


class HostTooLarge(RamseyLabError):
    """A host is above the bound of an exponential scan."""


class IncompleteColouring(RamseyLabError):
    pass


class SearchBudgetExhausted(RamseyLabError):

    """The colouring search ran out of decision nodes, the answer is unknown."""

    def __init__(self, message, nodes=0):
        super(SearchBudgetExhausted, self).__init__(message)
        self.nodes = nodes


class RamseyGraph(RamseyLabError):

    """The search space was exhausted: every colouring has a monochromatic triangle."""

    def __init__(self, message, nodes=0):
        super(RamseyGraph, self).__init__(message)
        self.nodes = nodes


class PreconditionViolation(RamseyLabError):
    pass


class ExactScanRefused(RamseyLabError):
    pass


class FirstRoundFailure(RamseyLabError):

    """No first round colouring was produced.

    ``proven`` tells a proven K3-Ramsey collage apart from an exhausted budget.
    """

    def __init__(self, message, proven=False):
        super(FirstRoundFailure, self).__init__(message)
        self.proven = proven


class FamilyTooLarge(RamseyLabError):
    pass


class CountOverflow(RamseyLabError):
    pass


class BracketingError(RamseyLabError):
    """A success curve does not cross 1/2."""


class ReplayMismatch(RamseyLabError):
    pass


class FalsificationError(RamseyLabError):

    """A step guaranteed by a proof failed on a concrete instance.

    The instance is kept JSON-serialisable so that it can be stored and inspected.
    """

    def __init__(self, message, instance=None):
        super(FalsificationError, self).__init__(message)
        self.instance = instance or {}

    def __reduce__(self):
        return type(self), (str(self), self.instance)

    def dump(self, path):
        with open(path, 'w', encoding='utf-8') as f:
            json.dump({'message': str(self), 'instance': self.instance}, f, indent=2, sort_keys=True)
