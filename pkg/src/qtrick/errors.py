"""Exception hierarchy.

Input problems (bad matrices, bad files, inconsistent actions) derive from
``InputError``; ``InternalInconsistency`` is reserved for a failed theorem
check after every hypothesis has passed, which points at a bug rather than
at the caller.
"""


class QtrickError(Exception):
    """Base class for every error raised by the package."""


class InputError(QtrickError, ValueError):
    pass


class Singular(InputError):
    pass


class RankDeficient(InputError):
    pass


class NotAlternating(InputError):
    pass


class Degenerate(InputError):
    pass


class OddRank(InputError):
    pass


class NotInKernel(InputError):
    pass


class NotASubgroupOfKernel(InputError):
    pass


class NotIsotropic(InputError):
    pass


class InvolutionMismatch(InputError):
    pass


class NonIntegralRosati(InputError):
    pass


class DependentGenerators(InputError):
    pass


class UnknownGenerator(InputError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class DegreeMismatch(InputError):
    pass


class NotIntegral(QtrickError):
    pass


class NotUnimodular(QtrickError):
    pass


class HypothesisFailed(QtrickError):
    """A hypothesis of the transport proposition does not hold.

    ``name`` is one of ``"lambdaMu"``, ``"lambdaJ"``, ``"Desc"``.
    """

    def __init__(self, name, detail=""):
        super().__init__(f"{name}: {detail}" if detail else name)
        self.name = name
        self.detail = detail


class InternalInconsistency(QtrickError):
    pass


class MalformedJson(InputError):
    pass


class BadMatrixShape(InputError):
    pass


class NonIntegerEntry(InputError):
    pass


class BadType(InputError):
    pass


class RingIncompatible(InputError):
    pass
