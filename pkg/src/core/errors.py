"""
Errors Module for ECFCensus
Typed failures raised by the arithmetic, word and census layers
"""


class ECFCensusError(Exception):
    """Base error carrying a process exit status and a readable detail"""

    status_code = 2

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail

    def __str__(self) -> str:
        return f"{type(self).__name__}: {self.detail}"


# Quadratic irrationals
class DiscriminantNotPositive(ECFCensusError):
    pass


class DiscriminantSquare(ECFCensusError):
    pass


class ZeroLeadingCoefficient(ECFCensusError):
    pass


class NonUnimodular(ECFCensusError):
    pass


class OutOfDomain(ECFCensusError):
    pass


# Expansions and lengths
class NotReduced(ECFCensusError):
    pass


class NotEReduced(ECFCensusError):
    pass


class NonHyperbolic(ECFCensusError):
    pass


class DegenerateWord(ECFCensusError):
    pass


# Word/matrix correspondence
class NotInS(ECFCensusError):
    pass


class NotInSPlus(ECFCensusError):
    pass


class NotPlusWord(ECFCensusError):
    pass


# Census and arithmetic checks
class InvalidQuery(ECFCensusError):
    pass


class BadDiscriminant(ECFCensusError):
    pass


class NotCoprime(ECFCensusError):
    pass


class InvalidRegion(ECFCensusError):
    pass


# Units and stabilizers
class NotStabilizer(ECFCensusError):
    pass


class LambdaNotExpanding(ECFCensusError):
    pass


class WrongDiscriminantClass(ECFCensusError):
    pass


class UnitNotApplicable(ECFCensusError):
    pass


class PellSearchExhausted(ECFCensusError):
    pass
