"""
Hierarchia wyjątków mwalk.

Każdy błąd domenowy dziedziczy po MWalkError; CLI zamienia je na kod wyjścia 1
i zapisuje w raporcie.
"""

from typing import Dict


class MWalkError(Exception):
    """Bazowy błąd domenowy."""

    def __init__(self, message: str = ""):
        super().__init__(message)
        self.message = message

    @property
    def code(self) -> str:
        return type(self).__name__

    def to_dict(self) -> Dict[str, str]:
        return {"type": self.code, "message": self.message}


class InvalidArgument(MWalkError):
    """Naruszony warunek wstępny operacji."""


class InvariantViolation(MWalkError):
    """Wewnętrzny niezmiennik nie zachodzi - błąd implementacji."""


# Rozkłady
class DistributionError(MWalkError):
    pass


class NegativeValue(DistributionError):
    pass


class ProbabilitySumMismatch(DistributionError):
    pass


class MeanNotOne(DistributionError):
    pass


class NotSymmetric(DistributionError):
    pass


class DegenerateDistribution(DistributionError):
    pass


class NoFiniteTruncation(DistributionError):
    pass


# Certyfikaty
class CertificateError(MWalkError):
    pass


class LambdaOutOfRange(CertificateError):
    pass


class NonpositiveMu(CertificateError):
    pass


class ProfileEpsMismatch(CertificateError):
    pass


class EpsTooLarge(CertificateError):
    pass


class KOverflow(CertificateError):
    pass


class TruncationInvalid(CertificateError):
    pass


class InvalidK(CertificateError):
    pass


# Ewaluator
class EvaluatorError(MWalkError):
    pass


class EnumerationTooLarge(EvaluatorError):
    pass


class NotFiniteSupport(EvaluatorError):
    pass


class ZeroCoefficients(EvaluatorError):
    pass


class NTooLarge(EvaluatorError):
    pass


# Produkty Riesza
class RieszError(MWalkError):
    pass


class RatioTooSmall(RieszError):
    pass


class NotIncreasing(RieszError):
    pass


class NonpositiveEntry(RieszError):
    pass


class CoefficientLengthMismatch(RieszError):
    pass


class GridOverflow(RieszError):
    pass


# Wyszukiwanie
class SearchError(MWalkError):
    pass


class OracleUnavailable(SearchError):
    pass


class InfeasibleConstraints(SearchError):
    pass


# Wejście / wyjście
class InputError(MWalkError):
    pass


class InputSchemaError(InputError):
    """Plik wejściowy nie spełnia schematu (z numerem linii lub ścieżką pola)."""


class ReportIoError(InputError):
    pass
