from .check import Failure, Verdict, check_certificate
from .model import Certificate, CertificateError, Query

__all__ = ["Certificate", "CertificateError", "Failure", "Query", "Verdict", "check_certificate"]
