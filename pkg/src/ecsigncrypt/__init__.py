"""Elliptic-curve signcryption with direct public verifiability."""

from .curve import P192, TINY17, DomainParams, Point, INFINITY, get_params
from .errors import (
    CertificateError,
    MalformedInputError,
    SigncryptionError,
    UsageError,
    VerificationError,
)
from .pki import Certificate, KeyPair, RevocationList, issue_certificate, keygen, verify_certificate
from .signcryption import SigncryptedText, public_verify, signcrypt, unsigncrypt

__version__ = "0.1.0"

__all__ = [
    "P192",
    "TINY17",
    "DomainParams",
    "Point",
    "INFINITY",
    "get_params",
    "CertificateError",
    "MalformedInputError",
    "SigncryptionError",
    "UsageError",
    "VerificationError",
    "Certificate",
    "KeyPair",
    "RevocationList",
    "issue_certificate",
    "keygen",
    "verify_certificate",
    "SigncryptedText",
    "public_verify",
    "signcrypt",
    "unsigncrypt",
]
