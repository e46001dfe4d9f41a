"""Key pairs, a single-level certificate authority and certificate validation.

CA signatures (and the possession proofs subjects attach to their public
keys) are Schnorr signatures over the same curve:

    U = u*G,  e = H(enc(U) || message) mod n,  sigma = u + e*w mod n

verified by recomputing U = sigma*G - e*W.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Set, Tuple

from . import wire
from .curve import (
    DomainParams,
    Point,
    point_add,
    point_neg,
    scalar_mul,
    validate_public_key,
)
from .errors import CertificateError, UsageError
from .primitives import SHA256, HashFunction, random_scalar

__all__ = [
    "KeyPair",
    "PublicKey",
    "Certificate",
    "RevocationList",
    "keygen",
    "schnorr_sign",
    "schnorr_verify",
    "prove_possession",
    "verify_possession",
    "issue_certificate",
    "certificate_problem",
    "verify_certificate",
    "require_valid_certificate",
]

Signature = Tuple[int, int]


@dataclass(frozen=True)
class KeyPair:
    w: int = field(repr=False)
    W: Point
    id: bytes

    def public(self) -> Point:
        return self.W


@dataclass(frozen=True)
class PublicKey:
    """A public key as distributed to a CA: identity, point and possession proof."""

    id: bytes
    W: Point
    proof: Signature


@dataclass(frozen=True)
class Certificate:
    serial: int
    subject_id: bytes
    subject_key: Point
    not_before: int
    not_after: int
    ca_signature: Signature = (0, 0)


@dataclass
class RevocationList:
    revoked: Set[int] = field(default_factory=set)
    issued_at: int = 0

    def __contains__(self, serial: int) -> bool:
        return serial in self.revoked

    def revoke(self, serial: int, now: int) -> None:
        self.revoked = self.revoked | {serial}
        self.issued_at = now

    def snapshot(self) -> frozenset:
        return frozenset(self.revoked)


def keygen(params: DomainParams, id: bytes, rng=None) -> KeyPair:
    w = random_scalar(params.n, rng)
    return KeyPair(w=w, W=scalar_mul(w, params.G, params), id=bytes(id))


def _challenge(params: DomainParams, hash: HashFunction, U: Point, message: bytes) -> int:
    digest = hash.digest(wire.encode_point(U, params) + message)
    return int.from_bytes(digest, "big") % params.n


def schnorr_sign(
    message: bytes, w: int, params: DomainParams, rng=None, hash: HashFunction = SHA256
) -> Signature:
    u = random_scalar(params.n, rng)
    U = scalar_mul(u, params.G, params)
    e = _challenge(params, hash, U, message)
    return e, (u + e * w) % params.n


def schnorr_verify(
    message: bytes,
    signature: Signature,
    W: Point,
    params: DomainParams,
    hash: HashFunction = SHA256,
) -> bool:
    e, sigma = signature
    n = params.n
    if not (0 <= e < n and 0 <= sigma < n):
        return False
    U = point_add(
        scalar_mul(sigma, params.G, params),
        point_neg(scalar_mul(e, W, params), params),
        params,
    )
    return _challenge(params, hash, U, message) == e


def _possession_message(id: bytes, W: Point, params: DomainParams) -> bytes:
    return b"possession" + wire.lp(id) + wire.encode_point(W, params)


def prove_possession(
    keypair: KeyPair, params: DomainParams, rng=None, hash: HashFunction = SHA256
) -> PublicKey:
    msg = _possession_message(keypair.id, keypair.W, params)
    return PublicKey(keypair.id, keypair.W, schnorr_sign(msg, keypair.w, params, rng, hash))


def verify_possession(
    pub: PublicKey, params: DomainParams, hash: HashFunction = SHA256
) -> bool:
    msg = _possession_message(pub.id, pub.W, params)
    return schnorr_verify(msg, pub.proof, pub.W, params, hash)


def issue_certificate(
    ca: KeyPair,
    subject_id: bytes,
    subject_key: Point,
    not_before: int,
    not_after: int,
    params: DomainParams,
    rng=None,
    serial: Optional[int] = None,
    possession: Optional[PublicKey] = None,
    hash: HashFunction = SHA256,
) -> Certificate:
    """Sign a certificate binding ``subject_id`` to ``subject_key``.

    When ``possession`` is given its proof must verify and must be for the
    same identity and key.
    """
    if not validate_public_key(subject_key, params):
        raise UsageError("refusing to certify an invalid public key")
    if not_after < not_before or not_before < 0:
        raise UsageError("bad validity window")
    if possession is not None:
        if possession.W != subject_key or possession.id != bytes(subject_id):
            raise UsageError("possession proof is for a different key or identity")
        if not verify_possession(possession, params, hash):
            raise UsageError("possession proof does not verify")
    if serial is None:
        serial = random_scalar(2**63, rng)
    cert = Certificate(serial, bytes(subject_id), subject_key, not_before, not_after)
    body = wire.encode_cert_body(cert, params)
    return replace(cert, ca_signature=schnorr_sign(body, ca.w, params, rng, hash))


def certificate_problem(
    cert: Certificate,
    ca_key: Point,
    crl: Optional[RevocationList],
    now: int,
    params: DomainParams,
    hash: HashFunction = SHA256,
) -> Optional[str]:
    """Name of the first failed check (signature, validity window, revocation),
    or None if the certificate is acceptable."""
    body = wire.encode_cert_body(cert, params)
    if not schnorr_verify(body, cert.ca_signature, ca_key, params, hash):
        return "signature"
    if now < cert.not_before:
        return "not-yet-valid"
    if now > cert.not_after:
        return "expired"
    if crl is not None and cert.serial in crl:
        return "revoked"
    return None


def verify_certificate(
    cert: Certificate,
    ca_key: Point,
    crl: Optional[RevocationList],
    now: int,
    params: DomainParams,
    hash: HashFunction = SHA256,
) -> bool:
    return certificate_problem(cert, ca_key, crl, now, params, hash) is None


def require_valid_certificate(
    cert: Certificate,
    ca_key: Point,
    crl: Optional[RevocationList],
    now: int,
    params: DomainParams,
    hash: HashFunction = SHA256,
) -> Point:
    """Raise :class:`CertificateError` unless the certificate and its key are
    valid; return the certified key."""
    problem = certificate_problem(cert, ca_key, crl, now, params, hash)
    if problem is not None:
        raise CertificateError(problem, f"serial {cert.serial}")
    if not validate_public_key(cert.subject_key, params):
        raise CertificateError("subject-key", "certified key is not in the main group")
    return cert.subject_key


def revocation_list(serials: Iterable[int] = (), issued_at: int = 0) -> RevocationList:
    return RevocationList(set(serials), issued_at)
