"""Elliptic-curve signcryption with direct public verification.

Sender A with key pair (w_A, W_A) signcrypts M for recipient B:

    R = r*G                          r random in [1, n-1]
    K = (r + xt(R) * w_A) * W_B      xt = MQV-style truncation of x_R
    k = H(x_K || ID_A || y_K || ID_B)
    C = E_k(M)
    t = H(C || x_R || ID_A || y_R || ID_B) mod n
    s = t*w_A - r mod n

B recovers the same K as w_B * (R + xt(R) * W_A).  Anybody holding A's
certificate can check  s*G + R == t*W_A.

Certificates are always checked with the PKI's own hash; ``hash`` selects
only the hash used for k and t.  Hash inputs are built with fixed-width field encodings and length-prefixed
identifiers so that the concatenations are injective.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import wire
from .curve import (
    DomainParams,
    Point,
    on_curve,
    point_add,
    scalar_mul,
)
from .errors import MalformedInputError, SigncryptionError, VerificationError
from .pki import Certificate, KeyPair, RevocationList, require_valid_certificate, certificate_problem
from .primitives import (
    SHA256,
    HashCounterCipher,
    HashFunction,
    SymmetricCipher,
    random_scalar,
)

__all__ = [
    "SigncryptedText",
    "xtilde",
    "kdf_input",
    "derive_session_key",
    "signature_input",
    "signature_scalar",
    "signcrypt",
    "unsigncrypt",
    "public_verify",
    "verification_failure",
    "MAX_ATTEMPTS",
]

MAX_ATTEMPTS = 64


@dataclass(frozen=True)
class SigncryptedText:
    R: Point
    C: bytes
    s: int


def _default_cipher(hash: HashFunction) -> SymmetricCipher:
    return HashCounterCipher(hash)


def xtilde(x_R: int, params: DomainParams) -> int:
    """2^h + (x_R mod 2^h) with h = ceil(f/2), f the bit length of n."""
    half = (params.f + 1) // 2
    return (1 << half) + (int(x_R) & ((1 << half) - 1))


def kdf_input(K: Point, id_a: bytes, id_b: bytes, params: DomainParams) -> bytes:
    fb = params.field_bytes
    return b"".join([
        wire.int_to_bytes(K.x, fb), wire.lp(id_a), wire.int_to_bytes(K.y, fb), wire.lp(id_b),
    ])


def derive_session_key(
    K: Point,
    id_a: bytes,
    id_b: bytes,
    params: DomainParams,
    hash: HashFunction = SHA256,
    key_bytes: int = 16,
) -> bytes:
    """k = H(x_K || ID_A || y_K || ID_B), truncated to ``key_bytes``.

    Short hashes are stretched with H(input || be32(i)) for i = 1, 2, ...
    """
    if K.is_infinity:
        raise MalformedInputError("shared point is the identity")
    data = kdf_input(K, id_a, id_b, params)
    out = hash.digest(data)
    i = 1
    while len(out) < key_bytes:
        out += hash.digest(data + i.to_bytes(4, "big"))
        i += 1
    return out[:key_bytes]


def signature_input(C: bytes, R: Point, id_a: bytes, id_b: bytes, params: DomainParams) -> bytes:
    fb = params.field_bytes
    return b"".join([
        C, wire.int_to_bytes(R.x, fb), wire.lp(id_a), wire.int_to_bytes(R.y, fb), wire.lp(id_b),
    ])


def signature_scalar(
    C: bytes, R: Point, id_a: bytes, id_b: bytes, params: DomainParams, hash: HashFunction = SHA256
) -> int:
    """t = H(C || x_R || ID_A || y_R || ID_B), read big-endian, reduced mod n."""
    digest = hash.digest(signature_input(C, R, id_a, id_b, params))
    return int.from_bytes(digest, "big") % params.n


def signcrypt(
    params: DomainParams,
    sender: KeyPair,
    cert_b: Certificate,
    ca_key: Point,
    crl: Optional[RevocationList],
    now: int,
    message: bytes,
    hash: HashFunction = SHA256,
    cipher: Optional[SymmetricCipher] = None,
    rng=None,
) -> SigncryptedText:
    """Signcrypt ``message`` from ``sender`` to the subject of ``cert_b``.

    Raises :class:`CertificateError` if ``cert_b`` fails validation.
    """
    W_B = require_valid_certificate(cert_b, ca_key, crl, now, params)
    if cipher is None:
        cipher = _default_cipher(hash)
    n = params.n
    id_a, id_b = sender.id, cert_b.subject_id
    for _ in range(MAX_ATTEMPTS):
        r = random_scalar(n, rng)
        R = scalar_mul(r, params.G, params)
        K = scalar_mul((r + xtilde(R.x, params) * sender.w) % n, W_B, params)
        if K.is_infinity:
            continue
        k = derive_session_key(K, id_a, id_b, params, hash, cipher.key_bytes)
        C = cipher.encrypt(k, bytes(message))
        t = signature_scalar(C, R, id_a, id_b, params, hash)
        return SigncryptedText(R, C, (t * sender.w - r) % n)
    raise SigncryptionError(f"shared point was the identity {MAX_ATTEMPTS} times")


def _check_shape(sct: SigncryptedText, params: DomainParams) -> Optional[str]:
    R = sct.R
    if R.is_infinity:
        return "R is the identity"
    if not on_curve(R, params):
        return "R is not on the curve"
    if params.h != 1 and not scalar_mul(params.n, R, params).is_infinity:
        return "R is outside the order-n subgroup"
    if not 0 <= sct.s < params.n:
        return "s out of range"
    return None


def _equation_holds(
    sct: SigncryptedText, t: int, W_A: Point, params: DomainParams
) -> bool:
    lhs = point_add(scalar_mul(sct.s, params.G, params), sct.R, params)
    return lhs == scalar_mul(t, W_A, params)


def unsigncrypt(
    params: DomainParams,
    receiver: KeyPair,
    cert_a: Certificate,
    ca_key: Point,
    crl: Optional[RevocationList],
    now: int,
    sct: SigncryptedText,
    hash: HashFunction = SHA256,
    cipher: Optional[SymmetricCipher] = None,
) -> bytes:
    """Recover the plaintext, returning it only if s*G + R == t*W_A.

    Raises :class:`CertificateError`, :class:`MalformedInputError` or
    :class:`VerificationError`.
    """
    W_A = require_valid_certificate(cert_a, ca_key, crl, now, params)
    problem = _check_shape(sct, params)
    if problem:
        raise MalformedInputError(problem)
    if cipher is None:
        cipher = _default_cipher(hash)
    id_a, id_b = cert_a.subject_id, receiver.id
    S = point_add(sct.R, scalar_mul(xtilde(sct.R.x, params), W_A, params), params)
    K = scalar_mul(receiver.w, S, params)
    if K.is_infinity:
        raise MalformedInputError("recovered shared point is the identity")
    k = derive_session_key(K, id_a, id_b, params, hash, cipher.key_bytes)
    M = cipher.decrypt(k, sct.C)
    t = signature_scalar(sct.C, sct.R, id_a, id_b, params, hash)
    if not _equation_holds(sct, t, W_A, params):
        raise VerificationError("s*G + R != t*W_A; message rejected")
    return M


def verification_failure(
    params: DomainParams,
    cert_a: Certificate,
    ca_key: Point,
    crl: Optional[RevocationList],
    now: int,
    sct: SigncryptedText,
    id_b: bytes,
    hash: HashFunction = SHA256,
) -> Optional[str]:
    """Why the triple fails public verification, or None if it passes."""
    problem = certificate_problem(cert_a, ca_key, crl, now, params)
    if problem:
        return f"certificate {problem}"
    problem = _check_shape(sct, params)
    if problem:
        return problem
    t = signature_scalar(sct.C, sct.R, cert_a.subject_id, id_b, params, hash)
    if not _equation_holds(sct, t, cert_a.subject_key, params):
        return "s*G + R != t*W_A"
    return None


def public_verify(
    params: DomainParams,
    cert_a: Certificate,
    ca_key: Point,
    crl: Optional[RevocationList],
    now: int,
    sct: SigncryptedText,
    id_b: bytes,
    hash: HashFunction = SHA256,
) -> bool:
    """Check a signcrypted text from public data alone."""
    return verification_failure(params, cert_a, ca_key, crl, now, sct, id_b, hash) is None
