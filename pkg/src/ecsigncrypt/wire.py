"""Canonical binary encodings.

Field elements are fixed-width big-endian, ``ceil(bits(q)/8)`` bytes; scalars
mod n likewise with ``ceil(bits(n)/8)`` bytes.  Byte strings are prefixed
with a 4-byte big-endian length.  Every file format starts with a version
byte, and every decoder rejects trailing or missing bytes, so that
``encode(decode(b)) == b`` for all accepted ``b``.

Layouts (``||`` is concatenation):

    point        00                                   identity
                 04 || x || y                         uncompressed
                 02+parity(y) || x                    compressed
    sct          01 || point(R) || be32(|C|) || C || s
    cert body    01 || lp(params) || be64(serial) || lp(subject) || point(W)
                    || be64(not_before) || be64(not_after)
    cert         body || e || sigma
    crl          01 || be64(issued_at) || be32(count) || be64(serial)*  (ascending)
    params       01 || lp(name) || li(q) || li(a) || li(b) || li(Gx) || li(Gy)
                    || li(n) || li(h)                 li = lp(minimal big-endian)
    private key  01 || 'P' || lp(params) || lp(id) || w
    public key   01 || 'U' || lp(params) || lp(id) || point(W) || e || sigma
"""

from __future__ import annotations

import struct
from typing import Optional

from .curve import INFINITY, DomainParams, Point, on_curve, scalar_mul
from .errors import MalformedInputError

__all__ = [
    "VERSION",
    "lp",
    "int_to_bytes",
    "encode_point",
    "decode_point",
    "encode_sct",
    "decode_sct",
    "encode_cert_body",
    "encode_cert",
    "decode_cert",
    "encode_crl",
    "decode_crl",
    "encode_params",
    "decode_params",
    "encode_private_key",
    "encode_public_key",
    "decode_key",
    "params_name_of",
]

VERSION = 0x01
PRIVATE_MARKER = b"P"
PUBLIC_MARKER = b"U"


def lp(data: bytes) -> bytes:
    return struct.pack(">I", len(data)) + data


def int_to_bytes(x: int, width: int) -> bytes:
    return x.to_bytes(width, "big")


class _Reader:
    def __init__(self, data: bytes, what: str):
        self.data = bytes(data)
        self.pos = 0
        self.what = what

    def take(self, k: int) -> bytes:
        if k < 0 or self.pos + k > len(self.data):
            raise MalformedInputError(f"{self.what}: truncated")
        out = self.data[self.pos:self.pos + k]
        self.pos += k
        return out

    def u8(self) -> int:
        return self.take(1)[0]

    def u32(self) -> int:
        return struct.unpack(">I", self.take(4))[0]

    def u64(self) -> int:
        return struct.unpack(">Q", self.take(8))[0]

    def lp(self) -> bytes:
        return self.take(self.u32())

    def version(self) -> None:
        v = self.u8()
        if v != VERSION:
            raise MalformedInputError(f"{self.what}: unsupported version {v}")

    def end(self) -> None:
        if self.pos != len(self.data):
            raise MalformedInputError(f"{self.what}: {len(self.data) - self.pos} trailing bytes")


# ---------------------------------------------------------------------------
# points


def point_length(params: DomainParams, tag: int) -> int:
    fb = params.field_bytes
    return {0x00: 1, 0x04: 1 + 2 * fb, 0x02: 1 + fb, 0x03: 1 + fb}.get(tag, -1)


def encode_point(P: Point, params: DomainParams, compressed: bool = False) -> bytes:
    if P.is_infinity:
        return b"\x00"
    fb = params.field_bytes
    if compressed:
        return bytes([0x02 + (P.y & 1)]) + int_to_bytes(P.x, fb)
    return b"\x04" + int_to_bytes(P.x, fb) + int_to_bytes(P.y, fb)


def decode_point(data: bytes, params: DomainParams) -> Point:
    if not data:
        raise MalformedInputError("point: empty encoding")
    tag = data[0]
    if len(data) != point_length(params, tag):
        if point_length(params, tag) < 0:
            raise MalformedInputError(f"point: bad tag {tag:#04x}")
        raise MalformedInputError("point: wrong length")
    if tag == 0x00:
        return INFINITY
    fb = params.field_bytes
    x = int.from_bytes(data[1:1 + fb], "big")
    if x >= params.q:
        raise MalformedInputError("point: x not reduced")
    if tag == 0x04:
        y = int.from_bytes(data[1 + fb:], "big")
        if y >= params.q:
            raise MalformedInputError("point: y not reduced")
    else:
        F = params.field
        rhs = (x * x * x + params.a * x + params.b) % params.q
        y = F.sqrt(rhs)
        if y is None:
            raise MalformedInputError("point: x has no matching y")
        if (y & 1) != (tag & 1):
            if y == 0:
                raise MalformedInputError("point: odd parity requested for y = 0")
            y = params.q - y
    P = Point(x, y)
    if not on_curve(P, params):
        raise MalformedInputError("point: not on the curve")
    return P


def _read_point(r: _Reader, params: DomainParams) -> Point:
    if r.pos >= len(r.data):
        raise MalformedInputError(f"{r.what}: truncated")
    length = point_length(params, r.data[r.pos])
    if length < 0:
        raise MalformedInputError(f"{r.what}: bad point tag")
    return decode_point(r.take(length), params)


def _read_scalar(r: _Reader, params: DomainParams, name: str) -> int:
    v = int.from_bytes(r.take(params.scalar_bytes), "big")
    if v >= params.n:
        raise MalformedInputError(f"{r.what}: {name} out of range")
    return v


# ---------------------------------------------------------------------------
# signcrypted text


def encode_sct(sct, params: DomainParams) -> bytes:
    return (
        bytes([VERSION])
        + encode_point(sct.R, params)
        + lp(sct.C)
        + int_to_bytes(sct.s, params.scalar_bytes)
    )


def decode_sct(data: bytes, params: DomainParams):
    r = _Reader(data, "signcrypted text")
    r.version()
    R = _read_point(r, params)
    if R.is_infinity:
        raise MalformedInputError("signcrypted text: R is the identity")
    C = r.lp()
    s = _read_scalar(r, params, "s")
    r.end()
    from .signcryption import SigncryptedText

    return SigncryptedText(R, C, s)


# ---------------------------------------------------------------------------
# certificates and revocation lists


def encode_cert_body(cert, params: DomainParams) -> bytes:
    return b"".join([
        bytes([VERSION]),
        lp(params.name.encode()),
        struct.pack(">Q", cert.serial),
        lp(cert.subject_id),
        encode_point(cert.subject_key, params),
        struct.pack(">QQ", cert.not_before, cert.not_after),
    ])


def encode_cert(cert, params: DomainParams) -> bytes:
    e, sigma = cert.ca_signature
    sb = params.scalar_bytes
    return encode_cert_body(cert, params) + int_to_bytes(e, sb) + int_to_bytes(sigma, sb)


def decode_cert(data: bytes, params: DomainParams):
    r = _Reader(data, "certificate")
    r.version()
    name = r.lp()
    if name != params.name.encode():
        raise MalformedInputError(
            f"certificate: issued for parameters {name!r}, not {params.name!r}"
        )
    serial = r.u64()
    subject = r.lp()
    key = _read_point(r, params)
    not_before, not_after = r.u64(), r.u64()
    e = _read_scalar(r, params, "e")
    sigma = _read_scalar(r, params, "sigma")
    r.end()
    from .pki import Certificate

    return Certificate(serial, subject, key, not_before, not_after, (e, sigma))


def encode_crl(crl) -> bytes:
    serials = sorted(crl.revoked)
    return (
        bytes([VERSION])
        + struct.pack(">QI", crl.issued_at, len(serials))
        + b"".join(struct.pack(">Q", s) for s in serials)
    )


def decode_crl(data: bytes):
    r = _Reader(data, "revocation list")
    r.version()
    issued_at = r.u64()
    count = r.u32()
    serials = [r.u64() for _ in range(count)]
    r.end()
    if any(a >= b for a, b in zip(serials, serials[1:])):
        raise MalformedInputError("revocation list: serials not strictly ascending")
    from .pki import RevocationList

    return RevocationList(set(serials), issued_at)


# ---------------------------------------------------------------------------
# domain parameters


def _li(x: int) -> bytes:
    return lp(x.to_bytes((x.bit_length() + 7) // 8, "big"))


def _read_li(r: _Reader) -> int:
    raw = r.lp()
    if raw[:1] == b"\x00":
        raise MalformedInputError(f"{r.what}: non-minimal integer")
    return int.from_bytes(raw, "big")


def encode_params(params: DomainParams) -> bytes:
    G = params.G
    return b"".join([
        bytes([VERSION]),
        lp(params.name.encode()),
        *(_li(v) for v in (params.q, params.a, params.b, G.x, G.y, params.n, params.h)),
    ])


def decode_params(data: bytes) -> DomainParams:
    """Parse a parameter file.  No semantic validation happens here; run
    :func:`~ecsigncrypt.curve.validate_domain_params` on the result."""
    r = _Reader(data, "parameters")
    r.version()
    try:
        name = r.lp().decode()
    except UnicodeDecodeError:
        raise MalformedInputError("parameters: name is not UTF-8") from None
    q, a, b, gx, gy, n, h = (_read_li(r) for _ in range(7))
    r.end()
    if q < 3 or n < 2:
        raise MalformedInputError("parameters: q or n too small")
    if a >= q or b >= q or gx >= q or gy >= q:
        raise MalformedInputError("parameters: coordinates not reduced mod q")
    return DomainParams(name=name, q=q, a=a, b=b, G=Point(gx, gy), n=n, h=h)


# ---------------------------------------------------------------------------
# keys


def encode_private_key(keypair, params: DomainParams) -> bytes:
    return b"".join([
        bytes([VERSION]),
        PRIVATE_MARKER,
        lp(params.name.encode()),
        lp(keypair.id),
        int_to_bytes(keypair.w, params.scalar_bytes),
    ])


def encode_public_key(pub, params: DomainParams) -> bytes:
    e, sigma = pub.proof
    sb = params.scalar_bytes
    return b"".join([
        bytes([VERSION]),
        PUBLIC_MARKER,
        lp(params.name.encode()),
        lp(pub.id),
        encode_point(pub.W, params),
        int_to_bytes(e, sb),
        int_to_bytes(sigma, sb),
    ])


def decode_key(data: bytes, params: DomainParams):
    """Decode a key file into a :class:`KeyPair` (private) or :class:`PublicKey`."""
    from .pki import KeyPair, PublicKey

    r = _Reader(data, "key")
    r.version()
    marker = r.take(1)
    name = r.lp()
    if name != params.name.encode():
        raise MalformedInputError(f"key: made for parameters {name!r}, not {params.name!r}")
    ident = r.lp()
    if marker == PRIVATE_MARKER:
        w = _read_scalar(r, params, "private scalar")
        r.end()
        if w == 0:
            raise MalformedInputError("key: private scalar is zero")
        return KeyPair(w=w, W=scalar_mul(w, params.G, params), id=ident)
    if marker == PUBLIC_MARKER:
        W = _read_point(r, params)
        e = _read_scalar(r, params, "e")
        sigma = _read_scalar(r, params, "sigma")
        r.end()
        return PublicKey(ident, W, (e, sigma))
    raise MalformedInputError(f"key: unknown marker {marker!r}")


def params_name_of(data: bytes) -> Optional[str]:
    """Parameter-set name embedded in a certificate or key file, if any."""
    try:
        r = _Reader(data, "file")
        r.version()
        if data[1:2] in (PRIVATE_MARKER, PUBLIC_MARKER):
            r.take(1)
        return r.lp().decode()
    except (MalformedInputError, UnicodeDecodeError):
        return None

