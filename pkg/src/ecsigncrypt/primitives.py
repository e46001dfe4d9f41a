"""Hash functions, symmetric ciphers and the random-scalar helper.

The cipher seam accepts anything with ``name``, ``key_bytes``,
``encrypt(key, data)`` and ``decrypt(key, data)``.  :class:`HashCounterCipher`
is the dependency-free default; :class:`AESCounterCipher` needs the
``cryptography`` package.
"""

from __future__ import annotations

import hashlib
import secrets
import struct
from dataclasses import dataclass
from typing import Protocol

from .errors import UsageError

__all__ = [
    "HashFunction",
    "SHA256",
    "SHA1",
    "SHA512",
    "HASHES",
    "get_hash",
    "SymmetricCipher",
    "HashCounterCipher",
    "AESCounterCipher",
    "get_cipher",
    "random_scalar",
    "default_rng",
]


@dataclass(frozen=True)
class HashFunction:
    name: str

    @property
    def bits(self) -> int:
        return hashlib.new(self.name).digest_size * 8

    def digest(self, data: bytes) -> bytes:
        return hashlib.new(self.name, data).digest()


SHA256 = HashFunction("sha256")
SHA1 = HashFunction("sha1")
SHA512 = HashFunction("sha512")
HASHES = {h.name: h for h in (SHA256, SHA1, SHA512)}


def get_hash(name: str) -> HashFunction:
    try:
        return HASHES[name]
    except KeyError:
        raise UsageError(f"unknown hash {name!r}") from None


class SymmetricCipher(Protocol):
    name: str
    key_bytes: int

    def encrypt(self, key: bytes, data: bytes) -> bytes: ...

    def decrypt(self, key: bytes, data: bytes) -> bytes: ...


class HashCounterCipher:
    """XOR with the keystream H(k || be32(0)) || H(k || be32(1)) || ..."""

    def __init__(self, hash: HashFunction = SHA256, key_bytes: int = 16):
        self.hash = hash
        self.key_bytes = key_bytes
        self.name = f"{hash.name}-ctr"

    def _keystream(self, key: bytes, length: int) -> bytes:
        if len(key) != self.key_bytes:
            raise UsageError(f"{self.name} needs a {self.key_bytes}-byte key")
        blocks = []
        produced = 0
        i = 0
        while produced < length:
            block = self.hash.digest(key + struct.pack(">I", i))
            blocks.append(block)
            produced += len(block)
            i += 1
        return b"".join(blocks)[:length]

    def encrypt(self, key: bytes, data: bytes) -> bytes:
        ks = self._keystream(key, len(data))
        return bytes(a ^ b for a, b in zip(data, ks))

    decrypt = encrypt


class AESCounterCipher:
    """AES in CTR mode with an all-zero nonce.

    A fresh session key is derived for every signcryption, so the fixed
    nonce never repeats under one key.
    """

    def __init__(self, key_bytes: int = 16):
        if key_bytes not in (16, 24, 32):
            raise UsageError("AES key length must be 16, 24 or 32 bytes")
        self.key_bytes = key_bytes
        self.name = f"aes{key_bytes * 8}-ctr"

    def _cipher(self, key: bytes):
        from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes

        if len(key) != self.key_bytes:
            raise UsageError(f"{self.name} needs a {self.key_bytes}-byte key")
        return Cipher(algorithms.AES(key), modes.CTR(bytes(16)))

    def encrypt(self, key: bytes, data: bytes) -> bytes:
        enc = self._cipher(key).encryptor()
        return enc.update(data) + enc.finalize()

    def decrypt(self, key: bytes, data: bytes) -> bytes:
        dec = self._cipher(key).decryptor()
        return dec.update(data) + dec.finalize()


def get_cipher(name: str, hash: HashFunction = SHA256) -> SymmetricCipher:
    if name in ("hashctr", f"{hash.name}-ctr"):
        return HashCounterCipher(hash)
    if name in ("aes", "aes128-ctr"):
        return AESCounterCipher(16)
    if name == "aes256-ctr":
        return AESCounterCipher(32)
    raise UsageError(f"unknown cipher {name!r}")


def default_rng():
    return secrets.SystemRandom()


def random_scalar(n: int, rng=None, max_draws: int = 1000) -> int:
    """Uniform integer in [1, n-1] by rejection sampling on bit_length(n)-bit draws.

    ``rng`` needs only a ``getrandbits`` method.
    """
    if rng is None:
        rng = default_rng()
    bits = n.bit_length()
    for _ in range(max_draws):
        v = rng.getrandbits(bits)
        if 1 <= v < n:
            return v
    raise RuntimeError("random source produced no usable scalar")
