import random
from dataclasses import dataclass

import pytest

from ecsigncrypt.curve import P192, TINY17, DomainParams, scalar_mul_naive
from ecsigncrypt.pki import Certificate, KeyPair, RevocationList, issue_certificate, keygen

NOW = 1_700_000_000


class StreamRng:
    """Replays queued ``getrandbits`` values, then falls back to a seeded PRNG."""

    def __init__(self, values=(), seed=0):
        self.values = list(values)
        self.fallback = random.Random(seed)

    def getrandbits(self, k):
        if self.values:
            return self.values.pop(0)
        return self.fallback.getrandbits(k)


@dataclass
class World:
    params: DomainParams
    ca: KeyPair
    alice: KeyPair
    bob: KeyPair
    cert_a: Certificate
    cert_b: Certificate
    crl: RevocationList
    now: int = NOW

    @property
    def ca_key(self):
        return self.ca.W


def fixed_keypair(params, w, ident):
    return KeyPair(w=w, W=scalar_mul_naive(w, params.G, params), id=ident)


def make_world(params, seed=1, w_a=None, w_b=None, w_ca=None):
    rng = random.Random(seed)
    ca = fixed_keypair(params, w_ca, b"CA") if w_ca else keygen(params, b"CA", rng)
    alice = fixed_keypair(params, w_a, b"alice") if w_a else keygen(params, b"alice", rng)
    bob = fixed_keypair(params, w_b, b"bob") if w_b else keygen(params, b"bob", rng)
    window = (NOW - 86400, NOW + 86400)
    cert_a = issue_certificate(ca, b"alice", alice.W, *window, params, rng, serial=1)
    cert_b = issue_certificate(ca, b"bob", bob.W, *window, params, rng, serial=2)
    return World(params, ca, alice, bob, cert_a, cert_b, RevocationList(issued_at=NOW))


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture(scope="session")
def tiny_world():
    return make_world(TINY17, w_a=7, w_b=5, w_ca=3)


@pytest.fixture(scope="session")
def p192_world():
    return make_world(P192, seed=2024)
