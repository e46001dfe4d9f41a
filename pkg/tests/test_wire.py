import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ecsigncrypt import wire
from ecsigncrypt.curve import INFINITY, P192, TINY17, DomainParams, Point, scalar_mul_naive, validate_domain_params
from ecsigncrypt.errors import MalformedInputError
from ecsigncrypt.pki import RevocationList, prove_possession, verify_certificate
from ecsigncrypt.signcryption import SigncryptedText, signcrypt

T = TINY17


def test_point_examples():
    assert wire.encode_point(T.G, T) == bytes.fromhex("040501")
    assert wire.encode_point(INFINITY, T) == b"\x00"
    assert wire.decode_point(b"\x00", T) == INFINITY
    with pytest.raises(MalformedInputError):
        wire.decode_point(bytes.fromhex("040502"), T)


@pytest.mark.parametrize("bad", [b"", b"\x05\x05\x01", b"\x04\x05", b"\x04\x05\x01\x00", b"\x04\x11\x01",
                                 b"\x03\x05\x00"])
def test_point_decode_rejects(bad):
    with pytest.raises(MalformedInputError):
        wire.decode_point(bad, T)


def test_compressed_points_round_trip_all_tiny():
    for k in range(1, 19):
        P = scalar_mul_naive(k, T.G, T)
        for compressed in (False, True):
            enc = wire.encode_point(P, T, compressed)
            assert wire.decode_point(enc, T) == P
            assert wire.encode_point(wire.decode_point(enc, T), T, compressed) == enc


def test_compressed_point_p192():
    rnd = random.Random(1)
    for _ in range(10):
        P = scalar_mul_naive(rnd.randrange(1, P192.n), P192.G, P192)
        enc = wire.encode_point(P, P192, compressed=True)
        assert len(enc) == 25
        assert wire.decode_point(enc, P192) == P


def test_sct_round_trip_and_rules(tiny_world):
    w = tiny_world
    sct = signcrypt(w.params, w.alice, w.cert_b, w.ca_key, w.crl, w.now, b"hello",
                    rng=random.Random(1))
    data = wire.encode_sct(sct, T)
    assert wire.decode_sct(data, T) == sct
    assert wire.encode_sct(wire.decode_sct(data, T), T) == data

    bad_s = data[:-1] + bytes([T.n])
    with pytest.raises(MalformedInputError, match="out of range"):
        wire.decode_sct(bad_s, T)
    with pytest.raises(MalformedInputError, match="truncated"):
        wire.decode_sct(data[:-3], T)
    with pytest.raises(MalformedInputError, match="version"):
        wire.decode_sct(b"\x02" + data[1:], T)
    with pytest.raises(MalformedInputError, match="identity"):
        wire.decode_sct(b"\x01\x00" + data[4:], T)
    with pytest.raises(MalformedInputError, match="trailing"):
        wire.decode_sct(data + b"\x00", T)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 18), st.binary(max_size=64), st.integers(0, 18))
def test_sct_round_trip_property(k, C, s):
    sct = SigncryptedText(scalar_mul_naive(k, T.G, T), C, s)
    data = wire.encode_sct(sct, T)
    assert wire.decode_sct(data, T) == sct


def test_cert_round_trip_and_body_mutation(tiny_world):
    w = tiny_world
    data = wire.encode_cert(w.cert_a, T)
    cert = wire.decode_cert(data, T)
    assert cert == w.cert_a
    assert wire.encode_cert(cert, T) == data
    assert verify_certificate(cert, w.ca_key, w.crl, w.now, T)
    # flip a bit in the subject id inside the encoded body
    body_len = len(wire.encode_cert_body(cert, T))
    idx = data.index(b"alice")
    mutated = bytearray(data)
    mutated[idx] ^= 0x01
    assert idx < body_len
    assert not verify_certificate(wire.decode_cert(bytes(mutated), T), w.ca_key, w.crl, w.now, T)


def test_cert_for_other_params_rejected(tiny_world):
    data = wire.encode_cert(tiny_world.cert_a, T)
    other = DomainParams("other17", T.q, T.a, T.b, T.G, T.n)
    with pytest.raises(MalformedInputError):
        wire.decode_cert(data, other)
    assert wire.params_name_of(data) == "tiny17"


def test_crl_round_trip():
    crl = RevocationList({5, 1, 99}, issued_at=42)
    data = wire.encode_crl(crl)
    back = wire.decode_crl(data)
    assert back.revoked == {1, 5, 99} and back.issued_at == 42
    assert wire.encode_crl(back) == data
    # non-canonical ordering is refused
    swapped = data[:13] + data[21:29] + data[13:21] + data[29:]
    with pytest.raises(MalformedInputError):
        wire.decode_crl(swapped)


@pytest.mark.parametrize("params", [TINY17, P192], ids=lambda p: p.name)
def test_params_round_trip(params):
    data = wire.encode_params(params)
    assert wire.decode_params(data) == params
    assert wire.encode_params(wire.decode_params(data)) == data


def test_composite_q_decodes_then_fails_validation():
    bogus = DomainParams("bogus", q=21, a=2, b=2, G=Point(5, 1), n=19)
    decoded = wire.decode_params(wire.encode_params(bogus))
    assert decoded == bogus
    assert not validate_domain_params(decoded, strict=False).ok


def test_params_non_minimal_integer_rejected():
    data = wire.encode_params(TINY17)
    # q is encoded as 00000001 11; replace with the padded form 00000002 00 11
    name_end = 1 + 4 + len(b"tiny17")
    padded = data[:name_end] + b"\x00\x00\x00\x02\x00\x11" + data[name_end + 5:]
    with pytest.raises(MalformedInputError):
        wire.decode_params(padded)


def test_keys_round_trip(tiny_world):
    w = tiny_world
    priv = wire.encode_private_key(w.alice, T)
    assert priv[1:2] == b"P"
    assert wire.decode_key(priv, T) == w.alice
    pub = prove_possession(w.alice, T, random.Random(3))
    data = wire.encode_public_key(pub, T)
    assert data[1:2] == b"U"
    assert wire.decode_key(data, T) == pub
    assert wire.params_name_of(data) == "tiny17"
    assert wire.encode_public_key(wire.decode_key(data, T), T) == data
    with pytest.raises(MalformedInputError):
        wire.decode_key(data[:1] + b"X" + data[2:], T)
