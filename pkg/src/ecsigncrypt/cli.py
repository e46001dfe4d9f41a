"""Command-line interface.

Exit status: 0 success, 1 verification rejection, 2 malformed input,
3 usage error, 4 certificate failure.
"""

from __future__ import annotations

import argparse
import binascii
import os
import random
import sys
import time
from pathlib import Path

from . import costmodel, wire
from .curve import BUILTIN_PARAMS, DomainParams, get_params, validate_domain_params
from .errors import (
    CertificateError,
    MalformedInputError,
    SigncryptionError,
    UsageError,
    VerificationError,
)
from .pki import (
    KeyPair,
    certificate_problem,
    issue_certificate,
    keygen,
    prove_possession,
    revocation_list,
)
from .primitives import default_rng, get_cipher, get_hash
from .signcryption import public_verify, signcrypt, unsigncrypt, verification_failure

OK, REJECTED, MALFORMED, USAGE, CERTIFICATE = 0, 1, 2, 3, 4

_HEX_CHARS = frozenset(b"0123456789abcdefABCDEF \t\r\n")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


class _Out:
    def __init__(self, porcelain: bool):
        self.porcelain = porcelain

    def kv(self, **items):
        if self.porcelain:
            for k, v in items.items():
                print(f"{k}={v}")

    def say(self, text: str):
        if not self.porcelain:
            print(text)


# ---------------------------------------------------------------------------
# file helpers


def read_bytes(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def read_armored(path: str) -> bytes:
    """Read a binary artifact, undoing hex armor if present."""
    data = read_bytes(path)
    if data and all(b in _HEX_CHARS for b in data):
        try:
            return binascii.unhexlify(b"".join(data.split()))
        except binascii.Error:
            raise MalformedInputError(f"{path}: bad hex armor") from None
    return data


def write_bytes(path: str, data: bytes, armor: bool = False, private: bool = False):
    if armor:
        data = binascii.hexlify(data) + b"\n"
    if path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
        return
    try:
        if private:
            fd = os.open(path, os.O_WRONLY | os.O_CREAT | os.O_TRUNC, 0o600)
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
        else:
            Path(path).write_bytes(data)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def resolve_params(spec: str | None) -> DomainParams:
    if spec is None:
        raise UsageError("--params is required")
    if spec in BUILTIN_PARAMS:
        return BUILTIN_PARAMS[spec]
    if Path(spec).is_file():
        return wire.decode_params(read_armored(spec))
    return get_params(spec)


def params_for(data: bytes, override: str | None) -> DomainParams:
    if override:
        return resolve_params(override)
    name = wire.params_name_of(data)
    if name is None:
        raise MalformedInputError("cannot find a parameter-set name in the file")
    if name not in BUILTIN_PARAMS:
        raise UsageError(f"file uses custom parameters {name!r}; pass --params <file.ecp>")
    return BUILTIN_PARAMS[name]


def load_key(path: str, override: str | None):
    data = read_armored(path)
    params = params_for(data, override)
    return wire.decode_key(data, params), params


def load_private(path: str, override: str | None):
    key, params = load_key(path, override)
    if not isinstance(key, KeyPair):
        raise UsageError(f"{path} holds a public key; a private key is needed")
    return key, params


def load_public_point(path: str, params: DomainParams):
    key = wire.decode_key(read_armored(path), params)
    return key.W


def load_cert(path: str, params: DomainParams):
    return wire.decode_cert(read_armored(path), params)


def load_crl(path: str):
    return wire.decode_crl(read_armored(path))


def make_rng(args):
    if args.insecure_seed is not None:
        print("warning: --insecure-seed makes all randomness predictable; tests only",
              file=sys.stderr)
        return random.Random(args.insecure_seed)
    return default_rng()


def now_of(args) -> int:
    return int(time.time()) if args.now is None else args.now


# ---------------------------------------------------------------------------
# commands


def cmd_params(args, out: _Out) -> int:
    params = resolve_params(args.target)
    if args.action == "show":
        out.kv(name=params.name, q=hex(params.q), a=hex(params.a), b=hex(params.b),
               gx=hex(params.G.x), gy=hex(params.G.y), n=hex(params.n), h=params.h, f=params.f)
        out.say(
            f"name {params.name}\nq    {params.q:#x}\na    {params.a:#x}\nb    {params.b:#x}\n"
            f"G    ({params.G.x:#x}, {params.G.y:#x})\nn    {params.n:#x}\nh    {params.h}\n"
            f"f    {params.f}"
        )
        return OK
    if args.action == "export":
        if not args.out:
            raise UsageError("params export needs --out")
        write_bytes(args.out, wire.encode_params(params), args.armor)
        out.kv(written=args.out)
        return OK
    report = validate_domain_params(params, strict=args.strict, embedding_bound=args.embedding_bound)
    for i, (name, passed, detail) in enumerate(report.checks, 1):
        out.kv(**{f"check{i}": f"{name}:{'pass' if passed else 'fail'}"})
    out.kv(overall="pass" if report.ok else "fail")
    out.say(str(report))
    return OK if report.ok else REJECTED


def cmd_keygen(args, out: _Out) -> int:
    params = resolve_params(args.params)
    rng = make_rng(args)
    kp = keygen(params, args.id.encode(), rng)
    pub = prove_possession(kp, params, rng)
    pub_out = args.pub_out or str(Path(args.out).with_suffix(".pub"))
    write_bytes(args.out, wire.encode_private_key(kp, params), args.armor, private=True)
    write_bytes(pub_out, wire.encode_public_key(pub, params), args.armor)
    out.kv(private=args.out, public=pub_out, id=args.id)
    out.say(f"wrote private key {args.out} and public key {pub_out}")
    return OK


def _ca_paths(d: str):
    p = Path(d)
    return p / "ca.eck", p / "ca.pub", p / "ca.crl", p / "serial"


def cmd_ca(args, out: _Out) -> int:
    if args.action == "init":
        params = resolve_params(args.params)
        rng = make_rng(args)
        Path(args.dir).mkdir(parents=True, exist_ok=True)
        key_p, pub_p, crl_p, serial_p = _ca_paths(args.dir)
        if key_p.exists():
            raise UsageError(f"{key_p} already exists")
        kp = keygen(params, args.id.encode(), rng)
        write_bytes(str(key_p), wire.encode_private_key(kp, params), private=True)
        write_bytes(str(pub_p), wire.encode_public_key(prove_possession(kp, params, rng), params))
        write_bytes(str(crl_p), wire.encode_crl(revocation_list(issued_at=now_of(args))))
        serial_p.write_text("1\n")
        out.kv(ca_key=key_p, ca_pub=pub_p, crl=crl_p)
        out.say(f"initialised CA in {args.dir}")
        return OK

    if args.action == "issue":
        key_p, _, _, serial_p = _ca_paths(args.dir)
        ca, params = load_private(str(key_p), args.params)
        if not args.subject_key or not args.out:
            raise UsageError("ca issue needs --subject-key and --out")
        subject = wire.decode_key(read_armored(args.subject_key), params)
        if isinstance(subject, KeyPair):
            raise UsageError("give the CA the subject's public key file, not the private key")
        now = now_of(args)
        not_before = now if args.not_before is None else args.not_before
        not_after = args.not_after if args.not_after is not None else not_before + args.days * 86400
        serial = int(serial_p.read_text().strip())
        cert = issue_certificate(ca, subject.id, subject.W, not_before, not_after, params,
                                 make_rng(args), serial=serial, possession=subject)
        serial_p.write_text(f"{serial + 1}\n")
        write_bytes(args.out, wire.encode_cert(cert, params), args.armor)
        out.kv(serial=serial, subject=subject.id.decode(errors="replace"),
               not_before=not_before, not_after=not_after, certificate=args.out)
        out.say(f"issued certificate {serial} for {subject.id!r} -> {args.out}")
        return OK

    if args.action == "revoke":
        key_p, _, crl_p, _ = _ca_paths(args.dir)
        if args.serial is None:
            if not args.cert:
                raise UsageError("ca revoke needs --cert or --serial")
            _, params = load_key(str(key_p), args.params)
            serial = load_cert(args.cert, params).serial
        else:
            serial = args.serial
        crl = load_crl(str(crl_p))
        crl.revoke(serial, now_of(args))
        write_bytes(str(crl_p), wire.encode_crl(crl))
        out.kv(revoked=serial, crl=crl_p)
        out.say(f"revoked serial {serial}")
        return OK

    # verify
    if not (args.cert and args.ca and args.crl):
        raise UsageError("ca verify needs --cert, --ca and --crl")
    data = read_armored(args.cert)
    params = params_for(data, args.params)
    cert = wire.decode_cert(data, params)
    ca_key = load_public_point(args.ca, params)
    problem = certificate_problem(cert, ca_key, load_crl(args.crl), now_of(args), params)
    if problem:
        raise CertificateError(problem, f"serial {cert.serial}")
    out.kv(certificate="valid", serial=cert.serial)
    out.say(f"certificate {cert.serial} is valid")
    return OK


def _scheme_options(args):
    h = get_hash(args.hash)
    return h, get_cipher(args.cipher, h)


def cmd_signcrypt(args, out: _Out) -> int:
    sender, params = load_private(args.key, args.params)
    cert_b = load_cert(args.cert, params)
    ca_key = load_public_point(args.ca, params)
    h, cipher = _scheme_options(args)
    message = read_bytes(args.input)
    sct = signcrypt(params, sender, cert_b, ca_key, load_crl(args.crl), now_of(args),
                    message, h, cipher, make_rng(args))
    write_bytes(args.out, wire.encode_sct(sct, params), args.armor)
    out.kv(signcrypted=args.out, recipient=cert_b.subject_id.decode(errors="replace"),
           length=len(message))
    if args.out != "-":
        out.say(f"signcrypted {len(message)} bytes for {cert_b.subject_id!r} -> {args.out}")
    return OK


def cmd_unsigncrypt(args, out: _Out) -> int:
    receiver, params = load_private(args.key, args.params)
    cert_a = load_cert(args.cert, params)
    ca_key = load_public_point(args.ca, params)
    h, cipher = _scheme_options(args)
    sct = wire.decode_sct(read_armored(args.input), params)
    message = unsigncrypt(params, receiver, cert_a, ca_key, load_crl(args.crl), now_of(args),
                          sct, h, cipher)
    write_bytes(args.out, message)
    out.kv(accepted="yes", sender=cert_a.subject_id.decode(errors="replace"), length=len(message))
    if args.out != "-":
        out.say(f"accepted {len(message)} bytes from {cert_a.subject_id!r} -> {args.out}")
    return OK


def cmd_verify(args, out: _Out) -> int:
    data = read_armored(args.cert)
    params = params_for(data, args.params)
    cert_a = wire.decode_cert(data, params)
    ca_key = load_public_point(args.ca, params)
    sct = wire.decode_sct(read_armored(args.sct), params)
    h = get_hash(args.hash)
    crl = load_crl(args.crl)
    now = now_of(args)
    if public_verify(params, cert_a, ca_key, crl, now, sct, args.id_b.encode(), h):
        out.kv(verified="yes", sender=cert_a.subject_id.decode(errors="replace"))
        out.say("signcryption verified")
        return OK
    reason = verification_failure(params, cert_a, ca_key, crl, now, sct, args.id_b.encode(), h)
    if reason.startswith("certificate "):
        raise CertificateError(reason[len("certificate "):])
    if reason.startswith("s*G"):
        raise VerificationError(reason)
    raise MalformedInputError(reason)


def cmd_bench(args, out: _Out) -> int:
    if args.action == "cost-model":
        cp_exp = costmodel.CostParams.with_hash(args.zeta_exp, args.hash)
        cp_ec = costmodel.CostParams.with_hash(args.zeta_ec, args.hash)
        sys.stdout.write(costmodel.emit_comparison(cp_exp, cp_ec, args.format))
        return OK
    params = resolve_params(args.params or "p192")
    op = {"ecpm": "ecpm-wnaf"}.get(args.op, args.op)
    rng = make_rng(args)
    counts = [costmodel.measure_field_ops(params, op, rng) for _ in range(args.trials)]
    mul = sum(c.mul_count for c in counts) / len(counts)
    add = sum(c.add_count for c in counts) / len(counts)
    inv = sum(c.inv_count for c in counts) / len(counts)
    reference = {"ecpm-wnaf": costmodel.ECPM_MULS, "ecpa": costmodel.ECPA_MULS}.get(op)
    out.kv(op=op, params=params.name, trials=args.trials, mul=f"{mul:g}", add=f"{add:g}",
           inv=f"{inv:g}", reference_mul=reference if reference is not None else "none")
    ref = f" (reference {reference})" if reference is not None else ""
    out.say(f"{op} on {params.name}: {mul:g} mul{ref}, {add:g} add, {inv:g} inv")
    return OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--porcelain", action="store_true",
                        help="machine-readable key=value output")
    common.add_argument("--insecure-seed", type=int, default=None, metavar="N",
                        help="deterministic randomness; INSECURE, for tests only")
    common.add_argument("--now", type=int, default=None,
                        help="current time in seconds since the epoch (default: clock)")
    common.add_argument("--params", default=None,
                        help="parameter set name or .ecp file")
    common.add_argument("--armor", action="store_true", help="write hex instead of binary")

    scheme = argparse.ArgumentParser(add_help=False)
    scheme.add_argument("--hash", default="sha256", help="sha256 (default), sha1 or sha512")
    scheme.add_argument("--cipher", default="hashctr", help="hashctr (default) or aes128-ctr")

    parser = _Parser(prog="ecsigncrypt", description="Elliptic-curve signcryption toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("params", parents=[common], help="show, validate or export domain parameters")
    p.add_argument("action", choices=["show", "validate", "export"])
    p.add_argument("target", metavar="NAME|FILE")
    p.add_argument("--strict", action="store_true", help="fail on any of the seven checks")
    p.add_argument("--embedding-bound", type=int, default=20)
    p.add_argument("--out")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("keygen", parents=[common], help="generate a key pair")
    p.add_argument("--id", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--pub-out")
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("ca", parents=[common], help="certificate authority operations")
    p.add_argument("action", choices=["init", "issue", "revoke", "verify"])
    p.add_argument("--dir", default=".")
    p.add_argument("--id", default="CA")
    p.add_argument("--subject-key")
    p.add_argument("--out")
    p.add_argument("--not-before", type=int)
    p.add_argument("--not-after", type=int)
    p.add_argument("--days", type=int, default=365)
    p.add_argument("--serial", type=int)
    p.add_argument("--cert")
    p.add_argument("--ca")
    p.add_argument("--crl")
    p.set_defaults(func=cmd_ca)

    p = sub.add_parser("signcrypt", parents=[common, scheme], help="signcrypt a message")
    p.add_argument("--key", required=True, help="sender private key")
    p.add_argument("--cert", required=True, help="recipient certificate")
    p.add_argument("--ca", required=True, help="CA public key")
    p.add_argument("--crl", required=True)
    p.add_argument("--in", dest="input", default="-")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_signcrypt)

    p = sub.add_parser("unsigncrypt", parents=[common, scheme], help="recover and check a message")
    p.add_argument("--key", required=True, help="recipient private key")
    p.add_argument("--cert", required=True, help="sender certificate")
    p.add_argument("--ca", required=True)
    p.add_argument("--crl", required=True)
    p.add_argument("--in", dest="input", default="-")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_unsigncrypt)

    p = sub.add_parser("verify", parents=[common, scheme],
                       help="publicly verify a signcrypted text (no private key)")
    p.add_argument("--cert", required=True, help="sender certificate")
    p.add_argument("--sct", required=True)
    p.add_argument("--id-b", required=True, help="recipient identifier")
    p.add_argument("--ca", required=True)
    p.add_argument("--crl", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", parents=[common], help="cost model and operation counts")
    p.add_argument("action", choices=["cost-model", "measure"])
    p.add_argument("--zeta-exp", type=int, default=1024)
    p.add_argument("--zeta-ec", type=int, default=192)
    p.add_argument("--hash", default="sha1", choices=sorted(costmodel.HASH_BITOPS))
    p.add_argument("--format", default="csv", choices=["csv", "chart"])
    p.add_argument("--op", default="ecpm", choices=["ecpm", "ecpa", "ecpa-mixed"])
    p.add_argument("--trials", type=int, default=1)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = _Out(args.porcelain)
    try:
        return args.func(args, out)
    except SigncryptionError as exc:
        status = exc.exit_status
        kind = {REJECTED: "rejected", MALFORMED: "malformed", USAGE: "usage",
                CERTIFICATE: "certificate"}[status]
        out.kv(error=kind, reason=str(exc).replace("\n", " "))
        label = "" if isinstance(exc, CertificateError) else f"{kind}: "
        print(f"ecsigncrypt: {label}{exc}", file=sys.stderr)
        return status


if __name__ == "__main__":
    sys.exit(main())
