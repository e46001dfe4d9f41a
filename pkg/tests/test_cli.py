import os
import shutil
import subprocess
import sys

import pytest

from ecsigncrypt.cli import main

NOW = "1700000000"
COMMON = ["--now", NOW, "--insecure-seed", "7"]


def run(*argv):
    return main([*argv, *COMMON])


@pytest.fixture
def pki(tmp_path, monkeypatch):
    """CA, alice and bob on p192 with certificates, inside ``tmp_path``."""
    monkeypatch.chdir(tmp_path)
    assert run("ca", "init", "--params", "p192", "--dir", "ca") == 0
    for name in ("alice", "bob"):
        assert run("keygen", "--params", "p192", "--id", name, "--out", f"{name}.eck") == 0
        assert run("ca", "issue", "--dir", "ca", "--subject-key", f"{name}.pub",
                   "--out", f"{name}.ecc") == 0
    (tmp_path / "msg.txt").write_bytes(b"meet me at noon\n")
    return tmp_path


def signcrypt_file(out="msg.sct"):
    return run("signcrypt", "--key", "alice.eck", "--cert", "bob.ecc", "--ca", "ca/ca.pub",
               "--crl", "ca/ca.crl", "--in", "msg.txt", "--out", out)


def test_happy_path(pki):
    assert run("ca", "verify", "--cert", "alice.ecc", "--ca", "ca/ca.pub", "--crl", "ca/ca.crl") == 0
    assert signcrypt_file() == 0
    assert run("verify", "--cert", "alice.ecc", "--sct", "msg.sct", "--id-b", "bob",
               "--ca", "ca/ca.pub", "--crl", "ca/ca.crl") == 0
    assert run("unsigncrypt", "--key", "bob.eck", "--cert", "alice.ecc", "--ca", "ca/ca.pub",
               "--crl", "ca/ca.crl", "--in", "msg.sct", "--out", "out.txt") == 0
    assert (pki / "out.txt").read_bytes() == b"meet me at noon\n"
    assert oct((pki / "alice.eck").stat().st_mode & 0o777) == "0o600"


def test_tampered_sct_is_rejected(pki):
    assert signcrypt_file() == 0
    data = bytearray((pki / "msg.sct").read_bytes())
    data[60] ^= 0x01  # inside C
    (pki / "msg.sct").write_bytes(bytes(data))
    assert run("verify", "--cert", "alice.ecc", "--sct", "msg.sct", "--id-b", "bob",
               "--ca", "ca/ca.pub", "--crl", "ca/ca.crl") == 1
    assert run("unsigncrypt", "--key", "bob.eck", "--cert", "alice.ecc", "--ca", "ca/ca.pub",
               "--crl", "ca/ca.crl", "--in", "msg.sct", "--out", "out.txt") == 1
    assert not (pki / "out.txt").exists()


def test_wrong_recipient_id_is_rejected(pki):
    assert signcrypt_file() == 0
    assert run("verify", "--cert", "alice.ecc", "--sct", "msg.sct", "--id-b", "carol",
               "--ca", "ca/ca.pub", "--crl", "ca/ca.crl") == 1


def test_truncated_sct_is_malformed(pki):
    assert signcrypt_file() == 0
    (pki / "short.sct").write_bytes((pki / "msg.sct").read_bytes()[:-2])
    assert run("verify", "--cert", "alice.ecc", "--sct", "short.sct", "--id-b", "bob",
               "--ca", "ca/ca.pub", "--crl", "ca/ca.crl") == 2


def test_revoked_sender_gives_certificate_failure(pki, capsys):
    assert signcrypt_file() == 0
    assert run("ca", "revoke", "--dir", "ca", "--cert", "alice.ecc") == 0
    assert run("unsigncrypt", "--key", "bob.eck", "--cert", "alice.ecc", "--ca", "ca/ca.pub",
               "--crl", "ca/ca.crl", "--in", "msg.sct", "--out", "out.txt") == 4
    assert "revoked" in capsys.readouterr().err
    assert run("ca", "verify", "--cert", "alice.ecc", "--ca", "ca/ca.pub", "--crl", "ca/ca.crl") == 4


def test_verify_with_public_files_only(pki, tmp_path_factory):
    assert signcrypt_file() == 0
    public = tmp_path_factory.mktemp("public")
    for name in ("alice.ecc", "msg.sct", "ca/ca.pub", "ca/ca.crl"):
        shutil.copy(pki / name, public / os.path.basename(name))
    assert sorted(p.name for p in public.iterdir()) == ["alice.ecc", "ca.crl", "ca.pub", "msg.sct"]
    env = dict(os.environ, PYTHONPATH=os.pathsep.join(sys.path))
    proc = subprocess.run(
        [sys.executable, "-m", "ecsigncrypt", "verify", "--porcelain", "--now", NOW,
         "--cert", "alice.ecc", "--sct", "msg.sct", "--id-b", "bob", "--ca", "ca.pub", "--crl", "ca.crl"],
        cwd=public, env=env, capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert "verified=yes" in proc.stdout


def test_porcelain_output_is_deterministic(tmp_path, monkeypatch, capsys):
    outputs = []
    for attempt in range(2):
        d = tmp_path / str(attempt)
        d.mkdir()
        monkeypatch.chdir(d)
        run("ca", "init", "--porcelain", "--params", "tiny17", "--dir", "ca")
        run("keygen", "--porcelain", "--params", "tiny17", "--id", "a", "--out", "a.eck")
        run("keygen", "--porcelain", "--params", "tiny17", "--id", "b", "--out", "b.eck")
        run("ca", "issue", "--porcelain", "--dir", "ca", "--subject-key", "a.pub", "--out", "a.ecc")
        run("ca", "issue", "--porcelain", "--dir", "ca", "--subject-key", "b.pub", "--out", "b.ecc")
        (d / "m").write_bytes(b"x")
        run("signcrypt", "--porcelain", "--key", "a.eck", "--cert", "b.ecc", "--ca", "ca/ca.pub",
            "--crl", "ca/ca.crl", "--in", "m", "--out", "m.sct")
        outputs.append((capsys.readouterr().out, (d / "m.sct").read_bytes(), (d / "a.ecc").read_bytes()))
    assert outputs[0] == outputs[1]
    assert "serial=1" in outputs[0][0]
    assert all("=" in line for line in outputs[0][0].splitlines())


def test_usage_errors(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    assert main(["keygen", "--id", "x", "--out", "x.eck"]) == 3
    assert main(["params", "show", "nosuchcurve"]) == 3
    with pytest.raises(SystemExit) as info:
        main(["signcrypt"])
    assert info.value.code == 3
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 3


def test_params_commands(tmp_path, capsys):
    assert main(["params", "validate", "p192", "--strict"]) == 0
    assert main(["params", "validate", "tiny17"]) == 0
    assert main(["params", "validate", "tiny17", "--strict", "--porcelain"]) == 1
    out = capsys.readouterr().out
    assert "check6=mov-anomalous:fail" in out and "check7=size-floor:fail" in out
    f = tmp_path / "tiny.ecp"
    assert main(["params", "export", "tiny17", "--out", str(f)]) == 0
    assert main(["params", "show", str(f), "--porcelain"]) == 0
    assert "name=tiny17" in capsys.readouterr().out


def test_bench_commands(capsys):
    from ecsigncrypt.costmodel import emit_comparison

    assert main(["bench", "cost-model"]) == 0
    assert capsys.readouterr().out == emit_comparison()
    assert main(["bench", "cost-model", "--format", "chart", "--hash", "md5"]) == 0
    assert "hash=744" in capsys.readouterr().out
    assert main(["bench", "measure", "--op", "ecpa", "--porcelain", "--insecure-seed", "1"]) == 0
    out = capsys.readouterr().out
    assert "mul=16" in out and "add=7" in out


def test_armored_round_trip(pki):
    assert run("signcrypt", "--armor", "--key", "alice.eck", "--cert", "bob.ecc", "--ca", "ca/ca.pub",
               "--crl", "ca/ca.crl", "--in", "msg.txt", "--out", "msg.hex") == 0
    text = (pki / "msg.hex").read_text()
    assert all(c in "0123456789abcdef\n" for c in text)
    assert run("unsigncrypt", "--key", "bob.eck", "--cert", "alice.ecc", "--ca", "ca/ca.pub",
               "--crl", "ca/ca.crl", "--in", "msg.hex", "--out", "out.txt") == 0
    assert (pki / "out.txt").read_bytes() == b"meet me at noon\n"
