"""Operation-count cost model for signcryption schemes.

Costs are in bit operations for a modulus of ``zeta`` bits using schoolbook
arithmetic with unit leading constants:

    add = zeta,  mul = div = zeta^2,  exp = inv = zeta^3
    ECPM = 1936 mul + 1 inv     (wNAF, P-192, unknown point)
    ECPA = 16 mul + 7 add       (Jacobian)

Hash invocations cost a fixed number of bit operations (1110 for SHA-1, 744
for MD5).  Exponentiation-based schemes are priced at ``cp_exp.zeta``, the
curve-based ones at ``cp_ec.zeta``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import astuple, dataclass, fields
from typing import Dict, List, Optional, Tuple

from .curve import (
    DomainParams,
    jacobian_add,
    jacobian_add_mixed,
    point_add,
    scalar_mul_naive,
    scalar_mul_wnaf,
    to_jacobian,
)
from .errors import UsageError
from .field import OpCounter, counting
from .primitives import random_scalar

__all__ = [
    "OpVector",
    "CostParams",
    "AttributeRow",
    "SCHEMES",
    "TABLE2",
    "TABLE1",
    "HASH_BITOPS",
    "ECPM_MULS",
    "ECPA_MULS",
    "ECPA_ADDS",
    "table2_counts",
    "unit_costs",
    "ecpm_cost",
    "ecpa_cost",
    "total_cost",
    "comparison_rows",
    "emit_comparison",
    "measure_field_ops",
    "CSV_HEADER",
]

ECPM_MULS = 1936
ECPA_MULS = 16
ECPA_ADDS = 7
HASH_BITOPS = {"sha1": 1110, "md5": 744}


@dataclass(frozen=True)
class OpVector:
    exp: int = 0
    div: int = 0
    ecpm: int = 0
    ecpa: int = 0
    mul: int = 0
    add: int = 0
    hash: int = 0

    def __add__(self, other: "OpVector") -> "OpVector":
        return OpVector(*(a + b for a, b in zip(astuple(self), astuple(other))))


@dataclass(frozen=True)
class CostParams:
    zeta: int
    hash_cost: int = HASH_BITOPS["sha1"]

    def __post_init__(self):
        if self.zeta < 1:
            raise UsageError("zeta must be at least 1")
        if self.hash_cost < 0:
            raise UsageError("hash cost must be nonnegative")

    @classmethod
    def with_hash(cls, zeta: int, hash_name: str) -> "CostParams":
        try:
            return cls(zeta, HASH_BITOPS[hash_name])
        except KeyError:
            raise UsageError(f"unknown hash cost {hash_name!r}") from None


@dataclass(frozen=True)
class AttributeRow:
    scheme: str
    direct_public_verifiability: bool
    confidentiality: bool
    integrity: bool
    non_repudiation: str  # "direct", "via-another-protocol" or "no"
    unforgeability: bool
    forward_secrecy: bool


# (key, display name, exponentiation-based)
SCHEMES: List[Tuple[str, str, bool]] = [
    ("zheng", "Zheng", True),
    ("jung", "Jung et al.", True),
    ("bao-deng", "Bao and Deng", True),
    ("gamage", "Gamage et al.", True),
    ("zheng-imai", "Zheng and Imai", False),
    ("han", "Han et al.", False),
    ("hwang", "Hwang et al.", False),
    ("proposed", "The proposed scheme", False),
]
_EXP_BASED = {key for key, _, exp in SCHEMES if exp}

TABLE2: Dict[Tuple[str, str], OpVector] = {
    ("zheng", "sender"): OpVector(exp=1, div=1, add=1, hash=2),
    ("zheng", "receiver"): OpVector(exp=2, mul=2, hash=2),
    ("jung", "sender"): OpVector(exp=2, div=1, add=1, hash=2),
    ("jung", "receiver"): OpVector(exp=3, mul=1, hash=2),
    ("bao-deng", "sender"): OpVector(exp=2, div=1, add=1, hash=3),
    ("bao-deng", "receiver"): OpVector(exp=3, mul=1, hash=3),
    ("gamage", "sender"): OpVector(exp=2, div=1, add=1, hash=2),
    ("gamage", "receiver"): OpVector(exp=3, mul=1, hash=2),
    ("zheng-imai", "sender"): OpVector(div=1, ecpm=1, mul=1, add=1, hash=2),
    ("zheng-imai", "receiver"): OpVector(ecpm=2, ecpa=1, mul=2, hash=2),
    ("han", "sender"): OpVector(div=1, ecpm=2, mul=2, add=1, hash=2),
    ("han", "receiver"): OpVector(div=1, ecpm=3, ecpa=1, mul=2, hash=2),
    ("hwang", "sender"): OpVector(ecpm=2, mul=1, add=1, hash=1),
    ("hwang", "receiver"): OpVector(ecpm=3, ecpa=1, hash=1),
    ("proposed", "sender"): OpVector(ecpm=2, mul=2, add=2, hash=2),
    ("proposed", "receiver"): OpVector(ecpm=4, ecpa=2, hash=2),
}

_VIA = "via-another-protocol"
TABLE1: List[AttributeRow] = [
    AttributeRow("zheng", False, True, True, _VIA, True, False),
    AttributeRow("jung", False, True, True, _VIA, True, True),
    AttributeRow("zheng-imai", False, True, True, _VIA, True, False),
    AttributeRow("bao-deng", False, True, True, "direct", True, False),
    AttributeRow("gamage", True, True, True, "direct", True, False),
    AttributeRow("han", False, False, False, "direct", False, False),
    AttributeRow("hwang", False, False, False, "direct", False, False),
    AttributeRow("proposed", True, True, True, "direct", True, True),
]

_PARTICIPANTS = {"sender": "sender", "alice": "sender", "receiver": "receiver", "bob": "receiver"}
_ALIASES = {key: key for key, _, _ in SCHEMES}
_ALIASES.update({name.lower(): key for key, name, _ in SCHEMES})
_ALIASES.update({"bao": "bao-deng", "zheng-and-imai": "zheng-imai"})


def _scheme_key(scheme: str) -> str:
    try:
        return _ALIASES[scheme.strip().lower()]
    except KeyError:
        raise KeyError(f"unknown scheme {scheme!r}") from None


def table2_counts(scheme: str, participant: str) -> OpVector:
    """Operation counts for one scheme and participant (sender/Alice or
    receiver/Bob).  Raises KeyError for unknown names."""
    try:
        role = _PARTICIPANTS[participant.strip().lower()]
    except KeyError:
        raise KeyError(f"unknown participant {participant!r}") from None
    return TABLE2[(_scheme_key(scheme), role)]


def unit_costs(cp: CostParams) -> Dict[str, int]:
    z = cp.zeta
    return {"add": z, "mul": z * z, "div": z * z, "exp": z**3, "inv": z**3, "hash": cp.hash_cost}


def ecpm_cost(cp: CostParams) -> int:
    u = unit_costs(cp)
    return ECPM_MULS * u["mul"] + u["inv"]


def ecpa_cost(cp: CostParams) -> int:
    u = unit_costs(cp)
    return ECPA_MULS * u["mul"] + ECPA_ADDS * u["add"]


def vector_cost(ops: OpVector, cp: CostParams) -> int:
    u = unit_costs(cp)
    return (
        ops.exp * u["exp"]
        + ops.div * u["div"]
        + ops.ecpm * ecpm_cost(cp)
        + ops.ecpa * ecpa_cost(cp)
        + ops.mul * u["mul"]
        + ops.add * u["add"]
        + ops.hash * u["hash"]
    )


def total_cost(
    scheme: str,
    participant: str,
    cp_exp: CostParams = CostParams(1024),
    cp_ec: CostParams = CostParams(192),
) -> int:
    key = _scheme_key(scheme)
    cp = cp_exp if key in _EXP_BASED else cp_ec
    return vector_cost(table2_counts(key, participant), cp)


CSV_HEADER = ["scheme", "participant"] + [f.name for f in fields(OpVector)] + ["total_bitops"]
ATTR_HEADER = ["scheme"] + [f.name for f in fields(AttributeRow)][1:]


def comparison_rows(cp_exp: CostParams, cp_ec: CostParams) -> List[Tuple[str, str, OpVector, int]]:
    rows = []
    for key, _, _ in SCHEMES:
        for role in ("sender", "receiver"):
            rows.append((key, role, TABLE2[(key, role)], total_cost(key, role, cp_exp, cp_ec)))
    return rows


def _attr_cell(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    return v


def emit_comparison(
    cp_exp: CostParams = CostParams(1024),
    cp_ec: CostParams = CostParams(192),
    format: str = "csv",
    width: int = 60,
) -> str:
    """Per-scheme totals followed by the attribute matrix, as CSV or a text bar chart."""
    rows = comparison_rows(cp_exp, cp_ec)
    if format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for key, role, ops, total in rows:
            w.writerow([key, role, *astuple(ops), total])
        buf.write("\n")
        w.writerow(ATTR_HEADER)
        for row in TABLE1:
            w.writerow([_attr_cell(v) for v in astuple(row)])
        return buf.getvalue()
    if format in ("chart", "text-bar-chart"):
        peak = max(total for *_, total in rows)
        lines = [
            f"bit operations (zeta_exp={cp_exp.zeta}, zeta_ec={cp_ec.zeta}, hash={cp_ec.hash_cost})"
        ]
        for key, role, _, total in rows:
            bar = "#" * max(1, round(width * total / peak))
            lines.append(f"{key:<10} {role:<8} {bar:<{width}} {total}")
        lines.append("")
        lines.append("  ".join(ATTR_HEADER))
        for row in TABLE1:
            lines.append("  ".join(_attr_cell(v) for v in astuple(row)))
        return "\n".join(lines) + "\n"
    raise UsageError(f"unsupported format {format!r} (use csv or chart)")


def measure_field_ops(
    params: DomainParams, op: str = "ecpm-wnaf", rng=None, k: Optional[int] = None
) -> OpCounter:
    """Count field operations for one scalar multiplication or point addition.

    ``op`` is ``ecpm-wnaf``, ``ecpa`` (Jacobian + Jacobian) or
    ``ecpa-mixed`` (Jacobian + affine).  Operands are random multiples of G,
    prepared outside the counting window.
    """
    G = params.G
    if op == "ecpm-wnaf":
        P = scalar_mul_naive(random_scalar(params.n, rng), G, params)
        if k is None:
            k = random_scalar(params.n, rng)
        with counting() as c:
            scalar_mul_wnaf(k, P, params)
        return c.snapshot()
    if op in ("ecpa", "ecpa-mixed"):
        P, Q = (scalar_mul_naive(random_scalar(params.n, rng), G, params) for _ in range(2))
        # give P a non-trivial Z so the addition is fully projective
        lam = random_scalar(params.q, rng)
        F = params.field
        l2 = F.sqr(lam)
        JP = to_jacobian(P)._replace(X=F.mul(P.x, l2), Y=F.mul(P.y, F.mul(l2, lam)), Z=lam)
        if op == "ecpa":
            mu = random_scalar(params.q, rng)
            m2 = F.sqr(mu)
            JQ = to_jacobian(Q)._replace(X=F.mul(Q.x, m2), Y=F.mul(Q.y, F.mul(m2, mu)), Z=mu)
            with counting() as c:
                jacobian_add(JP, JQ, params)
        else:
            with counting() as c:
                jacobian_add_mixed(JP, Q, params)
        return c.snapshot()
    if op == "ecpa-affine":
        P, Q = (scalar_mul_naive(random_scalar(params.n, rng), G, params) for _ in range(2))
        with counting() as c:
            point_add(P, Q, params)
        return c.snapshot()
    raise UsageError(f"unknown operation {op!r}")
