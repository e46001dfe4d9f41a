"""Short-Weierstrass curves y^2 = x^3 + ax + b over a prime field.

Affine points are :class:`Point` tuples of canonical integer coordinates, with
:data:`INFINITY` standing for the identity.  Jacobian triples (X, Y, Z) with
x = X/Z^2, y = Y/Z^3 back the windowed-NAF scalar multiplication; Z = 0
encodes the identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property, lru_cache
from typing import List, NamedTuple, Optional, Tuple

from .errors import UsageError
from .field import PrimeField

__all__ = [
    "Point",
    "INFINITY",
    "JacobianPoint",
    "DomainParams",
    "ValidationReport",
    "P192",
    "TINY17",
    "BUILTIN_PARAMS",
    "get_params",
    "on_curve",
    "point_neg",
    "point_add",
    "scalar_mul_naive",
    "wnaf_recode",
    "scalar_mul_wnaf",
    "scalar_mul",
    "FixedBaseTable",
    "fixed_base_table",
    "to_jacobian",
    "to_affine",
    "jacobian_double",
    "jacobian_add",
    "jacobian_add_mixed",
    "is_probable_prime",
    "validate_domain_params",
    "validate_public_key",
    "DEFAULT_WINDOW",
]

DEFAULT_WINDOW = 5


class Point(NamedTuple):
    x: Optional[int]
    y: Optional[int]

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __repr__(self) -> str:
        if self.x is None:
            return "INFINITY"
        return f"Point({self.x:#x}, {self.y:#x})"


INFINITY = Point(None, None)


class JacobianPoint(NamedTuple):
    X: int
    Y: int
    Z: int


JACOBIAN_INFINITY = JacobianPoint(1, 1, 0)


@dataclass(frozen=True)
class DomainParams:
    name: str
    q: int
    a: int
    b: int
    G: Point
    n: int
    h: int = 1

    @cached_property
    def field(self) -> PrimeField:
        return PrimeField(self.q)

    @property
    def f(self) -> int:
        """Bit length of the group order."""
        return self.n.bit_length()

    @cached_property
    def a_is_minus_3(self) -> bool:
        return (self.a + 3) % self.q == 0

    @property
    def field_bytes(self) -> int:
        return (self.q.bit_length() + 7) // 8

    @property
    def scalar_bytes(self) -> int:
        return (self.n.bit_length() + 7) // 8


P192 = DomainParams(
    name="p192",
    q=2**192 - 2**64 - 1,
    a=2**192 - 2**64 - 1 - 3,
    b=0x64210519E59C80E70FA7E9AB72243049FEB8DEECC146B9B1,
    G=Point(
        0x188DA80EB03090F67CBF20EB43A18800F4FF0AFD82FF1012,
        0x07192B95FFC8DA78631011ED6B24CDD573F977A11E794811,
    ),
    n=0xFFFFFFFFFFFFFFFFFFFFFFFF99DEF836146BC9B1B4D22831,
    h=1,
)

# y^2 = x^3 + 2x + 2 over F_17; 19 points, small enough to enumerate.
TINY17 = DomainParams(name="tiny17", q=17, a=2, b=2, G=Point(5, 1), n=19, h=1)

BUILTIN_PARAMS = {p.name: p for p in (P192, TINY17)}


def get_params(name: str) -> DomainParams:
    try:
        return BUILTIN_PARAMS[name]
    except KeyError:
        raise UsageError(
            f"unknown parameter set {name!r} (known: {', '.join(BUILTIN_PARAMS)})"
        ) from None


# ---------------------------------------------------------------------------
# affine group law


def on_curve(P: Point, params: DomainParams) -> bool:
    if P.is_infinity:
        return True
    x, y = P
    q = params.q
    if not (0 <= x < q and 0 <= y < q):
        return False
    return (y * y - (x * x * x + params.a * x + params.b)) % q == 0


def point_neg(P: Point, params: DomainParams) -> Point:
    if P.is_infinity:
        return P
    return Point(P.x, (-P.y) % params.q)


def point_add(P: Point, Q: Point, params: DomainParams, check: bool = False) -> Point:
    """Chord-and-tangent addition in affine coordinates."""
    if check and not (on_curve(P, params) and on_curve(Q, params)):
        raise UsageError("point_add operand is not on the curve")
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    F = params.field
    if P.x == Q.x:
        if F.add(P.y, Q.y) == 0:
            return INFINITY
        # doubling: lambda = (3x^2 + a) / 2y
        xx = F.sqr(P.x)
        num = F.add(F.add(F.add(xx, xx), xx), params.a % params.q)
        den = F.add(P.y, P.y)
    else:
        num = F.sub(Q.y, P.y)
        den = F.sub(Q.x, P.x)
    lam = F.mul(num, F.inv(den))
    x3 = F.sub(F.sub(F.sqr(lam), P.x), Q.x)
    y3 = F.sub(F.mul(lam, F.sub(P.x, x3)), P.y)
    return Point(x3, y3)


def scalar_mul_naive(k: int, P: Point, params: DomainParams) -> Point:
    """Right-to-left double-and-add in affine coordinates; the reference path."""
    if k < 0:
        k, P = -k, point_neg(P, params)
    result = INFINITY
    addend = P
    while k:
        if k & 1:
            result = point_add(result, addend, params)
        addend = point_add(addend, addend, params)
        k >>= 1
    return result


# ---------------------------------------------------------------------------
# Jacobian arithmetic


def to_jacobian(P: Point) -> JacobianPoint:
    if P.is_infinity:
        return JACOBIAN_INFINITY
    return JacobianPoint(P.x, P.y, 1)


def to_affine(J: JacobianPoint, params: DomainParams) -> Point:
    if J.Z == 0:
        return INFINITY
    F = params.field
    if J.Z == 1:
        return Point(J.X, J.Y)
    zi = F.inv(J.Z)
    zi2 = F.sqr(zi)
    return Point(F.mul(J.X, zi2), F.mul(J.Y, F.mul(zi2, zi)))


def jacobian_double(P: JacobianPoint, params: DomainParams) -> JacobianPoint:
    """Doubling; 3M+5S when a = -3, 4M+6S otherwise."""
    X, Y, Z = P
    if Z == 0 or Y == 0:
        return JACOBIAN_INFINITY
    F = params.field
    zz = F.sqr(Z)
    if params.a_is_minus_3:
        m = F.mul(F.sub(X, zz), F.add(X, zz))
        m = F.add(F.add(m, m), m)
    else:
        xx = F.sqr(X)
        m = F.add(F.add(F.add(xx, xx), xx), F.mul(params.a % params.q, F.sqr(zz)))
    yy = F.sqr(Y)
    s = F.mul(X, yy)
    s = F.add(s, s)
    s = F.add(s, s)
    x3 = F.sub(F.sqr(m), F.add(s, s))
    yyyy = F.sqr(yy)
    yyyy = F.add(yyyy, yyyy)
    yyyy = F.add(yyyy, yyyy)
    yyyy = F.add(yyyy, yyyy)
    y3 = F.sub(F.mul(m, F.sub(s, x3)), yyyy)
    yz = F.mul(Y, Z)
    z3 = F.add(yz, yz)
    return JacobianPoint(x3, y3, z3)


def jacobian_add_mixed(P: JacobianPoint, Q: Point, params: DomainParams) -> JacobianPoint:
    """Jacobian + affine; 8M+3S in the generic case."""
    if Q.is_infinity:
        return P
    if P.Z == 0:
        return to_jacobian(Q)
    F = params.field
    X1, Y1, Z1 = P
    z1z1 = F.sqr(Z1)
    u2 = F.mul(Q.x, z1z1)
    s2 = F.mul(Q.y, F.mul(Z1, z1z1))
    h = F.sub(u2, X1)
    r = F.sub(s2, Y1)
    if h == 0:
        if r == 0:
            return jacobian_double(P, params)
        return JACOBIAN_INFINITY
    hh = F.sqr(h)
    hhh = F.mul(h, hh)
    v = F.mul(X1, hh)
    x3 = F.sub(F.sub(F.sqr(r), hhh), F.add(v, v))
    y3 = F.sub(F.mul(r, F.sub(v, x3)), F.mul(Y1, hhh))
    z3 = F.mul(Z1, h)
    return JacobianPoint(x3, y3, z3)


def jacobian_add(P: JacobianPoint, Q: JacobianPoint, params: DomainParams) -> JacobianPoint:
    """General Jacobian addition; 12M+4S in the generic case."""
    if P.Z == 0:
        return Q
    if Q.Z == 0:
        return P
    F = params.field
    X1, Y1, Z1 = P
    X2, Y2, Z2 = Q
    z1z1 = F.sqr(Z1)
    z2z2 = F.sqr(Z2)
    u1 = F.mul(X1, z2z2)
    u2 = F.mul(X2, z1z1)
    s1 = F.mul(Y1, F.mul(Z2, z2z2))
    s2 = F.mul(Y2, F.mul(Z1, z1z1))
    h = F.sub(u2, u1)
    r = F.sub(s2, s1)
    if h == 0:
        if r == 0:
            return jacobian_double(P, params)
        return JACOBIAN_INFINITY
    hh = F.sqr(h)
    hhh = F.mul(h, hh)
    v = F.mul(u1, hh)
    x3 = F.sub(F.sub(F.sqr(r), hhh), F.add(v, v))
    y3 = F.sub(F.mul(r, F.sub(v, x3)), F.mul(s1, hhh))
    z3 = F.mul(F.mul(Z1, Z2), h)
    return JacobianPoint(x3, y3, z3)


def _batch_to_affine(points: List[JacobianPoint], params: DomainParams) -> List[Point]:
    """Normalise many Jacobian points with a single inversion (Montgomery's trick)."""
    F = params.field
    live = [i for i, J in enumerate(points) if J.Z != 0]
    out = [INFINITY] * len(points)
    if not live:
        return out
    prefix = []
    acc = 1
    for i in live:
        acc = points[i].Z if not prefix else F.mul(acc, points[i].Z)
        prefix.append(acc)
    inv = F.inv(acc)
    for j in range(len(live) - 1, -1, -1):
        i = live[j]
        if j:
            zi = F.mul(inv, prefix[j - 1])
            inv = F.mul(inv, points[i].Z)
        else:
            zi = inv
        zi2 = F.sqr(zi)
        out[i] = Point(F.mul(points[i].X, zi2), F.mul(points[i].Y, F.mul(zi2, zi)))
    return out


# ---------------------------------------------------------------------------
# windowed NAF


def wnaf_recode(k: int, w: int = DEFAULT_WINDOW) -> List[int]:
    """Width-``w`` NAF digits of ``k``, least significant first.

    Nonzero digits are odd, bounded by 2^(w-1) in absolute value, and any
    ``w`` consecutive digits contain at most one nonzero.

    >>> wnaf_recode(7, 2)
    [-1, 0, 0, 1]
    """
    if not 2 <= w <= 8:
        raise UsageError(f"window width must be in [2, 8], got {w}")
    if k < 0:
        raise UsageError("wnaf_recode expects a nonnegative scalar")
    full = 1 << w
    half = full >> 1
    digits = []
    while k:
        if k & 1:
            d = k & (full - 1)
            if d >= half:
                d -= full
            k -= d
        else:
            d = 0
        digits.append(d)
        k >>= 1
    return digits


def scalar_mul_wnaf(k: int, P: Point, params: DomainParams, w: int = DEFAULT_WINDOW) -> Point:
    """k*P via width-w NAF, Jacobian accumulator and affine precomputed odd
    multiples (mixed additions)."""
    if k < 0:
        k, P = -k, point_neg(P, params)
    if k == 0 or P.is_infinity:
        return INFINITY
    if k == 1:
        return P
    digits = wnaf_recode(k, w)
    # odd multiples P, 3P, ..., (2^(w-1) - 1)P
    count = 1 << (w - 2)
    jac = [to_jacobian(P)]
    if count > 1:
        twice = jacobian_double(jac[0], params)
        for _ in range(count - 1):
            jac.append(jacobian_add(jac[-1], twice, params))
    table = _batch_to_affine(jac, params) if count > 1 else [P]

    F = params.field
    top = digits[-1]
    acc = to_jacobian(table[top >> 1])
    for d in reversed(digits[:-1]):
        acc = jacobian_double(acc, params)
        if d > 0:
            acc = jacobian_add_mixed(acc, table[d >> 1], params)
        elif d < 0:
            T = table[(-d) >> 1]
            if not T.is_infinity:
                T = Point(T.x, F.neg(T.y))
            acc = jacobian_add_mixed(acc, T, params)
    return to_affine(acc, params)


# ---------------------------------------------------------------------------
# fixed-base tables for points that are multiplied over and over (G, long-term keys)

FIXED_BASE_WINDOW = 8
_REUSE_THRESHOLD = 3
_uses: dict = {}


class FixedBaseTable:
    """Affine multiples j * 2^(w*i) * P for every window i and digit j, so
    that k*P costs one mixed addition per nonzero base-2^w digit of k."""

    def __init__(self, P: Point, params: DomainParams, w: int = FIXED_BASE_WINDOW):
        self.params = params
        self.w = w
        self.windows = -(-params.n.bit_length() // w)
        self.limit = 1 << (w * self.windows)
        jac = []
        base = to_jacobian(P)
        for _ in range(self.windows):
            row = [base]
            for _ in range((1 << w) - 2):
                row.append(jacobian_add(row[-1], base, params))
            jac.extend(row)
            base = jacobian_add(row[-1], base, params)
        flat = _batch_to_affine(jac, params)
        size = (1 << w) - 1
        self.rows = [flat[i * size:(i + 1) * size] for i in range(self.windows)]

    def mul(self, k: int) -> Point:
        mask = (1 << self.w) - 1
        acc = JACOBIAN_INFINITY
        for row in self.rows:
            d = k & mask
            if d:
                acc = jacobian_add_mixed(acc, row[d - 1], self.params)
            k >>= self.w
        return to_affine(acc, self.params)


@lru_cache(maxsize=16)
def fixed_base_table(P: Point, params: DomainParams) -> FixedBaseTable:
    return FixedBaseTable(P, params)


def _table_for(P: Point, params: DomainParams) -> Optional[FixedBaseTable]:
    if P != params.G:
        key = (P, params.name, params.q)
        uses = _uses.get(key, 0) + 1
        if uses < _REUSE_THRESHOLD:
            if len(_uses) > 4096:
                _uses.clear()
            _uses[key] = uses
            return None
    return fixed_base_table(P, params)


def scalar_mul(k: int, P: Point, params: DomainParams) -> Point:
    """k*P.  Uses a cached fixed-base table for G and for any point seen a
    few times already; otherwise width-5 NAF."""
    if P.is_infinity or k == 0:
        return INFINITY
    if k > 0:
        table = _table_for(P, params)
        if table is not None and k < table.limit:
            return table.mul(k)
    return scalar_mul_wnaf(k, P, params)


# ---------------------------------------------------------------------------
# parameter validation

_SMALL_PRIMES = []


def _first_primes(count: int) -> List[int]:
    while len(_SMALL_PRIMES) < count:
        c = _SMALL_PRIMES[-1] + 1 if _SMALL_PRIMES else 2
        while any(c % p == 0 for p in _SMALL_PRIMES if p * p <= c):
            c += 1
        _SMALL_PRIMES.append(c)
    return _SMALL_PRIMES[:count]


def is_probable_prime(m: int, rounds: int = 64) -> bool:
    """Miller-Rabin with the first ``rounds`` primes as witnesses."""
    if m < 2:
        return False
    witnesses = _first_primes(rounds)
    for p in witnesses:
        if m % p == 0:
            return m == p
    d, s = m - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in witnesses:
        x = pow(a, d, m)
        if x in (1, m - 1):
            continue
        for _ in range(s - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True


@dataclass
class ValidationReport:
    checks: List[Tuple[str, bool, str]] = dc_field(default_factory=list)
    strict: bool = True

    # checks beyond the first four are advisory unless strict
    ADVISORY_FROM = 4

    @property
    def ok(self) -> bool:
        considered = self.checks if self.strict else self.checks[: self.ADVISORY_FROM]
        return all(passed for _, passed, _ in considered)

    @property
    def failed(self) -> List[str]:
        return [name for name, passed, _ in self.checks if not passed]

    def __str__(self) -> str:
        lines = [
            f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}"
            for name, passed, detail in self.checks
        ]
        mode = "strict" if self.strict else "advisory"
        lines.append(f"overall ({mode}): {'PASS' if self.ok else 'FAIL'}")
        return "\n".join(lines)


def validate_domain_params(
    params: DomainParams, strict: bool = True, embedding_bound: int = 20
) -> ValidationReport:
    """Run the seven safety checks in order.  Failures are reported, not raised."""
    report = ValidationReport(strict=strict)
    q, n = params.q, params.n
    add = report.checks.append

    add(("field-prime", is_probable_prime(q), f"q has {q.bit_length()} bits"))

    disc = (4 * pow(params.a, 3, q) + 27 * pow(params.b, 2, q)) % q if q > 1 else 0
    add(("non-singular", disc != 0, f"4a^3 + 27b^2 = {disc} mod q"))

    G = params.G
    if not on_curve(G, params) or G.is_infinity:
        add(("base-point-order", False, "G is not a finite point on the curve"))
    else:
        try:
            nG = scalar_mul_naive(n, G, params)
        except (ValueError, ZeroDivisionError) as exc:
            add(("base-point-order", False, f"n*G undefined ({exc})"))
        else:
            add(("base-point-order", nG.is_infinity,
                 "n*G = O" if nG.is_infinity else "n*G != O"))

    add(("order-prime", is_probable_prime(n), f"n has {n.bit_length()} bits"))

    add(("small-subgroup-bound", n * n > 16 * q, "n > 4*sqrt(q)"))

    if n == q:
        add(("mov-anomalous", False, "n = q (anomalous curve)"))
    else:
        bad = next(
            (i for i in range(1, embedding_bound + 1) if pow(q, i, n) == 1 % n),
            None,
        )
        if bad is None:
            add(("mov-anomalous", True,
                 f"n does not divide q^i - 1 for 1 <= i <= {embedding_bound}; n != q"))
        else:
            add(("mov-anomalous", False, f"n divides q^{bad} - 1 (i={bad})"))

    add(("size-floor", n > 2**160, f"n > 2^160 ({n.bit_length()}-bit n)"))
    return report


def validate_public_key(W: Point, params: DomainParams) -> bool:
    """True iff W is a non-identity curve point in the order-n subgroup."""
    if W.is_infinity or not on_curve(W, params):
        return False
    return scalar_mul_wnaf(params.n, W, params).is_infinity
