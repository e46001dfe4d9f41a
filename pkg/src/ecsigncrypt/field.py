"""Prime-field arithmetic with optional operation counting.

Hot paths (point arithmetic) work on plain ``int`` residues through the
methods of :class:`PrimeField`; :class:`FieldElement` is the value-level
wrapper for callers who want operator syntax.  Every ``PrimeField`` method
reports to the active :class:`OpCounter`, if any, so that the cost of a
point operation can be measured in field multiplications.
"""

from __future__ import annotations

import threading
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterator, Optional

__all__ = [
    "OpCounter",
    "counting",
    "PrimeField",
    "FieldElement",
    "f_add",
    "f_sub",
    "f_mul",
    "f_inv",
    "f_sqrt",
]


@dataclass
class OpCounter:
    """Tallies of field operations.  Squarings count as multiplications,
    subtractions and negations count as additions."""

    mul_count: int = 0
    add_count: int = 0
    inv_count: int = 0

    def reset(self) -> None:
        self.mul_count = self.add_count = self.inv_count = 0

    def snapshot(self) -> "OpCounter":
        return OpCounter(self.mul_count, self.add_count, self.inv_count)


class _State(threading.local):
    counter: Optional[OpCounter] = None


_local = _State()


def _active() -> Optional[OpCounter]:
    return _local.counter


@contextmanager
def counting(counter: Optional[OpCounter] = None) -> Iterator[OpCounter]:
    """Count field operations performed by the current thread.

    >>> F = PrimeField(17)
    >>> with counting() as c:
    ...     _ = F.mul(3, 6)
    >>> c.mul_count
    1
    """
    if counter is None:
        counter = OpCounter()
    previous = _active()
    _local.counter = counter
    try:
        yield counter
    finally:
        _local.counter = previous


class PrimeField:
    """The field of integers modulo a prime ``q``.

    Inputs to the arithmetic methods are assumed reduced; outputs always are.
    """

    __slots__ = ("q", "byte_length", "_three_mod_four")

    def __init__(self, q: int):
        if q < 2:
            raise ValueError(f"modulus must be at least 2, got {q}")
        self.q = q
        self.byte_length = (q.bit_length() + 7) // 8
        self._three_mod_four = q % 4 == 3

    def __repr__(self) -> str:
        return f"PrimeField({self.q})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("PrimeField", self.q))

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(value, self)

    def add(self, a: int, b: int) -> int:
        c = _local.counter
        if c is not None:
            c.add_count += 1
        return (a + b) % self.q

    def sub(self, a: int, b: int) -> int:
        c = _local.counter
        if c is not None:
            c.add_count += 1
        return (a - b) % self.q

    def neg(self, a: int) -> int:
        c = _local.counter
        if c is not None:
            c.add_count += 1
        return (-a) % self.q

    def mul(self, a: int, b: int) -> int:
        c = _local.counter
        if c is not None:
            c.mul_count += 1
        return (a * b) % self.q

    def sqr(self, a: int) -> int:
        c = _local.counter
        if c is not None:
            c.mul_count += 1
        return (a * a) % self.q

    def inv(self, a: int) -> int:
        a %= self.q
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        c = _local.counter
        if c is not None:
            c.inv_count += 1
        # Extended Euclid via the builtin; one counted unit regardless of steps.
        return pow(a, -1, self.q)

    def is_square(self, a: int) -> bool:
        a %= self.q
        return a == 0 or pow(a, (self.q - 1) // 2, self.q) == 1

    def sqrt(self, a: int) -> Optional[int]:
        """Square root of ``a``, or None for a non-residue.

        Of the two roots the one with even canonical value is returned.
        """
        q = self.q
        a %= q
        if a == 0:
            return 0
        if q == 2:
            return a
        if not self.is_square(a):
            return None
        if self._three_mod_four:
            r = pow(a, (q + 1) // 4, q)
        else:
            r = _tonelli_shanks(a, q)
        return r if r % 2 == 0 else q - r


def _tonelli_shanks(a: int, q: int) -> int:
    s, m = 0, q - 1
    while m % 2 == 0:
        s += 1
        m //= 2
    z = 2
    while pow(z, (q - 1) // 2, q) != q - 1:
        z += 1
    c = pow(z, m, q)
    t = pow(a, m, q)
    r = pow(a, (m + 1) // 2, q)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % q
            i += 1
        b = pow(c, 1 << (s - i - 1), q)
        s = i
        c = b * b % q
        t = t * c % q
        r = r * b % q
    return r


class FieldElement:
    """An immutable residue modulo ``field.q`` in canonical form."""

    __slots__ = ("value", "field")

    def __init__(self, value: int, field: PrimeField):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", int(value) % field.q)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field.q != self.field.q:
                raise ValueError(
                    f"mismatched moduli: {self.field.q} and {other.field.q}"
                )
            return other.value
        if isinstance(other, int):
            return other % self.field.q
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field.add(self.value, b), self.field)

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field.sub(self.value, b), self.field)

    def __rsub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field.sub(b, self.value), self.field)

    def __neg__(self):
        return FieldElement(self.field.neg(self.value), self.field)

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field.mul(self.value, b), self.field)

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(
            self.field.mul(self.value, self.field.inv(b)), self.field
        )

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field.inv(self.value), self.field)

    def sqrt(self) -> Optional["FieldElement"]:
        r = self.field.sqrt(self.value)
        return None if r is None else FieldElement(r, self.field)

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field.q == other.field.q and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.field.q
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.value, self.field.q))

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"FieldElement({self.value}, q={self.field.q})"


def f_add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def f_sub(a: FieldElement, b: FieldElement) -> FieldElement:
    return a - b


def f_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def f_inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def f_sqrt(a: FieldElement) -> Optional[FieldElement]:
    return a.sqrt()
