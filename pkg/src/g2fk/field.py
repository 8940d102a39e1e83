"""Arithmetic in the prime field F_p."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Literal

import numpy as np

from . import MAX_PRIME, ModelError

Op = Literal["add", "sub", "mul", "div", "pow", "neg", "inv"]


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


def check_prime(p: int, *, minimum: int = 3) -> int:
    """Validate the modulus used throughout the toolkit."""
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)) or p == 2:
        raise ValueError(f"p must be an odd prime, got {p!r}")
    if p > MAX_PRIME:
        raise ValueError(f"p={p} exceeds the supported maximum {MAX_PRIME}")
    if p < minimum:
        raise ModelError(f"model requires p >= {minimum}")
    return int(p)


@dataclass(frozen=True, slots=True)
class FieldScalar:
    value: int
    p: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", int(self.value) % self.p)

    def _coerce(self, other: FieldScalar | int) -> FieldScalar:
        if isinstance(other, FieldScalar):
            if other.p != self.p:
                raise ValueError(f"modulus mismatch: {self.p} vs {other.p}")
            return other
        return FieldScalar(int(other), self.p)

    def __add__(self, other: FieldScalar | int) -> FieldScalar:
        return FieldScalar(self.value + self._coerce(other).value, self.p)

    __radd__ = __add__

    def __sub__(self, other: FieldScalar | int) -> FieldScalar:
        return FieldScalar(self.value - self._coerce(other).value, self.p)

    def __rsub__(self, other: FieldScalar | int) -> FieldScalar:
        return self._coerce(other) - self

    def __mul__(self, other: FieldScalar | int) -> FieldScalar:
        return FieldScalar(self.value * self._coerce(other).value, self.p)

    __rmul__ = __mul__

    def __neg__(self) -> FieldScalar:
        return FieldScalar(-self.value, self.p)

    def inverse(self) -> FieldScalar:
        if self.value == 0:
            raise ZeroDivisionError(f"0 has no inverse mod {self.p}")
        return FieldScalar(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other: FieldScalar | int) -> FieldScalar:
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other: FieldScalar | int) -> FieldScalar:
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int) -> FieldScalar:
        if k < 0:
            return self.inverse() ** (-k)
        return FieldScalar(pow(self.value, k, self.p), self.p)

    def __int__(self) -> int:
        return self.value

    def __bool__(self) -> bool:
        return self.value != 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FieldScalar):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.value, self.p))

    def lift(self) -> int:
        """Representative in (-p/2, p/2]."""
        return self.value if self.value <= self.p // 2 else self.value - self.p

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.p})"


def field_arith(a: FieldScalar, b: FieldScalar | int | None, op: Op) -> FieldScalar:
    """Dispatch a named field operation; unary ops ignore ``b`` (pow takes an int exponent)."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "pow":
        return a ** int(b)
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    raise ValueError(f"unknown field op {op!r}")


def binom3(a: int, p: int) -> FieldScalar:
    """C(3, a) as a field scalar; the denominators of beta need it invertible."""
    if not 0 <= a <= 3:
        raise ValueError("a must lie in 0..3")
    if p == 3 and a in (1, 2):
        raise ModelError("model requires p >= 5")
    return FieldScalar(comb(3, a), p)


def inv_mod(x: int, p: int) -> int:
    if x % p == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {p}")
    return pow(int(x), -1, p)


@lru_cache(maxsize=None)
def inverse_table(p: int) -> np.ndarray:
    """inv[x] for x in F_p, with inv[0] = 0 as a sentinel."""
    table = np.zeros(p, dtype=np.int64)
    for x in range(1, p):
        table[x] = pow(x, -1, p)
    return table


def lift_symmetric(x: int, p: int) -> int:
    x %= p
    return x if x <= p // 2 else x - p


def crt_lift(residues: dict[int, int]) -> int:
    """Smallest-magnitude integer congruent to each residue, modulo the product of the primes."""
    from sympy.ntheory.modular import crt

    primes = list(residues)
    value, modulus = crt(primes, [residues[q] % q for q in primes])
    value, modulus = int(value), int(modulus)
    return value if value <= modulus // 2 else value - modulus


def rank_mod(matrix, p: int) -> int:
    """Rank over F_p."""
    from sympy import GF
    from sympy.polys.matrices import DomainMatrix

    rows = [[int(x) % p for x in row] for row in np.asarray(matrix)]
    return int(DomainMatrix.from_list(rows, GF(p)).rank())


def det_mod(matrix, p: int) -> int:
    from sympy import GF
    from sympy.polys.matrices import DomainMatrix

    rows = [[int(x) % p for x in row] for row in np.asarray(matrix)]
    return int(DomainMatrix.from_list(rows, GF(p)).det()) % p
