"""Modular arithmetic for G_{q^e}: primality, Legendre/Jacobi symbols, the
quadratic character chi_{q^e}, unit squares and quadratic Gauss sums."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import FrozenSet

import numpy as np

from ..state.schema import GraphParams

logger = logging.getLogger(__name__)

# Deterministic for every m < 3.3e24, which covers 64-bit inputs.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(m: int) -> bool:
    """Deterministic Miller-Rabin."""
    if m < 2:
        return False
    for p in _MR_BASES:
        if m % p == 0:
            return m == p
    d, s = m - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
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


def is_pythagorean_prime(m: int) -> bool:
    return m % 4 == 1 and is_prime(m)


def next_pythagorean_prime(m: int) -> int:
    """Smallest Pythagorean prime strictly greater than m."""
    c = max(m + 1, 5)
    c += (1 - c) % 4
    while not is_prime(c):
        c += 4
    return c


def legendre_symbol(a: int, q: int) -> int:
    """(a/q) by Euler's criterion."""
    if q < 3 or q % 2 == 0 or not is_prime(q):
        raise ValueError(f"legendre_symbol needs an odd prime modulus, got q={q}")
    r = pow(a % q, (q - 1) // 2, q)
    return -1 if r == q - 1 else r


def jacobi_symbol(a: int, m: int) -> int:
    """(a/m) for odd m >= 1, by quadratic reciprocity."""
    if m < 1 or m % 2 == 0:
        raise ValueError(f"jacobi_symbol needs an odd positive modulus, got m={m}")
    a %= m
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if m % 8 in (3, 5):
                result = -result
        a, m = m, a
        if a % 4 == 3 and m % 4 == 3:
            result = -result
        a %= m
    return result if m == 1 else 0


def quadratic_character(x: int, params: GraphParams) -> int:
    """chi_{q^e}(x) = (x/q)^e."""
    return legendre_symbol(x % params.q, params.q) ** params.e


@dataclass(frozen=True)
class QuadraticCharacter:
    """chi_{q^e} tabulated over Z_n (read-only int8 array)."""

    params: GraphParams
    table: np.ndarray

    def __call__(self, x: int) -> int:
        return int(self.table[x % self.params.n])

    def at(self, xs: np.ndarray) -> np.ndarray:
        """Vectorised lookup; `xs` may be any integers, reduced mod n here."""
        return self.table[np.mod(xs, self.params.n)]


@lru_cache(maxsize=64)
def character_table(params: GraphParams) -> QuadraticCharacter:
    q, n = params.q, params.n
    base = np.zeros(q, dtype=np.int8)
    squares = np.unique(np.arange(1, q, dtype=np.int64) ** 2 % q)
    base[1:] = -1
    base[squares] = 1
    # conductor q: chi_{q^e}(x) depends on x mod q only
    table = base[np.arange(n, dtype=np.int64) % q]
    table.setflags(write=False)
    logger.debug("Built character table for %s (n=%s)", params.label(), n)
    return QuadraticCharacter(params=params, table=table)


@lru_cache(maxsize=64)
def unit_squares(params: GraphParams) -> FrozenSet[int]:
    """Q = {u^2 mod n : gcd(u, q) = 1}."""
    n, q = params.n, params.q
    if n > 3_000_000_000:
        raise ValueError(f"unit_squares works on n <= 3e9, got n={n}")
    u = np.arange(n, dtype=np.int64)
    u = u[u % q != 0]
    return frozenset(int(s) for s in np.unique(u * u % n))


def gauss_sum(b: int, q: int, k: int) -> complex:
    """Direct summation of sum_{x in Z_{q^k}} exp(2 pi i b x^2 / q^k).

    Real and imaginary parts are accumulated with math.fsum.
    """
    if k < 1:
        raise ValueError(f"gauss_sum needs k >= 1, got k={k}")
    if math.gcd(b, q) != 1:
        raise ValueError(f"gauss_sum needs gcd(b, q) = 1, got b={b}, q={q}")
    m = q**k
    x = np.arange(m, dtype=np.int64)
    r = (x * x) % m
    r = (r * (b % m)) % m
    angles = (2.0 * np.pi / m) * r
    return complex(math.fsum(np.cos(angles)), math.fsum(np.sin(angles)))


def gauss_sum_closed_form(b: int, q: int, k: int) -> float:
    """(b/q^k) * sqrt(q^k), valid for q ≡ 1 (mod 4)."""
    m = q**k
    return jacobi_symbol(b, m) * math.sqrt(m)
