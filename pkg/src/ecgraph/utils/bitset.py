"""Integer-backed bitsets: bit i of a Python int is vertex i."""
from __future__ import annotations

from collections.abc import Iterable, Iterator


def make_bitset(indexes: Iterable[int]) -> int:
    value = 0
    for idx in indexes:
        value |= 1 << idx
    return value


def full_bitset(n: int) -> int:
    return (1 << n) - 1


def count_bits(value: int) -> int:
    return value.bit_count()


def lowest_index(value: int) -> int:
    """Index of the lowest set bit; -1 for the empty set."""
    if not value:
        return -1
    return (value & -value).bit_length() - 1


def iter_indexes(value: int) -> Iterator[int]:
    while value:
        low = value & -value
        yield low.bit_length() - 1
        value ^= low


def rotate_left(value: int, shift: int, n: int) -> int:
    """Cyclic shift of an n-bit set: bit i moves to bit (i + shift) mod n."""
    shift %= n
    if not shift:
        return value
    mask = full_bitset(n)
    return ((value << shift) | (value >> (n - shift))) & mask
