"""Network topologies and the first-bit-zero string encoding."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

ENCODING_NAME = "first-bit-zero, big-endian y-1"


def _check_nm(n: int, m: int) -> None:
    if int(n) != n or int(m) != m:
        raise ValueError("n and m must be integers")
    if n < 2 or m < 2:
        raise ValueError(f"need n >= 2 and m >= 2, got n={n}, m={m}")


@dataclass(frozen=True)
class StarScenario:
    """n edge parties, each linked to the central party by its own source."""

    n: int
    m: int

    def __post_init__(self):
        _check_nm(self.n, self.m)

    @property
    def parties(self) -> int:
        return self.n + 1


@dataclass(frozen=True)
class ChainScenario:
    """n sources on a line: Alice, n-1 middle parties, Charlie."""

    n: int
    m: int

    def __post_init__(self):
        _check_nm(self.n, self.m)

    @property
    def parties(self) -> int:
        return self.n + 1


@dataclass(frozen=True)
class BitStringEncoding:
    m: int
    strings: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.strings)

    @property
    def signs(self) -> np.ndarray:
        """(2**(m-1), m) array of (-1)**bit; row y-1, column x-1."""
        return 1 - 2 * np.array(self.strings, dtype=np.int64)


@lru_cache(maxsize=None)
def encode(m: int) -> BitStringEncoding:
    """All m-bit strings whose first bit is 0, ordered by the value of y-1."""
    if m < 2:
        raise ValueError(f"encoding needs m >= 2, got {m}")
    strings = tuple(
        (0,) + tuple((y >> (m - 2 - i)) & 1 for i in range(m - 1)) for y in range(2 ** (m - 1))
    )
    return BitStringEncoding(m, strings)


def sign(enc: BitStringEncoding, y: int, x: int) -> int:
    """(-1) raised to bit x of string y (both 1-based)."""
    if not 1 <= y <= len(enc.strings):
        raise IndexError(f"y={y} outside [1, {len(enc.strings)}]")
    if not 1 <= x <= enc.m:
        raise IndexError(f"x={x} outside [1, {enc.m}]")
    return -1 if enc.strings[y - 1][x - 1] else 1


def wrap_next(x: int, m: int) -> tuple[int, int]:
    """Index and sign of the successor of x in a chained sequence.

    The successor of m is 1 with a sign flip (A_{m+1} = -A_1).
    """
    return (x + 1, 1) if x < m else (1, -1)
