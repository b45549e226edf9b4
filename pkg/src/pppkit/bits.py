"""Bit composition and decomposition.

Bit strings are most-significant-first: ``bc((1, 0, 1)) == 5``.
"""
from __future__ import annotations

from typing import Iterable, Sequence

from .errors import RangeError


def bc(bits: Iterable[int] | str) -> int:
    """Compose a most-significant-first bit string into an integer."""
    value = 0
    for b in bits:
        bit = int(b)
        if bit not in (0, 1):
            raise RangeError(f"not a bit: {b!r}")
        value = (value << 1) | bit
    return value


def bd(n: int, width: int) -> tuple[int, ...]:
    """Decompose ``n`` into ``width`` bits, most-significant-first."""
    if width < 0 or n < 0 or n >> width:
        raise RangeError(f"{n} does not fit in {width} bits")
    return tuple((n >> (width - 1 - i)) & 1 for i in range(width))


def lsb_bits(n: int, width: int) -> tuple[int, ...]:
    """Least-significant-first decomposition (the order used against gadget vectors)."""
    return tuple(reversed(bd(n, width)))


def lsb_compose(bits: Sequence[int]) -> int:
    return bc(reversed(list(bits)))


def bits_for(count: int) -> int:
    """Bits needed to index ``count`` items, at least one."""
    if count < 1:
        raise RangeError("count must be positive")
    return max(1, (count - 1).bit_length())


def ceil_log2(x: int) -> int:
    """Smallest ``t`` with ``2**t >= x``."""
    if x < 1:
        raise RangeError("argument must be positive")
    return (x - 1).bit_length()


def to_bitstring(bits: Iterable[int]) -> str:
    return "".join(str(int(b)) for b in bits)


def from_bitstring(s: str) -> tuple[int, ...]:
    out = []
    for ch in s.strip():
        if ch not in "01":
            raise RangeError(f"invalid bit character {ch!r}")
        out.append(int(ch))
    return tuple(out)
