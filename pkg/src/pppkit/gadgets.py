"""Standalone arithmetic gadget circuits over fixed constants.

Every operand and result is most-significant-first at the circuit boundary.
"""
from __future__ import annotations

from math import prod
from typing import Sequence

from .bits import bits_for
from .builder import Builder, msb_first
from .circuit import Circuit
from .errors import InputArityError, ParameterError, WidthError


def _residue_width(q: int) -> int:
    return max(1, (q - 1).bit_length())


def _check_fits(value: int, width: int) -> None:
    if value < 0 or value >> width:
        need = max(1, value.bit_length())
        raise WidthError(f"{value} needs {need} bits, width is {width}", need)


def dot_product_mod(constants: Sequence[int], width: int, q: int) -> Circuit:
    """Circuit for ``sum(c_i * op_i) mod q`` over ``len(constants)`` operands."""
    if width < 1:
        raise InputArityError("operands need a positive width")
    if q < 2:
        raise ParameterError("modulus must be at least 2")
    b = Builder(len(constants) * width)
    terms = []
    for i, c in enumerate(constants):
        word = b.input_word(i * width, width)
        for j, bit in enumerate(word):
            terms.append((bit, (c << j) % q))
    acc = b.dot_mod(terms, q)
    return b.build(msb_first(b.pad(acc, _residue_width(q))))


def mixed_radix_index(radices: Sequence[int]) -> Circuit:
    """Lexicographic rank of a digit vector, first digit most significant."""
    if not radices or any(d < 1 for d in radices):
        raise ParameterError("radices must be positive")
    widths = [bits_for(d) for d in radices]
    b = Builder(sum(widths))
    out_width = bits_for(prod(radices))
    acc: list[int] = []
    start = 0
    for d, w in zip(radices, widths):
        digit = b.input_word(start, w)
        start += w
        acc = b.add(b.mul_const(acc, d), digit if d > 1 else [])
        acc = b.trim(acc)[:out_width]
    return b.build(msb_first(b.pad(acc, out_width)))


def compare_const(c: int, width: int) -> Circuit:
    """Single output: ``x >= c``."""
    _check_fits(c, width)
    b = Builder(width)
    return b.build([b.ge_const(b.input_word(0, width), c)])


def mux(width: int) -> Circuit:
    """Inputs ``(sel, a, b)``; outputs ``a`` if sel else ``b``."""
    if width < 1:
        raise InputArityError("operands need a positive width")
    b = Builder(1 + 2 * width)
    a_word = b.input_word(1, width)
    b_word = b.input_word(1 + width, width)
    return b.build(msb_first(b.mux_word(0, a_word, b_word)))


def abs_diff(y: int, width: int) -> Circuit:
    """``|x - y|`` for a constant ``y``."""
    _check_fits(y, width)
    b = Builder(width)
    x = b.input_word(0, width)
    cy = b.const_word(y, width)
    d1, borrow = b.sub(x, cy)
    d2, _ = b.sub(cy, x)
    return b.build(msb_first(b.mux_word(borrow, d2, d1)))


def mod_const(c: int, width: int) -> Circuit:
    """``x mod c`` for a positive constant."""
    if c < 1:
        raise ParameterError("modulus must be positive")
    if width < 1:
        raise InputArityError("operands need a positive width")
    b = Builder(width)
    rem = b.mod_const(b.input_word(0, width), c)
    return b.build(msb_first(b.pad(rem, _residue_width(c))))


__all__ = ["dot_product_mod", "mixed_radix_index", "compare_const", "mux", "abs_diff", "mod_const"]
