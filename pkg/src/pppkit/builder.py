"""Word-level circuit construction with constant folding.

Wires are node ids, or the constants ``ZERO`` / ``ONE``. Words are lists of
wires, least-significant bit first. Circuit inputs and outputs are
most-significant-first, so use :meth:`Builder.input_word` and
:func:`msb_first` at the boundary.
"""
from __future__ import annotations

from typing import Sequence

from .circuit import AND, CONST1, NOT, OR, XOR, Circuit, Gate
from .errors import InputArityError, WidthError

ZERO = -1
ONE = -2

Word = list


def msb_first(word: Sequence[int]) -> list[int]:
    return list(reversed(word))


class Builder:
    def __init__(self, num_inputs: int):
        self.num_inputs = num_inputs
        self.gates: list[Gate] = []
        self._cache: dict[tuple, int] = {}

    # -- single bits -------------------------------------------------------

    def _emit(self, kind: str, a: int, b: int | None = None) -> int:
        key = (kind, a, b)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        self.gates.append(Gate(kind, a, b))
        nid = self.num_inputs + len(self.gates) - 1
        self._cache[key] = nid
        return nid

    def inputs(self) -> list[int]:
        return list(range(self.num_inputs))

    def input_word(self, start: int, width: int) -> Word:
        """Inputs ``start..start+width-1`` (MSB first) as an LSB-first word."""
        return list(reversed(range(start, start + width)))

    def not_(self, a: int) -> int:
        if a == ZERO:
            return ONE
        if a == ONE:
            return ZERO
        return self._emit(NOT, a)

    def and_(self, a: int, b: int) -> int:
        if a == ZERO or b == ZERO:
            return ZERO
        if a == ONE:
            return b
        if b == ONE or a == b:
            return a
        return self._emit(AND, min(a, b), max(a, b))

    def or_(self, a: int, b: int) -> int:
        if a == ONE or b == ONE:
            return ONE
        if a == ZERO:
            return b
        if b == ZERO or a == b:
            return a
        return self._emit(OR, min(a, b), max(a, b))

    def xor(self, a: int, b: int) -> int:
        if a == ZERO:
            return b
        if b == ZERO:
            return a
        if a == ONE:
            return self.not_(b)
        if b == ONE:
            return self.not_(a)
        if a == b:
            return ZERO
        return self._emit(XOR, min(a, b), max(a, b))

    def mux(self, sel: int, a: int, b: int) -> int:
        """``a`` if sel else ``b``."""
        if a == b:
            return a
        return self.xor(b, self.and_(sel, self.xor(a, b)))

    def any_(self, bits: Sequence[int]) -> int:
        acc = ZERO
        for b in bits:
            acc = self.or_(acc, b)
        return acc

    def all_(self, bits: Sequence[int]) -> int:
        acc = ONE
        for b in bits:
            acc = self.and_(acc, b)
        return acc

    # -- words -------------------------------------------------------------

    @staticmethod
    def const_word(value: int, width: int) -> Word:
        if value < 0 or value >> width:
            raise WidthError(f"constant {value} needs more than {width} bits", value.bit_length())
        return [ONE if (value >> i) & 1 else ZERO for i in range(width)]

    @staticmethod
    def pad(word: Sequence[int], width: int) -> Word:
        return list(word[:width]) + [ZERO] * (width - len(word))

    @staticmethod
    def trim(word: Sequence[int]) -> Word:
        w = list(word)
        while w and w[-1] == ZERO:
            w.pop()
        return w

    def add(self, a: Sequence[int], b: Sequence[int], width: int | None = None) -> Word:
        """Ripple-carry sum; full width unless truncated to ``width``."""
        n = max(len(a), len(b))
        a, b = self.pad(a, n), self.pad(b, n)
        out = []
        carry = ZERO
        limit = n if width is None else min(n, width)
        for i in range(limit):
            t = self.xor(a[i], b[i])
            out.append(self.xor(t, carry))
            if i + 1 < limit or width is None or width > n:
                carry = self.or_(self.and_(a[i], b[i]), self.and_(carry, t))
        if width is None:
            out.append(carry)
        elif width > n:
            out.append(carry)
            out.extend([ZERO] * (width - n - 1))
        return out

    def sub(self, a: Sequence[int], b: Sequence[int]) -> tuple[Word, int]:
        """``a - b`` modulo ``2**w`` and the borrow bit (1 iff a < b)."""
        n = max(len(a), len(b))
        a, b = self.pad(a, n), self.pad(b, n)
        out = []
        borrow = ZERO
        for i in range(n):
            t = self.xor(a[i], b[i])
            out.append(self.xor(t, borrow))
            na = self.not_(a[i])
            borrow = self.or_(self.and_(na, b[i]), self.and_(borrow, self.not_(t)))
        return out, borrow

    def ge(self, a: Sequence[int], b: Sequence[int]) -> int:
        return self.not_(self.sub(a, b)[1])

    def ge_const(self, a: Sequence[int], c: int) -> int:
        if c <= 0:
            return ONE
        if c >> len(a):
            return ZERO
        return self.ge(a, self.const_word(c, len(a)))

    def eq_const(self, a: Sequence[int], c: int) -> int:
        if c < 0 or c >> len(a):
            return ZERO
        bits = [a[i] if (c >> i) & 1 else self.not_(a[i]) for i in range(len(a))]
        return self.all_(bits)

    def mux_word(self, sel: int, a: Sequence[int], b: Sequence[int]) -> Word:
        n = max(len(a), len(b))
        a, b = self.pad(a, n), self.pad(b, n)
        return [self.mux(sel, x, y) for x, y in zip(a, b)]

    def mask_word(self, bit: int, a: Sequence[int]) -> Word:
        return [self.and_(bit, x) for x in a]

    def mul_const(self, a: Sequence[int], c: int) -> Word:
        if c < 0:
            raise WidthError("negative multiplier")
        acc: Word = []
        shift = 0
        while c:
            if c & 1:
                acc = self.add(acc, [ZERO] * shift + list(a))
            c >>= 1
            shift += 1
        return self.trim(acc)

    def mul(self, a: Sequence[int], b: Sequence[int]) -> Word:
        acc: Word = []
        for i, bit in enumerate(b):
            acc = self.add(acc, [ZERO] * i + self.mask_word(bit, a))
        return acc

    def cond_sub_const(self, a: Sequence[int], c: int) -> tuple[Word, int]:
        """``a - c`` if ``a >= c`` else ``a``; also returns the comparison bit."""
        if c >> len(a):
            return list(a), ZERO
        diff, borrow = self.sub(a, self.const_word(c, len(a)))
        keep = self.not_(borrow)
        return self.mux_word(keep, diff, a), keep

    def divmod_const(self, a: Sequence[int], c: int) -> tuple[Word, Word]:
        """Restoring division by a positive constant."""
        if c <= 0:
            raise WidthError("divisor must be positive")
        a = list(a)
        cw = c.bit_length()
        if c & (c - 1) == 0:
            k = cw - 1
            return a[k:], self.pad(a, k)
        quotient = [ZERO] * max(0, len(a) - cw + 1)
        rem = a
        for shift in range(len(a) - cw, -1, -1):
            rem, bit = self.cond_sub_const(rem, c << shift)
            quotient[shift] = bit
        return quotient, self.pad(rem, (c - 1).bit_length())[: (c - 1).bit_length()]

    def mod_const(self, a: Sequence[int], c: int) -> Word:
        return self.divmod_const(a, c)[1]

    def add_mod(self, a: Sequence[int], b: Sequence[int], q: int) -> Word:
        """Sum of two residues in ``[0, q)``."""
        w = (q - 1).bit_length()
        if q & (q - 1) == 0:
            return self.add(a, b, width=w)
        s = self.add(a, b)
        return self.pad(self.cond_sub_const(s, q)[0], w)[:w]

    def sub_mod(self, a: Sequence[int], b: Sequence[int], q: int) -> Word:
        """Difference of two residues in ``[0, q)``."""
        w = max(1, (q - 1).bit_length())
        a, b = self.pad(a, w), self.pad(b, w)
        diff, borrow = self.sub(a, b)
        if q & (q - 1) == 0:
            return diff
        wrapped = self.add(diff, self.const_word(q % (1 << w), w), width=w)
        return self.mux_word(borrow, wrapped, diff)

    def dot_mod(self, terms: Sequence[tuple[int, int]], q: int) -> Word:
        """``sum(c * bit) mod q`` over (bit, constant) pairs."""
        w = (q - 1).bit_length()
        acc: Word = [ZERO] * w
        power_of_two = q & (q - 1) == 0
        for bit, c in terms:
            c %= q
            if c == 0 or bit == ZERO:
                continue
            term = self.mask_word(bit, self.const_word(c, w))
            if power_of_two:
                acc = self.add(acc, term, width=w)
            else:
                s = self.add(acc, term)
                acc = self.pad(self.cond_sub_const(s, q)[0], w)[:w]
        return acc

    def inline(self, c: Circuit, wires: Sequence[int]) -> list[int]:
        """Copy ``c`` with its inputs bound to ``wires``; returns its output wires."""
        if len(wires) != c.num_inputs:
            raise InputArityError(f"subcircuit expects {c.num_inputs} wires, got {len(wires)}")
        where = list(wires)
        for g in c.nodes:
            k = g.kind
            a = where[g.pred1] if g.pred1 is not None else None
            b = where[g.pred2] if g.pred2 is not None else None
            if k == AND:
                v = self.and_(a, b)
            elif k == OR:
                v = self.or_(a, b)
            elif k == XOR:
                v = self.xor(a, b)
            elif k == "NAND":
                v = self.not_(self.and_(a, b))
            elif k == "NOR":
                v = self.not_(self.or_(a, b))
            elif k == NOT:
                v = self.not_(a)
            elif k == "ID":
                v = a
            else:
                v = ONE
            where.append(v)
        return [where[o] for o in c.outputs]

    def build(self, outputs: Sequence[int]) -> Circuit:
        """Freeze into a Circuit, materializing any constant outputs."""
        outs = list(outputs)
        if any(o < 0 for o in outs):
            if self.num_inputs:
                zero = self.num_inputs + len(self.gates)
                self.gates.append(Gate(XOR, 0, 0))
                one = zero + 1
                self.gates.append(Gate(NOT, zero))
            else:
                one = self.num_inputs + len(self.gates)
                self.gates.append(Gate(CONST1))
                zero = one + 1
                self.gates.append(Gate(NOT, one))
            outs = [zero if o == ZERO else one if o == ONE else o for o in outs]
        return Circuit(self.num_inputs, tuple(self.gates), tuple(outs))
