"""DLOG into PIGEONHOLE CIRCUIT by square-and-multiply over the operation circuit."""
from __future__ import annotations

from typing import Sequence

from ..bits import bc, bd
from ..builder import Builder, msb_first
from ..errors import ParameterError
from ..instances import CollisionPair, Dlog, PigeonholeCircuit, Preimage, Solution
from .base import Forwarded


def dlog_to_pigeonhole(inst: Dlog) -> Forwarded:
    """``C(x) = (g^x mod s - y) mod s`` for ``x < s`` and ``C(x) = x`` otherwise.

    Both branches are injective on their own ranges, so the only collisions
    come from repeated powers.
    """
    n, s = inst.width, inst.s
    bld = Builder(n)
    x = bld.input_word(0, n)

    def op(a: list[int], b: list[int]) -> list[int]:
        return list(reversed(bld.inline(inst.f, msb_first(a) + msb_first(b))))

    acc = bld.const_word(inst.identity, n)
    base = bld.const_word(inst.g, n)
    for i in range(n):
        acc = bld.mux_word(x[i], op(acc, base), acc)
        if i + 1 < n:
            base = op(base, base)
    power = bld.pad(bld.mod_const(acc, s), n)
    diff = bld.pad(bld.sub_mod(power, bld.const_word(inst.y, n), s), n)
    out = bld.mux_word(bld.ge_const(x, s), x, diff)
    return Forwarded("dlog_to_pigeonhole", inst, PigeonholeCircuit(bld.build(msb_first(out))), {})


def back_dlog_to_pigeonhole(fwd: Forwarded, sol: Solution) -> Solution:
    if isinstance(sol, Preimage):
        return Preimage(bc(sol.x))
    if isinstance(sol, CollisionPair):
        return CollisionPair(bc(sol.x), bc(sol.y))
    raise ParameterError(f"unexpected pigeonhole solution {type(sol).__name__}")


def native_dlog_to_pigeonhole(fwd: Forwarded, x: Sequence[int]) -> tuple[int, ...]:
    src: Dlog = fwd.source
    e = bc(x)
    if e >= src.s:
        return tuple(int(b) for b in x)
    return bd((src.power(e) - src.y) % src.s, src.width)
