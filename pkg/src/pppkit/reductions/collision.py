"""Reductions among COLLISION variants and the gadget hash."""
from __future__ import annotations

from typing import Sequence

from .. import crhash
from ..builder import ZERO, Builder
from ..circuit import Circuit, append_nonzero_flag, eliminate_const1, evaluate, rewrite_to_xor_or_basis
from ..crhash import HashKey, HashParams
from ..errors import ParameterError, PreconditionError
from ..instances import Collision, CollisionPair, Solution, WeakCsis
from .base import Forwarded
from .csis import affine_hash_circuit, encode_circuit, input_bits


def _bits(v: Sequence[int]) -> tuple[int, ...]:
    return tuple(int(b) for b in v)


def padded(c: Circuit) -> Circuit:
    """``c`` with zero outputs appended up to ``num_inputs - 1``."""
    n = c.num_inputs
    bld = Builder(n)
    outs = bld.inline(c, bld.inputs()) + [ZERO] * (n - 1 - c.num_outputs)
    return bld.build(outs)


def collision_shrink(inst: Collision) -> Forwarded:
    """``C'(x, b) = P(P(x), b)`` where ``P`` pads ``C`` to ``n - 1`` outputs."""
    pad = padded(inst.circuit)
    n = inst.n
    bld = Builder(n + 1)
    inner = bld.inline(pad, bld.inputs()[:n])
    outer = bld.inline(pad, inner + [n])
    return Forwarded("collision_shrink", inst, Collision(bld.build(outer)), {"n": n})


def back_collision_shrink(fwd: Forwarded, sol: Solution) -> Solution:
    if not isinstance(sol, CollisionPair):
        raise ParameterError(f"unexpected solution {type(sol).__name__}")
    n = fwd.layout["n"]
    pad = padded(fwd.source.circuit)
    x1, x2 = _bits(sol.x[:n]), _bits(sol.y[:n])
    y1 = evaluate(pad, x1) + (int(sol.x[n]),)
    y2 = evaluate(pad, x2) + (int(sol.y[n]),)
    if y1 != y2:
        return CollisionPair(y1, y2)
    return CollisionPair(x1, x2)


def flagged_xor_or_circuit(c: Circuit) -> Circuit:
    """Rewrite over XOR/OR, replace the constant by the OR of the inputs, add that OR as an output."""
    return append_nonzero_flag(eliminate_const1(rewrite_to_xor_or_basis(c)))


def collision_to_weakcsis(inst: Collision, ell: int = 2) -> Forwarded:
    if inst.m != inst.n - 2:
        raise PreconditionError("source circuit must have exactly n - 2 outputs")
    flagged = flagged_xor_or_circuit(inst.circuit)
    A, G, b, layout = encode_circuit(flagged, ell)
    if any(b):
        raise AssertionError("XOR/OR encodings are homogeneous")
    r = flagged.num_outputs
    params = HashParams(k=G.shape.k, ell=ell, d=G.shape.d, r=r)
    return Forwarded("collision_to_weakcsis", inst, WeakCsis(HashKey(params, A, G)), layout)


def back_collision_to_weakcsis(fwd: Forwarded, sol: Solution) -> Solution:
    if not isinstance(sol, CollisionPair):
        raise ParameterError(f"unexpected solution {type(sol).__name__}")
    key: HashKey = fwd.target.key
    full = [crhash.completion(key, _bits(v)) + _bits(v) for v in (sol.x, sol.y)]
    x1, x2 = (input_bits(fwd.layout, s) for s in full)
    if not any(x1) or not any(x2):
        raise AssertionError("the nonzero flag rules out the zero input")
    return CollisionPair(x1, x2)


def weakcsis_to_collision(inst: WeakCsis) -> Forwarded:
    key = inst.key
    c = affine_hash_circuit(key.A, key.G, (0,) * key.params.d, key.params.k)
    return Forwarded("weakcsis_to_collision", inst, Collision(c), {})


def back_weakcsis_to_collision(fwd: Forwarded, sol: Solution) -> Solution:
    if not isinstance(sol, CollisionPair):
        raise ParameterError(f"unexpected solution {type(sol).__name__}")
    return CollisionPair(_bits(sol.x), _bits(sol.y))


def native_weakcsis_to_collision(fwd: Forwarded, x: Sequence[int]) -> tuple[int, ...]:
    return crhash.evaluate(fwd.source.key, _bits(x))
