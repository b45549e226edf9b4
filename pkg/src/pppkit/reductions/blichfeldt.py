"""Reductions through BLICHFELDT: from pigeonhole, to pigeonhole, and from Minkowski."""
from __future__ import annotations

from typing import Sequence

from ..bits import bc, bd, bits_for
from ..builder import ZERO, Builder, msb_first
from ..circuit import Circuit
from ..errors import ParameterError
from ..instances import (
    Blichfeldt,
    CollisionPair,
    InvalidWitness,
    LatticePair,
    LatticePoint,
    Minkowski,
    PigeonholeCircuit,
    Preimage,
    Solution,
    TrivialZero,
)
from ..lattice import box_unrank, box_width, iroot, qary_basis
from ..zqlin import ZqMatrix
from .base import Forwarded


def pigeonhole_to_blichfeldt(inst: PigeonholeCircuit) -> Forwarded:
    """``S = {[x; C(x)]}`` against the lattice of vectors whose second half is even."""
    c, n = inst.circuit, inst.n
    a = ZqMatrix(2, tuple(tuple(1 if j == n + i else 0 for j in range(2 * n)) for i in range(n)))
    value_fn = Circuit(n, c.nodes, tuple(range(n)) + c.outputs)
    target = Blichfeldt(qary_basis(a), 1 << n, value_fn, 1)
    return Forwarded("pigeonhole_to_blichfeldt", inst, target, {"n": n})


def back_pigeonhole_to_blichfeldt(fwd: Forwarded, sol: Solution) -> Solution:
    n = fwd.layout["n"]
    if isinstance(sol, LatticePoint):
        return Preimage(tuple(int(v) for v in sol.v[:n]))
    if isinstance(sol, LatticePair):
        return CollisionPair(tuple(int(v) for v in sol.x[:n]), tuple(int(v) for v in sol.y[:n]))
    raise ParameterError(f"unexpected Blichfeldt solution {type(sol).__name__} for an injective value map")


# -- Blichfeldt into pigeonhole ------------------------------------------------------


def coset_index_word(bld: Builder, coords: Sequence[Sequence[int]], u_inv, radices: Sequence[int], width: int) -> list[int]:
    """Mixed-radix rank of ``(U^-1 v mod d_i)_i`` for unsigned LSB-first coordinate words."""
    acc: list[int] = []
    for row, radix in zip(u_inv, radices):
        if radix == 1:
            continue
        terms = [(bit, (coef << j) % radix) for coef, word in zip(row, coords) for j, bit in enumerate(word)]
        digit = bld.dot_mod(terms, radix)
        acc = bld.trim(bld.add(bld.mul_const(acc, radix), digit))
    return bld.pad(acc, width)


def blichfeldt_to_pigeonhole(inst: Blichfeldt) -> Forwarded:
    det = inst.det
    if inst.s < det:
        return Forwarded("blichfeldt_to_pigeonhole", inst, None, {"trivial": True})
    ix = inst.indexer
    width = bits_for(det)
    bld = Builder(width)
    x = bld.input_word(0, width)
    vf = inst.value_fn
    # value function inputs are MSB-first; widen x with leading zeros
    wires = [ZERO] * (vf.num_inputs - width) + msb_first(x)
    v_bits = bld.inline(vf, wires)
    w = inst.coord_width
    coords = [list(reversed(v_bits[i * w : (i + 1) * w])) for i in range(inst.dim)]
    index = coset_index_word(bld, coords, ix.U_inverse, ix.radices, width)
    passthrough = bld.ge_const(x, det)
    out = bld.mux_word(passthrough, x, index)
    target = PigeonholeCircuit(bld.build(msb_first(out)))
    return Forwarded("blichfeldt_to_pigeonhole", inst, target, {"trivial": False, "width": width, "det": det})


def back_blichfeldt_to_pigeonhole(fwd: Forwarded, sol: Solution | None) -> Solution:
    if fwd.layout.get("trivial"):
        return TrivialZero()
    src: Blichfeldt = fwd.source
    if isinstance(sol, Preimage):
        z = bc(sol.x)
        return LatticePoint(src.value(z), z)
    if isinstance(sol, CollisionPair):
        z, w = bc(sol.x), bc(sol.y)
        vz, vw = src.value(z), src.value(w)
        if vz == vw:
            return InvalidWitness(z, w)
        return LatticePair(vz, vw, (z, w))
    raise ParameterError(f"unexpected pigeonhole solution {type(sol).__name__}")


def native_blichfeldt_to_pigeonhole(fwd: Forwarded, x: Sequence[int]) -> tuple[int, ...]:
    src: Blichfeldt = fwd.source
    det, width = fwd.layout["det"], fwd.layout["width"]
    z = bc(x)
    if z >= det:
        return tuple(int(b) for b in x)
    return bd(src.indexer.index(src.value(z)), width)


# -- Minkowski into Blichfeldt -------------------------------------------------------


def shifted_cube_value_circuit(bound: int, dim: int) -> tuple[Circuit, int, int]:
    """``z -> unrank(z + 1)`` over ``[0, bound]^dim``; returns (circuit, s, coordinate width)."""
    bounds = [bound] * dim
    s = (bound + 1) ** dim - 1
    m = bits_for(s)
    width = box_width(bounds)
    bld = Builder(m)
    z = bld.add(bld.input_word(0, m), bld.const_word(1, 1))
    coords = box_unrank(bld, z, bounds, width)
    return bld.build([w for c in coords for w in msb_first(c[:width])]), s, width


def minkowski_to_blichfeldt(inst: Minkowski) -> Forwarded:
    ell = iroot(inst.det, inst.dim)
    vf, s, width = shifted_cube_value_circuit(ell, inst.dim)
    target = Blichfeldt(inst.basis, s, vf, width)
    return Forwarded("minkowski_to_blichfeldt", inst, target, {"ell": ell})


def back_minkowski_to_blichfeldt(fwd: Forwarded, sol: Solution) -> Solution:
    if isinstance(sol, LatticePoint):
        return LatticePoint(tuple(int(v) for v in sol.v))
    if isinstance(sol, LatticePair):
        return LatticePoint(tuple(int(a) - int(b) for a, b in zip(sol.x, sol.y)))
    raise ParameterError(f"unexpected Blichfeldt solution {type(sol).__name__} for a box without repeats")
