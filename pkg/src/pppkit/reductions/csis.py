"""Circuits to constrained modular systems and back."""
from __future__ import annotations

from typing import Sequence

from ..bits import bd
from ..builder import ONE, ZERO, Builder, msb_first
from ..circuit import AND, NAND, NOR, OR, XOR, Circuit, is_normalized
from ..errors import ParameterError, PreconditionError
from ..instances import CollisionPair, Csis, PigeonholeCircuit, Preimage, Solution
from ..zqlin import BinaryInvertible, GadgetShape, ZqMatrix, backsolve, matvec_mod
from .base import Forwarded

# Right-hand side and predecessor sign of each gate equation.
GATE_RHS = {NAND: 2, NOR: 3, XOR: 0, AND: 0, OR: 0}
GATE_SIGN = {NAND: -1, NOR: -1, XOR: -1, AND: -1, OR: 1}


def gate_equation_holds(kind: str, x: int, y: int, z: int, w: int) -> bool:
    """The mod-4 equation of a gate with inputs x, y, value z and auxiliary w."""
    sign = GATE_SIGN[kind]
    if kind == XOR:
        lhs = z + 2 * w + sign * (x + y)
    else:
        lhs = w + 2 * z + sign * (x + y)
    return lhs % 4 == GATE_RHS[kind]


def _cone(c: Circuit, out: int) -> list[tuple[str, int, int, int]]:
    """Gates feeding ``out`` as (kind, id, pred1, pred2), ascending ids.

    An output wired straight to an input gets a private ``OR(x, x)`` with id -1.
    """
    n = c.num_inputs
    if out < n:
        return [(OR, -1, out, out)]
    seen: set[int] = set()
    stack = [out]
    while stack:
        v = stack.pop()
        if v < n or v in seen:
            continue
        seen.add(v)
        stack.extend(c.nodes[v - n].preds)
    return [(c.nodes[v - n].kind, v, c.nodes[v - n].pred1, c.nodes[v - n].pred2) for v in sorted(seen)]


def encode_circuit(c: Circuit, ell: int) -> tuple[ZqMatrix, BinaryInvertible, tuple[int, ...], dict]:
    """Matrices ``A``, ``G`` and ``b`` whose binary solutions are evaluations of ``c``.

    Each output gets its own block of gate equations over the gates of its cone.
    Node columns run in reverse topological order with ``ell`` columns per node
    (auxiliary, value, then ``ell - 2`` carry columns; value first for XOR).
    The inputs follow as ``x_n .. x_1`` and then ``ell - 1`` blocks of
    ``num_outputs`` columns that ``A`` weights by ``2^j``.
    """
    if ell < 2:
        raise ParameterError("ell must be at least 2")
    if not is_normalized(c):
        raise PreconditionError("circuit must use only two-input NAND/NOR/XOR/AND/OR gates")
    n, outs = c.num_inputs, c.num_outputs
    q = 1 << ell
    cones = [_cone(c, o) for o in c.outputs]
    sizes = [len(cone) for cone in cones]
    d = sum(sizes)
    top = ell * d
    m = top + n + (ell - 1) * outs
    x_col = [top + (n - 1 - j) for j in range(n)]
    aux_cols = [[top + n + (j - 1) * outs + i for j in range(1, ell)] for i in range(outs)]

    g_rows: list[list[int]] = []
    b: list[int] = []
    k_cols: list[int] = []
    row_base = 0
    for cone in cones:
        value_col: dict[int, int] = {}
        size = len(cone)
        for pos, (kind, node, _, _) in enumerate(reversed(cone)):
            start = ell * (row_base + pos)
            value_col[node] = start + (0 if kind == XOR else 1)
        for pos, (kind, node, p1, p2) in enumerate(reversed(cone)):
            row = [0] * m
            start = ell * (row_base + pos)
            for j in range(ell):
                row[start + j] = 1 << j
            for p in (p1, p2):
                col = x_col[p] if p < n else value_col[p]
                row[col] = (row[col] + GATE_SIGN[kind]) % q
            g_rows.append(row)
            b.append(GATE_RHS[kind])
        k_cols.append(value_col[cone[-1][1]])
        row_base += size

    a_rows = []
    for i in range(outs):
        row = [0] * m
        row[k_cols[i]] = 1
        for j, col in enumerate(aux_cols[i], start=1):
            row[col] = 1 << j
        a_rows.append(tuple(row))

    G = BinaryInvertible(ZqMatrix(q, tuple(tuple(r) for r in g_rows)), GadgetShape(d, ell, m - top))
    A = ZqMatrix(q, tuple(a_rows))
    layout = {
        "ell": ell,
        "block_sizes": sizes,
        "output_columns": k_cols,
        "input_columns": x_col,
        "aux_columns": aux_cols,
        "identity_blocks": [cone[0][1] == -1 for cone in cones],
    }
    return A, G, tuple(b), layout


def input_bits(layout: dict, s: Sequence[int]) -> tuple[int, ...]:
    return tuple(int(s[col]) for col in layout["input_columns"])


def pigeonhole_to_csis(inst: PigeonholeCircuit, ell: int = 2) -> Forwarded:
    A, G, b, layout = encode_circuit(inst.circuit, ell)
    return Forwarded("pigeonhole_to_csis", inst, Csis(A, G, b, ell), layout)


def back_pigeonhole_to_csis(fwd: Forwarded, sol: Solution) -> Solution:
    if isinstance(sol, Preimage):
        return Preimage(input_bits(fwd.layout, sol.x))
    if isinstance(sol, CollisionPair):
        return CollisionPair(input_bits(fwd.layout, sol.x), input_bits(fwd.layout, sol.y))
    raise ParameterError(f"unexpected cSIS solution {type(sol).__name__}")


# -- the other direction ---------------------------------------------------------


def affine_hash_circuit(A: ZqMatrix, G: BinaryInvertible, b: Sequence[int], num_inputs: int) -> Circuit:
    """Circuit for ``bd(A [r; x; 0] mod q)`` with ``r`` the back-substituted completion.

    ``x`` fills the first ``num_inputs`` free columns and the remaining ones are 0.
    """
    d, ell, k = G.shape.d, G.shape.ell, G.shape.k
    q = G.q
    top = d * ell
    bld = Builder(num_inputs)
    wires: list[int] = [ZERO] * top + bld.inputs() + [ZERO] * (k - num_inputs)
    rows = G.matrix.entries
    for t in range(d - 1, -1, -1):
        terms = [(ONE, int(b[t]))]
        terms += [(wires[j], -rows[t][j]) for j in range((t + 1) * ell, top + k) if rows[t][j]]
        residue = bld.pad(bld.dot_mod(terms, q), ell)
        wires[t * ell : (t + 1) * ell] = residue
    outputs: list[int] = []
    for row in A.entries:
        residue = bld.pad(bld.dot_mod([(wires[j], a) for j, a in enumerate(row) if a], q), ell)
        outputs.extend(msb_first(residue))
    return bld.build(outputs)


def completed(A: ZqMatrix, G: BinaryInvertible, b: Sequence[int], x: Sequence[int]) -> tuple[int, ...]:
    free = tuple(int(v) for v in x) + (0,) * (G.shape.k - len(x))
    return backsolve(G, free, tuple(b)) + free


def affine_hash_native(A: ZqMatrix, G: BinaryInvertible, b: Sequence[int], x: Sequence[int]) -> tuple[int, ...]:
    y = matvec_mod(A, completed(A, G, b, x))
    return tuple(bit for v in y for bit in bd(v, G.shape.ell))


def csis_to_pigeonhole(inst: Csis) -> Forwarded:
    width = inst.n * inst.ell
    c = affine_hash_circuit(inst.A, inst.G, inst.b, width)
    return Forwarded("csis_to_pigeonhole", inst, PigeonholeCircuit(c), {"free_inputs": width})


def back_csis_to_pigeonhole(fwd: Forwarded, sol: Solution) -> Solution:
    src: Csis = fwd.source
    lift = lambda x: completed(src.A, src.G, src.b, x)  # noqa: E731
    if isinstance(sol, Preimage):
        return Preimage(lift(sol.x))
    if isinstance(sol, CollisionPair):
        return CollisionPair(lift(sol.x), lift(sol.y))
    raise ParameterError(f"unexpected pigeonhole solution {type(sol).__name__}")


def native_csis_to_pigeonhole(fwd: Forwarded, x: Sequence[int]) -> tuple[int, ...]:
    src: Csis = fwd.source
    return affine_hash_native(src.A, src.G, src.b, x)


__all__ = [
    "GATE_RHS",
    "GATE_SIGN",
    "gate_equation_holds",
    "encode_circuit",
    "pigeonhole_to_csis",
    "back_pigeonhole_to_csis",
    "affine_hash_circuit",
    "affine_hash_native",
    "csis_to_pigeonhole",
    "back_csis_to_pigeonhole",
    "native_csis_to_pigeonhole",
]
