"""Boolean circuit IR: gates, evaluation, validation and structural rewrites.

Node ids are 0-based. Inputs occupy ids ``0..num_inputs-1``; gate ``j`` of
``Circuit.nodes`` has id ``num_inputs + j``. Evaluation is bit-sliced: every
wire carries a Python integer whose bit ``t`` is the wire's value under the
``t``-th assignment, so a whole truth table is computed in one pass.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .bits import bc
from .errors import InputArityError, MalformedError, OracleTooLargeError, UnsupportedGateError

ID, NOT, AND, OR, XOR, NAND, NOR, CONST1 = "ID", "NOT", "AND", "OR", "XOR", "NAND", "NOR", "CONST1"

UNARY_KINDS = frozenset({ID, NOT})
BINARY_KINDS = frozenset({AND, OR, XOR, NAND, NOR})
ALL_KINDS = UNARY_KINDS | BINARY_KINDS | {CONST1}
FIVE_KINDS = (NAND, NOR, XOR, AND, OR)

_OPCODE = {ID: 0, NOT: 1, AND: 2, OR: 3, XOR: 4, NAND: 5, NOR: 6, CONST1: 7}

DEFAULT_BUDGET = 1 << 22


class Gate(NamedTuple):
    kind: str
    pred1: int | None = None
    pred2: int | None = None

    @property
    def preds(self) -> tuple[int, ...]:
        if self.kind == CONST1:
            return ()
        if self.kind in UNARY_KINDS:
            return (self.pred1,)
        return (self.pred1, self.pred2)


@dataclass(frozen=True)
class Circuit:
    num_inputs: int
    nodes: tuple[Gate, ...]
    outputs: tuple[int, ...]
    _program: list | None = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(Gate(*g) for g in self.nodes))
        object.__setattr__(self, "outputs", tuple(int(o) for o in self.outputs))

    @property
    def size(self) -> int:
        return len(self.nodes)

    @property
    def num_outputs(self) -> int:
        return len(self.outputs)

    @property
    def num_nodes(self) -> int:
        return self.num_inputs + len(self.nodes)

    def kinds(self) -> set[str]:
        return {g.kind for g in self.nodes}

    def program(self) -> list[tuple[int, int, int]]:
        if self._program is None:
            prog = []
            for g in self.nodes:
                a = -1 if g.pred1 is None else g.pred1
                b = a if g.pred2 is None else g.pred2
                prog.append((_OPCODE[g.kind], a, b))
            object.__setattr__(self, "_program", prog)
        return self._program

    def to_dict(self) -> dict:
        return {
            "num_inputs": self.num_inputs,
            "nodes": [{"kind": g.kind, "pred1": g.pred1, "pred2": g.pred2} for g in self.nodes],
            "outputs": list(self.outputs),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Circuit":
        try:
            nodes = tuple(
                Gate(str(n["kind"]), n.get("pred1"), n.get("pred2")) for n in data["nodes"]
            )
            c = cls(int(data["num_inputs"]), nodes, tuple(data["outputs"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedError(f"malformed circuit: {exc}") from exc
        problem = validate(c)
        if problem is not None:
            raise MalformedError(f"invalid circuit: {problem}")
        return c


@dataclass(frozen=True)
class Violation:
    kind: str
    node: int
    message: str

    def __str__(self) -> str:
        return f"{self.kind} at node {self.node}: {self.message}"


def validate(c: Circuit) -> Violation | None:
    """Return the first invariant violation, or None when the circuit is well formed."""
    if c.num_inputs < 0:
        return Violation("arity", -1, "negative input count")
    for j, g in enumerate(c.nodes):
        nid = c.num_inputs + j
        if g.kind not in ALL_KINDS:
            return Violation("unknown_kind", nid, f"gate kind {g.kind!r}")
        want = 0 if g.kind == CONST1 else 1 if g.kind in UNARY_KINDS else 2
        given = [p for p in (g.pred1, g.pred2) if p is not None]
        if len(given) != want or (want == 1 and g.pred1 is None):
            return Violation("arity", nid, f"{g.kind} expects {want} predecessors")
        for p in given:
            if not isinstance(p, (int, np.integer)) or isinstance(p, bool):
                return Violation("bad_pred", nid, f"predecessor {p!r} is not an id")
            if p < 0:
                return Violation("bad_pred", nid, f"negative predecessor {p}")
            if p >= nid:
                return Violation("cycle", nid, f"predecessor {p} is not earlier")
    for o in c.outputs:
        if not 0 <= o < c.num_nodes:
            return Violation("bad_output", o, "output id out of range")
    return None


def _run(c: Circuit, columns: Sequence[int], mask: int) -> list[int]:
    vals = list(columns)
    push = vals.append
    for op, a, b in c.program():
        if op == 2:
            push(vals[a] & vals[b])
        elif op == 4:
            push(vals[a] ^ vals[b])
        elif op == 3:
            push(vals[a] | vals[b])
        elif op == 1:
            push(vals[a] ^ mask)
        elif op == 5:
            push((vals[a] & vals[b]) ^ mask)
        elif op == 6:
            push((vals[a] | vals[b]) ^ mask)
        elif op == 0:
            push(vals[a])
        else:
            push(mask)
    return [vals[o] for o in c.outputs]


def evaluate(c: Circuit, bits: Sequence[int]) -> tuple[int, ...]:
    """Evaluate on one assignment; returns output bits in declared order."""
    if len(bits) != c.num_inputs:
        raise InputArityError(f"expected {c.num_inputs} input bits, got {len(bits)}")
    return tuple(_run(c, [int(b) & 1 for b in bits], 1))


def evaluate_packed(c: Circuit, columns: Sequence[int], count: int) -> list[int]:
    """Evaluate ``count`` assignments at once; ``columns[i]`` packs input ``i``."""
    if len(columns) != c.num_inputs:
        raise InputArityError(f"expected {c.num_inputs} input columns, got {len(columns)}")
    return _run(c, columns, (1 << count) - 1)


def evaluate_many(c: Circuit, assignments: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    count = len(assignments)
    if count == 0:
        return []
    cols = [0] * c.num_inputs
    for t, a in enumerate(assignments):
        if len(a) != c.num_inputs:
            raise InputArityError(f"expected {c.num_inputs} input bits, got {len(a)}")
        for i, bit in enumerate(a):
            if bit:
                cols[i] |= 1 << t
    outs = _unpack(_run(c, cols, (1 << count) - 1), count)
    return [tuple(int(v) for v in row) for row in outs]


def _unpack(words: Sequence[int], count: int) -> np.ndarray:
    """Turn packed output columns into a (count, outputs) 0/1 array."""
    nbytes = max(1, (count + 7) // 8)
    out = np.zeros((count, len(words)), dtype=np.uint8)
    for j, w in enumerate(words):
        raw = np.frombuffer(w.to_bytes(nbytes, "little"), dtype=np.uint8)
        out[:, j] = np.unpackbits(raw, bitorder="little")[:count]
    return out


def _pattern(position: int, width_log: int) -> int:
    """Packed column whose bit t equals bit ``position`` of t, for t < 2**width_log."""
    half = 1 << position
    block = ((1 << half) - 1) << half
    period = half << 1
    total = 1 << width_log
    reps = ((1 << total) - 1) // ((1 << period) - 1)
    return block * reps


def _chunk_bits(c: Circuit, n: int) -> int:
    limit = 1 << 30
    cb = min(n, 16)
    while cb > 6 and (c.num_nodes + 1) << cb > limit:
        cb -= 1
    return cb


def truth_table_bits(c: Circuit, threads: int = 1, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """Outputs over all ``2**n`` inputs, row ``bc(x)``, as a (2**n, outputs) 0/1 array."""
    n = c.num_inputs
    total = 1 << n
    if total > budget:
        raise OracleTooLargeError(f"2^{n} evaluations exceed budget {budget}")
    cb = _chunk_bits(c, n)
    width = 1 << cb
    mask = (1 << width) - 1
    low = [_pattern(p, cb) for p in range(cb)]

    def chunk(index: int) -> np.ndarray:
        base = index << cb
        cols = []
        for i in range(n):
            p = n - 1 - i
            cols.append(low[p] if p < cb else (mask if (base >> p) & 1 else 0))
        return _unpack(_run(c, cols, mask), width)

    chunks = range(total >> cb)
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(chunk, chunks))
    else:
        parts = [chunk(i) for i in chunks]
    return np.concatenate(parts, axis=0)


def truth_table(c: Circuit, threads: int = 1, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """Output compositions ``bc(C(x))`` indexed by ``bc(x)``."""
    if c.num_outputs > 62:
        raise UnsupportedGateError("too many outputs to pack into int64 keys")
    bits = truth_table_bits(c, threads, budget).astype(np.int64)
    weights = np.array([1 << (c.num_outputs - 1 - j) for j in range(c.num_outputs)], dtype=np.int64)
    return bits @ weights if c.num_outputs else np.zeros(len(bits), dtype=np.int64)


def normalize_indegree2(c: Circuit) -> Circuit:
    """Rewrite NOT/ID as NAND/OR with a doubled predecessor."""
    out = []
    for j, g in enumerate(c.nodes):
        if g.kind == CONST1:
            raise UnsupportedGateError(f"CONST1 at node {c.num_inputs + j} cannot be normalized")
        if g.kind == NOT:
            out.append(Gate(NAND, g.pred1, g.pred1))
        elif g.kind == ID:
            out.append(Gate(OR, g.pred1, g.pred1))
        else:
            out.append(g)
    return Circuit(c.num_inputs, tuple(out), c.outputs)


def is_normalized(c: Circuit) -> bool:
    return all(g.kind in BINARY_KINDS for g in c.nodes)


class _Emitter:
    """Append-only gate list used by the raw rewrites (no simplification)."""

    def __init__(self, num_inputs: int):
        self.num_inputs = num_inputs
        self.gates: list[Gate] = []
        self._one: int | None = None

    def emit(self, kind: str, a: int | None = None, b: int | None = None) -> int:
        self.gates.append(Gate(kind, a, b))
        return self.num_inputs + len(self.gates) - 1

    def one(self) -> int:
        if self._one is None:
            self._one = self.emit(CONST1)
        return self._one

    def circuit(self, outputs: Iterable[int]) -> Circuit:
        return Circuit(self.num_inputs, tuple(self.gates), tuple(outputs))


def rewrite_to_xor_or_basis(c: Circuit) -> Circuit:
    """Re-express every gate over {XOR, OR, CONST1}."""
    em = _Emitter(c.num_inputs)
    where = list(range(c.num_inputs))
    for g in c.nodes:
        a = where[g.pred1] if g.pred1 is not None else None
        b = where[g.pred2] if g.pred2 is not None else None
        k = g.kind
        if k in (XOR, OR):
            new = em.emit(k, a, b)
        elif k == CONST1:
            new = em.one()
        elif k == ID:
            new = em.emit(OR, a, a)
        elif k == NOT:
            new = em.emit(XOR, a, em.one())
        elif k == NOR:
            new = em.emit(XOR, em.emit(OR, a, b), em.one())
        elif k == NAND:
            one = em.one()
            new = em.emit(OR, em.emit(XOR, a, one), em.emit(XOR, b, one))
        elif k == AND:
            new = em.emit(XOR, em.emit(XOR, a, b), em.emit(OR, a, b))
        else:
            raise UnsupportedGateError(f"unknown gate kind {k!r}")
        where.append(new)
    return em.circuit(where[o] for o in c.outputs)


def _or_chain(em: _Emitter) -> int:
    n = em.num_inputs
    if n == 0:
        raise InputArityError("an OR of all inputs needs at least one input")
    z = 0
    for i in range(1, n):
        z = em.emit(OR, z, i)
    return z


def eliminate_const1(c: Circuit) -> Circuit:
    """Replace CONST1 by the OR of all inputs, which agrees with 1 off the zero input."""
    bad = c.kinds() - {XOR, OR, CONST1}
    if bad:
        raise UnsupportedGateError(f"gates outside {{XOR, OR, CONST1}}: {sorted(bad)}")
    em = _Emitter(c.num_inputs)
    z = _or_chain(em)
    where = list(range(c.num_inputs))
    for g in c.nodes:
        if g.kind == CONST1:
            where.append(z)
        else:
            where.append(em.emit(g.kind, where[g.pred1], where[g.pred2]))
    return em.circuit(where[o] for o in c.outputs)


def append_nonzero_flag(c: Circuit) -> Circuit:
    """Add a final output equal to the OR of all inputs."""
    bad = c.kinds() - {XOR, OR}
    if bad:
        raise UnsupportedGateError(f"gates outside {{XOR, OR}}: {sorted(bad)}")
    em = _Emitter(c.num_inputs)
    em.gates.extend(c.nodes)
    z = _or_chain(em)
    return em.circuit(list(c.outputs) + [z])


def random_circuit(
    num_inputs: int,
    num_gates: int,
    num_outputs: int,
    rng: np.random.Generator,
    kinds: Sequence[str] = FIVE_KINDS,
) -> Circuit:
    """Uniformly wired random circuit; outputs favour gate nodes."""
    gates = []
    for j in range(num_gates):
        nid = num_inputs + j
        kind = kinds[int(rng.integers(len(kinds)))]
        if kind == CONST1:
            gates.append(Gate(CONST1))
        elif kind in UNARY_KINDS:
            gates.append(Gate(kind, int(rng.integers(nid))))
        else:
            gates.append(Gate(kind, int(rng.integers(nid)), int(rng.integers(nid))))
    total = num_inputs + num_gates
    outputs = []
    for _ in range(num_outputs):
        if num_gates and rng.random() < 0.85:
            outputs.append(num_inputs + int(rng.integers(num_gates)))
        else:
            outputs.append(int(rng.integers(total)))
    return Circuit(num_inputs, tuple(gates), tuple(outputs))


def output_value(c: Circuit, bits: Sequence[int]) -> int:
    return bc(evaluate(c, bits))
