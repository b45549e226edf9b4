"""Problem instances, solutions, verifiers and exhaustive oracles."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Any, Sequence, Union

import numpy as np

from . import crhash
from .bits import bc, bd, bits_for
from .builder import Builder, msb_first
from .circuit import DEFAULT_BUDGET, FIVE_KINDS, Circuit, evaluate, random_circuit, truth_table, validate
from .crhash import HashKey, HashParams
from .errors import MalformedError, OracleTooLargeError, ParameterError
from .lattice import (
    CosetIndexer,
    IntMatrix,
    adjugate,
    as_matrix,
    basis_from_dict,
    basis_to_dict,
    box_size,
    box_width,
    cube_value_circuit,
    det_exact,
    in_lattice,
    iroot,
)
from .zqlin import BinaryInvertible, GadgetShape, ZqMatrix, binary_solutions, matvec_mod, sample_binary_invertible

INF = "inf"


# -- instances -----------------------------------------------------------------


@dataclass(frozen=True)
class PigeonholeCircuit:
    circuit: Circuit

    def __post_init__(self) -> None:
        _check_circuit(self.circuit)
        if self.circuit.num_inputs != self.circuit.num_outputs or self.circuit.num_inputs < 1:
            raise ParameterError("pigeonhole circuits need n >= 1 inputs and n outputs")

    @property
    def n(self) -> int:
        return self.circuit.num_inputs


@dataclass(frozen=True)
class Collision:
    circuit: Circuit

    def __post_init__(self) -> None:
        _check_circuit(self.circuit)
        if self.circuit.num_outputs >= self.circuit.num_inputs:
            raise ParameterError("collision circuits need fewer outputs than inputs")

    @property
    def n(self) -> int:
        return self.circuit.num_inputs

    @property
    def m(self) -> int:
        return self.circuit.num_outputs


@dataclass(frozen=True)
class Blichfeldt:
    """Lattice ``L(basis)`` and the set ``S = {V(z) : z < s}`` of unsigned ``coord_width``-bit points."""

    basis: IntMatrix
    s: int
    value_fn: Circuit
    coord_width: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "basis", as_matrix(self.basis))
        _check_circuit(self.value_fn)
        if self.s < 1 or self.coord_width < 1:
            raise ParameterError("s and coord_width must be positive")
        if self.value_fn.num_inputs != bits_for(self.s):
            raise ParameterError("value function input width must be ceil(log s)")
        if self.value_fn.num_outputs != self.dim * self.coord_width:
            raise ParameterError("value function output width must be n * coord_width")
        if any(len(r) != self.dim for r in self.basis) or det_exact(self.basis) == 0:
            raise ParameterError("basis must be square and nonsingular")

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def det(self) -> int:
        return abs(det_exact(self.basis))

    @cached_property
    def indexer(self) -> CosetIndexer:
        return CosetIndexer.from_basis(self.basis)

    def decode(self, bits: Sequence[int]) -> tuple[int, ...]:
        w = self.coord_width
        return tuple(bc(bits[i * w : (i + 1) * w]) for i in range(self.dim))

    def value(self, z: int) -> tuple[int, ...]:
        return self.decode(evaluate(self.value_fn, bd(z, self.value_fn.num_inputs)))

    def values(self, budget: int = DEFAULT_BUDGET) -> np.ndarray:
        """Rows ``V(z)`` for ``z < s``."""
        keys = _table(self.value_fn, budget)[: self.s]
        w, n = self.coord_width, self.dim
        cols = [(keys >> (w * (n - 1 - i))) & ((1 << w) - 1) for i in range(n)]
        return np.stack(cols, axis=1) if n else np.zeros((len(keys), 0), dtype=np.int64)


@dataclass(frozen=True)
class Csis:
    A: ZqMatrix
    G: BinaryInvertible
    b: tuple[int, ...]
    ell: int

    def __post_init__(self) -> None:
        q = self.A.q
        object.__setattr__(self, "b", tuple(int(v) % q for v in self.b))
        if self.G.q != q:
            raise ParameterError("A and G must share the modulus")
        if q > 1 << self.ell or self.G.shape.ell != self.ell:
            raise ParameterError("need q <= 2^ell and a matching gadget width")
        if self.A.cols != self.G.shape.cols or len(self.b) != self.G.shape.d:
            raise ParameterError("A, G and b have inconsistent shapes")
        if self.m < (self.n + self.d) * self.ell:
            raise ParameterError("need m >= (n + d) * ell")

    @property
    def q(self) -> int:
        return self.A.q

    @property
    def n(self) -> int:
        return self.A.rows

    @property
    def d(self) -> int:
        return self.G.shape.d

    @property
    def m(self) -> int:
        return self.A.cols


@dataclass(frozen=True)
class WeakCsis:
    key: HashKey

    @property
    def A(self) -> ZqMatrix:
        return self.key.A

    @property
    def G(self) -> BinaryInvertible:
        return self.key.G


@dataclass(frozen=True)
class Minkowski:
    basis: IntMatrix
    p: int | str

    def __post_init__(self) -> None:
        object.__setattr__(self, "basis", as_matrix(self.basis))
        if self.p != INF and (not isinstance(self.p, int) or self.p < 1):
            raise ParameterError("p must be a positive integer or 'inf'")
        if any(len(r) != len(self.basis) for r in self.basis) or det_exact(self.basis) == 0:
            raise ParameterError("basis must be square and nonsingular")

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def det(self) -> int:
        return abs(det_exact(self.basis))

    def within_bound(self, v: Sequence[int]) -> bool:
        """``||v||_p <= n^(1/p) det^(1/n)``, decided in exact integers."""
        n, det = self.dim, self.det
        if self.p == INF:
            return max(abs(x) for x in v) ** n <= det
        p = int(self.p)
        return sum(abs(x) ** p for x in v) ** n <= n**n * det**p


@dataclass(frozen=True)
class Dlog:
    """Alleged cyclic group on indices ``[s]`` with operation circuit ``f``."""

    s: int
    g: int
    identity: int
    f: Circuit
    y: int

    def __post_init__(self) -> None:
        _check_circuit(self.f)
        if self.s < 1:
            raise ParameterError("group order must be positive")
        n = self.width
        if self.f.num_inputs != 2 * n or self.f.num_outputs != n:
            raise ParameterError("f must map 2*ceil(log s) bits to ceil(log s) bits")
        if not all(0 <= v < self.s for v in (self.g, self.identity, self.y)):
            raise ParameterError("g, identity and y must lie in [s]")

    @property
    def width(self) -> int:
        return bits_for(self.s)

    def table(self, budget: int = DEFAULT_BUDGET) -> np.ndarray:
        """``table[a, b] = f(a, b)`` over all width-bit indices."""
        cached = self.__dict__.get("_table")
        if cached is None:
            n = self.width
            cached = _table(self.f, budget).reshape(1 << n, 1 << n)
            self.__dict__["_table"] = cached
        return cached

    def power(self, x: int) -> int:
        """Square-and-multiply from the least significant exponent bit, reduced into [s]."""
        t = self.table()
        acc, base = self.identity, self.g
        for i in range(self.width):
            if (x >> i) & 1:
                acc = int(t[acc, base])
            if i + 1 < self.width:
                base = int(t[base, base])
        return acc % self.s

    def powers(self, budget: int = DEFAULT_BUDGET) -> np.ndarray:
        """``power(x)`` for every ``x < s``."""
        t = self.table(budget)
        xs = np.arange(self.s, dtype=np.int64)
        acc = np.full(self.s, self.identity, dtype=np.int64)
        base = self.g
        for i in range(self.width):
            bit = (xs >> i) & 1 == 1
            acc = np.where(bit, t[acc, base], acc)
            if i + 1 < self.width:
                base = int(t[base, base])
        return acc % self.s


Instance = Union[PigeonholeCircuit, Collision, Blichfeldt, Csis, WeakCsis, Minkowski, Dlog]


def _check_circuit(c: Circuit) -> None:
    problem = validate(c)
    if problem is not None:
        raise ParameterError(f"invalid circuit: {problem}")


def _table(c: Circuit, budget: int) -> np.ndarray:
    if (1 << c.num_inputs) > budget:
        raise OracleTooLargeError(f"2^{c.num_inputs} evaluations exceed budget {budget}")
    return truth_table(c, budget=budget)


# -- solutions -----------------------------------------------------------------


@dataclass(frozen=True)
class Preimage:
    x: Any


@dataclass(frozen=True)
class CollisionPair:
    x: Any
    y: Any


@dataclass(frozen=True)
class LatticePoint:
    v: tuple[int, ...]
    index: int | None = None


@dataclass(frozen=True)
class LatticePair:
    x: tuple[int, ...]
    y: tuple[int, ...]
    indices: tuple[int, int] | None = None


@dataclass(frozen=True)
class TrivialZero:
    pass


@dataclass(frozen=True)
class InvalidWitness:
    z: int
    w: int


Solution = Union[Preimage, CollisionPair, LatticePoint, LatticePair, TrivialZero, InvalidWitness]


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.accepted


ACCEPT = Verdict(True, "ok")


def _reject(reason: str) -> Verdict:
    return Verdict(False, reason)


def _bits(x: Any, width: int) -> tuple[int, ...] | None:
    try:
        t = tuple(int(b) for b in x)
    except TypeError:
        return None
    if len(t) != width or any(b not in (0, 1) for b in t):
        return None
    return t


def _ints(x: Any, width: int) -> tuple[int, ...] | None:
    try:
        t = tuple(int(b) for b in x)
    except TypeError:
        return None
    return t if len(t) == width else None


# -- verification --------------------------------------------------------------


def verify(instance: Instance, solution: Solution) -> Verdict:
    """Accept exactly the answers allowed by the problem's output clause."""
    try:
        if isinstance(instance, PigeonholeCircuit):
            return _verify_circuit(instance.circuit, solution, zero_allowed=True)
        if isinstance(instance, Collision):
            return _verify_circuit(instance.circuit, solution, zero_allowed=False)
        if isinstance(instance, Blichfeldt):
            return _verify_blichfeldt(instance, solution)
        if isinstance(instance, Csis):
            return _verify_csis(instance, solution)
        if isinstance(instance, WeakCsis):
            return _verify_weak(instance, solution)
        if isinstance(instance, Minkowski):
            return _verify_minkowski(instance, solution)
        if isinstance(instance, Dlog):
            return _verify_dlog(instance, solution)
    except (TypeError, ValueError) as exc:
        return _reject(f"shape: {exc}")
    return _reject(f"unknown instance type {type(instance).__name__}")


def _verify_circuit(c: Circuit, sol: Solution, zero_allowed: bool) -> Verdict:
    n = c.num_inputs
    if isinstance(sol, Preimage) and zero_allowed:
        x = _bits(sol.x, n)
        if x is None:
            return _reject("shape")
        return ACCEPT if not any(evaluate(c, x)) else _reject("output is not zero")
    if isinstance(sol, CollisionPair):
        x, y = _bits(sol.x, n), _bits(sol.y, n)
        if x is None or y is None:
            return _reject("shape")
        if x == y:
            return _reject("inputs are equal")
        return ACCEPT if evaluate(c, x) == evaluate(c, y) else _reject("outputs differ")
    return _reject(f"tag {type(sol).__name__} not allowed")


def _member_index(inst: Blichfeldt, v: tuple[int, ...], hint: int | None) -> int | None:
    if hint is not None:
        if 0 <= hint < inst.s and inst.value(hint) == v:
            return hint
        return None
    vals = inst.values()
    hit = np.nonzero(np.all(vals == np.array(v, dtype=np.int64), axis=1))[0]
    return int(hit[0]) if len(hit) else None


def _verify_blichfeldt(inst: Blichfeldt, sol: Solution) -> Verdict:
    small = inst.s < inst.det
    if isinstance(sol, TrivialZero):
        return ACCEPT if small else _reject("s >= det, the zero answer is not allowed")
    if small:
        return _reject("s < det admits only the zero answer")
    n = inst.dim
    if isinstance(sol, LatticePoint):
        v = _ints(sol.v, n)
        if v is None:
            return _reject("shape")
        if _member_index(inst, v, sol.index) is None:
            return _reject("point is not in S")
        return ACCEPT if in_lattice(inst.basis, v) else _reject("point is not in the lattice")
    if isinstance(sol, LatticePair):
        x, y = _ints(sol.x, n), _ints(sol.y, n)
        if x is None or y is None:
            return _reject("shape")
        if x == y:
            return _reject("points are equal")
        hx, hy = (sol.indices if sol.indices is not None else (None, None))
        if _member_index(inst, x, hx) is None or _member_index(inst, y, hy) is None:
            return _reject("point is not in S")
        diff = tuple(a - b for a, b in zip(x, y))
        return ACCEPT if in_lattice(inst.basis, diff) else _reject("difference is not in the lattice")
    if isinstance(sol, InvalidWitness):
        z, w = int(sol.z), int(sol.w)
        if z == w or not (0 <= z < inst.s and 0 <= w < inst.s):
            return _reject("indices must be distinct and below s")
        return ACCEPT if inst.value(z) == inst.value(w) else _reject("values differ")
    return _reject(f"tag {type(sol).__name__} not allowed")


def _verify_csis(inst: Csis, sol: Solution) -> Verdict:
    m = inst.m
    G = inst.G.matrix

    def feasible(x: tuple[int, ...]) -> bool:
        return matvec_mod(G, x) == inst.b

    if isinstance(sol, Preimage):
        x = _bits(sol.x, m)
        if x is None:
            return _reject("shape")
        if not feasible(x):
            return _reject("G x != b")
        return ACCEPT if not any(matvec_mod(inst.A, x)) else _reject("A x != 0")
    if isinstance(sol, CollisionPair):
        x, y = _bits(sol.x, m), _bits(sol.y, m)
        if x is None or y is None:
            return _reject("shape")
        if x == y:
            return _reject("vectors are equal")
        if not (feasible(x) and feasible(y)):
            return _reject("G x != b")
        return ACCEPT if matvec_mod(inst.A, x) == matvec_mod(inst.A, y) else _reject("A x != A y")
    return _reject(f"tag {type(sol).__name__} not allowed")


def _verify_weak(inst: WeakCsis, sol: Solution) -> Verdict:
    if not isinstance(sol, CollisionPair):
        return _reject(f"tag {type(sol).__name__} not allowed")
    k = inst.key.params.k
    x, y = _bits(sol.x, k), _bits(sol.y, k)
    if x is None or y is None:
        return _reject("shape")
    if x == y:
        return _reject("inputs are equal")
    return ACCEPT if crhash.evaluate(inst.key, x) == crhash.evaluate(inst.key, y) else _reject("digests differ")


def _verify_minkowski(inst: Minkowski, sol: Solution) -> Verdict:
    if not isinstance(sol, LatticePoint):
        return _reject(f"tag {type(sol).__name__} not allowed")
    v = _ints(sol.v, inst.dim)
    if v is None:
        return _reject("shape")
    if not any(v):
        return _reject("zero vector")
    if not in_lattice(inst.basis, v):
        return _reject("not a lattice vector")
    return ACCEPT if inst.within_bound(v) else _reject("norm exceeds the bound")


def _verify_dlog(inst: Dlog, sol: Solution) -> Verdict:
    def exponent(v: Any) -> int | None:
        if isinstance(v, (bool, np.bool_)) or not isinstance(v, (int, np.integer)):
            return None
        return int(v) if 0 <= v < inst.s else None

    if isinstance(sol, Preimage):
        x = exponent(sol.x)
        if x is None:
            return _reject("shape")
        return ACCEPT if inst.power(x) == inst.y else _reject("g^x != y")
    if isinstance(sol, CollisionPair):
        x, y = exponent(sol.x), exponent(sol.y)
        if x is None or y is None:
            return _reject("shape")
        if x == y:
            return _reject("exponents are equal")
        return ACCEPT if inst.power(x) == inst.power(y) else _reject("powers differ")
    return _reject(f"tag {type(sol).__name__} not allowed")


# -- brute force -----------------------------------------------------------------


def first_event(keys: np.ndarray, zero_is_event: bool = True) -> tuple | None:
    """Scan rows in order; report the first all-zero row or the first repeated row.

    Returns ``("zero", i)``, ``("pair", i, j)`` with ``i < j``, or None.
    """
    keys = np.asarray(keys)
    if keys.ndim == 1:
        keys = keys[:, None]
    count = len(keys)
    if count == 0:
        return None
    zero_at = count
    if zero_is_event:
        hits = np.nonzero(~keys.any(axis=1))[0]
        if len(hits):
            zero_at = int(hits[0])
    _, first, inverse = np.unique(keys, axis=0, return_index=True, return_inverse=True)
    first_of = first[inverse.reshape(-1)]
    repeats = np.nonzero(first_of < np.arange(count))[0]
    pair_at = int(repeats[0]) if len(repeats) else count
    if zero_at <= pair_at and zero_at < count:
        return ("zero", zero_at)
    if pair_at < count:
        return ("pair", int(first_of[pair_at]), pair_at)
    return None


def brute_force(instance: Instance, budget: int = DEFAULT_BUDGET, threads: int = 1) -> Solution:
    """Exhaustive oracle returning the first solution in enumeration order."""
    if isinstance(instance, (PigeonholeCircuit, Collision)):
        c = instance.circuit
        if (1 << c.num_inputs) > budget:
            raise OracleTooLargeError(f"2^{c.num_inputs} inputs exceed budget {budget}")
        keys = truth_table(c, threads=threads, budget=budget)
        ev = first_event(keys, zero_is_event=isinstance(instance, PigeonholeCircuit))
        return _circuit_solution(ev, c.num_inputs)
    if isinstance(instance, Blichfeldt):
        return _brute_blichfeldt(instance, budget)
    if isinstance(instance, Csis):
        return _brute_csis(instance, budget)
    if isinstance(instance, WeakCsis):
        x1, x2 = crhash.find_collision(instance.key, budget)
        return CollisionPair(x1, x2)
    if isinstance(instance, Minkowski):
        return _brute_minkowski(instance, budget)
    if isinstance(instance, Dlog):
        if (1 << (2 * instance.width)) > budget:
            raise OracleTooLargeError("group table exceeds budget")
        shifted = (instance.powers(budget) - instance.y) % instance.s
        ev = first_event(shifted)
        if ev is None:
            raise AssertionError("a map on [s] must have a zero or a repeat")
        return Preimage(ev[1]) if ev[0] == "zero" else CollisionPair(ev[1], ev[2])
    raise TypeError(f"unknown instance type {type(instance).__name__}")


def _circuit_solution(ev: tuple | None, n: int) -> Solution:
    if ev is None:
        raise AssertionError("exhaustive search found no solution")
    if ev[0] == "zero":
        return Preimage(bd(ev[1], n))
    return CollisionPair(bd(ev[1], n), bd(ev[2], n))


def _brute_blichfeldt(inst: Blichfeldt, budget: int) -> Solution:
    if inst.s < inst.det:
        return TrivialZero()
    vals = inst.values(budget)
    idx = inst.indexer.index_many(vals)
    ev = first_event(idx)
    if ev is None:
        raise AssertionError("pigeonhole guarantees an event when s >= det")
    if ev[0] == "zero":
        z = ev[1]
        return LatticePoint(tuple(int(v) for v in vals[z]), z)
    z, w = ev[1], ev[2]
    vz, vw = tuple(int(v) for v in vals[z]), tuple(int(v) for v in vals[w])
    if vz == vw:
        return InvalidWitness(z, w)
    return LatticePair(vz, vw, (z, w))


def _brute_csis(inst: Csis, budget: int) -> Solution:
    k = inst.m - inst.d * inst.ell
    per_free = (((1 << inst.ell) - 1) // inst.q + 1) ** inst.d
    if (1 << k) * per_free > budget:
        raise OracleTooLargeError(f"2^{k} free vectors exceed budget {budget}")
    xs = binary_solutions(inst.G, inst.b, crhash.all_inputs(k))
    images = (xs @ inst.A.to_numpy().T) % inst.q
    ev = first_event(images)
    if ev is None:
        raise AssertionError("cSIS instance without solution")
    row = lambda i: tuple(int(v) for v in xs[i])  # noqa: E731
    if ev[0] == "zero":
        return Preimage(row(ev[1]))
    return CollisionPair(row(ev[1]), row(ev[2]))


def _brute_minkowski(inst: Minkowski, budget: int) -> Solution:
    n = inst.dim
    ell = iroot(inst.det, n)
    if (2 * ell + 1) ** n > budget:
        raise OracleTooLargeError("search box exceeds budget")
    for v in box_lattice_points(inst.basis, ell):
        if any(v) and inst.within_bound(v):
            return LatticePoint(v)
    raise AssertionError("no short vector in the box")


def box_lattice_points(basis: IntMatrix, radius: int) -> list[tuple[int, ...]]:
    """Lattice points of ``[-radius, radius]^n`` in lexicographic order."""
    n = len(basis)
    adj, det = adjugate(basis)
    axis = np.arange(-radius, radius + 1, dtype=np.int64)
    grids = np.meshgrid(*([axis] * n), indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    num = pts @ np.array(adj, dtype=np.int64).T
    ok = np.all(num % det == 0, axis=1)
    return [tuple(int(v) for v in p) for p in pts[ok]]


def shortest_inf_norm(basis: IntMatrix, radius: int) -> int | None:
    """Smallest nonzero infinity norm among lattice points within ``radius``."""
    norms = [max(abs(x) for x in v) for v in box_lattice_points(basis, radius) if any(v)]
    return min(norms) if norms else None


# -- random generation -------------------------------------------------------------


def random_basis(dim: int, max_det: int, rng: np.random.Generator, entry: int = 3) -> IntMatrix:
    while True:
        b = tuple(tuple(int(v) for v in rng.integers(-entry, entry + 1, size=dim)) for _ in range(dim))
        d = det_exact(b)
        if d != 0 and abs(d) <= max_det:
            return b


def primes_up_to(limit: int) -> list[int]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[:2] = b"\x00\x00"[: min(2, limit + 1)]
    for i in range(2, int(limit**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i in range(limit + 1) if sieve[i]]


def primitive_roots(p: int) -> list[int]:
    if p == 2:
        return [1]
    order = p - 1
    factors = {f for f in primes_up_to(order) if order % f == 0}
    return [c for c in range(2, p) if all(pow(c, order // f, p) != 1 for f in factors)]


def zp_star_operation(p: int) -> Circuit:
    """``f(a, b) = (a + 1)(b + 1) - 1 mod p`` on ``ceil(log(p-1))``-bit indices."""
    n = bits_for(p - 1)
    b = Builder(2 * n)
    a_word, b_word = b.input_word(0, n), b.input_word(n, n)
    total = b.add(b.add(b.mul(a_word, b_word), a_word), b_word)
    out = b.pad(b.mod_const(total, p), n)
    return b.build(msb_first(out[:n]))


def zp_star_instance(p: int, generator: int, target: int) -> Dlog:
    """Discrete log of ``target + 1`` to base ``generator`` in Z_p^*, index-encoded."""
    return Dlog(s=p - 1, g=generator - 1, identity=0, f=zp_star_operation(p), y=target)


def flip_output_bit(f: Circuit, entry: int, bit: int) -> Circuit:
    """``f`` with output ``bit`` (0 = most significant) inverted on the single input ``bd(entry)``."""
    b = Builder(f.num_inputs)
    outs = b.inline(f, b.inputs())
    hit = b.eq_const(msb_first(b.inputs()), entry)
    outs[bit] = b.xor(outs[bit], hit)
    return b.build(outs)


def _powers_from_table(t: np.ndarray, inst: Dlog) -> np.ndarray:
    xs = np.arange(inst.s, dtype=np.int64)
    acc = np.full(inst.s, inst.identity, dtype=np.int64)
    base = inst.g
    for i in range(inst.width):
        acc = np.where((xs >> i) & 1 == 1, t[acc, base], acc)
        if i + 1 < inst.width:
            base = int(t[base, base])
    return acc % inst.s


def corrupt_group(inst: Dlog) -> Dlog | None:
    """First single-bit corruption of ``f`` whose powers repeat, targeted outside their image.

    Entries are scanned from ``(identity, g)`` onward in row-major order, bits
    from the most significant. Returns None if no flip breaks injectivity.
    """
    n, t = inst.width, inst.table()
    size = 1 << n
    start = inst.identity * size + inst.g
    for entry in list(range(start, size * size)) + list(range(start)):
        a, b = divmod(entry, size)
        for bit in range(n):
            bad = t.copy()
            bad[a, b] ^= 1 << (n - 1 - bit)
            powers = _powers_from_table(bad, inst)
            if len(np.unique(powers)) < inst.s:
                missing = sorted(set(range(inst.s)) - set(powers.tolist()))
                f = flip_output_bit(inst.f, entry, bit)
                return Dlog(inst.s, inst.g, inst.identity, f, missing[0])
    return None


def gen_random(kind: str, params: dict | None = None, seed: int = 0) -> Instance:
    """Deterministic random instance of the named problem."""
    p = dict(params or {})
    rng = np.random.default_rng(seed)
    if kind == "pigeonhole":
        n, gates = int(p.get("n", 3)), int(p.get("gates", 8))
        if n < 1 or gates < 0:
            raise ParameterError("need n >= 1 and gates >= 0")
        return PigeonholeCircuit(random_circuit(n, gates, n, rng, FIVE_KINDS))
    if kind == "collision":
        n = int(p.get("n", 3))
        m = int(p.get("m", n - 1))
        gates = int(p.get("gates", 8))
        if not 0 <= m < n:
            raise ParameterError("need 0 <= m < n")
        return Collision(random_circuit(n, gates, m, rng, FIVE_KINDS))
    if kind == "blichfeldt":
        dim = int(p.get("dim", p.get("n", 2)))
        basis = random_basis(dim, int(p.get("max_det", 64)), rng)
        det = abs(det_exact(basis))
        mode = p.get("mode") or ("box" if rng.random() < 0.5 else "circuit")
        if mode == "box":
            bounds = [int(v) for v in rng.integers(0, 4, size=dim)]
            return Blichfeldt(basis, box_size(bounds), cube_value_circuit(bounds), box_width(bounds))
        s = int(p.get("s", rng.integers(1, 2 * det + 2)))
        width = int(p.get("coord_width", rng.integers(1, 4)))
        vf = random_circuit(bits_for(s), int(p.get("gates", 10)), dim * width, rng, FIVE_KINDS)
        return Blichfeldt(basis, s, vf, width)
    if kind == "csis":
        ell = int(p.get("ell", 2))
        q = int(p.get("q", 1 << ell))
        n, d = int(p.get("n", 1)), int(p.get("d", 2))
        k = n * ell + int(p.get("extra", 0))
        if q < 2 or q > 1 << ell:
            raise ParameterError("need 2 <= q <= 2^ell")
        if n < 1 or d < 0 or k < n * ell:
            raise ParameterError("need m >= (n + d) * ell")
        A = ZqMatrix(q, tuple(tuple(int(v) for v in rng.integers(0, q, size=d * ell + k)) for _ in range(n)))
        G = sample_binary_invertible(GadgetShape(d, ell, k), q, rng)
        b = tuple(int(v) for v in rng.integers(0, q, size=d))
        return Csis(A, G, b, ell)
    if kind == "weakcsis":
        params_ = HashParams(
            k=int(p.get("k", 5)), ell=int(p.get("ell", 2)), d=int(p.get("d", 2)), r=int(p.get("r", 2))
        )
        return WeakCsis(crhash.keygen(params_, int(rng.integers(0, 2**63))))
    if kind == "minkowski":
        dim = int(p.get("dim", p.get("n", 2)))
        basis = random_basis(dim, int(p.get("max_det", 64)), rng)
        norm = p.get("p")
        if norm is None:
            norm = [1, 2, 3, INF][int(rng.integers(4))]
        return Minkowski(basis, norm if norm == INF else int(norm))
    if kind == "dlog":
        prime = p.get("prime")
        if prime is None:
            choices = [q for q in primes_up_to(int(p.get("max_prime", 257))) if q >= 3]
            prime = choices[int(rng.integers(len(choices)))]
        prime = int(prime)
        if prime not in primes_up_to(prime):
            raise ParameterError(f"{prime} is not prime")
        roots = primitive_roots(prime)
        c = roots[int(rng.integers(len(roots)))]
        target = int(p.get("y", rng.integers(0, prime - 1)))
        return zp_star_instance(prime, c, target)
    raise ParameterError(f"unknown problem kind {kind!r}")


# -- serialization ---------------------------------------------------------------

TAGS = {
    PigeonholeCircuit: "pigeonhole",
    Collision: "collision",
    Blichfeldt: "blichfeldt",
    Csis: "csis",
    WeakCsis: "weakcsis",
    Minkowski: "minkowski",
    Dlog: "dlog",
}


def instance_to_dict(inst: Instance) -> dict:
    tag = TAGS[type(inst)]
    if isinstance(inst, (PigeonholeCircuit, Collision)):
        payload = {"circuit": inst.circuit.to_dict()}
    elif isinstance(inst, Blichfeldt):
        payload = {
            "basis": basis_to_dict(inst.basis),
            "s": inst.s,
            "coord_width": inst.coord_width,
            "value_fn": inst.value_fn.to_dict(),
        }
    elif isinstance(inst, Csis):
        payload = {"A": inst.A.to_dict(), "G": inst.G.to_dict(), "b": list(inst.b), "ell": inst.ell}
    elif isinstance(inst, WeakCsis):
        payload = inst.key.to_dict()
    elif isinstance(inst, Minkowski):
        payload = {"basis": basis_to_dict(inst.basis), "p": inst.p}
    else:
        payload = {"s": inst.s, "g": inst.g, "identity": inst.identity, "y": inst.y, "f": inst.f.to_dict()}
    return {"problem": tag, "payload": payload}


def instance_from_dict(data: dict) -> Instance:
    try:
        tag, pl = data["problem"], data["payload"]
        if tag == "pigeonhole":
            return PigeonholeCircuit(Circuit.from_dict(pl["circuit"]))
        if tag == "collision":
            return Collision(Circuit.from_dict(pl["circuit"]))
        if tag == "blichfeldt":
            return Blichfeldt(
                basis_from_dict(pl["basis"]), int(pl["s"]), Circuit.from_dict(pl["value_fn"]), int(pl["coord_width"])
            )
        if tag == "csis":
            return Csis(
                ZqMatrix.from_dict(pl["A"]), BinaryInvertible.from_dict(pl["G"]), tuple(pl["b"]), int(pl["ell"])
            )
        if tag == "weakcsis":
            return WeakCsis(HashKey.from_dict(pl))
        if tag == "minkowski":
            norm = pl["p"]
            return Minkowski(basis_from_dict(pl["basis"]), norm if norm == INF else int(norm))
        if tag == "dlog":
            return Dlog(int(pl["s"]), int(pl["g"]), int(pl["identity"]), Circuit.from_dict(pl["f"]), int(pl["y"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedError(f"malformed instance: {exc}") from exc
    raise MalformedError(f"unknown problem tag {data.get('problem')!r}")


def _plain(v: Any) -> Any:
    if isinstance(v, (tuple, list)):
        return [_plain(x) for x in v]
    return int(v) if isinstance(v, (int, np.integer)) else v


def solution_to_dict(sol: Solution) -> dict:
    if isinstance(sol, Preimage):
        return {"solution": "preimage", "x": _plain(sol.x)}
    if isinstance(sol, CollisionPair):
        return {"solution": "collision_pair", "x": _plain(sol.x), "y": _plain(sol.y)}
    if isinstance(sol, LatticePoint):
        return {"solution": "lattice_point", "v": _plain(sol.v), "index": sol.index}
    if isinstance(sol, LatticePair):
        return {
            "solution": "lattice_pair",
            "x": _plain(sol.x),
            "y": _plain(sol.y),
            "indices": _plain(sol.indices) if sol.indices is not None else None,
        }
    if isinstance(sol, TrivialZero):
        return {"solution": "trivial_zero"}
    if isinstance(sol, InvalidWitness):
        return {"solution": "invalid_witness", "z": sol.z, "w": sol.w}
    raise TypeError(f"unknown solution type {type(sol).__name__}")


def _restore(v: Any) -> Any:
    return tuple(_restore(x) for x in v) if isinstance(v, list) else v


def solution_from_dict(data: dict) -> Solution:
    try:
        tag = data["solution"]
        if tag == "preimage":
            return Preimage(_restore(data["x"]))
        if tag == "collision_pair":
            return CollisionPair(_restore(data["x"]), _restore(data["y"]))
        if tag == "lattice_point":
            return LatticePoint(_restore(data["v"]), data.get("index"))
        if tag == "lattice_pair":
            idx = data.get("indices")
            return LatticePair(_restore(data["x"]), _restore(data["y"]), tuple(idx) if idx is not None else None)
        if tag == "trivial_zero":
            return TrivialZero()
        if tag == "invalid_witness":
            return InvalidWitness(int(data["z"]), int(data["w"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedError(f"malformed solution: {exc}") from exc
    raise MalformedError(f"unknown solution tag {data.get('solution')!r}")
