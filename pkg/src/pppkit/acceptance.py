"""The ten acceptance checks, each exhaustive or seeded and exact."""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import crhash
from .bits import bd
from .circuit import AND, NAND, NOR, OR, XOR, Circuit, truth_table
from .crhash import HashParams, all_inputs
from .errors import ParameterError
from .instances import (
    CollisionPair,
    Minkowski,
    Preimage,
    corrupt_group,
    gen_random,
    primes_up_to,
    primitive_roots,
    random_basis,
    shortest_inf_norm,
    zp_star_instance,
)
from .lattice import (
    adjugate,
    CosetIndexer,
    det_exact,
    in_lattice,
    iroot,
    iroot_many,
    matmul,
    parallelepiped_points,
    qary_basis,
    snf,
)
from .reductions import NATIVE, REDUCTIONS, roundtrip
from .reductions.csis import gate_equation_holds
from .zqlin import GadgetShape, ZqMatrix, backsolve, binary_solutions, is_binary_invertible, matvec_mod, sample_binary_invertible


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] criterion {self.number:2d} ({self.name}): {self.detail} [{self.seconds:.2f}s]"


class Failed(Exception):
    pass


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise Failed(message)


# Expression values from the reference table, rows (x, y, z, w) in binary order,
# columns w+2z-x-y, z+2w-x-y, w+2z+x+y.
REFERENCE_TABLE = [
    (0, 0, 0), (1, 2, 1), (2, 1, 2), (-1, -1, -1),
    (-1, -1, 1), (0, 1, 2), (1, 0, -1), (2, 2, 0),
    (-1, -1, 1), (0, 1, 2), (1, 0, -1), (2, 2, 0),
    (2, 2, 2), (-1, 0, -1), (0, -1, 0), (1, 1, 1),
]  # fmt: skip

# (gate, table column, right-hand side, value function, auxiliary function)
EQUATIONS = [
    (NAND, 0, 2, lambda x, y: 1 - (x & y), lambda x, y: x ^ y),
    (NOR, 0, 3, lambda x, y: 1 - (x | y), lambda x, y: 1 - (x ^ y)),
    (XOR, 1, 0, lambda x, y: x ^ y, lambda x, y: x & y),
    (AND, 0, 0, lambda x, y: x & y, lambda x, y: x ^ y),
    (OR, 2, 0, lambda x, y: x | y, lambda x, y: x ^ y),
]


def check_gate_tables() -> str:
    checked = 0
    for row, (x, y, z, w) in enumerate(itertools.product((0, 1), repeat=4)):
        direct = ((w + 2 * z - x - y) % 4, (z + 2 * w - x - y) % 4, (w + 2 * z + x + y) % 4)
        _require(tuple(v % 4 for v in REFERENCE_TABLE[row]) == direct, f"table row {row} disagrees")
        for kind, col, rhs, value, aux in EQUATIONS:
            from_table = REFERENCE_TABLE[row][col] % 4 == rhs
            _require(gate_equation_holds(kind, x, y, z, w) == from_table, f"{kind} at {(x, y, z, w)}")
            _require(from_table == (z == value(x, y) and w == aux(x, y)), f"{kind} equivalence at {(x, y, z, w)}")
            checked += 1
    for kind, col, rhs, _, _ in EQUATIONS:
        hits = sum(REFERENCE_TABLE[r][col] % 4 == rhs for r in range(16))
        _require(hits == 4, f"{kind} holds on {hits} assignments")
    return f"{checked} evaluations match"


def check_backsolve() -> str:
    cases = 0
    rng = np.random.default_rng(2)
    for ell, q in ((2, 4), (3, 8), (2, 3)):
        for d in (1, 2):
            for k in (0, 1, 2):
                for _ in range(3):
                    g = sample_binary_invertible(GadgetShape(d, ell, k), q, rng)
                    _require(is_binary_invertible(g.matrix, g.shape), "sampled G is not binary invertible")
                    top = all_inputs(d * ell)
                    for b in itertools.product(range(q), repeat=d):
                        for free in itertools.product((0, 1), repeat=k):
                            r = backsolve(g, free, b)
                            _require(matvec_mod(g.matrix, r + free) == b, "backsolve output does not solve")
                            sols = [tuple(int(v) for v in t) for t in top if matvec_mod(g.matrix, tuple(int(v) for v in t) + free) == b]
                            if q == 1 << ell:
                                _require(sols == [r], f"solution not unique for q={q}")
                            else:
                                got = binary_solutions(g, b, np.array([free], dtype=np.int64).reshape(1, k))
                                _require(
                                    sorted(tuple(int(v) for v in row[: d * ell]) for row in got) == sorted(sols),
                                    "completion enumeration disagrees",
                                )
                            cases += 1
    return f"{cases} (G, b, r_free) cases"


def check_snf() -> str:
    rng = np.random.default_rng(3)
    for trial in range(200):
        n = 1 + trial % 3
        basis = random_basis(n, 64, rng)
        dec = snf(basis)
        diag = [[dec.D[i][j] for j in range(n)] for i in range(n)]
        _require(all(diag[i][j] == 0 for i in range(n) for j in range(n) if i != j), "D not diagonal")
        _require(matmul(matmul(dec.U, dec.D), dec.V) == tuple(map(tuple, basis)), "U D V != B")
        _require(abs(det_exact(dec.U)) == 1 and abs(det_exact(dec.V)) == 1, "U or V not unimodular")
        d = dec.diagonal
        _require(all(v > 0 for v in d), "nonpositive diagonal")
        _require(all(d[i] % d[i + 1] == 0 for i in range(n - 1)), "divisibility chain broken")
        det = abs(det_exact(basis))
        pts = parallelepiped_points(basis)
        _require(len(pts) == det, f"|P(B) ∩ Z^n| = {len(pts)} != {det}")
        ix = CosetIndexer.from_basis(basis)
        idx = sorted(int(v) for v in ix.index_many(pts))
        _require(idx == list(range(det)), "coset index is not a bijection onto [det]")
    return "200 bases"


def check_qary() -> str:
    rng = np.random.default_rng(4)
    for trial in range(200):
        q = (2, 4)[trial % 2]
        m = 1 + (trial // 2) % 4
        n = 1 + int(rng.integers(3))
        a = ZqMatrix(q, tuple(tuple(int(v) for v in rng.integers(0, q, size=m)) for _ in range(n)))
        basis = qary_basis(a)
        det = abs(det_exact(basis))
        _require(det <= q**n, f"det {det} > q^n")
        adj, det_signed = adjugate(basis)
        grid = np.array(list(itertools.product(range(-q, q + 1), repeat=m)), dtype=np.int64)
        in_qary = np.all((grid @ a.to_numpy().T) % q == 0, axis=1)
        in_span = np.all((grid @ np.array(adj, dtype=np.int64).T) % det_signed == 0, axis=1)
        _require(bool(np.array_equal(in_qary, in_span)), "membership disagrees inside the window")
        for v in grid[:: max(1, len(grid) // 50)]:
            _require(in_lattice(basis, v.tolist()) == bool(not any(matvec_mod(a, (v % q).tolist()))), f"in_lattice wrong at {v}")
    return "200 matrices, window [-q, q]^m"


def _roundtrip_params(name: str, seed: int) -> tuple[str, dict, dict]:
    n = 1 + seed % 4
    gates = seed % 13
    if name in ("pigeonhole_to_csis", "pigeonhole_to_blichfeldt"):
        return "pigeonhole", {"n": n, "gates": gates}, ({"ell": 2 + seed % 2} if name == "pigeonhole_to_csis" else {})
    if name == "collision_shrink":
        return "collision", {"n": 1 + n, "m": seed % (1 + n), "gates": gates}, {}
    if name == "collision_to_weakcsis":
        nn = 2 + seed % 3
        return "collision", {"n": nn, "m": nn - 2, "gates": gates}, {"ell": 2 + seed % 2}
    if name == "csis_to_pigeonhole":
        ell = 2 + seed % 2
        q = [4, 3, 8, 5, 7, 6][seed % 6] if ell == 3 else [4, 3, 2][seed % 3]
        return "csis", {"n": 1 + seed % 2, "d": seed % 3, "ell": ell, "q": q, "extra": seed % 2}, {}
    if name == "weakcsis_to_collision":
        ell = 2 + seed % 2
        r = 1 + seed % 2
        return "weakcsis", {"ell": ell, "r": r, "d": 1 + seed % 2, "k": r * ell + 1 + seed % 3}, {}
    if name in ("blichfeldt_to_pigeonhole", "minkowski_to_blichfeldt"):
        kind = "blichfeldt" if name == "blichfeldt_to_pigeonhole" else "minkowski"
        return kind, {"dim": 1 + seed % 3, "max_det": 64}, {}
    return "dlog", {"max_prime": 257}, {}


def check_roundtrips() -> str:
    counts = []
    for name in REDUCTIONS:
        for seed in range(100):
            kind, params, fparams = _roundtrip_params(name, seed)
            inst = gen_random(kind, params, seed)
            _, sol, verdict = roundtrip(name, inst, **fparams)
            _require(bool(verdict), f"{name} seed {seed}: {verdict.reason} ({sol})")
        counts.append(name)
    return f"{len(counts)} reductions x 100 seeds accepted"


def check_csis_structure() -> str:
    checked = 0
    for seed in range(100):
        for ell in (2, 3):
            inst = gen_random("pigeonhole", {"n": 1 + seed % 4, "gates": seed % 13}, seed)
            fwd = REDUCTIONS["pigeonhole_to_csis"].forward(inst, ell=ell)
            t = fwd.target
            n, d, m = t.n, t.d, t.m
            _require(is_binary_invertible(t.G.matrix, t.G.shape), "G is not binary invertible")
            _require(m >= (n + d) * ell, "m < (n + d) ell")
            sizes = fwd.layout["block_sizes"]
            _require(sum(sizes) == d, "block sizes do not add up to d")
            c = inst.circuit
            outs = len(t.A.entries)
            aux_start = m - (ell - 1) * outs
            for i, row in enumerate(t.A.entries):
                out = c.outputs[i]
                xor_out = out >= c.num_inputs and c.nodes[out - c.num_inputs].kind == XOR
                k_i = ell * sum(sizes[:i]) + (0 if xor_out else 1)
                expect = [0] * m
                expect[k_i] = 1
                for j in range(1, ell):
                    expect[aux_start + (j - 1) * outs + i] = (1 << j) % t.q
                _require(list(row) == expect, f"A row {i} deviates from the single 1 plus 2^j I layout")
            checked += 1
    return f"{checked} encodings"


def check_fidelity() -> str:
    plans = {
        "csis_to_pigeonhole": lambda s: ("csis", _roundtrip_params("csis_to_pigeonhole", s)[1]),
        "blichfeldt_to_pigeonhole": lambda s: ("blichfeldt", {"dim": 1 + s % 3, "max_det": 64}),
        "weakcsis_to_collision": lambda s: ("weakcsis", _roundtrip_params("weakcsis_to_collision", s)[1]),
        "dlog_to_pigeonhole": lambda s: ("dlog", {"max_prime": 257}),
    }
    total = 0
    for name, plan in plans.items():
        done = seed = 0
        while done < 50:
            kind, params = plan(seed)
            fwd = REDUCTIONS[name].forward(gen_random(kind, params, 1000 + seed))
            seed += 1
            if fwd.target is None:
                continue
            circuit: Circuit = fwd.target.circuit
            width = circuit.num_inputs
            _require(width <= 12, f"{name}: width {width} > 12")
            table = truth_table(circuit)
            for v in range(1 << width):
                x = bd(v, width)
                want = NATIVE[name](fwd, x)
                got = bd(int(table[v]), circuit.num_outputs) if circuit.num_outputs else ()
                _require(got == want, f"{name}: input {x} gives {got}, native {want}")
            done += 1
            total += 1
    return f"{total} emitted circuits agree on every input"


def check_hash() -> str:
    try:
        HashParams(k=4, ell=2, d=1, r=2)
        raise Failed("non-shrinking parameters were accepted")
    except ParameterError:
        pass
    key = crhash.example_key()
    _require(crhash.completion(key, (1, 0, 1)) == (0, 1), "toy completion is not (0, 1)")
    _require(crhash.evaluate(key, (1, 0, 1)) == (1, 0), "toy digest is not 10")
    _require(crhash.evaluate(key, (0, 0, 0)) == (0, 0), "zero input does not hash to zero")
    rng = np.random.default_rng(8)
    for trial in range(100):
        ell = 2 + trial % 2
        r = 1 + trial % 3
        k = min(14, r * ell + 2 + trial % 5)
        params = HashParams(k=k, ell=ell, d=1 + trial % 3, r=r)
        hk = crhash.keygen(params, trial)
        x1, x2 = crhash.birthday_attack(hk, rng)
        z = crhash.extract_sis_witness(hk, x1, x2).z
        _require(any(z) and max(abs(v) for v in z) == 1, "witness is zero or not of infinity norm 1")
        zq = [v % hk.params.q for v in z]
        _require(not any(matvec_mod(hk.A, zq)), "A z != 0")
        _require(not any(matvec_mod(hk.G.matrix, zq)), "G z != 0")
    return "shrinkage enforced, toy digest 10, 100 witnesses valid"


def check_minkowski() -> str:
    rng = np.random.default_rng(9)
    for trial in range(100):
        n = 1 + trial % 3
        basis = random_basis(n, 64, rng)
        p = [1, 2, 3, "inf"][trial % 4]
        inst = Minkowski(basis, p)
        _, sol, verdict = roundtrip("minkowski_to_blichfeldt", inst)
        _require(bool(verdict), f"trial {trial}: {verdict.reason}")
        v = sol.v
        norm = max(abs(x) for x in v)
        _require(any(v) and in_lattice(basis, v), "not a nonzero lattice vector")
        _require(norm**n <= inst.det, "infinity norm exceeds det^(1/n)")
        best = shortest_inf_norm(basis, iroot(inst.det, n))
        _require(best is not None and best <= norm, "box search disagrees")
    for n in range(1, 9):
        xs = np.arange(1, 10**6 + 1, dtype=np.int64)
        r = iroot_many(xs, n)
        _require(bool(np.all((r + 1) ** n >= xs + 1)), f"floor claim fails for n={n}")
        for x in (1, 2, 10**6, int(xs[len(xs) // 3])):
            _require(iroot(x, n) == int(r[x - 1]), "vectorized root disagrees with iroot")
    return "100 bases within bound; floor claim for x <= 10^6, n <= 8"


def check_dlog() -> str:
    rng = np.random.default_rng(10)
    solved = certs = 0
    for p in primes_up_to(257):
        roots = primitive_roots(p)
        for _ in range(3):
            c = roots[int(rng.integers(len(roots)))]
            y = int(rng.integers(0, p - 1))
            inst = zp_star_instance(p, c, y)
            _, sol, verdict = roundtrip("dlog_to_pigeonhole", inst)
            _require(bool(verdict) and isinstance(sol, Preimage), f"p={p}: no exponent recovered")
            naive = next(e for e in range(p - 1) if pow(c, e, p) == y + 1)
            _require(sol.x == naive, f"p={p}: exponent {sol.x} != {naive}")
            solved += 1
        if p > 2:
            bad = corrupt_group(zp_star_instance(p, roots[0], 0))
            _require(bad is not None, f"p={p}: no injectivity-breaking flip")
            _, sol, verdict = roundtrip("dlog_to_pigeonhole", bad)
            _require(bool(verdict) and isinstance(sol, CollisionPair), f"p={p}: no invalid-group certificate")
            certs += 1
    return f"{solved} logs match naive search; {certs} corrupted groups certified"


CRITERIA: list[tuple[int, str, Callable[[], str]]] = [
    (1, "gate-equation truth tables", check_gate_tables),
    (2, "binary-invertible solver", check_backsolve),
    (3, "Smith form and coset index", check_snf),
    (4, "q-ary bases", check_qary),
    (5, "reduction roundtrips", check_roundtrips),
    (6, "pigeonhole_to_csis structure", check_csis_structure),
    (7, "emitted-circuit fidelity", check_fidelity),
    (8, "hash family", check_hash),
    (9, "Minkowski bound", check_minkowski),
    (10, "discrete log", check_dlog),
]


def run_one(number: int) -> CriterionResult:
    num, name, fn = next(c for c in CRITERIA if c[0] == number)
    start = time.perf_counter()
    try:
        detail, passed = fn(), True
    except Failed as exc:
        detail, passed = str(exc), False
    return CriterionResult(num, name, passed, detail, time.perf_counter() - start)


def run_all() -> list[CriterionResult]:
    return [run_one(num) for num, _, _ in CRITERIA]
