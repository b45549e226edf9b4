"""Small hand-checkable cases for each reduction."""
import itertools

import numpy as np

from pppkit.circuit import NAND, NOR, Circuit, Gate
from pppkit.instances import (
    Collision,
    CollisionPair,
    Csis,
    LatticePoint,
    Minkowski,
    PigeonholeCircuit,
    Preimage,
    brute_force,
    verify,
    zp_star_instance,
)
from pppkit.lattice import in_lattice
from pppkit.reductions import REDUCTIONS, roundtrip, solve_forwarded
from pppkit.reductions.csis import encode_circuit
from pppkit.zqlin import GadgetShape, ZqMatrix, matvec_mod, sample_binary_invertible


def test_nand_witness_maps_to_its_input():
    inst = PigeonholeCircuit(Circuit(1, (Gate(NAND, 0, 0),), (1,)))
    fwd = REDUCTIONS["pigeonhole_to_csis"].forward(inst)
    s = (0, 0, 1, 0)
    assert matvec_mod(fwd.target.G.matrix, s) == fwd.target.b
    assert not any(matvec_mod(fwd.target.A, s))
    back = REDUCTIONS["pigeonhole_to_csis"].back(fwd, Preimage(s))
    assert back == Preimage((1,)) and verify(inst, back)


def test_verbatim_mod4_lift_has_no_solution_at_q8():
    # NAND at x = y = 1 needs w + 2z = 4 (mod 8), out of reach for bits z, w.
    assert not any((w + 2 * z - 2) % 8 == 2 for z, w in itertools.product((0, 1), repeat=2))
    A, G, b, layout = encode_circuit(Circuit(2, (Gate(NAND, 0, 1),), (2,)), 3)
    row, cols = G.matrix.entries[0], layout["input_columns"]
    for x, y in itertools.product((0, 1), repeat=2):
        hits = []
        for t in itertools.product((0, 1), repeat=3):
            s = list(t) + [0] * (len(row) - 3)
            s[cols[0]], s[cols[1]] = x, y
            if sum(r * v for r, v in zip(row, s)) % 8 == b[0]:
                hits.append(t)
        assert len(hits) == 1 and hits[0][1] == 1 - (x & y)


def test_zero_matrix_hash_circuit_is_constant():
    g = sample_binary_invertible(GadgetShape(1, 2, 2), 4, np.random.default_rng(0))
    inst = Csis(ZqMatrix(4, ((0, 0, 0, 0),)), g, (1,), 2)
    fwd = REDUCTIONS["csis_to_pigeonhole"].forward(inst)
    assert brute_force(fwd.target) == Preimage((0, 0))


def test_identity_circuit_to_blichfeldt():
    inst = PigeonholeCircuit(Circuit(1, (), (0,)))
    fwd = REDUCTIONS["pigeonhole_to_blichfeldt"].forward(inst)
    basis = fwd.target.basis
    assert in_lattice(basis, (0, 2)) and not in_lattice(basis, (0, 1)) and in_lattice(basis, (1, 0))
    sol = brute_force(fwd.target)
    assert isinstance(sol, LatticePoint) and tuple(sol.v) == (0, 0)
    assert REDUCTIONS["pigeonhole_to_blichfeldt"].back(fwd, sol) == Preimage((0,))


def test_constant_zero_shrink():
    inst = Collision(Circuit(2, (Gate(NOR, 0, 0), Gate(NOR, 0, 2)), (3,)))  # NOR(x, NOT x) = 0
    fwd = REDUCTIONS["collision_shrink"].forward(inst)
    assert fwd.target.circuit.num_inputs == 3 and fwd.target.circuit.num_outputs == 1
    back = solve_forwarded(fwd)
    assert isinstance(back, CollisionPair) and verify(inst, back)


def test_unit_lattice_minkowski():
    inst = Minkowski(((1, 0), (0, 1)), "inf")
    fwd = REDUCTIONS["minkowski_to_blichfeldt"].forward(inst)
    assert fwd.layout["ell"] == 1 and fwd.target.s == 3
    values = [fwd.target.value(z) for z in range(3)]
    assert values == [(0, 1), (1, 0), (1, 1)]
    _, sol, verdict = roundtrip("minkowski_to_blichfeldt", inst)
    assert verdict and max(abs(v) for v in sol.v) == 1


def test_z5_discrete_log():
    inst = zp_star_instance(5, 2, 2)
    _, sol, verdict = roundtrip("dlog_to_pigeonhole", inst)
    assert verdict and sol == Preimage(3)


def test_exponent_zero_hits_identity():
    inst = zp_star_instance(7, 3, 0)
    _, sol, verdict = roundtrip("dlog_to_pigeonhole", inst)
    assert verdict and sol == Preimage(0)
