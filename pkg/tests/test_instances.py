import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pppkit.bits import bd
from pppkit.circuit import Circuit, Gate, evaluate
from pppkit.errors import MalformedError, ParameterError
from pppkit.instances import (
    Blichfeldt,
    Collision,
    CollisionPair,
    Dlog,
    InvalidWitness,
    LatticePair,
    LatticePoint,
    Minkowski,
    PigeonholeCircuit,
    Preimage,
    TrivialZero,
    brute_force,
    corrupt_group,
    first_event,
    gen_random,
    instance_from_dict,
    instance_to_dict,
    primes_up_to,
    primitive_roots,
    shortest_inf_norm,
    solution_from_dict,
    solution_to_dict,
    verify,
    zp_star_instance,
)
from pppkit.lattice import cube_value_circuit

KINDS = ["pigeonhole", "collision", "blichfeldt", "csis", "weakcsis", "minkowski", "dlog"]
SMALL = {"dlog": {"max_prime": 67}, "pigeonhole": {"n": 4}, "collision": {"n": 4, "m": 2}}


def naive_first(c: Circuit, zero_counts: bool):
    seen = {}
    for v in range(1 << c.num_inputs):
        x = bd(v, c.num_inputs)
        y = evaluate(c, x)
        if zero_counts and not any(y):
            return Preimage(x)
        if y in seen:
            return CollisionPair(seen[y], x)
        seen[y] = x
    return None


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("seed", range(6))
def test_brute_force_is_accepted_and_serializes(kind, seed):
    inst = gen_random(kind, SMALL.get(kind), seed)
    again = instance_from_dict(instance_to_dict(inst))
    assert instance_to_dict(again) == instance_to_dict(inst)
    sol = brute_force(inst)
    assert verify(inst, sol)
    assert solution_from_dict(solution_to_dict(sol)) == sol
    assert gen_random(kind, SMALL.get(kind), seed) == inst or kind == "blichfeldt"


@settings(max_examples=40)
@given(st.integers(0, 2**32), st.booleans())
def test_brute_force_matches_naive_scan(seed, pigeon):
    if pigeon:
        inst = gen_random("pigeonhole", {"n": 3, "gates": 6}, seed)
    else:
        inst = gen_random("collision", {"n": 3, "m": 2, "gates": 6}, seed)
    assert brute_force(inst) == naive_first(inst.circuit, pigeon)


def test_first_event_order():
    assert first_event(np.array([3, 1, 0, 1])) == ("zero", 2)
    assert first_event(np.array([3, 1, 1, 0])) == ("pair", 1, 2)
    assert first_event(np.array([0, 1, 0]), zero_is_event=False) == ("pair", 0, 2)
    assert first_event(np.array([2, 1])) is None


def test_circuit_verifier_rejects_tampering():
    c = Circuit(2, (Gate("XOR", 0, 1),), (2, 0))
    inst = PigeonholeCircuit(c)
    assert verify(inst, Preimage((0, 0)))
    assert not verify(inst, Preimage((1, 0)))
    assert not verify(inst, CollisionPair((0, 1), (0, 1)))
    assert not verify(inst, Preimage((0, 2)))
    assert not verify(Collision(Circuit(2, (), (0,))), CollisionPair((0, 0), (1, 0)))
    assert verify(Collision(Circuit(2, (), (0,))), CollisionPair((0, 0), (0, 1)))


def test_blichfeldt_trivial_and_witnesses():
    basis = ((2, 0), (0, 2))
    small = Blichfeldt(basis, 3, cube_value_circuit([1, 1]), 1)
    assert verify(small, TrivialZero())
    big = Blichfeldt(basis, 4, cube_value_circuit([1, 1]), 1)
    assert not verify(big, TrivialZero())
    assert verify(big, LatticePoint((0, 0), 0))
    assert not verify(big, LatticePoint((1, 0), 1))
    assert not verify(big, LatticePair((0, 1), (1, 0), (1, 2)))
    assert not verify(big, InvalidWitness(1, 2))


def test_minkowski_bounds_are_exact():
    inst = Minkowski(((4, 0), (0, 4)), "inf")
    assert inst.within_bound((4, 0)) and not inst.within_bound((5, 0))
    l1 = Minkowski(((4, 0), (0, 4)), 1)
    assert l1.within_bound((4, 4)) and not l1.within_bound((5, 4))
    assert verify(inst, LatticePoint((0, 4)))
    assert not verify(inst, LatticePoint((0, 0)))
    assert not verify(inst, LatticePoint((1, 0)))
    with pytest.raises(ParameterError):
        Minkowski(((1, 0), (0, 1)), 0)
    assert shortest_inf_norm(((3, 1), (0, 2)), 3) == 2


@pytest.mark.parametrize("p", [3, 5, 11, 29, 101])
def test_dlog_powers_are_modular_exponentiation(p):
    c = primitive_roots(p)[0]
    inst = zp_star_instance(p, c, 0)
    assert inst.powers().tolist() == [pow(c, x, p) - 1 for x in range(p - 1)]
    assert all(inst.power(x) == pow(c, x, p) - 1 for x in range(p - 1))
    y = (pow(c, 3, p) - 1) % (p - 1) if p > 5 else 1
    sol = brute_force(zp_star_instance(p, c, y))
    assert isinstance(sol, Preimage) and pow(c, sol.x, p) == y + 1


def test_primitive_roots():
    assert primes_up_to(20) == [2, 3, 5, 7, 11, 13, 17, 19]
    assert primitive_roots(7) == [3, 5]


@pytest.mark.parametrize("p", [3, 7, 13, 31])
def test_corrupted_group_gives_collision(p):
    bad = corrupt_group(zp_star_instance(p, primitive_roots(p)[0], 0))
    assert bad is not None
    sol = brute_force(bad)
    assert isinstance(sol, CollisionPair) and verify(bad, sol)


def test_dlog_verifier():
    inst = zp_star_instance(7, 3, 5)  # 3^5 = 243 = 5 mod 7, index 4
    assert not verify(inst, Preimage(4))
    x = next(e for e in range(6) if pow(3, e, 7) == 6)
    assert verify(inst, Preimage(x))
    assert not verify(inst, CollisionPair(1, 1))
    assert not verify(inst, CollisionPair(1, 2))


@pytest.mark.parametrize(
    "bad",
    [
        {},
        {"problem": "nope", "payload": {}},
        {"problem": "pigeonhole", "payload": {}},
        {"problem": "dlog", "payload": {"s": "x"}},
    ],
)
def test_malformed_instances(bad):
    with pytest.raises(MalformedError):
        instance_from_dict(bad)


def test_malformed_solutions():
    for bad in ({}, {"solution": "preimage"}, {"solution": "mystery"}):
        with pytest.raises(MalformedError):
            solution_from_dict(bad)


def test_gen_random_parameter_checks():
    with pytest.raises(ParameterError):
        gen_random("collision", {"n": 3, "m": 3})
    with pytest.raises(ParameterError):
        gen_random("csis", {"ell": 2, "q": 5})
    with pytest.raises(ParameterError):
        gen_random("dlog", {"prime": 9})
    with pytest.raises(ParameterError):
        gen_random("unknown")


def test_dlog_type_exposes_table():
    inst = zp_star_instance(5, 2, 0)
    t = inst.table()
    for a, b in itertools.product(range(4), repeat=2):
        assert t[a, b] == ((a + 1) * (b + 1) - 1) % 5
    assert isinstance(inst, Dlog) and inst.width == 2
