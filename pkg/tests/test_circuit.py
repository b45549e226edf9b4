import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pppkit.bits import bc, bd, bits_for, from_bitstring, lsb_bits, lsb_compose, to_bitstring
from pppkit.circuit import (
    AND,
    CONST1,
    ID,
    NAND,
    NOR,
    NOT,
    OR,
    XOR,
    Circuit,
    Gate,
    append_nonzero_flag,
    eliminate_const1,
    evaluate,
    evaluate_many,
    is_normalized,
    normalize_indegree2,
    random_circuit,
    rewrite_to_xor_or_basis,
    truth_table,
    truth_table_bits,
    validate,
)
from pppkit.errors import InputArityError, OracleTooLargeError, RangeError

ALL_GATES = (ID, NOT, AND, OR, XOR, NAND, NOR, CONST1)

REFERENCE = {
    AND: lambda a, b: a & b,
    OR: lambda a, b: a | b,
    XOR: lambda a, b: a ^ b,
    NAND: lambda a, b: 1 - (a & b),
    NOR: lambda a, b: 1 - (a | b),
}


def naive_eval(c: Circuit, x):
    vals = list(x)
    for g in c.nodes:
        if g.kind == CONST1:
            vals.append(1)
        elif g.kind == ID:
            vals.append(vals[g.pred1])
        elif g.kind == NOT:
            vals.append(1 - vals[g.pred1])
        else:
            vals.append(REFERENCE[g.kind](vals[g.pred1], vals[g.pred2]))
    return tuple(vals[o] for o in c.outputs)


circuits = st.builds(
    lambda n, g, m, seed: random_circuit(n, g, m, np.random.default_rng(seed), ALL_GATES),
    st.integers(1, 6),
    st.integers(0, 15),
    st.integers(0, 5),
    st.integers(0, 2**32),
)


@given(st.integers(0, 2**20), st.integers(0, 4))
def test_bd_bc_inverse(v, extra):
    w = v.bit_length() + extra
    assert bc(bd(v, w)) == v
    assert lsb_compose(lsb_bits(v, w)) == v
    assert from_bitstring(to_bitstring(bd(v, w))) == bd(v, w)


def test_bit_conventions():
    assert bc((1, 0, 1)) == 5
    assert bd(6, 4) == (0, 1, 1, 0)
    assert bits_for(1) == 1 and bits_for(2) == 1 and bits_for(5) == 3
    with pytest.raises(RangeError):
        bd(8, 3)
    with pytest.raises(RangeError):
        bc((2,))


@settings(max_examples=60)
@given(circuits)
def test_evaluate_matches_reference(c):
    assert validate(c) is None
    for x in itertools.product((0, 1), repeat=c.num_inputs):
        assert evaluate(c, x) == naive_eval(c, x)


@settings(max_examples=40)
@given(circuits)
def test_truth_table_is_packed_evaluation(c):
    table = truth_table(c)
    bits = truth_table_bits(c)
    for v in range(1 << c.num_inputs):
        y = evaluate(c, bd(v, c.num_inputs))
        assert tuple(bits[v]) == y
        assert int(table[v]) == (bc(y) if y else 0)


def test_threads_do_not_change_table():
    c = random_circuit(10, 40, 6, np.random.default_rng(1))
    assert np.array_equal(truth_table(c, threads=1), truth_table(c, threads=4))


def test_budget_guard():
    c = random_circuit(12, 4, 2, np.random.default_rng(0))
    with pytest.raises(OracleTooLargeError):
        truth_table(c, budget=1 << 10)


def test_validate_reports_violations():
    assert validate(Circuit(2, (Gate(AND, 0, 2),), (2,))).kind == "cycle"
    assert validate(Circuit(2, (Gate("MAJ", 0, 1),), (2,))).kind == "unknown_kind"
    assert validate(Circuit(2, (Gate(AND, 0),), (2,))).kind == "arity"
    assert validate(Circuit(2, (), (5,))).kind == "bad_output"
    with pytest.raises(InputArityError):
        evaluate(Circuit(2, (), (0,)), (1,))


def test_json_roundtrip():
    c = random_circuit(4, 10, 3, np.random.default_rng(5), ALL_GATES)
    assert Circuit.from_dict(c.to_dict()) == c


@settings(max_examples=40)
@given(circuits)
def test_xor_or_rewrite_preserves_function(c):
    r = rewrite_to_xor_or_basis(c)
    assert r.kinds() <= {XOR, OR, CONST1}
    xs = list(itertools.product((0, 1), repeat=c.num_inputs))
    assert evaluate_many(r, xs) == evaluate_many(c, xs)


@settings(max_examples=40)
@given(circuits)
def test_const_elimination_and_flag(c):
    r = eliminate_const1(rewrite_to_xor_or_basis(c))
    assert CONST1 not in r.kinds()
    flagged = append_nonzero_flag(r)
    for x in itertools.product((0, 1), repeat=c.num_inputs):
        if any(x):
            assert evaluate(r, x) == evaluate(c, x)
        assert evaluate(flagged, x)[-1] == int(any(x))
        assert evaluate(flagged, x)[:-1] == evaluate(r, x)


def test_normalize_indegree2():
    c = Circuit(1, (Gate(NOT, 0), Gate(ID, 1)), (1, 2))
    n = normalize_indegree2(c)
    assert is_normalized(n)
    assert [evaluate(n, (b,)) for b in (0, 1)] == [evaluate(c, (b,)) for b in (0, 1)]
