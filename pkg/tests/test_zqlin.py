import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pppkit.crhash import all_inputs
from pppkit.errors import ModulusMismatchError, ParameterError, ShapeError
from pppkit.zqlin import (
    BinaryInvertible,
    GadgetShape,
    ZqMatrix,
    ZqVector,
    backsolve,
    backsolve_batch,
    binary_solutions,
    gadget_matrix,
    gadget_vector,
    is_binary_invertible,
    matvec_mod,
    sample_binary_invertible,
)


@st.composite
def gadget_systems(draw, full_modulus=True):
    ell = draw(st.integers(1, 3))
    q = 1 << ell if full_modulus else draw(st.integers(2, 1 << ell))
    shape = GadgetShape(draw(st.integers(0, 3)), ell, draw(st.integers(0, 3)))
    g = sample_binary_invertible(shape, q, np.random.default_rng(draw(st.integers(0, 2**32))))
    b = tuple(draw(st.integers(0, q - 1)) for _ in range(shape.d))
    free = tuple(draw(st.integers(0, 1)) for _ in range(shape.k))
    return g, b, free


def test_matrix_basics():
    m = ZqMatrix(5, ((1, 7), (-1, 3)))
    assert m.entries == ((1, 2), (4, 3))
    assert matvec_mod(m, (1, 1)) == (3, 2)
    assert ZqMatrix.from_dict(m.to_dict()) == m
    with pytest.raises(ShapeError):
        matvec_mod(m, (1,))
    with pytest.raises(ModulusMismatchError):
        matvec_mod(m, ZqVector(4, (1, 1)))
    with pytest.raises(ShapeError):
        ZqMatrix(3, ((1,), (1, 2)))


def test_gadget_structure():
    assert gadget_vector(3) == (1, 2, 4)
    assert gadget_vector(3, 5) == (1, 2, 4)
    gm = gadget_matrix(2, 2, 4)
    assert gm.matrix.entries == ((1, 2, 0, 0), (0, 0, 1, 2))
    bad = ZqMatrix(4, ((1, 2, 0, 0), (1, 0, 1, 2)))
    assert not is_binary_invertible(bad, GadgetShape(2, 2, 0))
    with pytest.raises(ParameterError):
        BinaryInvertible(bad, GadgetShape(2, 2, 0))
    with pytest.raises(ParameterError):
        sample_binary_invertible(GadgetShape(1, 2, 0), 5, np.random.default_rng(0))


@settings(max_examples=150)
@given(gadget_systems())
def test_backsolve_is_the_unique_solution(system):
    g, b, free = system
    r = backsolve(g, free, b)
    assert set(r) <= {0, 1}
    assert matvec_mod(g.matrix, r + free) == b
    top = g.shape.d * g.shape.ell
    if top <= 9:
        hits = [t for t in itertools.product((0, 1), repeat=top) if matvec_mod(g.matrix, t + free) == b]
        assert hits == [r]


@settings(max_examples=100)
@given(gadget_systems(full_modulus=False))
def test_solution_enumeration_for_small_moduli(system):
    g, b, free = system
    top = g.shape.d * g.shape.ell
    got = binary_solutions(g, b, np.array([free], dtype=np.int64).reshape(1, g.shape.k))
    want = sorted(t for t in itertools.product((0, 1), repeat=top) if matvec_mod(g.matrix, t + free) == b)
    assert sorted(tuple(int(v) for v in row[:top]) for row in got) == want
    assert tuple(backsolve(g, free, b)) in want


@settings(max_examples=50)
@given(gadget_systems())
def test_batch_agrees_with_scalar(system):
    g, b, _ = system
    frees = all_inputs(g.shape.k)
    batch = backsolve_batch(g, frees, b)
    for row, free in zip(batch, frees):
        assert tuple(int(v) for v in row) == backsolve(g, tuple(int(v) for v in free), b)


def test_binary_invertible_json():
    g = sample_binary_invertible(GadgetShape(2, 3, 2), 8, np.random.default_rng(3))
    assert BinaryInvertible.from_dict(g.to_dict()) == g
