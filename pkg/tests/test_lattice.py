import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pppkit.bits import bc, bd
from pppkit.circuit import evaluate
from pppkit.errors import SingularMatrixError
from pppkit.instances import random_basis
from pppkit.lattice import (
    CosetIndexer,
    basis_from_dict,
    basis_to_dict,
    box_points,
    box_size,
    box_width,
    cube_characteristic_circuit,
    cube_index_circuit,
    cube_value_circuit,
    det_exact,
    hnf,
    in_lattice,
    integer_kernel,
    iroot,
    iroot_many,
    lattice_coordinates,
    matmul,
    matvec,
    parallelepiped_points,
    qary_basis,
    snf,
)
from pppkit.zqlin import ZqMatrix

bases = st.builds(
    lambda n, seed: random_basis(n, 64, np.random.default_rng(seed)), st.integers(1, 3), st.integers(0, 2**32)
)


def test_det_small_cases():
    assert det_exact(((2, 1), (1, 1))) == 1
    assert det_exact(((0, 1), (1, 0))) == -1
    assert det_exact(((1, 2, 3), (4, 5, 6), (7, 8, 10))) == -3


@settings(max_examples=80)
@given(bases)
def test_snf_invariants(b):
    dec = snf(b)
    n = len(b)
    assert matmul(matmul(dec.U, dec.D), dec.V) == b
    assert abs(det_exact(dec.U)) == 1 and abs(det_exact(dec.V)) == 1
    assert matmul(dec.U, dec.U_inverse) == tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    d = dec.diagonal
    assert all(x > 0 for x in d) and all(d[i] % d[i + 1] == 0 for i in range(n - 1))
    assert abs(det_exact(b)) == int(np.prod(d))


@settings(max_examples=80)
@given(bases)
def test_cosets_partition_the_parallelepiped(b):
    det = abs(det_exact(b))
    pts = parallelepiped_points(b)
    ix = CosetIndexer.from_basis(b)
    assert len(pts) == det == ix.det
    assert sorted(ix.index_many(pts).tolist()) == list(range(det))
    p = tuple(int(v) for v in pts[-1])
    shift = matvec(b, (1,) * len(b))
    assert ix.index(tuple(x + y for x, y in zip(p, shift))) == ix.index(p)


@settings(max_examples=80)
@given(bases, st.lists(st.integers(-5, 5), min_size=3, max_size=3))
def test_membership(b, z):
    z = z[: len(b)]
    v = matvec(b, z)
    assert lattice_coordinates(b, v) == tuple(z)
    for p in parallelepiped_points(b).tolist():
        assert in_lattice(b, [x + y for x, y in zip(p, v)]) == (not any(p))


def test_singular_basis_rejected():
    with pytest.raises(SingularMatrixError):
        CosetIndexer.from_basis(((1, 2), (2, 4)))


@settings(max_examples=60)
@given(st.integers(2, 5), st.integers(1, 2), st.integers(1, 4), st.integers(0, 2**32))
def test_qary_basis(q, n, m, seed):
    a = ZqMatrix(q, tuple(tuple(int(v) for v in np.random.default_rng(seed).integers(0, q, size=m)) for _ in range(n)))
    basis = qary_basis(a)
    assert abs(det_exact(basis)) <= q**n
    for v in itertools.product(range(-q, q + 1), repeat=m):
        assert in_lattice(basis, v) == (not any(sum(x * y for x, y in zip(row, v)) % q for row in a.entries))


def test_hnf_and_kernel():
    h = hnf(((2, 4, 0), (0, 6, 3)))
    assert all(h[i][j] == 0 for i in range(2) for j in range(i + 1, 2))
    k = integer_kernel(((1, 2, 3),))
    assert all(sum(x * y for x, y in zip((1, 2, 3), col)) == 0 for col in zip(*k))


@given(st.integers(0, 10**12), st.integers(1, 9))
def test_iroot_exact(x, n):
    r = iroot(x, n)
    assert r**n <= x < (r + 1) ** n


def test_iroot_many_matches_scalar():
    xs = np.arange(0, 5000, dtype=np.int64)
    for n in (1, 2, 3, 7):
        assert iroot_many(xs, n).tolist() == [iroot(int(x), n) for x in xs]


def test_basis_json():
    b = ((2, 1), (0, 3))
    assert basis_from_dict(basis_to_dict(b)) == b


@pytest.mark.parametrize("bounds", [[2], [1, 2], [3, 0, 1], [2, 2]])
def test_cube_circuits(bounds):
    pts = box_points(bounds)
    w = box_width(bounds)
    assert len(pts) == box_size(bounds)
    vf, ixf, chf = cube_value_circuit(bounds), cube_index_circuit(bounds), cube_characteristic_circuit(bounds)
    for k, p in enumerate(pts):
        out = evaluate(vf, bd(k, vf.num_inputs))
        assert tuple(bc(out[i * w : (i + 1) * w]) for i in range(len(bounds))) == p
        enc = tuple(b for x in p for b in bd(x, w))
        assert bc(evaluate(ixf, enc)) == k
        assert evaluate(chf, enc) == (1,)
    outside = [bounds[0] + 1] + [0] * (len(bounds) - 1)
    if outside[0] < 1 << w:
        assert evaluate(chf, tuple(b for x in outside for b in bd(x, w))) == (0,)
