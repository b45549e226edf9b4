import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pppkit import crhash
from pppkit.bits import bc
from pppkit.crhash import HashKey, HashParams, SisWitness
from pppkit.errors import InputArityError, NotACollisionError, OracleTooLargeError, ParameterError
from pppkit.zqlin import matvec_mod

params = st.builds(
    lambda ell, r, d, extra: HashParams(k=r * ell + 1 + extra, ell=ell, d=d, r=r),
    st.integers(2, 3),
    st.integers(1, 2),
    st.integers(1, 2),
    st.integers(0, 3),
)


def test_toy_key():
    key = crhash.example_key()
    assert crhash.completion(key, (1, 0, 1)) == (0, 1)
    assert crhash.evaluate(key, (1, 0, 1)) == (1, 0)


@pytest.mark.parametrize("k, ell, r", [(4, 2, 2), (2, 1, 2), (3, 3, 1)])
def test_non_shrinking_parameters_rejected(k, ell, r):
    with pytest.raises(ParameterError):
        HashParams(k=k, ell=ell, d=1, r=r)


@settings(max_examples=40)
@given(params, st.integers(0, 2**32))
def test_evaluate_is_linear_in_the_completion(p, seed):
    key = crhash.keygen(p, seed)
    xs = crhash.all_inputs(p.k)
    batch = crhash.evaluate_batch(key, xs)
    for x, h in zip(xs.tolist(), batch.tolist()):
        u = crhash.completion(key, x)
        assert not any(matvec_mod(key.G.matrix, u + tuple(x)))
        assert bc(crhash.evaluate(key, x)) == h
    assert crhash.evaluate(key, (0,) * p.k) == (0,) * key.output_bits


@settings(max_examples=40)
@given(params, st.integers(0, 2**32))
def test_collisions_give_short_kernel_vectors(p, seed):
    key = crhash.keygen(p, seed)
    x1, x2 = crhash.find_collision(key)
    assert x1 != x2 and crhash.evaluate(key, x1) == crhash.evaluate(key, x2)
    w = crhash.extract_sis_witness(key, x1, x2)
    assert crhash.check_sis_witness(key, w)
    y1, y2 = crhash.birthday_attack(key, np.random.default_rng(seed))
    assert crhash.check_sis_witness(key, crhash.extract_sis_witness(key, y1, y2))


def test_witness_checks():
    key = crhash.keygen(HashParams(5, 2, 2, 2), 0)
    assert not crhash.check_sis_witness(key, SisWitness((0,) * key.params.columns))
    assert not crhash.check_sis_witness(key, SisWitness((2,) + (0,) * (key.params.columns - 1)))
    with pytest.raises(NotACollisionError):
        crhash.extract_sis_witness(key, (0,) * 5, (0,) * 5)
    with pytest.raises(InputArityError):
        crhash.evaluate(key, (1, 0))
    with pytest.raises(OracleTooLargeError):
        crhash.find_collision(key, budget=4)


def test_key_json():
    key = crhash.keygen(HashParams(7, 3, 1, 2), 11)
    assert HashKey.from_dict(key.to_dict()) == key


def test_combiner_and_chaining():
    keys = [crhash.keygen(HashParams(9, 2, 1, 1), s) for s in range(3)]
    comb = crhash.combine(keys)
    assert comb.output_bits == 6
    x1, x2 = comb.find_collision()
    assert comb(x1) == comb(x2) and all(crhash.evaluate(k, x1) == crhash.evaluate(k, x2) for k in keys)
    with pytest.raises(ParameterError):
        crhash.combine(keys * 2)
    key = keys[0]
    msg = (1, 0, 1)
    padded = msg + (1,) + (0,) * 6 + crhash.bd(len(msg), 32)
    state = (0, 0)
    for i in range(0, len(padded), 7):
        state = crhash.evaluate(key, state + padded[i : i + 7])
    assert crhash.md_hash(key, msg) == state
