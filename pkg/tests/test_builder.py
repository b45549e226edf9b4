from hypothesis import given
from hypothesis import strategies as st

from pppkit import gadgets
from pppkit.bits import bc, bd
from pppkit.builder import Builder, msb_first
from pppkit.circuit import evaluate


def run_word(build, width_in, values, widths):
    """Build a word-level circuit on packed inputs and evaluate it."""
    bld = Builder(sum(widths))
    words, start = [], 0
    for w in widths:
        words.append(bld.input_word(start, w))
        start += w
    out = build(bld, *words)
    c = bld.build(msb_first(out))
    bits = tuple(b for v, w in zip(values, widths) for b in bd(v, w))
    return bc(evaluate(c, bits)) if out else 0


small = st.integers(0, 31)


@given(small, small)
def test_add_sub_mul(a, b):
    assert run_word(lambda k, x, y: k.add(x, y), 0, (a, b), (5, 5)) == a + b
    assert run_word(lambda k, x, y: k.mul(x, y), 0, (a, b), (5, 5)) == a * b
    diff = run_word(lambda k, x, y: k.sub(x, y)[0], 0, (a, b), (5, 5))
    assert diff == (a - b) % 32


@given(small, st.integers(1, 40))
def test_divmod_and_compare(a, c):
    assert run_word(lambda k, x: k.pad(k.mod_const(x, c), 6), 0, (a,), (5,)) == a % c
    quotient = run_word(lambda k, x: k.pad(k.divmod_const(x, c)[0], 6), 0, (a,), (5,))
    assert quotient == a // c
    assert run_word(lambda k, x: [k.ge_const(x, c)], 0, (a,), (5,)) == int(a >= c)
    assert run_word(lambda k, x: [k.eq_const(x, c)], 0, (a,), (5,)) == int(a == c)


@given(st.integers(2, 13), st.data())
def test_modular_words(q, data):
    a = data.draw(st.integers(0, q - 1))
    b = data.draw(st.integers(0, q - 1))
    w = (q - 1).bit_length()
    assert run_word(lambda k, x, y: k.pad(k.add_mod(x, y, q), w), 0, (a, b), (w, w)) == (a + b) % q
    assert run_word(lambda k, x, y: k.pad(k.sub_mod(x, y, q), w), 0, (a, b), (w, w)) == (a - b) % q


@given(st.lists(st.integers(0, 20), min_size=1, max_size=3), st.integers(2, 9), st.data())
def test_dot_product_gadget(consts, q, data):
    width = 2
    xs = [data.draw(st.integers(0, 3)) for _ in consts]
    c = gadgets.dot_product_mod(consts, width, q)
    bits = tuple(b for v in xs for b in bd(v, width))
    assert bc(evaluate(c, bits)) == sum(a * x for a, x in zip(consts, xs)) % q


def test_small_gadgets():
    mr = gadgets.mixed_radix_index([3, 2])
    for d0 in range(3):
        for d1 in range(2):
            bits = bd(d0, 2) + (d1,)
            assert bc(evaluate(mr, bits)) == d0 * 2 + d1
    ad = gadgets.abs_diff(5, 4)
    mc = gadgets.mod_const(7, 4)
    ge = gadgets.compare_const(9, 4)
    for x in range(16):
        bits = bd(x, 4)
        assert bc(evaluate(ad, bits)) == abs(x - 5)
        assert bc(evaluate(mc, bits)) == x % 7
        assert evaluate(ge, bits) == (int(x >= 9),)
    m = gadgets.mux(2)
    assert bc(evaluate(m, (1, 1, 0, 0, 1))) == 2
    assert bc(evaluate(m, (0, 1, 0, 0, 1))) == 1
