import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aesgrover.errors import NotAPowerOfTwo, SingularMatrix
from aesgrover.gf2 import AES_FIELD, NIBBLE_FIELD, BinaryField, GF2Matrix, matrix_of_field_map, plu_decompose, synthesize_linear
from aesgrover.reference import gf_mul
from aesgrover.sim import read, run_basis_batch

SQUARING = GF2Matrix.from_text(
    """
    10001010
    00001011
    01000100
    00001111
    00101001
    00000110
    00010100
    00000011
    """
)
SQUARING_L = GF2Matrix.from_text(
    """
    10000000
    01000000
    00100000
    00010000
    00001000
    00000100
    00001110
    00000011
    """
)
SQUARING_U = GF2Matrix.from_text(
    """
    10001010
    01000100
    00101001
    00010100
    00001011
    00000110
    00000010
    00000001
    """
)


def random_invertible(n: int, rng: random.Random) -> GF2Matrix:
    while True:
        m = GF2Matrix([[rng.randint(0, 1) for _ in range(n)] for _ in range(n)])
        if m.rank() == n:
            return m


def test_squaring_matrix():
    assert matrix_of_field_map(2) == SQUARING


def test_squaring_matrix_acts_like_squaring():
    for a in range(256):
        assert SQUARING.apply(a) == gf_mul(a, a)


def test_squaring_plu_factors():
    f = plu_decompose(SQUARING)
    assert f.perm == (0, 4, 1, 6, 2, 5, 3, 7)
    assert f.L == SQUARING_L
    assert f.U == SQUARING_U
    assert f.recompose() == SQUARING
    assert f.cnot_count() == 12


def test_squaring_circuit_has_twelve_cnots():
    circ = synthesize_linear(SQUARING, list(range(8)))
    assert len(circ.gates) == 12
    outs = run_basis_batch(circ, list(range(256)))
    assert [read(circ, o, range(8)) for o in outs] == [gf_mul(a, a) for a in range(256)]


def test_singular_matrix():
    with pytest.raises(SingularMatrix):
        plu_decompose(GF2Matrix([[1, 1], [1, 1]]))
    with pytest.raises(SingularMatrix):
        GF2Matrix([[1, 1], [1, 1]]).inverse()


def test_non_square_matrix():
    with pytest.raises(SingularMatrix):
        plu_decompose(GF2Matrix([[1, 0, 1], [0, 1, 1]]))


@pytest.mark.parametrize("e", [0, 3, 6, 255])
def test_not_a_power_of_two(e):
    with pytest.raises(NotAPowerOfTwo):
        matrix_of_field_map(e)


@pytest.mark.parametrize("s", range(8))
def test_frobenius_matrices(s):
    m = matrix_of_field_map(1 << s)
    for a in range(256):
        expected = a
        for _ in range(s):
            expected = gf_mul(expected, expected)
        assert m.apply(a) == expected


def test_frobenius_has_order_eight():
    assert SQUARING ** 8 == GF2Matrix.identity(8)
    assert SQUARING ** 4 != GF2Matrix.identity(8)


def test_from_text_round_trip():
    assert GF2Matrix.from_text(str(SQUARING)) == SQUARING


def test_field_arithmetic_matches_reference():
    rng = random.Random(5)
    for _ in range(500):
        a, b = rng.randrange(256), rng.randrange(256)
        assert AES_FIELD.mul(a, b) == gf_mul(a, b)


def test_nibble_field_is_a_field():
    for a in range(1, 16):
        assert sum(NIBBLE_FIELD.mul(a, b) == 1 for b in range(16)) == 1
    assert NIBBLE_FIELD.pow(2, 15) == 1


def test_reduce():
    f = BinaryField(8, 0x11B)
    assert f.reduce(0x100) == 0x1B
    assert f.reduce(0x2B79) == 0xC1  # unreduced 0x57 * 0x83


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 12), st.integers(0, 2**32 - 1))
def test_plu_recomposes(n, seed):
    m = random_invertible(n, random.Random(seed))
    f = plu_decompose(m)
    assert f.recompose() == m
    lo, up = f.L.bits, f.U.bits
    assert np.array_equal(np.tril(lo), lo) and np.all(np.diag(lo) == 1)
    assert np.array_equal(np.triu(up), up) and np.all(np.diag(up) == 1)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 10), st.integers(0, 2**32 - 1))
def test_linear_circuit_computes_the_matrix(n, seed):
    rng = random.Random(seed)
    m = random_invertible(n, rng)
    wires = rng.sample(range(n + 3), n)
    circ = synthesize_linear(m, wires)
    circ_width = circ.width
    for v in [rng.getrandbits(n) for _ in range(20)]:
        state = sum(1 << wires[i] for i in range(n) if v >> i & 1)
        (out,) = run_basis_batch(circ, [state], circ_width)
        got = sum(1 << i for i in range(n) if out >> circ.l2p[wires[i]] & 1)
        assert got == m.apply(v)
    assert len(circ.gates) == plu_decompose(m).cnot_count()


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 10), st.integers(0, 2**32 - 1))
def test_inverse_matrix(n, seed):
    m = random_invertible(n, random.Random(seed))
    assert m @ m.inverse() == GF2Matrix.identity(n)
