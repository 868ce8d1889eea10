import pytest

from aesgrover.circuit import Circuit, resources
from aesgrover.errors import WireGroupOverlap
from aesgrover.gf2 import NIBBLE_FIELD
from aesgrover.lowering import lowered_resources
from aesgrover.reference import gf_inv, gf_mul, sbox_ref
from aesgrover.sim import load, read, run_basis_batch
from aesgrover.synth.field import (
    NIBBLE_INVERSION,
    build_inversion,
    build_multiplier,
    build_sbox,
    inversion_template,
    multiplier_template,
    sbox_template,
    sbox_value,
)

A, B, C = list(range(8)), list(range(8, 16)), list(range(16, 24))


def run_registers(circ: Circuit, inputs: list[list[tuple[list[int], int]]], regs: list[list[int]]) -> list[tuple[int, ...]]:
    states = [load(circ, assignment) for assignment in inputs]
    return [tuple(read(circ, s, r) for r in regs) for s in run_basis_batch(circ, states)]


def nibble_inverse(a: int) -> int:
    return next((b for b in range(16) if NIBBLE_FIELD.mul(a, b) == 1), 0)


def test_multiplier_exhaustive():
    circ = build_multiplier(A, B, C)
    inputs = [[(A, a), (B, b)] for a in range(256) for b in range(256)]
    got = run_registers(circ, inputs, [A, B, C])
    assert got == [(a, b, gf_mul(a, b)) for a in range(256) for b in range(256)]


def test_multiplier_counts():
    rv = resources(multiplier_template())
    assert rv.counts == {"TOF": 64, "CNOT": 21}


def test_multiplier_accumulates():
    circ = build_multiplier(A, B, C, accumulate=True)
    cases = [(a, b, c) for a in (0, 1, 0x57, 0xFF) for b in range(0, 256, 7) for c in (0, 0x1B, 0xA5)]
    got = run_registers(circ, [[(A, a), (B, b), (C, c)] for a, b, c in cases], [C])
    assert got == [(c ^ gf_mul(a, b),) for a, b, c in cases]


def test_multiplier_uncompute_clears_product():
    circ = build_multiplier(A, B, C)
    build_multiplier(A, B, C, circ, uncompute=True)
    got = run_registers(circ, [[(A, a), (B, 0x8D)] for a in range(256)], [C])
    assert set(got) == {(0,)}


def test_multiplier_rejects_overlap():
    with pytest.raises(WireGroupOverlap):
        build_multiplier(A, A, C)


def test_multiplier_rejects_wrong_size():
    with pytest.raises(ValueError):
        build_multiplier(A[:7], B, C)


def test_inversion_exhaustive():
    circ = build_inversion(A, B, list(range(16, 40)))
    got = run_registers(circ, [[(A, a)] for a in range(256)], [A, B, list(range(16, 40))])
    assert got == [(a, gf_inv(a), 0) for a in range(256)]


def test_inversion_resources():
    circ, stats = inversion_template()
    assert (stats.multiplications, stats.linear_maps, stats.linear_cnots) == (8, 8, 144)
    assert resources(circ).toffoli_count == 512
    assert circ.width == 40


def test_sbox_exhaustive():
    anc = list(range(16, 40))
    circ = build_sbox(A, B, anc)
    got = run_registers(circ, [[(A, a)] for a in range(256)], [A, B, anc])
    assert got == [(a, sbox_ref(a), 0) for a in range(256)]


def test_sbox_value_matches_reference():
    assert [sbox_value(a) for a in range(256)] == [sbox_ref(a) for a in range(256)]


def test_sbox_lowered_cost():
    low = lowered_resources(sbox_template())
    assert low.t_count == 3584
    assert low.clifford_count == 4438
    assert abs(low.clifford_count - 4569) / 4569 < 0.05
    assert resources(sbox_template()).not_count == 4


def test_sbox_on_scattered_wires():
    a = [3, 17, 40, 8, 22, 35, 1, 29]
    out = [41, 0, 12, 30, 5, 19, 44, 26]
    used = set(a) | set(out)
    anc = [w for w in range(48) if w not in used][:24]
    circ = build_sbox(a, out, anc)
    got = run_registers(circ, [[(a, x)] for x in range(256)], [out, anc])
    assert got == [(sbox_ref(x), 0) for x in range(256)]


def test_nibble_multiplier():
    a, b, c = [0, 1, 2, 3], [4, 5, 6, 7], [8, 9, 10, 11]
    circ = build_multiplier(a, b, c, field=NIBBLE_FIELD)
    got = run_registers(circ, [[(a, x), (b, y)] for x in range(16) for y in range(16)], [c])
    assert got == [(NIBBLE_FIELD.mul(x, y),) for x in range(16) for y in range(16)]
    assert resources(multiplier_template(NIBBLE_FIELD)).counts == {"TOF": 16, "CNOT": 3}


def test_nibble_inversion_and_sbox():
    circ, _ = inversion_template(NIBBLE_INVERSION)
    x, o, w = [0, 1, 2, 3], [4, 5, 6, 7], [8, 9, 10, 11]
    got = run_registers(circ, [[(x, a)] for a in range(16)], [x, o, w])
    assert got == [(a, nibble_inverse(a), 0) for a in range(16)]
    circ = build_sbox(x, o, w, plan=NIBBLE_INVERSION)
    got = run_registers(circ, [[(x, a)] for a in range(16)], [o])
    assert got == [(sbox_value(a, NIBBLE_INVERSION),) for a in range(16)]
    assert sorted(sbox_value(a, NIBBLE_INVERSION) for a in range(16)) == list(range(16))
