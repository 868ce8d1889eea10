import numpy as np
import pytest

from aesgrover.circuit import Circuit, Gate, resources
from aesgrover.errors import DomainError, InsufficientAncilla, UnsupportedGate
from aesgrover.lowering import (
    TOFFOLI_NETLISTS,
    AccountedCost,
    LoweringOptions,
    lower_all_mcx,
    lower_mcx,
    lower_toffoli,
    lowered_resources,
    mcx_network,
    mcx_t_count,
    mcx_toffoli_count,
    toffoli_netlist,
)
from aesgrover.sim import StateVector, classical_images, run_statevector
from aesgrover.synth.field import multiplier_template, sbox_template


def toffoli_unitary() -> np.ndarray:
    u = np.eye(8, dtype=complex)
    u[[3, 7]] = u[[7, 3]]  # wires 0 and 1 set, flip wire 2
    return u


def netlist_unitary(name: str) -> np.ndarray:
    cols = []
    for i in range(8):
        out = run_statevector(toffoli_netlist(0, 1, 2, name), StateVector.basis(3, i))
        cols.append(out.amplitudes)
    return np.array(cols).T


def brute_mcx(states: np.ndarray, controls, target, polarity) -> np.ndarray:
    hit = np.ones_like(states, dtype=bool)
    for c, p in zip(controls, polarity):
        hit &= ((states >> c) & 1) == p
    return states ^ (hit.astype(np.int64) << target)


# -- Toffoli -------------------------------------------------------------------------


@pytest.mark.parametrize("name", sorted(TOFFOLI_NETLISTS))
def test_netlist_is_toffoli_including_phases(name):
    assert np.max(np.abs(netlist_unitary(name) - toffoli_unitary())) < 1e-9


@pytest.mark.parametrize("name, t_depth, cnots", [("compact", 4, 6), ("shallow", 3, 8)])
def test_netlist_shape(name, t_depth, cnots):
    rv = resources(Circuit(3).emit_physical(toffoli_netlist(0, 1, 2, name)))
    assert rv.t_count == 7
    assert rv.t_depth == t_depth
    assert rv.counts["CNOT"] == cnots
    assert rv.counts["H"] == 2


def test_lower_toffoli_keeps_not_and_cnot():
    c = Circuit(3).x(0).cnot(0, 1).toffoli(0, 1, 2)
    low = lower_toffoli(c)
    assert low.gates[:2] == [Gate.x(0), Gate.cnot(0, 1)]
    assert resources(low).t_count == 7


def test_four_t_toffoli_is_accounting_only():
    with pytest.raises(ValueError):
        lower_toffoli(Circuit(3).toffoli(0, 1, 2), LoweringOptions(toffoli_t_count=4))
    with pytest.raises(ValueError):
        LoweringOptions(toffoli_t_count=5)


def test_lower_toffoli_rejects_other_gates():
    with pytest.raises(UnsupportedGate):
        lower_toffoli(Circuit(1).h(0))


def test_accounted_multiplier_cost():
    rv = resources(multiplier_template())
    seven = AccountedCost.of(rv)
    four = AccountedCost.of(rv, LoweringOptions(toffoli_t_count=4))
    assert (seven.toffoli, seven.t_count, seven.clifford) == (64, 448, 21 + 8 * 64)
    assert four.t_count == 256
    assert seven.literal_clifford == 21 + 8 * 64


def test_sbox_lowered_depths():
    low = lowered_resources(sbox_template())
    assert (low.t_count, low.t_depth, low.depth) == (3584, 504, 1447)


# -- MCX -----------------------------------------------------------------------------


@pytest.mark.parametrize("m", [*range(5, 65), 128, 384, 640])
def test_mcx_toffoli_count(m):
    assert mcx_toffoli_count(m) == 8 * m - 24
    if m <= 64:
        gates = mcx_network(list(range(m)), m, None, list(range(m + 1, 2 * m - 1)))
        assert sum(g.kind == "TOF" for g in gates) == 8 * m - 24


@pytest.mark.parametrize("m, t", [(128, 4012), (192, 6060), (256, 8108), (384, 12204), (512, 16300), (640, 20396)])
def test_mcx_t_count(m, t):
    assert mcx_t_count(m) == t


def test_mcx_t_count_domain():
    with pytest.raises(DomainError):
        mcx_t_count(4)


@pytest.mark.parametrize("m", range(1, 11))
def test_mcx_exhaustive_with_dirty_ancillas(m):
    controls = list(range(m))
    target = m
    borrow = list(range(m + 1, m + 1 + max(m - 2, 0)))
    polarity = [(i * 7 + 1) % 3 != 0 for i in range(m)]
    polarity = [int(p) for p in polarity]
    width = m + 1 + len(borrow)
    states = np.arange(1 << width, dtype=np.int64)
    gates = mcx_network(controls, target, polarity, borrow)
    assert np.array_equal(classical_images(gates, states), brute_mcx(states, controls, target, polarity))


def test_mcx_needs_borrowable_wires():
    with pytest.raises(InsufficientAncilla):
        mcx_network(list(range(6)), 6, None, [7, 8])


def test_lower_mcx_single_gate():
    g = Gate.mcx([0, 1, 2, 3, 4], 5, [1, 0, 1, 1, 0])
    circ = lower_mcx(g, [6, 7, 8])
    states = np.arange(1 << 9, dtype=np.int64)
    assert np.array_equal(classical_images(circ.gates, states), brute_mcx(states, range(5), 5, g.polarity))
    with pytest.raises(UnsupportedGate):
        lower_mcx(Gate.cnot(0, 1), [])


def test_lower_all_mcx_borrows_from_the_circuit():
    c = Circuit(13).mcx(list(range(7)), 12, [1] * 7).x(3)
    low = lower_all_mcx(c)
    assert all(g.kind in ("X", "CNOT", "TOF") for g in low.gates)
    assert resources(low).toffoli_count == 8 * 7 - 24
    rng = np.random.default_rng(0)
    states = rng.integers(0, 1 << 13, 2000)
    assert np.array_equal(classical_images(low.gates, states), classical_images(c.gates, states))
