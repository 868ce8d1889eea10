"""Basis-state and statevector simulation.

Basis states are Python ints: bit ``w`` is the value of physical wire ``w``.
The basis simulator is bit-sliced, so a batch of inputs costs little more than
a single one.  Statevector index bit ``w`` is wire ``w`` as well.
"""
from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from .circuit import Circuit, Gate
from .errors import NonClassicalGate, WidthTooLarge

MAX_STATEVECTOR_WIDTH = 26

_X, _CNOT, _TOF, _MCX = 0, 1, 2, 3


def _compile(gates: Iterable[Gate]) -> list[tuple]:
    prog = []
    for g in gates:
        k = g.kind
        w = g.wires
        if k == "CNOT":
            prog.append((_CNOT, w[1], w[0], 0))
        elif k == "TOF":
            prog.append((_TOF, w[2], w[0], w[1]))
        elif k == "X":
            prog.append((_X, w[0], 0, 0))
        elif k == "MCX":
            prog.append((_MCX, w[-1], w[:-1], g.polarity))
        else:
            raise NonClassicalGate(f"basis simulation cannot run {k}")
    return prog


def _run_lanes(prog: list[tuple], lanes: list[int], full: int) -> None:
    for op, t, a, b in prog:
        if op == _CNOT:
            lanes[t] ^= lanes[a]
        elif op == _TOF:
            lanes[t] ^= lanes[a] & lanes[b]
        elif op == _X:
            lanes[t] ^= full
        else:
            acc = full
            for c, p in zip(a, b):
                acc &= lanes[c] if p else ~lanes[c]
            lanes[t] ^= acc & full


def run_basis_batch(circuit: Circuit | Sequence[Gate], states: Sequence[int], width: int | None = None) -> list[int]:
    """Simulate many physical basis states at once."""
    if isinstance(circuit, Circuit):
        width, gates = circuit.width, circuit.gates
    else:
        gates = circuit
        if width is None:
            raise ValueError("width is required for a bare gate list")
    n = len(states)
    if n == 0:
        return []
    limit = 1 << width
    if any(not 0 <= s < limit for s in states):
        raise ValueError("basis state does not fit the circuit width")
    lanes = _transpose(states, width)
    _run_lanes(_compile(gates), lanes, (1 << n) - 1)
    return _transpose(lanes, n)


def _transpose(rows: Sequence[int], ncols: int) -> list[int]:
    """Bit-matrix transpose: bit c of row r becomes bit r of the returned row c."""
    nbytes = max(1, (ncols + 7) // 8)
    buf = b"".join(r.to_bytes(nbytes, "little") for r in rows)
    bits = np.unpackbits(np.frombuffer(buf, dtype=np.uint8).reshape(len(rows), nbytes), axis=1, bitorder="little")
    packed = np.packbits(bits[:, :ncols].T, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def run_basis(circuit: Circuit, state: int) -> int:
    return run_basis_batch(circuit, [state])[0]


# -- logical register helpers --------------------------------------------------


def load(circuit: Circuit, assignments: Iterable[tuple[Sequence[int], int]]) -> int:
    """Physical input state with each logical register set to an integer value."""
    state = 0
    init = circuit.initial
    for wires, value in assignments:
        for i, w in enumerate(wires):
            if value >> i & 1:
                state |= 1 << init[w]
    return state


def read(circuit: Circuit, state: int, wires: Sequence[int]) -> int:
    """Integer value of a logical register in an output state."""
    l2p = circuit.l2p
    return sum(((state >> l2p[w]) & 1) << i for i, w in enumerate(wires))


def read_physical(state: int, wires: Sequence[int]) -> int:
    return sum(((state >> w) & 1) << i for i, w in enumerate(wires))


def bytes_to_int(data: bytes) -> int:
    """Little-endian bit packing: bit 8*i + j is bit j of byte i."""
    return int.from_bytes(data, "little")


def int_to_bytes(value: int, n: int) -> bytes:
    return value.to_bytes(n, "little")


# -- statevector ---------------------------------------------------------------


class StateVector:
    """Dense amplitudes over ``width`` wires."""

    def __init__(self, amplitudes: np.ndarray, width: int):
        if width > MAX_STATEVECTOR_WIDTH:
            raise WidthTooLarge(f"{width} wires exceeds the cap of {MAX_STATEVECTOR_WIDTH}")
        amplitudes = np.asarray(amplitudes, dtype=np.complex128)
        if amplitudes.shape != (1 << width,):
            raise ValueError("amplitude count must be 2**width")
        self.width = width
        self.amplitudes = amplitudes

    @classmethod
    def basis(cls, width: int, index: int = 0) -> "StateVector":
        if width > MAX_STATEVECTOR_WIDTH:
            raise WidthTooLarge(f"{width} wires exceeds the cap of {MAX_STATEVECTOR_WIDTH}")
        a = np.zeros(1 << width, dtype=np.complex128)
        a[index] = 1.0
        return cls(a, width)

    def norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def marginal(self, wires: Sequence[int]) -> np.ndarray:
        """Distribution over ``wires`` (bit i of the result index is ``wires[i]``)."""
        n = self.width
        p = self.probabilities().reshape((2,) * n)
        keep = [n - 1 - w for w in wires]
        drop = tuple(ax for ax in range(n) if ax not in keep)
        q = p.sum(axis=drop) if drop else p
        # remaining axes are in increasing axis order; reorder so wires[-1] is the slowest axis
        remaining = sorted(keep)
        order = [remaining.index(ax) for ax in reversed(keep)]
        return np.transpose(q, order).reshape(-1)


_PHASES = {
    "S": 1j,
    "SDG": -1j,
    "T": complex(math.cos(math.pi / 4), math.sin(math.pi / 4)),
    "TDG": complex(math.cos(math.pi / 4), -math.sin(math.pi / 4)),
    "Z": -1.0,
}
_SQRT_HALF = 1 / math.sqrt(2)


def apply_gate(psi: np.ndarray, g: Gate, n: int) -> None:
    """Apply one gate in place to an amplitude tensor of shape (2,)*n."""
    idx: list = [slice(None)] * n
    kind = g.kind
    if kind == "MCZ":
        for c, p in zip(g.wires, g.polarity):
            idx[n - 1 - c] = p
        psi[tuple(idx)] *= -1.0
        return
    if kind in ("CNOT", "TOF"):
        for c in g.wires[:-1]:
            idx[n - 1 - c] = 1
    elif kind == "MCX":
        for c, p in zip(g.wires[:-1], g.polarity):
            idx[n - 1 - c] = p
    ax = n - 1 - g.wires[-1]
    idx[ax] = 0
    i0 = tuple(idx)
    idx[ax] = 1
    i1 = tuple(idx)
    if kind in ("X", "CNOT", "TOF", "MCX"):
        tmp = psi[i0].copy()
        psi[i0] = psi[i1]
        psi[i1] = tmp
    elif kind == "H":
        a0 = psi[i0].copy()
        a1 = psi[i1].copy()
        psi[i0] = (a0 + a1) * _SQRT_HALF
        psi[i1] = (a0 - a1) * _SQRT_HALF
    else:
        psi[i1] *= _PHASES[kind]


def run_statevector(circuit: Circuit | Sequence[Gate], initial: StateVector, check_norm: bool = False) -> StateVector:
    """Apply every gate in order to a copy of ``initial``."""
    gates = circuit.gates if isinstance(circuit, Circuit) else circuit
    if isinstance(circuit, Circuit) and circuit.width != initial.width:
        raise ValueError("state width does not match the circuit")
    n = initial.width
    if n > MAX_STATEVECTOR_WIDTH:
        raise WidthTooLarge(f"{n} wires exceeds the cap of {MAX_STATEVECTOR_WIDTH}")
    flat = initial.amplitudes.copy()
    psi = flat.reshape((2,) * n) if n else flat
    for g in gates:
        apply_gate(psi, g, n)
        if check_norm and abs(np.vdot(flat, flat).real - 1.0) > 1e-9:
            raise ArithmeticError(f"norm drifted after {g}")
    return StateVector(flat, n)


def classical_images(gates: Iterable[Gate], states: np.ndarray) -> np.ndarray:
    """Images of the given basis indices under a classical circuit, vectorized with numpy."""
    x = np.array(states, dtype=np.int64)
    one = np.int64(1)
    for g in gates:
        w = g.wires
        k = g.kind
        if k == "X":
            x ^= one << w[0]
        elif k == "CNOT":
            x ^= ((x >> w[0]) & 1) << w[1]
        elif k == "TOF":
            x ^= ((x >> w[0]) & (x >> w[1]) & 1) << w[2]
        elif k == "MCX":
            acc = np.ones_like(x)
            for c, p in zip(w[:-1], g.polarity):
                acc &= (x >> c) if p else ~(x >> c)
            x ^= (acc & 1) << w[-1]
        else:
            raise NonClassicalGate(f"{k} is not a classical gate")
    return x


def classical_permutation(gates: Iterable[Gate], width: int) -> np.ndarray:
    """Image of every basis index under a classical circuit."""
    if width > MAX_STATEVECTOR_WIDTH:
        raise WidthTooLarge(f"{width} wires exceeds the cap of {MAX_STATEVECTOR_WIDTH}")
    return classical_images(gates, np.arange(1 << width, dtype=np.int64))


def _subspace(wires: Sequence[int]) -> np.ndarray:
    """Basis indices whose bits outside ``wires`` are all zero."""
    i = np.arange(1 << len(wires), dtype=np.int64)
    out = np.zeros_like(i)
    for j, w in enumerate(wires):
        out |= ((i >> j) & 1) << w
    return out


# -- Grover ----------------------------------------------------------------------


def _diffusion(key_wires: Sequence[int]) -> list[Gate]:
    hs = [Gate("H", (w,)) for w in key_wires]
    xs = [Gate.x(w) for w in key_wires]
    return hs + xs + [Gate.mcz(list(key_wires))] + xs + hs


def grover_run(oracle: Circuit, k: int, iterations: int, compile_oracle: bool = True) -> np.ndarray:
    """Measurement distribution over the first ``k`` wires after ``iterations`` Grover iterates.

    Wires ``0..k-1`` hold the key, the last wire is the phase-kickback target
    prepared in |->, everything else starts at 0.  Each iterate applies the
    oracle followed by the diffusion.  With ``compile_oracle`` a classical
    oracle is applied as a precomputed basis permutation; the result is the
    same as running it gate by gate on every state the run can reach.  When the
    oracle maps the subspace with only key and result wires set onto itself,
    the permutation is computed on that subspace alone.
    """
    n = oracle.width
    if n > MAX_STATEVECTOR_WIDTH:
        raise WidthTooLarge(f"{n} wires exceeds the cap of {MAX_STATEVECTOR_WIDTH}")
    if k < 1 or k >= n:
        raise ValueError("need 1 <= k < oracle width")
    key_wires = list(range(k))
    result = n - 1
    prep = [Gate("H", (w,)) for w in key_wires] + [Gate.x(result), Gate("H", (result,))]
    state = run_statevector(prep, StateVector.basis(n))
    flat = state.amplitudes
    diffusion = _diffusion(key_wires)
    source = None
    if compile_oracle and all(g.kind in ("X", "CNOT", "TOF", "MCX") for g in oracle.gates):
        sub = _subspace(key_wires + [result])
        image = classical_images(oracle.gates, sub)
        source = np.arange(1 << n, dtype=np.int64)
        if np.array_equal(np.sort(image), np.sort(sub)):
            source[image] = sub
        else:
            image = classical_permutation(oracle.gates, n)
            source[image] = np.arange(image.size)
    psi = flat.reshape((2,) * n)
    for _ in range(iterations):
        if source is not None:
            flat[:] = flat[source]
        else:
            for g in oracle.gates:
                apply_gate(psi, g, n)
        for g in diffusion:
            apply_gate(psi, g, n)
    return StateVector(flat, n).marginal(key_wires)


def sample(distribution: np.ndarray, shots: int = 1, seed: int | None = None) -> list[int]:
    rng = np.random.default_rng(seed)
    p = np.asarray(distribution, dtype=float)
    return [int(v) for v in rng.choice(p.size, size=shots, p=p / p.sum())]


def grover_success_probability(k: int, iterations: int, marked: int = 1) -> float:
    theta = math.asin(math.sqrt(marked / 2**k))
    return math.sin((2 * iterations + 1) * theta) ** 2
