"""Gate-set lowering: polarized MCX to Toffoli networks, Toffoli to Clifford+T."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .circuit import Circuit, Gate, ResourceVector, measure
from .errors import DomainError, InsufficientAncilla, UnsupportedGate

# Toffoli netlists over roles 0 = first control, 1 = second control, 2 = target.
# Both use seven T/T-dagger gates and realise the Toffoli unitary exactly.
TOFFOLI_NETLISTS: dict[str, tuple[tuple[str, tuple[int, ...]], ...]] = {
    # 6 CNOT + 2 H, T-depth 4
    "compact": (
        ("H", (2,)), ("CNOT", (1, 2)), ("TDG", (2,)), ("CNOT", (0, 2)), ("T", (2,)),
        ("CNOT", (1, 2)), ("TDG", (2,)), ("CNOT", (0, 2)), ("T", (1,)), ("T", (2,)),
        ("H", (2,)), ("CNOT", (0, 1)), ("T", (0,)), ("TDG", (1,)), ("CNOT", (0, 1)),
    ),
    # 8 CNOT + 2 H, T-depth 3: phases on x1, x2, x3, x1^x2, x2^x3, x1^x3, x1^x2^x3
    "shallow": (
        ("H", (2,)), ("T", (0,)), ("T", (1,)), ("T", (2,)),
        ("CNOT", (0, 1)), ("CNOT", (1, 2)), ("CNOT", (2, 0)),
        ("TDG", (0,)), ("TDG", (1,)), ("T", (2,)),
        ("CNOT", (1, 0)), ("TDG", (0,)), ("CNOT", (1, 0)),
        ("CNOT", (2, 0)), ("CNOT", (1, 2)), ("CNOT", (0, 1)), ("H", (2,)),
    ),
}
DEFAULT_NETLIST = "compact"


@dataclass(frozen=True)
class LoweringOptions:
    """``toffoli_t_count`` 7 synthesizes a netlist; 4 is an accounting-only figure."""

    toffoli_t_count: int = 7
    clifford_per_toffoli: int = 8
    netlist: str = DEFAULT_NETLIST

    def __post_init__(self) -> None:
        if self.toffoli_t_count not in (7, 4):
            raise ValueError("toffoli_t_count must be 7 or 4")
        if self.netlist not in TOFFOLI_NETLISTS:
            raise ValueError(f"unknown netlist {self.netlist!r}")


def toffoli_netlist(c1: int, c2: int, t: int, name: str = DEFAULT_NETLIST) -> list[Gate]:
    roles = (c1, c2, t)
    return [Gate(kind, tuple(roles[r] for r in ws)) for kind, ws in TOFFOLI_NETLISTS[name]]


def iter_lower_toffoli(gates: Iterable[Gate], netlist: str = DEFAULT_NETLIST) -> Iterator[Gate]:
    template = TOFFOLI_NETLISTS[netlist]
    for g in gates:
        if g.kind == "TOF":
            roles = g.wires
            for kind, ws in template:
                yield Gate(kind, tuple(roles[r] for r in ws))
        elif g.kind in ("X", "CNOT"):
            yield g
        else:
            raise UnsupportedGate(f"Toffoli lowering expects NOT/CNOT/TOF, got {g.kind}")


def lower_toffoli(circuit: Circuit, opts: LoweringOptions = LoweringOptions()) -> Circuit:
    """Replace every Toffoli by the chosen 7-T netlist; NOT and CNOT pass through."""
    if opts.toffoli_t_count != 7:
        raise ValueError("the 4-T Toffoli is an accounting option and is never synthesized")
    out = Circuit(circuit.width, circuit.name and f"{circuit.name}-cliffordt", circuit.labels)
    out.gates = list(iter_lower_toffoli(circuit.gates, opts.netlist))
    out.initial = list(circuit.initial)
    out.l2p = list(circuit.l2p)
    out.meta = dict(circuit.meta)
    return out


# -- multi-controlled NOT --------------------------------------------------------


def _vchain_dirty(cs: Sequence[int], t: int, anc: Sequence[int]) -> list[Gate]:
    """m-controlled NOT from 4(m-2) Toffolis and m-2 borrowed wires, restored on exit."""
    m = len(cs)
    if m == 1:
        return [Gate.cnot(cs[0], t)]
    if m == 2:
        return [Gate.toffoli(cs[0], cs[1], t)]
    a = list(anc[: m - 2])
    if len(a) < m - 2:
        raise InsufficientAncilla(f"{m} controls need {m - 2} borrowed wires")
    down = [Gate.toffoli(cs[m - 1], a[m - 3], t)]
    down += [Gate.toffoli(cs[i + 2], a[i], a[i + 1]) for i in reversed(range(m - 3))]
    up = [Gate.toffoli(cs[i + 2], a[i], a[i + 1]) for i in range(m - 3)]
    half = down + [Gate.toffoli(cs[0], cs[1], a[0])] + up
    return half + half


def mcx_network(
    controls: Sequence[int], target: int, polarity: Sequence[int] | None, borrowable: Sequence[int]
) -> list[Gate]:
    """Toffoli/CNOT/NOT gates realising a polarized MCX.

    From five controls on, the controls are split in two halves around one
    borrowed wire, each half a dirty-ancilla V-chain, for 8m-24 Toffolis.
    """
    m = len(controls)
    if m < 1:
        raise ValueError("MCX needs at least one control")
    pol = [1] * m if polarity is None else list(polarity)
    used = set(controls) | {target}
    spare = [w for w in borrowable if w not in used]
    if m >= 3 and len(spare) < m - 2:
        raise InsufficientAncilla(f"{m} controls need {m - 2} borrowable wires, got {len(spare)}")
    flips = [Gate.x(c) for c, p in zip(controls, pol) if not p]
    cs = list(controls)
    if m <= 4:
        body = _vchain_dirty(cs, target, spare)
    else:
        m1 = (m + 1) // 2
        g = spare[0]
        first = _vchain_dirty(cs[:m1], g, cs[m1:] + [target])
        second = _vchain_dirty(cs[m1:] + [g], target, cs[:m1])
        body = first + second + first + second
    return flips + body + flips


def lower_mcx(gate: Gate, borrowable: Sequence[int], width: int | None = None) -> Circuit:
    if gate.kind != "MCX":
        raise UnsupportedGate(f"expected an MCX gate, got {gate.kind}")
    gates = mcx_network(gate.controls, gate.target, gate.polarity, borrowable)
    if width is None:
        width = max([*gate.wires, *borrowable]) + 1
    circ = Circuit(width, name="mcx")
    return circ.emit_physical(gates)


def iter_lower_mcx(gates: Iterable[Gate], width: int) -> Iterator[Gate]:
    """Expand MCX gates, borrowing the lowest-numbered wires the gate does not touch."""
    for g in gates:
        if g.kind == "MCX":
            m = len(g.wires) - 1
            if m <= 2:
                borrow: list[int] = []
            else:
                used = set(g.wires)
                borrow = []
                for w in range(width):
                    if w not in used:
                        borrow.append(w)
                        if len(borrow) == m - 2:
                            break
            yield from mcx_network(g.controls, g.target, g.polarity, borrow)
        else:
            yield g


def lower_all_mcx(circuit: Circuit) -> Circuit:
    out = Circuit(circuit.width, circuit.name, circuit.labels)
    out.gates = list(iter_lower_mcx(circuit.gates, circuit.width))
    out.initial = list(circuit.initial)
    out.l2p = list(circuit.l2p)
    out.meta = dict(circuit.meta)
    return out


def mcx_toffoli_count(m: int) -> int:
    """Toffolis in the network built by :func:`mcx_network`."""
    if m < 1:
        raise ValueError("m must be positive")
    if m == 1:
        return 0
    if m <= 4:
        return 1 if m == 2 else 4 * (m - 2)
    return 8 * m - 24


def mcx_t_count(m: int) -> int:
    """Accounting T-count 32m-84 of an m-controlled NOT (m >= 5)."""
    if m < 5:
        raise DomainError("the 32m-84 bound applies from five controls on")
    return 32 * m - 84


# -- accounting ----------------------------------------------------------------------


def lowered_resources(circuit: Circuit, opts: LoweringOptions = LoweringOptions()) -> ResourceVector:
    """Resources of the Clifford+T circuit, streamed so it is never materialized."""
    gates = iter_lower_toffoli(iter_lower_mcx(circuit.gates, circuit.width), opts.netlist)
    ancillas = sum(1 for r in circuit.labels.values() if r.startswith("ancilla"))
    return measure(gates, circuit.width, ancillas)


@dataclass(frozen=True)
class AccountedCost:
    """Toffoli-level resources priced with the per-Toffoli convention."""

    toffoli: int
    t_count: int
    clifford: int
    literal_clifford: int

    @classmethod
    def of(cls, rv: ResourceVector, opts: LoweringOptions = LoweringOptions(),
           literal_per_toffoli: int | None = None) -> "AccountedCost":
        if literal_per_toffoli is None:
            literal_per_toffoli = sum(1 for k, _ in TOFFOLI_NETLISTS[opts.netlist] if k not in ("T", "TDG"))
        return cls(
            toffoli=rv.toffoli_count,
            t_count=rv.t_count + opts.toffoli_t_count * rv.toffoli_count,
            clifford=rv.clifford_count + opts.clifford_per_toffoli * rv.toffoli_count,
            literal_clifford=rv.clifford_count + literal_per_toffoli * rv.toffoli_count,
        )
