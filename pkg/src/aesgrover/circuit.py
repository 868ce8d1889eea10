"""Reversible and Clifford+T circuits with lazy wire permutation and resource accounting.

Gates are always stored on *physical* wires.  A circuit additionally carries a
logical-to-physical map: builders address logical wires, and a relabelling of
logical wires (``permute_wires``) costs no gates.  ``initial`` is the map in
force when the circuit starts; it is the identity except for circuits produced
by :func:`inverse`, whose inputs live where the forward circuit left them.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import NotABijection, OperandClash, WireOutOfRange

SINGLE_QUBIT = frozenset({"X", "H", "S", "SDG", "T", "TDG", "Z"})
CLASSICAL = frozenset({"X", "CNOT", "TOF", "MCX"})
T_KINDS = frozenset({"T", "TDG"})
_INVERSE_KIND = {"S": "SDG", "SDG": "S", "T": "TDG", "TDG": "T"}


@dataclass(frozen=True, slots=True)
class Gate:
    """One gate.  ``wires`` lists controls first and the target last.

    MCZ is symmetric and has no target, so all of its wires are controls.
    ``polarity`` is only set for MCX/MCZ and holds one bit per control:
    1 fires on |1>, 0 fires on |0>.
    """

    kind: str
    wires: tuple[int, ...]
    polarity: tuple[int, ...] | None = None

    @staticmethod
    def x(t: int) -> "Gate":
        return Gate("X", (t,))

    @staticmethod
    def cnot(c: int, t: int) -> "Gate":
        return Gate("CNOT", (c, t))

    @staticmethod
    def toffoli(c1: int, c2: int, t: int) -> "Gate":
        return Gate("TOF", (c1, c2, t))

    @staticmethod
    def mcx(controls: Sequence[int], target: int, polarity: Sequence[int] | None = None) -> "Gate":
        pol = tuple(1 for _ in controls) if polarity is None else tuple(int(p) for p in polarity)
        if not controls or len(pol) != len(controls):
            raise ValueError("MCX needs a non-empty control list with one polarity bit each")
        return Gate("MCX", (*controls, target), pol)

    @staticmethod
    def mcz(controls: Sequence[int], polarity: Sequence[int] | None = None) -> "Gate":
        pol = tuple(1 for _ in controls) if polarity is None else tuple(int(p) for p in polarity)
        if not controls or len(pol) != len(controls):
            raise ValueError("MCZ needs a non-empty control list with one polarity bit each")
        return Gate("MCZ", tuple(controls), pol)

    @staticmethod
    def single(kind: str, t: int) -> "Gate":
        if kind not in SINGLE_QUBIT:
            raise ValueError(f"not a single-qubit gate: {kind}")
        return Gate(kind, (t,))

    @property
    def target(self) -> int | None:
        return None if self.kind == "MCZ" else self.wires[-1]

    @property
    def controls(self) -> tuple[int, ...]:
        return self.wires if self.kind == "MCZ" else self.wires[:-1]

    def inverse(self) -> "Gate":
        kind = _INVERSE_KIND.get(self.kind)
        return self if kind is None else Gate(kind, self.wires)

    def remap(self, table: Sequence[int]) -> "Gate":
        return Gate(self.kind, tuple(table[w] for w in self.wires), self.polarity)

    def is_clifford(self) -> bool:
        if self.kind in ("X", "CNOT", "H", "S", "SDG", "Z"):
            return True
        if self.kind == "MCX":
            return len(self.wires) == 2
        if self.kind == "MCZ":
            return len(self.wires) <= 2
        return False


@dataclass(frozen=True)
class Segment:
    """A contiguous run of gates together with the wire maps around it."""

    start: int
    end: int
    before: tuple[int, ...]
    after: tuple[int, ...]


@dataclass(frozen=True)
class Mark:
    index: int
    l2p: tuple[int, ...]


class Circuit:
    """Append-only gate list over ``width`` wires."""

    def __init__(self, width: int, name: str = "", labels: dict[int, str] | None = None):
        if width < 0:
            raise ValueError("width must be non-negative")
        self.width = width
        self.name = name
        self.gates: list[Gate] = []
        self.initial: list[int] = list(range(width))
        self.l2p: list[int] = list(range(width))
        self.labels: dict[int, str] = dict(labels or {})
        self.meta: dict[str, str] = {}

    # -- construction -----------------------------------------------------

    def _check(self, wires: Sequence[int]) -> None:
        for w in wires:
            if not 0 <= w < self.width:
                raise WireOutOfRange(f"wire {w} outside [0, {self.width})")
        if len(set(wires)) != len(wires):
            raise OperandClash(f"gate touches a wire twice: {tuple(wires)}")

    def append(self, gate: Gate) -> "Circuit":
        """Append ``gate`` given on logical wires."""
        self._check(gate.wires)
        l2p = self.l2p
        self.gates.append(Gate(gate.kind, tuple(l2p[w] for w in gate.wires), gate.polarity))
        return self

    def emit_physical(self, gates: Iterable[Gate]) -> "Circuit":
        """Append gates that are already expressed on physical wires."""
        for g in gates:
            self._check(g.wires)
            self.gates.append(g)
        return self

    def x(self, t: int) -> "Circuit":
        return self.append(Gate.x(t))

    def cnot(self, c: int, t: int) -> "Circuit":
        return self.append(Gate.cnot(c, t))

    def toffoli(self, c1: int, c2: int, t: int) -> "Circuit":
        return self.append(Gate.toffoli(c1, c2, t))

    def mcx(self, controls: Sequence[int], target: int, polarity: Sequence[int] | None = None) -> "Circuit":
        return self.append(Gate.mcx(controls, target, polarity))

    def mcz(self, controls: Sequence[int], polarity: Sequence[int] | None = None) -> "Circuit":
        return self.append(Gate.mcz(controls, polarity))

    def h(self, t: int) -> "Circuit":
        return self.append(Gate("H", (t,)))

    def s(self, t: int) -> "Circuit":
        return self.append(Gate("S", (t,)))

    def sdg(self, t: int) -> "Circuit":
        return self.append(Gate("SDG", (t,)))

    def t(self, t: int) -> "Circuit":
        return self.append(Gate("T", (t,)))

    def tdg(self, t: int) -> "Circuit":
        return self.append(Gate("TDG", (t,)))

    def z(self, t: int) -> "Circuit":
        return self.append(Gate("Z", (t,)))

    # -- wire relabelling -------------------------------------------------

    def permute_wires(self, perm: Sequence[int]) -> "Circuit":
        """Relabel logical wires: logical ``i`` becomes what was logical ``perm[i]``."""
        if len(perm) != self.width or sorted(perm) != list(range(self.width)):
            raise NotABijection("perm must be a bijection on [0, width)")
        old = self.l2p
        self.l2p = [old[p] for p in perm]
        return self

    def permute_subset(self, wires: Sequence[int], order: Sequence[int]) -> "Circuit":
        """Relabel within ``wires``: ``wires[i]`` becomes what was ``wires[order[i]]``."""
        if len(order) != len(wires) or sorted(order) != list(range(len(wires))):
            raise NotABijection("order must be a bijection on the listed wires")
        self._check(wires)
        taken = [self.l2p[wires[j]] for j in order]
        for w, p in zip(wires, taken):
            self.l2p[w] = p
        return self

    def physical(self, wire: int) -> int:
        return self.l2p[wire]

    def physical_wires(self, wires: Iterable[int]) -> list[int]:
        return [self.l2p[w] for w in wires]

    # -- composition ------------------------------------------------------

    def extend(self, other: "Circuit", wires: Sequence[int] | None = None) -> "Circuit":
        """Append ``other`` with its logical wire ``i`` bound to our logical ``wires[i]``."""
        if wires is None:
            wires = range(other.width)
        wires = list(wires)
        if len(wires) != other.width:
            raise ValueError(f"need {other.width} wires, got {len(wires)}")
        self._check(wires)
        phi = [0] * other.width
        for i, w in enumerate(wires):
            phi[other.initial[i]] = self.l2p[w]
        self.gates.extend(g.remap(phi) for g in other.gates)
        for i, w in enumerate(wires):
            self.l2p[w] = phi[other.l2p[i]]
        return self

    def mark(self) -> Mark:
        return Mark(len(self.gates), tuple(self.l2p))

    def segment_since(self, mark: Mark) -> Segment:
        return Segment(mark.index, len(self.gates), mark.l2p, tuple(self.l2p))

    def undo(self, segment: Segment) -> "Circuit":
        """Append the inverse of ``segment`` and restore the wire labels it moved.

        Only the logical wires relabelled inside the segment are restored, so
        later relabelling of unrelated wires survives.
        """
        block = self.gates[segment.start:segment.end]
        self.gates.extend(g.inverse() for g in reversed(block))
        for w, (b, a) in enumerate(zip(segment.before, segment.after)):
            if a != b:
                if self.l2p[w] != a:
                    raise ValueError(f"logical wire {w} was relabelled after the segment")
                self.l2p[w] = b
        return self

    def undo_since(self, mark: Mark) -> "Circuit":
        return self.undo(self.segment_since(mark))

    # -- inspection -------------------------------------------------------

    def copy(self) -> "Circuit":
        c = Circuit(self.width, self.name, self.labels)
        c.gates = list(self.gates)
        c.initial = list(self.initial)
        c.l2p = list(self.l2p)
        c.meta = dict(self.meta)
        return c

    def wires_labelled(self, role: str) -> list[int]:
        return sorted(w for w, r in self.labels.items() if r == role)

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self) -> Iterator[Gate]:
        return iter(self.gates)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Circuit):
            return NotImplemented
        return (
            self.width == other.width
            and self.gates == other.gates
            and self.initial == other.initial
            and self.l2p == other.l2p
        )

    def __repr__(self) -> str:
        name = f" {self.name!r}" if self.name else ""
        return f"<Circuit{name} width={self.width} gates={len(self.gates)}>"


def inverse(circuit: Circuit) -> Circuit:
    """Reverse the gate order and invert each gate; input and output wire maps swap."""
    inv = Circuit(circuit.width, circuit.name and f"{circuit.name}^-1", circuit.labels)
    inv.gates = [g.inverse() for g in reversed(circuit.gates)]
    inv.initial = list(circuit.l2p)
    inv.l2p = list(circuit.initial)
    inv.meta = dict(circuit.meta)
    return inv


def check_disjoint(*groups: Sequence[int]) -> None:
    from .errors import WireGroupOverlap

    seen: set[int] = set()
    for g in groups:
        s = set(g)
        if len(s) != len(g) or seen & s:
            raise WireGroupOverlap("wire groups must be disjoint and duplicate-free")
        seen |= s


# -- resources -----------------------------------------------------------------


@dataclass
class ResourceVector:
    counts: dict[str, int] = field(default_factory=dict)
    t_count: int = 0
    clifford_count: int = 0
    toffoli_count: int = 0
    depth: int = 0
    t_depth: int = 0
    width: int = 0
    ancilla_count: int = 0

    @property
    def cnot_count(self) -> int:
        return self.counts.get("CNOT", 0)

    @property
    def not_count(self) -> int:
        return self.counts.get("X", 0)

    @property
    def gate_count(self) -> int:
        return sum(self.counts.values())

    def accounted_t(self, t_per_toffoli: int = 7) -> int:
        """T-count once every Toffoli is charged ``t_per_toffoli`` T gates."""
        return self.t_count + t_per_toffoli * self.toffoli_count

    def accounted_clifford(self, clifford_per_toffoli: int = 8) -> int:
        return self.clifford_count + clifford_per_toffoli * self.toffoli_count


def measure(gates: Iterable[Gate], width: int, ancilla_count: int = 0) -> ResourceVector:
    """Count gates and compute ASAP depth and T-depth over a gate stream."""
    counts: Counter[str] = Counter()
    ready = [0] * width
    tready = [0] * width
    depth = tdepth = 0
    clifford = 0
    for g in gates:
        kind = g.kind
        counts[kind] += 1
        ws = g.wires
        if len(ws) == 1:
            (w,) = ws
            d = ready[w] + 1
            ready[w] = d
            if kind == "T" or kind == "TDG":
                td = tready[w] + 1
                tready[w] = td
                if td > tdepth:
                    tdepth = td
            else:
                clifford += 1
        else:
            d = max(ready[w] for w in ws) + 1
            td = max(tready[w] for w in ws)
            for w in ws:
                ready[w] = d
                tready[w] = td
            if kind == "CNOT" or g.is_clifford():
                clifford += 1
        if d > depth:
            depth = d
    return ResourceVector(
        counts=dict(sorted(counts.items())),
        t_count=counts["T"] + counts["TDG"],
        clifford_count=clifford,
        toffoli_count=counts["TOF"],
        depth=depth,
        t_depth=tdepth,
        width=width,
        ancilla_count=ancilla_count,
    )


def resources(circuit: Circuit) -> ResourceVector:
    ancillas = sum(1 for r in circuit.labels.values() if r.startswith("ancilla"))
    return measure(circuit.gates, circuit.width, ancillas)
