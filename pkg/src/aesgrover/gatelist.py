"""Plain-text gate lists.

::

    WIDTH 40
    # @ component sbox
    # @ label input 0-7
    CNOT 0 8
    TOF 1 9 16
    MCX +3 -4 5

Gates are on physical wires.  ``# @`` lines carry metadata: ``label`` lines
tag wire roles, ``initial`` and ``l2p`` give the input and output wire maps
when they are not the identity, and any other key is free-form.  Wire lists
use comma-separated ranges such as ``0-127,200``.  Output is deterministic.
"""
from __future__ import annotations

from itertools import groupby
from pathlib import Path
from typing import Iterable, Sequence

from .circuit import Circuit, Gate
from .errors import CircuitError, ParseError

_ARITY = {"X": 1, "H": 1, "S": 1, "SDG": 1, "T": 1, "TDG": 1, "Z": 1, "CNOT": 2, "TOF": 3}


def format_wires(wires: Iterable[int]) -> str:
    """``[0, 1, 2, 5]`` -> ``"0-2,5"`` (order preserved)."""
    parts = []
    run: list[int] = []
    for w in wires:
        if run and w == run[-1] + 1:
            run.append(w)
            continue
        if run:
            parts.append(f"{run[0]}-{run[-1]}" if len(run) > 1 else str(run[0]))
        run = [w]
    if run:
        parts.append(f"{run[0]}-{run[-1]}" if len(run) > 1 else str(run[0]))
    return ",".join(parts)


def parse_wires(text: str) -> list[int]:
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        lo, sep, hi = part.partition("-")
        if sep:
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(lo))
    return out


def format_gate(g: Gate) -> str:
    if g.kind in ("MCX", "MCZ"):
        n = len(g.polarity)
        ctl = " ".join(("+" if p else "-") + str(w) for w, p in zip(g.wires[:n], g.polarity))
        return f"{g.kind} {ctl}" + (f" {g.wires[-1]}" if g.kind == "MCX" else "")
    return g.kind + " " + " ".join(map(str, g.wires))


def dumps(circuit: Circuit) -> str:
    lines = [f"WIDTH {circuit.width}"]
    if circuit.name:
        lines.append(f"# @ name {circuit.name}")
    for key in sorted(circuit.meta):
        lines.append(f"# @ {key} {circuit.meta[key]}")
    by_role = sorted(circuit.labels.items(), key=lambda kv: (kv[1], kv[0]))
    for role, items in groupby(by_role, key=lambda kv: kv[1]):
        lines.append(f"# @ label {role} {format_wires(w for w, _ in items)}")
    identity = list(range(circuit.width))
    if circuit.initial != identity:
        lines.append(f"# @ initial {format_wires(circuit.initial)}")
    if circuit.l2p != identity:
        lines.append(f"# @ l2p {format_wires(circuit.l2p)}")
    lines.extend(format_gate(g) for g in circuit.gates)
    return "\n".join(lines) + "\n"


def dump(circuit: Circuit, path: str | Path) -> None:
    Path(path).write_text(dumps(circuit))


def _parse_gate(fields: Sequence[str], n: int) -> Gate:
    kind = fields[0].upper()
    args = fields[1:]
    if kind in _ARITY:
        if len(args) != _ARITY[kind]:
            raise ParseError(f"{kind} takes {_ARITY[kind]} wire(s), got {len(args)}", n)
        return Gate(kind, tuple(int(a) for a in args))
    if kind in ("MCX", "MCZ"):
        ctl = args[:-1] if kind == "MCX" else args
        if not ctl or any(a[0] not in "+-" for a in ctl):
            raise ParseError(f"{kind} controls must be signed, e.g. +3 -4", n)
        wires = [int(a[1:]) for a in ctl]
        pol = [1 if a[0] == "+" else 0 for a in ctl]
        if kind == "MCX":
            return Gate.mcx(wires, int(args[-1]), pol)
        return Gate.mcz(wires, pol)
    raise ParseError(f"unknown gate {fields[0]!r}", n)


def loads(text: str) -> Circuit:
    circ: Circuit | None = None
    gates: list[Gate] = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if not body.startswith("@"):
                continue
            if circ is None:
                raise ParseError("metadata before the WIDTH header", n)
            key, _, value = body[1:].strip().partition(" ")
            value = value.strip()
            try:
                if key == "name":
                    circ.name = value
                elif key == "label":
                    role, _, wires = value.partition(" ")
                    circ.labels.update({w: role for w in parse_wires(wires)})
                elif key in ("initial", "l2p"):
                    perm = parse_wires(value)
                    if sorted(perm) != list(range(circ.width)):
                        raise ParseError(f"{key} is not a permutation of the wires", n)
                    setattr(circ, key, perm)
                else:
                    circ.meta[key] = value
            except ValueError as e:
                if isinstance(e, ParseError):
                    raise
                raise ParseError(f"bad metadata: {e}", n) from None
            continue
        fields = line.split()
        if circ is None:
            if fields[0] != "WIDTH" or len(fields) != 2 or not fields[1].isdigit():
                raise ParseError("expected 'WIDTH <n>' header", n)
            circ = Circuit(int(fields[1]))
            continue
        try:
            g = _parse_gate(fields, n)
        except ParseError:
            raise
        except (ValueError, IndexError) as e:
            raise ParseError(f"malformed gate: {e}", n) from None
        try:
            circ._check(g.wires)
        except CircuitError as e:
            raise ParseError(str(e), n) from None
        gates.append(g)
    if circ is None:
        raise ParseError("empty gate list")
    circ.gates = gates
    return circ


def load(path: str | Path) -> Circuit:
    return loads(Path(path).read_text())
