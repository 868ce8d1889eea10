"""Grover oracle: r cipher blocks, one polarized comparison MCX, uncompute."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..circuit import Circuit, inverse
from ..errors import PairCountMismatch
from ..gatelist import format_wires
from .aes import build_aes


@dataclass
class CipherBlock:
    """A circuit |K>|0> -> |K>|E_K(p)>|0> with its key and output wires (logical)."""

    circuit: Circuit
    key_wires: list[int]
    output_wires: list[int]


def assemble_oracle(blocks: Sequence[CipherBlock], expected: Sequence[int], name: str = "oracle") -> Circuit:
    """Flip the last wire iff every block's output equals its expected value.

    Block 0 reads the key wires directly; every other block gets a CNOT copy
    of the key on its own key wires, undone at the end.  The key of block 0
    must be its wires ``0 .. key_bits-1`` so the oracle's key sits first.
    """
    if not blocks or len(blocks) != len(expected):
        raise PairCountMismatch("need one expected value per block")
    key_bits = len(blocks[0].key_wires)
    if blocks[0].key_wires != list(range(key_bits)):
        raise ValueError("block 0 must keep its key on wires 0..key_bits-1")
    offsets = []
    pos = 0
    for b in blocks:
        if len(b.key_wires) != key_bits:
            raise ValueError("all blocks must take the same key size")
        offsets.append(pos)
        pos += b.circuit.width
    result = pos
    circ = Circuit(pos + 1, name=name)
    for b, off in zip(blocks, offsets):
        circ.labels.update({off + w: role for w, role in b.circuit.labels.items()})
    for b, off in zip(blocks[1:], offsets[1:]):
        circ.labels.update({off + w: "key-copy" for w in b.key_wires})
    circ.labels[result] = "output"

    def fan_out() -> None:
        for b, off in zip(blocks[1:], offsets[1:]):
            for i, w in enumerate(b.key_wires):
                circ.cnot(i, off + w)

    fan_out()
    for b, off in zip(blocks, offsets):
        circ.extend(b.circuit, range(off, off + b.circuit.width))
    controls, polarity = [], []
    for b, off, value in zip(blocks, offsets, expected):
        for i, w in enumerate(b.output_wires):
            controls.append(off + w)
            polarity.append(value >> i & 1)
    circ.mcx(controls, result, polarity)
    for b, off in reversed(list(zip(blocks, offsets))):
        circ.extend(inverse(b.circuit), range(off, off + b.circuit.width))
    fan_out()
    circ.meta["component"] = "oracle"
    circ.meta["key"] = format_wires(range(key_bits))
    circ.meta["output"] = str(result)
    circ.meta["clean"] = format_wires(range(key_bits, result))
    return circ


def build_oracle(k: int, pairs: Sequence[tuple[bytes, bytes]], r: int | None = None) -> Circuit:
    """AES-k key-search oracle over ``pairs`` of (plaintext, ciphertext).

    ``r`` defaults to the unicity count for k; passing it explicitly allows
    fewer blocks for testing.
    """
    from ..cost import required_pairs

    want = required_pairs(k) if r is None else r
    if len(pairs) != want:
        raise PairCountMismatch(f"AES-{k} oracle expects {want} pairs, got {len(pairs)}")
    blocks = []
    for pt, _ in pairs:
        circ, smap, _ = build_aes(k, pt)
        blocks.append(CipherBlock(circ, smap.key_wires, smap.output_wires))
    expected = [int.from_bytes(ct, "little") for _, ct in pairs]
    return assemble_oracle(blocks, expected, name=f"oracle{k}")
