"""Reversible AES-128/192/256: round layers, key expansion and the round scheduler.

Wire conventions: byte ``i`` of a 128-wire state register is wires
``8i .. 8i+7`` (bit j = coefficient of x^j) and state byte ``4c + r`` sits in
row r, column c.  Word ``i`` of the key schedule is 32 wires, byte ``b`` of the
word at ``8b .. 8b+7``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from ..circuit import Circuit, check_disjoint, inverse
from ..errors import BadKeyLength, IndexOutOfRange, InsufficientAncilla, IsStoredWord
from ..gatelist import format_wires
from ..gf2 import AES_FIELD, GF2Matrix, synthesize_linear
from .field import build_sbox

NK = {128: 4, 192: 6, 256: 8}
ROUNDS = {128: 10, 192: 12, 256: 14}
STATE_REGISTERS = {128: 4, 192: 5, 256: 5}
SBOX_ANCILLA = 24
SBOX_CHUNKS = SBOX_ANCILLA // 8


def _check_k(k: int) -> None:
    if k not in NK:
        raise BadKeyLength(f"unsupported key size {k}")


def _bytes(wires: Sequence[int], i: int) -> list[int]:
    return list(wires[8 * i: 8 * i + 8])


# -- round layers --------------------------------------------------------------------


def mixcolumns_matrix() -> GF2Matrix:
    """32x32 matrix of MixColumns on one column; input byte c is bits 8c..8c+7."""
    coeff = [[2, 3, 1, 1], [1, 2, 3, 1], [1, 1, 2, 3], [3, 1, 1, 2]]
    cols = []
    for c in range(4):
        for bit in range(8):
            v = 0
            for r in range(4):
                v |= AES_FIELD.mul(coeff[r][c], 1 << bit) << (8 * r)
            cols.append(v)
    return GF2Matrix.from_columns(cols, 32)


@lru_cache(maxsize=None)
def _mixcolumns_template() -> Circuit:
    return synthesize_linear(mixcolumns_matrix(), list(range(32)), Circuit(32, name="mixcolumns"))


def build_mixcolumns(column_wires: Sequence[int], circuit: Circuit | None = None) -> Circuit:
    """In-place MixColumns on one 32-wire column."""
    if len(column_wires) != 32:
        raise ValueError("a column is 32 wires")
    if circuit is None:
        circuit = Circuit(max(column_wires) + 1, name="mixcolumns")
    return circuit.extend(_mixcolumns_template(), column_wires)


def build_addroundkey(state_wires: Sequence[int], key_wires: Sequence[int], circuit: Circuit | None = None) -> Circuit:
    """state ^= key, one CNOT per wire."""
    if len(state_wires) != len(key_wires):
        raise ValueError("state and key must have the same width")
    check_disjoint(state_wires, key_wires)
    if circuit is None:
        circuit = Circuit(max(*state_wires, *key_wires) + 1, name="addroundkey")
    for k_, s in zip(key_wires, state_wires):
        circuit.cnot(k_, s)
    return circuit


def shiftrows_order() -> list[int]:
    """Relabelling of a 128-wire state: new wire i takes old wire order[i]."""
    order = []
    for c in range(4):
        for r in range(4):
            src = 4 * ((c + r) % 4) + r
            order.extend(range(8 * src, 8 * src + 8))
    return order


def build_shiftrows(state_wires: Sequence[int], circuit: Circuit) -> Circuit:
    return circuit.permute_subset(list(state_wires), shiftrows_order())


# -- key schedule structure ----------------------------------------------------------


def word_total(k: int) -> int:
    _check_k(k)
    return 4 * (ROUNDS[k] + 1)


def is_stored(i: int, k: int) -> bool:
    """Original key words and words whose recurrence applies SubWord."""
    nk = NK[k]
    return i < nk or i % nk == 0 or (nk == 8 and i % 8 == 4)


def stored_words(k: int) -> list[int]:
    """Indices of the words the key expansion writes to fresh storage."""
    return [i for i in range(NK[k], word_total(k)) if is_stored(i, k)]


@lru_cache(maxsize=None)
def _terms(i: int, k: int) -> frozenset[int]:
    if is_stored(i, k):
        return frozenset((i,))
    return _terms(i - 1, k) ^ _terms(i - NK[k], k)


@dataclass(frozen=True)
class WordExpression:
    """``w_index`` as the XOR of the stored words listed in ``terms``."""

    index: int
    terms: tuple[int, ...]

    def evaluate(self, words: Sequence[Sequence[int]]) -> list[int]:
        out = [0, 0, 0, 0]
        for t in self.terms:
            out = [a ^ b for a, b in zip(out, words[t])]
        return out


def word_expression(i: int, k: int) -> WordExpression:
    _check_k(k)
    if not 0 <= i < word_total(k):
        raise IndexOutOfRange(f"AES-{k} has words 0..{word_total(k) - 1}")
    if is_stored(i, k):
        raise IsStoredWord(f"w{i} is stored, not recomputed")
    return WordExpression(i, tuple(sorted(_terms(i, k))))


def _word_terms(i: int, k: int) -> list[int]:
    return sorted(_terms(i, k))


# -- layouts -------------------------------------------------------------------------


@dataclass
class StorageMap:
    """Where everything lives.  All wire lists are logical wires of the circuit."""

    k: int
    key_wires: list[int]
    word_wires: dict[int, list[int]]
    keygen_ancilla: list[int]
    state_registers: list[list[int]] = field(default_factory=list)
    aux_wires: list[int] = field(default_factory=list)
    output_wires: list[int] = field(default_factory=list)
    clean_wires: list[int] = field(default_factory=list)

    def disposition(self, i: int) -> str:
        return "stored" if is_stored(i, self.k) else "recomputed"

    @property
    def stored(self) -> list[int]:
        return stored_words(self.k)

    @property
    def storage_qubits(self) -> int:
        return 32 * len(self.stored)

    @property
    def ancilla_qubits(self) -> int:
        return len(self.keygen_ancilla)


def _xor_word(circ: Circuit, src: Sequence[int], dst: Sequence[int]) -> None:
    for s, d in zip(src, dst):
        circ.cnot(s, d)


def _emit_key_expansion(circ: Circuit, k: int, word_wires: dict[int, list[int]], ancilla: Sequence[int]) -> None:
    """Write every stored word into its (zero) wires.

    For each stored w_i the predecessor w_{i-1} is assembled in place on one
    of its stored terms, four S-boxes run side by side into w_i, Rcon is added
    with NOTs, the assembly is undone and w_{i-Nk} is XORed in.
    """
    nk = NK[k]
    if len(ancilla) != 4 * SBOX_ANCILLA:
        raise InsufficientAncilla(f"key expansion needs {4 * SBOX_ANCILLA} ancilla wires")
    from ..reference import rcon

    for i in stored_words(k):
        target = word_wires[i]
        prev = _word_terms(i - 1, k)
        host = max(prev)
        others = [t for t in prev if t != host]
        for t in others:
            _xor_word(circ, word_wires[t], word_wires[host])
        rotate = i % nk == 0
        for j in range(4):
            src = (j + 1) % 4 if rotate else j
            anc = list(ancilla[SBOX_ANCILLA * j: SBOX_ANCILLA * (j + 1)])
            build_sbox(_bytes(word_wires[host], src), _bytes(target, j), anc, circ)
        if rotate:
            rc = rcon(i // nk)
            for bit in range(8):
                if rc >> bit & 1:
                    circ.x(target[bit])
        for t in reversed(others):
            _xor_word(circ, word_wires[t], word_wires[host])
        for t in _word_terms(i - nk, k):
            _xor_word(circ, word_wires[t], target)


def _key_layout(k: int, offset: int = 0) -> tuple[list[int], dict[int, list[int]], int]:
    key = list(range(offset, offset + k))
    words = {i: key[32 * i: 32 * i + 32] for i in range(NK[k])}
    pos = offset + k
    for i in stored_words(k):
        words[i] = list(range(pos, pos + 32))
        pos += 32
    return key, words, pos


def build_key_expansion(k: int) -> tuple[Circuit, StorageMap]:
    """Key register, stored words and 96 ancilla wires, in that order."""
    _check_k(k)
    key, words, pos = _key_layout(k)
    ancilla = list(range(pos, pos + 4 * SBOX_ANCILLA))
    circ = Circuit(pos + len(ancilla), name=f"keyexp{k}")
    circ.labels = {w: "key" for w in key}
    for i in stored_words(k):
        circ.labels.update({w: "storage" for w in words[i]})
    circ.labels.update({w: "ancilla-clean" for w in ancilla})
    _emit_key_expansion(circ, k, words, ancilla)
    circ.meta.update({"component": "keyexp", "key_size": str(k), "key": format_wires(key), "clean": format_wires(ancilla)})
    circ.meta["stored"] = ",".join(map(str, stored_words(k)))
    circ.meta.update({f"word.{i}": format_wires(words[i]) for i in stored_words(k)})
    smap = StorageMap(k, key, words, ancilla, clean_wires=ancilla)
    return circ, smap


# -- round schedule ------------------------------------------------------------------


@dataclass(frozen=True)
class RoundSchedule:
    """``actions`` holds ("compute" | "uncompute", round, register) triples."""

    rounds: int
    registers: int
    actions: tuple[tuple[str, int, int], ...]

    def final_register(self) -> int:
        return next(r for op, j, r in reversed(self.actions) if op == "compute" and j == self.rounds)

    def replay(self) -> list[dict[int, int | None]]:
        """Register occupancy after each action, checking the invariants on the way."""
        occ: dict[int, int | None] = {r: None for r in range(self.registers)}
        live: set[int] = {0}
        history = []
        for op, j, r in self.actions:
            if op == "compute":
                if j - 1 not in live:
                    raise ValueError(f"round {j} computed without its input")
                if occ[r] is not None:
                    raise ValueError(f"register {r} is busy")
                occ[r] = j
                live.add(j)
            else:
                if occ[r] != j or j - 1 not in live:
                    raise ValueError(f"round {j} cannot be uncomputed here")
                occ[r] = None
                live.discard(j)
            history.append(dict(occ))
        return history

    def computed(self) -> int:
        return sum(1 for op, _, _ in self.actions if op == "compute")

    def uncomputed(self) -> int:
        return sum(1 for op, _, _ in self.actions if op == "uncompute")


def plan_rounds(rounds: int, registers: int) -> RoundSchedule:
    """Greedy pebbling: fill free registers; when none is left, uncompute every
    round since the last checkpoint except the newest, which becomes the next
    checkpoint."""
    free = list(range(registers))
    reg_of: dict[int, int] = {}
    since: list[int] = []
    actions = []
    for j in range(1, rounds + 1):
        if not free:
            if len(since) < 2:
                raise InsufficientAncilla(f"{registers} state registers cannot hold the schedule")
            for done in reversed(since[:-1]):
                actions.append(("uncompute", done, reg_of[done]))
                free.append(reg_of[done])
            since = []
        r = min(free)
        free.remove(r)
        reg_of[j] = r
        actions.append(("compute", j, r))
        since.append(j)
    return RoundSchedule(rounds, registers, tuple(actions))


# -- rounds --------------------------------------------------------------------------


def _sbox_waves(jobs: int, free_chunks: int) -> list[int]:
    """Sizes of successive S-box waves when each S-box needs three clean chunks.

    Output bytes not yet written count as clean chunks for earlier waves.
    """
    sizes = []
    left = jobs
    while left:
        p = min(left, (free_chunks + left) // (SBOX_CHUNKS + 1))
        if p < 1:
            raise InsufficientAncilla("not enough clean wires for a single S-box")
        sizes.append(p)
        left -= p
    return sizes


def round_key_terms(k: int, j: int) -> list[int]:
    """Stored words XORed into the state by round ``j``'s AddRoundKey.

    Round 1 reads the key register as its input, so words 0..3 are taken
    from the input wires and are not listed.
    """
    terms = set().union(*(_terms(4 * j + c, k) for c in range(4)))
    if j == 1:
        terms -= {0, 1, 2, 3}
    return sorted(terms)


def round_circuit(k: int, j: int, pool_chunks: int, whiten: bytes | None = None) -> Circuit:
    """Round ``j`` from a live input register into a zero output register.

    Local wires: input (128), output (128), the round-key term words (32 each,
    ordered as :func:`round_key_terms`), then ``pool_chunks`` clean 8-wire
    chunks.  ``whiten`` XORs a known plaintext into the input around SubBytes.
    """
    terms = round_key_terms(k, j)
    base = 256 + 32 * len(terms)
    width = base + 8 * pool_chunks
    circ = Circuit(width, name=f"round{j}")
    inp = list(range(128))
    out = list(range(128, 256))
    term_wires = {t: list(range(256 + 32 * n, 288 + 32 * n)) for n, t in enumerate(terms)}
    if j == 1:
        term_wires.update({t: inp[32 * t: 32 * t + 32] for t in range(4)})
    pool = [list(range(base + 8 * q, base + 8 * q + 8)) for q in range(pool_chunks)]

    flips = []
    if whiten is not None:
        flips = [inp[8 * b + bit] for b in range(16) for bit in range(8) if whiten[b] >> bit & 1]
    for w in flips:
        circ.x(w)
    start = 0
    for size in _sbox_waves(16, pool_chunks):
        wave = range(start, start + size)
        spare = pool + [_bytes(out, p) for p in range(start + size, 16)]
        for n, p in enumerate(wave):
            chunks = spare[SBOX_CHUNKS * n: SBOX_CHUNKS * (n + 1)]
            build_sbox(_bytes(inp, p), _bytes(out, p), [w for ch in chunks for w in ch], circ)
        start += size
    for w in flips:
        circ.x(w)
    build_shiftrows(out, circ)
    if j != ROUNDS[k]:
        for c in range(4):
            build_mixcolumns(out[32 * c: 32 * c + 32], circ)
    for c in range(4):
        col = out[32 * c: 32 * c + 32]
        for t in _word_terms(4 * j + c, k):
            _xor_word(circ, term_wires[t], col)
    return circ


def _chunks(wires: Iterable[int]) -> list[list[int]]:
    wires = list(wires)
    return [wires[i: i + 8] for i in range(0, len(wires), 8)]


def build_aes(k: int, plaintext: bytes) -> tuple[Circuit, StorageMap, RoundSchedule]:
    """|K>|0...0> -> |K>|AES_K(plaintext)> with clean ancillas.

    Layout: key register, stored key words, state registers, 24 S-box wires.
    The fixed plaintext is folded into the key register with NOTs around the
    first SubBytes.  Rounds are computed and uncomputed per :func:`plan_rounds`.
    """
    _check_k(k)
    if len(plaintext) != 16:
        raise ValueError("plaintext must be 16 bytes")
    nregs = STATE_REGISTERS[k]
    key, words, pos = _key_layout(k)
    regs = [list(range(pos + 128 * r, pos + 128 * (r + 1))) for r in range(nregs)]
    pos += 128 * nregs
    aux = list(range(pos, pos + SBOX_ANCILLA))
    width = pos + SBOX_ANCILLA
    circ = Circuit(width, name=f"aes{k}")
    circ.labels = {w: "key" for w in key}
    for i in stored_words(k):
        circ.labels.update({w: "storage" for w in words[i]})
    for reg in regs:
        circ.labels.update({w: "state" for w in reg})
    circ.labels.update({w: "ancilla-clean" for w in aux})

    keygen_ancilla = regs[0][: 4 * SBOX_ANCILLA]
    _emit_key_expansion(circ, k, words, keygen_ancilla)

    schedule = plan_rounds(ROUNDS[k], nregs)
    occupant: dict[int, int | None] = {r: None for r in range(nregs)}
    reg_of: dict[int, int] = {}
    for op, j, r in schedule.actions:
        inp = key[:128] if j == 1 else regs[reg_of[j - 1]]
        free = [w for q in range(nregs) if q != r and occupant[q] is None for w in regs[q]]
        pool = _chunks(aux) + _chunks(free)
        rc = round_circuit(k, j, len(pool), plaintext if j == 1 else None)
        wires = inp + regs[r] + [w for t in round_key_terms(k, j) for w in words[t]] + [w for ch in pool for w in ch]
        if op == "compute":
            circ.extend(rc, wires)
            occupant[r] = j
            reg_of[j] = r
        else:
            circ.extend(inverse(rc), wires)
            occupant[r] = None

    out_reg = regs[schedule.final_register()]
    clean = aux + [w for q in range(nregs) if occupant[q] is None for w in regs[q]]
    smap = StorageMap(
        k, key, words, keygen_ancilla, regs, aux,
        output_wires=list(out_reg), clean_wires=clean,
    )
    circ.meta.update(
        {
            "component": "aes",
            "key_size": str(k),
            "key": format_wires(key),
            "output": format_wires(out_reg),
            "clean": format_wires(clean),
            "plaintext": plaintext.hex(),
        }
    )
    return circ, smap, schedule


def evaluate_aes(circ: Circuit, smap: StorageMap, keys: Sequence[bytes]) -> list[tuple[bytes, bool]]:
    """Simulate ``circ`` on each key: (ciphertext, key restored and ancillas clean)."""
    from ..sim import load, read, run_basis_batch

    inputs = [load(circ, [(smap.key_wires, int.from_bytes(key, "little"))]) for key in keys]
    outputs = run_basis_batch(circ, inputs)
    results = []
    for key, o in zip(keys, outputs):
        ct = read(circ, o, smap.output_wires).to_bytes(16, "little")
        ok = read(circ, o, smap.key_wires) == int.from_bytes(key, "little") and read(circ, o, smap.clean_wires) == 0
        results.append((ct, ok))
    return results
