"""End-to-end Grover search on a toy cipher small enough for a statevector.

The toy cipher is one or more rounds of: nibble S-box (inversion a -> a^14 in
GF(16) followed by an affine map), a circulant linear mixing layer, and a key
XOR.  The block size equals the key size and a single plaintext/ciphertext
pair is used, with uniqueness of the planted key checked by brute force.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .circuit import Circuit
from .cost import iterations as grover_iterations
from .errors import NonUniqueKey, SingularMatrix, WidthTooLarge
from .gf2 import BinaryField, GF2Matrix, synthesize_linear
from .sim import MAX_STATEVECTOR_WIDTH, grover_run, grover_success_probability, sample
from .synth.field import NIBBLE_AFFINE, NIBBLE_INVERSION, InversionPlan, build_sbox
from .synth.oracle import CipherBlock, assemble_oracle

MIXING_TAPS = (0, 1, 3)


@dataclass(frozen=True)
class ToyCipherSpec:
    key_bits: int = 8
    rounds: int = 1
    modulus: int = 0x13
    plaintext: int = 0xCF
    planted: int = 0x22

    @property
    def block_bits(self) -> int:
        return self.key_bits

    @property
    def mask(self) -> int:
        return (1 << self.key_bits) - 1

    @property
    def width(self) -> int:
        # key, one state register per round, S-box work register, result wire
        return self.key_bits + self.rounds * self.block_bits + 4 + 1

    def validate(self) -> None:
        if not 4 <= self.key_bits <= 12 or self.key_bits % 4:
            raise ValueError("key_bits must be 4, 8 or 12")
        if self.rounds < 1:
            raise ValueError("need at least one round")
        if self.modulus != NIBBLE_INVERSION.field.modulus:
            raise ValueError("only the x^4+x+1 nibble field has an inversion schedule")
        if self.width > MAX_STATEVECTOR_WIDTH:
            raise WidthTooLarge(f"toy oracle needs {self.width} wires, cap is {MAX_STATEVECTOR_WIDTH}")


def mixing_matrix(n: int) -> GF2Matrix:
    m = GF2Matrix([[1 if (j - i) % n in MIXING_TAPS else 0 for j in range(n)] for i in range(n)])
    if m.rank() != n:
        raise SingularMatrix(f"mixing layer is singular for {n} bits")
    return m


# -- classical model -----------------------------------------------------------------


def _nibble_sbox(a: int, field_: BinaryField) -> int:
    return NIBBLE_AFFINE.matrix.apply(field_.pow(a, 14)) ^ NIBBLE_AFFINE.constant


def toy_encrypt(spec: ToyCipherSpec, key: int, plaintext: int | None = None) -> int:
    field_ = BinaryField(4, spec.modulus)
    mix = mixing_matrix(spec.block_bits)
    state = ((spec.plaintext if plaintext is None else plaintext) ^ key) & spec.mask
    for _ in range(spec.rounds):
        state = sum(_nibble_sbox(state >> (4 * i) & 0xF, field_) << (4 * i) for i in range(spec.block_bits // 4))
        state = mix.apply(state) ^ key
    return state


def matching_keys(spec: ToyCipherSpec) -> list[int]:
    """Every key that maps the plaintext to the planted key's ciphertext."""
    target = toy_encrypt(spec, spec.planted & spec.mask)
    return [k for k in range(1 << spec.key_bits) if toy_encrypt(spec, k) == target]


def unique_keys(spec: ToyCipherSpec) -> list[int]:
    """Keys whose ciphertext no other key produces."""
    counts: dict[int, int] = {}
    cts = [toy_encrypt(spec, k) for k in range(1 << spec.key_bits)]
    for c in cts:
        counts[c] = counts.get(c, 0) + 1
    return [k for k, c in enumerate(cts) if counts[c] == 1]


# -- circuits ------------------------------------------------------------------------


def build_toy_cipher(spec: ToyCipherSpec, plan: InversionPlan = NIBBLE_INVERSION) -> CipherBlock:
    """|K>|0> -> |K>|E_K(p)>|0>; the plaintext is folded into the key wires with NOTs."""
    spec.validate()
    n = spec.key_bits
    key = list(range(n))
    regs = [list(range(n + n * r, 2 * n + n * r)) for r in range(spec.rounds)]
    work = list(range(n + n * spec.rounds, n + n * spec.rounds + 4))
    circ = Circuit(work[-1] + 1, name="toy")
    circ.labels = {w: "key" for w in key}
    for reg in regs:
        circ.labels.update({w: "state" for w in reg})
    circ.labels.update({w: "ancilla-clean" for w in work})
    mix = mixing_matrix(n)
    flips = [key[i] for i in range(n) if spec.plaintext >> i & 1]
    src = key
    for r, dst in enumerate(regs):
        if r == 0:
            for w in flips:
                circ.x(w)
        for i in range(n // 4):
            build_sbox(src[4 * i: 4 * i + 4], dst[4 * i: 4 * i + 4], work, circ, plan)
        if r == 0:
            for w in flips:
                circ.x(w)
        synthesize_linear(mix, dst, circ)
        for a, b in zip(key, dst):
            circ.cnot(a, b)
        src = dst
    return CipherBlock(circ, key, regs[-1])


def build_toy_oracle(spec: ToyCipherSpec) -> Circuit:
    """Compute-compare-uncompute oracle marking exactly the planted key."""
    spec.validate()
    if len(matching_keys(spec)) != 1:
        raise NonUniqueKey(f"key {spec.planted:#x} is not the only key for plaintext {spec.plaintext:#x}")
    block = build_toy_cipher(spec)
    return assemble_oracle([block], [toy_encrypt(spec, spec.planted & spec.mask)], name="toy-oracle")


# -- demo ----------------------------------------------------------------------------


@dataclass
class DemoReport:
    key_bits: int
    width: int
    planted: int
    iterations: int
    probability: float
    analytic: float
    sampled: list[int]
    seconds: float
    pairs: int = 1
    notes: list[str] = field(default_factory=list)

    def lines(self) -> list[tuple[str, str]]:
        return [
            ("key_bits", str(self.key_bits)),
            ("width", str(self.width)),
            ("pairs", str(self.pairs)),
            ("planted", f"{self.planted:#0{2 + (self.key_bits + 3) // 4}x}"),
            ("iterations", str(self.iterations)),
            ("probability", f"{self.probability:.9f}"),
            ("analytic", f"{self.analytic:.9f}"),
            ("sampled", " ".join(f"{s:#x}" for s in self.sampled)),
            ("seconds", f"{self.seconds:.2f}"),
        ]


def run_demo(spec: ToyCipherSpec, seed: int | None = 0, iterations: int | None = None, shots: int = 8) -> DemoReport:
    start = time.perf_counter()
    oracle = build_toy_oracle(spec)
    ell = grover_iterations(spec.key_bits) if iterations is None else iterations
    dist = grover_run(oracle, spec.key_bits, ell)
    planted = spec.planted & spec.mask
    report = DemoReport(
        key_bits=spec.key_bits,
        width=oracle.width,
        planted=planted,
        iterations=ell,
        probability=float(dist[planted]),
        analytic=grover_success_probability(spec.key_bits, ell),
        sampled=sample(dist, shots, seed),
        seconds=time.perf_counter() - start,
    )
    report.notes.append("one plaintext/ciphertext pair; key uniqueness checked by brute force")
    return report


def seeded_spec(key_bits: int, seed: int, rounds: int = 1) -> ToyCipherSpec:
    """A spec whose planted key is drawn from the keys with a unique ciphertext."""
    rng = np.random.default_rng(seed)
    base = ToyCipherSpec(key_bits=key_bits, rounds=rounds, planted=0)
    base.validate()
    plaintext = int(rng.integers(0, 1 << key_bits))
    base = ToyCipherSpec(key_bits=key_bits, rounds=rounds, plaintext=plaintext, planted=0)
    candidates = unique_keys(base)
    if not candidates:
        raise NonUniqueKey("no key has a unique ciphertext for this plaintext")
    planted = candidates[int(rng.integers(0, len(candidates)))]
    return ToyCipherSpec(key_bits=key_bits, rounds=rounds, plaintext=plaintext, planted=planted)
