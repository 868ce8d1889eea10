"""Check synthesized circuits against the reference implementation by basis simulation.

A circuit names what it computes in ``meta["component"]``; the wire roles it
needs (key, output, clean ancillas, ...) are logical wire lists in ``meta``.
Every checker raises :class:`Mismatch` on the first failing case and returns
the number of cases checked otherwise.
"""
from __future__ import annotations

import random
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .circuit import Circuit
from .errors import Mismatch, ParseError
from .gatelist import parse_wires
from .reference import aes_encrypt, gf_inv, gf_mul, key_schedule_words, mix_column, sbox_ref
from .sim import load, read, run_basis_batch

FIPS_PLAINTEXT = bytes.fromhex("00112233445566778899aabbccddeeff")
FIPS_VECTORS = {
    128: ("000102030405060708090a0b0c0d0e0f", "69c4e0d86a7b0430d8cdb78070b4c55a"),
    192: ("000102030405060708090a0b0c0d0e0f1011121314151617", "dda97ca4864cdfe06eaf70a0ec0d7191"),
    256: (
        "000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f",
        "8ea2b7ca516745bfeafc49904b496089",
    ),
}

# (input register values, expected output register values), keyed by metadata name
Case = tuple[dict[str, int], dict[str, int]]


def _wires(circ: Circuit, key: str) -> list[int]:
    if key not in circ.meta:
        raise ParseError(f"circuit metadata lacks {key!r}")
    return parse_wires(circ.meta[key])


def check_cases(circ: Circuit, cases: Sequence[Case], describe: Callable[[Case], str] = str) -> int:
    """Simulate every case; each lists input registers and expected output registers.

    Registers not mentioned among the inputs start at 0; the ``clean`` wires
    listed in the metadata, if any, must end at 0.
    """
    clean = parse_wires(circ.meta.get("clean", ""))
    names = {name for inputs, expected in cases for name in (*inputs, *expected)}
    regs = {name: _wires(circ, name) for name in names}
    states = [load(circ, [(regs[n], v) for n, v in inputs.items()]) for inputs, _ in cases]
    outputs = run_basis_batch(circ, states)
    for case, out in zip(cases, outputs):
        _, expected = case
        for name, value in expected.items():
            got = read(circ, out, regs[name])
            if got != value:
                raise Mismatch(f"{describe(case)}: {name} = {got:#x}, expected {value:#x}")
        if clean and read(circ, out, clean):
            raise Mismatch(f"{describe(case)}: ancilla wires not returned to 0")
    return len(cases)


def _le(data: bytes) -> int:
    return int.from_bytes(data, "little")


def read_vectors(path: str | Path) -> list[tuple[bytes, bytes, bytes]]:
    """Lines ``key plaintext ciphertext`` in hex; ``#`` comments allowed."""
    out = []
    for n, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParseError("expected 'key plaintext ciphertext'", n)
        try:
            out.append(tuple(bytes.fromhex(p) for p in parts))
        except ValueError:
            raise ParseError("not hexadecimal", n) from None
    return out


def verify_aes(circ: Circuit, vectors: Iterable[tuple[bytes, bytes, bytes]] = (), random_keys: int = 10, seed: int = 0) -> int:
    k = int(circ.meta["key_size"])
    plaintext = bytes.fromhex(circ.meta["plaintext"])
    cases: list[tuple[bytes, bytes]] = []
    if plaintext == FIPS_PLAINTEXT:
        key, ct = FIPS_VECTORS[k]
        cases.append((bytes.fromhex(key), bytes.fromhex(ct)))
    for key, pt, ct in vectors:
        if pt == plaintext and len(key) * 8 == k:
            cases.append((key, ct))
    rng = random.Random(seed)
    for _ in range(random_keys):
        key = rng.randbytes(k // 8)
        cases.append((key, aes_encrypt(key, plaintext)))
    if not cases:
        raise Mismatch("no test vector applies to this circuit's plaintext")
    return check_cases(
        circ,
        [({"key": _le(key)}, {"key": _le(key), "output": _le(ct)}) for key, ct in cases],
        lambda c: f"key {c[0]['key'].to_bytes(k // 8, 'little').hex()}",
    )


def verify_keyexp(circ: Circuit, random_keys: int = 100, seed: int = 0) -> int:
    k = int(circ.meta["key_size"])
    stored = [int(i) for i in circ.meta["stored"].split(",")]
    rng = random.Random(seed)
    cases = []
    for _ in range(random_keys):
        key = rng.randbytes(k // 8)
        words = key_schedule_words(key, k)
        expected = {f"word.{i}": _le(bytes(words[i])) for i in stored}
        expected["key"] = _le(key)
        cases.append(({"key": _le(key)}, expected))
    return check_cases(circ, cases, lambda c: f"key {c[0]['key']:#x}")


def verify_byte_map(circ: Circuit, fn: Callable[[int], int]) -> int:
    cases = [({"in": a}, {"in": a, "out": fn(a)}) for a in range(256)]
    return check_cases(circ, cases, lambda c: f"input {c[0]['in']:#04x}")


def verify_multiplier(circ: Circuit) -> int:
    cases = [({"a": a, "b": b}, {"a": a, "b": b, "out": gf_mul(a, b)}) for a in range(256) for b in range(256)]
    return check_cases(circ, cases, lambda c: f"a={c[0]['a']:#04x} b={c[0]['b']:#04x}")


def mixcolumns_value(col: int) -> int:
    return _le(bytes(mix_column(list(col.to_bytes(4, "little")))))


def verify_mixcolumns(circ: Circuit, random_columns: int = 1000, seed: int = 0) -> int:
    cols = [b << (8 * i) for i in range(4) for b in range(256)]
    rng = random.Random(seed)
    cols += [rng.getrandbits(32) for _ in range(random_columns)]
    cases = [({"column": c}, {"column": mixcolumns_value(c)}) for c in cols]
    return check_cases(circ, cases, lambda c: f"column {c[0]['column']:#010x}")


def verify_oracle(circ: Circuit, random_keys: int = 10, seed: int = 0) -> int:
    key_wires = _wires(circ, "key")
    secret = _le(bytes.fromhex(circ.meta["planted"]))
    rng = random.Random(seed)
    keys = [secret] + [rng.getrandbits(len(key_wires)) for _ in range(random_keys)]
    cases = [({"key": key}, {"key": key, "output": int(key == secret)}) for key in keys]
    return check_cases(circ, cases, lambda c: f"key {c[0]['key']:#x}")


def verify_circuit(circ: Circuit, vectors: Iterable[tuple[bytes, bytes, bytes]] = (), random_keys: int = 10, seed: int = 0) -> int:
    component = circ.meta.get("component")
    if component == "aes":
        return verify_aes(circ, vectors, random_keys, seed)
    if component == "keyexp":
        return verify_keyexp(circ, max(random_keys, 1), seed)
    if component == "sbox":
        return verify_byte_map(circ, sbox_ref)
    if component == "inv":
        return verify_byte_map(circ, gf_inv)
    if component == "mult":
        return verify_multiplier(circ)
    if component == "mixcolumns":
        return verify_mixcolumns(circ, seed=seed)
    if component == "oracle":
        return verify_oracle(circ, random_keys, seed)
    raise ParseError(f"circuit does not say what it computes (component={component!r})")
