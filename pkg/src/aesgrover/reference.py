"""Plain, non-reversible AES used as ground truth.

Bytes are field elements of GF(2)[x]/(x^8+x^4+x^3+x+1) with bit i the
coefficient of x^i, as in FIPS-197.  Nothing here is optimized.
"""
from __future__ import annotations

from .errors import BadKeyLength

POLY = 0x11B
ROUNDS = {128: 10, 192: 12, 256: 14}


def gf_mul(a: int, b: int) -> int:
    """Schoolbook polynomial product followed by long division."""
    prod = 0
    for i in range(8):
        if b >> i & 1:
            prod ^= a << i
    for i in range(14, 7, -1):
        if prod >> i & 1:
            prod ^= POLY << (i - 8)
    return prod


def gf_pow(a: int, e: int) -> int:
    result = 1
    for _ in range(e):
        result = gf_mul(result, a)
    return result


def gf_inv(a: int) -> int:
    """Multiplicative inverse with 0 mapped to 0, found by search."""
    if a == 0:
        return 0
    for b in range(1, 256):
        if gf_mul(a, b) == 1:
            return b
    raise AssertionError("unreachable: GF(256) is a field")


def affine(b: int) -> int:
    out = 0
    for i in range(8):
        bit = (b >> i) ^ (b >> ((i + 4) % 8)) ^ (b >> ((i + 5) % 8)) ^ (b >> ((i + 6) % 8)) ^ (b >> ((i + 7) % 8))
        bit ^= 0x63 >> i
        out |= (bit & 1) << i
    return out


_SBOX = [affine(gf_inv(a)) for a in range(256)]


def sbox_ref(a: int) -> int:
    return _SBOX[a]


def rot_word(w: list[int]) -> list[int]:
    return w[1:] + w[:1]


def sub_word(w: list[int]) -> list[int]:
    return [_SBOX[b] for b in w]


def rcon(i: int) -> int:
    """x^(i-1) in the field, i >= 1."""
    r = 1
    for _ in range(i - 1):
        r = gf_mul(r, 2)
    return r


def _check_key(key: bytes, k: int) -> None:
    if k not in ROUNDS:
        raise BadKeyLength(f"unsupported key size {k}")
    if len(key) != k // 8:
        raise BadKeyLength(f"AES-{k} needs a {k // 8}-byte key, got {len(key)}")


def key_schedule_words(key: bytes, k: int) -> list[list[int]]:
    """Expanded key as 4*(rounds+1) words of four bytes each."""
    _check_key(key, k)
    nk = k // 32
    total = 4 * (ROUNDS[k] + 1)
    w = [list(key[4 * i: 4 * i + 4]) for i in range(nk)]
    for i in range(nk, total):
        t = list(w[i - 1])
        if i % nk == 0:
            t = sub_word(rot_word(t))
            t[0] ^= rcon(i // nk)
        elif nk > 6 and i % nk == 4:
            t = sub_word(t)
        w.append([a ^ b for a, b in zip(w[i - nk], t)])
    return w


def xtime(b: int) -> int:
    b <<= 1
    return b ^ POLY if b & 0x100 else b


def mix_column(col: list[int]) -> list[int]:
    a = col
    b = [xtime(x) for x in a]
    return [
        b[0] ^ a[1] ^ b[1] ^ a[2] ^ a[3],
        a[0] ^ b[1] ^ a[2] ^ b[2] ^ a[3],
        a[0] ^ a[1] ^ b[2] ^ a[3] ^ b[3],
        a[0] ^ b[0] ^ a[1] ^ a[2] ^ b[3],
    ]


def aes_encrypt(key: bytes, plaintext: bytes, k: int | None = None) -> bytes:
    """FIPS-197 AES-k on one 16-byte block.  State byte ``4*c + r`` is row r, column c."""
    if k is None:
        k = len(key) * 8
    _check_key(key, k)
    if len(plaintext) != 16:
        raise ValueError("plaintext must be 16 bytes")
    w = key_schedule_words(key, k)
    s = list(plaintext)

    def add_round_key(rnd: int) -> None:
        for c in range(4):
            for r in range(4):
                s[4 * c + r] ^= w[4 * rnd + c][r]

    add_round_key(0)
    for rnd in range(1, ROUNDS[k] + 1):
        s = [_SBOX[b] for b in s]
        s = [s[4 * ((c + r) % 4) + r] for c in range(4) for r in range(4)]
        if rnd != ROUNDS[k]:
            s = [b for c in range(4) for b in mix_column(s[4 * c: 4 * c + 4])]
        add_round_key(rnd)
    return bytes(s)


def from_hex(text: str) -> bytes:
    return bytes.fromhex(text.strip().replace(" ", ""))


def to_hex(data: bytes | list[int]) -> str:
    return bytes(data).hex()
