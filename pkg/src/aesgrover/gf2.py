"""Dense GF(2) matrices, PLU factorization and in-place CNOT synthesis.

Vectors are Python ints: bit ``i`` is coordinate ``i``.  For field elements
this means bit ``i`` is the coefficient of ``x**i``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .circuit import Circuit
from .errors import NotAPowerOfTwo, SingularMatrix


class GF2Matrix:
    """Immutable dense bit matrix backed by a ``uint8`` array."""

    __slots__ = ("_a",)

    def __init__(self, bits):
        a = np.array(bits, dtype=np.uint8) & 1
        if a.ndim != 2 or 0 in a.shape:
            raise ValueError("GF2Matrix needs a non-empty 2-D bit array")
        a.setflags(write=False)
        self._a = a

    @classmethod
    def identity(cls, n: int) -> "GF2Matrix":
        return cls(np.eye(n, dtype=np.uint8))

    @classmethod
    def from_columns(cls, columns: Sequence[int], rows: int) -> "GF2Matrix":
        """Build from column vectors given as ints."""
        return cls([[(c >> i) & 1 for c in columns] for i in range(rows)])

    @classmethod
    def from_text(cls, text: str) -> "GF2Matrix":
        """Rows of 0/1 characters, spaces ignored."""
        return cls([[int(ch) for ch in line if ch in "01"] for line in text.strip().splitlines()])

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def bits(self) -> np.ndarray:
        return self._a

    def __matmul__(self, other: "GF2Matrix") -> "GF2Matrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        return GF2Matrix((self._a.astype(np.int64) @ other._a.astype(np.int64)) & 1)

    def apply(self, v: int) -> int:
        """Multiply the column vector ``v`` (as an int) from the left."""
        out = 0
        for i, row in enumerate(self._a):
            acc = 0
            for j in np.flatnonzero(row):
                acc ^= (v >> int(j)) & 1
            out |= acc << i
        return out

    def column(self, j: int) -> int:
        return sum(int(b) << i for i, b in enumerate(self._a[:, j]))

    def transpose(self) -> "GF2Matrix":
        return GF2Matrix(self._a.T)

    def nnz(self) -> int:
        return int(self._a.sum())

    def rank(self) -> int:
        a = self._a.copy()
        r = 0
        for c in range(self.cols):
            piv = next((i for i in range(r, self.rows) if a[i, c]), None)
            if piv is None:
                continue
            a[[r, piv]] = a[[piv, r]]
            for i in range(self.rows):
                if i != r and a[i, c]:
                    a[i] ^= a[r]
            r += 1
        return r

    def inverse(self) -> "GF2Matrix":
        n = self.rows
        if n != self.cols:
            raise SingularMatrix("only square matrices are invertible")
        aug = np.concatenate([self._a, np.eye(n, dtype=np.uint8)], axis=1)
        for c in range(n):
            piv = next((i for i in range(c, n) if aug[i, c]), None)
            if piv is None:
                raise SingularMatrix("matrix is singular over GF(2)")
            aug[[c, piv]] = aug[[piv, c]]
            for i in range(n):
                if i != c and aug[i, c]:
                    aug[i] ^= aug[c]
        return GF2Matrix(aug[:, n:])

    def __pow__(self, e: int) -> "GF2Matrix":
        result = GF2Matrix.identity(self.rows)
        base = self
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GF2Matrix):
            return NotImplemented
        return self._a.shape == other._a.shape and bool((self._a == other._a).all())

    def __hash__(self) -> int:
        return hash((self._a.shape, self._a.tobytes()))

    def __str__(self) -> str:
        return "\n".join("".join(str(int(b)) for b in row) for row in self._a)

    def __repr__(self) -> str:
        return f"GF2Matrix({self.rows}x{self.cols})"


@dataclass(frozen=True)
class PLUFactors:
    """``source == P @ L @ U`` with ``P[i, perm[i]] == 1``."""

    perm: tuple[int, ...]
    L: GF2Matrix
    U: GF2Matrix

    @property
    def P(self) -> GF2Matrix:
        n = len(self.perm)
        a = np.zeros((n, n), dtype=np.uint8)
        a[np.arange(n), self.perm] = 1
        return GF2Matrix(a)

    def recompose(self) -> GF2Matrix:
        return self.P @ self.L @ self.U

    def cnot_count(self) -> int:
        n = len(self.perm)
        return self.L.nnz() - n + self.U.nnz() - n


def plu_decompose(m: GF2Matrix) -> PLUFactors:
    """Row-pivoted elimination taking the first nonzero pivot in each column."""
    n = m.rows
    if n != m.cols:
        raise SingularMatrix("PLU needs a square matrix")
    a = m.bits.copy()
    lower = np.eye(n, dtype=np.uint8)
    order = list(range(n))
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r, c]), None)
        if piv is None:
            raise SingularMatrix("matrix is singular over GF(2)")
        if piv != c:
            a[[c, piv]] = a[[piv, c]]
            lower[[c, piv], :c] = lower[[piv, c], :c]
            order[c], order[piv] = order[piv], order[c]
        for r in range(c + 1, n):
            if a[r, c]:
                a[r] ^= a[c]
                lower[r, c] = 1
    # rows of the source were visited in ``order``: source row order[i] is row i of L@U
    perm = [0] * n
    for i, r in enumerate(order):
        perm[r] = i
    return PLUFactors(tuple(perm), GF2Matrix(lower), GF2Matrix(a))


def synthesize_linear(m: GF2Matrix, wires: Sequence[int], circuit: Circuit | None = None) -> Circuit:
    """In-place CNOT circuit for ``v -> m v`` on ``wires``.

    U is applied first (rows top-down), then L (rows bottom-up); the row
    permutation is a relabelling of the wires and costs nothing.
    """
    n = m.rows
    if len(wires) != n:
        raise ValueError(f"need {n} wires, got {len(wires)}")
    f = plu_decompose(m)
    if circuit is None:
        circuit = Circuit(max(wires) + 1, name="linear")
    u, lo = f.U.bits, f.L.bits
    for i in range(n):
        for j in range(i + 1, n):
            if u[i, j]:
                circuit.cnot(wires[j], wires[i])
    for i in reversed(range(n)):
        for j in range(i):
            if lo[i, j]:
                circuit.cnot(wires[j], wires[i])
    if any(p != i for i, p in enumerate(f.perm)):
        circuit.permute_subset(wires, f.perm)
    return circuit


# -- binary extension fields ---------------------------------------------------


@dataclass(frozen=True)
class BinaryField:
    """GF(2^degree) as polynomials modulo ``modulus`` (bit i = coefficient of x^i)."""

    degree: int
    modulus: int

    @property
    def order(self) -> int:
        return 1 << self.degree

    def mul(self, a: int, b: int) -> int:
        top = 1 << self.degree
        r = 0
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a & top:
                a ^= self.modulus
        return r

    def pow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def reduce(self, v: int) -> int:
        """Reduce an arbitrary polynomial modulo the field polynomial."""
        for i in range(v.bit_length() - 1, self.degree - 1, -1):
            if v >> i & 1:
                v ^= self.modulus << (i - self.degree)
        return v

    def matrix_of_power(self, e: int) -> GF2Matrix:
        if e < 1 or e & (e - 1):
            raise NotAPowerOfTwo(f"{e} is not a power of two")
        return GF2Matrix.from_columns([self.pow(1 << j, e) for j in range(self.degree)], self.degree)


AES_FIELD = BinaryField(8, 0x11B)
NIBBLE_FIELD = BinaryField(4, 0x13)


@lru_cache(maxsize=None)
def matrix_of_field_map(e: int, field: BinaryField = AES_FIELD) -> GF2Matrix:
    """Matrix of the GF(2)-linear map ``a -> a**e`` for ``e`` a power of two."""
    return field.matrix_of_power(e)
