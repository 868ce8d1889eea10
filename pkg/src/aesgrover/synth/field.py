"""Reversible arithmetic in GF(2^m): multiplier, inversion and the S-box."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from ..circuit import Circuit, check_disjoint, inverse
from ..gf2 import AES_FIELD, NIBBLE_FIELD, BinaryField, GF2Matrix, matrix_of_field_map, synthesize_linear


def reduction_matrix(field: BinaryField) -> GF2Matrix:
    """In-place map folding the high product coefficients into the low ones.

    Column ``k < m-1`` is ``x^(m+k) mod p``; the last column is the unit vector,
    which keeps the matrix invertible.
    """
    m = field.degree
    cols = [field.reduce(1 << (m + k)) for k in range(m - 1)] + [1 << (m - 1)]
    return GF2Matrix.from_columns(cols, m)


def _diagonal_order(terms: list[tuple[int, int, int]], modulus: int) -> list[tuple[int, int, int]]:
    """Group (i, j, k) Toffoli terms by (j - i) mod ``modulus``.

    With an odd modulus each group touches every a, b and c wire at most
    once, so the groups run as parallel layers.
    """
    return sorted(terms, key=lambda t: ((t[1] - t[0]) % modulus, t[0]))


@lru_cache(maxsize=None)
def multiplier_template(field: BinaryField = AES_FIELD) -> Circuit:
    """|a>|b>|c> -> |a>|b>|Q c + a b> on wires a = 0..m-1, b = m..2m-1, c = 2m..3m-1.

    The high half of the schoolbook product is accumulated first, folded down
    by the in-place reduction map Q, then the low half is added.  For c = 0
    this is the product; m^2 Toffolis plus the CNOTs of Q.
    """
    m = field.degree
    circ = Circuit(3 * m, name="gf-mult")
    a = list(range(m))
    b = list(range(m, 2 * m))
    c = list(range(2 * m, 3 * m))
    high = [(i, j, i + j - m) for i in range(m) for j in range(m) if i + j >= m]
    low = [(i, j, i + j) for i in range(m) for j in range(m) if i + j < m]
    for i, j, k in _diagonal_order(high, m - 1):
        circ.toffoli(a[i], b[j], c[k])
    synthesize_linear(reduction_matrix(field), c, circ)
    for i, j, k in _diagonal_order(low, m + 1):
        circ.toffoli(a[i], b[j], c[k])
    circ.labels = {**{w: "input" for w in a + b}, **{w: "output" for w in c}}
    return circ


@lru_cache(maxsize=None)
def _multiplier_inverse(field: BinaryField) -> Circuit:
    return inverse(multiplier_template(field))


def _group_sizes(m: int, *groups: Sequence[int]) -> None:
    for g in groups:
        if len(g) != m:
            raise ValueError(f"expected {m}-wire groups, got {len(g)}")


def build_multiplier(
    a_wires: Sequence[int],
    b_wires: Sequence[int],
    out_wires: Sequence[int],
    circuit: Circuit | None = None,
    field: BinaryField = AES_FIELD,
    accumulate: bool = False,
    uncompute: bool = False,
) -> Circuit:
    """Out-of-place field multiplier, ``out <- Q out + a b``.

    With ``out`` zero this writes ``a b``.  ``accumulate`` prepends the
    in-place inverse of Q so that any ``out`` becomes ``out + a b`` at the cost
    of extra CNOTs.  ``uncompute`` appends the inverse circuit, clearing an
    ``out`` that holds ``a b``.
    """
    m = field.degree
    _group_sizes(m, a_wires, b_wires, out_wires)
    check_disjoint(a_wires, b_wires, out_wires)
    if circuit is None:
        circuit = Circuit(max(*a_wires, *b_wires, *out_wires) + 1, name="gf-mult")
    wires = [*a_wires, *b_wires, *out_wires]
    if uncompute:
        circuit.extend(_multiplier_inverse(field), wires)
        if accumulate:
            synthesize_linear(reduction_matrix(field), list(out_wires), circuit)
        return circuit
    if accumulate:
        synthesize_linear(reduction_matrix(field).inverse(), list(out_wires), circuit)
    circuit.extend(multiplier_template(field), wires)
    return circuit


# -- inversion -----------------------------------------------------------------


@dataclass(frozen=True)
class InversionPlan:
    """Register-level schedule computing a^(2^m - 2) with products and Frobenius maps.

    Registers are named; ``X`` holds the input and ``O`` receives the output,
    the others are zero-initialised work registers.  Each register carries the
    exponent e of the power a^e it holds (None when clear).  Steps:

    ``("copy", dst, src, e)``                 dst ^= src^(2^s), landing at exponent e
    ``("mul", dst, (u, eu), (v, ev))``        rotate u, v in place, then dst = u * v
    ``("unmul", dst, ed, (u, eu), (v, ev))``  rotate dst, u, v, then clear dst with u * v
    ``("to", reg, e)``                        rotate reg in place to exponent e
    """

    field: BinaryField
    work: tuple[str, ...]
    steps: tuple[tuple, ...]


AES_INVERSION = InversionPlan(
    AES_FIELD,
    ("B", "C", "D"),
    (
        ("copy", "O", "X", 2),
        ("mul", "B", ("X", 1), ("O", 2)),
        ("mul", "C", ("X", 1), ("B", 6)),
        ("mul", "D", ("O", 8), ("C", 7)),
        ("unmul", "O", 8, ("X", 1), ("C", 7)),
        ("mul", "O", ("C", 7), ("D", 240)),
        ("unmul", "B", 6, ("O", 247), ("C", 14)),
        ("unmul", "C", 224, ("O", 239), ("D", 240)),
        ("unmul", "D", 240, ("X", 1), ("O", 239)),
        ("to", "O", 254),
    ),
)

NIBBLE_INVERSION = InversionPlan(
    NIBBLE_FIELD,
    ("B",),
    (
        ("copy", "O", "X", 2),
        ("mul", "B", ("X", 1), ("O", 2)),
        ("unmul", "O", 8, ("X", 2), ("B", 6)),
        ("mul", "O", ("X", 1), ("B", 6)),
        ("unmul", "B", 9, ("X", 2), ("O", 7)),
        ("to", "X", 1),
        ("to", "O", 14),
    ),
)

PLANS = {AES_FIELD: AES_INVERSION, NIBBLE_FIELD: NIBBLE_INVERSION}


def _frobenius_shift(e: int, target: int, n: int, m: int) -> int:
    for s in range(m):
        if e * pow(2, s, n) % n == target % n:
            return s
    raise ValueError(f"a^{target} is not a Frobenius image of a^{e}")


@dataclass
class InversionStats:
    multiplications: int = 0
    linear_maps: int = 0
    linear_cnots: int = 0


@lru_cache(maxsize=None)
def inversion_template(plan: InversionPlan = AES_INVERSION) -> tuple[Circuit, InversionStats]:
    """Run ``plan`` on registers X, O, then the work registers, in that wire order."""
    field = plan.field
    m = field.degree
    n = field.order - 1
    names = ("X", "O", *plan.work)
    regs = {name: list(range(i * m, (i + 1) * m)) for i, name in enumerate(names)}
    exp: dict[str, int | None] = {name: None for name in names}
    exp["X"] = 1
    circ = Circuit(len(names) * m, name="gf-inv")
    stats = InversionStats()

    def rotate(name: str, target: int) -> None:
        e = exp[name]
        if e is None:
            raise ValueError(f"register {name} is clear")
        s = _frobenius_shift(e, target, n, m)
        if s:
            before = len(circ.gates)
            synthesize_linear(matrix_of_field_map(1 << s, field), regs[name], circ)
            stats.linear_maps += 1
            stats.linear_cnots += len(circ.gates) - before
        exp[name] = target % n

    for step in plan.steps:
        op = step[0]
        if op == "copy":
            _, dst, src, e = step
            if exp[dst] is not None:
                raise ValueError(f"copy target {dst} is not clear")
            s = _frobenius_shift(exp[src], e, n, m)
            mat = matrix_of_field_map(1 << s, field).bits
            for i in range(m):
                for j in range(m):
                    if mat[i, j]:
                        circ.cnot(regs[src][j], regs[dst][i])
                        stats.linear_cnots += 1
            stats.linear_maps += 1
            exp[dst] = e % n
        elif op == "mul":
            _, dst, (u, eu), (v, ev) = step
            if exp[dst] is not None:
                raise ValueError(f"product target {dst} is not clear")
            rotate(u, eu)
            rotate(v, ev)
            build_multiplier(regs[u], regs[v], regs[dst], circ, field)
            stats.multiplications += 1
            exp[dst] = (eu + ev) % n
        elif op == "unmul":
            _, dst, ed, (u, eu), (v, ev) = step
            if (eu + ev - ed) % n:
                raise ValueError(f"a^{eu} * a^{ev} does not clear a^{ed}")
            rotate(dst, ed)
            rotate(u, eu)
            rotate(v, ev)
            build_multiplier(regs[u], regs[v], regs[dst], circ, field, uncompute=True)
            stats.multiplications += 1
            exp[dst] = None
        elif op == "to":
            _, name, e = step
            rotate(name, e)
        else:
            raise ValueError(f"unknown step {op!r}")
    if exp["X"] != 1 or exp["O"] != n - 1 or any(exp[w] is not None for w in plan.work):
        raise ValueError(f"plan ends in the wrong state: {exp}")
    circ.labels = {
        **{w: "input" for w in regs["X"]},
        **{w: "output" for w in regs["O"]},
        **{w: "ancilla-clean" for name in plan.work for w in regs[name]},
    }
    return circ, stats


def build_inversion(
    in_wires: Sequence[int],
    out_wires: Sequence[int],
    ancilla_wires: Sequence[int],
    circuit: Circuit | None = None,
    plan: InversionPlan = AES_INVERSION,
) -> Circuit:
    """|a>|0>|0> -> |a>|a^-1>|0>, with 0 sent to 0."""
    m = plan.field.degree
    _group_sizes(m, in_wires, out_wires)
    if len(ancilla_wires) != m * len(plan.work):
        raise ValueError(f"need {m * len(plan.work)} ancilla wires")
    check_disjoint(in_wires, out_wires, ancilla_wires)
    template, _ = inversion_template(plan)
    wires = [*in_wires, *out_wires, *ancilla_wires]
    if circuit is None:
        circuit = Circuit(max(wires) + 1, name="gf-inv")
        circuit.labels = {w: template.labels[i] for i, w in enumerate(wires)}
    return circuit.extend(template, wires)


# -- S-box -----------------------------------------------------------------------


@dataclass(frozen=True)
class AffineLayer:
    matrix: GF2Matrix
    constant: int


def _circulant(m: int, taps: Sequence[int]) -> GF2Matrix:
    return GF2Matrix([[1 if (j - i) % m in taps else 0 for j in range(m)] for i in range(m)])


AES_AFFINE = AffineLayer(_circulant(8, (0, 4, 5, 6, 7)), 0x63)
NIBBLE_AFFINE = AffineLayer(_circulant(4, (0, 1, 2)), 0x6)
AFFINES = {AES_FIELD: AES_AFFINE, NIBBLE_FIELD: NIBBLE_AFFINE}


@lru_cache(maxsize=None)
def sbox_template(plan: InversionPlan = AES_INVERSION) -> Circuit:
    inv, _ = inversion_template(plan)
    m = plan.field.degree
    circ = Circuit(inv.width, name="sbox", labels=inv.labels)
    circ.extend(inv)
    out = list(range(m, 2 * m))
    layer = AFFINES[plan.field]
    synthesize_linear(layer.matrix, out, circ)
    for i in range(m):
        if layer.constant >> i & 1:
            circ.x(out[i])
    return circ


def sbox_value(a: int, plan: InversionPlan = AES_INVERSION) -> int:
    """Classical evaluation of the S-box this module synthesizes."""
    field = plan.field
    inv = field.pow(a, field.order - 2)
    layer = AFFINES[field]
    return layer.matrix.apply(inv) ^ layer.constant


def build_sbox(
    in_wires: Sequence[int],
    out_wires: Sequence[int],
    ancilla_wires: Sequence[int],
    circuit: Circuit | None = None,
    plan: InversionPlan = AES_INVERSION,
) -> Circuit:
    """|a>|0>|0> -> |a>|S(a)>|0>."""
    m = plan.field.degree
    _group_sizes(m, in_wires, out_wires)
    if len(ancilla_wires) != m * len(plan.work):
        raise ValueError(f"need {m * len(plan.work)} ancilla wires")
    check_disjoint(in_wires, out_wires, ancilla_wires)
    template = sbox_template(plan)
    wires = [*in_wires, *out_wires, *ancilla_wires]
    if circuit is None:
        circuit = Circuit(max(wires) + 1, name="sbox")
        circuit.labels = {w: template.labels[i] for i, w in enumerate(wires)}
    return circuit.extend(template, wires)
