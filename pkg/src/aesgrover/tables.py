"""Side-by-side resource tables: published figures against measured or published ones."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .circuit import resources
from .cost import (
    PUBLISHED_AES,
    PUBLISHED_GROVER,
    PUBLISHED_KEY_EXPANSION,
    ComponentBudget,
    estimate,
    parse_pow2,
    render_pow2,
)
from .lowering import lowered_resources
from .synth.aes import STATE_REGISTERS, SBOX_ANCILLA, build_aes, build_key_expansion

KEY_SIZES = (128, 192, 256)

KEY_EXPANSION_COLUMNS = ("NOT", "CNOT", "Toffoli", "T-depth", "depth", "storage", "ancilla")
AES_COLUMNS = ("T", "Clifford", "T-depth", "depth", "qubits")
GROVER_COLUMNS = ("T", "Clifford", "T-depth", "depth", "qubits")


@dataclass
class Table:
    name: str
    title: str
    columns: tuple[str, ...]
    rows: list[tuple[str, tuple, tuple]]  # label, published, compared


@lru_cache(maxsize=None)
def measured_key_expansion(k: int) -> tuple[int, ...]:
    circ, smap = build_key_expansion(k)
    rv = resources(circ)
    low = lowered_resources(circ)
    return (rv.not_count, rv.cnot_count, rv.toffoli_count, low.t_depth, low.depth, smap.storage_qubits, smap.ancilla_qubits)


@lru_cache(maxsize=None)
def measured_aes(k: int) -> dict[str, tuple[int, ...]]:
    kc, smap = build_key_expansion(k)
    kl = lowered_resources(kc)
    circ, _, _ = build_aes(k, bytes(16))
    low = lowered_resources(circ)
    key_gen = (kl.t_count, kl.clifford_count, kl.t_depth, kl.depth, smap.storage_qubits)
    total = (low.t_count, low.clifford_count, low.t_depth, low.depth, circ.width)
    rounds = tuple(t - g for t, g in zip(total[:4], key_gen[:4])) + (128 * STATE_REGISTERS[k] + SBOX_ANCILLA,)
    return {"key_gen": key_gen, "rounds": rounds, "total": total}


def _budget(k: int, total: tuple[int, ...]) -> ComponentBudget:
    t, c, td, d, q = total
    return ComponentBudget(k, q, t, c, td, d)


def grover_row(k: int, total: tuple[int, ...]) -> tuple:
    e = estimate(_budget(k, total))
    return (render_pow2(e.t_count), render_pow2(e.clifford), render_pow2(e.t_depth), render_pow2(e.depth), e.qubits)


def build_tables(source: str = "synth") -> list[Table]:
    """``source`` is "synth" (this package's circuits) or "published" (self-comparison)."""
    if source not in ("synth", "published"):
        raise ValueError("source must be 'synth' or 'published'")
    synth = source == "synth"
    keyexp = Table("keyexp", "Key expansion", KEY_EXPANSION_COLUMNS, [])
    aes = []
    grover = Table("grover", "Grover attack", GROVER_COLUMNS, [])
    for k in KEY_SIZES:
        keyexp.rows.append((f"AES-{k}", PUBLISHED_KEY_EXPANSION[k], measured_key_expansion(k) if synth else PUBLISHED_KEY_EXPANSION[k]))
        mine = measured_aes(k) if synth else PUBLISHED_AES[k]
        t = Table(f"aes{k}", f"AES-{k}", AES_COLUMNS, [])
        for row in ("key_gen", "rounds", "total"):
            t.rows.append((row, PUBLISHED_AES[k][row], mine[row]))
        aes.append(t)
        grover.rows.append((f"AES-{k}", PUBLISHED_GROVER[k], grover_row(k, mine["total"]) if synth else PUBLISHED_GROVER[k]))
    return [keyexp, *aes, grover]


def _value(v) -> float:
    return parse_pow2(v) if isinstance(v, str) else float(v)


def delta(published, compared) -> float:
    p = _value(published)
    return 0.0 if p == 0 else (_value(compared) - p) / p


def _cell(v) -> str:
    return v if isinstance(v, str) else f"{v:,}"


def format_table(table: Table) -> str:
    """Three lines per row: published values, compared values, relative delta in percent."""
    header = ["", "", *table.columns]
    body = []
    for label, pub, ours in table.rows:
        body.append([label, "published", *map(_cell, pub)])
        body.append(["", "ours", *map(_cell, ours)])
        body.append(["", "delta %", *(f"{100 * delta(p, o):+.1f}" for p, o in zip(pub, ours))])
    widths = [max(len(r[i]) for r in [header, *body]) for i in range(len(header))]
    lines = [table.title]
    for r in [header, *body]:
        lines.append("  ".join(c.ljust(w) if i < 2 else c.rjust(w) for i, (c, w) in enumerate(zip(r, widths))).rstrip())
    return "\n".join(lines)


def table_kv(table: Table) -> list[str]:
    out = []
    for label, pub, ours in table.rows:
        key = label.lower().replace("-", "")
        for col, p, o in zip(table.columns, pub, ours):
            c = col.lower().replace("-", "_")
            out.append(f"{table.name}.{key}.{c}.published={p}")
            out.append(f"{table.name}.{key}.{c}.ours={o}")
            out.append(f"{table.name}.{key}.{c}.delta={delta(p, o):.6f}")
    return out
