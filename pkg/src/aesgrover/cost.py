"""Closed-form Grover key-search cost model.

Everything is exact integer arithmetic; ``render_pow2`` is only for display.
"""
from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path

import mpmath

from .errors import DomainError, ParseError
from .lowering import LoweringOptions, mcx_t_count

BLOCK_BITS = 128


@dataclass(frozen=True)
class ComponentBudget:
    """Resources of one AES-k circuit: s_k, t_k, c_k, delta_k and Delta_k."""

    k: int
    qubits: int
    t_count: int
    clifford: int
    t_depth: int
    depth: int

    def __post_init__(self) -> None:
        for f in fields(self):
            if getattr(self, f.name) < 0:
                raise ValueError(f"{f.name} must be non-negative")


@dataclass(frozen=True)
class GroverEstimate:
    iterations: int
    r: int
    t_count: int
    clifford: int
    t_depth: int
    depth: int
    qubits: int

    def rendered(self) -> dict[str, str]:
        return {
            "t_count": render_pow2(self.t_count),
            "clifford": render_pow2(self.clifford),
            "t_depth": render_pow2(self.t_depth),
            "depth": render_pow2(self.depth),
            "qubits": f"{self.qubits:,}",
        }


# -- published figures --------------------------------------------------------------

# key size -> (NOT, CNOT, Toffoli, T-depth, depth, storage qubits, ancilla qubits)
PUBLISHED_KEY_EXPANSION = {
    128: (176, 21448, 20480, 5760, 12636, 320, 96),
    192: (136, 17568, 16384, 4608, 10107, 256, 96),
    256: (215, 27492, 26624, 7488, 16408, 416, 96),
}

# key size -> {row: (T, Clifford, T-depth, depth, qubits)}
PUBLISHED_AES = {
    128: {
        "key_gen": (143360, 185464, 5760, 12626, 320),
        "rounds": (917504, 1194956, 44928, 98173, 536),
        "total": (1060864, 1380420, 50688, 110799, 984),
    },
    192: {
        "key_gen": (114688, 148776, 4608, 10107, 256),
        "rounds": (1089536, 1418520, 39744, 86849, 664),
        "total": (1204224, 1567296, 44352, 96956, 1112),
    },
    256: {
        "key_gen": (186368, 240699, 7488, 16408, 416),
        "rounds": (1318912, 1715400, 52416, 114521, 664),
        "total": (1505280, 1956099, 59904, 130929, 1336),
    },
}

# key size -> (T, Clifford, T-depth, depth, qubits), as rendered
PUBLISHED_GROVER = {
    128: ("1.19·2^86", "1.55·2^86", "1.06·2^80", "1.16·2^81", 2953),
    192: ("1.81·2^118", "1.17·2^119", "1.21·2^112", "1.33·2^113", 4449),
    256: ("1.41·2^151", "1.83·2^151", "1.44·2^144", "1.57·2^145", 6681),
}

# S-box built from a 9-qubit permutation factorization: (T, Clifford); cost parameter only
ALTERNATIVE_SBOX = (9695, 12631)
SBOX_T = 3584
SBOX_CLIFFORD = 4569


def published_budget(k: int) -> ComponentBudget:
    t, c, td, d, q = PUBLISHED_AES[k]["total"]
    return ComponentBudget(k, q, t, c, td, d)


# -- formulas ------------------------------------------------------------------------


def required_pairs(k: int, n: int = BLOCK_BITS) -> int:
    """Smallest r with r > ceil(2k/n)."""
    if k < 1 or n < 1:
        raise ValueError("k and n must be positive")
    return -(-2 * k // n) + 1


def iterations(k: int, marked: int = 1) -> int:
    """floor((pi/4) * sqrt(2^k / marked)), exact for k up to several hundred bits."""
    if k < 1 or marked < 1:
        raise ValueError("k and marked must be positive")
    with mpmath.workdps(k // 3 + 40):
        value = mpmath.pi / 4 * mpmath.sqrt(mpmath.mpf(2) ** k / marked)
        return int(mpmath.floor(value))


def comparison_cost(r: int) -> tuple[int, int]:
    """(Toffoli, T) of the 128r-controlled comparison."""
    if r < 1:
        raise ValueError("r must be positive")
    m = BLOCK_BITS * r
    return 8 * m - 24, 32 * m - 84


def phase_op_cost(k: int) -> tuple[int, int]:
    """(Toffoli, T) of the k-controlled phase flip in the diffusion."""
    if k < 5:
        raise DomainError("the formulas apply from five controls on")
    return 8 * k - 24, mcx_t_count(k)


def estimate(budget: ComponentBudget, r: int | None = None, opts: LoweringOptions = LoweringOptions()) -> GroverEstimate:
    """Whole-attack totals: each iteration computes and uncomputes r AES blocks,
    compares 128r bits and applies the k-controlled phase flip.

    The 4-T Toffoli option scales the T total by 4/7 (rounded down) and adds
    one qubit.
    """
    if r is None:
        r = required_pairs(budget.k)
    ell = iterations(budget.k)
    per_iteration_t = 2 * r * budget.t_count + mcx_t_count(BLOCK_BITS * r) + mcx_t_count(budget.k)
    t_total = ell * per_iteration_t
    qubits = r * budget.qubits + 1
    if opts.toffoli_t_count == 4:
        t_total = t_total * 4 // 7
        qubits += 1
    return GroverEstimate(
        iterations=ell,
        r=r,
        t_count=t_total,
        clifford=ell * 2 * r * budget.clifford,
        t_depth=ell * 2 * budget.t_depth,
        depth=ell * 2 * budget.depth,
        qubits=qubits,
    )


# -- rendering -----------------------------------------------------------------------


def render_pow2(value: int, digits: int = 2) -> str:
    """``value`` as a·2^b with 1 <= a < 2 and ``digits`` decimals."""
    if value <= 0:
        return "0" if value == 0 else "-" + render_pow2(-value, digits)
    b = value.bit_length() - 1
    with mpmath.workdps(30):
        a = mpmath.mpf(value) / mpmath.mpf(2) ** b
        text = mpmath.nstr(a, digits + 1, strip_zeros=False)
    if float(text) >= 2:
        b += 1
        text = f"{1:.{digits}f}"
    return f"{float(text):.{digits}f}·2^{b}"


def parse_pow2(text: str) -> float:
    """Inverse of :func:`render_pow2` (as a float)."""
    a, _, b = text.replace(" ", "").partition("·2^")
    if not b:
        raise ValueError(f"not of the form a·2^b: {text!r}")
    return float(a) * 2.0 ** int(b)


def relative_delta(measured: float, published: float) -> float:
    return (measured - published) / published


# -- budget files ----------------------------------------------------------------------


def parse_budget(text: str) -> ComponentBudget:
    """Flat key=value lines: k, qubits, t_count, clifford, t_depth, depth."""
    values: dict[str, int] = {}
    names = {f.name for f in fields(ComponentBudget)}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        key = key.strip()
        if not sep or key not in names:
            raise ParseError(f"expected one of {sorted(names)} as key=value", n)
        try:
            values[key] = int(val.strip().replace(",", "").replace("_", ""))
        except ValueError:
            raise ParseError(f"{key} is not an integer", n) from None
    missing = names - values.keys()
    if missing:
        raise ParseError(f"missing {', '.join(sorted(missing))}")
    return ComponentBudget(**values)


def load_budget(path: str | Path) -> ComponentBudget:
    return parse_budget(Path(path).read_text())


def format_budget(b: ComponentBudget) -> str:
    return "".join(f"{f.name}={getattr(b, f.name)}\n" for f in fields(b))


def synthesized_budget(k: int, opts: LoweringOptions = LoweringOptions()) -> ComponentBudget:
    """Budget measured on this package's own AES-k circuit after lowering."""
    from .lowering import lowered_resources
    from .synth.aes import build_aes

    circ, _, _ = build_aes(k, bytes(16))
    rv = lowered_resources(circ, opts)
    return ComponentBudget(k, circ.width, rv.t_count, rv.clifford_count, rv.t_depth, rv.depth)
