"""Command-line front end.

Exit codes: 0 success, 1 verification mismatch, 2 usage error, 3 I/O or parse error.
"""
from __future__ import annotations

import argparse
import random
import sys
from typing import Sequence

from . import gatelist
from .gatelist import format_wires
from .circuit import Circuit, resources
from .cost import estimate, iterations, load_budget, published_budget, required_pairs, synthesized_budget
from .errors import BadFlagCombination, Mismatch, NonUniqueKey, ParseError
from .lowering import TOFFOLI_NETLISTS, LoweringOptions, lower_all_mcx, lower_toffoli
from .reference import aes_encrypt

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

FIELD_COMPONENTS = ("mult", "inv", "sbox", "mixcolumns")
KEYED_COMPONENTS = ("keyexp", "aes", "oracle")
FIPS_PLAINTEXT_HEX = "00112233445566778899aabbccddeeff"


def _hex_bytes(text: str) -> bytes:
    try:
        return bytes.fromhex(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not hexadecimal: {text!r}") from None


def _emit(lines: Sequence[tuple[str, str]], fmt: str) -> None:
    if fmt == "kv":
        for k, v in lines:
            print(f"{k}={v}")
    else:
        width = max(len(k) for k, _ in lines)
        for k, v in lines:
            print(f"{k.ljust(width)}  {v}")


# -- synthesize ----------------------------------------------------------------------


def _field_circuit(component: str) -> Circuit:
    from .synth.aes import build_mixcolumns
    from .synth.field import build_inversion, build_multiplier, build_sbox

    if component == "mult":
        circ = build_multiplier(range(0, 8), range(8, 16), range(16, 24))
        circ.meta.update({"a": "0-7", "b": "8-15", "out": "16-23"})
    elif component in ("inv", "sbox"):
        build = build_inversion if component == "inv" else build_sbox
        circ = build(range(0, 8), range(8, 16), range(16, 40))
        circ.meta.update({"in": "0-7", "out": "8-15", "clean": format_wires(range(16, 40))})
    else:
        circ = build_mixcolumns(range(32))
        circ.meta["column"] = "0-31"
    circ.meta["component"] = component
    return circ


def synthesize(component: str, key_size: int | None, plaintext: bytes | None = None, seed: int = 0,
               key: bytes | None = None, pairs: int | None = None) -> Circuit:
    if component in FIELD_COMPONENTS:
        if key_size is not None:
            raise BadFlagCombination(f"--key-size does not apply to {component}")
        return _field_circuit(component)
    k = 128 if key_size is None else key_size
    if component == "keyexp":
        from .synth.aes import build_key_expansion

        return build_key_expansion(k)[0]
    if component == "aes":
        from .synth.aes import build_aes

        return build_aes(k, plaintext or bytes.fromhex(FIPS_PLAINTEXT_HEX))[0]
    from .synth.oracle import build_oracle

    rng = random.Random(seed)
    r = required_pairs(k) if pairs is None else pairs
    secret = key if key is not None else rng.randbytes(k // 8)
    if len(secret) * 8 != k:
        raise BadFlagCombination(f"--key must be {k // 8} bytes for AES-{k}")
    texts = [rng.randbytes(16) for _ in range(r)]
    circ = build_oracle(k, [(p, aes_encrypt(secret, p)) for p in texts], r=r)
    circ.meta.update({"planted": secret.hex(), "key_size": str(k), "plaintexts": ",".join(p.hex() for p in texts)})
    return circ


def cmd_synthesize(args: argparse.Namespace) -> int:
    if args.plaintext is not None and args.component != "aes":
        raise BadFlagCombination("--plaintext only applies to --component aes")
    if (args.key is not None or args.pairs is not None) and args.component != "oracle":
        raise BadFlagCombination("--key and --pairs only apply to --component oracle")
    if args.plaintext is not None and len(args.plaintext) != 16:
        raise BadFlagCombination("--plaintext must be 16 bytes")
    circ = synthesize(args.component, args.key_size, args.plaintext, args.seed, args.key, args.pairs)
    text = gatelist.dumps(circ)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as f:
            f.write(text)
        rv = resources(circ)
        print(f"wrote {args.out}: width {circ.width}, {rv.gate_count} gates, {rv.toffoli_count} Toffoli")
    return EXIT_OK


# -- lower ---------------------------------------------------------------------------


def cmd_lower(args: argparse.Namespace) -> int:
    circ = gatelist.load(args.input)
    opts = LoweringOptions(netlist=args.netlist)
    if args.stage in ("mcx", "all"):
        circ = lower_all_mcx(circ)
    if args.stage in ("toffoli", "all"):
        circ = lower_toffoli(circ, opts)
    text = gatelist.dumps(circ)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as f:
            f.write(text)
        rv = resources(circ)
        print(f"wrote {args.out}: width {circ.width}, {rv.gate_count} gates, T {rv.t_count}, "
              f"Clifford {rv.clifford_count}, T-depth {rv.t_depth}, depth {rv.depth}")
    return EXIT_OK


# -- verify --------------------------------------------------------------------------


def cmd_verify(args: argparse.Namespace) -> int:
    from .verify import read_vectors, verify_circuit

    circ = gatelist.load(args.circuit)
    size = circ.meta.get("key_size")
    if args.key_size is not None and size is not None and int(size) != args.key_size:
        raise BadFlagCombination(f"circuit is AES-{size}, not AES-{args.key_size}")
    vectors = read_vectors(args.vectors) if args.vectors else []
    try:
        n = verify_circuit(circ, vectors, args.random, args.seed)
    except Mismatch as e:
        print(f"MISMATCH {e}")
        return EXIT_MISMATCH
    print(f"OK {circ.meta.get('component')}: {n} cases match, ancillas clean")
    return EXIT_OK


# -- estimate and tables -------------------------------------------------------------


def cmd_estimate(args: argparse.Namespace) -> int:
    if args.budget_file and args.source != "published":
        raise BadFlagCombination("--budget-file replaces --source")
    if args.budget_file:
        budget = load_budget(args.budget_file)
        if budget.k != args.key_size:
            raise BadFlagCombination(f"budget file is for k={budget.k}, not {args.key_size}")
    elif args.source == "synth":
        budget = synthesized_budget(args.key_size)
    else:
        budget = published_budget(args.key_size)
    opts = LoweringOptions(toffoli_t_count=4 if args.jones else 7)
    e = estimate(budget, args.pairs, opts)
    rendered = e.rendered()
    lines = [("key_size", str(args.key_size)), ("pairs", str(e.r)), ("iterations", str(e.iterations))]
    lines += [(f"budget_{name}", str(getattr(budget, name))) for name in ("qubits", "t_count", "clifford", "t_depth", "depth")]
    for name in ("t_count", "clifford", "t_depth", "depth"):
        if args.format == "kv":
            lines += [(name, str(getattr(e, name))), (f"{name}_rendered", rendered[name])]
        else:
            lines.append((name, f"{rendered[name]}  ({getattr(e, name)})"))
    lines.append(("qubits", str(e.qubits)))
    lines.append(("toffoli_t", "4 (accounting only)" if args.jones else "7"))
    _emit(lines, args.format)
    return EXIT_OK


def cmd_tables(args: argparse.Namespace) -> int:
    from .tables import build_tables, format_table, table_kv

    tables = build_tables(args.source)
    if args.format == "kv":
        for t in tables:
            print("\n".join(table_kv(t)))
    else:
        print("\n\n".join(format_table(t) for t in tables))
    return EXIT_OK


# -- demo ------------------------------------------------------------------------------


def cmd_demo(args: argparse.Namespace) -> int:
    from dataclasses import replace

    from .demo import run_demo, seeded_spec

    spec = seeded_spec(args.key_bits, args.seed, args.rounds)
    if args.plant is not None:
        spec = replace(spec, planted=int(args.plant, 16))
    report = run_demo(spec, seed=args.seed, iterations=args.iterations, shots=args.shots)
    lines = [("plaintext", f"{spec.plaintext:#x}"), *report.lines()]
    if args.format == "text":
        lines += [("note", n) for n in report.notes]
    _emit(lines, args.format)
    return EXIT_OK


# -- entry point -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="aesgrover", description="Reversible AES circuits and Grover cost estimates.")
    sub = p.add_subparsers(dest="command", required=True)
    key_size = {"type": int, "choices": (128, 192, 256)}
    fmt = {"choices": ("text", "kv"), "default": "text", "help": "aligned text or key=value lines"}

    s = sub.add_parser("synthesize", help="write a component circuit as a gate list")
    s.add_argument("--component", required=True, choices=FIELD_COMPONENTS + KEYED_COMPONENTS)
    s.add_argument("--key-size", **key_size)
    s.add_argument("--out", required=True, help="output path, or - for stdout")
    s.add_argument("--plaintext", type=_hex_bytes, help="fixed plaintext for aes (hex, 16 bytes)")
    s.add_argument("--key", type=_hex_bytes, help="secret key for oracle (hex); random from --seed otherwise")
    s.add_argument("--pairs", type=int, help="number of plaintext blocks for oracle")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_synthesize)

    s = sub.add_parser("lower", help="lower MCX and/or Toffoli gates")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--out", required=True, help="output path, or - for stdout")
    s.add_argument("--stage", choices=("mcx", "toffoli", "all"), default="all")
    s.add_argument("--netlist", choices=tuple(TOFFOLI_NETLISTS), default=LoweringOptions().netlist)
    s.set_defaults(func=cmd_lower)

    s = sub.add_parser("verify", help="simulate a gate list against the reference")
    s.add_argument("--circuit", required=True)
    s.add_argument("--key-size", **key_size)
    s.add_argument("--vectors", help="file of 'key plaintext ciphertext' hex lines")
    s.add_argument("--random", type=int, default=10, help="number of random keys")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("estimate", help="Grover attack cost")
    s.add_argument("--key-size", required=True, **key_size)
    s.add_argument("--jones", action="store_true", help="count 4 T per Toffoli and one extra qubit")
    s.add_argument("--budget-file", help="key=value file with k, qubits, t_count, clifford, t_depth, depth")
    s.add_argument("--source", choices=("published", "synth"), default="published")
    s.add_argument("--pairs", type=int, help="override the number of plaintext blocks")
    s.add_argument("--format", **fmt)
    s.set_defaults(func=cmd_estimate)

    s = sub.add_parser("tables", help="published figures next to this package's")
    s.add_argument("--source", choices=("synth", "published"), default="synth")
    s.add_argument("--format", **fmt)
    s.set_defaults(func=cmd_tables)

    s = sub.add_parser("demo-grover", help="Grover search on a toy cipher")
    s.add_argument("--key-bits", type=int, required=True, choices=(4, 8, 12))
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--plant", help="planted key (hex); drawn from the seed otherwise")
    s.add_argument("--rounds", type=int, default=1)
    s.add_argument("--iterations", type=int, help=f"override floor(pi/4 * 2^(k/2)), e.g. {iterations(8)} for k=8")
    s.add_argument("--shots", type=int, default=8)
    s.add_argument("--format", **fmt)
    s.set_defaults(func=cmd_demo)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (BadFlagCombination, NonUniqueKey) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ParseError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
