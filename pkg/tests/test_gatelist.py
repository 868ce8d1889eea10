import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aesgrover.circuit import Circuit, Gate
from aesgrover.errors import ParseError
from aesgrover.gatelist import dumps, format_wires, loads, parse_wires
from aesgrover.synth.field import sbox_template


@pytest.mark.parametrize("wires, text", [([0, 1, 2, 5], "0-2,5"), ([7], "7"), ([3, 2, 1], "3,2,1"), ([], "")])
def test_wire_lists(wires, text):
    assert format_wires(wires) == text
    assert parse_wires(text) == wires


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 300), max_size=40))
def test_wire_list_round_trip(wires):
    assert parse_wires(format_wires(wires)) == wires


def test_round_trip_keeps_everything():
    c = Circuit(6, name="demo", labels={0: "key", 5: "output"})
    c.h(0).t(1).cnot(0, 1).toffoli(0, 1, 2).mcx([0, 1, 3], 4, [1, 0, 1])
    c.append(Gate.mcz([2, 3], [0, 1]))
    c.permute_wires([1, 0, 2, 3, 4, 5])
    c.meta["component"] = "test"
    d = loads(dumps(c))
    assert d == c
    assert (d.name, d.labels, d.meta, d.l2p) == (c.name, c.labels, c.meta, c.l2p)


def test_sbox_header():
    text = dumps(sbox_template())
    assert text.startswith("WIDTH 40\n")
    assert "TOF" in text


def test_dumps_is_deterministic():
    assert dumps(sbox_template()) == dumps(sbox_template())


def test_comments_and_blank_lines():
    c = loads("# hello\n\nWIDTH 2\n# a note\nCNOT 0 1\n")
    assert c.gates == [Gate.cnot(0, 1)]


@pytest.mark.parametrize(
    "text, line",
    [
        ("CNOT 0 1\n", 1),
        ("WIDTH 3\nTOF 0 1\n", 2),
        ("WIDTH 3\nFOO 1\n", 2),
        ("WIDTH 3\nCNOT 0 3\n", 2),
        ("WIDTH 3\nCNOT 1 1\n", 2),
        ("WIDTH 3\nMCX 0 1 2\n", 2),
        ("# @ name x\nWIDTH 3\n", 1),
        ("WIDTH 3\n# @ l2p 0,0,1\n", 2),
    ],
)
def test_parse_errors_name_the_line(text, line):
    with pytest.raises(ParseError, match=f"line {line}"):
        loads(text)


def test_empty_file():
    with pytest.raises(ParseError):
        loads("")


def test_random_round_trip():
    rng = random.Random(0)
    c = Circuit(10)
    for _ in range(200):
        c.toffoli(*rng.sample(range(10), 3))
        if rng.random() < 0.05:
            perm = list(range(10))
            rng.shuffle(perm)
            c.permute_wires(perm)
    assert loads(dumps(c)) == c
