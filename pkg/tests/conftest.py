import pytest

from aesgrover.synth.aes import build_aes, build_key_expansion
from aesgrover.verify import FIPS_PLAINTEXT

# criterion number -> (description, passed); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[str, bool]] = {}


@pytest.fixture(scope="session")
def aes_circuits():
    """Full AES circuits for the FIPS plaintext, built once per session."""
    cache = {}

    def get(k: int):
        if k not in cache:
            cache[k] = build_aes(k, FIPS_PLAINTEXT)
        return cache[k]

    return get


@pytest.fixture(scope="session")
def key_expansions():
    cache = {}

    def get(k: int):
        if k not in cache:
            cache[k] = build_key_expansion(k)
        return cache[k]

    return get


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        text, ok = ACCEPTANCE[n]
        terminalreporter.write_line(f"ACCEPTANCE {n}: {'PASS' if ok else 'FAIL'}  {text}")
