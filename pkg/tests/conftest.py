import random

import pytest

from aknormal.selftest import random_field

# criterion number -> (ok, description, detail); filled by test_acceptance.py
ACCEPTANCE: dict = {}


def record(n: int, ok: bool, description: str, detail: str = "") -> None:
    ACCEPTANCE[n] = (ok, description, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria (exact, tolerance 0)")
    for n in sorted(ACCEPTANCE):
        ok, desc, detail = ACCEPTANCE[n]
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {desc}"
        if detail:
            line += f"  [{detail}]"
        tr.write_line(line)


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture
def field_factory(rng):
    def make(k, gamma, density=0.6):
        return random_field(k, gamma, rng, density)
    return make
