import random

import pytest

from thompson_kex.words import Letter, Word

_ACCEPTANCE_LINES = []


def small_alphabet(max_index=3):
    return [Letter(i, s) for i in range(max_index + 1) for s in (1, -1)]


def random_word(rng: random.Random, length: int, max_index: int = 9) -> Word:
    return Word(tuple(Letter(rng.randint(0, max_index), rng.choice((1, -1))) for _ in range(length)))


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def criterion():
    """Record one acceptance verdict line; printed in the terminal summary."""

    def record(number, name, passed, detail=""):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {name}"
        if detail:
            line += f" -- {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda l: int(l.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
