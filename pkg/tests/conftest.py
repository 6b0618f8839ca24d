import random

import pytest

from linematch.model import make_instance


def rand_instance(seed, max_n=12, max_demand=2, coord_range=100, max_pairs=None):
    """Feasible random instance (demands clamped to the opposite set size)."""
    r = random.Random(seed)
    while True:
        n = r.randint(2, max_n)
        y = r.randint(1, n - 1)
        z = n - y
        if max_pairs is None or y * z <= max_pairs:
            break
    s = [r.randint(0, coord_range) for _ in range(y)]
    t = [r.randint(0, coord_range) for _ in range(z)]
    return make_instance(s, t,
                         [r.randint(1, min(max_demand, z)) for _ in s],
                         [r.randint(1, min(max_demand, y)) for _ in t])


@pytest.fixture
def rand():
    return rand_instance


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE: dict[str, str] = {}


def record(key, ok, text):
    ACCEPTANCE[key] = f"{key} {'PASS' if ok else 'FAIL'}  {text}"


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[key])
