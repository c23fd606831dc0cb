import os

import pytest

from planarq.circuit import Circuit, Gate, parse_qasm

FIXTURE_DIR = os.path.join(os.path.dirname(__file__), "fixtures")

# one line per acceptance criterion, echoed after the test run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

# Eight-register interaction pattern with one heavy hub (vertex 6) whose
# degree exceeds the bound; the designed layout must split it. Weights are
# gate-block counts.
HUB_CCG_EDGES = [
    (0, 3, 1), (0, 5, 1), (0, 7, 2), (3, 5, 2), (3, 7, 3), (5, 7, 3),
    (4, 7, 1), (0, 6, 6), (3, 6, 7), (5, 6, 8), (6, 7, 9), (1, 6, 2),
    (2, 6, 3), (4, 6, 4),
]
HUB_N = 8


def cx(a: int, b: int) -> Gate:
    return Gate("two_qubit", "cx", (a, b))


def hub_circuit() -> Circuit:
    """A circuit whose block profile equals HUB_CCG_EDGES exactly.

    Greedy schedule: always emit the pair with the most blocks left whose
    previous gate has already been cut off by a gate on a shared wire, so
    every emission opens a fresh block.
    """
    remaining = {(u, v): w for u, v, w in HUB_CCG_EDGES}
    gates = []
    last_emit: dict[tuple[int, int], int] = {}
    last_touch = [-1] * HUB_N
    t = 0
    while remaining:
        ready = [p for p in remaining
                 if p not in last_emit
                 or last_emit[p] < max(last_touch[p[0]], last_touch[p[1]])]
        assert ready, "schedule wedged; fixture weights too lopsided"
        pair = max(ready, key=lambda p: (remaining[p], p))
        gates.append(cx(*pair))
        last_emit[pair] = t
        last_touch[pair[0]] = t
        last_touch[pair[1]] = t
        t += 1
        remaining[pair] -= 1
        if remaining[pair] == 0:
            del remaining[pair]
    return Circuit(HUB_N, tuple(gates), name="hub8")


def load_fixture(name: str) -> Circuit:
    with open(os.path.join(FIXTURE_DIR, name)) as fh:
        return parse_qasm(fh.read(), name=name)


@pytest.fixture
def corpus():
    return [load_fixture(f) for f in sorted(os.listdir(FIXTURE_DIR))
            if f.endswith(".qasm")]
