import itertools
from fractions import Fraction

import numpy as np
import pytest

from graphspace import Multigraph

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def g2():
    """n=2 graph used throughout the examples: W = [[0, 2], [1, 0]]."""
    return Multigraph([[0, 2], [1, 0]])


def placements(cells, m):
    """Every ordered placement of m edges into the given cells (each equally likely)."""
    return itertools.product(cells, repeat=m)


def exact_edev_by_enumeration(W, block_of, M):
    """EDEV by enumerating every equally likely edge placement of an SBM.

    Independent of the binomial closed form: each of the M[r][s] edges of
    block pair (r, s) picks one of the |b_r||b_s| cells; all combinations
    are listed and averaged exactly with fractions.
    """
    W = np.asarray(W)
    n = W.shape[0]
    block_of = list(block_of)
    p = max(block_of) + 1
    groups = []
    for r in range(p):
        for s in range(p):
            cells = [(i, j) for i in range(n) for j in range(n)
                     if block_of[i] == r and block_of[j] == s]
            groups.append((cells, int(M[r][s])))
    m = sum(k for _, k in groups)
    per_group = [list(placements(cells, k)) for cells, k in groups]
    total = Fraction(0)
    count = 0
    for combo in itertools.product(*per_group):
        H = np.zeros((n, n), dtype=np.int64)
        for placed in combo:
            for (i, j) in placed:
                H[i, j] += 1
        total += int(np.abs(W - H).sum())
        count += 1
    return total / count / (2 * m)
