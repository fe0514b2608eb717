import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    max_examples=50,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


# Explicit operator matrices for the built-in two- and three-agent registers,
# written out entry by entry (1-based positions quoted in comments) so the
# construction code is pinned independently of its own conventions.

LOWER_2 = np.array([[0, 1], [0, 0]], dtype=complex)


def _explicit(dim, entries):
    m = np.zeros((dim, dim), dtype=complex)
    for (row, col), value in entries.items():
        m[row - 1, col - 1] = value
    return m


# two fermionic modes
A1_TWO_FERMION = _explicit(4, {(1, 2): 1, (3, 4): 1})
A2_TWO_FERMION = _explicit(4, {(1, 3): 1, (2, 4): -1})

# three fermionic modes
B1_THREE_FERMION = _explicit(8, {(1, 2): 1, (3, 4): 1, (5, 6): 1, (7, 8): 1})
B2_THREE_FERMION = _explicit(8, {(1, 3): 1, (2, 4): -1, (5, 7): 1, (6, 8): -1})
B3_THREE_FERMION = _explicit(8, {(1, 5): 1, (2, 6): -1, (3, 7): -1, (4, 8): 1})

# two three-level bosonic modes
_R2 = np.sqrt(2.0)
A1_TWO_BOSON = _explicit(
    9,
    {(1, 2): 1, (2, 3): _R2, (4, 5): 1, (5, 6): _R2, (7, 8): 1, (8, 9): _R2},
)
A2_TWO_BOSON = _explicit(
    9,
    {(1, 4): 1, (2, 5): 1, (3, 6): 1, (4, 7): _R2, (5, 8): _R2, (6, 9): _R2},
)


@pytest.fixture
def rng():
    return np.random.default_rng(20240731)
