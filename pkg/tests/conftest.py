import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from actlab.act import coproduct, cyclic_subact, congruence_generated, quotient_act, regular_representation
from actlab.corpus import fixtures as _fixtures


@pytest.fixture(scope="session")
def fixtures():
    return _fixtures()


@pytest.fixture(scope="session")
def small_fixtures(fixtures):
    return {k: M for k, M in fixtures.items() if M.order <= 10}


def random_act(M, rng: np.random.Generator, max_size: int = 6):
    """A random act of at most ``max_size`` points: glued copies of cyclic subacts."""
    S = regular_representation(M)
    pieces = []
    total = 0
    for _ in range(rng.integers(1, 4)):
        x = int(rng.integers(M.order))
        C, _ = cyclic_subact(S, x)
        if total + C.size > max_size + 3:
            continue
        pieces.append(C)
        total += C.size
    if not pieces:
        pieces = [cyclic_subact(S, int(idx))[0] for idx in [M.order - 1]]
    A, _ = coproduct(*pieces)
    pairs = [(int(rng.integers(A.size)), int(rng.integers(A.size))) for _ in range(rng.integers(0, 3))]
    A, _ = quotient_act(A, congruence_generated(A, pairs))
    if A.size > max_size:
        p = int(rng.integers(A.size))
        if len(A.orbit(p)) > max_size:
            p = min(A.points, key=lambda q: len(A.orbit(q)))
        A, _ = cyclic_subact(A, p)
    return A


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
