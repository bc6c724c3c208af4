import numpy as np
import pytest

from fccfold.conformation import Conformation
from fccfold.lattice import KEY_DELTA, OccupancyIndex, pack
from fccfold.sequence import Sequence


def random_saw(seq: Sequence, rng: np.random.Generator, tries: int = 1000) -> Conformation:
    """Grow a walk by uniform choice among free neighbours; restart when trapped."""
    n = len(seq)
    for _ in range(tries):
        key = pack((0, 0, 0))
        keys, occ = [key], OccupancyIndex({key: 0})
        for i in range(1, n):
            free = [key + d for d in KEY_DELTA if key + d not in occ]
            if not free:
                break
            key = free[int(rng.integers(len(free)))]
            occ[key] = i
            keys.append(key)
        else:
            return Conformation(seq, keys, occ)
    raise RuntimeError("could not grow a walk")


def random_letters(rng: np.random.Generator, n: int, alphabet: str = "ACDEFGHIKLMNPQRSTVWY") -> str:
    return "".join(alphabet[int(i)] for i in rng.integers(len(alphabet), size=n))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# one line per acceptance criterion, printed after the run
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
