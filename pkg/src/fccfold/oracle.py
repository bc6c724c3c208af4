"""Exhaustive self-avoiding-walk enumeration for short chains.

Ground truth for tests: exact optima and complete walk sets.  Cost grows
roughly as 11.x**n, so the default length cap is 9.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .energy import ENERGY_EPS, ContactMatrix, pair_table
from .errors import TooLong
from .lattice import KEY_DELTA, ROTATED_BASIS, pack
from .sequence import Sequence

DEFAULT_CAP = 9


@dataclass
class EnumerationResult:
    n: int
    count: int
    optimum: float
    argmin: tuple[int, ...]
    optimal_count: int = 0


def _check(n: int, cap: int) -> None:
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if n > cap:
        raise TooLong(f"n={n} exceeds the enumeration cap {cap}")


def canonical_directions(dirs) -> tuple[int, ...]:
    """Lexicographically smallest image of ``dirs`` over the 24 rotations."""
    return min(tuple(rt[d] for d in dirs) for rt in ROTATED_BASIS)


def _walks(n: int, first: int | None) -> Iterator[tuple[int, ...]]:
    origin = pack((0, 0, 0))
    occupied = {origin}
    dirs: list[int] = []

    def extend(key: int) -> Iterator[tuple[int, ...]]:
        if len(dirs) == n - 1:
            yield tuple(dirs)
            return
        choices = (first,) if first is not None and not dirs else range(12)
        for d in choices:
            nxt = key + KEY_DELTA[d]
            if nxt in occupied:
                continue
            occupied.add(nxt)
            dirs.append(d)
            yield from extend(nxt)
            dirs.pop()
            occupied.discard(nxt)

    yield from extend(origin)


def enumerate_saws(n: int, symmetry_reduce: bool = False, cap: int = DEFAULT_CAP) -> Iterator[tuple[int, ...]]:
    """Yield direction strings of every SAW with ``n`` residues.

    With ``symmetry_reduce`` one canonical representative per rotation class
    is emitted (its first direction is always ``v1``).
    """
    _check(n, cap)
    if not symmetry_reduce:
        yield from _walks(n, None)
        return
    for dirs in _walks(n, 0):
        if canonical_directions(dirs) == dirs:
            yield dirs


def count_saws(n: int, symmetry_reduce: bool = False, cap: int = DEFAULT_CAP) -> int:
    return sum(1 for _ in enumerate_saws(n, symmetry_reduce, cap))


def exact_optimum(seq: Sequence, model: ContactMatrix, cap: int = DEFAULT_CAP) -> EnumerationResult:
    """Minimum energy over all SAWs, by depth-first search.

    The first step is fixed to ``v1``; energy is rotation invariant and the
    rotations act transitively on the basis, so no optimum is lost.
    ``count`` reports the walks scanned (all SAWs starting with ``v1``).
    """
    n = len(seq)
    _check(n, cap)
    table = pair_table(seq, model)
    origin = pack((0, 0, 0))
    occ = {origin: 0}
    dirs: list[int] = []
    best = [float("inf"), (), 0, 0]  # energy, argmin, optimal_count, count

    def extend(key: int, k: int, energy: float) -> None:
        if k == n:
            best[3] += 1
            if energy < best[0] - ENERGY_EPS:
                best[0], best[1], best[2] = energy, tuple(dirs), 1
            elif energy <= best[0] + ENERGY_EPS:
                best[2] += 1
            return
        row = table[k]
        for d in ((0,) if k == 1 else range(12)):
            nxt = key + KEY_DELTA[d]
            if nxt in occ:
                continue
            e = energy
            for dd in KEY_DELTA:
                j = occ.get(nxt + dd)
                if j is not None and j < k - 1:
                    e += row[j]
            occ[nxt] = k
            dirs.append(d)
            extend(nxt, k + 1, e)
            dirs.pop()
            del occ[nxt]

    extend(origin, 1, 0.0)
    return EnumerationResult(n, best[3], best[0], best[1], best[2])
