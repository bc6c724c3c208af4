"""Face-centred-cubic lattice geometry.

Sites are integer triples whose nearest neighbours sit at squared Euclidean
distance 2.  The twelve basis vectors keep the fixed order ``v1..v12``; every
"first feasible" rule in the move operators depends on that order, so never
reorder ``BASIS``.

Internally the hot loops key occupancy by a packed integer (see :func:`pack`)
so that stepping to a neighbour is a single integer addition.
"""

from __future__ import annotations

import itertools
from typing import NamedTuple

import numpy as np


class LatticePoint(NamedTuple):
    x: int
    y: int
    z: int

    def __add__(self, other):  # type: ignore[override]
        return LatticePoint(self.x + other[0], self.y + other[1], self.z + other[2])

    def __sub__(self, other):
        return LatticePoint(self.x - other[0], self.y - other[1], self.z - other[2])


ORIGIN = LatticePoint(0, 0, 0)

# v1..v12, stored 0-based.
BASIS: tuple[LatticePoint, ...] = (
    LatticePoint(1, 1, 0),
    LatticePoint(1, 0, 1),
    LatticePoint(0, 1, 1),
    LatticePoint(-1, -1, 0),
    LatticePoint(-1, 0, -1),
    LatticePoint(0, -1, -1),
    LatticePoint(-1, 1, 0),
    LatticePoint(1, -1, 0),
    LatticePoint(-1, 0, 1),
    LatticePoint(0, 1, -1),
    LatticePoint(1, 0, -1),
    LatticePoint(0, -1, 1),
)
N_BASIS = len(BASIS)
BASIS_INDEX = {v: k for k, v in enumerate(BASIS)}
OPPOSITE = tuple(BASIS_INDEX[LatticePoint(-v.x, -v.y, -v.z)] for v in BASIS)

_SHIFT = 21
_BIAS = 1 << (_SHIFT - 1)
_MASK = (1 << _SHIFT) - 1


def pack(p) -> int:
    """Encode a point as a non-negative integer key (coordinates within +-2**20)."""
    return ((p[0] + _BIAS) << (2 * _SHIFT)) | ((p[1] + _BIAS) << _SHIFT) | (p[2] + _BIAS)


def unpack(key: int) -> LatticePoint:
    return LatticePoint(
        (key >> (2 * _SHIFT)) - _BIAS,
        ((key >> _SHIFT) & _MASK) - _BIAS,
        (key & _MASK) - _BIAS,
    )


def _delta(v) -> int:
    return (v[0] << (2 * _SHIFT)) + (v[1] << _SHIFT) + v[2]


# pack(p + BASIS[k]) == pack(p) + KEY_DELTA[k]
KEY_DELTA: tuple[int, ...] = tuple(_delta(v) for v in BASIS)
DELTA_INDEX = {d: k for k, d in enumerate(KEY_DELTA)}
NEIGHBOR_DELTAS = frozenset(KEY_DELTA)


def sq_dist(p, q) -> int:
    dx, dy, dz = p[0] - q[0], p[1] - q[1], p[2] - q[2]
    return dx * dx + dy * dy + dz * dz


def neighbors(p) -> list[LatticePoint]:
    """The 12 nearest sites of ``p`` in basis order."""
    x, y, z = p
    return [LatticePoint(x + v.x, y + v.y, z + v.z) for v in BASIS]


def is_contact(p, q) -> bool:
    return sq_dist(p, q) == 2


def _proper_rotations() -> tuple[np.ndarray, ...]:
    mats = []
    for perm in itertools.permutations(range(3)):
        for signs in itertools.product((1, -1), repeat=3):
            m = np.zeros((3, 3), dtype=np.int64)
            for row, (col, s) in enumerate(zip(perm, signs)):
                m[row, col] = s
            if round(np.linalg.det(m)) == 1:
                mats.append(m)
    # identity first so index 0 is always the no-op
    mats.sort(key=lambda m: not np.array_equal(m, np.eye(3, dtype=np.int64)))
    for m in mats:
        m.setflags(write=False)
    return tuple(mats)


ROTATIONS = _proper_rotations()


def lattice_rotations() -> list[np.ndarray]:
    """The 24 proper rotations of the cube as read-only integer matrices."""
    return list(ROTATIONS)


def apply_rotation(rot: np.ndarray, v) -> LatticePoint:
    r = rot
    return LatticePoint(
        int(r[0, 0] * v[0] + r[0, 1] * v[1] + r[0, 2] * v[2]),
        int(r[1, 0] * v[0] + r[1, 1] * v[1] + r[1, 2] * v[2]),
        int(r[2, 0] * v[0] + r[2, 1] * v[1] + r[2, 2] * v[2]),
    )


# ROTATED_BASIS[r][k]: index of BASIS[k] after rotation r.
ROTATED_BASIS: tuple[tuple[int, ...], ...] = tuple(
    tuple(BASIS_INDEX[apply_rotation(rot, v)] for v in BASIS) for rot in ROTATIONS
)


class OccupancyIndex(dict):
    """Packed-key -> residue index map enforcing one residue per site."""

    def insert(self, p, residue: int) -> None:
        key = pack(p)
        if key in self:
            raise KeyError(f"site {tuple(p)} already holds residue {self[key]}")
        self[key] = residue

    def remove(self, p) -> int:
        return self.pop(pack(p))

    def lookup(self, p) -> int | None:
        return self.get(pack(p))

    def is_free(self, p) -> bool:
        return pack(p) not in self
