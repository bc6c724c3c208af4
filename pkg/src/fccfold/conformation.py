"""Self-avoiding chains on the FCC lattice.

A :class:`Conformation` stores the chain three ways that are kept coherent:
packed site keys (the working representation), basis-vector directions, and
an occupancy index.  ``points`` is derived on demand.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple

from .errors import LengthMismatch, NoHydrophobicResidues, SelfCollision
from .lattice import (
    BASIS,
    DELTA_INDEX,
    KEY_DELTA,
    ORIGIN,
    LatticePoint,
    OccupancyIndex,
    pack,
    sq_dist,
    unpack,
)
from .sequence import Sequence, parse_sequence

ORIGIN_KEY = pack(ORIGIN)


class Conformation:
    __slots__ = ("sequence", "keys", "_directions", "_points", "occupancy", "fitness", "fitness_model",
                 "_contact_lists")

    def __init__(self, sequence: Sequence, keys: list[int], occupancy: OccupancyIndex | None = None,
                 directions: list[int] | None = None):
        # Trusted constructor: callers guarantee a valid walk.
        self.sequence = sequence
        self.keys = keys
        if occupancy is None:
            occupancy = OccupancyIndex(zip(keys, range(len(keys))))
        self.occupancy = occupancy
        self._directions = directions
        self._points = None
        self.fitness: float | None = None
        self.fitness_model = None
        self._contact_lists = None

    @classmethod
    def from_directions(cls, seq: Sequence, dirs: Iterable[int], start=ORIGIN) -> Conformation:
        dirs = list(dirs)
        if len(dirs) != len(seq) - 1:
            raise LengthMismatch(f"need {len(seq) - 1} directions for {len(seq)} residues, got {len(dirs)}")
        key = pack(start)
        keys = [key]
        occ = OccupancyIndex({key: 0})
        for i, d in enumerate(dirs, start=1):
            key += KEY_DELTA[d]
            if key in occ:
                raise SelfCollision(i)
            occ[key] = i
            keys.append(key)
        return cls(seq, keys, occ, dirs)

    @classmethod
    def from_points(cls, seq: Sequence, points: Iterable) -> Conformation:
        keys = [pack(p) for p in points]
        if len(keys) != len(seq):
            raise LengthMismatch(f"{len(keys)} points for {len(seq)} residues")
        occ = OccupancyIndex()
        for i, k in enumerate(keys):
            if k in occ:
                raise SelfCollision(i)
            occ[k] = i
        dirs = []
        for i in range(len(keys) - 1):
            d = DELTA_INDEX.get(keys[i + 1] - keys[i])
            if d is None:
                raise ValueError(f"residues {i} and {i + 1} are not lattice neighbours")
            dirs.append(d)
        return cls(seq, keys, occ, dirs)

    def __len__(self) -> int:
        return len(self.keys)

    @property
    def directions(self) -> list[int]:
        if self._directions is None:
            k = self.keys
            self._directions = [DELTA_INDEX[k[i + 1] - k[i]] for i in range(len(k) - 1)]
        return self._directions

    @property
    def points(self) -> tuple[LatticePoint, ...]:
        if self._points is None:
            self._points = tuple(unpack(k) for k in self.keys)
        return self._points

    @property
    def contact_lists(self) -> list[list[int]]:
        """``contact_lists[i]``: non-consecutive lattice neighbours of residue ``i``."""
        if self._contact_lists is None:
            occ = self.occupancy
            out = []
            for i, k in enumerate(self.keys):
                near = []
                for d in KEY_DELTA:
                    j = occ.get(k + d)
                    if j is not None and (j > i + 1 or j < i - 1):
                        near.append(j)
                out.append(near)
            self._contact_lists = out
        return self._contact_lists

    def copy(self) -> Conformation:
        c = Conformation(self.sequence, list(self.keys), OccupancyIndex(self.occupancy),
                         None if self._directions is None else list(self._directions))
        c.fitness, c.fitness_model = self.fitness, self.fitness_model
        return c

    def translated(self, t) -> Conformation:
        return Conformation.from_points(self.sequence, [p + t for p in self.points])

    def with_keys(self, keys: list[int]) -> Conformation:
        return Conformation(self.sequence, keys)

    def key(self) -> bytes:
        return canonical_key(self)

    def __eq__(self, other) -> bool:
        return isinstance(other, Conformation) and self.keys == other.keys and self.sequence == other.sequence

    def __hash__(self) -> int:
        return hash(tuple(self.keys))

    def __repr__(self) -> str:
        e = "unset" if self.fitness is None else f"{self.fitness:.2f}"
        return f"Conformation(n={len(self)}, fitness={e}, dirs={bytes(self.directions).hex()})"


def from_directions(seq: Sequence, dirs: Iterable[int]) -> Conformation:
    return Conformation.from_directions(seq, dirs)


def straight_chain(seq: Sequence, direction: int = 0) -> Conformation:
    return Conformation.from_directions(seq, [direction] * (len(seq) - 1))


def is_valid(conf: Conformation) -> bool:
    """Rebuild-and-check: connectivity, self-avoidance, coherent caches."""
    pts = [unpack(k) for k in conf.keys]
    if len(pts) != len(conf.sequence):
        return False
    if len(set(pts)) != len(pts):
        return False
    for i in range(len(pts) - 1):
        if sq_dist(pts[i], pts[i + 1]) != 2:
            return False
        if pts[i + 1] - pts[i] != BASIS[conf.directions[i]]:
            return False
    if len(conf.occupancy) != len(pts):
        return False
    return all(conf.occupancy.get(k) == i for i, k in enumerate(conf.keys))


def canonical_key(conf: Conformation) -> bytes:
    """Duplicate-detection key: the exact direction string."""
    return bytes(conf.directions)


class Hcc(NamedTuple):
    cx: float
    cy: float
    cz: float


def hcc(conf: Conformation, seq: Sequence | None = None) -> Hcc:
    """Mean coordinate of the hydrophobic residues."""
    seq = seq or conf.sequence
    hs = seq.h_positions
    if not hs:
        raise NoHydrophobicResidues(f"sequence {seq.id!r} has no H residues")
    pts = [unpack(conf.keys[i]) for i in hs]
    n = len(pts)
    return Hcc(sum(p[0] for p in pts) / n, sum(p[1] for p in pts) / n, sum(p[2] for p in pts) / n)


def diversity(a: Conformation, b: Conformation) -> float:
    """Fraction of direction slots that differ (normalised Hamming)."""
    if len(a) != len(b):
        raise LengthMismatch(f"lengths differ: {len(a)} vs {len(b)}")
    da, db = a.directions, b.directions
    if not da:
        return 0.0
    return sum(x != y for x, y in zip(da, db)) / len(da)


def dump(conf: Conformation, energy: float | None = None, model: str = "") -> str:
    """``index x y z code`` per residue plus an ``energy ... model ...`` trailer."""
    lines = [f"{i} {p.x} {p.y} {p.z} {r.code}" for i, (p, r) in enumerate(zip(conf.points, conf.sequence.residues))]
    if energy is None:
        energy = conf.fitness if conf.fitness is not None else float("nan")
    lines.append(f"energy {energy:.6f} model {model}".rstrip())
    return "\n".join(lines) + "\n"


def parse_dump(text: str, seq_id: str = "dump") -> tuple[Conformation, float | None, str]:
    points, codes = [], []
    energy, model = None, ""
    for line in text.splitlines():
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "energy":
            energy = float(parts[1])
            if len(parts) >= 4 and parts[2] == "model":
                model = parts[3]
            continue
        idx, x, y, z, code = parts
        if int(idx) != len(points):
            raise ValueError(f"residue index {idx} out of order")
        points.append(LatticePoint(int(x), int(y), int(z)))
        codes.append(code)
    seq = parse_sequence("".join(codes), seq_id)
    return Conformation.from_points(seq, points), energy, model
