"""Contact-energy models and conformation evaluation.

A conformation's energy is the sum of pair potentials over residues that are
lattice neighbours but not chain neighbours (``j >= i + 2``).
"""

from __future__ import annotations

import enum
import hashlib
from functools import lru_cache
from importlib import resources

import numpy as np

from .lattice import KEY_DELTA
from .sequence import AMINO_ACIDS, CODES, HYDROPHOBIC, THREE_LETTER_ORDER, THREE_TO_ONE, AminoAcid, Sequence

# Energies closer than this are treated as equal when ranking candidates.
ENERGY_EPS = 1e-9


class EnergyModel(str, enum.Enum):
    """Run-level objective tag.

    ``MH`` is not a matrix: it means the MJ objective with HP-guided
    macro-mutation.
    """

    HP = "hp"
    MJ = "mj"
    MH = "mh"


class ContactMatrix:
    """Symmetric 20x20 pair potential indexed by ``AminoAcid.index``."""

    def __init__(self, values, name: str = "custom"):
        arr = np.asarray(values, dtype=float)
        if arr.shape != (20, 20):
            raise ValueError(f"contact matrix must be 20x20, got {arr.shape}")
        if not np.array_equal(arr, arr.T):
            raise ValueError("contact matrix must be symmetric")
        arr.setflags(write=False)
        self.array = arr
        self.name = name
        self.rows: tuple[tuple[float, ...], ...] = tuple(tuple(float(v) for v in row) for row in arr)

    def __getitem__(self, ij) -> float:
        i, j = ij
        return self.rows[i][j]

    def pair(self, a: AminoAcid, b: AminoAcid) -> float:
        return self.rows[a.index][b.index]

    def __repr__(self) -> str:
        return f"ContactMatrix({self.name!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, ContactMatrix) and np.array_equal(self.array, other.array)

    def __hash__(self) -> int:
        return hash(self.rows)

    def checksum(self) -> str:
        text = "\n".join(" ".join(f"{v:.2f}" for v in row[: i + 1]) for i, row in enumerate(self.rows))
        return hashlib.sha256(text.encode()).hexdigest()

    def lower_triangle_text(self) -> str:
        lines = ["# " + " ".join(THREE_LETTER_ORDER)]
        for i, row in enumerate(self.rows):
            lines.append(" ".join(f"{v:5.2f}" for v in row[: i + 1]))
        return "\n".join(lines) + "\n"


def parse_matrix(text: str, name: str = "custom") -> ContactMatrix:
    """Read the lower-triangular text format.

    The first non-blank line names the 20 residues (three-letter codes,
    optionally after ``#``); line ``k`` of the body holds ``k`` values.
    """
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    header = lines[0].lstrip("#").split()
    if len(header) != 20:
        raise ValueError(f"header must list 20 residues, got {len(header)}")
    order = [AMINO_ACIDS[THREE_TO_ONE[h.upper()]].index for h in header]
    rows = [[float(tok) for tok in ln.split()] for ln in lines[1:]]
    if len(rows) != 20:
        raise ValueError(f"expected 20 rows, got {len(rows)}")
    values = np.zeros((20, 20))
    for k, row in enumerate(rows):
        if len(row) != k + 1:
            raise ValueError(f"row {k + 1} must hold {k + 1} values, got {len(row)}")
        for m, v in enumerate(row):
            a, b = order[k], order[m]
            values[a, b] = values[b, a] = v
    return ContactMatrix(values, name)


@lru_cache(maxsize=None)
def mj_matrix() -> ContactMatrix:
    text = (resources.files("fccfold") / "data" / "mj.txt").read_text()
    return parse_matrix(text, "MJ")


@lru_cache(maxsize=None)
def hp_matrix() -> ContactMatrix:
    """The 2x2 HP model lifted to 20x20: -1 for H-H, else 0."""
    h = np.array([c in HYDROPHOBIC for c in CODES])
    return ContactMatrix(-np.outer(h, h).astype(float), "HP")


def mj_pair(a: AminoAcid, b: AminoAcid) -> float:
    return mj_matrix().pair(a, b)


def matrix_for(model: EnergyModel | str) -> ContactMatrix:
    """Objective matrix of a run variant (MH searches on MJ)."""
    model = EnergyModel(model)
    return hp_matrix() if model is EnergyModel.HP else mj_matrix()


class PairTable(tuple):
    """Per-position potentials ``table[i][j] = model[res_i][res_j]``.

    ``active[i]`` is False when row ``i`` is all zeros, so residue ``i``
    can never change the energy (P residues under HP).  ``partners[i]``
    lists the non-consecutive ``j`` with a nonzero potential.
    """

    active: tuple[bool, ...]
    partners: tuple[tuple[int, ...], ...]


@lru_cache(maxsize=64)
def pair_table(seq: Sequence, model: ContactMatrix) -> PairTable:
    rows = model.rows
    idx = seq.indices
    table = PairTable(tuple(rows[a][b] for b in idx) for a in idx)
    table.active = tuple(any(r) for r in table)
    table.partners = tuple(
        tuple(j for j, v in enumerate(r) if v and abs(i - j) > 1) for i, r in enumerate(table)
    )
    return table


def evaluate(conf, model: ContactMatrix) -> float:
    """Energy via the occupancy index, O(12 n); caches on ``conf.fitness``.

    The cache is keyed by the model so evaluating under a second model does
    not clobber an unrelated value.
    """
    if conf.fitness is not None and conf.fitness_model is model:
        return conf.fitness
    e = contact_energy(conf.keys, conf.occupancy, pair_table(conf.sequence, model))
    conf.fitness = e
    conf.fitness_model = model
    return e


def contact_energy(keys, occupancy, table) -> float:
    e = 0.0
    for i, key in enumerate(keys):
        row = table[i]
        for d in KEY_DELTA:
            j = occupancy.get(key + d)
            if j is not None and j > i + 1:
                e += row[j]
    return e


def evaluate_reference(conf, model: ContactMatrix) -> float:
    """Direct O(n^2) pair scan over squared distances; no caching."""
    pts = conf.points
    seq = conf.sequence.residues
    e = 0.0
    n = len(pts)
    for i in range(n):
        xi, yi, zi = pts[i]
        for j in range(i + 2, n):
            xj, yj, zj = pts[j]
            if (xi - xj) ** 2 + (yi - yj) ** 2 + (zi - zj) ** 2 == 2:
                e += model.pair(seq[i], seq[j])
    return e


def hp_energy(conf) -> float:
    return evaluate_reference(conf, hp_matrix())


def contacts(conf) -> list[tuple[int, int]]:
    """Non-consecutive contact pairs ``(i, j)``, ``i < j``, in scan order."""
    out = []
    for i, key in enumerate(conf.keys):
        for d in KEY_DELTA:
            j = conf.occupancy.get(key + d)
            if j is not None and j > i + 1:
                out.append((i, j))
    return sorted(out)
