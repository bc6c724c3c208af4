"""Evaluation maths: distance-matrix RMSD, relative improvement, run summaries."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .conformation import Conformation
from .errors import EmptyRunSet, LengthMismatch, ZeroReference

# one lattice step (length sqrt 2) is 3.8 angstrom
LATTICE_SCALE = 3.8 / math.sqrt(2.0)


@dataclass(frozen=True)
class NativeStructure:
    id: str
    ca_coords: np.ndarray  # (n, 3), angstrom

    def __len__(self) -> int:
        return len(self.ca_coords)


def parse_native(text: str) -> NativeStructure:
    """Header ``id n`` followed by ``n`` lines of ``x y z``."""
    lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or len(lines[0]) != 2:
        raise ValueError("native file must start with an 'id n' header")
    pid, n = lines[0][0], int(lines[0][1])
    rows = lines[1:]
    if len(rows) != n:
        raise LengthMismatch(f"header says {n} residues, found {len(rows)} coordinate lines")
    coords = np.array([[float(v) for v in r] for r in rows], dtype=float)
    if coords.shape != (n, 3):
        raise ValueError("each coordinate line needs exactly three values")
    return NativeStructure(pid, coords)


def read_native(path) -> NativeStructure:
    return parse_native(Path(path).read_text())


def format_native(native: NativeStructure) -> str:
    lines = [f"{native.id} {len(native)}"]
    lines += [" ".join(repr(float(v)) for v in row) for row in native.ca_coords]
    return "\n".join(lines) + "\n"


def lattice_coords(conf: Conformation) -> np.ndarray:
    """Conformation coordinates in angstrom."""
    return np.array(conf.points, dtype=float) * LATTICE_SCALE


def _internal_distances(xyz: np.ndarray) -> np.ndarray:
    diff = xyz[:, None, :] - xyz[None, :, :]
    d = np.sqrt((diff ** 2).sum(axis=-1))
    iu = np.triu_indices(len(xyz), k=1)
    return d[iu]


def distance_rmsd(a: np.ndarray, b: np.ndarray) -> float:
    """Distance-matrix RMSD of two coordinate sets with matching rows."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise LengthMismatch(f"shapes differ: {a.shape} vs {b.shape}")
    if len(a) < 2:
        raise ValueError("need at least two points")
    da, db = _internal_distances(a), _internal_distances(b)
    return float(np.sqrt(np.mean((da - db) ** 2)))


def rmsd(pred: Conformation, native: NativeStructure) -> float:
    """RMSD over all internal pair distances; no superposition involved."""
    if len(pred) != len(native):
        raise LengthMismatch(f"prediction has {len(pred)} residues, native {len(native)}")
    return distance_rmsd(lattice_coords(pred), native.ca_coords)


def relative_improvement(e_target: float, e_ref: float) -> float:
    """Percentage change of the target energy relative to the reference.

    Energies are negative, so a more negative target gives a positive value.
    """
    if e_ref == 0:
        raise ZeroReference("reference energy is zero")
    return (e_target - e_ref) / e_ref * 100.0


def format_ri(value: float) -> str:
    return f"{value:.2f}%"


@dataclass
class RunSetSummary:
    sequence_id: str
    model: str
    runs: int
    best_energy: float
    mean_energy: float
    best_rmsd: float | None = None
    rmsd_of_best_energy: float | None = None

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def summarize(runs, native: NativeStructure | None = None) -> RunSetSummary:
    """Aggregate per-run best energies; RMSD columns need ``native``."""
    runs = list(runs)
    if not runs:
        raise EmptyRunSet("no runs to summarise")
    energies = [r.best_energy for r in runs]
    k = int(np.argmin(energies))
    out = RunSetSummary(
        sequence_id=runs[0].sequence_id,
        model=runs[0].model,
        runs=len(runs),
        best_energy=float(energies[k]),
        mean_energy=float(np.mean(energies)),
    )
    if native is not None:
        scores = [rmsd(r.best, native) for r in runs]
        out.best_rmsd = float(min(scores))
        out.rmsd_of_best_energy = float(scores[k])
    return out
