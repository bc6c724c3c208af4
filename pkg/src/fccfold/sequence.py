"""Amino-acid alphabet, H/P classes, and FASTA-subset parsing."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path

from .errors import EmptySequence, UnknownResidue

# Row/column order of the bundled contact matrix.
THREE_LETTER_ORDER = (
    "CYS MET PHE ILE LEU VAL TRP TYR ALA GLY THR SER GLN ASN GLU ASP HIS ARG LYS PRO"
).split()

THREE_TO_ONE = {
    "ALA": "A", "ARG": "R", "ASN": "N", "ASP": "D", "CYS": "C",
    "GLN": "Q", "GLU": "E", "GLY": "G", "HIS": "H", "ILE": "I",
    "LEU": "L", "LYS": "K", "MET": "M", "PHE": "F", "PRO": "P",
    "SER": "S", "THR": "T", "TRP": "W", "TYR": "Y", "VAL": "V",
}
ONE_TO_THREE = {v: k for k, v in THREE_TO_ONE.items()}

CODES = "".join(THREE_TO_ONE[t] for t in THREE_LETTER_ORDER)
HYDROPHOBIC = frozenset("GAPVLIMFYW")
POLAR = frozenset("STCNQKHRDE")

H = "H"
P = "P"


@dataclass(frozen=True)
class AminoAcid:
    code: str
    index: int
    hp_class: str

    @property
    def name(self) -> str:
        return ONE_TO_THREE[self.code]


AMINO_ACIDS = {
    c: AminoAcid(c, i, H if c in HYDROPHOBIC else P) for i, c in enumerate(CODES)
}


def classify(code: str) -> str:
    """Return ``"H"`` or ``"P"`` for a one-letter residue code."""
    if code not in AMINO_ACIDS:
        raise UnknownResidue(code)
    return AMINO_ACIDS[code].hp_class


@dataclass(frozen=True)
class Sequence:
    id: str
    residues: tuple[AminoAcid, ...]
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.residues) < 2:
            raise EmptySequence(f"sequence {self.id!r} has {len(self.residues)} residues; need >= 2")
        object.__setattr__(self, "_hash", hash((self.id, self.residues)))

    def __hash__(self) -> int:
        return self._hash

    def __len__(self) -> int:
        return len(self.residues)

    @classmethod
    def from_string(cls, letters: str, id: str = "query") -> Sequence:
        residues = []
        for i, c in enumerate(letters):
            if c not in AMINO_ACIDS:
                raise UnknownResidue(c, i)
            residues.append(AMINO_ACIDS[c])
        return cls(id, tuple(residues))

    @cached_property
    def letters(self) -> str:
        return "".join(r.code for r in self.residues)

    @cached_property
    def indices(self) -> tuple[int, ...]:
        return tuple(r.index for r in self.residues)

    @cached_property
    def hp(self) -> str:
        return "".join(r.hp_class for r in self.residues)

    @cached_property
    def h_positions(self) -> tuple[int, ...]:
        return tuple(i for i, r in enumerate(self.residues) if r.hp_class == H)

    @cached_property
    def p_positions(self) -> tuple[int, ...]:
        return tuple(i for i, r in enumerate(self.residues) if r.hp_class == P)

    def to_fasta(self, width: int = 60) -> str:
        body = "\n".join(self.letters[i:i + width] for i in range(0, len(self), width))
        return f">{self.id}\n{body}\n"


def parse_sequence(text: str, id: str | None = None) -> Sequence:
    """Parse a bare residue string or a single-record FASTA text.

    Whitespace anywhere in the body is ignored. The FASTA header supplies the
    id unless ``id`` is given explicitly.
    """
    header = None
    body = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith(">"):
            if header is not None or body:
                raise ValueError("only single-record FASTA is supported")
            header = line[1:].split()[0] if line[1:].strip() else ""
            continue
        body.append(line)
    letters = "".join("".join(body).split())
    if len(letters) < 2:
        raise EmptySequence(f"need at least 2 residues, got {len(letters)}")
    return Sequence.from_string(letters, id or header or "query")


def read_sequence(path: str | Path) -> Sequence:
    path = Path(path)
    return parse_sequence(path.read_text(), None)


def _bench_dir():
    return resources.files("fccfold") / "data" / "benchmarks"


def benchmark_table() -> dict[str, dict[str, int]]:
    """Declared length and published H-count of every bundled benchmark."""
    text = (_bench_dir() / "index.csv").read_text()
    return {
        row["id"]: {"length": int(row["length"]), "reported_h": int(row["reported_h"])}
        for row in csv.DictReader(text.splitlines())
    }


def benchmark_ids() -> list[str]:
    return list(benchmark_table())


def load_benchmark(protein_id: str) -> Sequence:
    ref = _bench_dir() / f"{protein_id.upper()}.fasta"
    if not ref.is_file():
        raise KeyError(f"no bundled benchmark {protein_id!r}; known: {', '.join(benchmark_ids())}")
    return parse_sequence(ref.read_text())


def resolve_sequence(source: str) -> Sequence:
    """A path to a FASTA/plain file, a bundled benchmark id, or raw one-letter codes."""
    if Path(source).is_file():
        return read_sequence(source)
    if source in benchmark_ids():
        return load_benchmark(source)
    if source and all(c in AMINO_ACIDS for c in source):
        return Sequence.from_string(source, "query")
    return load_benchmark(source)
