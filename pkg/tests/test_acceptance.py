"""Acceptance criteria, one test each.

Every test appends a PASS/FAIL line to ``conftest.ACCEPTANCE``; the lines
are printed in the terminal summary.  Criterion 9 is a multi-hour
statistical check and only runs with ``FCCFOLD_NIGHTLY=1``.
"""

import itertools
import math
import os
import time

import numpy as np
import pytest

from fccfold import moves
from fccfold.conformation import Conformation, canonical_key, from_directions, is_valid
from fccfold.energy import EnergyModel, contacts, evaluate, hp_matrix, mj_matrix
from fccfold.lattice import pack, unpack
from fccfold.metrics import NativeStructure, format_ri, lattice_coords, relative_improvement, rmsd
from fccfold.oracle import enumerate_saws, exact_optimum
from fccfold.search import GaConfig, run
from fccfold.sequence import AMINO_ACIDS, THREE_TO_ONE, Sequence, load_benchmark

from conftest import ACCEPTANCE, random_letters, random_saw

# Lower triangle of the contact table, transcribed independently of the
# bundled data file.
MJ_TABLE = """
CYS -1.06
MET 0.19 0.04
PHE -0.23 -0.42 -0.44
ILE 0.16 -0.28 -0.19 -0.22
LEU -0.08 -0.20 -0.30 -0.41 -0.27
VAL 0.06 -0.14 -0.22 -0.25 -0.29 -0.29
TRP 0.08 -0.67 -0.16 0.02 -0.09 -0.17 -0.12
TYR 0.04 -0.13 0.00 0.11 0.24 0.02 -0.04 -0.06
ALA 0.00 0.25 0.03 -0.22 -0.01 -0.10 -0.09 0.09 -0.13
GLY -0.08 0.19 0.38 0.25 0.23 0.16 0.18 0.14 -0.07 -0.38
THR 0.19 0.19 0.31 0.14 0.20 0.25 0.22 0.13 -0.09 -0.26 0.03
SER -0.02 0.14 0.29 0.21 0.25 0.18 0.34 0.09 -0.06 -0.16 -0.08 0.20
GLN 0.05 0.46 0.49 0.36 0.26 0.24 0.08 -0.20 0.08 -0.06 -0.14 -0.14 0.29
ASN 0.13 0.08 0.18 0.53 0.30 0.50 0.06 -0.20 0.28 -0.14 -0.11 -0.14 -0.25 -0.53
GLU 0.69 0.44 0.27 0.35 0.43 0.34 0.29 -0.10 0.26 0.25 0.00 -0.26 -0.17 -0.32 -0.03
ASP 0.03 0.65 0.39 0.59 0.67 0.58 0.24 0.00 0.12 -0.22 -0.29 -0.31 -0.17 -0.30 -0.15 0.04
HIS -0.19 0.99 -0.16 0.49 0.16 0.19 -0.12 -0.34 0.34 0.20 -0.19 -0.05 -0.02 -0.24 -0.45 -0.39 -0.29
ARG 0.24 0.31 0.41 0.42 0.35 0.30 -0.16 -0.25 0.43 -0.04 -0.35 0.17 -0.52 -0.14 -0.74 -0.72 -0.12 0.11
LYS 0.71 0.00 0.44 0.36 0.19 0.44 0.22 -0.21 0.14 0.11 -0.09 -0.13 -0.38 -0.33 -0.97 -0.76 0.22 0.75 0.25
PRO 0.00 -0.34 0.20 0.25 0.42 0.09 -0.28 -0.33 0.10 -0.11 -0.07 0.01 -0.42 -0.18 -0.10 0.04 -0.21 -0.38 0.11 0.26
"""

# HPHPPHPH (as G/S) with exactly four H-H contacts; found by a seeded search
HPHPPHPH_DIRS = [2, 7, 10, 3, 3, 6, 1]


def report(num: int, title: str, ok: bool, detail: str, seconds: float) -> None:
    status = "PASS" if ok else "FAIL"
    ACCEPTANCE.append(f"criterion {num:2d}  {status}  {title}: {detail} [{seconds:.1f}s]")


# --------------------------------------------------------------------------


def test_c01_mj_matrix_fidelity():
    t0 = time.perf_counter()
    m = mj_matrix()
    names = [line.split()[0] for line in MJ_TABLE.split("\n") if line.strip()]
    bad = []
    entries = 0
    for line in MJ_TABLE.strip().splitlines():
        name, *vals = line.split()
        a = AMINO_ACIDS[THREE_TO_ONE[name]]
        for other, v in zip(names, vals):
            b = AMINO_ACIDS[THREE_TO_ONE[other]]
            entries += 1
            if m.pair(a, b) != float(v):
                bad.append((name, other))
    asym = sum(m.pair(a, b) != m.pair(b, a) for a in AMINO_ACIDS.values() for b in AMINO_ACIDS.values())
    A = AMINO_ACIDS
    spots = (m.pair(A["C"], A["C"]), m.pair(A["K"], A["E"]), m.pair(A["G"], A["G"]))
    ok = entries == 210 and not bad and asym == 0 and spots == (-1.06, -0.97, -0.38)
    report(1, "MJ matrix fidelity", ok,
           f"{entries - len(bad)}/{entries} entries exact, {asym} asymmetric of 400, spots {spots}",
           time.perf_counter() - t0)
    assert ok, bad


def test_c02_hp_four_contacts():
    t0 = time.perf_counter()
    seq = Sequence.from_string("GSGSSGSG", "HPHPPHPH")
    conf = from_directions(seq, HPHPPHPH_DIRS)
    hh = [(i, j) for i, j in contacts(conf) if seq.hp[i] == seq.hp[j] == "H"]
    e = evaluate(conf, hp_matrix())
    ok = seq.hp == "HPHPPHPH" and len(hh) == 4 and e == -4
    report(2, "HP energy of HPHPPHPH with 4 H-H contacts", ok, f"contacts {hh}, energy {e}",
           time.perf_counter() - t0)
    assert ok


def test_c03_relative_improvement():
    t0 = time.perf_counter()
    a = format_ri(relative_improvement(-33.60, -31.21))
    b = format_ri(relative_improvement(-35.67, -28.18))
    ok = (a, b) == ("7.66%", "26.58%")
    report(3, "relative improvement", ok, f"RI(-33.60,-31.21)={a}, RI(-35.67,-28.18)={b}",
           time.perf_counter() - t0)
    assert ok


def test_c04_oracle_equivalence():
    t0 = time.perf_counter()
    seqs = [Sequence.from_string("".join(p), "".join(p)) for p in itertools.product("GS", repeat=6)]
    optima = {s.letters: exact_optimum(s, hp_matrix()).optimum for s in seqs}
    hits, below = {}, []
    for seed in (1, 2, 3):
        hits[seed] = 0
        cfg = GaConfig(pop_size=20, max_generations=200, seed=seed)
        for s in seqs:
            e = run(s, cfg, EnergyModel.HP).best_energy
            opt = optima[s.letters]
            if e < opt - 1e-9:
                below.append((seed, s.letters, e, opt))
            hits[seed] += abs(e - opt) < 1e-9
    secs = time.perf_counter() - t0
    ok = len(seqs) == 64 and all(h >= 62 for h in hits.values()) and not below and secs <= 600
    report(4, "GA vs exhaustive optimum, 64 sequences x 3 seeds", ok,
           f"optimum reached per seed {hits} (need >=62/64), {len(below)} below-optimum reports, "
           f"budget 600s", secs)
    assert ok, below


def _random_application_check(op: str, n: int, count: int, rng) -> tuple[int, int]:
    seq = Sequence.from_string(random_letters(rng, n))
    conf = partner = None
    applied = invalid = 0
    for k in range(count):
        if k % 50 == 0:
            conf, partner = random_saw(seq, rng), random_saw(seq, rng)
        out = moves.random_move(conf, op, rng, partner=partner)
        if out.result is None:
            continue
        applied += 1
        if len(out.result) != n or not is_valid(out.result):
            invalid += 1
            continue
        conf = out.result
    return applied, invalid


def test_c05_move_validity():
    t0 = time.perf_counter()
    rng = np.random.default_rng(5)
    per_op = {}
    for op in moves.OPERATORS:
        counts = [10_000 // 3 + (1 if i < 10_000 % 3 else 0) for i in range(3)]
        applied = invalid = 0
        for n, c in zip((8, 20, 54), counts):
            a, bad = _random_application_check(op, n, c, rng)
            applied += a
            invalid += bad
        per_op[op] = (applied, invalid)
    secs = time.perf_counter() - t0
    violations = sum(v for _, v in per_op.values())
    ok = violations == 0 and secs <= 120
    detail = ", ".join(f"{op} {a} ok/{v} bad" for op, (a, v) in per_op.items())
    report(5, "move validity, 10^4 draws per operator on n in {8,20,54}", ok,
           f"{detail}; budget 120s", secs)
    assert ok


def _inverse_exists(conf, cand) -> bool:
    changes = moves.pull_changes(conf, cand)
    moved = moves._materialise(conf, changes)
    lo, hi = min(changes), max(changes)
    want = {i: conf.keys[i] for i in changes}
    for q in (lo, hi):
        for s in (-1, 1):
            if 0 <= q + s < len(conf) and (q + s) in changes:
                inv = moves.PullCandidate(q, s, conf.keys[q], conf.keys[q + s], hi + 1 if s == 1 else lo - 1)
            else:
                inv = moves.PullCandidate(q, s, conf.keys[q], None, q + s)
            if moves.is_pull_candidate(moved, inv) and moves.pull_changes(moved, inv) == want:
                return True
    return False


def test_c06_pull_reversibility():
    # Rotations map pull moves to pull moves, so one walk per rotation class suffices.
    t0 = time.perf_counter()
    pulls = failures = walks = 0
    for n in range(2, 7):
        seq = Sequence.from_string("G" * n)
        for dirs in enumerate_saws(n, symmetry_reduce=True):
            walks += 1
            conf = from_directions(seq, dirs)
            for pos in range(n):
                for cand in moves.pull_candidates(conf, pos):
                    pulls += 1
                    failures += not _inverse_exists(conf, cand)
    secs = time.perf_counter() - t0
    ok = failures == 0 and secs <= 300
    report(6, "pull reversibility, all walks n<=6", ok,
           f"{pulls} pulls on {walks} rotation classes, {failures} without inverse; budget 300s", secs)
    assert ok


def test_c07_engine_invariants():
    t0 = time.perf_counter()
    seq = load_benchmark("1ENH")
    cfg = GaConfig(pop_size=50, max_generations=100, seed=2024)
    dup_gens, invalid, best_seq = [], 0, []

    def watch(pop, row):
        nonlocal invalid
        if len({canonical_key(c) for c in pop.members}) != len(pop.members):
            dup_gens.append(pop.generation)
        invalid += sum(not is_valid(c) for c in pop.members)
        best_seq.append(row.best_energy)

    first = run(seq, cfg, EnergyModel.MH, on_generation=watch)
    second = run(seq, cfg, EnergyModel.MH)

    def strip(res):
        return [(r.generation, r.best_energy, r.mean_energy, r.operator_used, r.stagnation_flag) for r in res.trace]

    non_monotone = sum(b > a for a, b in zip(best_seq, best_seq[1:]))
    same = strip(first) == strip(second) and first.best.keys == second.best.keys
    secs = time.perf_counter() - t0
    ok = not dup_gens and invalid == 0 and non_monotone == 0 and same and secs <= 300
    report(7, "engine invariants on 1ENH, 100 generations", ok,
           f"{len(dup_gens)} generations with duplicates, {invalid} invalid members, "
           f"{non_monotone} best-ever increases, traces identical={same}, "
           f"best {first.best_energy:.2f}, {first.walks} walk phases; budget 300s", secs)
    assert ok


def test_c08_macro_guard():
    t0 = time.perf_counter()
    rng = np.random.default_rng(8)
    checked = violations = 0
    lengths = (8, 20, 54)
    for k in range(1000):
        n = lengths[k % 3]
        seq = Sequence.from_string(random_letters(rng, n))
        if not seq.h_positions:
            continue
        conf = random_saw(seq, rng)
        log = []
        out = moves.macro_mutation(conf, seq, repeat=5, p=0.2, rng=rng, log=log)
        # replay the log and measure each H move against the centre before it
        keys = list(conf.keys)
        for step in log:
            if step.hp_class == "H":
                pts = np.array([unpack(keys[i]) for i in seq.h_positions], dtype=float)
                centre = pts.mean(axis=0)
                d_old = np.linalg.norm(np.array(step.old) - centre)
                d_new = np.linalg.norm(np.array(step.new) - centre)
                checked += 1
                violations += d_new > d_old + 1e-12
            assert keys[step.residue] == pack(step.old)
            keys[step.residue] = pack(step.new)
        assert keys == list(out.keys) and is_valid(out)
    secs = time.perf_counter() - t0
    ok = violations == 0 and checked > 0 and secs <= 60
    report(8, "macro-mutation H guard, 1000 applications", ok,
           f"{checked} H moves checked, {violations} moved away from the core centre; budget 60s", secs)
    assert ok


@pytest.mark.nightly
def test_c09_mh_vs_mj_directionality():
    if os.environ.get("FCCFOLD_NIGHTLY") != "1":
        report(9, "MH vs MJ directionality on 1ENH and 1CTF", False,
               "NOT RUN (multi-hour; set FCCFOLD_NIGHTLY=1)", 0.0)
        ACCEPTANCE[-1] = ACCEPTANCE[-1].replace("FAIL", "SKIP", 1)
        pytest.skip("nightly criterion; set FCCFOLD_NIGHTLY=1")
    minutes = float(os.environ.get("FCCFOLD_NIGHTLY_MINUTES", "10"))
    t0 = time.perf_counter()
    means = {}
    for pid in ("1ENH", "1CTF"):
        seq = load_benchmark(pid)
        for model in (EnergyModel.MJ, EnergyModel.MH):
            energies = []
            for seed in range(10):
                cfg = GaConfig(max_generations=None, time_limit=minutes * 60, seed=seed)
                energies.append(run(seq, cfg, model).report_energy)
            means[pid, model] = float(np.mean(energies))
    better = [pid for pid in ("1ENH", "1CTF") if means[pid, EnergyModel.MH] < means[pid, EnergyModel.MJ]]
    worse_by = max(means[pid, EnergyModel.MH] - means[pid, EnergyModel.MJ] for pid in ("1ENH", "1CTF"))
    ok = bool(better) and worse_by <= 2.0
    detail = ", ".join(f"{pid} MJ {means[pid, EnergyModel.MJ]:.2f} MH {means[pid, EnergyModel.MH]:.2f}"
                       for pid in ("1ENH", "1CTF"))
    report(9, "MH vs MJ directionality on 1ENH and 1CTF", ok,
           f"{detail}; MH better on {better or 'none'}, worst MH deficit {worse_by:.2f}", time.perf_counter() - t0)
    assert ok


def _direct_rmsd(pred: Conformation, native: np.ndarray) -> float:
    # plain double loop over pairs
    s = 3.8 / math.sqrt(2)
    pts = pred.points
    n = len(pts)
    total = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            dp = math.sqrt(sum((s * (pts[i][k] - pts[j][k])) ** 2 for k in range(3)))
            dn = math.sqrt(sum((native[i][k] - native[j][k]) ** 2 for k in range(3)))
            total += (dp - dn) ** 2
    return math.sqrt(total / (n * (n - 1) / 2))


def test_c10_rmsd_oracle():
    t0 = time.perf_counter()
    rng = np.random.default_rng(10)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(5, 51))
        seq = Sequence.from_string("G" * n)
        pred = random_saw(seq, rng)
        native = np.cumsum(rng.normal(size=(n, 3)) * 2.2, axis=0)
        got = rmsd(pred, NativeStructure("x", native))
        want = _direct_rmsd(pred, native)
        worst = max(worst, abs(got - want) / want)
    conf = random_saw(Sequence.from_string("G" * 30), rng)
    ident = rmsd(conf, NativeStructure("x", lattice_coords(conf)))
    secs = time.perf_counter() - t0
    ok = worst <= 1e-9 and ident == 0.0 and secs <= 60
    report(10, "RMSD vs direct double loop, 100 pairs", ok,
           f"worst relative error {worst:.2e} (tol 1e-9), identity {ident}", secs)
    assert ok
