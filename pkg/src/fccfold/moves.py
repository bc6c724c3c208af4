"""Move operators on FCC conformations.

Single applications (``crossover``, ``rotation``, ``diagonal_move``,
``pull_move``, ``tilt_move``) return a new :class:`Conformation`, or ``None``
when the move is infeasible.  The exhaustive wrappers ``do_mutation`` and
``do_crossover`` sweep every position and sub-choice and keep the best by
energy, with the parent winning ties.  Sweeps score candidates by energy
deltas and only materialise the winner.

Candidate orders are fixed (basis order, then position order) so every
"first feasible" rule is deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .conformation import Conformation, hcc
from .energy import ENERGY_EPS, ContactMatrix, contact_energy, evaluate, pair_table
from .lattice import (
    KEY_DELTA,
    NEIGHBOR_DELTAS,
    OPPOSITE,
    ROTATED_BASIS,
    ROTATIONS,
    OccupancyIndex,
    pack,
    unpack,
)
from .sequence import Sequence

CROSSOVER = "crossover"
ROTATION = "rotation"
DIAGONAL = "diagonal"
PULL = "pull"
TILT = "tilt"
MACRO = "macro_mutation"

MUTATIONS = (ROTATION, DIAGONAL, PULL, TILT)
OPERATORS = (CROSSOVER, ROTATION, DIAGONAL, PULL, TILT, MACRO)


@dataclass
class MoveOutcome:
    kind: str
    applied_at: int | None
    result: Conformation | None  # None means unchanged

    @property
    def changed(self) -> bool:
        return self.result is not None


def _materialise(conf: Conformation, changes: dict[int, int]) -> Conformation:
    keys = list(conf.keys)
    occ = OccupancyIndex(conf.occupancy)
    for i in changes:
        del occ[keys[i]]
    for i, k in changes.items():
        keys[i] = k
        occ[k] = i
    return Conformation(conf.sequence, keys, occ)


def delta_energy(conf: Conformation, table, changes: dict[int, int]) -> float:
    """Energy change when residues in ``changes`` move to the given keys."""
    keys = conf.keys
    occ = conf.occupancy
    near = conf.contact_lists
    partners = getattr(table, "partners", None)
    placed = None
    old = new = 0.0
    for i, k_new in changes.items():
        row = table[i]
        for j in near[i]:
            if j not in changes or j > i:
                old += row[j]
        if partners is not None and len(partners[i]) < 12:
            # few interacting residues: test each one instead of 12 lattice sites
            for j in partners[i]:
                kj = changes.get(j)
                if kj is None:
                    kj = keys[j]
                elif j < i:
                    continue  # moved pair counted once, from the lower index
                if (kj - k_new) in NEIGHBOR_DELTAS:
                    new += row[j]
            continue
        if placed is None:
            placed = {k: i for i, k in changes.items()}
        for d in KEY_DELTA:
            q = k_new + d
            j = placed.get(q)
            if j is None:
                j = occ.get(q)
                if j is None or j in changes:
                    continue
            elif j <= i:
                continue
            if j > i + 1 or j < i - 1:
                new += row[j]
    return new - old


# --------------------------------------------------------------------------
# crossover


def splice(a: Conformation, b: Conformation, pos: int) -> tuple[list[int], list[int]]:
    da, db = a.directions, b.directions
    return da[:pos] + db[pos:], db[:pos] + da[pos:]


def _build(seq: Sequence, dirs: list[int]) -> Conformation | None:
    key = pack((0, 0, 0))
    keys = [key]
    occ = OccupancyIndex({key: 0})
    for i, d in enumerate(dirs, start=1):
        key += KEY_DELTA[d]
        if key in occ:
            return None
        occ[key] = i
        keys.append(key)
    return Conformation(seq, keys, occ, dirs)


def crossover(a: Conformation, b: Conformation, pos: int) -> tuple[Conformation, Conformation] | None:
    """Single-point splice of direction strings; ``None`` if a child collides."""
    if len(a) != len(b):
        raise ValueError("crossover parents differ in length")
    if not 1 <= pos <= len(a) - 1:
        raise ValueError(f"crossover point {pos} outside 1..{len(a) - 1}")
    d1, d2 = splice(a, b, pos)
    c1 = _build(a.sequence, d1)
    if c1 is None:
        return None
    c2 = _build(a.sequence, d2)
    if c2 is None:
        return None
    return c1, c2


def _pick_best_two(cands: list[Conformation], energies: list[float]) -> tuple[Conformation, Conformation]:
    def argmin(skip: int) -> int:
        best = -1
        for k, e in enumerate(energies):
            if k == skip:
                continue
            if best < 0 or e < energies[best] - ENERGY_EPS:
                best = k
        return best

    first = argmin(-1)
    second = argmin(first)
    return cands[first], cands[second]


def do_crossover(a: Conformation, b: Conformation, model: ContactMatrix) -> tuple[Conformation, Conformation]:
    """Best two of both parents and every feasible splice child."""
    cands = [a, b]
    energies = [evaluate(a, model), evaluate(b, model)]
    table = pair_table(a.sequence, model)
    if a.directions != b.directions:
        for pos in range(1, len(a)):
            for dirs in splice(a, b, pos):
                child = _build(a.sequence, dirs)
                if child is None:
                    continue
                e = contact_energy(child.keys, child.occupancy, table)
                child.fitness, child.fitness_model = e, model
                cands.append(child)
                energies.append(e)
    return _pick_best_two(cands, energies)


# --------------------------------------------------------------------------
# rotation


def _rotation_index(rot) -> int:
    if isinstance(rot, (int, np.integer)):
        return int(rot)
    for k, m in enumerate(ROTATIONS):
        if np.array_equal(m, rot):
            return k
    raise ValueError("not one of the 24 lattice rotations")


def _rotated_suffix(conf: Conformation, pos: int, r: int) -> list[int] | None:
    keys, occ, dirs = conf.keys, conf.occupancy, conf.directions
    table = ROTATED_BASIS[r]
    key = keys[pos]
    out = []
    for k in range(pos, len(keys) - 1):
        key += KEY_DELTA[table[dirs[k]]]
        j = occ.get(key)
        if j is not None and j <= pos:
            return None
        out.append(key)
    return out


def rotation(conf: Conformation, pos: int, rot) -> Conformation | None:
    """Rigidly rotate the residues after ``pos`` about ``points[pos]``."""
    n = len(conf)
    if not 1 <= pos <= n - 2:
        raise ValueError(f"rotation pivot {pos} outside 1..{n - 2}")
    r = _rotation_index(rot)
    suffix = _rotated_suffix(conf, pos, r)
    if suffix is None:
        return None
    return Conformation(conf.sequence, conf.keys[: pos + 1] + suffix)


def _rotation_sweep(conf: Conformation, table, e0: float):
    keys, occ, dirs = conf.keys, conf.occupancy, conf.directions
    n = len(keys)
    # cross[p]: energy of contacts (i, j) with i <= p < j
    diff = [0.0] * (n + 1)
    for i, key in enumerate(keys):
        row = table[i]
        for d in KEY_DELTA:
            j = occ.get(key + d)
            if j is not None and j > i + 1:
                diff[i] += row[j]
                diff[j] -= row[j]
    cross = []
    acc = 0.0
    for p in range(n):
        acc += diff[p]
        cross.append(acc)

    best_e, best = e0, None
    for p in range(1, n - 1):
        base = e0 - cross[p]
        pivot = keys[p]
        tail = dirs[p:]
        for r in range(1, len(ROTATIONS)):
            rt = ROTATED_BASIS[r]
            key = pivot
            e = base
            k = p
            ok = True
            for dd in tail:
                key += KEY_DELTA[rt[dd]]
                k += 1
                j = occ.get(key)
                if j is not None and j <= p:
                    ok = False
                    break
                for d in KEY_DELTA:
                    j = occ.get(key + d)
                    if j is not None and j <= p and j < k - 1:
                        e += table[k][j]
            if ok and e < best_e - ENERGY_EPS:
                best_e, best = e, (p, r)
    return best_e, best


# --------------------------------------------------------------------------
# diagonal move


def diagonal_targets(conf: Conformation, pos: int) -> list[int]:
    """Free common neighbours of ``pos - 1`` and ``pos + 1`` as packed keys."""
    keys, occ = conf.keys, conf.occupancy
    a, c = keys[pos - 1], keys[pos + 1]
    out = []
    for d in KEY_DELTA:
        t = a + d
        if t not in occ and (c - t) in NEIGHBOR_DELTAS:
            out.append(t)
    return out


def diagonal_move(conf: Conformation, pos: int, target=None) -> Conformation | None:
    """Move residue ``pos`` to a free site adjacent to both chain neighbours.

    With ``target`` omitted the first candidate in basis order is used.
    """
    n = len(conf)
    if not 1 <= pos <= n - 2:
        return None
    cands = diagonal_targets(conf, pos)
    if not cands:
        return None
    if target is None:
        t = cands[0]
    else:
        t = pack(target)
        if t not in cands:
            return None
    return _materialise(conf, {pos: t})


def _diagonal_candidates(conf: Conformation) -> Iterator[tuple[int, dict[int, int]]]:
    for pos in range(1, len(conf) - 1):
        for t in diagonal_targets(conf, pos):
            yield pos, {pos: t}


# --------------------------------------------------------------------------
# pull move


@dataclass(frozen=True)
class PullCandidate:
    """Residue ``pos`` goes to ``l`` and residue ``pos + side`` to ``c``.

    ``side`` is the chain direction of the dragged residues.  ``c`` is
    ``None`` when only ``pos`` moves.  Residues strictly between
    ``pos + side`` and ``stop`` each take the site vacated two places
    ahead of them; ``stop`` is the first residue left in place (``-1`` or
    ``n`` when the drag runs off the chain end).
    """

    pos: int
    side: int
    l: int
    c: int | None
    stop: int


def _pull_sides(n: int, pos: int) -> tuple[int, int]:
    toward_n = pos          # residues dragged when side == -1
    toward_c = n - 1 - pos  # residues dragged when side == +1
    return (-1, 1) if toward_n < toward_c else (1, -1)


def _stops(keys: list[int], pos: int, side: int, c: int) -> Iterator[int]:
    """Residue indices at which a drag seeded by ``c`` may end, nearest first."""
    n = len(keys)
    prev = c
    j = pos + 2 * side
    while 0 <= j < n:
        if (keys[j] - prev) in NEIGHBOR_DELTAS:
            yield j
        prev = keys[j - 2 * side]
        j += side
    yield j


def _limit(stops: Iterator[int], extended: bool):
    return stops if extended else (next(stops),)


def pull_candidates(conf: Conformation, pos: int, extended: bool = True) -> list[PullCandidate]:
    """All pull moves at ``pos`` in deterministic order.

    Pulls that drag toward the nearer chain end come first (ties toward the
    C-terminus).  Within a side, ``l`` then ``c`` follow basis order, then
    the drag length, shortest first.  The drag may end at any residue where
    the chain reconnects, not only the first, which keeps the move set
    closed under reversal on a lattice with triangles.
    """
    keys, occ = conf.keys, conf.occupancy
    n = len(keys)
    x = keys[pos]
    out = []
    for side in _pull_sides(n, pos):
        anchor, nxt = pos - side, pos + side
        has_anchor = 0 <= anchor < n
        has_next = 0 <= nxt < n
        if not has_next:
            if has_anchor:
                for d in KEY_DELTA:
                    l = keys[anchor] + d
                    if l not in occ:
                        out.append(PullCandidate(pos, side, l, None, nxt))
            continue
        x_next = keys[nxt]
        if has_anchor:
            for d in KEY_DELTA:
                l = keys[anchor] + d
                if l in occ:
                    continue
                for e in KEY_DELTA:
                    c = l + e
                    if (x - c) not in NEIGHBOR_DELTAS:
                        continue
                    if c == x_next:
                        out.append(PullCandidate(pos, side, l, None, nxt))
                    elif c not in occ:
                        stops = _limit(_stops(keys, pos, side, c), extended)
                        out.extend(PullCandidate(pos, side, l, c, s) for s in stops)
        else:
            # chain end: advance two residues into free space
            for d in KEY_DELTA:
                c = x + d
                if c in occ:
                    continue
                for e in KEY_DELTA:
                    l = c + e
                    if l not in occ and l != x:
                        stops = _limit(_stops(keys, pos, side, c), extended)
                        out.extend(PullCandidate(pos, side, l, c, s) for s in stops)
    return out


def is_pull_candidate(conf: Conformation, cand: PullCandidate) -> bool:
    """Whether ``cand`` is a legal pull on ``conf`` (membership in ``pull_candidates``)."""
    keys, occ = conf.keys, conf.occupancy
    n = len(keys)
    pos, side, l, c = cand.pos, cand.side, cand.l, cand.c
    if not 0 <= pos < n or side not in (-1, 1) or l in occ:
        return False
    anchor, nxt = pos - side, pos + side
    has_anchor = 0 <= anchor < n
    has_next = 0 <= nxt < n
    if has_anchor and (l - keys[anchor]) not in NEIGHBOR_DELTAS:
        return False
    if not has_next:
        return has_anchor and c is None and cand.stop == nxt
    x = keys[pos]
    if c is None:
        return (has_anchor and cand.stop == nxt and (keys[nxt] - l) in NEIGHBOR_DELTAS
                and (x - keys[nxt]) in NEIGHBOR_DELTAS)
    if c in occ or (c - l) not in NEIGHBOR_DELTAS or (x - c) not in NEIGHBOR_DELTAS:
        return False
    return cand.stop in _stops(keys, pos, side, c)


def pull_changes(conf: Conformation, cand: PullCandidate) -> dict[int, int]:
    keys = conf.keys
    pos, side = cand.pos, cand.side
    changes = {pos: cand.l}
    if cand.c is None:
        return changes
    changes[pos + side] = cand.c
    for j in range(pos + 2 * side, cand.stop, side):
        changes[j] = keys[j - 2 * side]
    return changes


def pull_move(conf: Conformation, pos: int, choice: int = 0, extended: bool = True) -> Conformation | None:
    """Apply the ``choice``-th pull candidate at ``pos``; ``None`` if absent."""
    cands = pull_candidates(conf, pos, extended)
    if not 0 <= choice < len(cands):
        return None
    return _materialise(conf, pull_changes(conf, cands[choice]))


def _classic_pulls(keys: list[int], occ, pos: int) -> list[tuple[int, int, int | None]]:
    """``(side, l, c)`` for each nearest-stop pull at ``pos``; ``c`` is None
    when only ``pos`` moves.  Same order as ``pull_candidates(..., extended=False)``."""
    n = len(keys)
    x = keys[pos]
    adjacent = NEIGHBOR_DELTAS
    out = []
    for side in _pull_sides(n, pos):
        anchor, nxt = pos - side, pos + side
        has_anchor = 0 <= anchor < n
        if not 0 <= nxt < n:
            if has_anchor:
                for d in KEY_DELTA:
                    l = keys[anchor] + d
                    if l not in occ:
                        out.append((side, l, None))
            continue
        x_next = keys[nxt]
        if has_anchor:
            for d in KEY_DELTA:
                l = keys[anchor] + d
                if l in occ:
                    continue
                for e in KEY_DELTA:
                    c = l + e
                    if (x - c) in adjacent:
                        if c == x_next:
                            out.append((side, l, None))
                        elif c not in occ:
                            out.append((side, l, c))
        else:
            for d in KEY_DELTA:
                c = x + d
                if c in occ:
                    continue
                for e in KEY_DELTA:
                    l = c + e
                    if l not in occ and l != x:
                        out.append((side, l, c))
    return out


def _classic_changes(keys: list[int], pos: int, side: int, l: int, c: int | None) -> dict[int, int]:
    if c is None:
        return {pos: l}
    changes = {pos: l, pos + side: c}
    n = len(keys)
    prev = c
    j = pos + 2 * side
    while 0 <= j < n and (keys[j] - prev) not in NEIGHBOR_DELTAS:
        prev = keys[j - 2 * side]
        changes[j] = prev
        j += side
    return changes


def _pull_moves(conf: Conformation) -> Iterator[tuple[int, dict[int, int]]]:
    # classic pulls only: extended drags make the sweep quadratic
    keys, occ = conf.keys, conf.occupancy
    for pos in range(len(keys)):
        for side, l, c in _classic_pulls(keys, occ, pos):
            yield pos, _classic_changes(keys, pos, side, l, c)


# --------------------------------------------------------------------------
# tilt move


def tilt_run(conf: Conformation, pos: int) -> tuple[int, int] | None:
    """Maximal straight run ``(first, last)`` through the bond ``pos, pos + 1``."""
    dirs = conf.directions
    if not 0 <= pos < len(dirs):
        return None
    d = dirs[pos]
    lo, hi = pos, pos + 1
    while lo > 0 and dirs[lo - 1] == d:
        lo -= 1
    while hi < len(dirs) and dirs[hi] == d:
        hi += 1
    return lo, hi


def tilt_offsets(conf: Conformation, pos: int) -> list[int]:
    """Basis indices that shift the run at ``pos`` onto free sites."""
    run = tilt_run(conf, pos)
    if run is None:
        return []
    lo, hi = run
    keys, occ = conf.keys, conf.occupancy
    d = conf.directions[pos]
    out = []
    for t, delta in enumerate(KEY_DELTA):
        if t == d or t == OPPOSITE[d]:
            continue
        if all((keys[k] + delta) not in occ for k in range(lo, hi + 1)):
            out.append(t)
    return out


def tilt_changes(conf: Conformation, pos: int, offset: int) -> dict[int, int]:
    lo, hi = tilt_run(conf, pos)
    keys = conf.keys
    n = len(keys)
    delta = KEY_DELTA[offset]
    changes = {k: keys[k] + delta for k in range(lo, hi + 1)}
    j = lo - 1
    while j >= 0 and (keys[j] - changes[j + 1]) not in NEIGHBOR_DELTAS:
        changes[j] = keys[j + 1]
        j -= 1
    j = hi + 1
    while j < n and (keys[j] - changes[j - 1]) not in NEIGHBOR_DELTAS:
        changes[j] = keys[j - 1]
        j += 1
    return changes


def tilt_move(conf: Conformation, pos: int, offset: int | None = None) -> Conformation | None:
    """Shift the straight run through ``pos`` sideways and drag both flanks.

    ``offset`` is a basis index; omitted means the first feasible one.
    """
    offsets = tilt_offsets(conf, pos)
    if not offsets:
        return None
    if offset is None:
        offset = offsets[0]
    elif offset not in offsets:
        return None
    return _materialise(conf, tilt_changes(conf, pos, offset))


def _tilt_moves(conf: Conformation) -> Iterator[tuple[int, dict[int, int]]]:
    for pos in range(len(conf) - 1):
        for t in tilt_offsets(conf, pos):
            yield pos, tilt_changes(conf, pos, t)


# --------------------------------------------------------------------------
# exhaustive mutation

_LOCAL_SWEEPS = {DIAGONAL: _diagonal_candidates, PULL: _pull_moves, TILT: _tilt_moves}


def neighborhood(conf: Conformation, op: str) -> Iterator[Conformation]:
    """Every feasible single application of a mutation operator, in sweep order."""
    if op == ROTATION:
        for pos in range(1, len(conf) - 1):
            for r in range(1, len(ROTATIONS)):
                child = rotation(conf, pos, r)
                if child is not None:
                    yield child
    elif op in _LOCAL_SWEEPS:
        for _, changes in _LOCAL_SWEEPS[op](conf):
            yield _materialise(conf, changes)
    else:
        raise ValueError(f"unknown mutation operator {op!r}")


def do_mutation(conf: Conformation, op: str, model: ContactMatrix) -> Conformation:
    """Best of the parent and its full ``op`` neighbourhood (parent wins ties)."""
    e0 = evaluate(conf, model)
    table = pair_table(conf.sequence, model)
    if op == ROTATION:
        best_e, best = _rotation_sweep(conf, table, e0)
        if best is None:
            return conf
        child = rotation(conf, *best)
    elif op in _LOCAL_SWEEPS:
        best_e, best = e0, None
        for _, changes in _LOCAL_SWEEPS[op](conf):
            e = e0 + delta_energy(conf, table, changes)
            if e < best_e - ENERGY_EPS:
                best_e, best = e, changes
        if best is None:
            return conf
        child = _materialise(conf, best)
    else:
        raise ValueError(f"unknown mutation operator {op!r}")
    evaluate(child, model)
    return child


# --------------------------------------------------------------------------
# macro-mutation


@dataclass
class MacroStep:
    residue: int
    hp_class: str
    old: tuple[int, int, int]
    new: tuple[int, int, int]
    hcc: tuple[float, float, float] | None
    d_old: float | None
    d_new: float | None


def _dist(p, c) -> float:
    return math.sqrt((p[0] - c[0]) ** 2 + (p[1] - c[1]) ** 2 + (p[2] - c[2]) ** 2)


def macro_mutation(conf: Conformation, seq: Sequence | None = None, repeat: int = 5, p: float = 0.2,
                   rng: np.random.Generator | None = None, guided: bool = True,
                   log: list[MacroStep] | None = None) -> Conformation:
    """Composite of diagonal moves that squeezes H residues toward their centre.

    Each of ``repeat`` iterations draws the target class (P with probability
    ``p``), takes the hydrophobic-core centre once, then walks that class in
    chain order.  P residues take their first free diagonal target.  H
    residues take the first target not farther from the centre, and the
    iteration ends after the first such H move.  With ``guided=False`` every
    residue is treated like a P residue and no class is drawn.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    seq = seq or conf.sequence
    rng = rng if rng is not None else np.random.default_rng()
    n = len(conf)
    work = conf.copy()
    work.fitness = work.fitness_model = None
    keys, occ = work.keys, work.occupancy
    moved = False

    def relocate(i: int, t: int) -> None:
        del occ[keys[i]]
        keys[i] = t
        occ[t] = i

    for _ in range(repeat):
        if guided:
            polar = rng.random() < p
            members = seq.p_positions if polar else seq.h_positions
        else:
            polar = True
            members = range(n)
        centre = None
        if not polar:
            if not members:
                continue
            centre = hcc(work, seq)
        for j in members:
            if j == 0 or j == n - 1:
                continue
            targets = diagonal_targets(work, j)
            if not targets:
                continue
            old = unpack(keys[j])
            if polar:
                t = targets[0]
                relocate(j, t)
                moved = True
                if log is not None:
                    log.append(MacroStep(j, "P", tuple(old), tuple(unpack(t)), None, None, None))
                continue
            d_old = _dist(old, centre)
            for t in targets:
                new = unpack(t)
                d_new = _dist(new, centre)
                if d_new <= d_old:
                    relocate(j, t)
                    moved = True
                    if log is not None:
                        log.append(MacroStep(j, "H", tuple(old), tuple(new), tuple(centre), d_old, d_new))
                    break
            else:
                continue
            break
    if not moved:
        return conf
    work._directions = None
    work._points = None
    return work


# --------------------------------------------------------------------------
# random single applications


def random_move(conf: Conformation, op: str, rng: np.random.Generator, partner: Conformation | None = None,
                repeat: int = 5, p: float = 0.2, guided: bool = True) -> MoveOutcome:
    """One random application of ``op``; ``result`` is ``None`` if infeasible."""
    n = len(conf)
    if op == CROSSOVER:
        if partner is None:
            raise ValueError("crossover needs a partner")
        pos = int(rng.integers(1, n))
        pair = crossover(conf, partner, pos)
        return MoveOutcome(op, pos, None if pair is None else pair[int(rng.integers(2))])
    if op == MACRO:
        out = macro_mutation(conf, repeat=repeat, p=p, rng=rng, guided=guided)
        return MoveOutcome(op, None, None if out is conf else out)
    if op == ROTATION:
        if n < 3:
            return MoveOutcome(op, None, None)
        pos = int(rng.integers(1, n - 1))
        return MoveOutcome(op, pos, rotation(conf, pos, int(rng.integers(1, len(ROTATIONS)))))
    if op == DIAGONAL:
        if n < 3:
            return MoveOutcome(op, None, None)
        pos = int(rng.integers(1, n - 1))
        cands = diagonal_targets(conf, pos)
        if not cands:
            return MoveOutcome(op, pos, None)
        return MoveOutcome(op, pos, _materialise(conf, {pos: cands[int(rng.integers(len(cands)))]}))
    if op == PULL:
        pos = int(rng.integers(n))
        return MoveOutcome(op, pos, random_pull(conf, pos, rng))
    if op == TILT:
        pos = int(rng.integers(n - 1))
        offsets = tilt_offsets(conf, pos)
        if not offsets:
            return MoveOutcome(op, pos, None)
        return MoveOutcome(op, pos, tilt_move(conf, pos, offsets[int(rng.integers(len(offsets)))]))
    raise ValueError(f"unknown operator {op!r}")


def random_pull(conf: Conformation, pos: int, rng: np.random.Generator,
                extended: bool = True) -> Conformation | None:
    if not extended:
        opts = _classic_pulls(conf.keys, conf.occupancy, pos)
        if not opts:
            return None
        side, l, c = opts[int(rng.integers(len(opts)))]
        return _materialise(conf, _classic_changes(conf.keys, pos, side, l, c))
    cands = pull_candidates(conf, pos, extended)
    if not cands:
        return None
    return _materialise(conf, pull_changes(conf, cands[int(rng.integers(len(cands)))]))
