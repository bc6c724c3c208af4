"""Genetic-algorithm engine with exhaustive operators and stagnation recovery.

One operator class is drawn per generation.  Crossover fills the new
population from random parent pairs; every other operator maps each member
to exactly one child.  Duplicates (same direction string) are kept out of
the new population.  When the population best fails to improve for
``stagnation_window`` generations, every member is diversified by a random
walk of pull moves.

Randomness is counter-based: each (generation, member, purpose) triple
draws from its own stream derived from the master seed, so results do not
depend on evaluation order.
"""

from __future__ import annotations

import logging
import math
import time
from collections import Counter
from dataclasses import asdict, dataclass, field

import numpy as np

from . import moves
from .conformation import Conformation, canonical_key, diversity, straight_chain
from .energy import ENERGY_EPS, ContactMatrix, EnergyModel, evaluate, matrix_for, mj_matrix
from .errors import ConfigError, InitialisationFailed, WalkStalled
from .lattice import KEY_DELTA, OccupancyIndex, pack
from .sequence import Sequence

log = logging.getLogger(__name__)

OPERATORS = moves.OPERATORS

# stream purposes
_SELECT, _MEMBER, _ADD, _WALK, _INIT = range(5)


def _stream(seed: int, *counters: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed & 0xFFFFFFFFFFFFFFFF, *counters]))


@dataclass
class GaConfig:
    pop_size: int = 50
    operator_weights: tuple[float, ...] = (1.0,) * 6
    p_polar: float = 0.20
    mm_repeat: int = 5
    stagnation_window: int = 5
    rw_energy_band: tuple[float, float] = (0.05, 0.10)
    rw_diversity_band: tuple[float, float] = (0.10, 0.75)
    max_generations: int | None = 100
    time_limit: float | None = None
    seed: int = 0
    init_retries: int = 100
    dup_retries: int = 20

    def __post_init__(self):
        self.operator_weights = tuple(float(w) for w in self.operator_weights)
        self.rw_energy_band = tuple(self.rw_energy_band)
        self.rw_diversity_band = tuple(self.rw_diversity_band)
        if len(self.operator_weights) != len(OPERATORS):
            raise ConfigError(f"need {len(OPERATORS)} operator weights, got {len(self.operator_weights)}")
        if any(w < 0 for w in self.operator_weights) or sum(self.operator_weights) <= 0:
            raise ConfigError("operator weights must be non-negative with a positive sum")
        if self.pop_size < 1:
            raise ConfigError("pop_size must be >= 1")
        if not 0.0 <= self.p_polar <= 1.0:
            raise ConfigError("p_polar must lie in [0, 1]")
        if self.mm_repeat < 0 or self.stagnation_window < 1:
            raise ConfigError("mm_repeat must be >= 0 and stagnation_window >= 1")
        for name in ("rw_energy_band", "rw_diversity_band"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ConfigError(f"{name} must be ordered low <= high")
        if self.max_generations is None and self.time_limit is None:
            raise ConfigError("set max_generations and/or time_limit")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class Population:
    members: list[Conformation]
    generation: int = 0
    best_ever: Conformation | None = None
    best_ever_energy: float = float("inf")

    def best(self, model: ContactMatrix) -> tuple[Conformation, float]:
        best, best_e = None, float("inf")
        for c in self.members:
            e = evaluate(c, model)
            if best is None or e < best_e - ENERGY_EPS:
                best, best_e = c, e
        return best, best_e

    def mean_energy(self, model: ContactMatrix) -> float:
        return float(np.mean([evaluate(c, model) for c in self.members]))

    def update_best(self, model: ContactMatrix) -> bool:
        c, e = self.best(model)
        if e < self.best_ever_energy - ENERGY_EPS:
            self.best_ever, self.best_ever_energy = c, e
            return True
        return False

    def keys(self) -> list[bytes]:
        return [canonical_key(c) for c in self.members]


@dataclass
class TraceRow:
    generation: int
    elapsed_ms: int
    best_energy: float
    mean_energy: float
    operator_used: str
    stagnation_flag: bool


@dataclass
class RunResult:
    sequence_id: str
    model: str
    seed: int
    config: dict
    best: Conformation
    best_energy: float        # objective units (HP for the HP variant)
    report_energy: float      # MJ energy of ``best``
    generations: int
    trace: list[TraceRow] = field(default_factory=list)
    walks: int = 0
    stalled_walkers: int = 0


# --------------------------------------------------------------------------
# initialisation


def _random_walk_chain(seq: Sequence, rng: np.random.Generator, tries: int) -> Conformation | None:
    n = len(seq)
    for _ in range(tries):
        key = pack((0, 0, 0))
        keys = [key]
        occ = OccupancyIndex({key: 0})
        for i in range(1, n):
            free = [key + d for d in KEY_DELTA if key + d not in occ]
            if not free:
                break
            key = free[int(rng.integers(len(free)))]
            occ[key] = i
            keys.append(key)
        else:
            return Conformation(seq, keys, occ)
    return None


def initialise(seq: Sequence, cfg: GaConfig, model: ContactMatrix | None = None) -> Population:
    """``pop_size`` distinct random self-avoiding walks from the origin."""
    model = model or mj_matrix()
    members: list[Conformation] = []
    seen: set[bytes] = set()
    for p in range(cfg.pop_size):
        rng = _stream(cfg.seed, 0, _INIT, p)
        conf = None
        for _ in range(cfg.init_retries):
            c = _random_walk_chain(seq, rng, cfg.init_retries)
            if c is None:
                break
            if canonical_key(c) not in seen:
                conf = c
                break
        if conf is None:
            conf = _unique_fallback(seq, seen, rng, cfg.init_retries)
        if conf is None:
            raise InitialisationFailed(
                f"could not build {cfg.pop_size} distinct conformations for {seq.id!r} (n={len(seq)})")
        seen.add(canonical_key(conf))
        evaluate(conf, model)
        members.append(conf)
    pop = Population(members)
    pop.update_best(model)
    return pop


def _unique_fallback(seq: Sequence, seen: set[bytes], rng: np.random.Generator, tries: int) -> Conformation | None:
    base = straight_chain(seq)
    if canonical_key(base) not in seen:
        return base
    c = base
    for _ in range(tries):
        nxt = moves.random_pull(c, int(rng.integers(len(c))), rng)
        if nxt is None:
            continue
        c = nxt
        if canonical_key(c) not in seen:
            return Conformation.from_directions(seq, c.directions)
    for d in range(12):
        for e in range(12):
            try:
                c = Conformation.from_directions(seq, [d] + [e] * (len(seq) - 2))
            except ValueError:
                continue
            if canonical_key(c) not in seen:
                return c
    return None


# --------------------------------------------------------------------------
# generation step


def select_operator(weights, rng: np.random.Generator) -> str:
    w = np.asarray(weights, dtype=float)
    if w.shape != (len(OPERATORS),) or (w < 0).any() or w.sum() <= 0:
        raise ConfigError("operator weights must be 6 non-negative values with a positive sum")
    return OPERATORS[int(rng.choice(len(OPERATORS), p=w / w.sum()))]


class _NewPopulation:
    def __init__(self, cfg: GaConfig, model: ContactMatrix, rng: np.random.Generator):
        self.cfg, self.model, self.rng = cfg, model, rng
        self.members: list[Conformation] = []
        self.keys: set[bytes] = set()
        self.forced = 0

    def full(self) -> bool:
        return len(self.members) >= self.cfg.pop_size

    def add(self, conf: Conformation) -> None:
        key = canonical_key(conf)
        if key in self.keys:
            for _ in range(self.cfg.dup_retries):
                alt = moves.random_pull(conf, int(self.rng.integers(len(conf))), self.rng, extended=False)
                if alt is not None and canonical_key(alt) not in self.keys:
                    conf, key = alt, canonical_key(alt)
                    break
            else:
                self.forced += 1
        evaluate(conf, self.model)
        self.members.append(conf)
        self.keys.add(key)


def step_generation(pop: Population, cfg: GaConfig, seq: Sequence, model: ContactMatrix,
                    guided: bool = True, op: str | None = None) -> tuple[Population, str]:
    """Build the next population with one operator class; returns it and the operator."""
    gen = pop.generation + 1
    sel = _stream(cfg.seed, gen, _SELECT)
    if op is None:
        op = select_operator(cfg.operator_weights, sel)
    new = _NewPopulation(cfg, model, _stream(cfg.seed, gen, _ADD))
    members = pop.members
    if op == moves.CROSSOVER:
        while not new.full():
            if len(members) > 1:
                i, j = sel.choice(len(members), size=2, replace=False)
            else:
                i = j = 0
            for child in moves.do_crossover(members[int(i)], members[int(j)], model):
                if new.full():
                    break
                new.add(child)
    elif op == moves.MACRO:
        for k, c in enumerate(members):
            rng = _stream(cfg.seed, gen, _MEMBER, k)
            new.add(moves.macro_mutation(c, seq, cfg.mm_repeat, cfg.p_polar, rng, guided=guided))
    else:
        for c in members:
            new.add(moves.do_mutation(c, op, model))
    if new.forced:
        log.debug("generation %d admitted %d duplicate(s)", gen, new.forced)
    out = Population(new.members, gen, pop.best_ever, pop.best_ever_energy)
    out.update_best(model)
    return out, op


# --------------------------------------------------------------------------
# stagnation recovery


def relative_change(e_new: float, e_old: float) -> float:
    if e_old == 0.0:
        return 0.0 if e_new == 0.0 else float("inf")
    return abs(e_new - e_old) / abs(e_old)


def check_diversity(original: Conformation, walker: Conformation, model: ContactMatrix, cfg: GaConfig,
                    original_energy: float | None = None) -> bool:
    """Walker acceptance: energy change and structural change both in band."""
    d_lo, d_hi = cfg.rw_diversity_band
    # the cheap test first; energy is only needed once the structure is in band
    if not d_lo <= diversity(original, walker) <= d_hi:
        return False
    e_lo, e_hi = cfg.rw_energy_band
    if original_energy is None:
        original_energy = evaluate(original, model)
    return e_lo <= relative_change(evaluate(walker, model), original_energy) <= e_hi


def band_reachable(energy: float, model: ContactMatrix, band: tuple[float, float]) -> bool:
    """False when no energy can land in ``band`` relative to ``energy``.

    Catches a zero reference energy and, for integer-valued matrices such as
    HP, bands too narrow to contain a whole energy step.
    """
    lo, hi = band
    if energy == 0.0:
        return lo <= 0.0
    if lo <= 0.0:
        return True
    if np.all(model.array == np.round(model.array)):
        mag = abs(energy)
        return math.ceil(lo * mag - 1e-9) <= math.floor(hi * mag + 1e-9)
    return True


def walk_member(conf: Conformation, cfg: GaConfig, model: ContactMatrix,
                rng: np.random.Generator) -> Conformation:
    """Pull-move walk from ``conf`` until both bands accept the walker.

    Raises :class:`WalkStalled` after ``10 n`` position sweeps, or at once
    when the energy band is provably out of reach.
    """
    n = len(conf)
    e0 = evaluate(conf, model)
    if not band_reachable(e0, model, cfg.rw_energy_band):
        raise WalkStalled("energy band unreachable from this energy")
    walker = conf
    for _ in range(10 * n):
        for pos in range(n):
            # classic pulls keep each step local; extended drags can rewrite most of the chain
            nxt = moves.random_pull(walker, pos, rng, extended=False)
            if nxt is None:
                continue
            walker = nxt
            if check_diversity(conf, walker, model, cfg, e0):
                return walker
    raise WalkStalled(f"no accepted walker after {10 * n} sweeps")


def random_walk(pop: Population, cfg: GaConfig, model: ContactMatrix) -> tuple[Population, int]:
    """Diversify every member; returns the population and the stalled-walker count."""
    out, stalled = [], 0
    # keys of members not yet replaced are reserved so a fallback never collides
    pending = Counter(canonical_key(c) for c in pop.members)
    seen: set[bytes] = set()
    for k, c in enumerate(pop.members):
        ck = canonical_key(c)
        pending[ck] -= 1
        try:
            w = walk_member(c, cfg, model, _stream(cfg.seed, pop.generation, _WALK, k))
        except WalkStalled:
            stalled += 1
            w = c
        wk = canonical_key(w)
        if wk in seen or pending[wk] > 0:
            w, wk = c, ck
        seen.add(wk)
        out.append(w)
    new = Population(out, pop.generation, pop.best_ever, pop.best_ever_energy)
    new.update_best(model)
    return new, stalled


# --------------------------------------------------------------------------
# driver


def run(seq: Sequence, cfg: GaConfig, model_id: EnergyModel | str = EnergyModel.MH,
        on_generation=None) -> RunResult:
    """Full GA run for one variant.

    HP searches on the HP matrix with guided macro-mutation; MJ searches on
    MJ with unguided macro-mutation; MH searches on MJ with guided
    macro-mutation.  ``report_energy`` is always the MJ energy of the best
    conformation.
    """
    model_id = EnergyModel(model_id)
    objective = matrix_for(model_id)
    guided = model_id is not EnergyModel.MJ
    t0 = time.perf_counter()

    def elapsed_ms() -> int:
        return int(round((time.perf_counter() - t0) * 1000))

    pop = initialise(seq, cfg, objective)
    trace = [TraceRow(0, elapsed_ms(), pop.best_ever_energy, pop.mean_energy(objective), "init", False)]
    if on_generation:
        on_generation(pop, trace[-1])
    stall = walks = stalled = 0
    while True:
        if cfg.max_generations is not None and pop.generation >= cfg.max_generations:
            break
        if cfg.time_limit is not None and time.perf_counter() - t0 >= cfg.time_limit:
            break
        _, prev_best = pop.best(objective)
        pop, op = step_generation(pop, cfg, seq, objective, guided)
        _, new_best = pop.best(objective)
        stall = 0 if new_best < prev_best - ENERGY_EPS else stall + 1
        flag = stall >= cfg.stagnation_window
        if flag:
            pop, s = random_walk(pop, cfg, objective)
            walks += 1
            stalled += s
            stall = 0
        trace.append(TraceRow(pop.generation, elapsed_ms(), pop.best_ever_energy, pop.mean_energy(objective), op, flag))
        if on_generation:
            on_generation(pop, trace[-1])
    best = pop.best_ever
    return RunResult(
        sequence_id=seq.id,
        model=model_id.value,
        seed=cfg.seed,
        config=cfg.to_dict(),
        best=best,
        best_energy=pop.best_ever_energy,
        report_energy=mj_matrix_energy(best),
        generations=pop.generation,
        trace=trace,
        walks=walks,
        stalled_walkers=stalled,
    )


def mj_matrix_energy(conf: Conformation) -> float:
    from .energy import contact_energy, pair_table

    return contact_energy(conf.keys, conf.occupancy, pair_table(conf.sequence, mj_matrix()))
