"""Command-line harness: ``run``, ``bench``, ``oracle``, ``rmsd`` and ``ri``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import fields
from pathlib import Path

import numpy as np

from .conformation import dump, parse_dump
from .energy import EnergyModel, matrix_for
from .errors import FoldError
from .metrics import (
    format_ri,
    read_native,
    relative_improvement,
    rmsd,
    summarize,
)
from .oracle import DEFAULT_CAP, count_saws, exact_optimum
from .search import GaConfig, RunResult, run
from .sequence import benchmark_ids, resolve_sequence

log = logging.getLogger("fccfold")

TRACE_FIELDS = ("generation", "best_energy", "mean_energy", "operator_used", "stagnation_flag")
VARIANTS = (EnergyModel.HP, EnergyModel.MJ, EnergyModel.MH)


def run_seed(master: int, index: int) -> int:
    """Seed of the ``index``-th run under a master seed."""
    return int(np.random.SeedSequence([master, index]).generate_state(1, np.uint64)[0])


# --------------------------------------------------------------------------
# serialisation (no wall-clock values in data files)


def trace_csv(result: RunResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRACE_FIELDS)
    for row in result.trace:
        w.writerow([row.generation, f"{row.best_energy:.6f}", f"{row.mean_energy:.6f}",
                    row.operator_used, int(row.stagnation_flag)])
    return buf.getvalue()


def manifest_record(result: RunResult, run_index: int) -> dict:
    return {
        "sequence_id": result.sequence_id,
        "model": result.model,
        "run": run_index,
        "seed": result.seed,
        "generations": result.generations,
        "best_energy": round(result.best_energy, 6),
        "mj_energy": round(result.report_energy, 6),
        "walks": result.walks,
        "stalled_walkers": result.stalled_walkers,
        "config": result.config,
    }


def _json_line(obj) -> str:
    return json.dumps(obj, sort_keys=True) + "\n"


# --------------------------------------------------------------------------
# config


def _weights(text: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad weight list {text!r}") from None
    if len(vals) != 6:
        raise argparse.ArgumentTypeError("--op-weights needs 6 comma-separated values")
    return vals


_FLAG_TO_FIELD = {
    "pop_size": "pop_size",
    "generations": "max_generations",
    "time": "time_limit",
    "mm_repeat": "mm_repeat",
    "p_polar": "p_polar",
    "stagnation_window": "stagnation_window",
    "op_weights": "operator_weights",
    "seed": "seed",
}


def build_config(args) -> GaConfig:
    """Defaults, then ``--config`` file values, then explicit flags."""
    values: dict = {}
    if getattr(args, "config", None):
        raw = json.loads(Path(args.config).read_text())
        unknown = set(raw) - {f.name for f in fields(GaConfig)}
        if unknown:
            raise FoldError(f"unknown config keys: {', '.join(sorted(unknown))}")
        values.update(raw)
    # a time budget alone means no generation cap
    if getattr(args, "time", None) is not None and "max_generations" not in values:
        values["max_generations"] = None
    for flag, name in _FLAG_TO_FIELD.items():
        v = getattr(args, flag, None)
        if v is not None:
            values[name] = v
    return GaConfig(**values)


# --------------------------------------------------------------------------
# run


def _one_run(job):
    seq, cfg_dict, model, index = job
    cfg = GaConfig(**cfg_dict)
    return index, run(seq, cfg, model)


def execute_runs(seq, cfg: GaConfig, model: EnergyModel, runs: int, jobs: int = 1) -> list[RunResult]:
    base = cfg.to_dict()
    work = []
    for k in range(runs):
        d = dict(base)
        d["seed"] = run_seed(cfg.seed, k)
        work.append((seq, d, model, k))
    if jobs > 1 and runs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            done = dict(pool.map(_one_run, work))
    else:
        done = dict(_one_run(w) for w in work)
    return [done[k] for k in range(runs)]


def _write_runs(out: Path, seq, model: EnergyModel, results: list[RunResult], native) -> dict:
    out.mkdir(parents=True, exist_ok=True)
    stem = f"{seq.id}_{model.value}"
    with open(out / f"{stem}.manifest.jsonl", "w") as man:
        for k, r in enumerate(results):
            (out / f"{stem}_run{k}.trace.csv").write_text(trace_csv(r))
            (out / f"{stem}_run{k}.dump").write_text(dump(r.best, r.best_energy, model.value))
            man.write(_json_line(manifest_record(r, k)))
            for row in r.trace:
                log.info("%s run %d generation %d elapsed_ms %d best %.6f",
                         stem, k, row.generation, row.elapsed_ms, row.best_energy)
    summary = summarize(results, native).to_dict()
    summary["mean_mj_energy"] = float(np.mean([r.report_energy for r in results]))
    summary["best_mj_energy"] = float(min(r.report_energy for r in results))
    (out / f"{stem}.summary.jsonl").write_text(_json_line(summary))
    return summary


def cmd_run(args) -> int:
    seq = resolve_sequence(args.seq)
    cfg = build_config(args)
    model = EnergyModel(args.model)
    native = read_native(args.native) if args.native else None
    results = execute_runs(seq, cfg, model, args.runs, args.jobs)
    summary = _write_runs(Path(args.out), seq, model, results, native)
    print(f"{seq.id} {model.value} runs={summary['runs']} best={summary['best_energy']:.2f} "
          f"mean={summary['mean_energy']:.2f}")
    return 0


# --------------------------------------------------------------------------
# bench

BENCH_FIELDS = ("id", "n", "hp_best", "hp_avg", "mj_best", "mj_avg", "mh_best", "mh_avg",
                "ri_mh_vs_hp", "ri_mh_vs_mj")


def _ri_cell(t: float, r: float) -> str:
    try:
        return format_ri(relative_improvement(t, r))
    except ZeroDivisionError:
        return ""


def bench_table(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=BENCH_FIELDS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def cmd_bench(args) -> int:
    cfg = build_config(args)
    ids = args.seqs.split(",") if args.seqs else None
    if not ids:
        ids = benchmark_ids()
    out = Path(args.out)
    rows = []
    for source in ids:
        seq = resolve_sequence(source)
        row = {"id": seq.id, "n": len(seq)}
        avg = {}
        for model in VARIANTS:
            results = execute_runs(seq, cfg, model, args.runs, args.jobs)
            _write_runs(out / seq.id, seq, model, results, None)
            # every variant is compared in MJ units
            mj = [r.report_energy for r in results]
            row[f"{model.value}_best"] = f"{min(mj):.2f}"
            row[f"{model.value}_avg"] = f"{float(np.mean(mj)):.2f}"
            avg[model] = float(np.mean(mj))
        row["ri_mh_vs_hp"] = _ri_cell(avg[EnergyModel.MH], avg[EnergyModel.HP])
        row["ri_mh_vs_mj"] = _ri_cell(avg[EnergyModel.MH], avg[EnergyModel.MJ])
        rows.append(row)
    text = bench_table(rows)
    out.mkdir(parents=True, exist_ok=True)
    (out / "bench.csv").write_text(text)
    sys.stdout.write(text)
    return 0


# --------------------------------------------------------------------------
# thin wrappers


def cmd_oracle(args) -> int:
    if args.seq:
        seq = resolve_sequence(args.seq)
        res = exact_optimum(seq, matrix_for(args.model), cap=args.cap)
        n = len(seq)
        count = count_saws(n, args.reduce, args.cap)
        print(f"{n} {count} {res.optimum:.2f} {bytes(res.argmin).hex()}")
    else:
        print(f"{args.n} {count_saws(args.n, args.reduce, args.cap)} - -")
    return 0


def cmd_rmsd(args) -> int:
    conf, _, _ = parse_dump(Path(args.pred).read_text())
    print(f"{rmsd(conf, read_native(args.native)):.2f}")
    return 0


def cmd_ri(args) -> int:
    print(format_ri(relative_improvement(args.target, args.reference)))
    return 0


# --------------------------------------------------------------------------


def _add_ga_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", choices=[m.value for m in EnergyModel], default="mh")
    p.add_argument("--pop-size", type=int)
    p.add_argument("--generations", type=int)
    p.add_argument("--time", type=float, help="wall-clock budget per run, seconds")
    p.add_argument("--runs", type=int, default=1)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default="out")
    p.add_argument("--mm-repeat", type=int)
    p.add_argument("--p-polar", type=float)
    p.add_argument("--stagnation-window", type=int)
    p.add_argument("--op-weights", type=_weights)
    p.add_argument("--config", help="JSON file of GA settings (flags win)")
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    p.add_argument("--native", help="CA coordinate file for RMSD columns")


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fccfold", description="Protein folding GA on the FCC lattice")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="seeded GA runs on one sequence")
    p.add_argument("--seq", required=True, help="FASTA path, bundled id, or raw one-letter string")
    _add_ga_flags(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("bench", help="all three variants over a sequence list")
    p.add_argument("--seqs", help="comma-separated ids or paths (default: all bundled)")
    _add_ga_flags(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("oracle", help="exhaustive enumeration")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--seq")
    p.add_argument("--model", choices=["hp", "mj"], default="hp")
    p.add_argument("--reduce", action="store_true", help="one walk per rotation class")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("rmsd", help="distance-matrix RMSD of a dump against native coordinates")
    p.add_argument("pred")
    p.add_argument("native")
    p.set_defaults(func=cmd_rmsd)

    p = sub.add_parser("ri", help="relative improvement in percent")
    p.add_argument("-t", "--target", type=float, required=True)
    p.add_argument("-r", "--reference", type=float, required=True)
    p.set_defaults(func=cmd_ri)
    return ap


def main(argv=None) -> int:
    ap = make_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    if args.command == "oracle" and args.n is None and not args.seq:
        ap.error("oracle needs --n or --seq")
    try:
        return args.func(args)
    except (FoldError, OSError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 2
