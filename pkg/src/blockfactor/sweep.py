"""Generate -> fit -> score sweeps over a benchmark parameter.

Rows are written in (parameter, algorithm, trial) order whatever the
completion order, and floats are written with ``repr`` so reruns are
byte-identical.
"""

from __future__ import annotations

import csv
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .generators import GNSpec, LFRSpec, gn_generate, lfr_generate
from .metrics import nmi
from .solvers import SolverConfig, fit

log = logging.getLogger(__name__)

ROW_FIELDS = ("benchmark", "param", "algorithm", "trial", "seed", "nmi", "objective", "status")
AGG_FIELDS = ("benchmark", "param", "algorithm", "trials_ok", "nmi_mean", "nmi_std")
GN_DEFAULT = tuple(float(z) for z in range(9))
LFR_DEFAULT = tuple(round(0.1 * k, 1) for k in range(1, 10))

_MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def derive_seed(base: int, *keys: int) -> int:
    """Fold ``keys`` into ``base`` with SplitMix64; stable across platforms."""
    h = splitmix64(base & _MASK64)
    for k in keys:
        h = splitmix64(h ^ (k & _MASK64))
    return h


class SweepError(RuntimeError):
    pass


@dataclass(frozen=True)
class ExperimentSpec:
    benchmark: str = "gn"
    values: tuple[float, ...] = ()
    algorithms: tuple[str, ...] = ("kl", "lse")
    trials: int = 10
    iterations: int = 500
    base_seed: int = 0
    # None: 4 for GN, the planted count for LFR
    communities: int | None = None

    def __post_init__(self):
        if self.benchmark not in ("gn", "lfr"):
            raise ValueError("benchmark must be 'gn' or 'lfr'")
        if self.trials < 1 or self.iterations < 1:
            raise ValueError("trials and iterations must be >= 1")
        if not self.values:
            default = GN_DEFAULT if self.benchmark == "gn" else LFR_DEFAULT
            object.__setattr__(self, "values", default)
        for v in self.values:
            # raises on out-of-domain values
            self.instance_spec(v)

    def instance_spec(self, value: float):
        return GNSpec(z_out=value) if self.benchmark == "gn" else LFRSpec(mu=value)


@dataclass
class ExperimentResult:
    rows: list[dict] = field(default_factory=list)

    def aggregate(self) -> list[dict]:
        groups: dict[tuple, list[float]] = {}
        for r in self.rows:
            key = (r["benchmark"], r["param"], r["algorithm"])
            vals = groups.setdefault(key, [])
            if r["status"] == "ok":
                vals.append(r["nmi"])
        out = []
        for (bench, param, alg), vals in groups.items():
            arr = np.asarray(vals, dtype=float)
            out.append(
                {
                    "benchmark": bench,
                    "param": param,
                    "algorithm": alg,
                    "trials_ok": arr.size,
                    "nmi_mean": float(arr.mean()) if arr.size else float("nan"),
                    "nmi_std": float(arr.std()) if arr.size else float("nan"),
                }
            )
        return out

    def write(self, out_dir) -> tuple[Path, Path]:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        rows_path, agg_path = out_dir / "rows.csv", out_dir / "agg.csv"
        _write_csv(rows_path, ROW_FIELDS, self.rows)
        _write_csv(agg_path, AGG_FIELDS, self.aggregate())
        return rows_path, agg_path


def _cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _write_csv(path: Path, fields, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(fields)
        for r in rows:
            w.writerow([_cell(r[f]) for f in fields])


def read_rows(path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    for r in rows:
        r["param"] = float(r["param"])
        r["trial"] = int(r["trial"])
        r["seed"] = int(r["seed"])
        r["nmi"] = float(r["nmi"])
        r["objective"] = float(r["objective"])
    return rows


def _run_point(spec: ExperimentSpec, p_index: int, value: float, trial: int) -> list[dict]:
    seed = derive_seed(spec.base_seed, p_index, trial)
    base = {"benchmark": spec.benchmark, "param": float(value), "trial": trial, "seed": seed}
    try:
        ispec = spec.instance_spec(value)
        inst = gn_generate(ispec, seed) if spec.benchmark == "gn" else lfr_generate(ispec, seed)
    except Exception as exc:  # recorded per row; the sweep goes on
        log.warning("generation failed at %s=%s trial %d: %s", spec.benchmark, value, trial, exc)
        return [
            dict(base, algorithm=alg, nmi=float("nan"), objective=float("nan"), status=f"generation_error: {exc}")
            for alg in spec.algorithms
        ]
    c = spec.communities or (4 if spec.benchmark == "gn" else inst.communities)
    fit_seed = derive_seed(seed, 1)
    rows = []
    for alg in spec.algorithms:
        try:
            res = fit(inst.graph.matrix, SolverConfig(c, alg, spec.iterations, fit_seed))
            rows.append(
                dict(base, algorithm=alg, nmi=float(nmi(inst.labels, res.labels)),
                     objective=float(res.objective_trace[-1]), status="ok")
            )
        except Exception as exc:
            log.warning("fit failed (%s) at %s=%s trial %d: %s", alg, spec.benchmark, value, trial, exc)
            rows.append(dict(base, algorithm=alg, nmi=float("nan"), objective=float("nan"), status=f"fit_error: {exc}"))
    return rows


def thread_count() -> int:
    env = os.environ.get("BLOCKFACTOR_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            log.warning("ignoring non-integer BLOCKFACTOR_THREADS=%r", env)
    return 1


def run_sweep(spec: ExperimentSpec, threads: int | None = None, progress=None) -> ExperimentResult:
    jobs = [(i, v, t) for i, v in enumerate(spec.values) for t in range(spec.trials)]
    threads = threads or thread_count()
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            chunks = list(pool.map(lambda job: _run_point(spec, *job), jobs))
    else:
        chunks = []
        for job in jobs:
            chunks.append(_run_point(spec, *job))
            if progress:
                progress(job)

    by_key = {}
    for chunk in chunks:
        for r in chunk:
            by_key[(r["param"], r["algorithm"], r["trial"])] = r
    rows = [by_key[(float(v), alg, t)] for v in spec.values for alg in spec.algorithms for t in range(spec.trials)]
    if all(r["status"] != "ok" for r in rows):
        raise SweepError("every row of the sweep failed")
    return ExperimentResult(rows)
