"""Experiment orchestration: run grids of (problem, M, algorithm, seed) cells to CSV."""

from __future__ import annotations

import csv
import logging
import statistics
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from . import algorithm, baselines, lsmop
from .core import ConfigError, ContractError, derive_seed, make_rng
from .dan import DanConfig
from .metrics import significance

log = logging.getLogger(__name__)

# M -> (N, D) as used for the 3-, 6-, 8- and 10-objective result tables
TABLE_SETTINGS = {3: (105, 300), 6: (132, 600), 8: (156, 800), 10: (275, 1000)}
ALGORITHMS = ("moea-csod", "nsga2", "random")
RAW_HEADER = ("problem", "M", "D", "N", "algorithm", "seed", "generations", "igd")
SUMMARY_HEADER = ("problem", "M", "algorithm", "median_igd", "mark")


@dataclass(frozen=True)
class ExperimentConfig:
    problems: tuple[int, ...] = tuple(range(1, 10))
    objectives: tuple[int, ...] = (3, 6, 8, 10)
    algorithms: tuple[str, ...] = ALGORITHMS
    generations: int = 50
    runs: int = 20
    seed: int = 0
    alpha: float = 2.0
    dan: DanConfig = field(default_factory=DanConfig)
    out: Path = Path("results")
    workers: int = 1
    dimension: int | None = None
    population: int | None = None
    pf_points: int = 10000
    significance_level: float = 0.05

    def __post_init__(self):
        for p in self.problems:
            if p not in range(1, 10):
                raise ConfigError(f"unknown problem LSMOP{p}")
        for a in self.algorithms:
            if a not in ALGORITHMS:
                raise ConfigError(f"unknown algorithm {a!r}; choose from {', '.join(ALGORITHMS)}")
        for M in self.objectives:
            if M not in TABLE_SETTINGS and (self.dimension is None or self.population is None):
                raise ConfigError(f"M={M} has no default (N, D); set population and dimension")
        if self.generations < 0 or self.runs < 1 or self.workers < 1:
            raise ConfigError("generations >= 0, runs >= 1 and workers >= 1 are required")

    def setting(self, M: int) -> tuple[int, int]:
        N, D = TABLE_SETTINGS.get(M, (None, None))
        return self.population or N, self.dimension or D


@dataclass(frozen=True)
class Cell:
    problem: int
    M: int
    D: int
    N: int
    algorithm: str
    seed: int


@dataclass(frozen=True)
class CellResult:
    problem: int
    M: int
    D: int
    N: int
    algorithm: str
    seed: int
    generations: int
    igd: float

    def row(self) -> list[str]:
        return [f"LSMOP{self.problem}", str(self.M), str(self.D), str(self.N),
                self.algorithm, str(self.seed), str(self.generations), repr(self.igd)]


def cells(config: ExperimentConfig) -> list[Cell]:
    out = []
    for p in config.problems:
        for M in config.objectives:
            N, D = config.setting(M)
            for a in config.algorithms:
                for r in range(config.runs):
                    out.append(Cell(p, M, D, N, a, config.seed + r))
    return out


def cell_rng(cell: Cell):
    return make_rng(derive_seed(cell.seed, cell.problem, cell.M, zlib.crc32(cell.algorithm.encode())))


def run_cell(cell: Cell, config: ExperimentConfig) -> CellResult:
    instance = lsmop.make_instance(cell.problem, cell.M, cell.D)
    rng = cell_rng(cell)
    if cell.algorithm == "moea-csod":
        cfg = algorithm.CsodConfig(N=cell.N, t_max=config.generations, alpha=config.alpha,
                                   dan=config.dan, pf_points=config.pf_points)
        result = algorithm.run(instance, cfg, rng, cell.seed)
    else:
        cfg = baselines.BaselineConfig(N=cell.N, t_max=config.generations, pf_points=config.pf_points)
        runner = baselines.nsga2_run if cell.algorithm == "nsga2" else baselines.random_search
        result = runner(instance, cfg, rng, cell.seed)
    return CellResult(cell.problem, cell.M, cell.D, cell.N, cell.algorithm, cell.seed,
                      config.generations, result.final_igd)


def _guarded(args) -> CellResult | tuple[Cell, str]:
    cell, config = args
    try:
        return run_cell(cell, config)
    except Exception as exc:  # one failing cell must not abort the grid
        return cell, f"{type(exc).__name__}: {exc}"


@dataclass
class ExperimentOutput:
    results: list[CellResult]
    summary: list[dict]
    errors: list[tuple[Cell, str]]
    raw_path: Path
    summary_path: Path


def summarize(results: list[CellResult], level: float = 0.05) -> list[dict]:
    """Median IGD per (problem, M, algorithm) with a mark against MOEA-CSOD."""
    groups: dict[tuple[int, int, str], list[float]] = {}
    for r in results:
        groups.setdefault((r.problem, r.M, r.algorithm), []).append(r.igd)
    rows = []
    for (p, M, a), values in groups.items():
        mark = ""
        reference = groups.get((p, M, "moea-csod"))
        if a != "moea-csod" and reference and len(reference) >= 3 and len(values) >= 3:
            mark = significance(reference, values, level)
        rows.append({"problem": f"LSMOP{p}", "M": M, "algorithm": a,
                     "median_igd": statistics.median(values), "mark": mark})
    return rows


def _order(results: list[CellResult]) -> list[CellResult]:
    rank = {a: i for i, a in enumerate(ALGORITHMS)}
    return sorted(results, key=lambda r: (r.problem, r.M, rank.get(r.algorithm, len(rank)),
                                          r.algorithm, r.seed))


def write_raw(results: list[CellResult], path: Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RAW_HEADER)
        w.writerows(r.row() for r in results)


def read_raw(path: Path) -> list[CellResult]:
    with open(path, newline="") as fh:
        return [
            CellResult(int(row["problem"].removeprefix("LSMOP")), int(row["M"]), int(row["D"]),
                       int(row["N"]), row["algorithm"], int(row["seed"]),
                       int(row["generations"]), float(row["igd"]))
            for row in csv.DictReader(fh)
        ]


def write_summary(rows: list[dict], path: Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_HEADER)
        for r in rows:
            w.writerow([r["problem"], r["M"], r["algorithm"], repr(r["median_igd"]), r["mark"]])


def run_experiment(config: ExperimentConfig, external: list[CellResult] | None = None) -> ExperimentOutput:
    """Run every cell, then write ``raw.csv`` and ``summary.csv`` under ``config.out``.

    ``external`` rows (e.g. results of other algorithms run elsewhere) join the
    summary but not the raw CSV.
    """
    todo = [(c, config) for c in cells(config)]
    log.info("running %d cells with %d worker(s)", len(todo), config.workers)
    if config.workers == 1:
        outcomes = [_guarded(a) for a in todo]
    else:
        with ProcessPoolExecutor(config.workers) as pool:
            outcomes = list(pool.map(_guarded, todo))
    results = _order([o for o in outcomes if isinstance(o, CellResult)])
    errors = [o for o in outcomes if not isinstance(o, CellResult)]

    out = Path(config.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        raw_path, summary_path = out / "raw.csv", out / "summary.csv"
        write_raw(results, raw_path)
        summary = summarize(_order(results + list(external or [])), config.significance_level)
        write_summary(summary, summary_path)
        if errors:
            with open(out / "errors.csv", "w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(["problem", "M", "algorithm", "seed", "error"])
                for cell, msg in errors:
                    w.writerow([f"LSMOP{cell.problem}", cell.M, cell.algorithm, cell.seed, msg])
    except OSError as exc:
        raise OSError(f"cannot write results under {out}: {exc}") from exc
    for cell, msg in errors:
        log.error("cell %s failed: %s", cell, msg)
    return ExperimentOutput(results, summary, errors, raw_path, summary_path)


# --- flat key = value config files -----------------------------------------

def _ints(value: str) -> tuple[int, ...]:
    return tuple(int(v) for v in value.replace(",", " ").split())


def parse_problems(value: str) -> tuple[int, ...]:
    if value.strip().lower() == "all":
        return tuple(range(1, 10))
    return tuple(int(v.strip().lower().removeprefix("lsmop")) for v in value.replace(",", " ").split())


def parse_algorithms(value: str) -> tuple[str, ...]:
    if value.strip().lower() == "all":
        return ALGORITHMS
    return tuple(v.strip().lower() for v in value.replace(",", " ").split())


_DAN_KEYS = {f"dan_{f.name}": f for f in fields(DanConfig)}

_PARSERS = {
    "problem": ("problems", parse_problems),
    "objectives": ("objectives", _ints),
    "algorithm": ("algorithms", parse_algorithms),
    "generations": ("generations", int),
    "runs": ("runs", int),
    "seed": ("seed", int),
    "alpha": ("alpha", float),
    "out": ("out", Path),
    "workers": ("workers", int),
    "dimension": ("dimension", int),
    "population": ("population", int),
    "pf_points": ("pf_points", int),
    "significance_level": ("significance_level", float),
}


def parse_config_text(text: str) -> dict[str, str]:
    values = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {n}: expected 'key = value', got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _PARSERS and key not in _DAN_KEYS:
            raise ConfigError(f"line {n}: unknown key {key!r}")
        values[key] = value
    return values


def build_config(values: dict[str, str], base: ExperimentConfig | None = None) -> ExperimentConfig:
    """Apply string-valued settings (from a file or the command line) onto ``base``."""
    base = base or ExperimentConfig()
    changes, dan_changes = {}, {}
    for key, value in values.items():
        if key in _DAN_KEYS:
            kind = int if _DAN_KEYS[key].type in (int, "int") else float
            target, name, parse = dan_changes, _DAN_KEYS[key].name, kind
        elif key in _PARSERS:
            target = changes
            name, parse = _PARSERS[key]
        else:
            raise ConfigError(f"unknown setting {key!r}")
        try:
            target[name] = parse(value)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {value!r}") from exc
    try:
        if dan_changes:
            changes["dan"] = replace(base.dan, **dan_changes)
        return replace(base, **changes)
    except ContractError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path: str | Path) -> dict[str, str]:
    return parse_config_text(Path(path).read_text())
