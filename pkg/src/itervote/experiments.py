"""Monte-Carlo Condorcet-efficiency experiments on impartial-culture profiles.

Every cell sharing ``(m, n)`` is evaluated on the same profile sample: profile
``i`` is drawn from a stream seeded by ``(seed, m, n, i)``, so base and iterated
rules are compared pairwise and serial and parallel runs agree exactly.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, TextIO

from .engine import CONVERGED, default_step_cap, iterate
from .moves import restriction_from_name
from .preferences import (
    DEFAULT_ATTEMPT_CAP,
    TieBreak,
    condorcet_winner,
    generate_profile_with_condorcet_winner,
    profile_rng,
)
from .rules import Election, RULE_NAMES, rule_from_name

BASE = "none"
CSV_HEADER = (
    "rule", "restriction", "n", "m", "sample_size", "efficiency",
    "iterated_profiles", "mean_steps", "max_steps", "nonconverged",
)
CHUNK = 50


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    m: int = 5
    n_values: tuple[int, ...] = (50,)
    sample_size: int = 2000
    rules: tuple[str, ...] = RULE_NAMES
    restrictions: tuple[str, ...] = ("m1", "m2", "pragmatist2", "pragmatist3")
    seed: int = 0
    step_cap: int | None = None
    attempt_cap: int = DEFAULT_ATTEMPT_CAP

    def __post_init__(self):
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "restrictions", tuple(r for r in self.restrictions if r != BASE))
        if self.m < 2:
            raise ConfigError(f"m must be >= 2, got {self.m}")
        if not self.n_values or min(self.n_values) < 1:
            raise ConfigError(f"n values must be >= 1, got {self.n_values}")
        if self.sample_size < 1:
            raise ConfigError(f"sample_size must be >= 1, got {self.sample_size}")
        if self.step_cap is not None and self.step_cap < 1:
            raise ConfigError(f"step cap must be >= 1, got {self.step_cap}")
        try:
            for name in self.rules:
                rule_from_name(name, self.m)
            for name in self.restrictions:
                r = restriction_from_name(name)
                if r.kind == "pragmatist" and r.k > self.m:
                    raise ValueError(f"{name}: k exceeds m={self.m}")
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    @classmethod
    def from_text(cls, text: str) -> "ExperimentConfig":
        """Parse ``key=value`` lines: m, n, samples, rules, moves, seed, cap."""
        keys = {"m": "m", "n": "n_values", "samples": "sample_size", "rules": "rules",
                "moves": "restrictions", "seed": "seed", "cap": "step_cap", "attempts": "attempt_cap"}
        kwargs = {}
        for no, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = (s.strip() for s in line.partition("="))
            if not sep or key not in keys:
                raise ConfigError(f"line {no}: expected one of {', '.join(keys)} as key=value, got {raw!r}")
            items = [v.strip() for v in value.split(",") if v.strip()]
            try:
                if key in ("rules", "moves"):
                    kwargs[keys[key]] = tuple(items)
                elif key == "n":
                    kwargs[keys[key]] = tuple(int(v) for v in items)
                elif key == "cap" and value.lower() in ("", "default"):
                    kwargs[keys[key]] = None
                else:
                    kwargs[keys[key]] = int(value)
            except ValueError:
                raise ConfigError(f"line {no}: bad integer in {raw!r}") from None
        return cls(**kwargs)

    @classmethod
    def load(cls, path: str | Path) -> "ExperimentConfig":
        return cls.from_text(Path(path).read_text())

    def to_text(self) -> str:
        cap = "default" if self.step_cap is None else self.step_cap
        return (
            f"m={self.m}\nn={','.join(map(str, self.n_values))}\nsamples={self.sample_size}\n"
            f"rules={','.join(self.rules)}\nmoves={','.join(self.restrictions)}\n"
            f"seed={self.seed}\ncap={cap}\n"
        )

    def cap_for(self, n: int) -> int:
        return self.step_cap if self.step_cap is not None else default_step_cap(n, self.m)

    def cells(self) -> list[tuple[str, str]]:
        return [(rule, r) for rule in self.rules for r in (BASE, *self.restrictions)]


@dataclass(frozen=True)
class CellReport:
    rule: str
    restriction: str
    n: int
    m: int
    sample_size: int
    efficiency: float
    iterated_profiles: int
    mean_steps: float
    max_steps: int
    nonconverged: int
    hits: int = field(default=0, compare=False)

    @property
    def standard_error(self) -> float:
        return binomial_se(self.efficiency, self.sample_size)

    def row(self) -> list[str]:
        return [self.rule, self.restriction, str(self.n), str(self.m), str(self.sample_size),
                f"{self.efficiency:.6f}", str(self.iterated_profiles), f"{self.mean_steps:.4f}",
                str(self.max_steps), str(self.nonconverged)]


def binomial_se(p: float, size: int) -> float:
    return math.sqrt(p * (1 - p) / size)


def sample_profile(config: ExperimentConfig, n: int, index: int):
    rng = profile_rng(config.seed, config.m, n, index)
    return generate_profile_with_condorcet_winner(config.m, n, rng, config.attempt_cap)


def _evaluate_chunk(config: ExperimentConfig, n: int, start: int, stop: int) -> list[dict]:
    """Per-profile outcomes for every cell, for profile indices ``start..stop-1``."""
    tb = TieBreak.identity(config.m)
    cap = config.cap_for(n)
    rules = {name: rule_from_name(name, config.m) for name in config.rules}
    moves = {name: restriction_from_name(name) for name in config.restrictions}
    records = []
    for index in range(start, stop):
        profile = sample_profile(config, n, index)
        outcomes = {}
        for rule_name, rule in rules.items():
            base = Election(rule, profile, tb).winner
            outcomes[f"{rule_name}/{BASE}"] = {"winner": base, "steps": 0, "status": CONVERGED}
            for move_name, move in moves.items():
                out = iterate(profile, rule, move, tb, cap)
                outcomes[f"{rule_name}/{move_name}"] = {
                    "winner": out.winner, "steps": out.steps, "status": out.status}
        records.append({"n": n, "index": index, "condorcet_winner": condorcet_winner(profile),
                        "outcomes": outcomes})
    return records


def _units(config: ExperimentConfig) -> list[tuple[int, int, int]]:
    return [(n, start, min(start + CHUNK, config.sample_size))
            for n in config.n_values for start in range(0, config.sample_size, CHUNK)]


def _summarise(config: ExperimentConfig, records: list[dict]) -> list[CellReport]:
    reports = []
    for n in config.n_values:
        rows = [r for r in records if r["n"] == n]
        for rule, move in config.cells():
            key = f"{rule}/{move}"
            hits = sum(r["outcomes"][key]["winner"] == r["condorcet_winner"] for r in rows)
            steps = [r["outcomes"][key]["steps"] for r in rows]
            moved = [s for s in steps if s > 0]
            nonconverged = sum(r["outcomes"][key]["status"] != CONVERGED for r in rows)
            reports.append(CellReport(
                rule, move, n, config.m, len(rows), hits / len(rows), len(moved),
                sum(moved) / len(moved) if moved else 0.0, max(steps), nonconverged, hits))
    return reports


def run_experiment_detailed(config: ExperimentConfig, jobs: int = 1) -> tuple[list[CellReport], list[dict]]:
    units = _units(config)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_evaluate_chunk, *zip(*[(config, *u) for u in units])))
    else:
        chunks = [_evaluate_chunk(config, *u) for u in units]
    records = [rec for chunk in chunks for rec in chunk]
    return _summarise(config, records), records


def run_experiment(config: ExperimentConfig, jobs: int = 1) -> list[CellReport]:
    return run_experiment_detailed(config, jobs)[0]


def condorcet_efficiency(
    rule: str,
    restriction: str,
    m: int,
    n: int,
    sample_size: int,
    seed: int,
    step_cap: int | None = None,
) -> CellReport:
    """Single cell; ``restriction="none"`` evaluates the base rule."""
    moves = () if restriction == BASE else (restriction,)
    config = ExperimentConfig(m, (n,), sample_size, (rule,), moves, seed, step_cap)
    return run_experiment(config)[-1]


def write_csv(reports: Iterable[CellReport], out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for report in reports:
        writer.writerow(report.row())


def reports_to_csv(reports: Iterable[CellReport]) -> str:
    buf = io.StringIO()
    write_csv(reports, buf)
    return buf.getvalue()


def read_csv(text: str) -> list[dict[str, str]]:
    return list(csv.DictReader(io.StringIO(text)))


def write_records(records: Iterable[dict], out: TextIO) -> None:
    """One JSON object per profile, for auditing individual outcomes."""
    for rec in records:
        out.write(json.dumps(rec, sort_keys=True) + "\n")


def report_dicts(reports: Iterable[CellReport]) -> list[dict]:
    return [asdict(r) for r in reports]
