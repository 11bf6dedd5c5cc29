"""Experiment engine: input x adversary x tester trials, estimates and reports."""

from __future__ import annotations

import csv
import dataclasses
import inspect
import json
import os
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from . import generators as gen
from . import ground_truth as gt
from .adversaries import STRATEGIES, make_strategy
from .oracle import OracleMode, Witness, open_session
from .stats import derive_seed, wilson_interval
from .testers import TESTERS, RegimeWarning, Verdict

INPUT_KEYS = ("d", "n", "r", "far_eps", "path")
TESTER_KEYS = ("eps", "reps", "round_cap", "prop", "c0", "r")
STRATEGY_KEYS = ("window",)
INT_KEYS = {"d", "n", "r", "reps", "round_cap", "t", "trials", "seed", "jobs", "window", "index"}
FLOAT_KEYS = {"eps", "far_eps", "c0"}


@dataclass
class ExperimentConfig:
    input: str = "far"
    input_params: dict = field(default_factory=dict)
    tester: str = "linearity_online"
    tester_params: dict = field(default_factory=dict)
    strategy: str = "null"
    strategy_params: dict = field(default_factory=dict)
    t: int = 1
    mode: str = "erasure"
    trials: int = 100
    seed: int = 0
    out: str | None = None
    format: str = "csv"
    jobs: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.tester not in TESTERS:
            raise KeyError(f"unknown tester {self.tester!r}; known: {sorted(TESTERS)}")
        if self.strategy not in STRATEGIES:
            raise KeyError(f"unknown strategy {self.strategy!r}; known: {sorted(STRATEGIES)}")
        if self.input != "file" and self.input not in gen.KINDS:
            raise KeyError(f"unknown input {self.input!r}; known: {sorted(gen.KINDS)}")
        if self.format not in ("csv", "json"):
            raise ValueError("format must be csv or json")
        OracleMode.parse(self.mode)

    @classmethod
    def from_mapping(cls, data: dict[str, Any]) -> "ExperimentConfig":
        """Build from flat keys such as ``{"input": "far", "d": 20, "eps": 0.25}``."""
        top: dict[str, Any] = {}
        ip: dict[str, Any] = {}
        tp: dict[str, Any] = {}
        sp: dict[str, Any] = {}
        for key, val in data.items():
            key = key.replace("-", "_")
            if val is None:
                continue
            val = _coerce(key, val)
            if key in ("input", "tester", "strategy", "t", "mode", "trials", "seed", "out",
                       "format", "jobs"):
                top[key] = val
            elif key in INPUT_KEYS and key not in TESTER_KEYS:
                ip[key] = val
            elif key in STRATEGY_KEYS:
                sp[key] = val
            elif key in TESTER_KEYS:
                tp[key] = val
                if key == "r":
                    ip[key] = val
            else:
                raise KeyError(f"unknown config key {key!r}")
        if "eps" in tp and "far_eps" not in ip:
            ip["far_eps"] = tp["eps"]
        return cls(input_params=ip, tester_params=tp, strategy_params=sp, **top)

    def to_flat(self) -> dict[str, Any]:
        out = {"input": self.input, "tester": self.tester, "strategy": self.strategy,
               "t": self.t, "mode": self.mode, "trials": self.trials, "seed": self.seed}
        out.update(self.input_params)
        out.update(self.tester_params)
        out.update(self.strategy_params)
        return out

    def replace(self, **changes) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)


def _coerce(key: str, val):
    if isinstance(val, str):
        val = val.strip().strip("\"'")
        if key in INT_KEYS:
            return int(val)
        if key in FLOAT_KEYS:
            from fractions import Fraction
            return float(Fraction(val))
    return val


def read_config_file(path) -> dict[str, str]:
    """Flat ``key = value`` lines; ``#`` starts a comment. Commas also separate pairs."""
    out: dict[str, str] = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        for part in line.split(","):
            if not part.strip():
                continue
            if "=" not in part:
                raise ValueError(f"bad config line {raw!r}")
            k, _, v = part.partition("=")
            out[k.strip()] = v.strip().strip("\"'")
    return out


@dataclass
class TrialStats:
    index: int
    rejected: bool
    queries: int
    saw_erasure: bool
    truncated: bool
    correct: bool | None
    label: str


@dataclass
class ExperimentReport:
    config: dict
    trials: int
    accepts: int
    rejects: int
    reject_rate: float
    reject_ci: tuple[float, float]
    correct: int | None
    correct_rate: float | None
    correct_ci: tuple[float, float] | None
    mean_queries: float
    max_queries: int
    erasure_rate: float
    truncated: int
    wall_time: float

    def row(self) -> dict[str, Any]:
        return {
            "config": json.dumps(self.config, sort_keys=True), "trials": self.trials,
            "accepts": self.accepts, "rejects": self.rejects,
            "reject_rate": self.reject_rate, "reject_ci_lo": self.reject_ci[0],
            "reject_ci_hi": self.reject_ci[1], "correct": self.correct,
            "correct_rate": self.correct_rate,
            "correct_ci_lo": None if self.correct_ci is None else self.correct_ci[0],
            "correct_ci_hi": None if self.correct_ci is None else self.correct_ci[1],
            "mean_queries": self.mean_queries, "max_queries": self.max_queries,
            "erasure_rate": self.erasure_rate, "truncated": self.truncated,
            "wall_time": self.wall_time,
        }


def _call_tester(name: str, session, params: dict, seed: int) -> Verdict:
    fn = TESTERS[name]
    accepted = inspect.signature(fn).parameters
    kwargs = {k: v for k, v in params.items() if k in accepted}
    kwargs["seed"] = seed
    if "eps" in accepted and "eps" not in kwargs:
        raise ValueError(f"tester {name!r} needs eps")
    return fn(session, **kwargs)


def build_input(config: ExperimentConfig, index: int):
    spec = gen.InputSpec(config.input, dict(config.input_params), derive_seed(config.seed, index, 0))
    return gen.make_input(spec)


def run_trial(config: ExperimentConfig, index: int, keep_session: bool = False):
    """One deterministic trial. Returns (Verdict, TrialStats[, session])."""
    f = build_input(config, index)
    strategy = make_strategy({"strategy": config.strategy, **config.strategy_params}, t=config.t)
    session = open_session(f, config.t, config.mode, strategy, seed=derive_seed(config.seed, index, 2))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        verdict = _call_tester(config.tester, session, config.tester_params,
                               derive_seed(config.seed, index, 1))
    label = gen.label_of(config.input)
    if label == gen.MEMBER:
        correct = not verdict.rejected
    elif label == gen.FAR:
        correct = verdict.rejected
    else:
        correct = None
    stats = TrialStats(index, verdict.rejected, verdict.queries_used, verdict.saw_erasure,
                       bool(verdict.info.get("truncated", False)), correct, label)
    if keep_session:
        return verdict, stats, session
    return verdict, stats


def _trial_stats(args) -> TrialStats:
    config, index = args
    return run_trial(config, index)[1]


def run_trials(config: ExperimentConfig, indices=None, jobs: int | None = None) -> list[TrialStats]:
    indices = list(range(config.trials)) if indices is None else list(indices)
    jobs = config.jobs if jobs is None else jobs
    if jobs <= 1:
        return [run_trial(config, i)[1] for i in indices]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_trial_stats, [(config, i) for i in indices], chunksize=8))


def summarize(config: ExperimentConfig, stats: list[TrialStats], wall: float) -> ExperimentReport:
    n = len(stats)
    rej = sum(s.rejected for s in stats)
    judged = [s.correct for s in stats if s.correct is not None]
    corr = sum(judged) if judged else None
    return ExperimentReport(
        config=config.to_flat(), trials=n, accepts=n - rej, rejects=rej,
        reject_rate=rej / n, reject_ci=wilson_interval(rej, n),
        correct=corr, correct_rate=None if corr is None else corr / len(judged),
        correct_ci=None if corr is None else wilson_interval(corr, len(judged)),
        mean_queries=sum(s.queries for s in stats) / n, max_queries=max(s.queries for s in stats),
        erasure_rate=sum(s.saw_erasure for s in stats) / n,
        truncated=sum(s.truncated for s in stats), wall_time=wall,
    )


def estimate(config: ExperimentConfig, jobs: int | None = None) -> ExperimentReport:
    start = time.perf_counter()
    stats = run_trials(config, jobs=jobs)
    report = summarize(config, stats, time.perf_counter() - start)
    if config.out:
        write_report(report, config.out, config.format)
    return report


def write_report(report: ExperimentReport, path, fmt: str = "csv") -> None:
    """Append one row; CSV gets a header only when the file is new."""
    row = report.row()
    path = Path(path)
    if fmt == "json":
        with path.open("a") as fh:
            fh.write(json.dumps(row, sort_keys=True) + "\n")
        return
    new = not path.exists() or path.stat().st_size == 0
    with path.open("a", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(row))
        if new:
            writer.writeheader()
        writer.writerow(row)


@dataclass
class WitnessRun:
    witness: Witness | None
    valid: bool | None
    verdict: Verdict


def extract_witness_run(config: ExperimentConfig, index: int = 0) -> WitnessRun:
    """Run one corruption-mode trial; on Reject validate and return the witness."""
    if OracleMode.parse(config.mode) is not OracleMode.CORRUPTION:
        raise ValueError("witness extraction runs in corruption mode")
    verdict, _stats, session = run_trial(config, index, keep_session=True)
    if not verdict.rejected:
        return WitnessRun(None, None, verdict)
    w = verdict.witness
    d = getattr(session.f, "d", None)
    return WitnessRun(w, gt.witness_is_valid(w, d), verdict)


def default_jobs() -> int:
    return max(1, (os.cpu_count() or 1))
