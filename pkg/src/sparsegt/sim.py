"""OR-channel device-discovery simulation.

Each trial activates a set S of devices, forms y = OR(M_S) XOR v for a
noise pattern v, decodes, and checks that exactly S comes back.
"""

from __future__ import annotations

import enum
import itertools
import math
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .construct import CodePlan
from .decode import cover_decode, ks_list_decode
from .errors import GuaranteeExceeded, WorkBudgetExceeded
from .matrix import CodeMatrix, Outcome

MAX_FAILURES_KEPT = 10
EXHAUSTIVE_BUDGET = 10**7


class Decoder(str, enum.Enum):
    COVER = "Cover"
    LIST_RECOVERY = "ListRecovery"


class ErrorMode(str, enum.Enum):
    RANDOM = "Random"
    EXHAUSTIVE = "Exhaustive"


@dataclass(frozen=True)
class SimConfig:
    """Simulation settings.

    ``d`` and ``nu`` default to the plan's values.  In exhaustive mode every
    active set of size ``d_active`` is combined with every noise pattern of
    weight at most ``error_weight`` and ``trials`` is ignored.  With
    ``mixed_sizes`` the active-set size is drawn uniformly from 0..d instead.
    """

    matrix: CodeMatrix
    d_active: int
    plan: CodePlan | None = None
    d: int | None = None
    nu: int | None = None
    error_weight: int = 0
    trials: int = 100
    seed: int = 0
    decoder: Decoder = Decoder.COVER
    error_mode: ErrorMode = ErrorMode.RANDOM
    mixed_sizes: bool = False
    override: bool = False
    workers: int = 1
    exhaustive_budget: int = EXHAUSTIVE_BUDGET

    @property
    def max_active(self) -> int:
        if self.d is not None:
            return self.d
        if self.plan is not None:
            return self.plan.d
        return self.d_active

    @property
    def noise_param(self) -> int:
        if self.nu is not None:
            return self.nu
        return self.plan.nu if self.plan is not None else 0

    def guarantee(self) -> int:
        """Largest error weight the chosen decoder is guaranteed to correct."""
        nu = self.noise_param
        return nu if Decoder(self.decoder) is Decoder.LIST_RECOVERY else nu // 2


@dataclass(frozen=True)
class TrialFailure:
    active: tuple[int, ...]
    flips: tuple[int, ...]
    decoded: tuple[int, ...]


@dataclass
class SimReport:
    trials_run: int = 0
    exact_recoveries: int = 0
    false_positive_count: int = 0
    false_negative_count: int = 0
    failure_count: int = 0
    failures: list[TrialFailure] = field(default_factory=list)
    mean_decode_time: float = field(default=0.0, compare=False)

    @property
    def success_rate(self) -> float:
        return self.exact_recoveries / self.trials_run if self.trials_run else 1.0

    def to_kv(self) -> dict[str, str]:
        out = {
            "trials_run": str(self.trials_run),
            "exact_recoveries": str(self.exact_recoveries),
            "failures": str(self.failure_count),
            "false_positive_count": str(self.false_positive_count),
            "false_negative_count": str(self.false_negative_count),
            "success_rate": repr(self.success_rate),
            "mean_decode_time": repr(self.mean_decode_time),
        }
        for k, f in enumerate(self.failures):
            out[f"failure_{k}"] = (
                f"S={','.join(map(str, f.active))} v={','.join(map(str, f.flips))} "
                f"decoded={','.join(map(str, f.decoded))}"
            )
        return out

    def to_text(self) -> str:
        lines = [
            f"trials: {self.trials_run}",
            f"exact recoveries: {self.exact_recoveries} ({100 * self.success_rate:.2f}%)",
            f"false positives: {self.false_positive_count}",
            f"false negatives: {self.false_negative_count}",
            f"mean decode time: {self.mean_decode_time * 1e6:.1f} us",
        ]
        for f in self.failures:
            lines.append(f"  failed S={list(f.active)} v={list(f.flips)} -> {list(f.decoded)}")
        return "\n".join(lines)


def _merge(parts: list[SimReport]) -> SimReport:
    out = SimReport()
    elapsed = 0.0
    for p in parts:
        out.trials_run += p.trials_run
        out.exact_recoveries += p.exact_recoveries
        out.false_positive_count += p.false_positive_count
        out.false_negative_count += p.false_negative_count
        out.failure_count += p.failure_count
        elapsed += p.mean_decode_time * p.trials_run
        out.failures.extend(p.failures)
    del out.failures[MAX_FAILURES_KEPT:]
    out.mean_decode_time = elapsed / out.trials_run if out.trials_run else 0.0
    return out


def _random_case(cfg: SimConfig, trial: int):
    rng = np.random.default_rng([cfg.seed, trial])
    m = cfg.matrix
    size = int(rng.integers(0, cfg.max_active + 1)) if cfg.mixed_sizes else cfg.d_active
    active = tuple(sorted(int(j) for j in rng.choice(m.n, size=size, replace=False)))
    flips = tuple(sorted(int(r) for r in rng.choice(m.t, size=cfg.error_weight, replace=False)))
    return active, flips


def _exhaustive_cases(cfg: SimConfig):
    m = cfg.matrix
    sizes = range(cfg.max_active + 1) if cfg.mixed_sizes else [cfg.d_active]
    actives = itertools.chain.from_iterable(itertools.combinations(range(m.n), s) for s in sizes)
    for active in actives:
        for e in range(cfg.error_weight + 1):
            for flips in itertools.combinations(range(m.t), e):
                yield active, flips


def exhaustive_case_count(cfg: SimConfig) -> int:
    m = cfg.matrix
    sizes = range(cfg.max_active + 1) if cfg.mixed_sizes else [cfg.d_active]
    sets = sum(math.comb(m.n, s) for s in sizes)
    return sets * sum(math.comb(m.t, e) for e in range(cfg.error_weight + 1))


def _run_range(cfg: SimConfig, lo: int, hi: int) -> SimReport:
    m = cfg.matrix
    nu = cfg.noise_param
    list_mode = Decoder(cfg.decoder) is Decoder.LIST_RECOVERY
    if ErrorMode(cfg.error_mode) is ErrorMode.EXHAUSTIVE:
        cases = itertools.islice(_exhaustive_cases(cfg), lo, hi)
    else:
        cases = (_random_case(cfg, k) for k in range(lo, hi))
    report = SimReport()
    elapsed = 0.0
    for active, flips in cases:
        y = m.or_columns(active)
        if flips:
            y = y.flip(flips)
        start = time.perf_counter()
        if list_mode:
            result = ks_list_decode(cfg.plan, y, nu)
        else:
            result = cover_decode(m, y, nu)
        elapsed += time.perf_counter() - start
        decoded = set(result.items)
        truth = set(active)
        report.trials_run += 1
        if decoded == truth:
            report.exact_recoveries += 1
            continue
        report.failure_count += 1
        report.false_positive_count += len(decoded - truth)
        report.false_negative_count += len(truth - decoded)
        if len(report.failures) < MAX_FAILURES_KEPT:
            report.failures.append(TrialFailure(tuple(active), tuple(flips), tuple(sorted(decoded))))
    report.mean_decode_time = elapsed / report.trials_run if report.trials_run else 0.0
    return report


def _run_range_star(args):
    return _run_range(*args)


def run_sim(cfg: SimConfig) -> SimReport:
    """Run the configured trials.

    Random trial k draws from a generator seeded with (seed, k), so the
    report does not depend on the number of workers.
    """
    m = cfg.matrix
    if cfg.d_active < 0 or cfg.d_active > cfg.max_active:
        raise ValueError(f"d_active={cfg.d_active} must lie in [0, d={cfg.max_active}]")
    if cfg.d_active > m.n or cfg.error_weight > m.t or cfg.error_weight < 0:
        raise ValueError("active set or error weight does not fit the matrix")
    if Decoder(cfg.decoder) is Decoder.LIST_RECOVERY and cfg.plan is None:
        raise ValueError("list-recovery decoding needs a Kautz-Singleton plan")
    if cfg.error_weight > cfg.guarantee() and not cfg.override:
        warnings.warn(
            f"error weight {cfg.error_weight} exceeds the {Decoder(cfg.decoder).value} decoder's "
            f"guarantee of {cfg.guarantee()}",
            GuaranteeExceeded,
            stacklevel=2,
        )
    if ErrorMode(cfg.error_mode) is ErrorMode.EXHAUSTIVE:
        total = exhaustive_case_count(cfg)
        if total > cfg.exhaustive_budget:
            raise WorkBudgetExceeded(
                f"exhaustive simulation needs {total} cases, budget is {cfg.exhaustive_budget}",
                progress={"cases": 0},
            )
    else:
        total = cfg.trials
    if cfg.workers <= 1 or total < 2:
        return _run_range(cfg, 0, total)
    step = -(-total // cfg.workers)
    jobs = [(cfg, lo, min(lo + step, total)) for lo in range(0, total, step)]
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        parts = list(pool.map(_run_range_star, jobs))
    return _merge(parts)
