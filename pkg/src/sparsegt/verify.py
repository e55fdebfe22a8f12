"""Deciding (d, nu)-disjunctness.

``disjunct_sufficient`` is the one-sided weight/correlation test;
``disjunct_exact`` is an exhaustive search that returns a counterexample
when the property fails.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import WorkBudgetExceeded
from .matrix import CodeMatrix

DEFAULT_BUDGET = 10**9


@dataclass
class VerifyReport:
    method: str  # "Sufficient" or "Exact"
    is_disjunct: bool
    d: int
    nu: int
    witness: tuple[int, tuple[int, ...]] | None = None
    w_min: int | None = None
    lambda_max: int | None = None
    subsets_examined: int = 0
    # False when a negative sufficient-test result says nothing either way
    conclusive: bool = True
    notes: list[str] = field(default_factory=list)

    def to_kv(self) -> dict[str, str]:
        out = {
            "method": self.method,
            "d": str(self.d),
            "nu": str(self.nu),
            "is_disjunct": str(self.is_disjunct).lower(),
            "conclusive": str(self.conclusive).lower(),
            "w_min": str(self.w_min),
            "lambda_max": str(self.lambda_max),
            "subsets_examined": str(self.subsets_examined),
        }
        if self.witness is not None:
            i, s = self.witness
            out["witness_column"] = str(i)
            out["witness_set"] = " ".join(map(str, s))
        return out


def correlation_stats(m: CodeMatrix) -> tuple[int, int]:
    """Minimum column weight and maximal pairwise overlap of columns."""
    if m.n < 2:
        raise ValueError("correlation needs at least two columns")
    w_min = min(m.col_weights())
    a = m.to_dense().astype(np.float32)
    lam = 0
    chunk = 1024
    for lo in range(0, m.n, chunk):
        g = a[:, lo:lo + chunk].T @ a
        idx = np.arange(g.shape[0])
        g[idx, lo + idx] = 0
        lam = max(lam, int(g.max()))
    return w_min, lam


def disjunct_sufficient(m: CodeMatrix, d: int, nu: int) -> VerifyReport:
    """One-sided test: w_min >= d*lambda_max + nu + 1 implies (d, nu)-disjunct.

    With lambda_max = 0 all supports are disjoint, so w_min >= nu + 1 settles
    the question for every d.  A False result is reported as inconclusive.
    """
    w_min, lam = correlation_stats(m)
    if lam == 0:
        ok = w_min >= nu + 1
    else:
        ok = w_min >= d * lam + nu + 1
    return VerifyReport("Sufficient", ok, d, nu, w_min=w_min, lambda_max=lam, conclusive=ok)


def guaranteed_disjunctness(w_min: int, lambda_max: int) -> int | None:
    """floor((w_min - 1) / lambda_max); None stands for "any d"."""
    if lambda_max == 0:
        return None if w_min >= 1 else -1
    return (w_min - 1) // lambda_max


def _top_sums(overlaps: Sequence[int], depth: int) -> list[list[int]]:
    """sums[r][k] = sum of the r largest values in overlaps[k:]."""
    m = len(overlaps)
    sums = [[0] * (m + 1) for _ in range(depth + 1)]
    top: list[int] = []
    for k in range(m - 1, -1, -1):
        top.append(overlaps[k])
        top.sort(reverse=True)
        del top[depth:]
        acc = 0
        for r in range(1, depth + 1):
            if r <= len(top):
                acc += top[r - 1]
            sums[r][k] = acc
    return sums


class _Counter:
    __slots__ = ("nodes", "budget")

    def __init__(self, budget: int):
        self.nodes = 0
        self.budget = budget


def _smallest_cover(cols, i, size, nu, cand, overlaps, top, counter):
    """Lexicographically smallest S of exactly ``size`` candidates leaving <= nu rows of column i."""
    chosen: list[int] = []
    m = len(cand)

    def dfs(start: int, r: int, uncovered: int) -> bool:
        counter.nodes += 1
        if counter.nodes > counter.budget:
            raise WorkBudgetExceeded("residual evaluation budget exhausted")
        rem = uncovered.bit_count()
        if r == 0:
            return rem <= nu
        for k in range(start, m - r + 1):
            if rem - top[r][k] > nu:
                break
            chosen.append(cand[k])
            if dfs(k + 1, r - 1, uncovered & ~cols[cand[k]]):
                return True
            chosen.pop()
        return False

    if dfs(0, size, cols[i]):
        return tuple(chosen)
    return None


def _scan(cols: Sequence[int], lo: int, hi: int, d: int, nu: int, budget: int):
    """Best witness (|S|, i, S) for columns in [lo, hi), plus work done.

    Columns are visited in order and each one only searches sizes strictly
    below the best witness found so far, so the result is the smallest
    (|S|, i, S) in the range.
    """
    counter = _Counter(budget)
    n = len(cols)
    best = None
    for i in range(lo, hi):
        ci = cols[i]
        counter.nodes += 1
        if ci.bit_count() <= nu:
            return (0, i, ()), counter.nodes
        limit = min(d, n - 1) if best is None else best[0] - 1
        if limit < 1:
            continue
        cand, overlaps = [], []
        for j in range(n):
            if j != i:
                ov = (ci & cols[j]).bit_count()
                if ov:
                    cand.append(j)
                    overlaps.append(ov)
        top = _top_sums(overlaps, limit)
        for size in range(1, limit + 1):
            try:
                s = _smallest_cover(cols, i, size, nu, cand, overlaps, top, counter)
            except WorkBudgetExceeded as exc:
                exc.progress = {"column": i, "size": size, "subsets_examined": counter.nodes}
                raise
            if s is not None:
                best = (size, i, s)
                break
    return best, counter.nodes


def _scan_star(args):
    return _scan(*args)


def disjunct_exact(
    m: CodeMatrix, d: int, nu: int, budget: int = DEFAULT_BUDGET, workers: int = 1
) -> VerifyReport:
    """Exhaustively decide (d, nu)-disjunctness.

    Only columns overlapping column i can shrink its residual, so the search
    for each i ranges over those, pruned whenever the largest remaining
    overlaps cannot bring the residual down to ``nu``.  On failure the
    witness has minimal |S|, then smallest i, then lexicographically
    smallest S, independent of ``workers``.
    """
    if m.n < 2:
        raise ValueError("need at least two columns")
    if d < 0 or nu < 0:
        raise ValueError("d and nu must be nonnegative")
    eff_d = min(d, m.n - 1)
    worst = math.comb(m.n - 1, eff_d) * m.n
    if worst > budget:
        raise WorkBudgetExceeded(
            f"C({m.n - 1},{eff_d})*{m.n} = {worst} subsets exceeds budget {budget}",
            progress={"subsets_examined": 0},
        )
    cols = m.columns
    if workers <= 1:
        best, nodes = _scan(cols, 0, m.n, d, nu, budget)
    else:
        step = -(-m.n // workers)
        jobs = [(cols, lo, min(lo + step, m.n), d, nu, budget) for lo in range(0, m.n, step)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan_star, jobs))
        found = [r for r, _ in results if r is not None]
        best = min(found) if found else None
        nodes = sum(k for _, k in results)
    w_min = min(m.col_weights())
    try:
        lam = correlation_stats(m)[1]
    except ValueError:
        lam = None
    if best is None:
        return VerifyReport("Exact", True, d, nu, w_min=w_min, lambda_max=lam, subsets_examined=nodes)
    _, i, s = best
    return VerifyReport("Exact", False, d, nu, witness=(i, s), w_min=w_min, lambda_max=lam, subsets_examined=nodes)
