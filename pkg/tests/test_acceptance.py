"""Exit criteria, each run at its stated size and tolerance.

A summary line per criterion is printed at the end of the session.
"""

import itertools
import math
import statistics
import time

import numpy as np
import pytest

from corpus import build_corpus
from oracles import hp_sparse_codewords, hp_sparse_tests, hp_unrestricted
from sparsegt.bounds import (
    lb_sparse_codewords,
    lb_sparse_tests,
    lb_unrestricted,
    plan_list_decodable,
    plan_sparse_tests,
)
from sparsegt.construct import build, ks_build, ks_plan, search_random_disjunct
from sparsegt.decode import cover_decode, ks_list_decode
from sparsegt.verify import disjunct_exact, disjunct_sufficient

pytestmark = pytest.mark.acceptance


def assert_valid_witness(m, report):
    i, s = report.witness
    assert i not in s and len(s) <= report.d
    assert m.residual_support(i, s) <= report.nu


@pytest.mark.criterion(1, "KS achievability at w = d+1 (q=5 d=2, q=7 d=4)")
def test_criterion_1():
    start = time.perf_counter()
    m = ks_build(5, 2, 3, 25)
    d = 2
    assert m.t == 15 == (d + 1) * math.isqrt(25)
    assert set(m.col_weights()) == {3}
    assert set(m.row_weights()) == {5}
    assert disjunct_exact(m, 2, 0).is_disjunct
    r = disjunct_exact(m, 3, 0)
    assert not r.is_disjunct
    assert_valid_witness(m, r)

    m = ks_build(7, 2, 5, 49)
    assert (m.t, m.n) == (35, 49) == ((4 + 1) * 7, 49)
    assert set(m.col_weights()) == {5}
    assert set(m.row_weights()) == {7}
    assert disjunct_exact(m, 4, 0).is_disjunct
    r = disjunct_exact(m, 5, 0)
    assert not r.is_disjunct
    assert_valid_witness(m, r)
    assert time.perf_counter() - start < 5


@pytest.mark.criterion(2, "KS achievability at l=2 (GF(4), 12x64, 1-disjunct)")
def test_criterion_2():
    start = time.perf_counter()
    m = ks_build(4, 3, 3, 64)
    l, d, n = 2, 1, 64
    assert m.t == 12 == round((l * d + 1) * n ** (1 / (l + 1)))
    assert disjunct_exact(m, 1, 0).is_disjunct
    # every ordered pair is non-covering
    sup = [m.col_support(j) for j in range(n)]
    assert all(not sup[i] <= sup[j] for i, j in itertools.permutations(range(n), 2))
    assert time.perf_counter() - start < 1


@pytest.mark.criterion(3, "noisy KS (q=7, t_q=5): (2,2)-disjunct, cover decoder under 1 flip")
def test_criterion_3():
    start = time.perf_counter()
    m = ks_build(7, 2, 5, 49)
    assert disjunct_exact(m, 2, 2).is_disjunct
    nu = 2
    assert -(-nu // 2) + 1 == 2
    failures = 0
    cases = 0
    for pair in itertools.combinations(range(49), 2):
        y = m.or_columns(pair)
        for r in range(m.t):
            cases += 1
            if cover_decode(m, y.flip([r]), nu).items != list(pair):
                failures += 1
    assert cases == math.comb(49, 2) * 35
    assert failures == 0
    assert time.perf_counter() - start < 120


@pytest.mark.criterion(4, "list-recovery decoding, l=1 d=2 nu=1 (t=42), all pairs x all single flips")
def test_criterion_4():
    start = time.perf_counter()
    plan = plan_list_decodable(49, 2, 1, l=1)
    assert (plan.t_q, plan.q, plan.n, plan.t) == (6, 7, 49, 42)
    m = build(plan)
    failures = 0
    cases = 0
    for pair in itertools.combinations(range(49), 2):
        y = m.or_columns(pair)
        for flips in [()] + [(r,) for r in range(42)]:
            cases += 1
            if ks_list_decode(plan, y.flip(flips), 1).items != list(pair):
                failures += 1
    assert cases == math.comb(49, 2) * 43
    assert failures == 0
    assert time.perf_counter() - start < 300


@pytest.mark.criterion(5, "list and cover decoders agree with ground truth on all sets of size <= d")
@pytest.mark.parametrize("q, k_q, t_q, n, d", [(5, 2, 3, 25, 2), (7, 2, 5, 49, 4), (4, 3, 3, 64, 1)])
def test_criterion_5(q, k_q, t_q, n, d):
    plan = ks_plan(q, k_q, t_q, n, d=d)
    m = build(plan)
    mismatches = 0
    for size in range(d + 1):
        for s in itertools.combinations(range(n), size):
            y = m.or_columns(s)
            truth = list(s)
            if ks_list_decode(plan, y, 0).items != truth or cover_decode(m, y, 0).items != truth:
                mismatches += 1
    assert mismatches == 0


@pytest.mark.criterion(6, "row-sparse plan meets the lower bound exactly")
def test_criterion_6():
    for n, d, nu, rho, expected in [(25, 2, 0, 5, 15), (49, 2, 1, 7, 28)]:
        plan = plan_sparse_tests(n, d, nu, rho)
        lb = lb_sparse_tests(n, d, nu, rho)
        assert plan.t == expected
        assert lb.value == (d + nu + 1) * n / rho == expected
        assert lb.tests == plan.t
        m = build(plan)
        assert max(m.row_weights()) <= rho
        assert disjunct_exact(m, d, nu).is_disjunct


GRID_50 = [
    (n, d, nu)
    for n in (10, 49, 1000, 10**5, 10**7)
    for d in (1, 2, 3, 5, 8)
    for nu in (0, 2)
]


@pytest.mark.criterion(7, "bound formulas vs 50-digit re-evaluation (rel err 1e-10), monotonicity")
def test_criterion_7():
    assert len(GRID_50) == 50
    rel = 1e-10
    branches_seen = set()
    rho_branches = set()
    worst = 0.0
    for n, d, nu in GRID_50:
        got = lb_unrestricted(n, d).value
        ref = float(hp_unrestricted(n, d))
        worst = max(worst, abs(got - ref) / ref)
        # w_max values hitting every branch: <= d+nu, = d+nu+1, and ladder levels 2 and 3
        prev = math.inf
        for w_max in range(1, 3 * d + nu + 2):
            r = lb_sparse_codewords(n, d, nu, w_max)
            ref = float(hp_sparse_codewords(n, d, nu, w_max))
            worst = max(worst, abs(r.value - ref) / ref)
            branches_seen.add(r.binding_rule)
            assert r.value <= prev + 1e-9 * prev
            prev = r.value
        prev = math.inf
        for rho in sorted({1, 2, 3, 4, 7, 16, n}):
            r = lb_sparse_tests(n, d, nu, rho)
            ref = float(hp_sparse_tests(n, d, nu, rho))
            worst = max(worst, abs(r.value - ref) / ref)
            rho_branches.add(rho * (nu + 1) > d + nu + 1)
            assert r.value <= prev
            prev = r.value
    assert worst <= rel, worst
    assert {"individual", "individual-noisy", "first-step", "first-step-noisy", "ladder", "ladder-noisy"} <= branches_seen
    assert rho_branches == {True, False}
    # nondecreasing in n
    for d, nu, w in [(2, 0, 5), (3, 2, 9), (5, 0, 11)]:
        vals = [lb_sparse_codewords(n, d, nu, w).value for n, dd, nn in GRID_50 if dd == d and nn == 0]
        assert all(a <= b for a, b in zip(vals, vals[1:]))


@pytest.mark.criterion(8, "seeded random constant-weight search, n=400 d=2 c=6 alpha=0.5")
def test_criterion_8():
    start = time.perf_counter()
    n, alpha = 400, 0.5
    m, plan, attempts = search_random_disjunct(n, 2, 0, alpha, 6, seed=0, retries=5)
    assert plan.w == 12
    assert plan.t == math.ceil(6 * 2 * n ** (1 - alpha))
    assert attempts <= 5
    assert disjunct_exact(m, 2, 0).is_disjunct
    lo, hi = 0.5 * n**alpha, 2 * n**alpha
    assert (lo, hi) == (10, 40)
    weights = m.row_weights()
    assert lo <= min(weights) and max(weights) <= hi, (min(weights), max(weights))
    assert time.perf_counter() - start < 120


def _median_decode_time(q, repeats=400):
    plan = ks_plan(q, 2, 3, q * q, d=2)
    m = build(plan)
    rng = np.random.default_rng(q)
    outcomes = [m.or_columns(int(j) for j in rng.choice(m.n, 2, replace=False)) for _ in range(repeats)]
    for y in outcomes[:20]:
        ks_list_decode(plan, y, 0)
    times = []
    for y in outcomes:
        start = time.perf_counter()
        ks_list_decode(plan, y, 0)
        times.append(time.perf_counter() - start)
    return plan.t, statistics.median(times)


@pytest.mark.criterion(9, "list decoding time grows at most 3x per doubling of t (q = 11, 23, 47)")
def test_criterion_9():
    points = [_median_decode_time(q) for q in (11, 23, 47)]
    assert [t for t, _ in points] == [33, 69, 141]
    for (t1, s1), (t2, s2) in zip(points, points[1:]):
        per_doubling = (s2 / s1) ** (1 / math.log2(t2 / t1))
        assert per_doubling <= 3, (t1, t2, s1, s2)


@pytest.mark.criterion(10, "sufficient => exact on the corpus; every witness re-validates")
def test_criterion_10():
    corpus = build_corpus()
    assert len(corpus) >= 20
    kinds = {name.split("_")[0] for name, *_ in corpus}
    assert {"identity", "ks", "random"} <= kinds
    assert any("near_miss" in name for name, *_ in corpus)
    violations = []
    for name, m, d, nu in corpus:
        exact = disjunct_exact(m, d, nu)
        if disjunct_sufficient(m, d, nu).is_disjunct and not exact.is_disjunct:
            violations.append(name)
        if exact.witness is not None:
            i, s = exact.witness
            assert m.residual_support(i, s) <= nu, name
    assert violations == []
