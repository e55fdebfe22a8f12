import itertools

import pytest

from oracles import ks_supports, supports_of
from sparsegt.construct import (
    CodePlan,
    Kind,
    build,
    identity_stack,
    ks_build,
    ks_plan,
    random_constant_weight,
    random_plan,
    search_random_disjunct,
)
from sparsegt.errors import BlockLengthExceedsField, TooManyColumns, WeightExceedsLength
from sparsegt.gf import field_new
from sparsegt.matrix import CodeMatrix

KS_CASES = [(5, 2, 3, 25), (4, 3, 3, 64), (7, 2, 5, 49), (8, 2, 4, 40), (9, 2, 9, 81), (2, 1, 1, 2), (3, 3, 2, 27)]


@pytest.mark.parametrize("q, k_q, t_q, n", KS_CASES)
def test_ks_matches_polynomial_oracle(q, k_q, t_q, n):
    spec = field_new(q)
    m = ks_build(spec, k_q, t_q, n)
    assert (m.t, m.n) == (q * t_q, n)
    assert supports_of(m) == ks_supports(q, spec.p, spec.modulus, k_q, t_q, n)


@pytest.mark.parametrize("q, k_q, t_q, n", KS_CASES)
def test_ks_structure(q, k_q, t_q, n):
    m = ks_build(q, k_q, t_q, n)
    assert set(m.col_weights()) == {t_q}
    for j in range(n):
        blocks = sorted(r // q for r in m.col_support(j))
        assert blocks == list(range(t_q))
    sup = supports_of(m)
    for a, b in itertools.combinations(range(n), 2):
        assert len(sup[a] & sup[b]) <= k_q - 1
    if n == q**k_q:
        assert set(m.row_weights()) == {q ** (k_q - 1)}


def test_ks5_example(ks5):
    assert (ks5.t, ks5.n) == (15, 25)
    assert set(ks5.col_weights()) == {3}
    assert set(ks5.row_weights()) == {5}


def test_ks_degenerate_identity():
    assert ks_build(2, 1, 1, 2) == CodeMatrix.identity(2)


def test_ks4_t():
    assert ks_build(4, 3, 3, 64).t == 12


def test_ks_errors():
    with pytest.raises(BlockLengthExceedsField):
        ks_build(5, 2, 6, 25)
    with pytest.raises(TooManyColumns):
        ks_build(5, 2, 3, 26)


def test_identity_stack():
    assert identity_stack(4, 0) == CodeMatrix.identity(4)
    m = identity_stack(2, 1)
    assert (m.t, m.n) == (4, 2)
    assert m.col_weights() == [2, 2]
    assert m.row_strings() == ["10", "01", "10", "01"]


@pytest.mark.parametrize("t, n, w, seed", [(20, 30, 5, 0), (12, 10, 12, 3), (7, 50, 0, 1), (40, 9, 13, 99)])
def test_random_weights_and_determinism(t, n, w, seed):
    m = random_constant_weight(t, n, w, seed)
    assert (m.t, m.n) == (t, n)
    assert set(m.col_weights()) == {w}
    assert m == random_constant_weight(t, n, w, seed)


def test_random_full_weight_is_all_ones():
    m = random_constant_weight(6, 4, 6, seed=5)
    assert m.popcount() == 24


def test_random_seeds_differ():
    assert random_constant_weight(30, 20, 4, 0) != random_constant_weight(30, 20, 4, 1)


def test_random_weight_exceeds_length():
    with pytest.raises(WeightExceedsLength):
        random_constant_weight(5, 3, 6, 0)


def test_random_plan_parameters():
    plan = random_plan(400, 2, 0, 0.5, 6)
    assert (plan.t, plan.w) == (240, 12)
    assert plan.kind is Kind.RANDOM_CONSTANT_WEIGHT


def test_search_reproducible():
    m, plan, attempt = search_random_disjunct(100, 1, 0, 0.5, 4, seed=7)
    assert 1 <= attempt <= 5
    assert build(plan) == m
    assert plan.rho_bound == max(m.row_weights())


def test_plan_meta_roundtrip(ks5_plan):
    assert CodePlan.from_meta(ks5_plan.to_meta()) == ks5_plan
    assert build(ks5_plan) == ks_build(5, 2, 3, 25)


def test_ks_plan_defaults():
    plan = ks_plan(7, 2, 5, 49, nu=2)
    assert (plan.d, plan.t, plan.w, plan.rho_bound) == (2, 35, 5, 7)
    assert ks_plan(4, 3, 3, 64).rho_bound == 16


def test_plan_validation():
    with pytest.raises(ValueError):
        CodePlan(kind=Kind.KAUTZ_SINGLETON, n=25, d=2, nu=0, t=16, w=3, rho_bound=5, q=5, k_q=2, t_q=3)
    with pytest.raises(ValueError):
        CodePlan(kind=Kind.IDENTITY_STACK, n=5, d=1, nu=1, t=5, w=2, rho_bound=1)
