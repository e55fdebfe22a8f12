"""Matrices shared by the verifier tests and the soundness cross-check."""

import numpy as np

from sparsegt.construct import identity_stack, ks_build, random_constant_weight
from sparsegt.matrix import CodeMatrix


def near_miss(m, seed):
    """Flip one random 1 to 0 in a column; usually breaks disjunctness at the edge."""
    rng = np.random.default_rng(seed)
    j = int(rng.integers(m.n))
    r = int(rng.choice(sorted(m.col_support(j))))
    return m.with_bit(r, j, 0)


def dense(rows):
    return CodeMatrix.from_dense(np.array(rows, dtype=bool))


def build_corpus():
    """(name, matrix, d, nu) cases; each name unique."""
    cases = []
    for n, nu in [(3, 0), (6, 0), (5, 1), (4, 2)]:
        cases.append((f"identity_stack_{n}_{nu}", identity_stack(n, nu), n - 1, nu))
    ks = {
        "ks_5_2_3": (ks_build(5, 2, 3, 25), 2, 0),
        "ks_4_3_3": (ks_build(4, 3, 3, 64), 1, 0),
        "ks_7_2_5": (ks_build(7, 2, 5, 49), 2, 2),
        "ks_7_2_5_d4": (ks_build(7, 2, 5, 49), 4, 0),
        "ks_3_2_3": (ks_build(3, 2, 3, 9), 2, 0),
        "ks_8_2_4": (ks_build(8, 2, 4, 40), 3, 0),
    }
    for name, (m, d, nu) in ks.items():
        cases.append((name, m, d, nu))
        cases.append((name + "_over_d", m, d + 1, nu))
    for k in range(3):
        cases.append((f"ks_5_2_3_near_miss_{k}", near_miss(ks["ks_5_2_3"][0], k), 2, 0))
        cases.append((f"ks_7_2_5_near_miss_{k}", near_miss(ks["ks_7_2_5"][0], k), 2, 2))
    for seed in range(4):
        cases.append((f"random_30_40_6_{seed}", random_constant_weight(30, 40, 6, seed), 1, 0))
        cases.append((f"random_20_12_5_{seed}", random_constant_weight(20, 12, 5, seed), 2, 0))
    cases.append(("covered_pair", dense([[1, 1], [0, 1]]), 1, 0))
    cases.append(("duplicate_columns", dense([[1, 1, 0], [1, 1, 0], [0, 0, 1]]), 1, 0))
    cases.append(("zero_column", dense([[1, 0, 0], [0, 0, 1]]), 1, 0))
    return cases
