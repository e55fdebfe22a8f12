"""Recovering the defective set from test outcomes.

Two decoders are provided: the (noisy) cover decoder, which works on any
matrix, and a list-recovery decoder for Kautz-Singleton matrices that works
block-by-block on the outer Reed-Solomon code.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field

import numpy as np

from .construct import CodePlan, Kind
from .errors import LengthMismatch, PlanMismatch
from .gf import GF, gf
from .matrix import CodeMatrix, Outcome


@dataclass
class DecodeResult:
    items: list[int]
    method: str  # "Cover" or "ListRecovery"
    work: dict[str, int] = field(default_factory=dict)

    def __str__(self):
        return " ".join(map(str, self.items))


def cover_decode(m: CodeMatrix, y: Outcome, nu: int = 0) -> DecodeResult:
    """Drop every item that sits in at least ceil(nu/2)+1 negative tests."""
    if len(y) != m.t:
        raise LengthMismatch(f"outcome has length {len(y)}, matrix has {m.t} rows")
    threshold = -(-nu // 2) + 1
    negatives = ~y.bits
    items = [j for j, col in enumerate(m.columns) if (col & negatives).bit_count() < threshold]
    return DecodeResult(items, "Cover", {"columns_scanned": m.n})


class _Interpolator:
    """Lagrange data for every k-subset of the evaluation points 0..t_q-1.

    For subset P, ``values[P]`` is a (k, t_q) array whose row a holds the
    a-th Lagrange basis polynomial of P evaluated at every point, and
    ``coeffs[P]`` a (k, k) array holding that basis polynomial's coefficients
    (low-first).
    """

    def __init__(self, field: GF, t_q: int, k_q: int):
        self.field = field
        self.subsets = list(itertools.combinations(range(t_q), k_q))
        self.values = {}
        self.coeffs = {}
        for subset in self.subsets:
            basis = [self._basis(subset, a) for a in range(k_q)]
            self.coeffs[subset] = np.array(basis, dtype=np.int64)
            self.values[subset] = np.array(
                [[field.poly_eval(b, x) for x in range(t_q)] for b in basis], dtype=np.int64
            )

    def _basis(self, points, a):
        f = self.field
        poly = [1]
        denom = 1
        xa = points[a]
        for b, xb in enumerate(points):
            if b == a:
                continue
            # poly *= (x - xb)
            shifted = [0] + poly
            scaled = [f.mul(f.neg(xb), c) for c in poly] + [0]
            poly = [f.add(u, v) for u, v in zip(shifted, scaled)]
            denom = f.mul(denom, f.sub(xa, xb))
        scale = f.inv(denom)
        return [f.mul(c, scale) for c in poly]


@functools.lru_cache(maxsize=32)
def _interpolator(q: int, t_q: int, k_q: int) -> _Interpolator:
    return _Interpolator(gf(q), t_q, k_q)


def block_lists(y: Outcome, q: int, t_q: int) -> list[list[int]]:
    """Positions of ones inside each length-q block of ``y``."""
    mask = (1 << q) - 1
    out = []
    bits = y.bits
    for _ in range(t_q):
        block = bits & mask
        bits >>= q
        syms = []
        while block:
            low = block & -block
            syms.append(low.bit_length() - 1)
            block ^= low
        out.append(syms)
    return out


def ks_list_decode(plan: CodePlan, y: Outcome, nu: int | None = None) -> DecodeResult:
    """List-recovery decoding of a Kautz-Singleton outcome.

    Candidate outer codewords are obtained by interpolating through one
    symbol from each of k_q blocks.  With ``nu == 0`` only the k_q blocks
    with the shortest lists are used (a defective codeword agrees with every
    block); otherwise every k_q-subset of blocks is tried.  A candidate is
    accepted when it agrees with at least t_q - nu blocks.
    """
    if plan.kind is not Kind.KAUTZ_SINGLETON:
        raise PlanMismatch(f"list decoding needs a Kautz-Singleton plan, got {plan.kind}")
    nu = plan.nu if nu is None else nu
    q, t_q, k_q = plan.q, plan.t_q, plan.k_q
    if len(y) != plan.t:
        raise LengthMismatch(f"outcome has length {len(y)}, plan has t={plan.t}")
    if t_q - nu < k_q:
        raise PlanMismatch(f"t_q - nu = {t_q - nu} < k_q = {k_q}: no error-free block subset guaranteed")

    lists = block_lists(y, q, t_q)
    interp = _interpolator(q, t_q, k_q)
    field = interp.field
    if nu == 0:
        chosen = tuple(sorted(sorted(range(t_q), key=lambda b: (len(lists[b]), b))[:k_q]))
        subsets = [chosen]
    else:
        subsets = interp.subsets

    member = np.zeros((t_q, q), dtype=bool)
    for b, syms in enumerate(lists):
        member[b, syms] = True

    picks, evals, basis = [], [], []
    for subset in subsets:
        chosen_lists = [lists[b] for b in subset]
        if any(not s for s in chosen_lists):
            continue
        grid = np.array(list(itertools.product(*chosen_lists)), dtype=np.int64)
        picks.append(grid)
        evals.append(np.broadcast_to(interp.values[subset], (len(grid), k_q, t_q)))
        basis.append(np.broadcast_to(interp.coeffs[subset], (len(grid), k_q, k_q)))
    work = {"symbols_scanned": plan.t, "candidates": 0}
    if not picks:
        return DecodeResult([], "ListRecovery", work)

    v = np.concatenate(picks)
    work["candidates"] = len(v)
    words = field.sum_array(field.mul_array(v[:, :, None], np.concatenate(evals)), axis=1)
    agree = member[np.arange(t_q)[None, :], words].sum(axis=1)
    keep = agree >= t_q - nu
    if not keep.any():
        return DecodeResult([], "ListRecovery", work)
    coeffs = field.sum_array(field.mul_array(v[keep][:, :, None], np.concatenate(basis)[keep]), axis=1)
    index = (coeffs * (q ** np.arange(k_q, dtype=np.int64))[None, :]).sum(axis=1)
    items = sorted({int(j) for j in index if j < plan.n})
    return DecodeResult(items, "ListRecovery", work)


def decode(m: CodeMatrix, y: Outcome, nu: int = 0, plan: CodePlan | None = None, method: str = "Cover") -> DecodeResult:
    if method == "ListRecovery":
        if plan is None:
            raise PlanMismatch("list decoding needs the matrix's plan")
        return ks_list_decode(plan, y, nu)
    return cover_decode(m, y, nu)
