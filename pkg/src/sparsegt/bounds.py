"""Lower bounds on the number of tests and constraint-aware planners.

Lower bounds from different results are combined by taking the maximum,
and the reported requirement on ``t`` is the ceiling of the real value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .construct import CodePlan, identity_plan, ks_plan
from .errors import DegenerateParameters
from .gf import MAX_FIELD_SIZE, next_prime_power


@dataclass(frozen=True)
class BoundResult:
    value: float
    binding_rule: str
    regime: str

    @property
    def tests(self) -> int:
        """Smallest integer t compatible with the bound."""
        # tolerate float noise on exact integer bounds such as sqrt(n)^2
        r = round(self.value)
        if abs(self.value - r) <= 1e-9 * max(1.0, abs(self.value)):
            return int(r)
        return math.ceil(self.value)


def _check_positive(**kw):
    for name, v in kw.items():
        if v < 1:
            raise ValueError(f"{name} must be >= 1, got {v}")


def _max(*results: BoundResult) -> BoundResult:
    return max(results, key=lambda r: r.value)


def lb_unrestricted(n: int, d: int) -> BoundResult:
    """t(d, n) >= min{C(d+2, 2), n}."""
    _check_positive(n=n, d=d)
    value = float(min(math.comb(d + 2, 2), n))
    return BoundResult(value, "unrestricted", "unrestricted")


def individual_testing_bound(n: int, d: int, nu: int, w_max: int) -> BoundResult:
    rule = "individual" if nu == 0 else "individual-noisy"
    return BoundResult(float((nu + 1) * n), rule, f"w_max={w_max}<=d+nu")


def first_step_bound(n: int, d: int, nu: int) -> BoundResult:
    """Bound for w_max = d+nu+1: min{(nu+1)n, sqrt((d+nu)(d+nu+1)n)}."""
    rule = "first-step" if nu == 0 else "first-step-noisy"
    root = math.sqrt((d + nu) * (d + nu + 1) * n)
    return BoundResult(min(float((nu + 1) * n), root), rule, f"w_max<={d + nu + 1}")


def ladder_bound(n: int, d: int, nu: int, l: int) -> BoundResult:
    """Bound for w_max = l*d+nu+1 with l >= 2, evaluated in the log domain.

    Raises DegenerateParameters where the expression is undefined or its
    hypotheses (d, l >= 2) fail.
    """
    if l < 2 or d < 2:
        raise DegenerateParameters(f"ladder bound needs d, l >= 2 (d={d}, l={l})")
    log_n = math.log(n)
    if nu == 0:
        # ((l-1)^(l+1)(d-1)^(l+1) / (2e^l(l-1)(d-1)^(l-1) + 1))^(1/(l+1)) n^(1/(l+1))
        log_num = (l + 1) * (math.log(l - 1) + math.log(d - 1))
        log_den = _logaddexp(math.log(2) + l + math.log(l - 1) + (l - 1) * math.log(d - 1), 0.0)
        log_value = (log_num - log_den + log_n) / (l + 1)
        rule = "ladder"
    else:
        # (2e^l/((d+nu)^2(l-1)^l) + 1/((l-1)(d-1)+nu)^(l+1))^(-1/(l+1)) n^(1/(l+1))
        a = math.log(2) + l - 2 * math.log(d + nu) - l * math.log(l - 1)
        b = -(l + 1) * math.log((l - 1) * (d - 1) + nu)
        log_value = (log_n - _logaddexp(a, b)) / (l + 1)
        rule = "ladder-noisy"
    return BoundResult(math.exp(log_value), rule, f"w_max<={l * d + nu + 1}")


def _logaddexp(a: float, b: float) -> float:
    hi, lo = max(a, b), min(a, b)
    return hi + math.log1p(math.exp(lo - hi))


def lb_sparse_codewords(n: int, d: int, nu: int, w_max: int) -> BoundResult:
    """Lower bound on t for (d, nu)-disjunct matrices with column weight <= w_max.

    Ladder level l covers weights up to l*d+nu+1 (level 0 is w <= d+nu).
    The admissible family only grows with w_max, so the bound used is the
    smallest over every level up to the first one covering w_max.  This keeps
    the result nonincreasing in w_max; the ladder formulas alone grow again
    for large l.  A level whose formula is undefined (d < 2) contributes
    nothing, leaving only the unrestricted floor.
    """
    _check_positive(n=n, d=d, w_max=w_max)
    if nu < 0:
        raise ValueError("nu must be >= 0")
    floor = lb_unrestricted(n, d)
    branch = individual_testing_bound(n, d, nu, w_max)
    if w_max > d + nu:
        branch = min(branch, first_step_bound(n, d, nu), key=lambda r: r.value)
        top = -(-(w_max - nu - 1) // d)
        for l in range(2, top + 1):
            try:
                level = ladder_bound(n, d, nu, l)
            except DegenerateParameters:
                branch = BoundResult(0.0, "degenerate", f"w_max<={l * d + nu + 1}")
                break
            if level.value < branch.value:
                branch = level
    return _max(branch, floor)


def lb_sparse_tests(n: int, d: int, nu: int, rho_max: int) -> BoundResult:
    """Lower bound on t for (d, nu)-disjunct matrices with row weight <= rho_max."""
    _check_positive(n=n, d=d, rho_max=rho_max)
    if nu < 0:
        raise ValueError("nu must be >= 0")
    if rho_max * (nu + 1) > d + nu + 1:
        branch = BoundResult((d + nu + 1) * n / rho_max, "row-sparse", f"rho_max={rho_max}")
    else:
        branch = BoundResult(float((nu + 1) * n), "row-sparse-individual", f"rho_max={rho_max}")
    return _max(branch, lb_unrestricted(n, d))


def smallest_field(t_q: int, k_q: int, n: int, limit: int = MAX_FIELD_SIZE) -> int | None:
    """Smallest prime power q with q >= t_q and q^k_q >= n."""
    q = max(t_q, 2)
    while q <= limit:
        q = next_prime_power(q, limit)
        if q is None:
            return None
        if q**k_q >= n:
            return q
        q += 1
    return None


def plan_sparse_codewords(n: int, d: int, nu: int, w_max: int) -> CodePlan:
    """Cheapest plan whose column weights stay within ``w_max``.

    Every ladder level l with l*d+nu+1 <= w_max is tried (t_q = l*d+nu+1,
    k_q = l+1) along with individual testing; the smallest t wins, ties
    going to the lower level.
    """
    if n < 2 or d < 1 or nu < 0 or w_max < 1:
        raise ValueError("need n >= 2, d >= 1, nu >= 0, w_max >= 1")
    best = identity_plan(n, d, nu)
    if w_max <= d + nu:
        return best
    for l in range(1, (w_max - nu - 1) // d + 1):
        t_q = l * d + nu + 1
        if t_q > MAX_FIELD_SIZE:
            break
        q = smallest_field(t_q, l + 1, n)
        if q is None:
            continue
        cand = ks_plan(q, l + 1, t_q, n, d=d, nu=nu)
        if cand.t < best.t:
            best = cand
    return best


def plan_sparse_tests(n: int, d: int, nu: int, rho_max: int) -> CodePlan:
    """Cheapest plan whose row weights stay within ``rho_max``."""
    if n < 2 or d < 1 or nu < 0 or rho_max < 1:
        raise ValueError("need n >= 2, d >= 1, nu >= 0, rho_max >= 1")
    best = identity_plan(n, d, nu)
    k_q = 2
    while 2 ** (k_q - 1) <= rho_max:
        t_q = (k_q - 1) * d + nu + 1
        if t_q > MAX_FIELD_SIZE:
            break
        q = smallest_field(t_q, k_q, n)
        if q is not None and q ** (k_q - 1) <= rho_max:
            cand = ks_plan(q, k_q, t_q, n, d=d, nu=nu)
            if cand.t < best.t:
                best = cand
        k_q += 1
    return best


def plan_list_decodable(n: int, d: int, nu: int, l: int = 1) -> CodePlan:
    """Kautz-Singleton plan sized for list-recovery decoding under nu errors.

    Uses t_q = l*d + (l+2)*nu + 1 and k_q = l+1.
    """
    if n < 2 or d < 1 or nu < 0 or l < 1:
        raise ValueError("need n >= 2, d >= 1, nu >= 0, l >= 1")
    t_q = l * d + (l + 2) * nu + 1
    q = smallest_field(t_q, l + 1, n)
    if q is None:
        raise ValueError(f"no field of size <= {MAX_FIELD_SIZE} fits t_q={t_q}, n={n}")
    return ks_plan(q, l + 1, t_q, n, d=d, nu=nu)


def matching_bound(plan: CodePlan, w_max: int | None = None, rho_max: int | None = None) -> BoundResult:
    """The lower bound for the regime a plan was made for."""
    if w_max is not None:
        return lb_sparse_codewords(plan.n, plan.d, plan.nu, w_max)
    if rho_max is not None:
        return lb_sparse_tests(plan.n, plan.d, plan.nu, rho_max)
    return lb_unrestricted(plan.n, plan.d)
