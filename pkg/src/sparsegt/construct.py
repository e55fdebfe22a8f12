"""Matrix constructions: Kautz-Singleton, repeated identity, random constant weight."""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, fields, replace

import numpy as np

from .errors import BlockLengthExceedsField, TooManyColumns, WeightExceedsLength
from .gf import GF, FieldSpec, field_new, field_ops
from .matrix import CodeMatrix


class Kind(str, enum.Enum):
    KAUTZ_SINGLETON = "KautzSingleton"
    IDENTITY_STACK = "IdentityStack"
    RANDOM_CONSTANT_WEIGHT = "RandomConstantWeight"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class CodePlan:
    """Resolved parameters tying a constraint regime to a concrete matrix.

    ``q``, ``k_q`` and ``t_q`` only apply to Kautz-Singleton plans; ``seed``
    only to random plans.  ``l`` is the multiplicity level (0 for plans not
    built from the Reed-Solomon ladder).
    """

    kind: Kind
    n: int
    d: int
    nu: int
    t: int
    w: int
    rho_bound: int
    l: int = 0
    q: int | None = None
    k_q: int | None = None
    t_q: int | None = None
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.kind is Kind.KAUTZ_SINGLETON:
            if None in (self.q, self.k_q, self.t_q):
                raise ValueError("Kautz-Singleton plan needs q, k_q and t_q")
            if not (self.t_q <= self.q and self.k_q >= 1 and self.n <= self.q**self.k_q):
                raise ValueError("inconsistent Kautz-Singleton parameters")
            if self.t != self.q * self.t_q or self.w != self.t_q:
                raise ValueError("Kautz-Singleton plan needs t = q*t_q and w = t_q")
        elif self.kind is Kind.IDENTITY_STACK:
            if self.t != (self.nu + 1) * self.n or self.w != self.nu + 1:
                raise ValueError("identity stack needs t = (nu+1)n and w = nu+1")

    def to_meta(self) -> dict[str, str]:
        return {k: str(v) for k, v in asdict(self).items() if v is not None}

    @classmethod
    def from_meta(cls, meta: dict[str, str]) -> "CodePlan":
        kwargs = {}
        for f in fields(cls):
            if f.name in meta:
                kwargs[f.name] = meta[f.name] if f.name == "kind" else int(meta[f.name])
        return cls(**kwargs)

    def describe(self) -> str:
        return " ".join(f"{k}={v}" for k, v in self.to_meta().items())


def ks_plan(q: int, k_q: int, t_q: int, n: int, d: int | None = None, nu: int = 0) -> CodePlan:
    """Plan for an explicit Kautz-Singleton parameter choice.

    When ``d`` is omitted, the disjunctness the construction guarantees
    (with ``nu`` noise margin) is filled in.
    """
    if d is None:
        d = (t_q - 1 - nu) // (k_q - 1) if k_q > 1 else n - 1
    return CodePlan(
        kind=Kind.KAUTZ_SINGLETON, n=n, d=d, nu=nu, t=q * t_q, w=t_q,
        rho_bound=q ** (k_q - 1), l=k_q - 1, q=q, k_q=k_q, t_q=t_q,
    )


def identity_plan(n: int, d: int, nu: int) -> CodePlan:
    return CodePlan(kind=Kind.IDENTITY_STACK, n=n, d=d, nu=nu, t=(nu + 1) * n, w=nu + 1, rho_bound=1)


def ks_symbols(field: GF, k_q: int, t_q: int, n: int) -> np.ndarray:
    """Outer Reed-Solomon codewords as an (n, t_q) array of symbols.

    Column ``j`` carries the polynomial whose coefficients are the base-q
    digits of ``j`` (digit i multiplies x^i), evaluated at the field elements
    with indices ``0 .. t_q-1``.
    """
    q = field.q
    if t_q > q:
        raise BlockLengthExceedsField(f"t_q={t_q} exceeds field size q={q}")
    if k_q < 1:
        raise ValueError("k_q must be at least 1")
    if n > q**k_q:
        raise TooManyColumns(f"n={n} exceeds q^k_q={q**k_q}")
    j = np.arange(n, dtype=np.int64)
    coeffs = np.stack([(j // q**i) % q for i in range(k_q)], axis=1)
    return np.stack([field.poly_eval_array(coeffs, x) for x in range(t_q)], axis=1)


def ks_build(spec: FieldSpec | GF | int, k_q: int, t_q: int, n: int) -> CodeMatrix:
    """Kautz-Singleton matrix: Reed-Solomon outer code, identity inner code."""
    if isinstance(spec, int):
        spec = field_new(spec)
    field = spec if isinstance(spec, GF) else field_ops(spec)
    q = field.q
    symbols = ks_symbols(field, k_q, t_q, n)
    dense = np.zeros((q * t_q, n), dtype=bool)
    rows = symbols + q * np.arange(t_q)[None, :]
    dense[rows.ravel(), np.repeat(np.arange(n), t_q)] = True
    return CodeMatrix.from_dense(dense)


def identity_stack(n: int, nu: int) -> CodeMatrix:
    """``nu+1`` vertically stacked n x n identities."""
    if n < 1 or nu < 0:
        raise ValueError("need n >= 1 and nu >= 0")
    cols = []
    for j in range(n):
        c = 0
        for b in range(nu + 1):
            c |= 1 << (b * n + j)
        cols.append(c)
    return CodeMatrix((nu + 1) * n, n, cols)


def random_constant_weight(t: int, n: int, w: int, seed=0) -> CodeMatrix:
    """Columns drawn independently and uniformly from the weight-``w`` vectors.

    Each column is a partial Fisher-Yates shuffle of ``range(t)``; the first
    ``w`` positions give its support.
    """
    if w > t:
        raise WeightExceedsLength(f"w={w} exceeds t={t}")
    if w < 0 or n < 1:
        raise ValueError("need w >= 0 and n >= 1")
    rng = np.random.default_rng(seed)
    draws = rng.integers(np.zeros(w, dtype=np.int64), t - np.arange(w), size=(n, w))
    cols = []
    for j in range(n):
        perm = list(range(t))
        col = 0
        for k in range(w):
            r = k + int(draws[j, k])
            perm[k], perm[r] = perm[r], perm[k]
            col |= 1 << perm[k]
        cols.append(col)
    return CodeMatrix(t, n, cols)


def random_plan(n: int, d: int, nu: int, alpha: float, c: float, seed: int = 0) -> CodePlan:
    """Parameters t = ceil(c(d+nu)n^(1-alpha)), w = ceil(c(d+nu))."""
    t = math.ceil(c * (d + nu) * n ** (1 - alpha))
    w = math.ceil(c * (d + nu))
    rho = math.ceil(2 * n**alpha)
    return CodePlan(kind=Kind.RANDOM_CONSTANT_WEIGHT, n=n, d=d, nu=nu, t=t, w=w, rho_bound=rho, seed=seed)


def search_random_disjunct(
    n: int, d: int, nu: int, alpha: float, c: float, seed: int = 0, retries: int = 5, **verify_kwargs
) -> tuple[CodeMatrix, CodePlan, int]:
    """Draw random constant-weight matrices until one verifies (d, nu)-disjunct.

    Attempt ``a`` uses seed ``seed + a``; the returned plan records the seed
    that succeeded so ``build(plan)`` reproduces the matrix.  Also returns
    the 1-based attempt number.  Raises RuntimeError when every attempt fails.
    """
    from .verify import disjunct_exact

    plan = random_plan(n, d, nu, alpha, c, seed)
    for attempt in range(retries):
        m = random_constant_weight(plan.t, n, plan.w, seed=seed + attempt)
        if disjunct_exact(m, d, nu, **verify_kwargs).is_disjunct:
            found = replace(plan, rho_bound=max(m.row_weights()), seed=seed + attempt)
            return m, found, attempt + 1
    raise RuntimeError(f"no ({d},{nu})-disjunct matrix found in {retries} attempts")


def build(plan: CodePlan, seed=None) -> CodeMatrix:
    """Materialise the matrix a plan describes."""
    if plan.kind is Kind.KAUTZ_SINGLETON:
        return ks_build(field_new(plan.q), plan.k_q, plan.t_q, plan.n)
    if plan.kind is Kind.IDENTITY_STACK:
        return identity_stack(plan.n, plan.nu)
    s = plan.seed if seed is None else seed
    return random_constant_weight(plan.t, plan.n, plan.w, seed=0 if s is None else s)
