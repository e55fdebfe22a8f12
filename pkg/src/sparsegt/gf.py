"""Arithmetic over GF(q) for prime powers q up to 2**16.

Elements are plain integers in ``[0, q)``.  For an extension field
GF(p^m) the base-p digits of an element are its polynomial coefficients,
least significant digit first (digit i is the coefficient of x^i).
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DivisionByZero, NotPrimePower

MAX_FIELD_SIZE = 1 << 16


def factor_prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, m)`` with ``q == p**m``, or raise NotPrimePower."""
    if q < 2:
        raise NotPrimePower(f"{q} is not a prime power")
    p = None
    f = 2
    while f * f <= q:
        if q % f == 0:
            p = f
            break
        f += 1
    if p is None:
        return q, 1
    m = 0
    r = q
    while r % p == 0:
        r //= p
        m += 1
    if r != 1:
        raise NotPrimePower(f"{q} has at least two distinct prime factors")
    return p, m


def is_prime_power(q: int) -> bool:
    try:
        factor_prime_power(q)
    except NotPrimePower:
        return False
    return True


def next_prime_power(lo: int, limit: int = MAX_FIELD_SIZE) -> int | None:
    """Smallest prime power ``>= lo``, or None if it would exceed ``limit``."""
    q = max(lo, 2)
    while q <= limit:
        if is_prime_power(q):
            return q
        q += 1
    return None


def _digits(value: int, p: int, m: int) -> list[int]:
    out = []
    for _ in range(m):
        value, r = divmod(value, p)
        out.append(r)
    return out


def _from_digits(digits: Sequence[int], p: int) -> int:
    value = 0
    for c in reversed(digits):
        value = value * p + c
    return value


def _poly_rem(a: list[int], b: list[int], p: int) -> list[int]:
    """Remainder of a / b over GF(p); both low-first, b monic."""
    a = list(a)
    db = len(b) - 1
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k] % p
        if c:
            for i in range(db + 1):
                a[k - db + i] = (a[k - db + i] - c * b[i]) % p
    return a[:db]


def is_irreducible(coeffs: Sequence[int], p: int) -> bool:
    """Exhaustive divisor check for a monic polynomial over GF(p)."""
    m = len(coeffs) - 1
    if m <= 1:
        return m == 1
    for k in range(1, m // 2 + 1):
        for low in itertools.product(range(p), repeat=k):
            divisor = list(low) + [1]
            if not any(_poly_rem(list(coeffs), divisor, p)):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    q: int
    p: int
    m: int
    # low-first coefficients of the monic modulus, length m+1; empty for prime fields
    modulus: tuple[int, ...] = ()

    def __str__(self):
        if self.m == 1:
            return f"GF({self.q})"
        terms = []
        for i in range(self.m, -1, -1):
            c = self.modulus[i]
            if c == 0:
                continue
            mono = {0: "", 1: "x"}.get(i, f"x^{i}")
            coef = "" if c == 1 and mono else str(c)
            terms.append(coef + mono)
        return f"GF({self.q}) mod {' + '.join(terms)}"


@functools.lru_cache(maxsize=None)
def field_new(q: int) -> FieldSpec:
    """Describe GF(q), choosing the smallest monic irreducible modulus.

    Candidates are ordered by the integer whose base-p digits are their
    coefficients, i.e. lexicographically from the leading coefficient down.
    """
    if q > MAX_FIELD_SIZE:
        raise ValueError(f"field size {q} exceeds supported maximum {MAX_FIELD_SIZE}")
    p, m = factor_prime_power(q)
    if m == 1:
        return FieldSpec(q=q, p=p, m=1)
    for low in range(p**m):
        coeffs = _digits(low, p, m) + [1]
        if coeffs[0] == 0:
            continue  # divisible by x
        if is_irreducible(coeffs, p):
            return FieldSpec(q=q, p=p, m=m, modulus=tuple(coeffs))
    raise AssertionError(f"no irreducible polynomial of degree {m} over GF({p})")


def _clmul_mod(a: int, b: int, modulus: int, m: int) -> int:
    """Carry-less product of a and b reduced by a degree-m binary modulus."""
    prod = 0
    while b:
        if b & 1:
            prod ^= a
        a <<= 1
        b >>= 1
    for k in range(prod.bit_length() - 1, m - 1, -1):
        if prod >> k & 1:
            prod ^= modulus << (k - m)
    return prod


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


class GF:
    """Arithmetic bundle for one field.  Immutable once built."""

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.q = spec.q
        self.p = spec.p
        self.m = spec.m
        self._build_tables()

    def __repr__(self):
        return f"GF({self.q})"

    # -- construction helpers ------------------------------------------------

    def _slow_mul(self, a: int, b: int) -> int:
        p, m = self.p, self.m
        if m == 1:
            return a * b % p
        da, db = _digits(a, p, m), _digits(b, p, m)
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        return _from_digits(_poly_rem(prod, list(self.spec.modulus), p), p)

    def _slow_pow(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self._slow_mul(result, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return result

    def _find_generator(self) -> int:
        order = self.q - 1
        factors = _prime_factors(order)
        for g in range(2, self.q) if self.q > 2 else [1]:
            if all(self._slow_pow(g, order // r) != 1 for r in factors):
                return g
        return 1

    def _build_tables(self):
        q = self.q
        g = self._find_generator()
        self.generator = g
        exp = np.zeros(2 * (q - 1), dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        x = 1
        for k in range(q - 1):
            exp[k] = x
            log[x] = k
            x = self._mul_by_generator(x, g)
        exp[q - 1:] = exp[: q - 1]
        self._exp = exp
        self._log = log
        self._exp_list = exp.tolist()
        self._log_list = log.tolist()
        if self.m > 1 and self.p == 2:
            self._neg = None
        else:
            self._neg = [self._neg_slow(a) for a in range(q)]

    def _mul_by_generator(self, x: int, g: int) -> int:
        if self.m == 1:
            return x * g % self.p
        if self.p == 2:
            return _clmul_mod(x, g, _from_digits(self.spec.modulus, 2), self.m)
        return self._slow_mul(x, g)

    def _neg_slow(self, a: int) -> int:
        if self.m == 1:
            return -a % self.p
        return _from_digits([(-c) % self.p for c in _digits(a, self.p, self.m)], self.p)

    # -- element encoding ----------------------------------------------------

    def to_coeffs(self, a: int) -> list[int]:
        return _digits(a, self.p, self.m)

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) != self.m or any(not 0 <= c < self.p for c in coeffs):
            raise ValueError(f"expected {self.m} digits in [0, {self.p})")
        return _from_digits(coeffs, self.p)

    # -- scalar arithmetic ---------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        p = self.p
        out, scale = 0, 1
        while a or b:
            a, da = divmod(a, p)
            b, db = divmod(b, p)
            out += ((da + db) % p) * scale
            scale *= p
        return out

    def neg(self, a: int) -> int:
        return a if self._neg is None else self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.m == 1:
            return a * b % self.p
        return self._exp_list[self._log_list[a] + self._log_list[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("0 has no multiplicative inverse")
        return self._exp_list[(self.q - 1 - self._log_list[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise DivisionByZero("0 has no multiplicative inverse")
            return 1 if e == 0 else 0
        return self._exp_list[(self._log_list[a] * e) % (self.q - 1)]

    def poly_eval(self, coeffs: Sequence[int], x: int) -> int:
        """Evaluate a low-first coefficient list at x (Horner)."""
        acc = 0
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, x), c)
        return acc

    # -- vectorised arithmetic (numpy int arrays) ----------------------------

    def add_array(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.m == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        p = self.p
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        scale = 1
        for _ in range(self.m):
            out += ((a // scale % p + b // scale % p) % p) * scale
            scale *= p
        return out

    def mul_array(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.m == 1:
            return a * b % self.p
        out = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def sum_array(self, a, axis: int):
        """Field sum of ``a`` along ``axis``."""
        a = np.asarray(a, dtype=np.int64)
        if self.m == 1:
            return a.sum(axis=axis) % self.p
        if self.p == 2:
            return np.bitwise_xor.reduce(a, axis=axis)
        a = np.moveaxis(a, axis, 0)
        acc = a[0]
        for row in a[1:]:
            acc = self.add_array(acc, row)
        return acc

    def poly_eval_array(self, coeffs, x: int):
        """Evaluate many polynomials at one point.

        ``coeffs`` has shape (..., k), low-first along the last axis.
        """
        coeffs = np.asarray(coeffs, dtype=np.int64)
        acc = np.zeros(coeffs.shape[:-1], dtype=np.int64)
        for i in range(coeffs.shape[-1] - 1, -1, -1):
            acc = self.add_array(self.mul_array(acc, x), coeffs[..., i])
        return acc


@functools.lru_cache(maxsize=None)
def field_ops(spec: FieldSpec) -> GF:
    return GF(spec)


def gf(q: int) -> GF:
    """Shorthand for ``field_ops(field_new(q))``."""
    return field_ops(field_new(q))
