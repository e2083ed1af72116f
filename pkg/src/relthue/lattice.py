"""Exact integer LLL reduction for the tiny, huge-entry lattices of the solver.

Dimensions here are at most 6 while entries run to thousands of digits, so
the classic all-integer variant (de Weger / Cohen) is used: Gram-Schmidt
data is carried as integers d_i, lambda_ij, and every division is exact.
No floating point enters the reduction, which removes precision bugs at
the cost that only small dimensions are practical.
"""

from __future__ import annotations

import math
from fractions import Fraction


class LatticeError(ValueError):
    pass


def _int_det(rows) -> int:
    """Fraction-free (Bareiss) determinant of an integer matrix."""
    n = len(rows)
    m = [[int(v) for v in row] for row in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


class LatticeBasis:
    """Square integer matrix whose rows generate a full-rank lattice."""

    def __init__(self, rows):
        rows = [[int(v) for v in row] for row in rows]
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise LatticeError("basis must be a nonempty square matrix")
        self.rows = rows
        if _int_det(rows) == 0:
            raise LatticeError("rank deficient")

    @property
    def dim(self) -> int:
        return len(self.rows)

    def det(self) -> int:
        return _int_det(self.rows)

    def first_vector_norm_sq(self) -> int:
        return sum(v * v for v in self.rows[0])

    def __eq__(self, other):
        return isinstance(other, LatticeBasis) and self.rows == other.rows

    def __repr__(self):
        return f"LatticeBasis(dim={self.dim})"


def _round_div(a: int, b: int) -> int:
    """Nearest integer to a/b for b > 0, ties toward +infinity."""
    return (2 * a + b) // (2 * b)


def lll_reduce(basis: LatticeBasis, delta: Fraction = Fraction(99, 100)) -> LatticeBasis:
    """LLL-reduce with parameter delta in (1/4, 1); all arithmetic exact."""
    delta = Fraction(delta)
    if not Fraction(1, 4) < delta < 1:
        raise LatticeError(f"delta must lie in (1/4, 1), got {delta}")
    p, q = delta.numerator, delta.denominator

    n = basis.dim
    b = [row[:] for row in basis.rows]
    lam = [[0] * n for _ in range(n)]
    d = [0] * (n + 1)
    d[0] = 1

    def init_row(i):
        for j in range(i + 1):
            u = sum(b[i][t] * b[j][t] for t in range(n))
            for l in range(j):
                u = (d[l + 1] * u - lam[i][l] * lam[j][l]) // d[l]
            if j < i:
                lam[i][j] = u
            else:
                if u == 0:
                    raise LatticeError("rank deficient")
                d[i + 1] = u

    for i in range(n):
        init_row(i)

    def reduce_step(i, j):
        if 2 * abs(lam[i][j]) > d[j + 1]:
            r = _round_div(lam[i][j], d[j + 1])
            for t in range(n):
                b[i][t] -= r * b[j][t]
            lam[i][j] -= r * d[j + 1]
            for l in range(j):
                lam[i][l] -= r * lam[j][l]

    def swap_step(i):
        b[i - 1], b[i] = b[i], b[i - 1]
        for j in range(i - 1):
            lam[i - 1][j], lam[i][j] = lam[i][j], lam[i - 1][j]
        lmbd = lam[i][i - 1]
        new_d = (d[i - 1] * d[i + 1] + lmbd * lmbd) // d[i]
        for k in range(i + 1, n):
            t = lam[k][i]
            lam[k][i] = (d[i + 1] * lam[k][i - 1] - lmbd * t) // d[i]
            lam[k][i - 1] = (new_d * t + lmbd * lam[k][i]) // d[i + 1]
        d[i] = new_d

    kk = 1
    while kk < n:
        reduce_step(kk, kk - 1)
        if q * d[kk - 1] * d[kk + 1] < p * d[kk] * d[kk] - q * lam[kk][kk - 1] ** 2:
            swap_step(kk)
            kk = max(kk - 1, 1)
        else:
            for j in range(kk - 2, -1, -1):
                reduce_step(kk, j)
            kk += 1

    return LatticeBasis(b)


def sqrt_fraction_lower(x: Fraction) -> Fraction:
    """A rational lower bound for sqrt(x), tight to ~2^-64 relative."""
    x = Fraction(x)
    if x <= 0:
        return Fraction(0)
    scale = 1 << 64
    num = x.numerator * x.denominator * scale * scale
    return Fraction(math.isqrt(num), x.denominator * scale)


def sqrt_fraction_upper(x: Fraction) -> Fraction:
    x = Fraction(x)
    if x <= 0:
        return Fraction(0)
    scale = 1 << 64
    num = x.numerator * x.denominator * scale * scale
    return Fraction(math.isqrt(num) + 1, x.denominator * scale)


def first_vector_lower_bound(reduced: LatticeBasis, delta: Fraction = Fraction(99, 100)) -> Fraction:
    """Rational L with lambda_1(lattice) >= L, from |b1| of a delta-LLL basis.

    Uses |b1| <= (delta - 1/4)^(-(k-1)/2) * lambda_1.
    """
    delta = Fraction(delta)
    k = reduced.dim
    alpha = delta - Fraction(1, 4)
    l_sq = Fraction(reduced.first_vector_norm_sq()) * alpha ** (k - 1)
    return sqrt_fraction_lower(l_sq)


# ---------------------------------------------------------------------------
# exact rational Gram-Schmidt, used to assert the LLL conditions in tests


def gram_schmidt_rational(rows):
    """Return (B*, mu) over exact rationals for the given integer rows."""
    n = len(rows)
    star = []
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        v = [Fraction(x) for x in rows[i]]
        for j in range(i):
            sj = star[j]
            denom = sum(x * x for x in sj)
            mu[i][j] = sum(Fraction(rows[i][t]) * sj[t] for t in range(n)) / denom
            v = [v[t] - mu[i][j] * sj[t] for t in range(n)]
        star.append(v)
    return star, mu


def lll_conditions_hold(basis: LatticeBasis, delta: Fraction = Fraction(99, 100)) -> bool:
    """Exact check of size reduction and the Lovasz condition."""
    delta = Fraction(delta)
    star, mu = gram_schmidt_rational(basis.rows)
    n = basis.dim
    norms = [sum(x * x for x in s) for s in star]
    for i in range(n):
        for j in range(i):
            if abs(mu[i][j]) > Fraction(1, 2):
                return False
    for i in range(1, n):
        if norms[i] < (delta - mu[i][i - 1] ** 2) * norms[i - 1]:
            return False
    return True
