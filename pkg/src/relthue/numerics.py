"""Arbitrary-precision ball arithmetic and certified root isolation.

Balls carry an mpmath midpoint plus a nonnegative radius that is kept a
rigorous upper bound on the distance to the exact value: every operation
inflates the radius by the propagated input radii plus a rounding term.
Root isolation certifies each root in its own disk by interval-Newton
contraction; disks are pairwise disjoint on success.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath
from mpmath import mpc, mpf

from .qfield import IQField, IQInt, QFieldError

_GUARD = 24


class NumericsError(ValueError):
    pass


def mpf_to_fraction(x) -> Fraction:
    """Exact rational value of a finite mpf."""
    x = mpf(x)
    if not mpmath.isfinite(x):
        raise NumericsError(f"non-finite value {x}")
    sign, man, exp, _ = x._mpf_
    if man == 0:
        return Fraction(0)
    v = Fraction(man) * (Fraction(2) ** exp)
    return -v if sign else v


def _round_slack(mid, prec: int):
    return (abs(mid.real) + abs(mid.imag) + mpf(2) ** (-prec)) * mpf(2) ** (
        -prec + 4
    )


class RealBall:
    __slots__ = ("mid", "rad", "prec")

    def __init__(self, mid, rad=0, prec: int = 128):
        self.mid = mpf(mid)
        self.rad = mpf(rad)
        self.prec = prec
        if self.rad < 0:
            raise NumericsError("negative radius")

    def upper(self) -> Fraction:
        return mpf_to_fraction(self.mid) + mpf_to_fraction(self.rad)

    def lower(self) -> Fraction:
        return mpf_to_fraction(self.mid) - mpf_to_fraction(self.rad)

    def contains(self, value) -> bool:
        v = Fraction(value)
        return self.lower() <= v <= self.upper()

    def __float__(self):
        return float(self.mid)

    def __repr__(self):
        return f"RealBall({mpmath.nstr(self.mid, 12)} +/- {mpmath.nstr(self.rad, 3)})"


class ComplexBall:
    __slots__ = ("mid", "rad", "prec")

    def __init__(self, mid, rad=0, prec: int = 128):
        self.mid = mpc(mid)
        self.rad = mpf(rad)
        self.prec = prec
        if self.rad < 0:
            raise NumericsError("negative radius")

    # -- arithmetic ---------------------------------------------------------

    def _p(self, other):
        return max(self.prec, getattr(other, "prec", 0))

    def __add__(self, other):
        p = self._p(other)
        with mpmath.workprec(p + _GUARD):
            if isinstance(other, ComplexBall):
                mid = self.mid + other.mid
                rad = self.rad + other.rad
            else:
                mid = self.mid + mpc(other)
                rad = self.rad
            return ComplexBall(mid, rad + _round_slack(mid, p + _GUARD), p)

    def __sub__(self, other):
        p = self._p(other)
        with mpmath.workprec(p + _GUARD):
            if isinstance(other, ComplexBall):
                mid = self.mid - other.mid
                rad = self.rad + other.rad
            else:
                mid = self.mid - mpc(other)
                rad = self.rad
            return ComplexBall(mid, rad + _round_slack(mid, p + _GUARD), p)

    def __neg__(self):
        return ComplexBall(-self.mid, self.rad, self.prec)

    def __mul__(self, other):
        p = self._p(other)
        with mpmath.workprec(p + _GUARD):
            if isinstance(other, ComplexBall):
                mid = self.mid * other.mid
                rad = (
                    abs(self.mid) * other.rad
                    + abs(other.mid) * self.rad
                    + self.rad * other.rad
                )
            else:
                o = mpc(other)
                mid = self.mid * o
                rad = abs(o) * self.rad
            return ComplexBall(mid, rad + _round_slack(mid, p + _GUARD), p)

    __radd__ = __add__
    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, ComplexBall):
            other = ComplexBall(other, 0, self.prec)
        p = self._p(other)
        with mpmath.workprec(p + _GUARD):
            c = abs(other.mid)
            if c <= other.rad:
                raise NumericsError("division by a ball containing zero")
            inv_mid = 1 / other.mid
            inv_rad = other.rad / (c * (c - other.rad))
            inv = ComplexBall(inv_mid, inv_rad + _round_slack(inv_mid, p + _GUARD), p)
        return self * inv

    # -- geometry -----------------------------------------------------------

    def abs_upper(self) -> Fraction:
        with mpmath.workprec(self.prec + _GUARD):
            a = abs(self.mid) + self.rad
            a = a * (1 + mpf(2) ** (-self.prec - _GUARD + 4))
        return mpf_to_fraction(a)

    def abs_lower(self) -> Fraction:
        with mpmath.workprec(self.prec + _GUARD):
            a = abs(self.mid) - self.rad
            a = a * (1 - mpf(2) ** (-self.prec - _GUARD + 4))
        low = mpf_to_fraction(a)
        return low if low > 0 else Fraction(0)

    def contains_zero(self) -> bool:
        return self.abs_lower() == 0

    def dist_lower(self, other: "ComplexBall") -> Fraction:
        return (self - other).abs_lower()

    def __complex__(self):
        return complex(self.mid)

    def __repr__(self):
        return f"ComplexBall({mpmath.nstr(self.mid, 12)} +/- {mpmath.nstr(self.rad, 3)})"


# ---------------------------------------------------------------------------
# polynomials with IQInt coefficients


class RelPoly:
    """Monic polynomial over the ring of integers of an imaginary quadratic field.

    Coefficients are ascending: coeffs[k] multiplies z^k, coeffs[-1] == 1.
    """

    def __init__(self, coeffs, field: IQField):
        coeffs = [c if isinstance(c, IQInt) else field.element(c) for c in coeffs]
        if len(coeffs) < 3:
            raise NumericsError("degree must be at least 2")
        for c in coeffs:
            if c.field != field:
                raise QFieldError("coefficient field mismatch")
        if coeffs[-1] != field.one():
            raise NumericsError("polynomial must be monic")
        self.coeffs = coeffs
        self.field = field

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def derivative(self) -> list:
        return [self.coeffs[k] * k for k in range(1, len(self.coeffs))]

    def eval_exact(self, x: IQInt) -> IQInt:
        acc = self.field.zero()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def shifted(self, s: IQInt) -> "RelPoly":
        """The polynomial p(z + s), computed exactly by repeated division."""
        work = list(self.coeffs)
        n = self.degree
        out = []
        for _ in range(n + 1):
            # divide work by (z - (-s)) capturing the remainder: Horner at -(-s)=...
            rem = work[-1]
            new = [rem]
            for c in reversed(work[:-1]):
                rem = rem * s + c
                new.append(rem)
            out.append(rem)
            work = list(reversed(new))[1:]
            if not work:
                break
        while len(out) < n + 1:
            out.append(self.field.zero())
        return RelPoly(out, self.field)

    def is_binomial(self) -> bool:
        return all(c.is_zero() for c in self.coeffs[1:-1])

    def resultant_with_derivative(self) -> IQInt:
        return resultant(self.coeffs, self.derivative(), self.field)

    def is_squarefree(self) -> bool:
        return not self.resultant_with_derivative().is_zero()

    def discriminant(self) -> IQInt:
        n = self.degree
        res = self.resultant_with_derivative()
        sign = -1 if (n * (n - 1) // 2) % 2 else 1
        return res * sign

    def to_json(self) -> list:
        return [c.to_json() for c in self.coeffs]

    def __repr__(self):
        return f"RelPoly(deg={self.degree}, d={self.field.d})"


def _det_bareiss(m, field: IQField) -> IQInt:
    """Fraction-free determinant over Z_L (exact divisions are guaranteed)."""
    from .qfield import exact_div

    n = len(m)
    m = [row[:] for row in m]
    sign = 1
    prev = field.one()
    for k in range(n - 1):
        if m[k][k].is_zero():
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return field.zero()
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                q = exact_div(num, prev)
                assert q is not None
                m[i][j] = q
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return det if sign > 0 else -det


def resultant(p, q, field: IQField) -> IQInt:
    """Res_z(p, q) via the Sylvester determinant (ascending coefficient lists)."""
    dp = len(p) - 1
    dq = len(q) - 1
    if dp < 0 or dq < 0:
        raise NumericsError("resultant of empty polynomial")
    n = dp + dq
    zero = field.zero()
    rows = []
    pc = list(reversed(p))
    qc = list(reversed(q))
    for i in range(dq):
        rows.append([zero] * i + pc + [zero] * (n - i - dp - 1))
    for i in range(dp):
        rows.append([zero] * i + qc + [zero] * (n - i - dq - 1))
    return _det_bareiss(rows, field)


# ---------------------------------------------------------------------------
# root isolation


def _coeff_balls(p: RelPoly, prec: int) -> list:
    from .qfield import embed

    return [embed(c, prec) for c in p.coeffs]


def eval_ball(p: RelPoly, z: ComplexBall, prec: int = None) -> ComplexBall:
    """Horner evaluation with ball propagation; result contains the exact value."""
    prec = prec or z.prec
    cb = _coeff_balls(p, prec)
    acc = cb[-1]
    for c in reversed(cb[:-1]):
        acc = acc * z + c
    return acc


def _poly_eval_mid(coeff_mids, z):
    acc = coeff_mids[-1]
    for c in reversed(coeff_mids[:-1]):
        acc = acc * z + c
    return acc


def _initial_roots(p: RelPoly, work: int):
    """Root approximations at work bits (closed form for z^n + c0, else polyroots)."""
    with mpmath.workprec(work):
        cb = _coeff_balls(p, work)
        mids = [c.mid for c in cb]
        n = p.degree
        if p.is_binomial():
            target = -mids[0]
            if target == 0:
                raise NumericsError("degenerate polynomial")
            r = mpmath.root(abs(target), n)
            theta = mpmath.arg(target)
            return [
                r * mpmath.expjpi((theta / mpmath.pi + 2 * k) / n) for k in range(n)
            ]
        try:
            return mpmath.polyroots(
                list(reversed(mids)), maxsteps=200, extraprec=work // 2
            )
        except mpmath.libmp.NoConvergence as exc:
            raise _Escalate from exc


class _Escalate(Exception):
    pass


def _certify(p: RelPoly, approx, work: int):
    """Interval-Newton certification: one contracted disk per approximation."""
    n = p.degree
    cb = _coeff_balls(p, work)
    deriv = p.derivative()
    with mpmath.workprec(work):
        mids = [c.mid for c in cb]
        balls = []
        for z in approx:
            # Weierstrass correction sets the trial radius scale
            pz = _poly_eval_mid(mids, z)
            denom = mpmath.mpf(1)
            for z2 in approx:
                if z2 is not z:
                    denom *= z - z2
            if denom == 0:
                raise _Escalate
            r_try = 4 * n * abs(pz / denom) + mpf(2) ** (-work + 8) * (1 + abs(z))
            ball = None
            for _ in range(3):
                disk = ComplexBall(z, r_try, prec=work)
                dp = cb[-1] * n
                for k in range(n - 2, -1, -1):
                    dp = dp * disk + ComplexBall(mids[k + 1] * (k + 1), cb[k + 1].rad * (k + 1), prec=work)
                try:
                    delta = eval_ball(p, ComplexBall(z, 0, prec=work)) / dp
                except NumericsError:
                    raise _Escalate from None
                newton = ComplexBall(z, 0, prec=work) - delta
                shift = abs(newton.mid - z) + newton.rad
                if shift < r_try:
                    ball = newton
                    if newton.rad * 4 > r_try:
                        break
                    r_try = max(newton.rad * 4, mpf(2) ** (-work + 4) * (1 + abs(z)))
                    z = newton.mid
                else:
                    r_try *= 8
            if ball is None:
                raise _Escalate
            balls.append(ball)
        _ = deriv
        return balls


def complex_roots(p: RelPoly, precision: int = 1200) -> list:
    """All roots of p as pairwise disjoint certified balls.

    Deterministic order: by (real, imaginary) midpoint.  Radii are at most
    2^(-precision/2).  Non-squarefree input is rejected; insufficient
    precision escalates (x2, up to 4 times) before failing hard.
    """
    if not p.is_squarefree():
        raise NumericsError("degenerate polynomial (not squarefree)")
    target = Fraction(2) ** (-(precision // 2))
    work = max(precision, 64)
    for _ in range(5):
        try:
            approx = _initial_roots(p, work + 2 * _GUARD)
            balls = _certify(p, approx, work + 2 * _GUARD)
        except _Escalate:
            work *= 2
            continue
        ok = all(mpf_to_fraction(b.rad) <= target for b in balls)
        if ok:
            for i in range(len(balls)):
                for j in range(i + 1, len(balls)):
                    sep = balls[i].dist_lower(balls[j])
                    if sep <= 0:
                        ok = False
        if ok:
            balls.sort(key=lambda b: (b.mid.real, b.mid.imag))
            return balls
        work *= 2
    raise NumericsError(
        f"root isolation failed for {p!r} after 4 precision escalations"
    )
