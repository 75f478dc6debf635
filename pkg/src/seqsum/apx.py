"""Stieltjes-series and factorial-series machinery.

Hankel determinants of moment sequences, the Stieltjes truncation bound,
and factorial series ``Omega(z) = sum_v b_v v!/(z)_{v+1}`` with their
difference and integral representations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import mpmath

from .errors import DomainError
from .euler import factorial_series_coefficients, stieltjes_bound_from_moment
from .numerics import PrecisionContext, is_exact, resolve, rounded, to_mp
from .pade import bareiss_det
from .specfun import UNIT, integrate, horner


@dataclass(frozen=True)
class MomentSequence:
    """Moments ``mu_n`` from a generator ``n -> mu_n``."""

    generator: Callable[[int], object]
    name: str = ""

    def __call__(self, n: int):
        if n < 0:
            raise DomainError("moment index must be nonnegative")
        return self.generator(n)

    def values(self, count: int) -> list:
        return [self(n) for n in range(count)]


EULER_MOMENTS = MomentSequence(math.factorial, "euler")


def hankel_determinant(mu: MomentSequence, k: int, n: int):
    """``H_k(mu_n) = det(mu_{n+i+j})_{i,j<k}``, exact for exact moments.

    ``H_0 = 1``; the largest moment used is ``mu_{n+2k-2}``.
    """
    if k < 0 or n < 0:
        raise DomainError("k and n must be nonnegative")
    if k == 0:
        return 1
    return bareiss_det([[mu(n + i + j) for j in range(k)] for i in range(k)])


def stieltjes_truncation_bound(mu: MomentSequence, n: int, z, ctx: PrecisionContext | None = None):
    """Bound on ``|R_n(z)|``: ``mu_{n+1} |z|^(n+1)``, times ``|cosec(arg z)|`` for ``|arg z| > pi/2``."""
    return stieltjes_bound_from_moment(mu(n + 1), n, z, ctx)


# ---------------------------------------------------------------------------
# Factorial series
# ---------------------------------------------------------------------------


def _check_poles(z, count: int):
    """Raise for ``z`` in ``{0, -1, ..., -(count-1)}``, the zeros of ``(z)_count``."""
    if is_exact(z):
        zf = Fraction(z)
        if zf.denominator == 1 and -(count - 1) <= zf <= 0:
            raise DomainError(f"z = {z} is a pole of the factorial series terms")
        return
    zz = to_mp(z)
    if mpmath.im(zz) == 0 and mpmath.isint(mpmath.re(zz)) and -(count - 1) <= mpmath.re(zz) <= 0:
        raise DomainError(f"z = {z} is a pole of the factorial series terms")


def _rf(z, m: int):
    """Rising factorial ``(z)_m``; exact for exact ``z``."""
    if is_exact(z):
        out = Fraction(1)
        for i in range(m):
            out *= Fraction(z) + i
        return out
    return mpmath.rf(to_mp(z), m)


def factorial_term(v: int, z):
    """``v!/(z)_{v+1}``, equal to ``B(z, v+1)``."""
    return math.factorial(v) / _rf(z, v + 1)


@dataclass(frozen=True)
class FactorialSeries:
    """Truncated factorial series with coefficients ``b`` at argument ``z``.

    Evaluation uses the terms ``b_v v!/(z)_{v+1}``.
    """

    b: tuple
    z: object

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(self.b))
        if not self.b:
            raise DomainError("need at least one coefficient")

    def shifted(self, k: int) -> "FactorialSeries":
        """Coefficients ``b^(k)`` with ``b^(k)_v = b_{v-k}`` (zero for ``v < k``)."""
        return FactorialSeries((0,) * k + self.b, self.z)

    def at(self, z) -> "FactorialSeries":
        return FactorialSeries(self.b, z)

    def phi(self, t):
        """``phi(t) = sum_v b_v (1-t)^v`` for the stored coefficients."""
        return horner(list(self.b), 1 - t)


def euler_remainder_series(n: int, z0, terms: int, ctx: PrecisionContext | None = None) -> FactorialSeries:
    """Factorial series in the variable ``n + 1`` with Euler coefficients ``b_k = L_k^(-1)(1/z0)/z0``.

    ``R_n(z0) = (-1)^n (n+1)! z0^(n+1) * Omega(n+1)``.
    """
    return FactorialSeries(factorial_series_coefficients(terms, z0, ctx), n + 1)


def factorial_series_eval(f: FactorialSeries, terms: int | None = None,
                          ctx: PrecisionContext | None = None):
    """``sum_{v<terms} b_v v!/(z)_{v+1}``; exact for exact coefficients and ``z``.

    Raises
    ------
    DomainError
        If ``z`` is a pole ``0, -1, ..., -(terms-1)`` or ``terms < 1``.
    """
    terms = len(f.b) if terms is None else terms
    if terms < 1:
        raise DomainError("terms must be >= 1")
    _check_poles(f.z, terms)
    b = [f.b[v] if v < len(f.b) else 0 for v in range(terms)]
    if is_exact(f.z) and all(is_exact(c) for c in b):
        total, poch = Fraction(0), Fraction(1)
        zf = Fraction(f.z)
        for v in range(terms):
            poch *= zf + v
            total += b[v] * math.factorial(v) / poch
        return total
    ctx = resolve(ctx)
    with ctx.workdps():
        zz = to_mp(f.z)
        total = mpmath.mpf(0)
        term = 1 / zz  # v!/(z)_{v+1} at v = 0
        for v in range(terms):
            total += to_mp(b[v]) * term
            term = term * (v + 1) / (zz + v + 1)
    return rounded(total, ctx)


def factorial_series_eval_beta(f: FactorialSeries, terms: int | None = None,
                               ctx: PrecisionContext | None = None):
    """Same sum written as ``sum_v b_v B(z, v+1)`` with mpmath's beta function."""
    terms = len(f.b) if terms is None else terms
    _check_poles(f.z, terms)
    ctx = resolve(ctx)
    with ctx.workdps():
        zz = to_mp(f.z)
        total = mpmath.fsum(to_mp(f.b[v]) * mpmath.beta(zz, v + 1)
                            for v in range(min(terms, len(f.b))))
    return rounded(total, ctx)


def delta_k_factorial_identity(k: int, n: int, z, ctx: PrecisionContext | None = None):
    """Both sides of ``Delta^k [n!/(z)_{n+1}] = (-1)^k (n+k)!/(z)_{n+k+1}``.

    ``Delta`` is the forward difference in ``z``, ``Delta g(z) = g(z+1) - g(z)``;
    the left side is the explicit binomial sum.  Exact for exact ``z``.

    Returns
    -------
    (lhs, rhs)
    """
    if k < 0 or n < 0:
        raise DomainError("k and n must be nonnegative")
    _check_poles(z, n + k + 1)
    if is_exact(z):
        zf = Fraction(z)
        lhs = sum((-1) ** (k - j) * math.comb(k, j) * factorial_term(n, zf + j) for j in range(k + 1))
        rhs = (-1) ** k * factorial_term(n + k, zf)
        return lhs, rhs
    ctx = resolve(ctx)
    with ctx.workdps(k):
        zz = to_mp(z)
        lhs = mpmath.fsum((-1) ** (k - j) * math.comb(k, j) * factorial_term(n, zz + j)
                          for j in range(k + 1))
        rhs = (-1) ** k * factorial_term(n + k, zz)
    return rounded(lhs, ctx), rounded(rhs, ctx)


def delta_k_factorial_series(f: FactorialSeries, k: int, ctx: PrecisionContext | None = None):
    """``Delta^k Omega(z)`` of a truncated series by explicit differencing in ``z``."""
    if is_exact(f.z) and all(is_exact(c) for c in f.b):
        zf = Fraction(f.z)
        return sum((-1) ** (k - j) * math.comb(k, j) * factorial_series_eval(f.at(zf + j))
                   for j in range(k + 1))
    ctx = resolve(ctx)
    work = ctx.with_digits(ctx.digits + k)
    vals = [factorial_series_eval(f.at(to_mp(f.z) + j), ctx=work) for j in range(k + 1)]
    with work.workdps():
        out = mpmath.fsum((-1) ** (k - j) * math.comb(k, j) * vals[j] for j in range(k + 1))
    return rounded(out, ctx)


def shifted_series_value(f: FactorialSeries, k: int, ctx: PrecisionContext | None = None):
    """``(-1)^k sum_v b^(k)_v v!/(z)_{v+1}``, the term-shifted form of ``Delta^k Omega``."""
    val = factorial_series_eval(f.shifted(k), ctx=ctx)
    return (-1) ** k * val


def factorial_series_integral_rep(f: FactorialSeries, ctx: PrecisionContext | None = None):
    """``int_0^1 t^(z-1) phi(t) dt`` with the truncated ``phi(t) = sum_v b_v (1-t)^v``.

    The endpoint behaviour ``t^(z-1)`` for ``Re(z) < 1`` is absorbed by the
    double-exponential node clustering.
    """
    ctx = resolve(ctx)
    with ctx.workdps():
        if mpmath.re(to_mp(f.z)) <= 0:
            raise DomainError("the integral representation needs Re(z) > 0")

    def integrand(t):
        coeffs = [to_mp(c) for c in f.b]
        return t ** (to_mp(f.z) - 1) * horner(coeffs, 1 - t)

    return integrate(integrand, UNIT, ctx)


def hankel_positive_range(mu: MomentSequence, max_index: int) -> list:
    """All ``(k, n)`` with ``k >= 1`` and ``n + 2k - 2 <= max_index`` where ``H_k(mu_n) <= 0``."""
    bad = []
    for k in range(1, max_index // 2 + 2):
        for n in range(0, max_index - 2 * k + 3):
            if hankel_determinant(mu, k, n) <= 0:
                bad.append((k, n))
    return bad
