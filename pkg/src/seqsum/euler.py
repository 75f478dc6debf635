"""The Euler series ``sum (-1)^m m! z^m`` and its Stieltjes function.

Partial sums, the Euler integral ``E(z) = int_0^inf exp(-t)/(1 + z t) dt`` and
four independent representations of the truncation error
``R_n(z) = E_n(z) - E(z)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .errors import CutError, DomainError, QuadratureError
from .numerics import (
    PrecisionContext,
    is_exact,
    on_cut,
    resolve,
    rounded,
    to_mp,
)
from .specfun import HALF_LINE, UNIT, exp_integral_e1, integrate

DIFFERENCE = "difference"
STIELTJES_INTEGRAL = "stieltjes_integral"
LAGUERRE_INTEGRAL = "laguerre_integral"
FACTORIAL_SERIES = "factorial_series"


def coefficient(m: int) -> int:
    """Exact Euler coefficient ``(-1)^m m!``."""
    if m < 0:
        raise DomainError("index must be nonnegative")
    return (-1) ** m * math.factorial(m)


def _check_off_cut(z):
    if on_cut(z):
        raise CutError("z lies on the cut (-inf, 0]")


@dataclass(frozen=True)
class EulerSeriesModel:
    """Coefficients, partial sums and reference value of the Euler series at ``z``.

    Parameters
    ----------
    z : number off the cut (-inf, 0]
    ctx : PrecisionContext, optional
    """

    z: object
    ctx: PrecisionContext = field(default=None)

    def __post_init__(self):
        _check_off_cut(self.z)
        object.__setattr__(self, "ctx", resolve(self.ctx))

    @staticmethod
    def coefficient(m: int) -> int:
        return coefficient(m)

    def partial_sums(self, count: int) -> list:
        """``[E_0(z), ..., E_{count-1}(z)]``."""
        return partial_sums(count - 1, self.z, self.ctx)

    def reference(self):
        """The Euler integral ``E(z)``."""
        return euler_integral(self.z, self.ctx)

    def remainder(self, n: int) -> "RemainderValue":
        return remainder_difference(n, self.z, self.ctx)


@dataclass(frozen=True)
class RemainderValue:
    """Truncation error ``R_n(z) = E_n(z) - E(z)`` in one representation.

    Attributes
    ----------
    n, z : index and argument
    value : the remainder
    representation : one of "difference", "stieltjes_integral",
        "laguerre_integral", "factorial_series"
    last_term : magnitude of the last factorial-series term (series only)
    terms : number of factorial-series terms summed (series only)
    flag : reason the value should not be trusted, or None
    """

    n: int
    z: object
    value: object
    representation: str
    last_term: object = None
    terms: int | None = None
    flag: str | None = None


def partial_sum(n: int, z, ctx: PrecisionContext | None = None):
    """``E_n(z) = sum_{m<=n} (-1)^m m! z^m``.

    Exact (int or Fraction) for exact ``z``; otherwise the sum is formed in
    exact arithmetic on the mpf value of ``z`` and rounded once.
    """
    return partial_sums(n, z, ctx)[-1]


def partial_sums(n: int, z, ctx: PrecisionContext | None = None) -> list:
    """``[E_0(z), ..., E_n(z)]``.

    For inexact ``z`` each sum is evaluated from the exact coefficients at a
    precision high enough that only the final rounding contributes error.
    """
    if n < 0:
        raise DomainError("n must be nonnegative")
    if is_exact(z):
        zf = Fraction(z)
        out, s, p = [], Fraction(0), Fraction(1)
        for m in range(n + 1):
            s += coefficient(m) * p
            p *= zf
            out.append(s if s.denominator != 1 else int(s))
        return out
    ctx = resolve(ctx)
    with ctx.workdps():
        zz = to_mp(z)
    # the terms grow like n! |z|^n; the sums are far smaller when |z| is small,
    # so carry enough digits to absorb the largest term
    with ctx.workdps():
        big = max(mpmath.log10(mpmath.factorial(m)) + m * mpmath.log10(abs(zz))
                  for m in range(n + 1)) if zz != 0 else 0
    extra = max(0, int(big)) + 10
    out = []
    with ctx.workdps(extra):
        s, p = mpmath.mpf(0), mpmath.mpf(1)
        for m in range(n + 1):
            s += coefficient(m) * p
            p *= zz
            out.append(s)
    return [rounded(v, ctx) for v in out]


def euler_integral(z, ctx: PrecisionContext | None = None, method: str = "quadrature"):
    """The Euler integral ``E(z) = int_0^inf exp(-t)/(1 + z t) dt``.

    Parameters
    ----------
    z : number off the cut (-inf, 0]
    method : {"quadrature", "e1"}
        ``"e1"`` uses ``E(z) = exp(1/z) E_1(1/z) / z`` instead of quadrature.
    """
    _check_off_cut(z)
    ctx = resolve(ctx)
    if method == "e1":
        with ctx.workdps():
            w = 1 / to_mp(z)
        e1 = exp_integral_e1(w, ctx.with_digits(ctx.digits + 5))
        with ctx.workdps():
            out = mpmath.exp(w) * e1 * w
        return rounded(out, ctx)
    if method != "quadrature":
        raise DomainError(f"unknown method {method!r}")

    def f(t):
        return mpmath.exp(-t) / (1 + to_mp(z) * t)

    return integrate(f, HALF_LINE, ctx)


def remainder_difference(n: int, z, ctx: PrecisionContext | None = None) -> RemainderValue:
    """``E_n(z) - E(z)`` from the partial sum and the Euler integral."""
    _check_off_cut(z)
    ctx = resolve(ctx)
    fine = ctx.with_digits(ctx.digits + 10)
    s = partial_sum(n, z, fine)
    e = euler_integral(z, fine)
    with ctx.workdps(20):
        out = to_mp(s) - e
    return RemainderValue(n, z, rounded(out, ctx), DIFFERENCE)


def remainder_stieltjes(n: int, z, ctx: PrecisionContext | None = None) -> RemainderValue:
    """``-(-z)^(n+1) int_0^inf t^(n+1) exp(-t)/(1 + z t) dt``."""
    _check_off_cut(z)
    ctx = resolve(ctx)

    def f(t):
        return t ** (n + 1) * mpmath.exp(-t) / (1 + to_mp(z) * t)

    val = integrate(f, HALF_LINE, ctx)
    with ctx.workdps():
        out = -(-to_mp(z)) ** (n + 1) * val
    return RemainderValue(n, z, rounded(out, ctx), STIELTJES_INTEGRAL)


def remainder_bound(n: int, z, ctx: PrecisionContext | None = None):
    """Bound on ``|R_n(z)|``: the first omitted term, widened off the right half plane.

    ``(n+1)! |z|^(n+1)`` for ``|arg z| <= pi/2``, else that times ``|cosec(arg z)|``.
    """
    return stieltjes_bound_from_moment(math.factorial(n + 1), n, z, ctx)


def stieltjes_bound_from_moment(moment, n: int, z, ctx: PrecisionContext | None = None):
    """``moment * |z|^(n+1)``, times ``|cosec(arg z)|`` when ``|arg z| > pi/2``."""
    ctx = resolve(ctx)
    if on_cut(z) and z != 0:
        raise CutError("arg z = pi is excluded")
    with ctx.workdps():
        zz = mpmath.mpc(to_mp(z))
        phi = mpmath.arg(zz)
        out = to_mp(moment) * abs(zz) ** (n + 1)
        if abs(phi) > mpmath.pi / 2 and not _is_right_boundary(z, phi):
            out = out / abs(mpmath.sin(phi))
    return rounded(out, ctx)


def _is_right_boundary(z, phi):
    # |arg z| = pi/2 exactly for purely imaginary inputs; guards rounding in arg
    zz = mpmath.mpc(to_mp(z))
    return zz.real == 0


def _normalizer(n: int, z):
    """``(-1)^(n+1) (n+1)! z^(n+1)``, the leading omitted term with sign."""
    return (-1) ** (n + 1) * math.factorial(n + 1) * to_mp(z) ** (n + 1)


def remainder_laguerre_integral(n: int, z, ctx: PrecisionContext | None = None) -> RemainderValue:
    """Remainder from ``-(1/z) int_0^1 exp(-(1-t)/(z t)) t^n dt`` times the leading term.

    The integrand vanishes to all orders at ``t = 0`` only when ``Re(1/z) > 0``;
    otherwise the value is still attempted but flagged.
    """
    _check_off_cut(z)
    ctx = resolve(ctx)
    with ctx.workdps():
        decays = mpmath.re(1 / mpmath.mpc(to_mp(z))) > 0

    def f(t):
        zz = to_mp(z)
        return mpmath.exp(-(1 - t) / (zz * t)) * t ** n

    flag = None if decays else "Re(1/z) <= 0: integrand does not decay at t = 0"
    try:
        val = integrate(f, UNIT, ctx)
    except QuadratureError as exc:
        if flag is None:
            raise
        raise QuadratureError(f"{flag}; {exc}", value=exc.value, estimate=exc.estimate) from exc
    with ctx.workdps():
        zz = to_mp(z)
        out = _normalizer(n, zz) * (-val / zz)
    return RemainderValue(n, z, rounded(out, ctx), LAGUERRE_INTEGRAL, flag=flag)


def factorial_series_coefficients(count: int, z, ctx: PrecisionContext | None = None) -> list:
    """``b_k = L_k^(-1)(1/z) / z`` for ``k < count`` by upward Laguerre recurrence."""
    ctx = resolve(ctx)
    with ctx.workdps():
        zz = to_mp(z)
        x = 1 / zz
        out = []
        prev, cur = mpmath.mpf(0), mpmath.mpf(1)
        for k in range(count):
            out.append(cur / zz)
            # (k+1) L_{k+1} = (2k - x) L_k - (k - 1) L_{k-1}   (alpha = -1)
            prev, cur = cur, ((2 * k - x) * cur - (k - 1) * prev) / (k + 1)
    return out


def remainder_factorial_series(n: int, z, terms: int,
                               ctx: PrecisionContext | None = None) -> RemainderValue:
    """Remainder from a truncated factorial series in the index ``n + 1``.

    ``R_n(z) = (-1)^(n+1) (n+1)! z^(n+1) * [-sum_{k<terms} b_k k!/(n+1)_{k+1}]``
    with ``b_k = L_k^(-1)(1/z)/z``.  Convergence is slow (algebraic in
    ``terms``); the magnitude of the last term is reported so callers can judge.
    """
    if terms < 1:
        raise DomainError("terms must be >= 1")
    return _factorial_series(n, z, ctx, max_terms=terms, tol=None)


def remainder_factorial_series_until(n: int, z, tol, max_terms: int = 100_000,
                                     ctx: PrecisionContext | None = None,
                                     window: int = 20) -> RemainderValue:
    """Sum the factorial series until ``window`` consecutive normalized terms are below ``tol``.

    Requiring a run of small terms keeps an isolated near-zero term of the
    oscillating series from stopping the sum early.  When ``max_terms`` is
    reached first, the returned value carries a flag.
    """
    return _factorial_series(n, z, ctx, max_terms=max_terms, tol=tol, window=window)


def _factorial_series(n, z, ctx, max_terms, tol, window=20):
    _check_off_cut(z)
    ctx = resolve(ctx)
    with ctx.workdps():
        zz = to_mp(z)
        x = 1 / zz
        tol_mp = None if tol is None else to_mp(tol)
        total = mpmath.mpf(0)
        prev, cur = mpmath.mpf(0), mpmath.mpf(1)  # L_{-1}, L_0 (alpha = -1)
        ratio = 1 / mpmath.mpf(n + 1)  # k!/(n+1)_{k+1} at k = 0
        run = 0
        last = mpmath.mpf(0)
        k = 0
        flag = None
        while True:
            term = -(cur / zz) * ratio
            total += term
            last = abs(term)
            k += 1
            if tol_mp is not None:
                run = run + 1 if last < tol_mp else 0
                if run >= window:
                    break
            if k >= max_terms:
                if tol_mp is not None:
                    flag = f"term budget {max_terms} exhausted before terms fell below {tol}"
                break
            j = k - 1
            prev, cur = cur, ((2 * j - x) * cur - (j - 1) * prev) / (j + 1)
            ratio = ratio * k / (n + k + 1)
        out = _normalizer(n, zz) * total
        last_scaled = last
    return RemainderValue(n, z, rounded(out, ctx), FACTORIAL_SERIES,
                          last_term=rounded(last_scaled, ctx), terms=k, flag=flag)


def optimal_truncation_index(z) -> int:
    """Index of the smallest term ``m! |z|^m`` for real ``0 < z < 1`` (direct search)."""
    zz = Fraction(z) if is_exact(z) else z
    best_m, best = 0, None
    m = 0
    term = Fraction(1) if is_exact(z) else mpmath.mpf(1)
    while True:
        if best is None or term < best:
            best, best_m = term, m
        elif term > best:
            return best_m
        m += 1
        term = term * m * zz
        if m > 10_000:
            return best_m
