"""Transformation errors of delta and Pade summation of the Euler series.

Direct errors (approximant minus Euler integral), closed-form error
representations, location of denominator zeros, and leading-order
asymptotic estimates of the convergence rates.

Conventions used throughout, with ``alpha = 1/z``:

* delta error, exact:
  ``delta_k^(n) - E = (-z)^n (n+1)! * I_k^(n)(z) / 2F2(-k, k+n; n+1, n+2; -1/z)``
  where ``I_k^(n)(z) = int_0^1 t^n exp(-(1-t)/(z t)) 2F1(-k, k+n; n+1; t) dt``.
* delta numerator asymptotics describe the symmetric form
  ``X_k(z) = int_{-1}^{1} exp(-2 alpha/(1+x)) 2F1(-k, k; 1; (1+x)/2) dx``
  ``= 2 exp(-alpha) I_k^(0)(z)``, so that
  ``delta_k^(0) - E = exp(alpha) X_k / (2 * 2F2)``.
* Pade error, exact:
  ``[k+n/k] - E = (-z)^n (k+1)_{n+1} k! U(k+1, -n, 1/z) / L_k^(n+1)(-1/z)``.
"""

from __future__ import annotations

import functools
import math
import statistics
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

from .errors import CutError, DegenerateError, DomainError, QuadratureError, SeqSumError
from .euler import euler_integral, partial_sums
from .numerics import (
    GUARD_DIGITS,
    PrecisionContext,
    is_exact,
    on_cut,
    resolve,
    rounded,
    to_complex,
    to_mp,
)
from .pade import pade_euler_closed_form
from .specfun import (
    HALF_LINE,
    UNIT,
    TerminatingHyp,
    horner,
    hyp_terminating,
    hyp_terminating_terms,
    integrate,
    kummer_u_scaled,
    laguerre,
    laguerre_coefficients,
)
from .transforms import d_variant, delta_variant, drummond_delta_s

DELTA = "delta"
PADE = "pade"
LEVIN_D = "levin_d"
DRUMMOND = "drummond"
METHODS = (DELTA, PADE, LEVIN_D, DRUMMOND)


@dataclass(frozen=True)
class ErrorRecord:
    """One point of an error sweep.

    ``observed`` is always present; ``closed_form`` and ``asymptotic`` are
    None where not defined or not computable, with the reason in ``status``.
    """

    method: str
    k: int
    n: int
    z: object
    observed: object
    closed_form: object = None
    asymptotic: object = None
    status: str = "ok"


def _check_z(z):
    if on_cut(z):
        raise CutError("z lies on the cut (-inf, 0]")


def _fine(ctx: PrecisionContext, k: int) -> PrecisionContext:
    """Working context for order-``k`` quantities: binomial sums lose about ``k`` digits."""
    return ctx.with_digits(max(ctx.digits, 2 * k + 30) + GUARD_DIGITS)


def _key(z):
    if is_exact(z):
        return z
    zc = to_complex(z)
    return (zc.real, zc.imag)


@functools.lru_cache(maxsize=64)
def _euler_cached(key, digits: int):
    if not isinstance(key, tuple):
        z = key
    elif key[1] == 0:
        z = key[0]
    else:
        # rebuild without rounding either part
        bits = max(53, key[0]._mpf_[3], key[1]._mpf_[3])
        with mpmath.workprec(bits):
            z = mpmath.mpc(*key)
    return euler_integral(z, PrecisionContext(digits))


def euler_value(z, ctx: PrecisionContext):
    """``E(z)`` to at least ``ctx.digits``, cached on a 25-digit grid of precisions."""
    digits = -(-ctx.digits // 25) * 25
    return rounded(_euler_cached(_key(z), digits), ctx)


def reference_value(z, ctx: PrecisionContext):
    """Euler integral at ``z`` with a few extra digits."""
    return euler_value(z, ctx.with_digits(ctx.digits + GUARD_DIGITS))


# ---------------------------------------------------------------------------
# Direct errors
# ---------------------------------------------------------------------------


def approximant(method: str, k: int, n: int, z, ctx: PrecisionContext | None = None):
    """Value of the order-``k`` approximant built from ``E_n(z), E_{n+1}(z), ...``.

    ``delta``, ``levin_d`` and ``drummond`` use ``omega_m = Delta E_m``;
    ``pade`` is ``[k+n/k]``.
    """
    ctx = resolve(ctx)
    _check_z(z)
    if method == PADE:
        return pade_euler_closed_form(k, n, z, _fine(ctx, k))
    fine = _fine(ctx, k)
    s = partial_sums(n + k + 1, z, fine)[n:]
    if method == DELTA:
        return delta_variant(1, k, n, s, fine)
    if method == LEVIN_D:
        return d_variant(1, k, n, s, fine)
    if method == DRUMMOND:
        return drummond_delta_s(k, n, s, fine)
    raise DomainError(f"unknown method {method!r}")


def transformation_error(method: str, k: int, n: int, z, ctx: PrecisionContext | None = None,
                         reference=None):
    """``approximant - E(z)``; pass ``reference`` to reuse a precomputed ``E(z)``."""
    ctx = resolve(ctx)
    fine = _fine(ctx, k)
    value = approximant(method, k, n, z, ctx)
    e = reference if reference is not None else euler_integral(z, fine)
    with fine.workdps():
        out = to_mp(value) - to_mp(e)
    return rounded(out, ctx)


def delta_error_direct(k: int, n: int, z, ctx: PrecisionContext | None = None):
    """``delta_k^(n)(1, E_n(z)) - E(z)`` from the transformed partial sums."""
    if k < 1:
        raise DomainError("k must be >= 1")
    return transformation_error(DELTA, k, n, z, ctx)


def pade_error_direct(k: int, n: int, z, ctx: PrecisionContext | None = None):
    """``[k+n/k](z) - E(z)`` from the closed-form Pade approximant."""
    return transformation_error(PADE, k, n, z, ctx)


# ---------------------------------------------------------------------------
# Delta: closed form
# ---------------------------------------------------------------------------


def _mp_coefficients(coeffs: Sequence[Fraction]):
    """Per-precision cache of Fraction coefficients converted to mpf."""
    cache = {}

    def get():
        prec = mpmath.mp.prec
        if prec not in cache:
            cache[prec] = [mpmath.mpf(c.numerator) / c.denominator for c in coeffs]
        return cache[prec]

    return get


def hyp2f1_coefficients(k: int, n: int) -> list:
    """Exact power coefficients of ``2F1(-k, k+n; n+1; t)``."""
    return hyp_terminating_terms(TerminatingHyp((-k, k + n), (n + 1,), 0))


def delta_denominator_coefficients(k: int, n: int) -> list:
    """Exact coefficients ``c_j`` of ``2F2(-k, k+n; n+1, n+2; -1/z) = sum_j c_j (1/z)^j``.

    All ``c_j`` are positive.
    """
    terms = hyp_terminating_terms(TerminatingHyp((-k, k + n), (n + 1, n + 2), 0))
    return [(-1) ** j * c for j, c in enumerate(terms)]


UNIT_PATH = "unit"
RAY_PATH = "ray"
MOMENTS_PATH = "moments"


def closed_form_path(z) -> str:
    """Integration path used by :func:`delta_numerator_integral` for ``path="auto"``.

    The unit-interval form is used when ``Re(1/z) >= |1/z|/10``, where its
    integrand decays fast at ``t = 0``; otherwise the rotated ray.
    """
    with mpmath.workdps(30):
        w = 1 / to_complex(z)
        return UNIT_PATH if mpmath.re(w) >= abs(w) / 10 else RAY_PATH


def delta_numerator_integral(k: int, n: int, z, ctx: PrecisionContext | None = None,
                             path: str = "auto"):
    """``I_k^(n)(z) = int_0^1 t^n exp(-(1-t)/(z t)) 2F1(-k, k+n; n+1; t) dt``.

    Parameters
    ----------
    path : {"auto", "unit", "ray", "moments"}
        ``"unit"`` integrates over ``t`` in (0, 1) and needs ``Re(1/z) > 0``.
        ``"ray"`` substitutes ``t = 1/(1 + z s)``, ``s`` in (0, inf), giving
        ``int_0^inf exp(-s) t^(n+2) 2F1(...; t) z ds``, the analytic
        continuation to the whole plane off the cut.  ``"moments"`` expands
        the polynomial and uses a recurrence for the monomial integrals; it
        is much faster but not independent of the Euler integral.

    Notes
    -----
    The polynomial loses about ``0.77 k`` digits to cancellation, which the
    quadrature covers with extra working digits.
    """
    _check_z(z)
    ctx = resolve(ctx)
    if path == "auto":
        path = closed_form_path(z)
    coeffs = _mp_coefficients(hyp2f1_coefficients(k, n))
    extra = int(0.77 * k) + 5
    if path == UNIT_PATH:
        def f(t):
            zz = to_mp(z)
            return t ** n * mpmath.exp(-(1 - t) / (zz * t)) * horner(coeffs(), t)

        return integrate(f, UNIT, ctx, extra_digits=extra)
    if path == RAY_PATH:
        def g(s):
            zz = to_mp(z)
            t = 1 / (1 + zz * s)
            return mpmath.exp(-s) * t ** (n + 2) * horner(coeffs(), t) * zz

        return integrate(g, HALF_LINE, ctx, extra_digits=extra)
    if path == MOMENTS_PATH:
        return _numerator_from_moments(k, n, z, ctx)
    raise DomainError(f"unknown path {path!r}")


def _numerator_from_moments(k: int, n: int, z, ctx: PrecisionContext):
    """``I_k^(n)`` as ``sum_j c_j M_{n+j}`` with ``M_m = int_0^inf exp(-u/z) (1+u)^(-m-2) du``.

    Integration by parts gives ``M_m = (1 - M_{m-1}/z)/(m+1)`` from
    ``M_{-1} = z E(z)``; the coefficient sum cancels about ``0.77 k`` digits.
    """
    coeffs = hyp2f1_coefficients(k, n)
    work = ctx.with_digits(ctx.digits + int(0.77 * k) + GUARD_DIGITS)
    e = euler_value(z, work)
    with work.workdps():
        zz = to_mp(z)
        alpha = 1 / zz
        m_prev = zz * to_mp(e)
        moments = []
        for m in range(n + k + 1):
            m_prev = (1 - alpha * m_prev) / (m + 1)
            moments.append(m_prev)
        total = mpmath.fsum(to_mp(c) * moments[n + j] for j, c in enumerate(coeffs))
    return rounded(total, ctx)


def delta_numerator_symmetric(k: int, z, ctx: PrecisionContext | None = None):
    """``X_k(z) = 2 exp(-1/z) I_k^(0)(z)``, the numerator targeted by the asymptotics."""
    ctx = resolve(ctx)
    i = delta_numerator_integral(k, 0, z, ctx.with_digits(ctx.digits + 5))
    with ctx.workdps():
        out = 2 * mpmath.exp(-1 / to_mp(z)) * i
    return rounded(out, ctx)


def delta_denominator_value(k: int, n: int, z, ctx: PrecisionContext | None = None):
    """``2F2(-k, k+n; n+1, n+2; -1/z)``."""
    _check_z(z)
    ctx = resolve(ctx)
    if is_exact(z):
        return hyp_terminating(TerminatingHyp((-k, k + n), (n + 1, n + 2), -1 / Fraction(z)))
    with ctx.workdps():
        w = -1 / to_mp(z)
    return hyp_terminating(TerminatingHyp((-k, k + n), (n + 1, n + 2), w), ctx)


def closed_form_decays(z) -> bool:
    """True when ``Re(1/z) > 0`` so the closed-form integrand decays at ``t = 0``."""
    with mpmath.workdps(30):
        return mpmath.re(1 / to_complex(z)) > 0


def delta_error_closed(k: int, n: int, z, ctx: PrecisionContext | None = None,
                       path: str = "auto"):
    """Closed-form delta error ``(-z)^n (n+1)! I_k^(n)(z) / 2F2(-k, k+n; n+1, n+2; -1/z)``.

    ``path`` selects the integral representation (see
    :func:`delta_numerator_integral`); away from ``Re(1/z) > 0`` the default
    switches to the continued form and :func:`error_record` flags it.

    Raises
    ------
    DegenerateError
        If the 2F2 denominator cancels below ``10^(5-digits)`` of its largest term.
    QuadratureError
        If the integral does not converge, e.g. ``path="unit"`` with ``Re(1/z) <= 0``.
    """
    if k < 1:
        raise DomainError("k must be >= 1")
    _check_z(z)
    ctx = resolve(ctx)
    work = ctx.with_digits(ctx.digits + GUARD_DIGITS)
    try:
        i = delta_numerator_integral(k, n, z, work, path=path)
    except QuadratureError as exc:
        if not closed_form_decays(z):
            raise QuadratureError(f"Re(1/z) <= 0, integrand does not decay: {exc}",
                                  value=exc.value, estimate=exc.estimate) from exc
        raise
    d = delta_denominator_value(k, n, z, work)
    with work.workdps():
        dd = to_mp(d)
        coeffs = delta_denominator_coefficients(k, n)
        w = abs(1 / to_complex(z))
        biggest = max(abs(to_mp(c)) * w ** j for j, c in enumerate(coeffs))
        if abs(dd) <= mpmath.mpf(10) ** (5 - ctx.digits) * biggest:
            raise DegenerateError("2F2 denominator vanishes to working precision")
        out = (-to_mp(z)) ** n * math.factorial(n + 1) * i / dd
    return rounded(out, ctx)


# ---------------------------------------------------------------------------
# Denominator zeros
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DenominatorZeros:
    """Zeros in ``z`` of an approximant denominator.

    Attributes
    ----------
    coefficients : exact coefficients of the polynomial that was solved
    variable : description of the polynomial variable
    zeros : zeros in the ``z`` plane
    max_rel_imag : largest ``|Im z_i| / |z_i|``
    all_real_negative : every zero has negligible imaginary part and negative real part
    """

    coefficients: tuple
    variable: str
    zeros: tuple
    max_rel_imag: object
    all_real_negative: bool


def polynomial_roots(coeffs: Sequence, ctx: PrecisionContext | None = None) -> list:
    """Roots of ``sum_j coeffs[j] x^j`` as companion-matrix eigenvalues.

    Eigenvalues are computed at twice the working precision and then polished
    by Newton steps on the exact coefficients.
    """
    ctx = resolve(ctx)
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    deg = len(coeffs) - 1
    if deg < 1:
        return []
    with mpmath.workdps(2 * ctx.digits + GUARD_DIGITS):
        cs = [to_mp(c) for c in coeffs]
        lead = cs[-1]
        if deg == 1:
            roots = [-cs[0] / cs[1]]
        else:
            comp = mpmath.zeros(deg, deg)
            for i in range(1, deg):
                comp[i, i - 1] = 1
            for i in range(deg):
                comp[i, deg - 1] = -cs[i] / lead
            try:
                roots = list(mpmath.eig(comp, left=False, right=False))
            except Exception as exc:  # mpmath raises plain exceptions on non-convergence
                raise SeqSumError(f"root finding did not converge: {exc}") from exc
        dcs = [j * cs[j] for j in range(1, deg + 1)]
        polished = []
        for r in roots:
            x = mpmath.mpc(r)
            for _ in range(8):
                d = horner(dcs, x)
                if d == 0:
                    break
                step = horner(cs, x) / d
                x -= step
                if abs(step) <= mpmath.eps * abs(x):
                    break
            polished.append(x)
    return [rounded(r, ctx.with_digits(2 * ctx.digits)) for r in polished]


def _classify(zeros, ctx):
    with mpmath.workdps(2 * ctx.digits):
        thresh = mpmath.mpf(10) ** (-(ctx.digits // 2))
        rel = [abs(mpmath.im(z)) / abs(z) for z in zeros]
        worst = max(rel) if rel else mpmath.mpf(0)
        ok = all(r <= thresh and mpmath.re(z) < 0 for r, z in zip(rel, zeros))
    return worst, ok


def delta_denominator_poly(k: int, n: int, ctx: PrecisionContext | None = None) -> DenominatorZeros:
    """Zeros of ``2F2(-k, k+n; n+1, n+2; -1/z)`` as a polynomial in ``w = 1/z``."""
    if k < 1:
        raise DomainError("k must be >= 1")
    ctx = resolve(ctx)
    coeffs = delta_denominator_coefficients(k, n)
    w_roots = polynomial_roots(coeffs, ctx)
    with mpmath.workdps(2 * ctx.digits):
        zeros = [1 / w for w in w_roots]
    worst, ok = _classify(zeros, ctx)
    return DenominatorZeros(tuple(coeffs), "w = 1/z", tuple(zeros), worst, ok)


def pade_denominator_zeros(k: int, n: int, ctx: PrecisionContext | None = None) -> DenominatorZeros:
    """Poles of ``[k+n/k]`` from the zeros ``x_i > 0`` of ``L_k^(n+1)(x)``, ``z_i = -1/x_i``."""
    if k < 1:
        raise DomainError("k must be >= 1")
    ctx = resolve(ctx)
    coeffs = laguerre_coefficients(k, n + 1)
    x_roots = polynomial_roots(coeffs, ctx)
    with mpmath.workdps(2 * ctx.digits):
        zeros = [-1 / x for x in x_roots]
    worst, ok = _classify(zeros, ctx)
    return DenominatorZeros(tuple(coeffs), "x = -1/z", tuple(zeros), worst, ok)


# ---------------------------------------------------------------------------
# Delta: asymptotics
# ---------------------------------------------------------------------------


def _cbrt(z):
    return mpmath.power(to_complex(z), mpmath.mpf(1) / 3)


def _maybe_real(x, z):
    """Drop a vanishing imaginary part when ``z`` is real positive."""
    zc = to_complex(z)
    if zc.imag == 0 and zc.real > 0:
        return mpmath.re(x)
    return x


def delta_error_asymptotic(k: int, z, ctx: PrecisionContext | None = None):
    """Leading-order delta error for ``n = 0``.

    ``(4 pi/z) exp(1/z) exp(-9 k^(2/3) / (2 z^(1/3))) cos(3^(3/2) k^(2/3) / (2 z^(1/3)) + pi/6)``
    with principal ``z^(1/3)``.
    """
    if k < 1:
        raise DomainError("k must be >= 1")
    ctx = resolve(ctx)
    with ctx.workdps():
        zz = to_complex(z)
        c = _cbrt(zz)
        k23 = mpmath.mpf(k) ** (mpmath.mpf(2) / 3)
        out = (4 * mpmath.pi / zz * mpmath.exp(1 / zz) * mpmath.exp(-9 * k23 / (2 * c))
               * mpmath.cos(3 * mpmath.sqrt(3) * k23 / (2 * c) + mpmath.pi / 6))
        out = _maybe_real(out, z)
    return rounded(out, ctx)


def delta_error_envelope(k: int, z, ctx: PrecisionContext | None = None):
    """Modulus of the non-oscillating factor of :func:`delta_error_asymptotic`."""
    ctx = resolve(ctx)
    with ctx.workdps():
        zz = to_complex(z)
        c = _cbrt(zz)
        k23 = mpmath.mpf(k) ** (mpmath.mpf(2) / 3)
        out = abs(4 * mpmath.pi / zz * mpmath.exp(1 / zz) * mpmath.exp(-9 * k23 / (2 * c)))
    return rounded(out, ctx)


def delta_numerator_asymptotic(k: int, z, ctx: PrecisionContext | None = None):
    """Leading-order approximation of the symmetric numerator ``X_k(z)``.

    ``4/(sqrt(3) z^(1/3) k^(4/3)) exp(-1/(3z) - 3 k^(2/3)/(2 z^(1/3))) cos(3^(3/2) k^(2/3)/(2 z^(1/3)) + pi/6)``
    """
    ctx = resolve(ctx)
    with ctx.workdps():
        zz = to_complex(z)
        c = _cbrt(zz)
        kk = mpmath.mpf(k)
        k23 = kk ** (mpmath.mpf(2) / 3)
        out = (4 / (mpmath.sqrt(3) * c * kk ** (mpmath.mpf(4) / 3))
               * mpmath.exp(-1 / (3 * zz) - 3 * k23 / (2 * c))
               * mpmath.cos(3 * mpmath.sqrt(3) * k23 / (2 * c) + mpmath.pi / 6))
        out = _maybe_real(out, z)
    return rounded(out, ctx)


def delta_denominator_asymptotic(k: int, z, ctx: PrecisionContext | None = None):
    """Leading-order ``2F2(-k, k; 1, 2; -1/z)``.

    ``(z/k^2)^(2/3) / (2 pi sqrt(3)) * exp(3 k^(2/3) / z^(1/3) - 1/(3z))``
    """
    ctx = resolve(ctx)
    with ctx.workdps():
        zz = to_complex(z)
        c = _cbrt(zz)
        kk = mpmath.mpf(k)
        out = (mpmath.power(zz / kk ** 2, mpmath.mpf(2) / 3) / (2 * mpmath.pi * mpmath.sqrt(3))
               * mpmath.exp(3 * kk ** (mpmath.mpf(2) / 3) / c - 1 / (3 * zz)))
        out = _maybe_real(out, z)
    return rounded(out, ctx)


def delta_error_from_parts(k: int, z, ctx: PrecisionContext | None = None):
    """``exp(1/z) X_k / (2 * 2F2)`` with both factors replaced by their asymptotics."""
    ctx = resolve(ctx)
    work = ctx.with_digits(ctx.digits + 5)
    num = delta_numerator_asymptotic(k, z, work)
    den = delta_denominator_asymptotic(k, z, work)
    with ctx.workdps():
        out = mpmath.exp(1 / to_complex(z)) * num / (2 * den)
        out = _maybe_real(out, z)
    return rounded(out, ctx)


def hyp2f1_oscillatory_asym(k: int, x, ctx: PrecisionContext | None = None):
    """Leading-order ``2F1(-k, k; 1; (1+x)/2)`` for ``-1 < x < 1``.

    ``(-1)^k / sqrt(pi k) * ((1-x)/(1+x))^(1/4) * cos(k arccos(x) + pi/4)``
    """
    ctx = resolve(ctx)
    with ctx.workdps():
        xx = to_mp(x)
        if isinstance(xx, mpmath.mpc) or not (-1 < xx < 1):
            raise DomainError("x must satisfy -1 < x < 1")
        out = ((-1) ** k / mpmath.sqrt(mpmath.pi * k)
               * ((1 - xx) / (1 + xx)) ** (mpmath.mpf(1) / 4)
               * mpmath.cos(k * mpmath.acos(xx) + mpmath.pi / 4))
    return rounded(out, ctx)


@dataclass(frozen=True)
class SaddleData:
    """Saddle-point data for the large-``k`` numerator integral, ``alpha = 1/z``.

    ``f(tau) = 3/2 log(tau) - alpha tau^2 + 2ik arctan(tau)``, ``g(tau) = (1+tau^2)^-2``.
    Leading-order values ``tau0 ~ (k/alpha)^(1/3) e^(i pi/6)``, ``tau3 ~ 3i/(4k)``,
    ``f0 ~ i(k+1/4)pi + log(k/alpha)/2 + 2 alpha/3 - 3 k^(2/3) (-alpha)^(1/3)``,
    ``f0'' ~ -6 alpha`` and ``g0 ~ (ik/alpha)^(-4/3)``.  ``tau0_exact`` is the
    root of ``4 alpha tau^4 + (4 alpha - 3) tau^2 - 4ik tau + 3`` nearest ``tau0``.
    """

    tau0: object
    tau3: object
    f0: object
    f0pp: object
    g0: object
    tau0_exact: object = None

    def numerator_estimate(self, k: int, alpha):
        """``4 (-1)^k (2/k)^(1/2) exp(-alpha) Re{exp(i pi/4) g0 exp(f0) (-f0'')^(-1/2)}``."""
        return (4 * (-1) ** k * mpmath.sqrt(mpmath.mpf(2) / k) * mpmath.exp(-alpha)
                * mpmath.re(mpmath.expjpi(mpmath.mpf(1) / 4) * self.g0 * mpmath.exp(self.f0)
                            / mpmath.sqrt(-self.f0pp)))


def saddle_data(k: int, z, ctx: PrecisionContext | None = None) -> SaddleData:
    """Leading-order saddle data plus the exact dominant saddle (see :class:`SaddleData`)."""
    ctx = resolve(ctx)
    with ctx.workdps():
        alpha = 1 / to_complex(z)
        alpha = _maybe_real(alpha, z)
        kk = mpmath.mpf(k)
        third = mpmath.mpf(1) / 3
        tau0 = mpmath.power(kk / alpha, third) * mpmath.expjpi(mpmath.mpf(1) / 6)
        tau3 = 3j / (4 * kk)
        f0 = (1j * (kk + mpmath.mpf(1) / 4) * mpmath.pi + mpmath.log(kk / alpha) / 2
              + 2 * alpha / 3 - 3 * kk ** (2 * third) * mpmath.power(-mpmath.mpc(alpha), third))
        f0pp = -6 * alpha
        g0 = mpmath.power(1j * kk / alpha, -4 * third)
        quartic = [3, -4j * kk, 4 * alpha - 3, 0, 4 * alpha]
    roots = polynomial_roots(quartic, ctx)
    with ctx.workdps():
        exact = min(roots, key=lambda r: abs(r - tau0))
    return SaddleData(*(rounded(v, ctx) for v in (tau0, tau3, f0, f0pp, g0, exact)))


# ---------------------------------------------------------------------------
# Pade: closed form and asymptotics
# ---------------------------------------------------------------------------


def pade_error_closed(k: int, n: int, z, ctx: PrecisionContext | None = None):
    """``(-z)^n (k+1)_{n+1} k! U(k+1, -n, 1/z) / L_k^(n+1)(-1/z)``.

    Raises
    ------
    DegenerateError
        If the Laguerre denominator is below ``10^(5-digits)`` in modulus.
    """
    if k < 0 or n < 0:
        raise DomainError("k and n must be nonnegative")
    _check_z(z)
    ctx = resolve(ctx)
    work = ctx.with_digits(ctx.digits + GUARD_DIGITS)
    u = kummer_u_scaled(k, n, z, work)
    with work.workdps():
        x = -1 / to_mp(z)
    lag = laguerre(k, n + 1, x, work)
    with work.workdps():
        if abs(lag) <= mpmath.mpf(10) ** (5 - ctx.digits):
            raise DegenerateError("Laguerre denominator vanishes to working precision")
        out = (-to_mp(z)) ** n * mpmath.rf(k + 1, n + 1) * u / lag
    return rounded(out, ctx)


def pade_error_closed_hyperu(k: int, n: int, z, ctx: PrecisionContext | None = None):
    """Same error via ``(-1)^n (k+1)_{n+1} k! U(k+n+2, n+2, 1/z) / (z L_k^(n+1)(-1/z))``.

    Uses mpmath's confluent hypergeometric ``U`` as an independent oracle.
    """
    ctx = resolve(ctx)
    work = ctx.with_digits(ctx.digits + GUARD_DIGITS)
    with work.workdps():
        zz = to_mp(z)
        u = mpmath.hyperu(k + n + 2, n + 2, 1 / zz)
        lag = laguerre(k, n + 1, -1 / zz, work)
        out = (-1) ** n * mpmath.rf(k + 1, n + 1) * mpmath.factorial(k) * u / (zz * lag)
    return rounded(out, ctx)


def pade_error_asymptotic(k: int, n: int, z, ctx: PrecisionContext | None = None):
    """``(-1)^n (2 pi/z) exp(1/z) exp(-4 sqrt(k/z))`` with principal ``z^(1/2)``."""
    if k < 1:
        raise DomainError("k must be >= 1")
    ctx = resolve(ctx)
    with ctx.workdps():
        zz = to_complex(z)
        out = ((-1) ** n * 2 * mpmath.pi / zz * mpmath.exp(1 / zz)
               * mpmath.exp(-4 * mpmath.sqrt(mpmath.mpf(k)) / mpmath.sqrt(zz)))
        out = _maybe_real(out, z)
    return rounded(out, ctx)


def pade_laguerre_asymptotic(k: int, n: int, z, ctx: PrecisionContext | None = None):
    """Leading-order ``L_k^(n+1)(-1/z) ~ (z/pi)^(1/2)/2 exp(-1/(2z) + 2 sqrt(k/z)) (zk)^((2n+1)/4)``."""
    ctx = resolve(ctx)
    with ctx.workdps():
        zz = to_complex(z)
        kk = mpmath.mpf(k)
        out = (mpmath.sqrt(zz / mpmath.pi) / 2
               * mpmath.exp(-1 / (2 * zz) + 2 * mpmath.sqrt(kk) / mpmath.sqrt(zz))
               * mpmath.power(zz * kk, mpmath.mpf(2 * n + 1) / 4))
        out = _maybe_real(out, z)
    return rounded(out, ctx)


def pade_denominator_asymptotic(k: int, n: int, z, ctx: PrecisionContext | None = None):
    """Leading-order ``L_k^(n+1)(-1/z)/(k+1)_{n+1} ~ exp(-1/(2z) + 2 sqrt(k/z)) (z/k)^((2n+3)/4) / (2 sqrt(pi))``."""
    ctx = resolve(ctx)
    with ctx.workdps():
        zz = to_complex(z)
        kk = mpmath.mpf(k)
        out = (mpmath.exp(-1 / (2 * zz) + 2 * mpmath.sqrt(kk) / mpmath.sqrt(zz))
               * mpmath.power(zz / kk, mpmath.mpf(2 * n + 3) / 4) / (2 * mpmath.sqrt(mpmath.pi)))
        out = _maybe_real(out, z)
    return rounded(out, ctx)


def pade_numerator_bessel(k: int, n: int, z, ctx: PrecisionContext | None = None):
    """``k! U(k+1, -n, 1/z) ~ 2 exp(1/(2z)) (zk)^(-(n+1)/2) K_{n+1}(2 sqrt(k/z))``.

    Replacing ``K`` by its leading exponential term gives
    :func:`pade_numerator_asymptotic`.
    """
    ctx = resolve(ctx)
    with ctx.workdps():
        zz = to_complex(z)
        kk = mpmath.mpf(k)
        out = (2 * mpmath.exp(1 / (2 * zz))
               * mpmath.power(zz * kk, -mpmath.mpf(n + 1) / 2)
               * mpmath.besselk(n + 1, 2 * mpmath.sqrt(kk / zz)))
        out = _maybe_real(out, z)
    return rounded(out, ctx)


def pade_numerator_asymptotic(k: int, n: int, z, ctx: PrecisionContext | None = None):
    """``k! U(k+1, -n, 1/z) ~ sqrt(pi) exp(1/(2z) - 2 sqrt(k/z)) z^(-(2n+1)/4) k^(-(2n+3)/4)``."""
    ctx = resolve(ctx)
    with ctx.workdps():
        zz = to_complex(z)
        kk = mpmath.mpf(k)
        out = (mpmath.sqrt(mpmath.pi)
               * mpmath.exp(1 / (2 * zz) - 2 * mpmath.sqrt(kk) / mpmath.sqrt(zz))
               * mpmath.power(zz, -mpmath.mpf(2 * n + 1) / 4) * kk ** (-mpmath.mpf(2 * n + 3) / 4))
        out = _maybe_real(out, z)
    return rounded(out, ctx)


# ---------------------------------------------------------------------------
# Rates and superiority
# ---------------------------------------------------------------------------


def envelope_maxima(ks: Sequence[int], values: Sequence) -> list:
    """Indices ``i`` where ``|values[i]|`` is a strict local maximum over its neighbours."""
    mags = [abs(v) for v in values]
    out = []
    for i in range(1, len(mags) - 1):
        if mags[i] > mags[i - 1] and mags[i] >= mags[i + 1]:
            out.append(i)
    return out


def sign_changes(ks: Sequence[int], values: Sequence) -> list:
    """Midpoints ``(k_i + k_{i+1})/2`` where the real part changes sign."""
    out = []
    for i in range(len(values) - 1):
        a, b = mpmath.re(values[i]), mpmath.re(values[i + 1])
        if a == 0 or a * b < 0:
            out.append((ks[i] + ks[i + 1]) / 2)
    return out


def loglog_slope(ks: Sequence[int], errors: Sequence, prefactors: Sequence | None = None) -> float:
    """Slope of ``log(-log|err/prefactor|)`` against ``log k`` by least squares.

    For an error ``~ C exp(-a k^p)`` with ``C`` divided out this recovers ``p``.
    """
    xs, ys = [], []
    for i, (k, e) in enumerate(zip(ks, errors)):
        mag = abs(e)
        if prefactors is not None:
            mag = mag / abs(prefactors[i])
        if mag == 0 or mag >= 1:
            continue
        xs.append(math.log(k))
        ys.append(math.log(-float(mpmath.log(mag))))
    if len(xs) < 2:
        raise DomainError("need at least two usable points")
    return statistics.linear_regression(xs, ys).slope


@dataclass(frozen=True)
class SuperiorityReport:
    """Outcome of :func:`superiority_check`."""

    z: object
    ks: tuple
    delta_errors: tuple
    pade_errors: tuple
    k0: int
    delta_smaller: bool
    violations: tuple
    delta_slope: float
    pade_slope: float
    delta_slope_ok: bool
    pade_slope_ok: bool

    @property
    def passed(self) -> bool:
        return self.delta_smaller and self.delta_slope_ok and self.pade_slope_ok


def superiority_check(z, k_range: Iterable[int], ctx: PrecisionContext | None = None,
                      k0: int = 3, tol: float = 0.05, slope_k_min: int = 10) -> SuperiorityReport:
    """Compare delta and diagonal Pade errors over ``k_range``.

    Checks ``|delta error| < |Pade error|`` for ``k >= k0`` and fits decay
    exponents by :func:`loglog_slope` with the asymptotic prefactors divided
    out: the Pade slope uses every ``k >= slope_k_min``, the delta slope uses
    only local maxima of ``|error|`` (the cosine factor zeroes single points).
    Expected slopes are 1/2 (Pade) and 2/3 (delta).
    """
    ctx = resolve(ctx)
    ks = list(k_range)
    e = reference_value(z, _fine(ctx, max(ks)))
    de = [transformation_error(DELTA, k, 0, z, ctx, reference=e) for k in ks]
    pe = [transformation_error(PADE, k, 0, z, ctx, reference=e) for k in ks]
    violations = tuple(k for k, a, b in zip(ks, de, pe) if k >= k0 and not abs(a) < abs(b))
    with ctx.workdps():
        zz = to_complex(z)
        delta_pref = abs(4 * mpmath.pi / zz * mpmath.exp(1 / zz))
        pade_pref = abs(2 * mpmath.pi / zz * mpmath.exp(1 / zz))
        sel = [i for i, k in enumerate(ks) if k >= slope_k_min]
        pade_slope = loglog_slope([ks[i] for i in sel], [pe[i] for i in sel],
                                  [pade_pref] * len(sel))
        peaks = [i for i in envelope_maxima(ks, de) if ks[i] >= slope_k_min]
        delta_slope = loglog_slope([ks[i] for i in peaks], [de[i] for i in peaks],
                                   [delta_pref] * len(peaks))
    return SuperiorityReport(
        z, tuple(ks), tuple(de), tuple(pe), k0, not violations, violations,
        delta_slope, pade_slope,
        abs(delta_slope - 2 / 3) <= tol, abs(pade_slope - 1 / 2) <= tol,
    )


# ---------------------------------------------------------------------------
# Records
# ---------------------------------------------------------------------------

CONTINUED = "continued"


def error_record(method: str, k: int, n: int, z, ctx: PrecisionContext | None = None,
                 reference=None, closed: bool = True, closed_path: str = "auto",
                 pade_path: str = "quadrature") -> ErrorRecord:
    """Observed, closed-form and asymptotic error of one approximant.

    ``closed_path`` is passed to :func:`delta_error_closed`; ``pade_path``
    selects :func:`pade_error_closed` (``"quadrature"``) or
    :func:`pade_error_closed_hyperu` (``"hyperu"``).  ``status`` is
    ``"ok"``, ``"continued"`` when the delta closed form used the
    rotated-ray representation, or a short reason when a closed-form value
    could not be computed.  Asymptotics exist for delta at ``n = 0`` and for Pade.
    """
    ctx = resolve(ctx)
    observed = transformation_error(method, k, n, z, ctx, reference=reference)
    closed_value = asym = None
    status = "ok"
    if closed and method in (DELTA, PADE):
        try:
            if method == DELTA:
                if closed_path == "auto" and closed_form_path(z) == RAY_PATH or closed_path == RAY_PATH:
                    status = CONTINUED
                closed_value = delta_error_closed(k, n, z, ctx, path=closed_path)
            else:
                pade_fn = pade_error_closed_hyperu if pade_path == "hyperu" else pade_error_closed
                closed_value = pade_fn(k, n, z, ctx)
        except (QuadratureError, DegenerateError) as exc:
            status = f"closed form failed: {exc}"
    if method == DELTA and n == 0 and k >= 1:
        asym = delta_error_asymptotic(k, z, ctx)
    elif method == PADE and k >= 1:
        asym = pade_error_asymptotic(k, n, z, ctx)
    return ErrorRecord(method, k, n, z, observed, closed_value, asym, status)
