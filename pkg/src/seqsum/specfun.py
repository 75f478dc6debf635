"""Special functions and double-exponential quadrature.

Everything here works at the precision of a :class:`~seqsum.numerics.PrecisionContext`
and returns mpmath numbers, except :func:`hyp_terminating` and :func:`laguerre`
which return exact :class:`fractions.Fraction` values when all inputs are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import mpmath

from .errors import CutError, DomainError, ParameterError, QuadratureError
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

# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------

UNIT = "unit"  # (0, 1)
HALF_LINE = "half_line"  # (0, inf)

MAX_LEVEL = 12


@dataclass(frozen=True)
class QuadratureProblem:
    """An integral over (0, 1) or (0, inf).

    Parameters
    ----------
    integrand : callable
        Function of one mpf returning mpf or mpc.  It is evaluated at whatever
        mpmath precision is current, so constants it needs should be exact
        values (ints, Fractions, mpf inputs) rather than rounded derived ones.
    domain : {"unit", "half_line"}
    target_rel_tol : optional
        Defaults to the context's ``quad_rel_tol``.
    extra_digits : int
        Additional working digits for integrands that lose accuracy internally
        (for example through cancellation inside a polynomial).
    """

    integrand: Callable
    domain: str
    target_rel_tol: object = None
    extra_digits: int = 0


@lru_cache(maxsize=None)
def _node(domain: str, prec: int, level: int, j: int):
    """Abscissa and weight of node ``j`` on grid ``h = 2**-level`` at ``prec`` bits."""
    with mpmath.workprec(prec):
        u = mpmath.ldexp(mpmath.mpf(j), -level)
        h = mpmath.ldexp(mpmath.mpf(1), -level)
        if domain == UNIT:
            s = mpmath.pi * mpmath.sinh(u)
            x = 1 / (1 + mpmath.exp(-s))
            w = h * mpmath.pi * mpmath.cosh(u) * x * (1 - x) if s < 0 else (
                h * mpmath.pi * mpmath.cosh(u) * x / (1 + mpmath.exp(s))
            )
        else:
            x = mpmath.exp(mpmath.pi / 2 * mpmath.sinh(u))
            w = h * mpmath.pi / 2 * mpmath.cosh(u) * x
    return x, w


def _walk(f, domain, prec, level, step, start, direction, eps, scale):
    """Sum terms j = start, start+step*direction, ... until they become negligible.

    Returns ``(sum, sum_abs, last_index)``.
    """
    total = mpmath.mpf(0)
    total_abs = mpmath.mpf(0)
    j = start
    small = 0
    peak = mpmath.mpf(0)
    u_cap = 7 * (1 << level)  # |u| <= 7 is far beyond any useful node
    while abs(j) <= u_cap:
        x, w = _node(domain, prec, level, j)
        if domain == UNIT and (x == 0 or x == 1):
            break
        v = f(x) * w
        a = abs(v)
        total += v
        total_abs += a
        peak = max(peak, a)
        if a <= eps * max(scale, abs(total), peak):
            small += 1
            if small >= 3 and a < peak:
                break
        else:
            small = 0
        j += step * direction
    return total, total_abs, j


def _de_sum(f, domain, level, eps, scale, bounds):
    """Trapezoid sum over all nodes of ``level`` not already present at ``level-1``."""
    prec = mpmath.mp.prec
    if level == 0:
        x, w = _node(domain, prec, 0, 0)
        v = f(x) * w
        rp, ap, jp = _walk(f, domain, prec, 0, 1, 1, 1, eps, scale)
        rm, am, jm = _walk(f, domain, prec, 0, 1, -1, -1, eps, scale)
        return v + rp + rm, abs(v) + ap + am, (jm, jp)
    lo, hi = bounds
    # odd indices at this level, within the previous truncation window
    total = mpmath.mpf(0)
    total_abs = mpmath.mpf(0)
    lo_j, hi_j = 2 * lo - 1, 2 * hi + 1
    for j in range(lo_j, hi_j + 1, 2):
        x, w = _node(domain, prec, level, j)
        if domain == UNIT and (x == 0 or x == 1):
            continue
        v = f(x) * w
        total += v
        total_abs += abs(v)
    return total, total_abs, (lo_j, hi_j)


def _integrate(f, domain, tol, eps):
    """Halve the step until successive estimates agree to ``tol`` relative.

    Weights already carry the step ``h``, so the estimate at a new level is
    half the previous one plus the contribution of the new odd nodes.
    """
    estimate, est_abs, bounds = _de_sum(f, domain, 0, eps, mpmath.mpf(0), None)
    err = mpmath.inf
    for level in range(1, MAX_LEVEL + 1):
        add, add_abs, bounds = _de_sum(f, domain, level, eps, abs(estimate), bounds)
        new = estimate / 2 + add
        est_abs = est_abs / 2 + add_abs
        err = abs(new - estimate)
        estimate = new
        mag = abs(estimate)
        if level >= 2 and err <= tol * max(mag, eps * est_abs):
            return estimate, est_abs, err / mag if mag else err
    mag = abs(estimate)
    raise QuadratureError(
        "quadrature did not converge", value=estimate, estimate=err / mag if mag else err
    )


def quad(p: QuadratureProblem, ctx: PrecisionContext | None = None):
    """Integrate with a double-exponential rule.

    Tanh-sinh nodes are used on (0, 1) and exp-sinh nodes on (0, inf).  The
    step is halved until two successive estimates agree to the target
    tolerance.  If the sum loses more digits to cancellation than the guard
    digits cover, the integral is recomputed at higher precision.

    Returns
    -------
    mpf or mpc

    Raises
    ------
    QuadratureError
        If the maximum refinement level is reached; carries the last estimate.
    """
    ctx = resolve(ctx)
    extra = GUARD_DIGITS + p.extra_digits
    for _ in range(4):
        with mpmath.workdps(ctx.digits + extra):
            tol = mpmath.mpf(ctx.quad_rel_tol if p.target_rel_tol is None else p.target_rel_tol)
            eps = mpmath.mpf(10) ** (-(ctx.digits + extra))
            value, value_abs, _ = _integrate(p.integrand, p.domain, tol, eps)
            if value == 0:
                loss = 0
            else:
                loss = max(0, int(mpmath.ceil(mpmath.log10(value_abs / abs(value)))))
        if loss <= extra - p.extra_digits - 4:
            return rounded(value, ctx)
        extra = p.extra_digits + loss + GUARD_DIGITS
    return rounded(value, ctx)


def integrate(f: Callable, domain: str, ctx: PrecisionContext | None = None, *,
              rel_tol=None, extra_digits: int = 0):
    """Shorthand for ``quad(QuadratureProblem(f, domain, rel_tol, extra_digits), ctx)``."""
    return quad(QuadratureProblem(f, domain, rel_tol, extra_digits), ctx)


# ---------------------------------------------------------------------------
# Orthogonal polynomials and terminating hypergeometric sums
# ---------------------------------------------------------------------------


def laguerre(k: int, alpha, x, ctx: PrecisionContext | None = None):
    """Generalized Laguerre polynomial ``L_k^(alpha)(x)`` by upward recurrence.

    Uses ``(j+1) L_{j+1} = (2j + 1 + alpha - x) L_j - (j + alpha) L_{j-1}``.
    Exact (Fraction) when ``alpha`` and ``x`` are ints or Fractions.
    """
    if k < 0:
        raise DomainError("degree must be nonnegative")
    if is_exact(alpha) and is_exact(x):
        a, xx = Fraction(alpha), Fraction(x)
        prev, cur = Fraction(0), Fraction(1)
        for j in range(k):
            prev, cur = cur, ((2 * j + 1 + a - xx) * cur - (j + a) * prev) / (j + 1)
        return cur
    ctx = resolve(ctx)
    with ctx.workdps(GUARD_DIGITS + k // 2):
        a, xx = to_mp(alpha), to_mp(x)
        prev, cur = mpmath.mpf(0), mpmath.mpf(1)
        for j in range(k):
            prev, cur = cur, ((2 * j + 1 + a - xx) * cur - (j + a) * prev) / (j + 1)
    return rounded(cur, ctx)


def laguerre_coefficients(k: int, alpha) -> list:
    """Exact power coefficients of ``L_k^(alpha)(x)`` in ascending order.

    ``L_k^(alpha)(x) = sum_j (-1)^j binom(k + alpha, k - j) x^j / j!``.
    """
    a = Fraction(alpha)
    coeffs = []
    # binom(k + a, k - j) = (a + j + 1)_{k - j} / (k - j)!
    for j in range(k + 1):
        num = Fraction(1)
        for i in range(k - j):
            num *= a + j + 1 + i
        coeffs.append((-1) ** j * num / (math.factorial(k - j) * math.factorial(j)))
    return coeffs


@dataclass(frozen=True)
class TerminatingHyp:
    """A hypergeometric series ``pFq`` whose first numerator parameter is ``-k``.

    Parameters
    ----------
    numerator_params : sequence
        First entry must be a nonpositive integer ``-k``.
    denominator_params : sequence
    argument : number
    """

    numerator_params: Sequence
    denominator_params: Sequence
    argument: object

    def __post_init__(self):
        if not self.numerator_params:
            raise ParameterError("at least one numerator parameter is required")
        first = self.numerator_params[0]
        if not (is_exact(first) and Fraction(first).denominator == 1 and first <= 0):
            raise ParameterError("first numerator parameter must be a nonpositive integer")
        k = self.order
        for b in self.denominator_params:
            if _is_integer(b) and -(k - 1) <= int(_real(b)) <= 0:
                raise ParameterError(
                    f"denominator parameter {b} makes a Pochhammer symbol vanish within the sum"
                )

    @property
    def order(self) -> int:
        """Number of nonzero terms minus one (``k``)."""
        return -int(self.numerator_params[0])


def _real(b):
    if is_exact(b):
        return b
    return mpmath.mpc(b).real


def _is_integer(b) -> bool:
    if is_exact(b):
        return Fraction(b).denominator == 1
    c = mpmath.mpc(b)
    return c.imag == 0 and c.real == mpmath.floor(c.real)


def hyp_terminating_terms(h: TerminatingHyp):
    """Exact rational coefficients ``c_j`` with ``pFq = sum_j c_j x^j``.

    Only valid when all parameters are ints or Fractions.
    """
    k = h.order
    coeffs = [Fraction(1)]
    c = Fraction(1)
    for j in range(k):
        num = Fraction(1)
        for a in h.numerator_params:
            num *= Fraction(a) + j
        den = Fraction(j + 1)
        for b in h.denominator_params:
            den *= Fraction(b) + j
        c = c * num / den
        coeffs.append(c)
    return coeffs


def hyp_terminating(h: TerminatingHyp, ctx: PrecisionContext | None = None):
    """Evaluate a terminating hypergeometric sum by term recursion.

    The ratio ``term_{j+1}/term_j`` is applied exactly.  Exact inputs give an
    exact Fraction.  Otherwise the sum is accumulated with guard digits; when
    the cancellation ``log10(max|term| / |sum|)`` exceeds the guard, it is
    recomputed at higher precision.
    """
    params = list(h.numerator_params) + list(h.denominator_params) + [h.argument]
    if all(is_exact(p) for p in params):
        x = Fraction(h.argument)
        return sum((c * x ** j for j, c in enumerate(hyp_terminating_terms(h))), Fraction(0))
    ctx = resolve(ctx)
    extra = GUARD_DIGITS + 5
    for _ in range(4):
        with ctx.workdps(extra):
            total, biggest = _hyp_sum(h)
            if total == 0:
                loss = 0 if biggest == 0 else mpmath.inf
            else:
                loss = int(mpmath.ceil(mpmath.log10(biggest / abs(total)))) if biggest else 0
        if loss == mpmath.inf:
            break
        if loss <= extra - GUARD_DIGITS:
            break
        extra = loss + GUARD_DIGITS + 5
    return rounded(total, ctx)


def _hyp_sum(h: TerminatingHyp):
    k = h.order
    x = to_mp(h.argument)
    nums = [to_mp(a) for a in h.numerator_params]
    dens = [to_mp(b) for b in h.denominator_params]
    term = mpmath.mpf(1)
    total = mpmath.mpf(1)
    biggest = mpmath.mpf(1)
    for j in range(k):
        ratio = x / (j + 1)
        for a in nums:
            ratio *= a + j
        for b in dens:
            ratio /= b + j
        term *= ratio
        total += term
        biggest = max(biggest, abs(term))
    return total, biggest


def horner(coeffs: Sequence, x):
    """Evaluate ``sum_j coeffs[j] x**j`` by Horner's scheme."""
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


# ---------------------------------------------------------------------------
# Exponential integral and Kummer U
# ---------------------------------------------------------------------------


def exp_integral_e1(x, ctx: PrecisionContext | None = None):
    """Exponential integral ``E_1(x)`` off the cut (-inf, 0].

    Uses the convergent series ``-gamma - log x - sum (-x)^m/(m m!)`` for
    ``|x| <= 1`` and ``E_1(x) = exp(-x) int_0^inf exp(-s)/(x + s) ds``
    otherwise.  Real positive ``x`` gives a real result.
    """
    if on_cut(x):
        raise CutError("E1 is not defined on the cut (-inf, 0]")
    ctx = resolve(ctx)
    with ctx.workdps():
        xv = to_mp(x)
        real = not isinstance(xv, mpmath.mpc) or (xv.imag == 0 and xv.real > 0)
        if real:
            xv = mpmath.re(xv)
        if abs(xv) <= 1:
            out = _e1_series(xv)
            return rounded(out, ctx)
    e = x

    def f(s):
        xs = to_mp(e)
        if real:
            xs = mpmath.re(xs)
        return mpmath.exp(-s) / (xs + s)

    val = integrate(f, HALF_LINE, ctx)
    with ctx.workdps():
        xs = to_mp(x)
        if real:
            xs = mpmath.re(xs)
        out = mpmath.exp(-xs) * val
    return rounded(out, ctx)


def _e1_series(x):
    eps = mpmath.eps
    total = mpmath.mpf(0)
    term = mpmath.mpf(1)
    m = 0
    while True:
        m += 1
        term *= -x / m
        contrib = term / m
        total += contrib
        if abs(contrib) <= eps * max(abs(total), 1):
            break
    return -mpmath.euler - mpmath.log(x) - total


def kummer_u_scaled(k: int, n: int, z, ctx: PrecisionContext | None = None):
    """``k! U(k+1, -n, 1/z)`` via its Laplace-type integral.

    Computed as ``z^(k+1) int_0^inf xi^k exp(-xi) (1 + z xi)^-(k+n+2) dxi``.

    Raises
    ------
    CutError
        For ``z`` on (-inf, 0], where the integrand has a pole on the path.
    """
    if k < 0 or n < 0:
        raise DomainError("k and n must be nonnegative")
    if on_cut(z):
        raise CutError("z lies on the cut (-inf, 0]")
    ctx = resolve(ctx)
    p = k + n + 2

    def f(xi):
        zz = to_mp(z)
        return xi ** k * mpmath.exp(-xi) / (1 + zz * xi) ** p

    val = integrate(f, HALF_LINE, ctx)
    with ctx.workdps():
        out = to_mp(z) ** (k + 1) * val
    return rounded(out, ctx)


# ---------------------------------------------------------------------------
# Large-degree Laguerre asymptotics
# ---------------------------------------------------------------------------

FEJER = "fejer"
PERRON = "perron"
INTERPOLATING = "interpolating"


def laguerre_asymptotic(mode: str, n: int, alpha, x, ctx: PrecisionContext | None = None):
    """Leading-order large-``n`` approximation of ``L_n^(alpha)(x)``.

    Parameters
    ----------
    mode : {"fejer", "perron", "interpolating"}
        ``fejer``: oscillatory cosine form, requires real ``x > 0``.
        ``perron``: single growing exponential, requires ``x`` off (0, inf).
        ``interpolating``: sum of both exponentials with principal branches,
        valid for ``|arg(2 sqrt(n x))| < pi``.
    n : int
    alpha : real
    x : number

    Notes
    -----
    For ``x < 0`` the interpolating form reduces to the Perron form; the two
    exponentials each carry half of the cosine prefactor, so the Perron form
    has an overall factor ``1/2`` relative to the Fejer prefactor.
    """
    ctx = resolve(ctx)
    with ctx.workdps():
        a = to_mp(alpha)
        xv = to_complex(x)
        nn = mpmath.mpf(n)
        if mode == FEJER:
            if xv.imag != 0 or xv.real <= 0:
                raise DomainError("Fejer's formula requires real x > 0")
            xr = xv.real
            out = (mpmath.exp(xr / 2) * nn ** (a / 2 - mpmath.mpf(1) / 4)
                   / (mpmath.sqrt(mpmath.pi) * xr ** (a / 2 + mpmath.mpf(1) / 4))
                   * mpmath.cos(2 * mpmath.sqrt(nn * xr) - a * mpmath.pi / 2 - mpmath.pi / 4))
        elif mode == PERRON:
            if xv.imag == 0 and xv.real > 0:
                raise DomainError("Perron's formula requires x off (0, inf)")
            if xv == 0:
                raise DomainError("x must be nonzero")
            mx = -xv
            out = (mpmath.exp(xv / 2) * nn ** (a / 2 - mpmath.mpf(1) / 4)
                   / (2 * mpmath.sqrt(mpmath.pi)) * mx ** (-a / 2 - mpmath.mpf(1) / 4)
                   * mpmath.exp(2 * mpmath.sqrt(nn * mx)))
        elif mode == INTERPOLATING:
            if xv == 0:
                raise DomainError("x must be nonzero")
            root = mpmath.sqrt(nn * xv)
            theta = 2 * root - mpmath.pi * a / 2 - mpmath.pi / 4
            out = (mpmath.exp(xv / 2) * nn ** (a / 2 - mpmath.mpf(1) / 4)
                   / (2 * mpmath.sqrt(mpmath.pi)) * xv ** (-a / 2 - mpmath.mpf(1) / 4)
                   * (mpmath.exp(1j * theta) + mpmath.exp(-1j * theta)))
        else:
            raise DomainError(f"unknown mode {mode!r}")
    return rounded(out, ctx)
