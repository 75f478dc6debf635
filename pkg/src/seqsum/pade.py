"""Pade approximants of the Euler series.

Closed-form ``[k+n/k]`` values, an exact determinant oracle, Taylor
accuracy-through-order checks and the inequality battery satisfied by Pade
approximants of a Stieltjes series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath

from .errors import DegenerateError, DomainError, NonNormalError
from .euler import coefficient, euler_integral, partial_sums
from .numerics import GUARD_DIGITS, PrecisionContext, is_exact, resolve, rounded, to_mp
from .specfun import horner
from .transforms import RationalApproximant

ORACLE_MAX_SIZE = 16


@dataclass(frozen=True)
class PadeIndex:
    """Numerator degree ``m`` and denominator degree ``n`` of ``[m/n]``."""

    m: int
    n: int

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise DomainError("Pade degrees must be nonnegative")


def pade_euler_closed_form(k: int, n: int, z, ctx: PrecisionContext | None = None):
    """``[k+n/k]`` of the Euler series at ``z``.

    ``sum_j C(k,j) z^(k-j) E_{n+j}(z)/(n+j+1)!  /  sum_j C(k,j) z^(k-j)/(n+j+1)!``

    ``n = -1`` is accepted (with ``E_{-1} = 0``) and yields ``[k-1/k]``.
    Exact for exact ``z``.
    """
    if k < 0 or n < -1:
        raise DomainError("need k >= 0 and n >= -1")
    if n == -1 and k == 0:
        raise DomainError("[-1/0] is undefined")
    if z == 0:
        raise DomainError("z must be nonzero")
    if is_exact(z):
        zf = Fraction(z)
        sums = [0] + partial_sums(n + k, zf) if n + k >= 0 else [0]
        num = den = Fraction(0)
        for j in range(k + 1):
            c = Fraction(math.comb(k, j), math.factorial(n + j + 1)) * zf ** (k - j)
            num += c * sums[n + j + 1]
            den += c
        if den == 0:
            raise DegenerateError("closed-form denominator vanishes")
        return num / den
    ctx = resolve(ctx)
    fine = ctx.with_digits(ctx.digits + k + GUARD_DIGITS)
    sums = [mpmath.mpf(0)] + partial_sums(n + k, z, fine) if n + k >= 0 else [0]
    with fine.workdps():
        zz = to_mp(z)
        num = den = mpmath.mpf(0)
        for j in range(k + 1):
            c = mpmath.mpf(math.comb(k, j)) / math.factorial(n + j + 1) * zz ** (k - j)
            num += c * sums[n + j + 1]
            den += c
        if den == 0:
            raise DegenerateError("closed-form denominator vanishes")
        out = num / den
    return rounded(out, ctx)


def pade_euler_rational(k: int, n: int) -> RationalApproximant:
    """Exact polynomial coefficients of the closed-form ``[k+n/k]`` (Baker normalized)."""
    if k < 0 or n < -1:
        raise DomainError("need k >= 0 and n >= -1")
    num = [Fraction(0)] * max(1, n + k + 1)
    den = [Fraction(0)] * (k + 1)
    for j in range(k + 1):
        c = Fraction(math.comb(k, j), math.factorial(n + j + 1))
        den[k - j] += c
        for v in range(n + j + 1):
            num[k - j + v] += c * coefficient(v)
    return RationalApproximant(tuple(num), tuple(den), "pade", k, n).normalized()


# ---------------------------------------------------------------------------
# Determinant oracle
# ---------------------------------------------------------------------------


def bareiss_det(matrix: Sequence[Sequence]) -> int | Fraction:
    """Determinant by fraction-free Gaussian elimination (exact for integer entries)."""
    a = [list(row) for row in matrix]
    size = len(a)
    if size == 0:
        return 1
    sign = 1
    prev = 1
    for i in range(size - 1):
        if a[i][i] == 0:
            for r in range(i + 1, size):
                if a[r][i] != 0:
                    a[i], a[r] = a[r], a[i]
                    sign = -sign
                    break
            else:
                return 0
        for r in range(i + 1, size):
            for c in range(i + 1, size):
                val = a[r][c] * a[i][i] - a[r][i] * a[i][c]
                a[r][c] = val // prev if isinstance(val, int) and isinstance(prev, int) else val / prev
        prev = a[i][i]
    return sign * a[-1][-1]


def _coef(j: int, gamma) -> int:
    return gamma(j) if j >= 0 else 0


def pade_determinant_coefficients(m: int, n: int, gamma=coefficient) -> RationalApproximant:
    """Exact ``[m/n]`` from the two determinant representations.

    The leading ``n`` rows are ``a_{m-n+1+i} ... a_{m+1+i}``.  The last row is
    ``(sum_{j=n-c}^{m} a_{j-n+c} x^j)_c`` for the numerator and ``x^(n-c)`` for
    the denominator.  Both are expanded along the last row with integer
    cofactors computed by Bareiss elimination.

    Raises
    ------
    DegenerateError
        If the denominator polynomial is identically zero.
    """
    if m < 0 or n < 0:
        raise DomainError("degrees must be nonnegative")
    if m + n > ORACLE_MAX_SIZE:
        raise DomainError(f"oracle restricted to m + n <= {ORACLE_MAX_SIZE}")
    rows = [[_coef(m - n + 1 + i + c, gamma) for c in range(n + 1)] for i in range(n)]
    cof = []
    for c in range(n + 1):
        minor = [row[:c] + row[c + 1:] for row in rows]
        cof.append((-1) ** (n + c) * bareiss_det(minor))
    num = [0] * (m + 1)
    den = [0] * (n + 1)
    for c in range(n + 1):
        den[n - c] += cof[c]
        for j in range(max(0, n - c), m + 1):
            num[j] += cof[c] * _coef(j - n + c, gamma)
    if all(v == 0 for v in den):
        raise DegenerateError(f"[{m}/{n}] has a vanishing denominator determinant")
    r = RationalApproximant(tuple(Fraction(v) for v in num), tuple(Fraction(v) for v in den),
                            "pade-determinant", n, m - n)
    return r.normalized()


def pade_determinant_oracle(m: int, n: int, z, ctx: PrecisionContext | None = None):
    """``[m/n]`` of the Euler series at ``z`` from the determinant representation.

    Exact Fraction for exact ``z``; otherwise the exact polynomials are
    evaluated at working precision.
    """
    if m < n - 1:
        raise DomainError("oracle requires m >= n - 1")
    r = pade_determinant_coefficients(m, n)
    if is_exact(z):
        q = horner(r.denominator, Fraction(z))
        if q == 0:
            raise DegenerateError("z is a zero of the denominator")
        return horner(r.numerator, Fraction(z)) / q
    return r.evaluate(z, ctx)


# ---------------------------------------------------------------------------
# Accuracy through order
# ---------------------------------------------------------------------------


def taylor_coefficients(r: RationalApproximant, count: int) -> list:
    """First ``count`` Taylor coefficients of ``P/Q`` by exact long division.

    Raises
    ------
    NonNormalError
        If ``Q(0) = 0``.
    """
    p = [Fraction(c) for c in r.numerator]
    q = [Fraction(c) for c in r.denominator]
    if q[0] == 0:
        raise NonNormalError("denominator constant term vanishes")
    out = []
    for i in range(count):
        acc = p[i] if i < len(p) else Fraction(0)
        for l in range(1, min(i, len(q) - 1) + 1):
            acc -= q[l] * out[i - l]
        out.append(acc / q[0])
    return out


def accuracy_through_order_check(r: RationalApproximant, order: int, gamma=coefficient) -> bool:
    """True when the Taylor series of ``r`` matches ``gamma_0 ... gamma_{order-1}``."""
    series = taylor_coefficients(r, order)
    return all(series[i] == gamma(i) for i in range(order))


def matching_order(r: RationalApproximant, gamma=coefficient, limit: int = 200) -> int:
    """Number of leading Taylor coefficients of ``r`` that agree with ``gamma``."""
    series = taylor_coefficients(r, limit)
    for i, c in enumerate(series):
        if c != gamma(i):
            return i
    return limit


# ---------------------------------------------------------------------------
# Stieltjes inequalities
# ---------------------------------------------------------------------------

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class InequalityResult:
    """One checked inequality ``margin >= 0``."""

    family: str
    m: int
    j: int | None
    description: str
    margin: object
    status: str


@dataclass(frozen=True)
class InequalityReport:
    z: object
    depth: int
    results: tuple

    @property
    def passed(self) -> bool:
        return all(r.status == PASS for r in self.results)

    def failures(self) -> list:
        return [r for r in self.results if r.status != PASS]


def pade_value(m: int, n: int, z, ctx: PrecisionContext | None = None):
    """``[m/n]`` of the Euler series for ``m >= n - 1`` (closed form)."""
    if m < n - 1:
        raise DomainError("need m >= n - 1")
    return pade_euler_closed_form(n, m - n, z, ctx)


def check_stieltjes_inequalities(z, depth: int, ctx: PrecisionContext | None = None) -> InequalityReport:
    """Check the ordering inequalities of Pade approximants of a Stieltjes series.

    For ``m <= depth`` and ``j`` in ``{-1, 0, 1, 2}``:

    * ``(-1)^(j+1) ([m+j+1/m+1] - [m+j/m]) >= 0``
    * ``(-1)^(j+1) ([m+j/m] - [m+j+1/m-1]) >= 0``
    * ``[m/m] >= E(z) >= [m-1/m]``
    * ``[m/m+1] >= [m+1/m]``
    * ``[m+1/m] <= E(z) <= [m+1/m+1]``

    Margins whose magnitude is below ``10^(20-digits)`` are reported as
    inconclusive.
    """
    ctx = resolve(ctx)
    with ctx.workdps():
        if to_mp(z) <= 0 or isinstance(to_mp(z), mpmath.mpc):
            raise DomainError("the inequalities hold for real z > 0")
    e = euler_integral(z, ctx)
    cache = {}

    def p(a, b):
        if (a, b) not in cache:
            v = pade_value(a, b, z, ctx)
            with ctx.workdps():
                cache[(a, b)] = to_mp(v)
        return cache[(a, b)]

    results = []
    with ctx.workdps():
        thresh = mpmath.mpf(10) ** (20 - ctx.digits)

        def add(family, m, j, text, margin):
            scale = max(1, abs(e))
            if abs(margin) <= thresh * scale:
                status = INCONCLUSIVE
            else:
                status = PASS if margin > 0 else FAIL
            results.append(InequalityResult(family, m, j, text, rounded(margin, ctx), status))

        for m in range(depth + 1):
            for j in (-1, 0, 1, 2):
                sgn = (-1) ** (j + 1)
                if m + j >= 0:
                    add("row_step", m, j, f"(-1)^{j + 1}([{m + j + 1}/{m + 1}] - [{m + j}/{m}])",
                        sgn * (p(m + j + 1, m + 1) - p(m + j, m)))
                if m >= 1 and m + j >= 0:
                    add("antidiagonal_step", m, j,
                        f"(-1)^{j + 1}([{m + j}/{m}] - [{m + j + 1}/{m - 1}])",
                        sgn * (p(m + j, m) - p(m + j + 1, m - 1)))
            add("diagonal_upper", m, None, f"[{m}/{m}] - E", p(m, m) - e)
            if m >= 1:
                add("subdiagonal_lower", m, None, f"E - [{m - 1}/{m}]", e - p(m - 1, m))
            add("cross", m, None, f"[{m}/{m + 1}] - [{m + 1}/{m}]", p(m, m + 1) - p(m + 1, m))
            add("superdiagonal_lower", m, None, f"E - [{m + 1}/{m}]", e - p(m + 1, m))
            add("superdiagonal_upper", m, None, f"[{m + 1}/{m + 1}] - E", p(m + 1, m + 1) - e)
    return InequalityReport(z, depth, tuple(results))
