"""Levin-type sequence transformations and Wynn's epsilon algorithm.

A Levin-type transformation of order ``k`` is the ratio of two weighted
``k``-th differences,

    T_k^(n) = sum_j (-1)^j C(k,j) w_j s_{n+j}/omega_{n+j}
              / sum_j (-1)^j C(k,j) w_j / omega_{n+j},

with normalized weights ``w_j`` chosen by the family:

* ``power`` (Levin L):         ((beta+n+j)/(beta+n+k))^(k-1)
* ``pochhammer`` (Weniger S):  (beta+n+j)_{k-1} / (beta+n+k)_{k-1}
* ``constant`` (Drummond D):   1

The d and delta variants use ``omega_n = s_{n+1} - s_n``.  All routines accept
exact inputs (ints, Fractions) and then compute exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import mpmath

from .errors import (
    BreakdownError,
    ConfigurationError,
    DomainError,
    ParameterError,
    UnstableDenominatorError,
    ZeroRemainderEstimateError,
)
from .numerics import GUARD_DIGITS, PrecisionContext, is_exact, resolve, rounded, to_mp
from .specfun import horner

POWER = "power"
POCHHAMMER = "pochhammer"
CONSTANT = "constant"
FAMILIES = (POWER, POCHHAMMER, CONSTANT)

EXPLICIT = "explicit"
DELTA_S = "delta_s"


@dataclass(frozen=True)
class TransformSpec:
    """Family of weights, shift ``beta`` and remainder-estimate rule.

    Parameters
    ----------
    family : {"power", "pochhammer", "constant"}
    beta : positive real, default 1
    remainder_rule : {"explicit", "delta_s"}
        ``delta_s`` means ``omega_n = s_{n+1} - s_n`` is derived from the sequence.
    """

    family: str
    beta: object = 1
    remainder_rule: str = EXPLICIT

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigurationError(f"unknown family {self.family!r}")
        if not self.beta > 0:
            raise ConfigurationError("beta must be positive")
        if self.remainder_rule not in (EXPLICIT, DELTA_S):
            raise ConfigurationError(f"unknown remainder rule {self.remainder_rule!r}")


@dataclass(frozen=True)
class SequenceWindow:
    """Sequence elements ``s_n ... s_{n+k}`` with remainder estimates ``omega``.

    Parameters
    ----------
    s : sequence of numbers
    omega : sequence of nonzero numbers, same length as ``s``
    n : index of ``s[0]``
    """

    s: Sequence
    omega: Sequence
    n: int = 0

    def __post_init__(self):
        if len(self.s) != len(self.omega):
            raise DomainError("s and omega must have the same length")
        if self.n < 0:
            raise DomainError("base index must be nonnegative")
        for j, w in enumerate(self.omega):
            if w == 0:
                raise ZeroRemainderEstimateError(
                    f"omega_{self.n + j} vanishes", location=(0, self.n + j)
                )

    @classmethod
    def from_delta_s(cls, s: Sequence, n: int = 0) -> "SequenceWindow":
        """Window with ``omega_j = s_{j+1} - s_j``; uses ``len(s) - 1`` elements."""
        if len(s) < 2:
            raise DomainError("need at least two sequence elements")
        om = [_sub(s[j + 1], s[j]) for j in range(len(s) - 1)]
        return cls(list(s[:-1]), om, n)


def _sub(a, b):
    """Exact difference: Fractions for exact input, unrounded mpf/mpc otherwise."""
    if is_exact(a) and is_exact(b):
        return Fraction(a) - Fraction(b)
    return mpmath.fsub(_as_mp_exact(a), _as_mp_exact(b), exact=True)


def _as_mp_exact(x):
    if isinstance(x, (mpmath.mpf, mpmath.mpc)):
        return x
    if isinstance(x, int):
        with mpmath.workprec(max(53, x.bit_length())):
            return mpmath.mpf(x)
    return to_mp(x)


# ---------------------------------------------------------------------------
# Weights
# ---------------------------------------------------------------------------


def _poch(x, m):
    out = 1
    for i in range(m):
        out *= x + i
    return out


@lru_cache(maxsize=4096)
def _exact_weights(family: str, beta: Fraction, n: int, k: int) -> tuple:
    if family == CONSTANT or k <= 1:
        return tuple(Fraction(1) for _ in range(k + 1))
    top = beta + n + k
    if family == POWER:
        return tuple(((beta + n + j) / top) ** (k - 1) for j in range(k + 1))
    ref = _poch(top, k - 1)
    if ref == 0:
        raise ParameterError("vanishing Pochhammer symbol in weight normalization")
    return tuple(Fraction(_poch(beta + n + j, k - 1)) / ref for j in range(k + 1))


def weights(family: str, beta, n: int, k: int) -> list:
    """Normalized weights ``w_0 ... w_k`` of the given family.

    Exact Fractions for exact ``beta``; mpf at the current precision otherwise.
    """
    if family not in FAMILIES:
        raise ConfigurationError(f"unknown family {family!r}")
    if is_exact(beta):
        return list(_exact_weights(family, Fraction(beta), n, k))
    b = to_mp(beta)
    if family == CONSTANT or k <= 1:
        return [mpmath.mpf(1)] * (k + 1)
    top = b + n + k
    if family == POWER:
        return [((b + n + j) / top) ** (k - 1) for j in range(k + 1)]
    ref = mpmath.rf(top, k - 1)
    return [mpmath.rf(b + n + j, k - 1) / ref for j in range(k + 1)]


# ---------------------------------------------------------------------------
# Generic Levin-type transformation
# ---------------------------------------------------------------------------


def levin_type(spec: TransformSpec, w: SequenceWindow, k: int,
               ctx: PrecisionContext | None = None):
    """Levin-type transformation ``T_k^(n)`` on a window of ``k+1`` elements.

    Parameters
    ----------
    spec : TransformSpec
    w : SequenceWindow with exactly ``k+1`` elements
    k : int, order
    ctx : PrecisionContext, optional

    Returns
    -------
    Fraction for exact inputs, otherwise mpf/mpc rounded to ``ctx.digits``.

    Raises
    ------
    UnstableDenominatorError
        If the denominator sum is below ``10^(5-digits)`` times its largest summand.
    """
    if k < 0:
        raise DomainError("order must be nonnegative")
    if len(w.s) != k + 1:
        raise DomainError(f"window must hold k+1 = {k + 1} elements, got {len(w.s)}")
    if k == 0:
        return w.s[0]
    binom = [(-1) ** j * math.comb(k, j) for j in range(k + 1)]
    exact = is_exact(spec.beta) and all(is_exact(v) for v in list(w.s) + list(w.omega))
    if exact:
        ws = weights(spec.family, spec.beta, w.n, k)
        num = Fraction(0)
        den = Fraction(0)
        for j in range(k + 1):
            c = binom[j] * ws[j] / Fraction(w.omega[j])
            num += c * Fraction(w.s[j])
            den += c
        if den == 0:
            raise UnstableDenominatorError("denominator sum vanishes", location=(k, w.n))
        return num / den
    ctx = resolve(ctx)
    extra = GUARD_DIGITS + 5
    for _ in range(4):
        with ctx.workdps(extra):
            ws = [to_mp(v) for v in weights(spec.family, spec.beta, w.n, k)]
            num = den = mpmath.mpf(0)
            num_max = den_max = mpmath.mpf(0)
            for j in range(k + 1):
                c = binom[j] * ws[j] / to_mp(w.omega[j])
                t = c * to_mp(w.s[j])
                num += t
                den += c
                num_max = max(num_max, abs(t))
                den_max = max(den_max, abs(c))
            loss = max(_loss(num_max, num), _loss(den_max, den))
            if loss <= extra - GUARD_DIGITS:
                break
            extra = loss + GUARD_DIGITS + 5
    with ctx.workdps(extra):
        floor = mpmath.mpf(10) ** (5 - ctx.digits) * den_max
        if abs(den) <= floor:
            raise UnstableDenominatorError(
                "denominator sum cancelled below the working precision", location=(k, w.n)
            )
        out = num / den
    return rounded(out, ctx)


def _loss(biggest, total):
    if biggest == 0:
        return 0
    if total == 0:
        return 10 ** 6
    return max(0, int(mpmath.ceil(mpmath.log10(biggest / abs(total)))))


def weniger_s(beta, k: int, n: int, s: Sequence, omega: Sequence,
              ctx: PrecisionContext | None = None):
    """Weniger's S transformation (Pochhammer weights) on ``s_n ... s_{n+k}``."""
    return levin_type(TransformSpec(POCHHAMMER, beta), SequenceWindow(s, omega, n), k, ctx)


def levin_l(beta, k: int, n: int, s: Sequence, omega: Sequence,
            ctx: PrecisionContext | None = None):
    """Levin's L transformation (power weights) on ``s_n ... s_{n+k}``."""
    return levin_type(TransformSpec(POWER, beta), SequenceWindow(s, omega, n), k, ctx)


def drummond(k: int, n: int, s: Sequence, omega: Sequence,
             ctx: PrecisionContext | None = None):
    """Drummond's transformation (constant weights) on ``s_n ... s_{n+k}``."""
    return levin_type(TransformSpec(CONSTANT), SequenceWindow(s, omega, n), k, ctx)


def _delta_s_window(k: int, n: int, s: Sequence) -> SequenceWindow:
    if len(s) < k + 2:
        raise DomainError(f"need k+2 = {k + 2} elements starting at s_n, got {len(s)}")
    return SequenceWindow.from_delta_s(list(s[: k + 2]), n)


def delta_variant(beta, k: int, n: int, s: Sequence, ctx: PrecisionContext | None = None):
    """Weniger's delta transformation: S with ``omega_j = s_{j+1} - s_j``.

    ``s`` holds ``s_n, s_{n+1}, ...`` with at least ``k+2`` entries.
    """
    return levin_type(TransformSpec(POCHHAMMER, beta, DELTA_S), _delta_s_window(k, n, s), k, ctx)


def d_variant(beta, k: int, n: int, s: Sequence, ctx: PrecisionContext | None = None):
    """Levin's d transformation: L with ``omega_j = s_{j+1} - s_j``."""
    return levin_type(TransformSpec(POWER, beta, DELTA_S), _delta_s_window(k, n, s), k, ctx)


def drummond_delta_s(k: int, n: int, s: Sequence, ctx: PrecisionContext | None = None):
    """Drummond's transformation with ``omega_j = s_{j+1} - s_j``."""
    return levin_type(TransformSpec(CONSTANT, 1, DELTA_S), _delta_s_window(k, n, s), k, ctx)


# ---------------------------------------------------------------------------
# Recursive evaluation (cross-check path)
# ---------------------------------------------------------------------------


def _recursion_factor(family: str, beta, n: int, k: int):
    """Multiplier ``c`` in ``X_{k+1}^(n) = X_k^(n+1) - c X_k^(n)``."""
    if family == CONSTANT or k == 0:
        return 1
    if family == POCHHAMMER:
        return Fraction((beta + n + k) * (beta + n + k - 1),
                        (beta + n + 2 * k) * (beta + n + 2 * k - 1))
    return Fraction(beta + n) * Fraction(beta + n + k) ** (k - 1) / Fraction(beta + n + k + 1) ** k


def levin_type_recursive(spec: TransformSpec, s: Sequence, omega: Sequence, k: int, n: int = 0):
    """Same transformation computed by the two-sequence recursion in ``k``.

    Numerator and denominator tables start from ``s_m/omega_m`` and ``1/omega_m``
    and share the recursion ``X_{j+1}^(m) = X_j^(m+1) - c_j^(m) X_j^(m)``.
    Only exact (int/Fraction) inputs and integer ``beta`` are supported; this
    path exists to cross-check :func:`levin_type`.
    """
    if not (is_exact(spec.beta) and all(is_exact(v) for v in list(s) + list(omega))):
        raise DomainError("the recursive path requires exact inputs")
    beta = Fraction(spec.beta)
    if len(s) < k + 1 or len(omega) < k + 1:
        raise DomainError("need k+1 elements")
    num = [Fraction(s[m]) / Fraction(omega[m]) for m in range(k + 1)]
    den = [1 / Fraction(omega[m]) for m in range(k + 1)]
    for j in range(k):
        num = [num[m + 1] - _recursion_factor(spec.family, beta, n + m, j) * num[m]
               for m in range(len(num) - 1)]
        den = [den[m + 1] - _recursion_factor(spec.family, beta, n + m, j) * den[m]
               for m in range(len(den) - 1)]
    if den[0] == 0:
        raise UnstableDenominatorError("denominator vanishes", location=(k, n))
    return num[0] / den[0]


# ---------------------------------------------------------------------------
# Rational forms for power series input
# ---------------------------------------------------------------------------

METHOD_FAMILY = {"delta": POCHHAMMER, "d": POWER, "drummond-pade": CONSTANT}


@dataclass(frozen=True)
class RationalApproximant:
    """Ratio of two polynomials in ``z`` with ascending coefficient lists.

    The denominator is scaled so its constant term is 1 whenever that term is
    nonzero (Baker normalization).
    """

    numerator: tuple
    denominator: tuple
    method: str = ""
    k: int = 0
    n: int = 0
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def degrees(self) -> tuple:
        return len(self.numerator) - 1, len(self.denominator) - 1

    def __call__(self, z, ctx: PrecisionContext | None = None):
        return self.evaluate(z, ctx)

    def evaluate(self, z, ctx: PrecisionContext | None = None):
        """Value at ``z``; exact for exact coefficients and exact ``z``."""
        if is_exact(z) and all(is_exact(c) for c in self.numerator + self.denominator):
            q = horner(self.denominator, Fraction(z))
            if q == 0:
                raise DomainError("z is a pole of the approximant")
            return horner(self.numerator, Fraction(z)) / q
        ctx = resolve(ctx)
        with ctx.workdps(GUARD_DIGITS + len(self.numerator)):
            zz = to_mp(z)
            num = horner([to_mp(c) for c in self.numerator], zz)
            den = horner([to_mp(c) for c in self.denominator], zz)
            out = num / den
        return rounded(out, ctx)

    def normalized(self) -> "RationalApproximant":
        """Copy with the denominator constant term scaled to 1."""
        q0 = self.denominator[0]
        if q0 == 0:
            return self
        return RationalApproximant(
            tuple(c / q0 for c in self.numerator),
            tuple(c / q0 for c in self.denominator),
            self.method, self.k, self.n, dict(self.meta),
        )


def _trim(coeffs: list) -> list:
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def rational_form(method: str, beta, k: int, n: int, gamma: Sequence) -> RationalApproximant:
    """Explicit polynomial ratio equivalent to a transformation of partial sums.

    With ``s_m = sum_{v<=m} gamma_v z^v`` and ``omega_m = gamma_{m+1} z^{m+1}``,
    multiplying numerator and denominator by ``z^(n+k+1)`` gives

        P(z) = sum_j (-1)^j C(k,j) w_j z^(k-j) s_{n+j}(z) / gamma_{n+j+1}
        Q(z) = sum_j (-1)^j C(k,j) w_j z^(k-j) / gamma_{n+j+1}

    Parameters
    ----------
    method : {"delta", "d", "drummond-pade"}
    beta : weight shift (exact values keep the coefficients exact)
    k, n : order and base index
    gamma : coefficients ``gamma_0 ... gamma_{n+k+1}``

    Raises
    ------
    ParameterError
        If a required ``gamma_{n+j+1}`` vanishes.
    """
    if method not in METHOD_FAMILY:
        raise ConfigurationError(f"unknown method {method!r}")
    if len(gamma) < n + k + 2:
        raise DomainError(f"need gamma_0 ... gamma_{n + k + 1}")
    exact = is_exact(beta) and all(is_exact(g) for g in gamma[: n + k + 2])
    conv = Fraction if exact else to_mp
    ws = weights(METHOD_FAMILY[method], beta, n, k)
    num = [conv(0)] * (n + k + 1)
    den = [conv(0)] * (k + 1)
    for j in range(k + 1):
        g = gamma[n + j + 1]
        if g == 0:
            raise ParameterError(f"gamma_{n + j + 1} vanishes")
        c = (-1) ** j * math.comb(k, j) * conv(ws[j]) / conv(g)
        shift = k - j
        den[shift] += c
        for v in range(n + j + 1):
            num[shift + v] += c * conv(gamma[v])
    r = RationalApproximant(tuple(_trim(num)), tuple(den), method, k, n)
    return r.normalized()


# ---------------------------------------------------------------------------
# Wynn epsilon algorithm
# ---------------------------------------------------------------------------


@dataclass
class EpsilonTable:
    """Triangular epsilon table ``eps[k][n]`` for ``k >= -1`` and ``k + n <= depth``.

    Even columns hold Pade approximants: ``eps_{2k}^(n) = [n+k/k]`` for the
    partial sums of a power series.
    """

    cells: dict
    depth: int

    def __getitem__(self, key):
        return self.cells[key]

    def value(self, k: int, n: int):
        """``eps_k^(n)``."""
        try:
            return self.cells[(k, n)]
        except KeyError:
            raise DomainError(f"eps_{k}^({n}) is outside the table") from None

    def pade(self, k: int, n: int):
        """Pade approximant ``[n+k/k] = eps_{2k}^(n)``."""
        return self.value(2 * k, n)

    def staircase(self) -> list:
        """``[0/0], [1/0], [1/1], [2/1], [2/2], ...`` as far as the table reaches."""
        out = []
        m = 0
        while True:
            if (2 * m, 0) not in self.cells:
                break
            out.append(self.cells[(2 * m, 0)])
            if (2 * m, 1) not in self.cells:
                break
            out.append(self.cells[(2 * m, 1)])
            m += 1
        return out


def wynn_epsilon(s: Sequence, depth: int | None = None,
                 ctx: PrecisionContext | None = None, extra_digits: int = 0) -> EpsilonTable:
    """Build the epsilon table from ``s_0 ... s_depth``.

    ``eps_{-1}^(n) = 0``, ``eps_0^(n) = s_n`` and
    ``eps_{k+1}^(n) = eps_{k-1}^(n+1) + 1/(eps_k^(n+1) - eps_k^(n))``.
    Exact inputs give an exact table.  Floating inputs are processed with
    ``extra_digits`` beyond the context's guard digits.

    Raises
    ------
    BreakdownError
        When a difference ``eps_k^(n+1) - eps_k^(n)`` vanishes; ``location``
        holds ``(k, n)``.
    """
    if depth is None:
        depth = len(s) - 1
    if len(s) < depth + 1:
        raise DomainError("need at least depth+1 sequence elements")
    exact = all(is_exact(v) for v in s[: depth + 1])
    cells = {}
    if exact:
        for m in range(depth + 2):
            cells[(-1, m)] = Fraction(0)
        for m in range(depth + 1):
            cells[(0, m)] = Fraction(s[m])
        for k in range(0, depth):
            for m in range(depth - k):
                diff = cells[(k, m + 1)] - cells[(k, m)]
                if diff == 0:
                    raise BreakdownError(f"breakdown at eps_{k}^({m})", location=(k, m))
                cells[(k + 1, m)] = cells[(k - 1, m + 1)] + 1 / diff
        return EpsilonTable(cells, depth)
    ctx = resolve(ctx)
    extra = GUARD_DIGITS + extra_digits
    with ctx.workdps(extra):
        tiny = mpmath.mpf(10) ** (-(ctx.digits + extra) + 3)
        for m in range(depth + 2):
            cells[(-1, m)] = mpmath.mpf(0)
        for m in range(depth + 1):
            cells[(0, m)] = to_mp(s[m])
        for k in range(0, depth):
            for m in range(depth - k):
                a, b = cells[(k, m + 1)], cells[(k, m)]
                diff = a - b
                if diff == 0 or abs(diff) <= tiny * max(abs(a), abs(b)):
                    raise BreakdownError(f"breakdown at eps_{k}^({m})", location=(k, m))
                cells[(k + 1, m)] = cells[(k - 1, m + 1)] + 1 / diff
    rounded_cells = {key: rounded(v, ctx) for key, v in cells.items()}
    return EpsilonTable(rounded_cells, depth)
