"""Extended-precision arithmetic context.

All floating values are mpmath ``mpf`` (real) and ``mpc`` (complex, stored in
rectangular form).  A :class:`PrecisionContext` fixes the number of decimal
digits every library operation must deliver; operations evaluate internally
with a few guard digits and hand back values at that precision.
"""

from __future__ import annotations

import contextlib
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import mpmath

from .errors import ConfigurationError, DomainError

XReal = mpmath.mpf
XComplex = mpmath.mpc
Number = Union[int, Fraction, float, complex, mpmath.mpf, mpmath.mpc]

MIN_DIGITS = 30
GUARD_DIGITS = 10


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision shared by every operation.

    Parameters
    ----------
    digits : int
        Decimal digits of working precision, at least 30.
    quad_rel_tol : float or str, optional
        Relative tolerance targeted by quadrature.  Defaults to ``10**(10 - digits)``,
        which is also the smallest value accepted.
    """

    digits: int
    quad_rel_tol: object = field(default=None)

    def __post_init__(self):
        if not isinstance(self.digits, int) or isinstance(self.digits, bool):
            raise ConfigurationError(f"digits must be an int, got {self.digits!r}")
        if self.digits < MIN_DIGITS:
            raise ConfigurationError(f"digits must be >= {MIN_DIGITS}, got {self.digits}")
        floor = mpmath.mpf(10) ** (10 - self.digits)
        if self.quad_rel_tol is None:
            object.__setattr__(self, "quad_rel_tol", floor)
        else:
            with mpmath.workdps(self.digits + GUARD_DIGITS):
                tol = mpmath.mpf(self.quad_rel_tol)
                if tol < floor * (1 - mpmath.mpf(10) ** -5):
                    raise ConfigurationError(
                        f"quad_rel_tol must be >= 1e{10 - self.digits}, got {self.quad_rel_tol}"
                    )
            object.__setattr__(self, "quad_rel_tol", tol)

    @property
    def eps(self) -> mpmath.mpf:
        """Unit of the last requested decimal digit, ``10**(-digits)``."""
        return mpmath.mpf(10) ** (-self.digits)

    def workdps(self, extra: int = GUARD_DIGITS):
        """Context manager setting mpmath to ``digits + extra`` decimal digits."""
        return mpmath.workdps(self.digits + extra)

    def with_digits(self, digits: int) -> "PrecisionContext":
        """Copy of this context at a different precision (default tolerance)."""
        return PrecisionContext(digits)


def make_context(digits: int) -> PrecisionContext:
    """Build a precision context with ``digits`` decimal digits (at least 30)."""
    return PrecisionContext(digits)


_DEFAULT = PrecisionContext(50)


def default_context() -> PrecisionContext:
    """The 50-digit context used when a caller passes ``ctx=None``."""
    return _DEFAULT


def resolve(ctx: PrecisionContext | None) -> PrecisionContext:
    return _DEFAULT if ctx is None else ctx


def to_mp(x: Number):
    """Convert ``x`` to mpf or mpc without losing information where possible.

    mpf/mpc values pass through unrounded, ints and floats convert exactly,
    and Fractions are divided at the current mpmath precision.
    """
    if isinstance(x, (mpmath.mpf, mpmath.mpc)):
        return x
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    if isinstance(x, int):
        with mpmath.workprec(max(53, x.bit_length())):
            return mpmath.mpf(x)
    if isinstance(x, complex):
        return mpmath.mpc(x)
    return mpmath.mpf(x)


def to_complex(x: Number) -> mpmath.mpc:
    """Convert ``x`` to mpc (see :func:`to_mp`)."""
    x = to_mp(x)
    if isinstance(x, mpmath.mpc):
        return x
    with mpmath.workprec(max(mpmath.mp.prec, x._mpf_[3] if x._mpf_[1] else 53)):
        return mpmath.mpc(x)


def is_exact(x) -> bool:
    """True for Python ints and Fractions (inputs that admit exact arithmetic)."""
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def rounded(x, ctx: PrecisionContext):
    """Round an mpf/mpc to ``ctx.digits`` digits (exact values pass through)."""
    if is_exact(x):
        return x
    with mpmath.workdps(ctx.digits):
        return +x


def from_polar(modulus: Number, phase: Number, ctx: PrecisionContext | None = None) -> mpmath.mpc:
    """Complex number ``modulus * exp(i*phase)`` in rectangular form.

    Parameters
    ----------
    modulus : real, nonnegative
    phase : real, radians

    Returns
    -------
    mpc
    """
    ctx = resolve(ctx)
    with ctx.workdps():
        r = to_mp(modulus)
        if r < 0:
            raise DomainError("modulus must be nonnegative")
        phi = to_mp(phase)
        out = mpmath.mpc(r * mpmath.cos(phi), r * mpmath.sin(phi))
    return rounded(out, ctx)


def principal_arg(z: Number, ctx: PrecisionContext | None = None) -> mpmath.mpf:
    """Principal argument of ``z`` in (-pi, pi]."""
    ctx = resolve(ctx)
    with ctx.workdps():
        out = mpmath.arg(to_complex(z))
    return rounded(out, ctx)


def principal_power(z: Number, p: Number, ctx: PrecisionContext | None = None) -> mpmath.mpc:
    """Principal power ``exp(p * (log|z| + i arg z))`` with arg z in (-pi, pi].

    Raises
    ------
    DomainError
        If ``z == 0`` and ``p <= 0``.
    """
    ctx = resolve(ctx)
    with ctx.workdps():
        zc = to_complex(z)
        pp = to_mp(p)
        if zc == 0:
            if mpmath.re(pp) <= 0:
                raise DomainError("0 raised to a nonpositive power")
            return mpmath.mpc(0)
        out = mpmath.exp(pp * (mpmath.log(abs(zc)) + 1j * mpmath.arg(zc)))
    return rounded(out, ctx)


def on_cut(z: Number) -> bool:
    """True when ``z`` lies on the branch cut (-inf, 0] of the Euler integral."""
    if is_exact(z):
        return z <= 0
    zc = mpmath.mpc(z)
    return zc.imag == 0 and zc.real <= 0


def relative_difference(a, b):
    """``|a - b| / max(|a|, |b|)`` (zero when both vanish)."""
    if is_exact(a) and is_exact(b):
        a, b = Fraction(a), Fraction(b)
        scale = max(abs(a), abs(b))
        return Fraction(0) if scale == 0 else abs(a - b) / scale
    a, b = to_mp(a), to_mp(b)
    scale = max(abs(a), abs(b))
    return mpmath.mpf(0) if scale == 0 else abs(a - b) / scale


@contextlib.contextmanager
def precision(ctx: PrecisionContext, extra: int = GUARD_DIGITS):
    """Alias of ``ctx.workdps(extra)`` usable where a context object is optional."""
    with mpmath.workdps(ctx.digits + extra):
        yield
