from fractions import Fraction

import mpmath
import pytest

from seqsum.errors import CutError, DomainError, ParameterError, QuadratureError
from seqsum.euler import euler_integral, remainder_difference
from seqsum.specfun import (
    HALF_LINE,
    UNIT,
    QuadratureProblem,
    TerminatingHyp,
    exp_integral_e1,
    hyp_terminating,
    integrate,
    kummer_u_scaled,
    laguerre,
    laguerre_asymptotic,
    laguerre_coefficients,
    quad,
)

from conftest import GOMPERTZ, ONE_MINUS_GOMPERTZ, rel


def test_laguerre_examples():
    assert laguerre(0, Fraction(5, 2), Fraction(7, 3)) == 1
    assert laguerre(1, -1, Fraction(7, 3)) == Fraction(-7, 3)
    assert laguerre(2, 0, 1) == Fraction(-1, 2)


def test_laguerre_matches_mpmath(ctx40):
    with ctx40.workdps():
        x = mpmath.mpf("0.37")
        ref = mpmath.laguerre(12, 2, x)
    assert rel(laguerre(12, 2, x, ctx40), ref) < mpmath.mpf(10) ** -35


def test_laguerre_coefficients_agree_with_recurrence():
    c = laguerre_coefficients(6, 3)
    x = Fraction(2, 7)
    assert sum(cj * x ** j for j, cj in enumerate(c)) == laguerre(6, 3, x)


def test_hyp_examples():
    assert hyp_terminating(TerminatingHyp((0,), (5,), Fraction(3))) == 1
    t = Fraction(2, 9)
    assert hyp_terminating(TerminatingHyp((-1, 1), (1,), t)) == 1 - t
    z = Fraction(7, 3)
    assert hyp_terminating(TerminatingHyp((-1, 1), (1, 2), -1 / z)) == 1 + 1 / (2 * z)


def test_hyp_parameter_error():
    with pytest.raises(ParameterError):
        TerminatingHyp((-3, 1), (-1,), Fraction(1, 2))
    with pytest.raises(ParameterError):
        TerminatingHyp((Fraction(1, 2),), (1,), 1)


def test_hyp_real_inputs_give_real(ctx40):
    with ctx40.workdps():
        v = hyp_terminating(TerminatingHyp((-7, mpmath.mpf("2.5")), (mpmath.mpf("1.5"),), mpmath.mpf("0.3")), ctx40)
    assert not isinstance(v, mpmath.mpc) or abs(v.imag) <= mpmath.mpf(10) ** -35 * abs(v)


def test_confluent_laguerre_identity(ctx40):
    with ctx40.workdps():
        z = mpmath.mpf("2.5")
        for k in range(0, 31, 6):
            for n in range(4):
                lhs = hyp_terminating(TerminatingHyp((-k,), (n + 2,), -1 / z), ctx40)
                rhs = mpmath.factorial(k) / mpmath.rf(n + 2, k) * laguerre(k, n + 1, -1 / z, ctx40)
                assert rel(lhs, rhs) <= mpmath.mpf(10) ** -28


def test_laguerre_zeros_positive():
    for k in range(1, 16):
        for alpha in (0, Fraction(1, 2), 3):
            coeffs = [float(c) for c in laguerre_coefficients(k, alpha)]
            roots = mpmath.polyroots(coeffs[::-1], maxsteps=200, extraprec=200)
            assert all(abs(mpmath.im(r)) < 1e-8 and mpmath.re(r) > 0 for r in roots)


def test_quad_examples(ctx40):
    assert rel(integrate(lambda t: mpmath.exp(-t), HALF_LINE, ctx40), 1) < mpmath.mpf(10) ** -30
    assert rel(integrate(lambda t: t ** 5, UNIT, ctx40), Fraction(1, 6)) < mpmath.mpf(10) ** -30
    v = quad(QuadratureProblem(lambda t: mpmath.exp(-t) / (1 + t), HALF_LINE), ctx40)
    assert rel(v, GOMPERTZ) < mpmath.mpf(10) ** -30


def test_quad_agrees_with_mpmath_at_high_precision():
    from seqsum import make_context
    ctx = make_context(90)
    f = lambda t: mpmath.sqrt(t) * mpmath.log(1 + t)
    with mpmath.workdps(100):
        ref = mpmath.quad(f, [0, 1])
    assert rel(integrate(f, UNIT, ctx), ref) < mpmath.mpf(10) ** -80


def test_quad_invariant_under_tighter_tolerance(ctx40):
    f = lambda t: mpmath.exp(-t) / (1 + 3 * t)
    a = integrate(f, HALF_LINE, ctx40)
    b = integrate(f, HALF_LINE, ctx40.with_digits(80))
    assert rel(a, b) <= ctx40.quad_rel_tol


def test_quad_failure():
    from seqsum import make_context
    with pytest.raises(QuadratureError):
        integrate(lambda t: mpmath.sin(1 / t) / t ** 2, UNIT, make_context(30))


def test_e1_values(ctx40):
    with ctx40.workdps():
        assert rel(mpmath.e * exp_integral_e1(1, ctx40), GOMPERTZ) < mpmath.mpf(10) ** -38
        for x in ("0.25", "3", "40"):
            assert rel(exp_integral_e1(mpmath.mpf(x), ctx40), mpmath.e1(mpmath.mpf(x))) < mpmath.mpf(10) ** -36
        zc = mpmath.mpc(2, 1)
        assert rel(exp_integral_e1(zc, ctx40), mpmath.e1(zc)) < mpmath.mpf(10) ** -36


def test_e1_large_argument_and_positivity(ctx40):
    with ctx40.workdps():
        x = mpmath.mpf(10) ** 4
        v = x * mpmath.exp(x) * exp_integral_e1(x, ctx40)
        assert abs(v - 1) < mpmath.mpf(10) ** -3
    assert exp_integral_e1(Fraction(1, 2), ctx40) > 0


def test_e1_cut():
    with pytest.raises(CutError):
        exp_integral_e1(-2)


def test_kummer_examples(ctx40):
    assert rel(kummer_u_scaled(0, 0, 1, ctx40), ONE_MINUS_GOMPERTZ) < mpmath.mpf(10) ** -35
    # k! U(k+1, -n, 1/z) from mpmath's confluent hypergeometric function
    with ctx40.workdps():
        for k, n, z in ((1, 0, 10), (4, 2, mpmath.mpf("0.5")), (7, 1, mpmath.mpc(3, 4))):
            ref = mpmath.factorial(k) * mpmath.hyperu(k + 1, -n, 1 / mpmath.mpmathify(z))
            assert rel(kummer_u_scaled(k, n, z, ctx40), ref) < mpmath.mpf(10) ** -33


def test_kummer_equals_difference_of_normalized_remainders(ctx40):
    # Delta^k over n of R_n / ((-1)^(n+1) (n+1)! z^(n+1)) = (-1)^(k+1) k! U(k+1, -n, 1/z) / z
    z, n = 10, 1
    work = ctx40.with_digits(60)

    def rho(m):
        r = remainder_difference(m, z, work).value
        with work.workdps():
            return r / ((-1) ** (m + 1) * mpmath.factorial(m + 1) * mpmath.mpf(z) ** (m + 1))

    for k in (1, 3):
        with work.workdps():
            diff = sum((-1) ** (k - j) * mpmath.binomial(k, j) * rho(n + j) for j in range(k + 1))
            expect = (-1) ** (k + 1) * kummer_u_scaled(k, n, z, work) / z
        assert rel(diff, expect) < mpmath.mpf(10) ** -30


def test_kummer_cut():
    with pytest.raises(CutError):
        kummer_u_scaled(2, 0, -3)


def test_fejer(ctx40):
    n = 10 ** 4
    a = laguerre_asymptotic("fejer", n, 0, 1, ctx40)
    b = laguerre(n, 0, mpmath.mpf(1), ctx40)
    assert rel(a, b) <= 0.05


def test_perron_converges(ctx40):
    with ctx40.workdps():
        x = -mpmath.mpf(1) / 10
    r = [abs(laguerre_asymptotic("perron", n, 1, x, ctx40) / laguerre(n, 1, x, ctx40) - 1) for n in (200, 2000)]
    assert r[1] < r[0] < 0.05


def test_interpolating_matches_fejer(ctx40):
    a = laguerre_asymptotic("interpolating", 500, 1, 3, ctx40)
    b = laguerre_asymptotic("fejer", 500, 1, 3, ctx40)
    assert abs(a - b) <= mpmath.mpf(10) ** -30 * abs(b) + mpmath.mpf(10) ** -25


def test_asymptotic_domains():
    with pytest.raises(DomainError):
        laguerre_asymptotic("fejer", 10, 0, -1)
    with pytest.raises(DomainError):
        laguerre_asymptotic("perron", 10, 0, 2)
    with pytest.raises(DomainError):
        laguerre_asymptotic("bogus", 10, 0, 2)
