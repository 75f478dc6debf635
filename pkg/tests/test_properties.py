"""Property-based checks of the algebraic invariants."""

import math
from fractions import Fraction

import mpmath
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from seqsum import from_polar, make_context, principal_power
from seqsum.analysis import delta_denominator_coefficients
from seqsum.apx import (
    EULER_MOMENTS,
    FactorialSeries,
    delta_k_factorial_identity,
    delta_k_factorial_series,
    factorial_series_eval,
    factorial_series_eval_beta,
    hankel_determinant,
    shifted_series_value,
)
from seqsum.cli import SweepConfig, ZPoint, fit_exp_model, parse_config
from seqsum.euler import coefficient, partial_sums, remainder_bound, remainder_difference
from seqsum.pade import (
    accuracy_through_order_check,
    pade_determinant_coefficients,
    pade_determinant_oracle,
    pade_euler_closed_form,
    pade_euler_rational,
)
from seqsum.specfun import laguerre, laguerre_coefficients
from seqsum.transforms import (
    CONSTANT,
    FAMILIES,
    POCHHAMMER,
    POWER,
    SequenceWindow,
    TransformSpec,
    levin_type,
    rational_form,
    wynn_epsilon,
)

CTX = make_context(40)
FAST = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])

rationals = st.fractions(min_value=Fraction(1, 20), max_value=20, max_denominator=50)
small_rationals = st.fractions(min_value=-10, max_value=10, max_denominator=12)
nonzero = small_rationals.filter(lambda x: x != 0)


@FAST
@given(mod=st.floats(0.01, 100), phase=st.floats(-3.1, 3.1))
def test_from_polar_round_trip(mod, phase):
    z = from_polar(mod, phase, CTX)
    with CTX.workdps():
        assert abs(abs(z) - mod) <= mpmath.mpf(10) ** -35 * mod
        assert abs(mpmath.arg(z) - phase) <= mpmath.mpf(10) ** -35


@FAST
@given(mod=st.floats(0.01, 100), phase=st.floats(-3.1, 3.1), p=st.fractions(-3, 3, max_denominator=7))
def test_principal_power_modulus(mod, phase, p):
    z = from_polar(mod, phase, CTX)
    w = principal_power(z, p, CTX)
    with CTX.workdps():
        expect = mpmath.mpf(mod) ** (mpmath.mpf(p.numerator) / p.denominator)
        assert abs(abs(w) - expect) <= mpmath.mpf(10) ** -33 * expect


@FAST
@given(n=st.integers(0, 25), alpha=st.integers(0, 4), x=small_rationals)
def test_laguerre_exact_coefficients(n, alpha, x):
    c = laguerre_coefficients(n, alpha)
    assert laguerre(n, alpha, x) == sum(cj * x ** j for j, cj in enumerate(c))
    assert c[0] == math.comb(n + alpha, n)


@FAST
@given(n=st.integers(1, 30), z=small_rationals)
def test_partial_sum_increments(n, z):
    s = partial_sums(n, z)
    assert all(s[m] - s[m - 1] == coefficient(m) * z ** m for m in range(1, n + 1))


@settings(max_examples=15, deadline=None)
@given(n=st.integers(0, 12), z=rationals)
def test_remainder_sign_and_bound(n, z):
    r = remainder_difference(n, z, CTX).value
    assert (r > 0) == (n % 2 == 0)
    assert abs(r) <= remainder_bound(n, z, CTX)


@FAST
@given(family=st.sampled_from(FAMILIES), n=st.integers(0, 5),
       s=st.lists(small_rationals, min_size=1, max_size=1), w=nonzero)
def test_order_zero_identity(family, n, s, w):
    assert levin_type(TransformSpec(family), SequenceWindow(s, [w], n), 0) == s[0]


@FAST
@given(family=st.sampled_from(FAMILIES), k=st.integers(1, 8), n=st.integers(0, 4),
       limit=small_rationals, data=st.data())
def test_model_sequence_exactness(family, k, n, limit, data):
    beta = 1 if family == CONSTANT else data.draw(st.fractions(Fraction(1, 2), 3, max_denominator=4))
    c = data.draw(st.lists(small_rationals, min_size=k, max_size=k))
    omega = data.draw(st.lists(nonzero, min_size=k + 1, max_size=k + 1))
    s = []
    for j in range(k + 1):
        m = n + j
        if family == POWER:
            corr = sum(ci / (beta + m) ** i for i, ci in enumerate(c))
        elif family == POCHHAMMER:
            corr = sum(ci / math.prod((beta + m + q for q in range(i)), start=Fraction(1))
                       for i, ci in enumerate(c))
        else:
            corr = sum(ci * Fraction(m) ** i for i, ci in enumerate(c))
        s.append(limit + omega[j] * corr)
    try:
        value = levin_type(TransformSpec(family, beta), SequenceWindow(s, omega, n), k)
    except ArithmeticError:
        return  # the random data can make the denominator sum vanish exactly
    assert value == limit


@FAST
@given(k=st.integers(0, 4), n=st.integers(0, 4), z=rationals)
def test_pade_triangle(k, n, z):
    closed = pade_euler_closed_form(k, n, z)
    assert closed == pade_determinant_oracle(k + n, k, z)
    assert closed == wynn_epsilon(partial_sums(n + 2 * k, z)).pade(k, n)


@FAST
@given(k=st.integers(0, 6), n=st.integers(0, 4))
def test_accuracy_through_order(k, n):
    r = pade_euler_rational(k, n)
    assert r.denominator[0] == 1
    assert accuracy_through_order_check(r, 2 * k + n + 1)
    for method in ("delta", "d", "drummond-pade") if k else ():
        assert accuracy_through_order_check(rational_form(method, 1, k, n, [coefficient(m) for m in range(k + n + 2)]),
                                            k + n + 2)


@FAST
@given(k=st.integers(1, 7), n=st.integers(0, 10))
def test_hankel_positive(k, n):
    assert hankel_determinant(EULER_MOMENTS, k, n) > 0


@FAST
@given(k=st.integers(0, 8), n=st.integers(0, 4), z=rationals)
def test_delta_k_identity(k, n, z):
    lhs, rhs = delta_k_factorial_identity(k, n, z)
    assert lhs == rhs


@FAST
@given(b=st.lists(small_rationals, min_size=1, max_size=6), z=rationals, k=st.integers(0, 4))
def test_factorial_series_forms(b, z, k):
    f = FactorialSeries(b, z)
    exact = factorial_series_eval(f)
    with CTX.workdps():
        approx = factorial_series_eval_beta(f, ctx=CTX)
        assert abs(approx - mpmath.mpf(exact.numerator) / exact.denominator) <= mpmath.mpf(10) ** -35 * (1 + abs(approx))
    assert delta_k_factorial_series(f, k) == shifted_series_value(f, k)


@FAST
@given(k=st.integers(1, 25), n=st.integers(0, 3))
def test_delta_denominator_positive(k, n):
    c = delta_denominator_coefficients(k, n)
    assert len(c) == k + 1 and all(x > 0 for x in c)


@FAST
@given(A=st.floats(0.1, 10), alpha=st.floats(0.3, 3), i=st.integers(0, 140))
def test_fit_recovers_model(A, alpha, i):
    # nu on the search grid, so the recovered A and alpha are not biased by grid spacing
    nu = round(0.4 + 0.005 * i, 3)
    ks = list(range(5, 61))
    errs = [A * math.exp(-alpha * k ** nu) for k in ks]
    fit = fit_exp_model(ks, errs)
    assert abs(fit.nu - nu) <= 0.005
    assert abs(fit.A / A - 1) <= 0.01 and abs(fit.alpha / alpha - 1) <= 0.01


@FAST
@given(methods=st.lists(st.sampled_from(["delta", "pade", "levin_d", "drummond"]), min_size=1, max_size=4, unique=True),
       k_min=st.integers(1, 20), span=st.integers(0, 40), digits=st.integers(30, 200),
       phases=st.lists(st.sampled_from(["0", "pi/4", "9*pi/10", "0.25"]), min_size=1, max_size=3))
def test_config_canonical_round_trip(methods, k_min, span, digits, phases):
    cfg = SweepConfig(tuple(methods), tuple(ZPoint("10", p) for p in phases), k_min, k_min + span, 0, digits)
    again = parse_config(cfg.canonical())
    assert again == cfg and again.config_hash == cfg.config_hash
