"""Acceptance criteria 1-14, each reported as one PASS/FAIL line."""

import itertools
import math
import time
from fractions import Fraction

import mpmath
import pytest

from seqsum import from_polar, make_context
from seqsum.analysis import (
    DELTA,
    LEVIN_D,
    PADE,
    delta_denominator_poly,
    delta_error_asymptotic,
    delta_error_closed,
    delta_error_envelope,
    envelope_maxima,
    pade_denominator_zeros,
    pade_error_asymptotic,
    pade_error_closed,
    reference_value,
    sign_changes,
    superiority_check,
    transformation_error,
)
from seqsum.apx import (
    EULER_MOMENTS,
    FactorialSeries,
    delta_k_factorial_identity,
    factorial_series_eval,
    factorial_series_integral_rep,
    hankel_positive_range,
)
from seqsum.cli import PRESETS, SweepConfig, ZPoint, fit_exp_model, load_preset, main, render, run_sweep
from seqsum.euler import (
    euler_integral,
    partial_sums,
    remainder_difference,
    remainder_factorial_series_until,
    remainder_laguerre_integral,
    remainder_stieltjes,
)
from seqsum.pade import check_stieltjes_inequalities, pade_determinant_oracle, pade_euler_closed_form
from seqsum.specfun import exp_integral_e1
from seqsum.transforms import wynn_epsilon

pytestmark = pytest.mark.slow


def _rel(a, b, ctx):
    with ctx.workdps(20):
        a, b = mpmath.mpmathify(a), mpmath.mpmathify(b)
        return abs(a - b) / max(abs(a), abs(b))


def _z_grid(ctx):
    with ctx.workdps():
        return [1, 10, from_polar(10, mpmath.pi / 4, ctx)]


def test_c01_pade_triangle(criterion):
    bad = []
    for z in (Fraction(1, 2), 1, 10):
        for k in range(9):
            for n in range(9 - k):
                a = pade_euler_closed_form(k, n, z)
                b = wynn_epsilon(partial_sums(n + 2 * k, z)).pade(k, n)
                c = pade_determinant_oracle(k + n, k, z)
                if not (a == b == c):
                    bad.append((z, k, n))
    assert criterion(1, not bad, f"closed form = epsilon = determinant, exact, k+n<=8; mismatches {bad}")


def test_c02_delta_closed_form(criterion):
    ctx = make_context(60)
    worst = mpmath.mpf(0)
    for z in _z_grid(ctx):
        for n in (0, 1, 2):
            for k in range(1, 31):
                d = transformation_error(DELTA, k, n, z, ctx)
                worst = max(worst, _rel(d, delta_error_closed(k, n, z, ctx), ctx))
    assert criterion(2, worst <= 1e-10, f"max relative deviation {mpmath.nstr(worst, 3)} (tol 1e-10)")


def test_c03_pade_closed_form(criterion):
    ctx = make_context(60)
    worst = mpmath.mpf(0)
    for z in _z_grid(ctx):
        for n in (0, 1, 2):
            for k in range(0, 31):
                d = transformation_error(PADE, k, n, z, ctx)
                worst = max(worst, _rel(d, pade_error_closed(k, n, z, ctx), ctx))
    assert criterion(3, worst <= 1e-10, f"max relative deviation {mpmath.nstr(worst, 3)} (tol 1e-10)")


def test_c04_remainder_four_way(criterion):
    ctx = make_context(40)
    failures, worst_three = [], mpmath.mpf(0)
    for z in (Fraction(1, 2), 1, 10):
        for n in range(11):
            vals = [remainder_difference(n, z, ctx).value, remainder_stieltjes(n, z, ctx).value,
                    remainder_laguerre_integral(n, z, ctx).value]
            worst_three = max([worst_three] + [_rel(a, b, ctx) for a, b in itertools.combinations(vals, 2)])
            fs = remainder_factorial_series_until(n, z, "1e-20", max_terms=10 ** 6, ctx=ctx)
            dev = max(_rel(fs.value, v, ctx) for v in vals)
            if dev > 1e-12 or fs.flag:
                failures.append(f"(z={z}, n={n}: {mpmath.nstr(dev, 2)} after {fs.terms} terms)")
    ok = not failures and worst_three <= 1e-12
    detail = (f"integral forms agree to {mpmath.nstr(worst_three, 2)}; factorial series "
              f"short of last term < 1e-20 within 1e6 terms at {len(failures)}/33 points {' '.join(failures)}")
    assert criterion(4, ok, detail)


def test_c05_cut_mimicry(criterion):
    ctx = make_context(40)
    bad, worst = [], mpmath.mpf(0)
    for k in range(1, 21):
        for n in range(3):
            for zeros in (delta_denominator_poly(k, n, ctx), pade_denominator_zeros(k, n, ctx)):
                worst = max(worst, zeros.max_rel_imag)
                if not zeros.all_real_negative:
                    bad.append((zeros.variable, k, n))
    assert criterion(5, not bad, f"all zeros real negative for k<=20, n<=2; max |Im|/|z| {mpmath.nstr(worst, 2)}")


def test_c06_stieltjes_inequalities(criterion):
    ctx = make_context(60)
    reports = [check_stieltjes_inequalities(z, 10, ctx) for z in (1, 10)]
    count = sum(len(r.results) for r in reports)
    bad = [f.description for r in reports for f in r.failures()]
    assert criterion(6, not bad, f"{count} inequalities with positive margins; failures {bad}")


def _delta_errors(z, ks, ctx):
    e = reference_value(z, make_context(max(ctx.digits, 2 * max(ks) + 30) + 10))
    return [transformation_error(DELTA, k, 0, z, ctx, reference=e) for k in ks]


def test_c07_main_result_envelope(criterion):
    ctx = make_context(40)
    ks = list(range(20, 61))
    obs = _delta_errors(10, ks, ctx)
    asym = [delta_error_asymptotic(k, 10, ctx) for k in ks]
    peaks = envelope_maxima(ks, obs)
    ratios = [abs(obs[i]) / delta_error_envelope(ks[i], 10, ctx) for i in peaks]
    zo, za = sign_changes(ks, obs), sign_changes(ks, asym)
    aligned = len(zo) == len(za) and all(abs(a - b) <= 2 for a, b in zip(zo, za))
    ok = bool(peaks) and all(0.1 <= r <= 10 for r in ratios) and aligned
    detail = (f"peak/envelope in [{mpmath.nstr(min(ratios), 3)}, {mpmath.nstr(max(ratios), 3)}]; "
              f"crossings observed {zo} vs asymptotic {za}")
    assert criterion(7, ok, detail)


def test_c08_pade_envelope(criterion):
    ctx = make_context(40)
    ks = list(range(20, 101))
    e = reference_value(10, make_context(2 * 100 + 40))
    ratios = [transformation_error(PADE, k, 0, 10, ctx, reference=e) / pade_error_asymptotic(k, 0, 10, ctx)
              for k in ks]
    lo, hi = min(ratios), max(ratios)
    assert criterion(8, 0.2 <= lo and hi <= 5, f"observed/estimate in [{mpmath.nstr(lo, 3)}, {mpmath.nstr(hi, 3)}]")


def test_c09_superiority(criterion):
    rep = superiority_check(10, range(3, 61), make_context(40))
    detail = (f"violations {list(rep.violations)}; slopes delta {rep.delta_slope:.3f} (2/3), "
              f"pade {rep.pade_slope:.3f} (1/2)")
    assert criterion(9, rep.passed, detail)


def test_c10_levin_d_exponent(criterion):
    ctx = make_context(40)
    ks = list(range(10, 81))
    e = reference_value(10, make_context(2 * 80 + 40))
    errs = [transformation_error(LEVIN_D, k, 0, 10, ctx, reference=e) for k in ks]
    every = fit_exp_model(ks, errs)
    peaks = fit_exp_model(ks, errs, envelope=True)
    ok = abs(every.nu - 0.75) <= 0.1 and abs(peaks.nu - 0.75) <= 0.1
    assert criterion(10, ok, f"nu = {every.nu:.3f} (all {every.points} points), "
                             f"{peaks.nu:.3f} (envelope, {peaks.points} points)")


def test_c11_reference_constant(criterion):
    ctx = make_context(40)
    quad = euler_integral(1, ctx)
    with ctx.workdps():
        own = mpmath.e * exp_integral_e1(1, ctx)
        lib = mpmath.e * mpmath.e1(1)
    d1, d2 = _rel(quad, own, ctx), _rel(quad, lib, ctx)
    assert criterion(11, max(d1, d2) <= 1e-20,
                     f"quadrature vs e*E1(1): {mpmath.nstr(d1, 2)} (own E1), {mpmath.nstr(d2, 2)} (mpmath E1)")


def test_c12_appendix_suite(criterion):
    ctx = make_context(40)
    hankel_bad = hankel_positive_range(EULER_MOMENTS, 24)
    delta_bad = [(k, n, z) for z in (Fraction(1, 2), Fraction(3, 2), Fraction(7, 3))
                 for k in range(9) for n in range(5)
                 if (lambda p: p[0] != p[1])(delta_k_factorial_identity(k, n, z))]
    b = (Fraction(3, 2), -1, Fraction(2, 7), 4, Fraction(-5, 3), 1)
    worst = mpmath.mpf(0)
    for z in (Fraction(5, 2), Fraction(3, 10), Fraction(7, 1)):
        for length in range(1, len(b) + 1):
            f = FactorialSeries(b[:length], z)
            worst = max(worst, _rel(factorial_series_integral_rep(f, ctx), factorial_series_eval(f), ctx))
    ok = not hankel_bad and not delta_bad and worst <= mpmath.mpf(10) ** (-40 + 15)
    assert criterion(12, ok, f"Hankel failures {hankel_bad}; delta^k mismatches {delta_bad}; "
                             f"integral vs sum {mpmath.nstr(worst, 2)}")


def _decay(method, z, ctx, e):
    early = max(abs(transformation_error(method, k, 0, z, ctx, reference=e)) for k in range(10, 21))
    late = max(abs(transformation_error(method, k, 0, z, ctx, reference=e)) for k in range(50, 61))
    return float(mpmath.log10(early / late))


def test_c13_complex_arguments(criterion):
    ctx = make_context(40)
    rates = {}
    for label, frac in (("0", 0), ("pi/4", Fraction(1, 4)), ("pi/2", Fraction(1, 2)),
                        ("3pi/4", Fraction(3, 4)), ("9pi/10", Fraction(9, 10))):
        with ctx.workdps():
            z = from_polar(10, mpmath.pi * frac.numerator / frac.denominator, ctx) if frac else 10
        e = reference_value(z, make_context(2 * 60 + 40))
        rates[label] = (_decay(DELTA, z, ctx, e), _decay(PADE, z, ctx, e))
    order = ["0", "pi/4", "pi/2", "3pi/4"]
    ok = all(rates[p][m] > 0 for p in order for m in (0, 1))
    ok = ok and all(rates[a][m] > rates[b][m] for a, b in zip(order, order[1:]) for m in (0, 1))
    text = ", ".join(f"{p}: {d:.1f}/{q:.1f}" for p, (d, q) in rates.items())
    assert criterion(13, ok, f"decades gained k 10-20 -> 50-60 (delta/pade) {text}")


def test_c14_cli_determinism_and_presets(criterion, tmp_path):
    small = SweepConfig(methods=(DELTA, PADE, LEVIN_D), z_list=(ZPoint("10"), ZPoint("10", "3*pi/4")),
                        k_min=1, k_max=8, digits=40)
    same = render(run_sweep(small), small) == render(run_sweep(small), small)
    start = time.perf_counter()
    codes = [main(["preset", name, "--out", str(tmp_path / f"{name}.csv")]) for name in PRESETS]
    elapsed = time.perf_counter() - start
    first = (tmp_path / "fig1.csv").read_bytes()
    main(["preset", "fig1", "--out", str(tmp_path / "again.csv")])
    same = same and (tmp_path / "again.csv").read_bytes() == first
    rows = len(first.decode().splitlines()) - 2
    ok = same and all(c == 0 for c in codes) and elapsed < 600 and rows == 120
    assert criterion(14, ok, f"byte-identical reruns {same}; six presets at digits=80 in {elapsed:.0f} s; "
                             f"fig1 rows {rows}")
