import io
import json
import math
from fractions import Fraction

import mpmath
import pytest

from seqsum.analysis import DELTA, LEVIN_D, PADE
from seqsum.cli import (
    CSV_COLUMNS,
    EXIT_OK,
    EXIT_VALIDATION,
    PRESETS,
    SweepConfig,
    ZPoint,
    fit_exp_model,
    load_preset,
    main,
    parse_config,
    parse_phase,
    read_table,
    render,
    run_sweep,
)
from seqsum.errors import ConfigurationError, InsufficientDataError

SMALL = SweepConfig(methods=(DELTA, PADE), z_list=(ZPoint("10"), ZPoint("10", "pi/4")),
                    k_min=1, k_max=6, digits=40)


@pytest.fixture(scope="module")
def small_records():
    return run_sweep(SMALL)


def test_parse_phase():
    assert parse_phase("pi/4") == (Fraction(1, 4), True)
    assert parse_phase("9*pi/10") == (Fraction(9, 10), True)
    assert parse_phase("0.5") == (Fraction(1, 2), False)
    with pytest.raises(ConfigurationError):
        parse_phase("tau")


def test_zpoint(ctx40):
    assert ZPoint.parse("10@pi/2").text() == "10@pi/2"
    assert ZPoint("10").value(ctx40) == 10
    z = ZPoint("10", "pi/2").value(ctx40)
    assert abs(z - 10j) < mpmath.mpf(10) ** -35


@pytest.mark.parametrize("kw", [dict(methods=()), dict(methods=("newton",)), dict(k_min=0),
                                dict(k_min=5, k_max=4), dict(digits=20), dict(emit="xml"),
                                dict(z_list=())])
def test_config_validation(kw):
    with pytest.raises(ConfigurationError):
        SweepConfig(**kw)


def test_parse_config_roundtrip():
    cfg = parse_config(SMALL.canonical())
    assert cfg.canonical() == SMALL.canonical() and cfg.config_hash == SMALL.config_hash
    with pytest.raises(ConfigurationError):
        parse_config("colour=blue\n")


def test_presets_load():
    for name in PRESETS:
        cfg = load_preset(name)
        assert cfg.digits == 80
    assert load_preset("fig1").methods == (DELTA, PADE)
    assert [z.phase for z in (load_preset(n).z_list[0] for n in ("fig2a", "fig2b", "fig2c", "fig2d"))] == \
        ["pi/4", "pi/2", "3*pi/4", "9*pi/10"]
    assert load_preset("fig3").methods == (LEVIN_D,) and load_preset("fig3").k_max == 80


def test_sweep_shape(small_records):
    assert len(small_records) == 2 * 2 * 6
    for r in small_records:
        assert r.observed is not None and r.closed_form is not None
        assert (r.asymptotic is not None) == (r.k >= 1)
        assert abs(r.observed - r.closed_form) <= mpmath.mpf(10) ** -25 * abs(r.observed)


def test_render_csv(small_records):
    text = render(small_records, SMALL, "csv")
    lines = text.splitlines()
    assert lines[0] == f"# digits=40 config_hash={SMALL.config_hash}"
    assert lines[1].split(",") == list(CSV_COLUMNS)
    assert len(lines) == 2 + len(small_records)
    assert render(small_records, SMALL, "csv") == text


def test_render_json_roundtrip(small_records, tmp_path):
    text = render(small_records, SMALL, "json")
    doc = json.loads(text)
    assert set(doc) == {"digits", "config_hash", "records"}
    assert list(doc["records"][0]) == list(CSV_COLUMNS)
    assert json.dumps(doc, indent=1) + "\n" == text
    path = tmp_path / "t.json"
    path.write_text(text)
    assert read_table(str(path)) == doc


def test_read_csv(small_records, tmp_path):
    path = tmp_path / "t.csv"
    path.write_text(render(small_records, SMALL, "csv"))
    table = read_table(str(path))
    assert table["digits"] == 40 and len(table["records"]) == len(small_records)


def test_empty_table():
    with pytest.raises(ConfigurationError):
        render([], SMALL)


def test_fit_synthetic():
    ks = list(range(5, 61))
    errs = [2 * math.exp(-1.3 * k ** 0.7) for k in ks]
    fit = fit_exp_model(ks, errs)
    assert abs(fit.nu - 0.7) <= 0.005
    assert abs(fit.A / 2 - 1) <= 0.01 and abs(fit.alpha / 1.3 - 1) <= 0.01


def test_fit_insufficient():
    with pytest.raises(InsufficientDataError):
        fit_exp_model(list(range(1, 8)), [math.exp(-k) for k in range(1, 8)])
    with pytest.raises(InsufficientDataError):
        fit_exp_model(list(range(1, 20)), [0.0] * 19)


def test_main_sweep_and_fit(tmp_path):
    out = tmp_path / "d.csv"
    args = ["sweep", "--methods", "levin_d", "--kmin", "1", "--kmax", "14", "--digits", "40",
            "--z-mod", "10", "--out", str(out)]
    assert main(args) == EXIT_OK
    first = out.read_bytes()
    assert main(args) == EXIT_OK
    assert out.read_bytes() == first
    buf = io.StringIO()
    assert main(["fit", str(out), "--method", "levin_d", "--kmin", "4"], out=buf) == EXIT_OK
    assert "nu=" in buf.getvalue()


def test_jobs_do_not_change_output(tmp_path):
    args = ["sweep", "--methods", "delta,pade", "--kmin", "1", "--kmax", "6", "--digits", "40",
            "--z-mod", "1,10"]
    paths = []
    for jobs in ("1", "3"):
        paths.append(tmp_path / f"j{jobs}.csv")
        assert main(args + ["--jobs", jobs, "--out", str(paths[-1])]) == EXIT_OK
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_main_stdout_json():
    buf = io.StringIO()
    code = main(["sweep", "--methods", "pade", "--kmin", "1", "--kmax", "3", "--digits", "30",
                 "--format", "json", "--z-phase", "pi/4"], out=buf)
    assert code == EXIT_OK
    assert len(json.loads(buf.getvalue())["records"]) == 3


def test_main_validation_errors(tmp_path):
    assert main(["sweep", "--methods", "", "--kmax", "3", "--digits", "30"]) == EXIT_VALIDATION
    assert main(["sweep", "--kmin", "0"]) == EXIT_VALIDATION
    assert main(["sweep", "--kmax", "3", "--digits", "30", "--out", str(tmp_path / "no" / "x.csv")]) == EXIT_VALIDATION
    assert main(["fit", str(tmp_path / "missing.csv")]) == EXIT_VALIDATION


def test_main_verify():
    buf = io.StringIO()
    assert main(["verify", "--digits", "40"], out=buf) == EXIT_OK
    assert buf.getvalue().count("PASS") == 6
