"""Command-line experiment driver: error sweeps, model fits and identity checks.

Subcommands
-----------
sweep   error-versus-order table for given methods and arguments
preset  run a named configuration shipped with the package
fit     fit ``A exp(-alpha k^nu)`` to errors from a sweep output file
verify  run a quick identity and inequality suite
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import re
import statistics
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Sequence

import mpmath

from .analysis import (
    DELTA,
    LEVIN_D,
    METHODS,
    MOMENTS_PATH,
    PADE,
    ErrorRecord,
    envelope_maxima,
    error_record,
    reference_value,
)
from .errors import (
    BreakdownError,
    ConfigurationError,
    DegenerateError,
    InsufficientDataError,
    SeqSumError,
)
from .numerics import PrecisionContext, make_context, to_mp

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_VALIDATION = 2
EXIT_BREAKDOWN = 3

CSV_COLUMNS = ("method", "k", "n", "z_re", "z_im", "err_re", "err_im", "err_abs",
               "closed_re", "closed_im", "asym_re", "asym_im", "status")
PRESETS = ("fig1", "fig2a", "fig2b", "fig2c", "fig2d", "fig3")

_PHASE_RE = re.compile(r"^\s*(?:([+-]?\d+(?:\.\d*)?)\s*\*\s*)?pi\s*(?:/\s*(\d+))?\s*$")


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------


def parse_phase(text: str):
    """Phase in radians from ``"0.5"``, ``"pi"``, ``"pi/4"`` or ``"9*pi/10"``.

    Returns a ``(Fraction, bool)`` pair: the value, and whether it is a multiple of pi.
    """
    text = str(text).strip()
    m = _PHASE_RE.match(text)
    if m:
        coef = Fraction(m.group(1)) if m.group(1) else Fraction(1)
        den = int(m.group(2)) if m.group(2) else 1
        return coef / den, True
    try:
        return Fraction(text), False
    except ValueError as exc:
        raise ConfigurationError(f"cannot parse phase {text!r}") from exc


@dataclass(frozen=True)
class ZPoint:
    """Argument ``modulus * exp(i phase)``; ``phase`` is stored as text for exact reproduction."""

    modulus: str
    phase: str = "0"

    def value(self, ctx: PrecisionContext):
        """The argument at working precision; exact when the phase is zero and the modulus rational."""
        mod = Fraction(self.modulus)
        ph, in_pi = parse_phase(self.phase)
        if mod <= 0:
            raise ConfigurationError("modulus must be positive")
        if ph == 0:
            return int(mod) if mod.denominator == 1 else mod
        with ctx.workdps():
            angle = to_mp(ph) * (mpmath.pi if in_pi else 1)
            out = to_mp(mod) * mpmath.expj(angle)
        return out

    def text(self) -> str:
        return f"{self.modulus}@{self.phase}"

    @classmethod
    def parse(cls, text: str) -> "ZPoint":
        mod, _, ph = text.strip().partition("@")
        try:
            Fraction(mod)
        except ValueError as exc:
            raise ConfigurationError(f"bad modulus in {text!r}") from exc
        parse_phase(ph or "0")
        return cls(mod.strip(), (ph or "0").strip())


@dataclass(frozen=True)
class SweepConfig:
    """Parameters of one error sweep.

    The working precision is raised internally to at least ``2 k + 30``
    digits for each order ``k``; ``digits`` sets the reported precision.
    """

    methods: tuple = (DELTA, PADE)
    z_list: tuple = (ZPoint("10"),)
    k_min: int = 1
    k_max: int = 60
    n: int = 0
    digits: int = 80
    output_path: str | None = None
    emit: str = "csv"
    closed: bool = True

    def __post_init__(self):
        if not self.methods:
            raise ConfigurationError("at least one method is required")
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown:
            raise ConfigurationError(f"unknown methods {unknown}; choose from {list(METHODS)}")
        if not self.z_list:
            raise ConfigurationError("at least one z value is required")
        if not 1 <= self.k_min <= self.k_max:
            raise ConfigurationError("need 1 <= k_min <= k_max")
        if self.n < 0:
            raise ConfigurationError("n must be nonnegative")
        if self.emit not in ("csv", "json"):
            raise ConfigurationError("emit must be csv or json")
        make_context(self.digits)

    def canonical(self) -> str:
        """Flat ``key=value`` text of everything that determines the table."""
        lines = [
            f"methods={','.join(self.methods)}",
            f"z_list={','.join(z.text() for z in self.z_list)}",
            f"k_min={self.k_min}",
            f"k_max={self.k_max}",
            f"n={self.n}",
            f"digits={self.digits}",
            f"closed={'yes' if self.closed else 'no'}",
        ]
        return "\n".join(lines) + "\n"

    @property
    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()[:16]


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "yes", "true", "on"):
        return True
    if t in ("0", "no", "false", "off"):
        return False
    raise ConfigurationError(f"not a boolean: {text!r}")


def parse_config(text: str) -> SweepConfig:
    """:class:`SweepConfig` from ``key=value`` lines (``#`` starts a comment)."""
    kw = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise ConfigurationError(f"expected key=value, got {raw!r}")
        key, val = key.strip(), val.strip()
        try:
            if key == "methods":
                kw[key] = tuple(m.strip() for m in val.split(",") if m.strip())
            elif key == "z_list":
                kw[key] = tuple(ZPoint.parse(z) for z in val.split(",") if z.strip())
            elif key in ("k_min", "k_max", "n", "digits"):
                kw[key] = int(val)
            elif key == "emit":
                kw[key] = val
            elif key == "output_path":
                kw[key] = val or None
            elif key == "closed":
                kw[key] = _bool(val)
            else:
                raise ConfigurationError(f"unknown key {key!r}")
        except ValueError as exc:
            if isinstance(exc, ConfigurationError):
                raise
            raise ConfigurationError(f"bad value for {key}: {val!r}") from exc
    return SweepConfig(**kw)


def load_preset(name: str) -> SweepConfig:
    if name not in PRESETS:
        raise ConfigurationError(f"unknown preset {name!r}; choose from {list(PRESETS)}")
    text = resources.files("seqsum").joinpath("presets", f"{name}.cfg").read_text()
    return parse_config(text)


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------


def _work_context(cfg: SweepConfig) -> PrecisionContext:
    return make_context(cfg.digits)


def _sweep_point(args):
    method, k, cfg, zp, e = args
    ctx = _work_context(cfg)
    z = zp.value(ctx.with_digits(max(cfg.digits, 2 * cfg.k_max + 30) + 20))
    try:
        return error_record(method, k, cfg.n, z, ctx, reference=e,
                            closed=cfg.closed and method in (DELTA, PADE),
                            closed_path=MOMENTS_PATH, pade_path="hyperu")
    except (BreakdownError, DegenerateError) as exc:
        return ErrorRecord(method, k, cfg.n, z, None, None, None,
                           f"breakdown: {type(exc).__name__}")


def run_sweep(cfg: SweepConfig, jobs: int = 1) -> list:
    """Error records ordered by (z, method, k).

    Closed-form columns use the fast routes: the moment recurrence for delta
    (see :func:`seqsum.analysis.delta_numerator_integral`) and mpmath's
    confluent ``U`` for Pade.  Breakdowns of a
    transformation are recorded with ``observed = None`` and
    a ``breakdown`` status instead of aborting the sweep.
    """
    ctx = _work_context(cfg)
    fine = ctx.with_digits(max(cfg.digits, 2 * cfg.k_max + 30) + 20)
    tasks = []
    for zp in cfg.z_list:
        e = reference_value(zp.value(fine), fine)
        for method in cfg.methods:
            for k in range(cfg.k_min, cfg.k_max + 1):
                tasks.append((method, k, cfg, zp, e))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sweep_point, tasks, chunksize=4))
    return [_sweep_point(t) for t in tasks]


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------


def _fmt(x, digits: int) -> str:
    if x is None:
        return ""
    if isinstance(x, Fraction):
        with mpmath.workdps(digits + 5):
            x = mpmath.mpf(x.numerator) / x.denominator
    return mpmath.nstr(x, digits, strip_zeros=False, min_fixed=1, max_fixed=0)


def _parts(x, digits: int):
    if x is None:
        return "", ""
    with mpmath.workdps(digits + 5):
        v = to_mp(x)
        return _fmt(mpmath.re(v), digits), _fmt(mpmath.im(v), digits)


def record_row(r: ErrorRecord, digits: int) -> dict:
    """One output row as strings, keyed by :data:`CSV_COLUMNS`."""
    z_re, z_im = _parts(r.z, digits)
    e_re, e_im = _parts(r.observed, digits)
    with mpmath.workdps(digits + 5):
        e_abs = "" if r.observed is None else _fmt(abs(to_mp(r.observed)), digits)
    c_re, c_im = _parts(r.closed_form, digits)
    a_re, a_im = _parts(r.asymptotic, digits)
    vals = (r.method, str(r.k), str(r.n), z_re, z_im, e_re, e_im, e_abs,
            c_re, c_im, a_re, a_im, r.status)
    return dict(zip(CSV_COLUMNS, vals))


def render(records: Sequence[ErrorRecord], cfg: SweepConfig, fmt: str = "csv") -> str:
    """Deterministic text of a table; CSV carries a ``#`` header with digits and config hash."""
    if not records:
        raise ConfigurationError("table is empty")
    rows = [record_row(r, cfg.digits) for r in records]
    if fmt == "csv":
        buf = io.StringIO()
        buf.write(f"# digits={cfg.digits} config_hash={cfg.config_hash}\n")
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue()
    if fmt == "json":
        doc = {"digits": cfg.digits, "config_hash": cfg.config_hash, "records": rows}
        return json.dumps(doc, indent=1) + "\n"
    raise ConfigurationError(f"unknown format {fmt!r}")


def emit(records: Sequence[ErrorRecord], cfg: SweepConfig, fmt: str | None = None,
         path: str | None = None) -> str:
    """Render and write to ``path`` (or ``cfg.output_path``); returns the text."""
    fmt = fmt or cfg.emit
    text = render(records, cfg, fmt)
    path = path or cfg.output_path
    if path:
        Path(path).write_text(text)
    return text


def read_table(path: str) -> dict:
    """Parse an emitted CSV or JSON file into ``{"digits", "config_hash", "records"}``."""
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        return json.loads(text)
    lines = text.splitlines()
    header = {}
    if lines and lines[0].startswith("#"):
        for item in lines[0][1:].split():
            key, _, val = item.partition("=")
            header[key] = val
        lines = lines[1:]
    rows = list(csv.DictReader(lines))
    return {"digits": int(header.get("digits", 0)), "config_hash": header.get("config_hash", ""),
            "records": rows}


# ---------------------------------------------------------------------------
# Exponential model fit
# ---------------------------------------------------------------------------

NU_MIN, NU_MAX, NU_STEP = 0.4, 1.1, 0.005


@dataclass(frozen=True)
class FitResult:
    """Best fit of ``A exp(-alpha k^nu)``; ``residual`` is the rms misfit of ``log|error|``."""

    A: float
    alpha: float
    nu: float
    residual: float
    points: int = 0


def fit_exp_model(ks: Sequence[int], errors: Sequence, k_range: tuple | None = None,
                  envelope: bool = False) -> FitResult:
    """Grid search over ``nu`` with a linear least-squares fit of ``log|err|`` on ``k^nu``.

    Parameters
    ----------
    ks, errors : orders and transformation errors
    k_range : inclusive ``(k_lo, k_hi)`` restriction
    envelope : fit only local maxima of ``|error|`` (for oscillating errors)

    Raises
    ------
    InsufficientDataError
        With fewer than 8 usable (nonzero, finite) points.
    """
    pts = [(k, e) for k, e in zip(ks, errors) if e is not None]
    if k_range is not None:
        pts = [(k, e) for k, e in pts if k_range[0] <= k <= k_range[1]]
    if envelope:
        idx = envelope_maxima([k for k, _ in pts], [e for _, e in pts])
        pts = [pts[i] for i in idx]
    data = []
    for k, e in pts:
        mag = abs(to_mp(e)) if not isinstance(e, float) else abs(e)
        if mag != 0 and mpmath.isfinite(mag):
            data.append((k, float(mpmath.log(mag))))
    if len(data) < 8:
        raise InsufficientDataError(f"need at least 8 nonzero points, got {len(data)}")
    best = None
    steps = round((NU_MAX - NU_MIN) / NU_STEP)
    for i in range(steps + 1):
        nu = NU_MIN + i * NU_STEP
        xs = [k ** nu for k, _ in data]
        ys = [y for _, y in data]
        slope, intercept = statistics.linear_regression(xs, ys)
        res = math.sqrt(sum((intercept + slope * x - y) ** 2 for x, y in zip(xs, ys)) / len(xs))
        if best is None or res < best[0]:
            best = (res, nu, intercept, slope)
    res, nu, intercept, slope = best
    return FitResult(math.exp(intercept), -slope, round(nu, 6), res, len(data))


# ---------------------------------------------------------------------------
# Verification suite
# ---------------------------------------------------------------------------


def verify(digits: int = 60, out=sys.stdout) -> int:
    """Quick checks of the core identities; returns an exit code."""
    from .analysis import delta_error_closed, delta_error_direct, pade_error_closed, pade_error_direct
    from .euler import euler_integral, remainder_difference, remainder_laguerre_integral, remainder_stieltjes
    from .pade import check_stieltjes_inequalities, pade_determinant_oracle, pade_euler_closed_form
    from .transforms import wynn_epsilon
    from .euler import partial_sums

    ctx = make_context(digits)
    tol = mpmath.mpf(10) ** -10
    results = []

    def rel(a, b):
        with ctx.workdps():
            a, b = to_mp(a), to_mp(b)
            return abs(a - b) / max(abs(a), abs(b))

    try:
        z = Fraction(1, 2)
        tri = all(
            pade_euler_closed_form(k, n, z) == pade_determinant_oracle(k + n, k, z)
            == wynn_epsilon(partial_sums(n + 2 * k, z)).pade(k, n)
            for k in range(5) for n in range(5 - k)
        )
        results.append(("pade triangle", tri))
        d_ok = all(rel(delta_error_direct(k, n, 10, ctx), delta_error_closed(k, n, 10, ctx)) <= tol
                   for k in (1, 5, 10) for n in (0, 1))
        results.append(("delta closed form", d_ok))
        p_ok = all(rel(pade_error_direct(k, n, 10, ctx), pade_error_closed(k, n, 10, ctx)) <= tol
                   for k in (1, 5, 10) for n in (0, 1))
        results.append(("pade closed form", p_ok))
        r_ok = True
        for n in (0, 3):
            a = remainder_difference(n, 1, ctx).value
            r_ok &= rel(a, remainder_stieltjes(n, 1, ctx).value) <= tol
            r_ok &= rel(a, remainder_laguerre_integral(n, 1, ctx).value) <= tol
        results.append(("remainder identity", r_ok))
        results.append(("stieltjes inequalities", check_stieltjes_inequalities(1, 4, ctx).passed))
        e1 = euler_integral(1, ctx, method="e1")
        results.append(("euler integral", rel(euler_integral(1, ctx), e1) <= tol))
    except BreakdownError as exc:
        print(f"BREAKDOWN {exc}", file=out)
        return EXIT_BREAKDOWN
    for name, ok in results:
        print(f"{'PASS' if ok else 'FAIL'} {name}", file=out)
    return EXIT_OK if all(ok for _, ok in results) else EXIT_FAILED


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _sweep_overrides(cfg: SweepConfig, a) -> SweepConfig:
    kw = {
        "methods": cfg.methods, "z_list": cfg.z_list, "k_min": cfg.k_min, "k_max": cfg.k_max,
        "n": cfg.n, "digits": cfg.digits, "output_path": cfg.output_path, "emit": cfg.emit,
        "closed": cfg.closed,
    }
    if a.methods is not None:
        kw["methods"] = tuple(m.strip() for m in a.methods.split(",") if m.strip())
    if a.z_mod is not None or a.z_phase is not None:
        mods = (a.z_mod or "10").split(",")
        phases = (a.z_phase or "0").split(",")
        if len(mods) == 1:
            mods = mods * len(phases)
        if len(phases) == 1:
            phases = phases * len(mods)
        if len(mods) != len(phases):
            raise ConfigurationError("--z-mod and --z-phase lists differ in length")
        kw["z_list"] = tuple(ZPoint.parse(f"{m}@{p}") for m, p in zip(mods, phases))
    for attr, key in (("kmin", "k_min"), ("kmax", "k_max"), ("n", "n"), ("digits", "digits")):
        if getattr(a, attr) is not None:
            kw[key] = getattr(a, attr)
    if a.out is not None:
        kw["output_path"] = a.out
    if a.format is not None:
        kw["emit"] = a.format
    if a.no_closed:
        kw["closed"] = False
    return SweepConfig(**kw)


def _add_sweep_flags(p):
    p.add_argument("--digits", type=int)
    p.add_argument("--kmin", type=int)
    p.add_argument("--kmax", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--z-mod", help="modulus, or comma-separated list")
    p.add_argument("--z-phase", help="phase in radians; accepts forms like pi/4 or 9*pi/10")
    p.add_argument("--methods", help=f"comma-separated subset of {','.join(METHODS)}")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--no-closed", action="store_true", help="skip closed-form columns")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="seqsum", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="error-versus-order sweep")
    p.add_argument("--config", help="key=value configuration file")
    _add_sweep_flags(p)

    p = sub.add_parser("preset", help="run a shipped configuration")
    p.add_argument("name", choices=PRESETS)
    _add_sweep_flags(p)

    p = sub.add_parser("fit", help="fit the exponential model to a sweep output")
    p.add_argument("input", help="CSV or JSON written by sweep/preset")
    p.add_argument("--method", default=LEVIN_D)
    p.add_argument("--kmin", type=int)
    p.add_argument("--kmax", type=int)
    p.add_argument("--envelope", action="store_true", help="fit local maxima of |error| only")

    p = sub.add_parser("verify", help="run the identity and inequality suite")
    p.add_argument("--digits", type=int, default=60)
    return parser


def _cmd_sweep(cfg: SweepConfig, jobs: int, out) -> int:
    records = run_sweep(cfg, jobs=jobs)
    text = emit(records, cfg)
    if not cfg.output_path:
        out.write(text)
    return EXIT_OK


def _cmd_fit(a, out) -> int:
    table = read_table(a.input)
    groups = {}
    for row in table["records"]:
        if row["method"] != a.method or not row["err_abs"]:
            continue
        groups.setdefault((row["z_re"], row["z_im"]), []).append(row)
    if not groups:
        raise InsufficientDataError(f"no {a.method} rows in {a.input}")
    k_range = (a.kmin or 1, a.kmax or 10 ** 9)
    for (zr, zi), rows in groups.items():
        ks = [int(r["k"]) for r in rows]
        errs = [mpmath.mpc(r["err_re"], r["err_im"] or "0") for r in rows]
        fit = fit_exp_model(ks, errs, k_range, envelope=a.envelope)
        out.write(f"z=({zr}, {zi}) A={fit.A:.6g} alpha={fit.alpha:.6g} nu={fit.nu:.3f} "
                  f"residual={fit.residual:.4g} points={fit.points}\n")
    return EXIT_OK


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    a = parser.parse_args(argv)
    try:
        if a.command == "sweep":
            base = parse_config(Path(a.config).read_text()) if a.config else SweepConfig()
            return _cmd_sweep(_sweep_overrides(base, a), a.jobs, out)
        if a.command == "preset":
            return _cmd_sweep(_sweep_overrides(load_preset(a.name), a), a.jobs, out)
        if a.command == "fit":
            return _cmd_fit(a, out)
        if a.command == "verify":
            return verify(a.digits, out)
    except (ConfigurationError, InsufficientDataError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except BreakdownError as exc:
        print(f"breakdown: {exc}", file=sys.stderr)
        return EXIT_BREAKDOWN
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
