from fractions import Fraction

import mpmath
import pytest

from seqsum import make_context

# e * E1(1), from mpmath's exponential integral (independent of this package)
with mpmath.workdps(70):
    GOMPERTZ = mpmath.mpf("0.596347362323194074341078499369279376074177860152548781573485")
    ONE_MINUS_GOMPERTZ = 1 - GOMPERTZ


@pytest.fixture
def ctx40():
    return make_context(40)


@pytest.fixture
def ctx60():
    return make_context(60)


def rel(a, b, digits=80):
    with mpmath.workdps(digits):
        a, b = (mpmath.mpf(x.numerator) / x.denominator if isinstance(x, Fraction) else mpmath.mpmathify(x)
                for x in (a, b))
        if a == b:
            return mpmath.mpf(0)
        return abs(a - b) / max(abs(a), abs(b))


_ACCEPTANCE = {}


@pytest.fixture
def criterion():
    """Record one acceptance line: ``criterion(number, passed, detail)``."""

    def record(number, passed, detail=""):
        _ACCEPTANCE[number] = (bool(passed), detail)
        print(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        passed, detail = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
