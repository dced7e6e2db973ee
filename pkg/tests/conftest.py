import random

import pytest

from wallskein.skeinid import sl4_hexagon
from wallskein.surface import annulus_mw, polygon, square, torus_one_hole

ACCEPTANCE: dict = {}


def record(n: int, ok: bool, detail: str = ""):
    ACCEPTANCE[n] = (ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")


def surfaces():
    return [square(), polygon(5), polygon(6), annulus_mw()]


def all_surfaces():
    return surfaces() + [torus_one_hole(), sl4_hexagon()]


@pytest.fixture
def rng():
    return random.Random(20261015)
