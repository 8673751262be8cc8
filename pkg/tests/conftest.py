import random

import pytest

from gmcd.gauss_manin import GaussManin, cd_filtration_table, sigma_factors
from gmcd.tame import clingher_doran, elliptic


@pytest.fixture(scope="session")
def cd():
    return clingher_doran()


@pytest.fixture(scope="session")
def ell():
    return elliptic()


@pytest.fixture(scope="session")
def ell_gm(ell):
    return GaussManin(ell)


@pytest.fixture(scope="session")
def cd_table(cd):
    return cd_filtration_table(cd)


@pytest.fixture(scope="session")
def sigma(cd):
    return sigma_factors(cd.ring)


@pytest.fixture
def rng():
    return random.Random(20261016)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    out = [mod.LINES[k] for k in sorted(mod.LINES)] if mod else []
    if out:
        terminalreporter.section("acceptance criteria")
        for line in out:
            terminalreporter.write_line(line)
