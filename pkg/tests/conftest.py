import warnings

import numpy as np
import pytest

from logcrit.catalog import ftilde, ftilde_family, hhat
from logcrit.lattice import ConvexLift, LatticePolygon
from logcrit.poly import LaurentPolynomial
from logcrit.viro import ViroFamily

warnings.filterwarnings("ignore", category=RuntimeWarning)

# acceptance lines collected during the run, printed in the summary
ACCEPTANCE = {}


def C(x):
    return LaurentPolynomial.constant(x)


Z = LaurentPolynomial.var("z")
W = LaurentPolynomial.var("w")


def weight2_family() -> ViroFamily:
    """Generic coefficients on [0,2]^2 with lift max(0, y-1): one interior
    edge of lattice length 2."""
    rng = np.random.default_rng(7)
    sq = LatticePolygon.hull([(0, 0), (2, 0), (2, 2), (0, 2)])
    base = LaurentPolynomial({p: complex(*rng.normal(size=2)) for p in sq.lattice_points()})
    return ViroFamily(base, ConvexLift.from_function(sq, lambda p: max(0, p[1] - 1)))


def f1() -> LaurentPolynomial:
    return W * (Z + C(2.6)) + (Z + C(2.5)) * (Z + C(1))


@pytest.fixture(scope="session")
def fam_ftilde():
    return ftilde_family()


@pytest.fixture(scope="session")
def fam_weight2():
    return weight2_family()


@pytest.fixture(scope="session")
def poly_ftilde():
    return ftilde()


@pytest.fixture(scope="session")
def poly_hhat():
    return hhat()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
