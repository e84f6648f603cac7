"""Shared fixtures: the fixed-seed family and its first analysis pipeline.

Session-scoped so the expensive pieces (family generation, parametrization,
bound computation) run once for the whole suite.
"""

import numpy as np
import pytest

from curvedist import hausdorff
from curvedist.familygen import FamilySpec, generate_family, specialize
from curvedist.paramalg import approx_parametrize, implicitize


@pytest.fixture(scope="session")
def family():
    return generate_family(FamilySpec(seed=0))


@pytest.fixture(scope="session")
def rational_members(family):
    return [m for m in family if m.status == "rational"]


@pytest.fixture(scope="session")
def exact_curve():
    """The base curve with every parameter set to one."""
    return specialize(1, 1, 100)


@pytest.fixture(scope="session")
def first_case(rational_members):
    m = rational_members[0]
    P = approx_parametrize(m.g_ij, 1e-2)
    return m, P


@pytest.fixture(scope="session")
def first_analysis(first_case):
    m, P = first_case
    f = m.g_ij
    fbar = implicitize(P)
    pencil = hausdorff.normal_pencil(f, P)
    bound = hausdorff.bound_B(pencil)
    return {"member": m, "P": P, "f": f, "fbar": fbar,
            "pencil": pencil, "bound": bound}


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(12345)
