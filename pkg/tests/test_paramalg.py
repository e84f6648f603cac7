"""Parametrization pipeline: exact round trip and structural checks."""

import numpy as np
import pytest

from curvedist.errors import NotEpsRational
from curvedist.familygen import generate_family, FamilySpec
from curvedist.paramalg import approx_parametrize, implicitize


POLE_MARGIN = 0.05


def _residual(f, P, count=1000):
    worst = 0.0
    scale = f.inf_norm()
    for t in np.linspace(-10.0, 10.0, count):
        if any(abs(t - b) < POLE_MARGIN for b in P.poles):
            continue
        x, y = P.eval(t)
        worst = max(worst, abs(f(x, y)) / scale)
    return worst


def test_exact_curve_round_trip(exact_curve):
    P = approx_parametrize(exact_curve, 1e-6)
    assert _residual(exact_curve, P) <= 1e-6
    fbar = implicitize(P)
    # match up to scale, coefficient-wise
    mask = np.abs(exact_curve.c) > 0
    scale = np.median((fbar.c[mask] / exact_curve.c[mask]).real)
    err = np.max(np.abs(fbar.c - scale * exact_curve.c))
    assert err <= 1e-6 * exact_curve.inf_norm() * abs(scale)


def test_parametrization_is_real_with_shared_denominator(first_case):
    _, P = first_case
    for part in (P.p1.num, P.p1.den, P.p2.num, P.p2.den):
        assert np.max(np.abs(part.c.imag)) == 0.0
    assert P.p1.den is P.p2.den
    assert len(P.poles) == 2


def test_perturbed_members_parametrize(rational_members):
    for m in rational_members[:5]:
        P = approx_parametrize(m.g_ij, 1e-2)
        # the parametrization traces its own implicitization faithfully;
        # against the perturbed input only closeness is expected
        assert _residual(implicitize(P), P) <= 1e-6


def test_non_rational_member_rejected(family):
    bad = next(m for m in family if m.status == "not_rational")
    with pytest.raises(NotEpsRational):
        approx_parametrize(bad.g_ij, 1e-2)


def test_hypothesis_failure_rejected(family):
    bad = next(m for m in family if m.status.startswith("hypothesis_failed"))
    with pytest.raises(NotEpsRational):
        approx_parametrize(bad.g_ij, 1e-2)


def test_implicitize_degree_and_infinity_directions(rational_members):
    from curvedist.epsgeo import infinity_points
    for m in rational_members[:5]:
        P = approx_parametrize(m.g_ij, 1e-2)
        fbar = implicitize(P)
        assert fbar.total_degree == 4
        pf = infinity_points(m.g_ij)
        pb = infinity_points(fbar)
        assert len(pf) == len(pb) == 4

        def unit(v):
            v = np.array([complex(v[0]), complex(v[1])])
            return v / np.linalg.norm(v)

        for q in pb:
            qq = unit(q)
            d = min(min(np.linalg.norm(qq - unit(p)),
                        np.linalg.norm(qq + unit(p))) for p in pf)
            assert d <= 1e-3
