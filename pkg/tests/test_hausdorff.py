"""Distance bounds, lattice scan, and empirical evidence quantities."""

import math

import numpy as np
import pytest

from curvedist import hausdorff as H
from curvedist.errors import OutsideDomain
from curvedist.polycore import BiPoly
from curvedist.rootfind import all_roots
from curvedist.polycore import UniPoly


@pytest.fixture(scope="module")
def evidence(first_analysis):
    return H.critical_evidence(first_analysis["pencil"],
                               first_analysis["P"],
                               bound=first_analysis["bound"])


@pytest.fixture(scope="module")
def lattice(first_analysis):
    return H.lattice_scan(first_analysis["f"], first_analysis["fbar"],
                          first_analysis["P"])


def _sample_ts(P, count, rng, lo=-5.0, hi=5.0):
    ts = []
    while len(ts) < count:
        t = rng.uniform(lo, hi)
        if all(abs(t - b) > 1e-2 for b in P.poles):
            ts.append(t)
    return ts


def test_bound_structure(first_analysis):
    b = first_analysis["bound"]
    assert len(b.alpha) == 2
    assert b.B1b > 0 and b.B2b > 0
    assert b.B == max(b.B1b, b.B2b)
    assert np.isfinite(b.B)


def test_pointwise_bound_soundness(first_analysis, rng):
    pencil = first_analysis["pencil"]
    B = first_analysis["bound"].B
    P = first_analysis["P"]
    for t0 in _sample_ts(P, 300, rng):
        r = H.rho1(pencil, t0, real_only=False)
        cb = H.coefficient_bound(pencil, t0)
        assert r <= cb + 1e-9 * (1 + cb)
        assert r <= B + 1e-9 * (1 + B)


def test_unit_direction_contract(first_analysis, rng):
    # roots of the specialized pencil are Euclidean distances: stepping
    # the root length along the unit direction lands on the curve
    pencil = first_analysis["pencil"]
    f = first_analysis["f"]
    P = first_analysis["P"]
    checked = 0
    for t0 in _sample_ts(P, 100, rng):
        c = pencil.coeffs_at(t0)
        rs = all_roots(UniPoly(c))
        s0 = min(rs.roots, key=abs)
        if abs(s0.imag) > 1e-10 * (1 + abs(s0)):
            continue
        x, y = (complex(v).real for v in P.eval(t0))
        # recover the direction exactly as the pencil builds it
        n1 = (-pencil.v_num(t0) * P.p1.den(t0) ** 2).real
        n2 = (pencil.u_num(t0) * P.p2.den(t0) ** 2).real
        norm = math.hypot(abs(n1), abs(n2))
        w1, w2 = n1 / norm, n2 / norm
        px, py = x + s0.real * w1, y + s0.real * w2
        scale = f.inf_norm() * max(1.0, abs(px), abs(py)) ** f.total_degree
        assert abs(f(px, py)) <= 1e-8 * scale
        dist = math.hypot(px - x, py - y)
        assert dist == pytest.approx(abs(s0.real), abs=1e-8)
        checked += 1
    assert checked >= 50


def test_directional_pencil_unit_norm(first_analysis, rng):
    pencil = H.directional_pencil(first_analysis["f"], first_analysis["P"], 0.8)
    t0 = 0.37
    c = pencil.coeffs_at(t0)
    w1, w2 = H._unit_direction(0.8)
    assert math.hypot(w1, w2) == pytest.approx(1.0)
    x, y = first_analysis["P"].eval(t0)
    from curvedist.polycore import compose_line
    direct = compose_line(first_analysis["f"], (x, y), (w1, w2)).c
    assert np.allclose(c, direct)


def test_eta_symmetric_and_positive(first_analysis):
    f, fbar = first_analysis["f"], first_analysis["fbar"]
    e1 = H.eta(f, fbar)
    e2 = H.eta(fbar, f)
    assert e1 > 0
    assert e1 == pytest.approx(e2, rel=1e-6)


def test_asymptote_pairing(first_analysis):
    asy_f = H.asymptotes(first_analysis["f"])
    asy_b = H.asymptotes(first_analysis["fbar"])
    assert len(asy_f) == len(asy_b) == 2
    for a, b in zip(asy_f, asy_b):
        assert abs(a.a * b.b - a.b * b.a) <= 1e-3  # parallel directions


def test_lattice_scan_non_compact(first_analysis, lattice):
    assert not lattice.compact
    assert lattice.eta == pytest.approx(
        H.eta(first_analysis["f"], first_analysis["fbar"]))
    assert not lattice.truncated
    assert lattice.m > 0
    assert lattice.m <= first_analysis["bound"].B


def test_lattice_monotone_in_cap(first_analysis):
    f, fbar, P = (first_analysis["f"], first_analysis["fbar"],
                  first_analysis["P"])
    small = H.lattice_scan(f, fbar, P, tau_cap=3)
    big = H.lattice_scan(f, fbar, P, tau_cap=200)
    assert small.m <= big.m + 1e-12


def test_compactness_predicate():
    circleish = BiPoly.from_terms(
        [(4, 0, 1.0), (0, 4, 1.0), (2, 2, 2.0), (0, 0, -1.0)])  # (x^2+y^2)^2=1
    hyperbola = BiPoly.from_terms([(1, 1, 1.0), (0, 0, -1.0)])
    assert H.is_compact(circleish)
    assert not H.is_compact(hyperbola)


def test_limit_evidence_values(first_analysis, evidence):
    assert 0 < evidence.chi1 <= evidence.chi2
    assert evidence.chi > 0
    assert np.isfinite(evidence.chi)


def test_endpoint_evidence(first_analysis, evidence):
    b = first_analysis["bound"]
    # the endpoint maximum of the two-root estimate reproduces the global
    # second bound here, and the observed distances stay far below it
    assert evidence.mu == pytest.approx(b.B2b, rel=1e-9)
    assert evidence.nu < evidence.mu


def test_sequences_stable_without_flags(evidence):
    assert evidence.flags == []
    assert evidence.gamma1 is not None and evidence.gamma1 > 0
    assert evidence.gamma2 is not None and evidence.gamma2 > 0
    assert evidence.gamma3 is not None and evidence.gamma3 > 0


def test_gamma3_tracks_asymptote_distance(first_analysis, evidence):
    e = H.eta(first_analysis["f"], first_analysis["fbar"])
    assert abs(evidence.gamma3 - e) <= 1e-3


def test_exact_input_collapse(first_analysis):
    P = first_analysis["P"]
    fbar = first_analysis["fbar"]
    pencil = H.normal_pencil(fbar, P)
    assert pencil.exact
    bound = H.bound_B(pencil)
    ev = H.critical_evidence(pencil, P, bound=bound)
    lat = H.lattice_scan(fbar, fbar, P)
    for name, v in [("B", bound.B), ("chi", ev.chi), ("mu", ev.mu),
                    ("nu", ev.nu), ("gamma1", ev.gamma1),
                    ("gamma2", ev.gamma2), ("gamma3", ev.gamma3),
                    ("eta", H.eta(fbar, fbar)), ("m", lat.m)]:
        assert abs(v) <= 1e-6, f"{name} = {v}"


def test_rho_real_vs_complex_agree_on_exact(first_analysis, rng):
    fbar = first_analysis["fbar"]
    P = first_analysis["P"]
    pencil = H.normal_pencil(fbar, P)
    for t0 in _sample_ts(P, 100, rng):
        rc, rr = pencil.rho_pair(t0)
        if rr is None:
            continue
        assert rc == pytest.approx(0.0, abs=1e-8)
        assert rr == pytest.approx(0.0, abs=1e-8)


def test_outside_domain_at_pole(first_analysis):
    pencil = first_analysis["pencil"]
    with pytest.raises(OutsideDomain):
        pencil.coeffs_at(first_analysis["P"].poles[0])
