"""Approximate singularities, clusters, and the genus-zero count."""

import numpy as np

from curvedist.epsgeo import (check_hypotheses, cluster_decompose,
                              find_eps_singularities, infinity_points,
                              is_eps_rational)
from curvedist.familygen import specialize


def test_exact_curve_clusters(exact_curve):
    clusters = cluster_decompose(find_eps_singularities(exact_curve, 1e-6))
    assert len(clusters) == 3
    reps = sorted(((complex(c.rep.a).real, complex(c.rep.b).real)
                   for c in clusters))
    expected = sorted([(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)])
    for (gx, gy), (ex, ey) in zip(reps, expected):
        assert abs(gx - ex) <= 1e-6 and abs(gy - ey) <= 1e-6
    assert all(c.r == 2 for c in clusters)
    # three double points on a quartic: (d-1)(d-2)/2 - sum r(r-1)/2 = 3 - 3
    assert is_eps_rational(exact_curve.total_degree, clusters)


def test_exact_curve_hypotheses(exact_curve):
    hyp = check_hypotheses(exact_curve, 1e-6)
    assert hyp.all_hold(), hyp.failure_reason()


def test_four_infinity_points(exact_curve):
    pts = infinity_points(exact_curve)
    assert len(pts) == 4


def test_perturbed_members_keep_cluster_structure(rational_members):
    for m in rational_members[:3]:
        clusters = cluster_decompose(find_eps_singularities(m.g_ij, 1e-2))
        assert is_eps_rational(m.g_ij.total_degree, clusters)
        assert all(c.r >= 2 for c in clusters)


def test_cluster_radius_merges_nearby_singularities():
    # two specializations close in coefficient space keep the same count
    a = specialize(1, 1, 100)
    b = specialize(1, 1, 99)
    ca = cluster_decompose(find_eps_singularities(a, 1e-2))
    cb = cluster_decompose(find_eps_singularities(b, 1e-2))
    assert len(ca) == len(cb)
