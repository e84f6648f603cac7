"""Acceptance gate: eight end-to-end criteria, one printed line each."""

import filecmp
import math
import time

import numpy as np
import pytest

from curvedist import hausdorff as H
from curvedist.cli import main
from curvedist.epsgeo import (cluster_decompose, find_eps_singularities,
                              infinity_points, is_eps_rational)
from curvedist.errors import NotParallel
from curvedist.familygen import specialize
from curvedist.paramalg import approx_parametrize, implicitize

POLE_MARGIN = 0.05


def _report(capsys, idx, name, ok, elapsed, detail=""):
    tail = f"  ({detail})" if detail else ""
    with capsys.disabled():
        print(f"ACCEPTANCE {idx} {name}: "
              f"{'PASS' if ok else 'FAIL'} [{elapsed:.1f}s]{tail}")
    assert ok, f"criterion {idx} ({name}) failed{tail}"


@pytest.fixture(scope="module")
def analyses(rational_members):
    """Bound + lattice for every eps-rational fixed-seed member."""
    out = []
    for m in rational_members:
        P = approx_parametrize(m.g_ij, 1e-2)
        fbar = implicitize(P)
        pencil = H.normal_pencil(m.g_ij, P)
        bound = H.bound_B(pencil)
        lattice = H.lattice_scan(m.g_ij, fbar, P, stop_eps=1e-3, tau_cap=200)
        out.append({"m": m, "P": P, "fbar": fbar, "pencil": pencil,
                    "bound": bound, "lattice": lattice})
    return out


def test_criterion_1_exact_round_trip(capsys, exact_curve):
    t0 = time.perf_counter()
    P = approx_parametrize(exact_curve, 1e-6)
    worst = 0.0
    for t in np.linspace(-10.0, 10.0, 1000):
        if any(abs(t - b) < POLE_MARGIN for b in P.poles):
            continue
        x, y = P.eval(t)
        worst = max(worst, abs(exact_curve(x, y)) / exact_curve.inf_norm())
    fbar = implicitize(P)
    mask = np.abs(exact_curve.c) > 0
    scale = np.median((fbar.c[mask] / exact_curve.c[mask]).real)
    cerr = np.max(np.abs(fbar.c - scale * exact_curve.c)) / \
        (exact_curve.inf_norm() * abs(scale))
    el = time.perf_counter() - t0
    ok = worst <= 1e-6 and cerr <= 1e-6 and el <= 10.0
    _report(capsys, 1, "exact-curve round trip", ok, el,
            f"residual={worst:.2e} coeff_err={cerr:.2e}")


def test_criterion_2_cluster_genus(capsys, exact_curve):
    t0 = time.perf_counter()
    clusters = cluster_decompose(find_eps_singularities(exact_curve, 1e-6))
    reps = sorted((complex(c.rep.a).real, complex(c.rep.b).real)
                  for c in clusters)
    expected = sorted([(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)])
    ok_reps = len(clusters) == 3 and all(
        abs(gx - ex) <= 1e-6 and abs(gy - ey) <= 1e-6
        for (gx, gy), (ex, ey) in zip(reps, expected))
    ok = (ok_reps and all(c.r == 2 for c in clusters)
          and is_eps_rational(exact_curve.total_degree, clusters))
    el = time.perf_counter() - t0
    ok = ok and el <= 5.0
    _report(capsys, 2, "cluster/genus correctness", ok, el,
            f"clusters={len(clusters)}")


def test_criterion_3_bound_soundness(capsys, analyses, rng):
    t0 = time.perf_counter()
    violations = 0
    checked = 0
    for case in analyses[:5]:
        pencil, bound, P = case["pencil"], case["bound"], case["P"]
        cuts = [iv for iv in (bound.I1, bound.I2) if iv is not None]
        n = 0
        while n < 1000:
            t = math.tan(rng.uniform(-1.55, 1.55))
            if any(iv.contains(t) for iv in cuts):
                continue
            if any(abs(t - b) < 1e-3 for b in P.poles):
                continue
            try:
                c = pencil.coeffs_at(t)
            except Exception:
                continue
            roots = np.roots(c[::-1])  # independent root oracle
            if len(roots) == 0:
                continue
            r = float(np.min(np.abs(roots)))
            cb = H.coefficient_bound(pencil, t)
            if r > cb + 1e-9 * (1 + cb) or r > bound.B + 1e-9 * (1 + bound.B):
                violations += 1
            n += 1
            checked += 1
    el = time.perf_counter() - t0
    ok = violations == 0 and checked >= 5000 and el <= 60.0
    _report(capsys, 3, "bound soundness", ok, el,
            f"samples={checked} violations={violations}")


def test_criterion_4_exact_input_collapse(capsys, analyses):
    t0 = time.perf_counter()
    case = analyses[0]
    fbar, P = case["fbar"], case["P"]
    pencil = H.normal_pencil(fbar, P)
    bound = H.bound_B(pencil)
    ev = H.critical_evidence(pencil, P, bound=bound)
    lat = H.lattice_scan(fbar, fbar, P)
    vals = {"B": bound.B, "m": lat.m, "eta": H.eta(fbar, fbar),
            "chi": ev.chi, "mu": ev.mu, "nu": ev.nu,
            "gamma1": ev.gamma1, "gamma2": ev.gamma2, "gamma3": ev.gamma3}
    worst = max(abs(v) for v in vals.values())
    el = time.perf_counter() - t0
    ok = worst <= 1e-6 and el <= 30.0
    _report(capsys, 4, "exact-input collapse", ok, el, f"max={worst:.2e}")


def test_criterion_5_structure_preservation(capsys, analyses):
    t0 = time.perf_counter()

    def unit(v):
        w = np.array([complex(v[0]), complex(v[1])])
        return w / np.linalg.norm(w)

    ok = True
    detail = ""
    for case in analyses:
        fbar = case["fbar"]
        f = case["m"].g_ij
        if fbar.total_degree != 4:
            ok, detail = False, f"degree={fbar.total_degree}"
            break
        pf = [unit(p) for p in infinity_points(f)]
        pb = [unit(q) for q in infinity_points(fbar)]
        if len(pf) != 4 or len(pb) != 4:
            ok, detail = False, "infinity count"
            break
        for q in pb:
            d = min(min(np.linalg.norm(q - p), np.linalg.norm(q + p))
                    for p in pf)
            if d > 1e-3:
                ok, detail = False, f"direction drift {d:.1e}"
                break
        try:
            H.eta(f, fbar)
        except NotParallel:
            ok, detail = False, "NotParallel"
        if not ok:
            break
    el = time.perf_counter() - t0
    ok = ok and el <= 120.0
    _report(capsys, 5, "structure preservation", ok, el,
            detail or f"members={len(analyses)}")


def test_criterion_6_headline_numbers(capsys, family, analyses):
    t0 = time.perf_counter()
    frac = len(analyses) / len(family)
    rows = []
    ok = 0.2 <= frac <= 0.8
    for case in analyses:
        B, m = case["bound"].B, case["lattice"].m
        rows.append((case["m"].i, case["m"].j, B, m))
        if not (np.isfinite(B) and m <= B and m <= 0.5 * B):
            ok = False
    el = time.perf_counter() - t0
    ok = ok and el <= 600.0
    with capsys.disabled():
        print("  i  j          B          m")
        for i, j, B, m in rows:
            print(f" {i:2d} {j:2d} {B:10.6f} {m:10.6f}")
    _report(capsys, 6, "qualitative reproduction", ok, el,
            f"fraction={frac:.2f}")


def test_criterion_7_oracle_suites(capsys, rng):
    t0 = time.perf_counter()
    import sympy
    from curvedist.polycore import BiPoly, RatFun, UniPoly, euclid_div, resultant
    from curvedist.rootfind import all_roots, max_abs_ratfun
    X, Y = sympy.symbols("x y")
    ok = True

    # resultant vs symbolic oracle
    for _ in range(100):
        dp, dq = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        pc = rng.standard_normal((dp + 1,))
        qc = rng.standard_normal((dq + 1,))
        p = BiPoly.from_terms([(k, 0, v) for k, v in enumerate(pc)]
                              + [(0, 1, 1.0)])
        q = BiPoly.from_terms([(k, 0, v) for k, v in enumerate(qc)]
                              + [(0, 1, -1.0)])
        if p.deg_in("x") < 1 or q.deg_in("x") < 1:
            continue
        r = resultant(p, q, "x")
        ps = sum(sympy.Rational(v) * X ** k for k, v in enumerate(pc)) + Y
        qs = sum(sympy.Rational(v) * X ** k for k, v in enumerate(qc)) - Y
        a, b = (ps, qs) if p.deg_in("x") >= q.deg_in("x") else (qs, ps)
        sign = 1 if p.deg_in("x") >= q.deg_in("x") else \
            (-1) ** (p.deg_in("x") * q.deg_in("x"))
        o = sympy.Poly(sign * sympy.resultant(a, b, X), Y)
        oc = np.zeros(len(r.c), dtype=np.complex128)
        for mono, coef in zip(o.monoms(), o.coeffs()):
            if mono[0] < len(oc):
                oc[mono[0]] = complex(coef)
        if np.max(np.abs(r.c - oc)) > 1e-8 * max(np.max(np.abs(oc)), 1e-30):
            ok = False

    # euclidean division round trip
    for _ in range(1000):
        dp = int(rng.integers(1, 9))
        p = UniPoly(rng.standard_normal(dp + 1).astype(np.complex128))
        qc = rng.standard_normal(int(rng.integers(2, max(dp + 1, 3))))
        qc[-1] = np.sign(qc[-1]) * (1.0 + abs(qc[-1]))
        q = UniPoly(qc.astype(np.complex128))
        quo, rem = euclid_div(p, q)
        recon = (q * quo + rem).c
        recon = np.pad(recon, (0, max(0, len(p.c) - len(recon))))[: len(p.c)]
        if np.max(np.abs(recon - p.c)) > 1e-10 * p.inf_norm() * max(dp, 1):
            ok = False

    # constructed roots recovered
    for _ in range(50):
        roots = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        rs = all_roots(UniPoly.from_roots(list(roots)))
        got = sorted(rs.with_multiplicity(), key=lambda z: (z.real, z.imag))
        want = sorted(roots, key=lambda z: (z.real, z.imag))
        if any(abs(g - w) > 1e-8 * (1 + abs(w)) for g, w in zip(got, want)):
            ok = False

    # rational maximization vs dense grid
    r = RatFun(UniPoly([1.0, -2.0, 0.5]), UniPoly([5.0, 0.0, 1.0]))
    val, _ = max_abs_ratfun(r, [(-3.0, 2.0)])
    ts = np.linspace(-3, 2, 100000)
    best = float(np.max(np.abs(r.num(ts) / r.den(ts))))
    if val < best - 1e-6 * (1 + best):
        ok = False

    el = time.perf_counter() - t0
    ok = ok and el <= 60.0
    _report(capsys, 7, "oracle suites", ok, el)


def test_criterion_8_determinism(capsys, tmp_path):
    t0 = time.perf_counter()
    a, b = tmp_path / "a", tmp_path / "b"
    ok = True
    for out in (a, b):
        ok &= main(["gen-family", "--seed", "0", "--out", str(out)]) == 0
        curve = str(out / "curve_1_1.txt")
        ok &= main(["parametrize", curve, "--out", str(out)]) == 0
        ok &= main(["analyze", curve, str(out / "curve_1_1.param.txt"),
                    "--out", str(out), "--index", "1"]) == 0
    for name in ("manifest.txt", "curve_1_1.param.txt", "bounds.csv",
                 "lattice.csv", "evidence.csv", "report.json",
                 "plotdata.csv"):
        if not filecmp.cmp(a / name, b / name, shallow=False):
            ok = False
    el = time.perf_counter() - t0
    _report(capsys, 8, "determinism", ok, el)
