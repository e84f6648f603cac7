"""Distance analysis between the input curve and its rational output.

Normal-line pencils D1/D2 and the directional pencil D_h, the rho minima,
the certified bound B (with the R1/R2 maximization), directional bounds
B^h0, asymptote distance eta, lattice scanning with box expansion, limit
evidence (chi), endpoint evidence (mu, nu) and stabilizing sequences
(gamma_1..gamma_3 with the directional fallback).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
import numpy as np
from scipy.optimize import brentq, minimize_scalar

from curvedist.errors import (EmptyCurve, NoLimit, NotParallel, OutsideDomain,
                              PoleCollision, SingularFootpoint, Unbounded,
                              UnboundedBound, ZeroTangent, NoFallbackWorks)
from curvedist.epsgeo import infinity_points
from curvedist.paramalg import Parametrization
from curvedist.polycore import (BiPoly, RatFun, UniPoly, abs_eval,
                                compose_line, is_real_within, resultant)
from curvedist.rootfind import (Interval, all_roots, isolating_interval,
                                max_abs_ratfun, real_roots, LARGE_T, REAL_TOL)

POLE_TOL = 1e-12
STABLE_TOL = 1e-8
PLATEAU_TOL = 1e-4
MATCH_TOL = 1e-6
SEQ_CAP = 12
DEFAULT_FALLBACK_H = (1.0, -1.0, 0.8, 0.05)


def _unit_direction(h: float):
    return 2.0 * h / (h * h + 1.0), (h * h - 1.0) / (h * h + 1.0)


def _snap_exact(pencil: "PencilCoeffs") -> "PencilCoeffs":
    """Treat A_0 as identically zero when f vanishes on P to noise level."""
    worst = 0.0
    for t0 in list(np.linspace(-3.0, 3.0, 41)) + [-100.0, -10.0, 10.0, 100.0]:
        try:
            worst = max(worst, _scaled_residual(pencil.f, pencil.P, t0))
        except ZeroDivisionError:
            continue
    if worst <= A0_SIG_TOL:
        zero = RatFun(UniPoly())
        pencil.tilde_A[0] = zero
        pencil.r1sq = zero
        pencil.ratio02 = zero if pencil.ratio02 is not None else None
        pencil.exact = True
    return pencil


# ---------------------------------------------------------------------------
# pencils


@dataclass
class PencilCoeffs:
    """Coefficients of D(t, s) in s along a moving line through P(t).

    ``tilde_A[i]`` are the coefficients for the *unnormalized* direction;
    the unit-direction coefficient is A_i = tilde_A[i] / norm_sq^(i/2).
    For a fixed direction (``h`` given) norm_sq is identically 1.
    """

    tilde_A: list
    norm_sq: RatFun
    n: int
    f: BiPoly
    P: Parametrization
    h: float | None = None  # None: moving normal direction
    r1sq: RatFun = None  # 16 |A0/A1|^2 as a clean rational function
    ratio02: RatFun = None  # |A0/A2| without the binomial prefactor
    exact: bool = False  # A_0 identically zero (f(P(t)) at noise level)
    u_num: UniPoly = None  # numerator of p1' (denominator b^2)
    v_num: UniPoly = None  # numerator of p2' (denominator e^2)
    _mp_partials: dict = None  # cache for the high-precision branch

    # -- pointwise (well-conditioned) evaluation --------------------------

    def coeffs_at(self, t0: float):
        """Unit-direction coefficients [A_0(t0), ..., A_n(t0)]."""
        t0 = float(t0)
        bscale = max(1.0, abs(t0)) ** max(self.P.p1.den.degree, 1)
        escale = max(1.0, abs(t0)) ** max(self.P.p2.den.degree, 1)
        if (abs(self.P.p1.den(t0)) <= POLE_TOL * bscale
                or abs(self.P.p2.den(t0)) <= POLE_TOL * escale):
            raise OutsideDomain(f"t={t0} is a pole of the parametrization")
        x, y = self.P.p1(t0), self.P.p2(t0)
        if max(abs(x), abs(y)) > 1e5:
            # next to a pole of P the composition cancels more digits than
            # doubles have; switch to multiprecision for the coefficients
            return self._coeffs_mp(t0)
        if self.h is not None:
            w1, w2 = _unit_direction(self.h)
        else:
            # division-free normal direction: (-p2', p1') times (b e)^2,
            # immune to denominator underflow next to a pole of P
            n1 = -self.v_num(t0) * self.P.p1.den(t0) ** 2
            n2 = self.u_num(t0) * self.P.p2.den(t0) ** 2
            norm = math.hypot(abs(n1), abs(n2))
            if norm <= 1e-300 or not np.isfinite(norm):
                raise OutsideDomain(f"tangent direction degenerates at t={t0}")
            w1, w2 = n1 / norm, n2 / norm
        c = compose_line(self.f, (x, y), (w1, w2)).c
        if self.exact and len(c):
            c = c.copy()
            c[0] = 0.0
        return c

    def _coeffs_mp(self, t0: float, dps: int = 60):
        if self._mp_partials is None:
            parts = {}
            for v1 in range(self.n + 1):
                for v2 in range(self.n + 1 - v1):
                    fv = self.f.partial((v1, v2))
                    scale = 1.0 / (math.factorial(v1) * math.factorial(v2))
                    parts[(v1, v2)] = fv.c.real * scale
            self._mp_partials = parts

        def pv(c, t):
            acc = mpmath.mpf(0)
            for ck in c[::-1]:
                acc = acc * t + mpmath.mpf(float(ck.real))
            return acc

        def bival(grid, x, y):
            acc = mpmath.mpf(0)
            for row in grid[::-1]:
                acc = acc * x + pv(row, y)
            return acc

        with mpmath.workdps(dps):
            t = mpmath.mpf(t0)
            b = pv(self.P.p1.den.c, t)
            e = pv(self.P.p2.den.c, t)
            x = pv(self.P.p1.num.c, t) / b
            y = pv(self.P.p2.num.c, t) / e
            if self.h is not None:
                w1f, w2f = _unit_direction(self.h)
                w1, w2 = mpmath.mpf(w1f), mpmath.mpf(w2f)
            else:
                n1 = -pv(self.v_num.c, t) * b * b
                n2 = pv(self.u_num.c, t) * e * e
                norm = mpmath.sqrt(n1 * n1 + n2 * n2)
                if norm == 0:
                    raise OutsideDomain(
                        f"tangent direction degenerates at t={t0}")
                w1, w2 = n1 / norm, n2 / norm
            out = np.zeros(self.n + 1, dtype=np.complex128)
            for i in range(self.n + 1):
                acc = mpmath.mpf(0)
                for v1 in range(i + 1):
                    v2 = i - v1
                    acc += (bival(self._mp_partials[(v1, v2)], x, y)
                            * w1 ** v1 * w2 ** v2)
                out[i] = float(acc)
        if self.exact:
            out[0] = 0.0
        return out

    def rho_pair(self, t0: float):
        """(min |s0| over all roots, min |s0| over real roots or None)."""
        c = self.coeffs_at(t0)
        p = UniPoly(c)
        if p.degree < 1:
            return None, None
        rs = all_roots(p)
        allmin = min(abs(r) for r in rs.roots)
        reals = [abs(r.real) for r in rs.roots
                 if abs(r.imag) <= REAL_TOL * (1.0 + abs(r.real))]
        return allmin, (min(reals) if reals else None)

    def _ratio_value(self, t0, i: int):
        """|A_0/A_i| at t0; None when undefined there."""
        try:
            c = self.coeffs_at(t0)
        except OutsideDomain:
            return None
        if len(c) <= i or abs(c[i]) <= 1e-300:
            return None
        return abs(c[0] / c[i])


def rho1(pencil: PencilCoeffs, t0: float, real_only: bool = True):
    """min |s0| of D(t0, s) = 0; None when real roots are required but
    absent.  |s0| is a Euclidean distance (unit direction)."""
    allmin, realmin = pencil.rho_pair(t0)
    return realmin if real_only else allmin


def coefficient_bound(pencil: PencilCoeffs, t0: float):
    """min_i binom(n,i) |A_0/A_i|^(1/i) over i with A_i(t0) != 0."""
    c = pencil.coeffs_at(t0)
    n = pencil.n
    best = None
    for i in range(1, n + 1):
        if i < len(c) and abs(c[i]) > 1e-300:
            v = math.comb(n, i) * abs(c[0] / c[i]) ** (1.0 / i)
            best = v if best is None else min(best, v)
    return best


def _rat_numerators(f: BiPoly, P: Parametrization, n: int):
    """Numerators N_v of f^v(P(t))/v! over the common denominator
    b^DX * e^DY, for all |v| <= n."""
    a, b = P.p1.num, P.p1.den
    c, e = P.p2.num, P.p2.den
    DX, DY = f.deg_in("x"), f.deg_in("y")
    bp = [UniPoly([1.0])]
    ap = [UniPoly([1.0])]
    cp = [UniPoly([1.0])]
    ep = [UniPoly([1.0])]
    for _ in range(max(DX, DY)):
        ap.append(ap[-1] * a)
        bp.append(bp[-1] * b)
        cp.append(cp[-1] * c)
        ep.append(ep[-1] * e)
    out = {}
    for v1 in range(n + 1):
        for v2 in range(n + 1 - v1):
            fv = f.partial((v1, v2))
            scale = 1.0 / (math.factorial(v1) * math.factorial(v2))
            N = UniPoly()
            for p in range(fv.c.shape[0]):
                for q in range(fv.c.shape[1]):
                    coef = fv.c[p, q]
                    if coef != 0:
                        N = N + (coef * scale) * (ap[p] * bp[DX - p]
                                                  * cp[q] * ep[DY - q])
            out[(v1, v2)] = N
    return out


def normal_pencil(f: BiPoly, P: Parametrization) -> PencilCoeffs:
    """Pencil of the moving normal line n(t) = (-p2'(t), p1'(t))."""
    a, b = P.p1.num, P.p1.den
    c, e = P.p2.num, P.p2.den
    u = a.deriv() * b - a * b.deriv()  # numerator of p1' (den b^2)
    v = c.deriv() * e - c * e.deriv()
    if u.is_zero() and v.is_zero():
        raise ZeroTangent("parametrization has an identically zero tangent")
    n = f.total_degree
    DX, DY = f.deg_in("x"), f.deg_in("y")
    N = _rat_numerators(f, P, n)

    b2, e2 = b * b, e * e
    up = [UniPoly([1.0])]
    vp = [UniPoly([1.0])]
    b2p = [UniPoly([1.0])]
    e2p = [UniPoly([1.0])]
    for _ in range(n):
        up.append(up[-1] * u)
        vp.append(vp[-1] * (-1.0 * v))
        b2p.append(b2p[-1] * b2)
        e2p.append(e2p[-1] * e2)

    tilde = []
    tilde_num = []
    for i in range(n + 1):
        Ni = UniPoly()
        for v1 in range(i + 1):
            v2 = i - v1
            Ni = Ni + N[(v1, v2)] * vp[v1] * up[v2] * b2p[v1] * e2p[v2]
        den = (b ** (DX + 2 * i)) * (e ** (DY + 2 * i))
        tilde_num.append(Ni)
        tilde.append(RatFun(Ni, den))

    b4e4 = b2p[2] * e2p[2] if n >= 2 else (b2 * b2) * (e2 * e2)
    Pn = v * v * (b2 * b2) + u * u * (e2 * e2)
    norm_sq = RatFun(Pn, (b2 * b2) * (e2 * e2))

    # structural cancellation: the b, e powers drop out exactly
    r1sq = RatFun(16.0 * (tilde_num[0] * tilde_num[0]) * Pn,
                  tilde_num[1] * tilde_num[1]).normalized()
    ratio02 = (RatFun(tilde_num[0] * Pn, tilde_num[2]).normalized()
               if n >= 2 else None)
    return _snap_exact(PencilCoeffs(tilde_A=tilde, norm_sq=norm_sq, n=n,
                                    f=f, P=P, h=None, r1sq=r1sq,
                                    ratio02=ratio02, u_num=u, v_num=v))


def directional_pencil(f: BiPoly, P: Parametrization, h0: float) -> PencilCoeffs:
    """Pencil of the fixed unit direction parametrized by h0."""
    w1, w2 = _unit_direction(h0)
    n = f.total_degree
    DX, DY = f.deg_in("x"), f.deg_in("y")
    N = _rat_numerators(f, P, n)
    den = (P.p1.den ** DX) * (P.p2.den ** DY)
    tilde = []
    tilde_num = []
    for i in range(n + 1):
        Ni = UniPoly()
        for v1 in range(i + 1):
            v2 = i - v1
            Ni = Ni + (w1 ** v1 * w2 ** v2) * N[(v1, v2)]
        tilde_num.append(Ni)
        tilde.append(RatFun(Ni, den))
    r1sq = RatFun(16.0 * (tilde_num[0] * tilde_num[0]),
                  tilde_num[1] * tilde_num[1]).normalized()
    ratio02 = (RatFun(tilde_num[0], tilde_num[2]).normalized()
               if n >= 2 else None)
    return _snap_exact(PencilCoeffs(tilde_A=tilde,
                                    norm_sq=RatFun(UniPoly([1.0])), n=n,
                                    f=f, P=P, h=h0, r1sq=r1sq,
                                    ratio02=ratio02))


# ---------------------------------------------------------------------------
# the bound B


@dataclass
class BoundReport:
    B1b: float
    B2b: float
    B: float
    alpha: tuple
    I1: Interval | None
    I2: Interval | None
    argmaxes: tuple
    gamma_1_candidates: list = field(default_factory=list)  # poles of R1
    gamma_2_candidates: list = field(default_factory=list)  # critical points


A0_SIG_TOL = 1e-7


def _scaled_residual(f: BiPoly, P: Parametrization, t0: float) -> float:
    """|f(P(t0))| / (||f|| max(1,|x|,|y|)^d): how far P(t0) is from C."""
    x, y = P.p1(t0), P.p2(t0)
    d = f.total_degree
    s = max(1.0, abs(x), abs(y)) ** d
    return abs(f.eval(x, y)) / (f.inf_norm() * s)


def _dedupe_sorted(vals, tol=1e-8):
    out = []
    for v in sorted(vals):
        if not out or abs(v - out[-1]) > tol * (1.0 + abs(v)):
            out.append(v)
    return out


def _refined_extrema(value_fn, n: int = 1501, lo: float = None,
                     hi: float = None):
    """(maxima, minima) locations of value_fn, found by sampling and local
    refinement.  Without bounds, samples t = tan(u) to cover the whole line."""
    if lo is None:
        us = np.linspace(-1.5657, 1.5657, n)
        ts = np.tan(us)
    else:
        ts = np.linspace(lo, hi, n)
    vals = np.empty(len(ts))
    for k, t in enumerate(ts):
        v = value_fn(t)
        vals[k] = v if v is not None and np.isfinite(v) else np.nan

    def refine(k, sign):
        def obj(t):
            v = value_fn(t)
            return sign * v if v is not None and np.isfinite(v) else 1e300
        res = minimize_scalar(obj, bounds=(ts[k - 1], ts[k + 1]),
                              method="bounded",
                              options={"xatol": 1e-12})
        return float(res.x)

    maxima, minima = [], []
    for k in range(1, len(ts) - 1):
        trio = vals[k - 1:k + 2]
        if np.any(np.isnan(trio)):
            continue
        strict = vals[k] > vals[k - 1] or vals[k] > vals[k + 1]
        if vals[k] >= vals[k - 1] and vals[k] >= vals[k + 1] and strict:
            maxima.append(refine(k, -1.0))
        elif vals[k] <= vals[k - 1] and vals[k] <= vals[k + 1] and not strict:
            if vals[k] < vals[k - 1] or vals[k] < vals[k + 1]:
                minima.append(refine(k, +1.0))
    return _dedupe_sorted(maxima), _dedupe_sorted(minima)


def _coeff_zeros(pencil: "PencilCoeffs", i: int, n: int = 4001):
    """Real zeros of t -> A_i(t), from sign changes of the directly evaluated
    coefficient.  The symbolic numerator of A_i loses all precision to
    coefficient cancellation, so root-finding it is hopeless; the pointwise
    line-restriction values are exact to working precision.  Sign flips
    across a pole of P are orientation flips of the unit normal, not zeros.
    """

    def ai(t):
        try:
            return float(pencil.coeffs_at(t)[i].real)
        except OutsideDomain:
            return math.nan

    ts = np.tan(np.linspace(-1.5657, 1.5657, n))
    vals = [ai(t) for t in ts]
    zeros = []
    for k in range(len(ts) - 1):
        v0, v1 = vals[k], vals[k + 1]
        if math.isnan(v0) or math.isnan(v1) or v0 * v1 > 0:
            continue
        if v0 == 0.0:
            zeros.append(float(ts[k]))
            continue
        if any(ts[k] < b < ts[k + 1] for b in pencil.P.poles):
            continue
        zeros.append(float(brentq(ai, ts[k], ts[k + 1], xtol=1e-13)))
    return _dedupe_sorted(zeros)


def bound_B(pencil: PencilCoeffs) -> BoundReport:
    """B1 = max R1 off the isolating intervals of R1's real poles;
    B2 = max R2 on their closure; B = max(B1, B2)."""
    if pencil.n < 2:
        raise ValueError("pencil of degree < 2")
    if pencil.tilde_A[1].num.is_zero():
        raise ValueError("A_1 identically zero; R1 is undefined")
    r1sq, ratio02 = pencil.r1sq, pencil.ratio02
    nscale = math.comb(pencil.n, 2)

    alphas = _coeff_zeros(pencil, 1)
    r2_poles = _coeff_zeros(pencil, 2)
    for al in alphas:
        if any(abs(al - p) <= 1e-9 * (1.0 + abs(al)) for p in r2_poles):
            raise PoleCollision(f"alpha={al} is also a pole of R2")

    intervals = [isolating_interval(al, [o for o in alphas if o != al],
                                    poles=r2_poles) for al in alphas]

    def v_r1sq(t):
        v = pencil._ratio_value(t, 1)
        return None if v is None else 16.0 * v * v

    def v_r02(t):
        return pencil._ratio_value(t, 2)

    maxima, minima = _refined_extrema(v_r1sq)

    # complement of the isolating intervals
    cuts = sorted(intervals, key=lambda I: I.lo)
    comp = []
    lo = -np.inf
    for I in cuts:
        comp.append((lo, I.lo))
        lo = I.hi
    comp.append((lo, np.inf))
    try:
        B1b, arg1 = max_abs_ratfun(r1sq, comp, root_order=2, value_fn=v_r1sq,
                                   extra_candidates=maxima)
    except Unbounded as exc:
        raise UnboundedBound(str(exc)) from exc
    B2b, arg2 = 0.0, None
    if cuts and ratio02 is not None:
        inner = []
        for I in cuts:
            mx, _ = _refined_extrema(v_r02, n=201, lo=I.lo, hi=I.hi)
            inner.extend(mx)
        try:
            val, arg2 = max_abs_ratfun(ratio02, [(I.lo, I.hi) for I in cuts],
                                       root_order=2, value_fn=v_r02,
                                       extra_candidates=list(alphas) + inner)
        except Unbounded as exc:
            raise UnboundedBound(str(exc)) from exc
        B2b = nscale * val

    # critical points of R1 away from its poles, from the refined extrema
    crit = [t for t in _dedupe_sorted(list(maxima) + list(minima))
            if not any(I.contains(t) for I in cuts)]
    return BoundReport(B1b=B1b, B2b=B2b, B=max(B1b, B2b),
                       alpha=tuple(alphas),
                       I1=cuts[0] if len(cuts) > 0 else None,
                       I2=cuts[1] if len(cuts) > 1 else None,
                       argmaxes=(arg1, arg2),
                       gamma_1_candidates=alphas,
                       gamma_2_candidates=crit)


def directional_bound(f: BiPoly, P: Parametrization, h0: float) -> BoundReport:
    return bound_B(directional_pencil(f, P, h0))


# ---------------------------------------------------------------------------
# asymptotes and rho2


@dataclass
class Line:
    """a*x + b*y + c = 0 with (a, b) unit and a deterministic sign."""
    a: float
    b: float
    c: float

    def distance_to_parallel(self, other: "Line") -> float:
        s = 1.0 if self.a * other.a + self.b * other.b >= 0 else -1.0
        return abs(self.c - s * other.c)


def asymptotes(f: BiPoly):
    """Real asymptotes of a curve with d simple points at infinity."""
    d = f.total_degree
    lf = f.leading_form()
    fd_x = lf.partial((1, 0))
    fd_y = lf.partial((0, 1))
    sub = BiPoly(np.array([[f.c[i, j] if i + j == d - 1 else 0.0
                            for j in range(f.c.shape[1])]
                           for i in range(f.c.shape[0])]))
    out = []
    for (p, q) in infinity_points(f):
        if not (is_real_within(p, 1e-7) and is_real_within(q, 1e-7)):
            continue
        p, q = p.real, q.real
        A = fd_x.eval(p, q).real
        B = fd_y.eval(p, q).real
        C = sub.eval(p, q).real if not sub.is_zero() else 0.0
        norm = math.hypot(A, B)
        if norm <= 1e-12 * max(1.0, lf.inf_norm()):
            continue  # not a simple infinity point; no well-defined asymptote
        A, B, C = A / norm, B / norm, C / norm
        lead = A if abs(A) > 1e-12 else B
        if lead < 0:
            A, B, C = -A, -B, -C
        out.append(Line(A, B, C))
    out.sort(key=lambda L: (round(L.a, 9), round(L.b, 9), L.c))
    return out


def _match_asymptotes(f: BiPoly, fbar: BiPoly, tol: float = 1e-3):
    La, Lb = asymptotes(f), asymptotes(fbar)
    if len(La) != len(Lb):
        raise NotParallel(f"{len(La)} vs {len(Lb)} real asymptotes")
    pairs = []
    used = set()
    for L in La:
        best, bestd = None, None
        for k, M in enumerate(Lb):
            if k in used:
                continue
            dd = abs(L.a * M.b - L.b * M.a)
            if bestd is None or dd < bestd:
                best, bestd = k, dd
        if best is None or bestd > tol:
            raise NotParallel(f"no direction match within {tol}")
        used.add(best)
        pairs.append((L, Lb[best]))
    return pairs


def eta(f: BiPoly, fbar: BiPoly) -> float:
    """Largest Hausdorff distance between matched parallel asymptotes."""
    pairs = _match_asymptotes(f, fbar)
    if not pairs:
        return 0.0
    return max(L.distance_to_parallel(M) for L, M in pairs)


def rho2(fbar: BiPoly, f: BiPoly, a: float, b: float, real_only: bool = True):
    """min |s0| of fbar along the normal line of f at the foot point (a, b)."""
    gx = f.partial((1, 0)).eval(a, b)
    gy = f.partial((0, 1)).eval(a, b)
    norm = math.hypot(abs(gx), abs(gy))
    if norm < 1e-10 * f.inf_norm():
        raise SingularFootpoint(f"gradient too small at ({a}, {b})")
    w1, w2 = (gx / norm).real, (gy / norm).real
    p = compose_line(fbar, (a, b), (w1, w2))
    if p.degree < 1:
        return None
    rs = all_roots(p)
    if not real_only:
        return min(abs(r) for r in rs.roots)
    reals = [abs(r.real) for r in rs.roots
             if abs(r.imag) <= REAL_TOL * (1.0 + abs(r.real))]
    return min(reals) if reals else None


# ---------------------------------------------------------------------------
# lattice scan


@dataclass
class LatticeReport:
    box: tuple  # (tau1, tau2, tau3, tau4)
    m: float
    eta: float | None
    per_line: dict  # ("x"|"y", index) -> (m_i, m_i_real, equal)
    stop_eps: float
    truncated: bool = False
    compact: bool = False


def is_compact(f: BiPoly) -> bool:
    """No real points at infinity => bounded real part."""
    return not any(is_real_within(p, 1e-7) and is_real_within(q, 1e-7)
                   for (p, q) in infinity_points(f))


def _line_points(f: BiPoly, axis: str, level: float):
    sec = f.subs_x(level) if axis == "x" else f.subs_y(level)
    if sec.degree < 1:
        return []
    return real_roots(sec)


def _scan_line(f, fbar, axis, level):
    """Per-line maxima of rho2 / rho2^R and the point-wise values."""
    pts = []
    for r in _line_points(f, axis, level):
        xy = (level, r) if axis == "x" else (r, level)
        try:
            rc = rho2(fbar, f, xy[0], xy[1], real_only=False)
            rr = rho2(fbar, f, xy[0], xy[1], real_only=True)
        except SingularFootpoint:
            continue
        pts.append((xy, rc, rr))
    return pts


def lattice_scan(f: BiPoly, fbar: BiPoly, P: Parametrization,
                 stop_eps: float = 1e-3, tau_cap: int = 200) -> LatticeReport:
    if stop_eps <= 0 or tau_cap < 1:
        raise ValueError("stop_eps must be positive and tau_cap >= 1")
    compact = is_compact(f)
    per_line = {}
    m_val = 0.0
    any_points = False
    truncated = False

    def record(axis, level, pts):
        nonlocal m_val, any_points
        if not pts:
            return
        any_points = True
        mi = max((rc for _, rc, _ in pts if rc is not None), default=0.0)
        mir = max((rr for _, _, rr in pts if rr is not None), default=0.0)
        equal = all(rr is not None and rc is not None
                    and abs(rc - rr) <= 1e-9 * (1.0 + abs(rc))
                    for _, rc, rr in pts)
        per_line[(axis, level)] = (mi, mir, equal)
        m_val = max(m_val, mi, mir)

    if compact:
        # bounding box from the coordinate extrema of the real curve
        taus = []
        for var in ("y", "x"):
            disc = resultant(f, f.partial((0, 1) if var == "y" else (1, 0)), var)
            ext = real_roots(disc) if disc.degree >= 1 else []
            if not ext:
                raise EmptyCurve("no real coordinate extrema found")
            lo, hi = min(ext), max(ext)
            pad = 0.1 * max(hi - lo, 1.0)
            taus.extend([math.floor(lo - pad), math.ceil(hi + pad)])
        tau1, tau2, tau3, tau4 = taus
        for i in range(tau1, tau2 + 1):
            if i != 0:
                record("x", i, _scan_line(f, fbar, "x", i))
        for j in range(tau3, tau4 + 1):
            if j != 0:
                record("y", j, _scan_line(f, fbar, "y", j))
        if not any_points:
            raise EmptyCurve("no real point on any scanned lattice line")
        return LatticeReport(box=(tau1, tau2, tau3, tau4), m=m_val, eta=None,
                             per_line=per_line, stop_eps=stop_eps,
                             compact=True)

    pairs = _match_asymptotes(f, fbar)
    dists = [L.distance_to_parallel(M) for L, M in pairs]
    eta_val = max(dists) if dists else 0.0

    def sweep(axis, direction):
        nonlocal truncated
        for k in range(1, tau_cap + 1):
            level = direction * k
            pts = _scan_line(f, fbar, axis, level)
            record(axis, level, pts)
            crit = min((min(abs(rr - dd) for dd in dists)
                        for _, _, rr in pts if rr is not None), default=None)
            if crit is not None and crit < stop_eps:
                return level
        truncated = True
        return direction * tau_cap

    tau1 = sweep("x", -1)
    tau2 = sweep("x", +1)
    tau3 = sweep("y", -1)
    tau4 = sweep("y", +1)
    if not any_points:
        raise EmptyCurve("no real point on any scanned lattice line")
    return LatticeReport(box=(tau1, tau2, tau3, tau4), m=m_val, eta=eta_val,
                         per_line=per_line, stop_eps=stop_eps,
                         truncated=truncated, compact=False)


# ---------------------------------------------------------------------------
# empirical evidence


@dataclass
class EvidenceReport:
    chi: float
    chi1: float
    chi2: float
    mu: float
    nu: float
    gamma1: float | None
    gamma2: float | None
    gamma3: float | None
    gamma2_prime: float | None = None
    flags: list = field(default_factory=list)


def _limit_coeffs(pencil: PencilCoeffs, sign: int):
    """Coefficient-wise limit of D1(t, s) as t -> sign * infinity."""
    try:
        near = pencil.coeffs_at(sign * 1e-1 * LARGE_T).real
        far = pencil.coeffs_at(sign * LARGE_T).real
    except OutsideDomain as exc:
        raise NoLimit(str(exc)) from exc
    scale = max(np.max(np.abs(far)), 1e-300)
    if np.max(np.abs(far - near)) > 1e-6 * scale:
        raise NoLimit("pencil coefficients do not stabilize at infinity")
    if pencil.exact and len(far):
        far[0] = 0.0
    return far


def limit_evidence(pencil: PencilCoeffs, k_max: int = 20):
    """(chi, chi1, chi2, flags): the limit polynomial D1(s) at t -> inf and
    the sampled rho_1^R((-10)^k) extremes."""
    flags = []
    plus = _limit_coeffs(pencil, +1)
    minus = _limit_coeffs(pencil, -1)
    limit_poly = UniPoly(plus)
    if limit_poly.degree < 1:
        raise NoLimit("limit polynomial is constant")
    rs = all_roots(limit_poly)
    allmin = min(abs(r) for r in rs.roots)
    reals = [abs(r.real) for r in rs.roots
             if abs(r.imag) <= REAL_TOL * (1.0 + abs(r.real))]
    if not reals:
        flags.append("chi_no_real_root")
        chi = allmin
    else:
        chi = min(reals)
        if abs(chi - allmin) > 1e-8 * (1.0 + allmin):
            flags.append("chi_real_vs_complex_mismatch")
    mpoly = UniPoly(minus)
    if mpoly.degree >= 1:
        mmin = min(abs(r) for r in all_roots(mpoly).roots)
        if abs(mmin - allmin) > 1e-6 * (1.0 + allmin):
            flags.append("limit_plus_minus_mismatch")

    samples = []
    for k in range(1, k_max + 1):
        t0 = (-10.0) ** k
        try:
            rc, rr = pencil.rho_pair(t0)
        except OutsideDomain:
            continue
        if rr is None:
            flags.append(f"rho1_real_undefined_at_k={k}")
            continue
        if rc is not None and abs(rc - rr) > 1e-6 * (1.0 + rr):
            flags.append(f"rho1_mismatch_at_k={k}")
        samples.append(rr)
    if not samples:
        flags.append("chi_samples_empty")
        return chi, math.nan, math.nan, flags
    return chi, min(samples), max(samples), flags


def _sequence(pencil: PencilCoeffs, target: float):
    """Stabilizing sequence t_k just right of ``target``.

    Returns (value, mismatch_gap, undefined, stable): the stabilized rho_1^R
    (None when never defined), the persistent |rho_1 - rho_1^R| gap (0 when
    they agree), whether the real sequence was undefined, and whether it
    settled.  When the cap is reached without two consecutive values meeting
    the strict tolerance, the plateau value (the entry with the smallest
    consecutive gap) is reported; working-precision coefficient noise is
    amplified without bound as t_k approaches a pole of the parametrization,
    so the tail of a well-behaved sequence can drift after flattening out.
    """
    values = []
    last_gap = 0.0
    defined_any = False
    for k in range(SEQ_CAP + 1):
        t_k = target + 0.5 * 10.0 ** (-(k + 5))
        try:
            rc, rr = pencil.rho_pair(t_k)
        except OutsideDomain:
            continue
        if rr is None:
            values.append(None)
            continue
        defined_any = True
        if rc is not None:
            last_gap = abs(rc - rr)
        if values and values[-1] is not None and \
                abs(rr - values[-1]) < STABLE_TOL * (1.0 + abs(rr)):
            return rr, last_gap, False, True
        values.append(rr)
    if not defined_any:
        return None, last_gap, True, False
    best_val, best_gap = values[-1], np.inf
    for prev, cur in zip(values, values[1:]):
        if prev is None or cur is None:
            continue
        gap = abs(cur - prev) / (1.0 + abs(cur))
        if gap < best_gap:
            best_val, best_gap = cur, gap
    stable = best_gap < PLATEAU_TOL
    return best_val, last_gap, False, stable


def critical_evidence(pencil: PencilCoeffs, P: Parametrization,
                      bound: BoundReport | None = None,
                      fallback_h=DEFAULT_FALLBACK_H) -> EvidenceReport:
    if bound is None:
        bound = bound_B(pencil)
    chi, chi1, chi2, flags = limit_evidence(pencil)

    endpoints = []
    for I in (bound.I1, bound.I2):
        if I is not None:
            endpoints.extend([I.lo, I.hi])
    nsc = math.comb(pencil.n, 2)
    mu_vals, nu_vals = [], []
    for t0 in endpoints:
        v = pencil._ratio_value(t0, 2)
        if v is not None:
            mu_vals.append(nsc * math.sqrt(v))
        try:
            _, rr = pencil.rho_pair(t0)
        except OutsideDomain:
            rr = None
        if rr is None:
            flags.append(f"nu_undefined_at_t={t0}")
        else:
            nu_vals.append(rr)
    mu = max(mu_vals, default=0.0)
    nu = max(nu_vals, default=0.0)

    def run_group(targets, label):
        vals, anomalies = [], []
        for c in targets:
            v, gap, undefined, stable = _sequence(pencil, c)
            if undefined:
                anomalies.append((c, "undefined"))
                flags.append(f"s_c_undefined:{label}:t={c}")
                continue
            if not stable:
                flags.append(f"unstable_sequence:{label}:t={c}")
            if gap > 1e-6 * (1.0 + (v or 0.0)):
                anomalies.append((c, "mismatch"))
                flags.append(f"rho_mismatch:{label}:t={c}:gap={gap:.6g}")
            vals.append(v)
        return ([v for v in vals if v is not None], anomalies)

    g1_vals, g1_anom = run_group(bound.gamma_1_candidates, "pole")
    g2_vals, g2_anom = run_group(bound.gamma_2_candidates, "critical")
    gamma1 = max(g1_vals, default=None) if bound.gamma_1_candidates else None
    gamma2 = max(g2_vals, default=None) if bound.gamma_2_candidates else None

    gamma2_prime = None
    anomalies = g1_anom + g2_anom
    if anomalies:
        fb_vals = []
        for c, _kind in anomalies:
            ok = False
            for h0 in fallback_h:
                dp = directional_pencil(pencil.f, P, h0)
                v, _gap, undefined, _stable = _sequence(dp, c)
                if not undefined and v is not None:
                    fb_vals.append(v)
                    flags.append(f"fallback:h0={h0}:t={c}:value={v:.10g}")
                    ok = True
                    break
            if not ok:
                raise NoFallbackWorks(f"no fallback direction works at t={c}")
        gamma2_prime = max(fb_vals + g2_vals, default=None)

    gamma3 = None
    if P.poles:
        g3_vals, _ = run_group(P.poles, "beta")
        gamma3 = max(g3_vals, default=None)

    if pencil.exact:
        # rho is identically zero: empty candidate sets still mean 0
        gamma1 = 0.0 if gamma1 is None else gamma1
        gamma2 = 0.0 if gamma2 is None else gamma2
        gamma3 = 0.0 if gamma3 is None and P.poles else gamma3

    return EvidenceReport(chi=chi, chi1=chi1, chi2=chi2, mu=mu, nu=nu,
                          gamma1=gamma1, gamma2=gamma2, gamma3=gamma3,
                          gamma2_prime=gamma2_prime, flags=flags)
