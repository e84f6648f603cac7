"""Tolerance-based curve geometry: eps-points, eps-singularities, cluster
decomposition, the rationality (genus) test and hypothesis screening."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from curvedist.errors import ExhaustedCandidates
from curvedist.polycore import BiPoly, UniPoly, approx_gcd, compose_line, resultant
from curvedist.rootfind import all_roots, REAL_TOL

INFINITY_SEP_TOL = 1e-6
AXES_TOL = 1e-10
RUPPERT_RANK_TOL = 1e-6


@dataclass(frozen=True)
class ProjPoint:
    a: complex
    b: complex
    w: int = 1  # 1: affine, 0: at infinity

    def __post_init__(self):
        if self.a == 0 and self.b == 0 and self.w == 0:
            raise ValueError("(0:0:0) is not a projective point")

    def dist(self, other: "ProjPoint") -> float:
        """Euclidean distance in C^2 between affine points."""
        return math.hypot(abs(self.a - other.a), abs(self.b - other.b))

    def norm2(self) -> float:
        return math.hypot(abs(self.a), abs(self.b))


@dataclass
class EpsSingularity:
    point: ProjPoint
    mult: int
    radius: float
    score: float = 0.0  # max |partial| of order < mult; ~0 at exact singularities


@dataclass
class EpsCluster:
    rep: ProjPoint
    r: int
    members: list
    radius: float


@dataclass
class CurveHypotheses:
    proper_degree: bool
    eps_irreducible_heuristic: bool
    d_distinct_infinity: bool
    avoids_axes_at_infinity: bool

    def all_hold(self) -> bool:
        return (self.proper_degree and self.eps_irreducible_heuristic
                and self.d_distinct_infinity and self.avoids_axes_at_infinity)

    def failure_reason(self):
        for name in ("proper_degree", "eps_irreducible_heuristic",
                     "d_distinct_infinity", "avoids_axes_at_infinity"):
            if not getattr(self, name):
                return name
        return None


def infinity_points(f: BiPoly):
    """Projective roots of the leading form, as (a, b) direction pairs with
    multiplicities."""
    lf = f.leading_form()
    d = f.total_degree
    # F_d(1, m) has coefficients c[d-j, j]
    coeffs = np.array([lf.c[d - j, j] if d - j < lf.c.shape[0] and j < lf.c.shape[1]
                       else 0.0 for j in range(d + 1)], dtype=np.complex128)
    pts = []
    finite_deg = int(np.nonzero(np.abs(coeffs) > 0)[0][-1]) if np.any(coeffs) else 0
    if finite_deg >= 1:
        rs = all_roots(UniPoly(coeffs[: finite_deg + 1]))
        for m, mult in zip(rs.roots, rs.mults):
            scale = math.hypot(1.0, abs(m))
            pts.extend([(1.0 / scale, m / scale)] * mult)
    pts.extend([(0.0, 1.0)] * (d - finite_deg))
    return pts


def _chordal(p, q) -> float:
    return abs(p[0] * q[1] - p[1] * q[0])


def _ruppert_nullity(f: BiPoly) -> int:
    """Dimension of the Gao partial-differential system solution space; equals
    the number of absolutely irreducible factors for a squarefree input."""
    g = f.c / f.inf_norm()
    m, n = g.shape[0] - 1, g.shape[1] - 1
    fp = BiPoly(g)
    fx = fp.partial((1, 0))
    fy = fp.partial((0, 1))

    def pad(p, nx, ny):
        out = np.zeros((nx, ny), dtype=np.complex128)
        out[: p.c.shape[0], : p.c.shape[1]] = p.c
        return out

    nx_out, ny_out = 2 * m + 1, 2 * n + 1
    cols = []
    # unknown g: deg_x <= m-1, deg_y <= n; unknown h: deg_x <= m, deg_y <= n-1
    for i in range(m):
        for j in range(n + 1):
            gb = BiPoly.from_terms([(i, j, 1.0)])
            e = fp * gb.partial((0, 1)) - fy * gb if j > 0 else (fy * gb).scale(-1.0)
            cols.append(pad(e, nx_out, ny_out).ravel())
    for i in range(m + 1):
        for j in range(n):
            hb = BiPoly.from_terms([(i, j, 1.0)])
            e = (fp * hb.partial((1, 0))).scale(-1.0) + fx * hb if i > 0 else fx * hb
            cols.append(pad(e, nx_out, ny_out).ravel())
    M = np.array(cols).T
    sv = np.linalg.svd(M, compute_uv=False)
    if sv.size == 0 or sv[0] == 0:
        return M.shape[1]
    return int(np.sum(sv <= RUPPERT_RANK_TOL * sv[0]))


def _directional_gcd_trivial(f: BiPoly) -> bool:
    """Restrict f and a fixed directional derivative to a generic line and
    test the approximate GCD there."""
    g = f.partial((1, 0)).scale(0.71234) + f.partial((0, 1)).scale(0.29876)
    if g.is_zero():
        return False
    base, direction = (0.0, 0.287), (1.0, 0.634)
    u1 = compose_line(f, base, direction)
    u2 = compose_line(g, base, direction)
    return approx_gcd([u1, u2], tol=1e-6).degree == 0


def check_hypotheses(f: BiPoly, eps: float) -> CurveHypotheses:
    """Screen the three input hypotheses (plus the irreducibility heuristic)."""
    d = f.total_degree
    norm = f.inf_norm()

    top = 0.0
    for v1 in range(d + 1):
        v2 = d - v1
        if v1 < f.c.shape[0] and v2 < f.c.shape[1]:
            top = max(top, abs(f.c[v1, v2]) * math.factorial(v1) * math.factorial(v2))
    proper = top > eps * norm

    pts = infinity_points(f)
    distinct = len(pts) == d and all(
        _chordal(pts[i], pts[j]) > INFINITY_SEP_TOL
        for i in range(len(pts)) for j in range(i + 1, len(pts))
    )

    cxd = abs(f.c[d, 0]) if d < f.c.shape[0] else 0.0
    cyd = abs(f.c[0, d]) if d < f.c.shape[1] else 0.0
    avoids = cxd > AXES_TOL * norm and cyd > AXES_TOL * norm

    irred = _directional_gcd_trivial(f) and _ruppert_nullity(f) == 1
    return CurveHypotheses(proper, irred, distinct, avoids)


def eps_multiplicity(f: BiPoly, P: ProjPoint, eps: float) -> int:
    """Largest r with all partials of order < r within eps*||f|| at P and
    some order-r partial above it; 0 when P is not an eps-point."""
    if P.w != 1:
        raise ValueError("eps_multiplicity needs an affine point")
    norm = f.inf_norm()
    d = f.total_degree
    thresh = eps * norm
    for r in range(0, d + 1):
        level = max(abs(f.partial((v1, r - v1)).eval(P.a, P.b)) for v1 in range(r + 1))
        if level > thresh:
            return r
    return d


def _newton_polish(fx: BiPoly, fy: BiPoly, x, y, iters: int = 20):
    fxx, fxy = fx.partial((1, 0)), fx.partial((0, 1))
    fyx, fyy = fy.partial((1, 0)), fy.partial((0, 1))
    for _ in range(iters):
        r1, r2 = fx.eval(x, y), fy.eval(x, y)
        j11, j12 = fxx.eval(x, y), fxy.eval(x, y)
        j21, j22 = fyx.eval(x, y), fyy.eval(x, y)
        det = j11 * j22 - j12 * j21
        if abs(det) < 1e-14:
            break
        dx = (r1 * j22 - r2 * j12) / det
        dy = (j11 * r2 - j21 * r1) / det
        x, y = x - dx, y - dy
        if abs(dx) + abs(dy) < 1e-14 * (1.0 + abs(x) + abs(y)):
            break
    return x, y


def find_eps_singularities(f: BiPoly, eps: float):
    """Candidates from the gradient system, kept when eps-multiplicity >= 2."""
    fx = f.partial((1, 0))
    fy = f.partial((0, 1))
    if fx.is_zero() or fy.is_zero():
        return []
    out = []
    seen = []
    try:
        rx = resultant(fx, fy, "y")
    except ValueError:
        return []
    if rx.degree < 1:
        return []
    xs = all_roots(rx).roots
    match_tol = 1e-6
    for x0 in xs:
        py = fx.subs_x(x0)
        if py.degree < 1:
            continue
        for y0 in all_roots(py).roots:
            scale = max(1.0, abs(x0), abs(y0)) ** f.total_degree
            if abs(fy.eval(x0, y0)) > match_tol * max(fy.inf_norm(), 1.0) * scale:
                continue
            x1, y1 = _newton_polish(fx, fy, x0, y0)
            if any(abs(x1 - a) + abs(y1 - b) <= 1e-8 * (1 + abs(a) + abs(b))
                   for a, b in seen):
                continue
            seen.append((x1, y1))
            P = ProjPoint(x1, y1)
            r = eps_multiplicity(f, P, eps)
            if r >= 2:
                score = max(abs(f.partial((v1, k - v1)).eval(x1, y1))
                            for k in range(r) for v1 in range(k + 1))
                out.append(EpsSingularity(point=P, mult=r,
                                          radius=eps ** (1.0 / r), score=score))
    out.sort(key=lambda s: (s.point.a.real, s.point.a.imag,
                            s.point.b.real, s.point.b.imag))
    return out


def cluster_decompose(sings):
    """Equivalence classes under transitive disk overlap."""
    n = len(sings)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if sings[i].point.dist(sings[j].point) <= sings[i].radius + sings[j].radius:
                parent[find(i)] = find(j)

    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(sings[i])
    clusters = []
    for members in groups.values():
        r = max(s.mult for s in members)
        best = min(
            (s for s in members if s.mult == r),
            key=lambda s: (s.score, s.point.norm2(), s.point.a.real,
                           s.point.a.imag, s.point.b.real, s.point.b.imag),
        )
        clusters.append(EpsCluster(rep=best.point, r=r, members=members,
                                   radius=best.radius))
    clusters.sort(key=lambda c: (c.rep.a.real, c.rep.a.imag,
                                 c.rep.b.real, c.rep.b.imag))
    return clusters


def is_eps_rational(d: int, clusters) -> bool:
    return (d - 1) * (d - 2) - sum(c.r * (c.r - 1) for c in clusters) == 0


def _van_der_corput(m: int) -> float:
    v, denom = 0.0, 1.0
    while m:
        denom *= 2.0
        v += (m & 1) / denom
        m >>= 1
    return v


def simple_eps_points(f: BiPoly, eps: float, count: int, avoid):
    """``count`` simple eps-points, real when possible, else conjugate pairs,
    with disks kept clear of ``avoid`` clusters and of each other."""
    if count < 0:
        raise ValueError("count must be >= 0")
    found = []
    radius = eps

    def rejected(P):
        for cl in avoid:
            if P.dist(cl.rep) <= radius + cl.radius:
                return True
        for Q in found:
            if P.dist(Q) <= 2 * radius:
                return True
        return False

    m = 1
    while len(found) < count:
        if m > 1000:
            raise ExhaustedCandidates("no admissible simple point in 1000 abscissae")
        x0 = -2.0 + 4.0 * _van_der_corput(m)
        m += 1
        py = f.subs_x(x0)
        if py.degree < 1:
            continue
        roots = all_roots(py).roots
        reals = sorted((r for r in roots if abs(r.imag) <= REAL_TOL * (1 + abs(r.real))),
                       key=lambda z: (abs(z.real), -z.real))
        picked = None
        if reals:
            picked = [ProjPoint(x0, reals[0].real)]
        elif count - len(found) >= 2:
            cplx = sorted((r for r in roots if r.imag > 0),
                          key=lambda z: (abs(z.imag), abs(z.real)))
            if cplx:
                y0 = cplx[0]
                picked = [ProjPoint(x0, y0), ProjPoint(x0, y0.conjugate())]
        if picked is None:
            continue
        if any(eps_multiplicity(f, P, eps) != 1 for P in picked):
            continue
        if any(rejected(P) for P in picked):
            continue
        found.extend(picked)
    return found
