"""Approximate parametrization of an eps-rational curve.

Pipeline: cluster decomposition -> genus test -> simple points -> adjoint
pencil of degree d-2 -> resultants S_1, S_2 -> Euclidean quotients by the
divisor polynomials A_1, A_2 -> root extraction.  Also the reverse map:
implicitization of a rational parametrization back to a defining polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import chebyshev as _C

from curvedist.errors import (CannotSeparate, Degenerate,
                              DegenerateParametrization, NotEpsRational,
                              QuotientDegreeUnexpected, WrongDimension)
from curvedist.epsgeo import (ProjPoint, check_hypotheses, cluster_decompose,
                              find_eps_singularities, infinity_points,
                              is_eps_rational, simple_eps_points, _chordal)
from curvedist.polycore import (BiPoly, RatFun, UniPoly, _cheb_nodes,
                                _interp_cheb, _sylvester_det, content,
                                euclid_div, resultant, is_real_within)
from curvedist.rootfind import real_roots

NULLSPACE_TOL = 1e-8
DEG_TEST_TOL = 1e-8
INF_SHARE_TOL = 1e-6


@dataclass
class Divisor:
    entries: list  # (ProjPoint, multiplicity)

    def __post_init__(self):
        if any(m < 1 for _, m in self.entries):
            raise ValueError("divisor multiplicities must be >= 1")


@dataclass
class AdjointPencil:
    H1: BiPoly
    H2: BiPoly
    deg: int  # d - 2

    def at(self, t) -> BiPoly:
        return self.H1 + self.H2.scale(t)

    def infinity_form(self, k: int) -> UniPoly:
        """H_k(1, m, 0): the degree-``deg`` part along the slope variable."""
        h = self.H1 if k == 1 else self.H2
        coeffs = np.zeros(self.deg + 1, dtype=np.complex128)
        for j in range(self.deg + 1):
            i = self.deg - j
            if i < h.c.shape[0] and j < h.c.shape[1]:
                coeffs[j] = h.c[i, j]
        return UniPoly(coeffs)


@dataclass
class Parametrization:
    p1: RatFun
    p2: RatFun
    poles: list = field(default_factory=list)  # real poles of the pair

    def eval(self, t):
        return self.p1(t), self.p2(t)


def _monomials(deg: int):
    return [(i, j) for i in range(deg + 1) for j in range(deg + 1 - i)]


def build_adjoint_pencil(divisor: Divisor, d: int) -> AdjointPencil:
    """Pencil of degree-(d-2) curves through the divisor: nullspace of the
    base-point conditions, which must be exactly 2-dimensional."""
    deg = d - 2
    monos = _monomials(deg)
    rows = []
    for P, mult in divisor.entries:
        # cluster of eps-multiplicity r is an (r-1)-fold base point:
        # partials of order <= r-2; a simple point only forces evaluation
        for order in range(max(mult - 1, 1)):
            for v1 in range(order + 1):
                v2 = order - v1
                row = np.zeros(len(monos), dtype=np.complex128)
                for col, (i, j) in enumerate(monos):
                    if i < v1 or j < v2:
                        continue
                    fall = 1.0
                    for k in range(v1):
                        fall *= i - k
                    for k in range(v2):
                        fall *= j - k
                    row[col] = fall * P.a ** (i - v1) * P.b ** (j - v2)
                rows.append(row)
    M = np.array(rows)
    M = np.vstack([M.real, M.imag])
    # drop zero rows (imaginary parts of real constraints)
    keep = np.max(np.abs(M), axis=1) > 0
    M = M[keep]
    _, sv, Vt = np.linalg.svd(M)
    nullity = int(np.sum(sv <= NULLSPACE_TOL * sv[0])) + (len(monos) - len(sv))
    if nullity != 2:
        raise WrongDimension(nullity)

    def to_poly(vec):
        k = np.nonzero(np.abs(vec) > 1e-10)[0][0]
        if vec[k].real < 0:
            vec = -vec
        return BiPoly.from_terms((i, j, vec[col]) for col, (i, j) in enumerate(monos))

    return AdjointPencil(H1=to_poly(Vt[-2]), H2=to_poly(Vt[-1]), deg=deg)


def _shares_infinity(hform: UniPoly, f_inf) -> bool:
    """Does the slope polynomial of H at infinity share a projective root
    with the points at infinity of f?"""
    if hform.is_zero():
        return True
    hpts = []
    if hform.degree >= 1:
        from curvedist.rootfind import all_roots
        for m in all_roots(hform).roots:
            s = np.hypot(1.0, abs(m))
            hpts.append((1.0 / s, m / s))
    # a dropped degree means (0:1) is a root of the homogeneous form
    # (hform carries the coefficients of m^j for the direction (1:m))
    # degree drop count:
    hpts.extend([(0.0, 1.0)] * 0)
    for hp in hpts:
        for fp in f_inf:
            if _chordal(hp, fp) < INF_SHARE_TOL:
                return True
    return False


def fix_infinity_gcd(pencil: AdjointPencil, f: BiPoly, eps: float) -> AdjointPencil:
    """Ensure at least one generator's form at infinity is coprime with
    F(x, y, 0); perturb H2 with small rho-multiples of x^(d-2), y^(d-2)."""
    f_inf = infinity_points(f)
    if not (_shares_infinity(pencil.infinity_form(1), f_inf)
            and _shares_infinity(pencil.infinity_form(2), f_inf)):
        return pencil
    for rho1, rho2 in ((eps / 2, eps / 3), (eps / 5, eps / 7)):
        bump = BiPoly.from_terms([(pencil.deg, 0, rho1), (0, pencil.deg, rho2)])
        cand = AdjointPencil(H1=pencil.H1, H2=pencil.H2 + bump, deg=pencil.deg)
        if not _shares_infinity(cand.infinity_form(2), f_inf):
            return cand
    raise CannotSeparate("both pencil generators still meet f at infinity")


def _divisor_poly(roots_with_mult) -> UniPoly:
    """Real polynomial with the given (root, multiplicity) structure;
    conjugate pairs are folded into real quadratics."""
    pending = []
    for z, m in roots_with_mult:
        pending.extend([complex(z)] * m)
    out = UniPoly([1.0])
    used = [False] * len(pending)
    for i, z in enumerate(pending):
        if used[i]:
            continue
        if is_real_within(z, 1e-9):
            out = out * UniPoly([-z.real, 1.0])
            used[i] = True
            continue
        for j in range(i + 1, len(pending)):
            if not used[j] and abs(pending[j] - z.conjugate()) <= 1e-9 * (1 + abs(z)):
                out = out * UniPoly([abs(z) ** 2, -2.0 * z.real, 1.0])
                used[i] = used[j] = True
                break
        else:
            # unpaired complex root: keep as-is; reality is checked downstream
            out = out * UniPoly([-z, 1.0])
            used[i] = True
    return out


def _pencil_resultant(pencil: AdjointPencil, f: BiPoly, var: str) -> BiPoly:
    """Res_var(H1 + t*H2, f) as a grid (surviving variable, t)."""
    d = f.total_degree
    deg_t = d  # the Sylvester determinant is multilinear in the d rows of H
    nodes = _cheb_nodes(deg_t + 1)
    samples = []
    degs = []
    for t0 in nodes:
        r = resultant(pencil.at(t0), f, var)
        samples.append(r.c)
        degs.append(r.degree)
    nmax = max(degs) + 1
    vals = np.zeros((len(nodes), nmax), dtype=np.complex128)
    for k, c in enumerate(samples):
        vals[k, : len(c)] = c
    coef = _C.chebfit(nodes, vals, deg_t)
    grid = np.zeros((nmax, deg_t + 1), dtype=np.complex128)
    for i in range(nmax):
        p = _C.cheb2poly(coef[:, i])
        grid[i, : len(p)] = p
    return BiPoly(grid)


def _as_real(p: BiPoly, what: str) -> BiPoly:
    if not p.is_real(1e-7):
        raise DegenerateParametrization(f"{what} has a non-real part")
    return p.real_part()


def approx_parametrize(f: BiPoly, eps: float) -> Parametrization:
    """Steps (1)-(12): from the implicit equation to P(t) = (p1(t), p2(t))."""
    d = f.total_degree
    hyp = check_hypotheses(f, eps)
    if not hyp.all_hold():
        raise NotEpsRational(f"hypothesis failed: {hyp.failure_reason()}")

    clusters = cluster_decompose(find_eps_singularities(f, eps))
    if not is_eps_rational(d, clusters):
        raise NotEpsRational("cluster multiplicities fail the genus-zero test")

    simples = simple_eps_points(f, eps, d - 3, clusters)
    divisor = Divisor([(c.rep, c.r) for c in clusters]
                      + [(P, 1) for P in simples])
    pencil = fix_infinity_gcd(build_adjoint_pencil(divisor, d), f, eps)

    S1 = _as_real(_pencil_resultant(pencil, f, "y"), "S1")
    S2 = _as_real(_pencil_resultant(pencil, f, "x").swap_vars(), "S2")
    S2 = BiPoly(S2.c.T)  # axis 0 = y, axis 1 = t

    A1 = _divisor_poly([(c.rep.a, c.r * (c.r - 1)) for c in clusters]
                       + [(P.a, 1) for P in simples])
    A2 = _divisor_poly([(c.rep.b, c.r * (c.r - 1)) for c in clusters]
                       + [(P.b, 1) for P in simples])

    params = []
    for S, A in ((S1, A1), (S2, A2)):
        B, _ = euclid_div(S, A, var="x")
        cont = content(B, "x")
        if cont.degree >= 1:
            raise Degenerate("quotient content depends on the pencil parameter")
        coeffs = B.coeffs_in("x")
        top = B.deg_in("x")
        if top != 1 or coeffs[1].inf_norm() <= DEG_TEST_TOL * B.inf_norm():
            raise QuotientDegreeUnexpected(
                f"quotient degree {top} in the eliminated variable")
        pi = RatFun(-1.0 * coeffs[0], coeffs[1]).normalized()
        if not (pi.num.is_real(1e-7) and pi.den.is_real(1e-7)):
            raise DegenerateParametrization("parametrization has complex drift")
        pi = RatFun(UniPoly(pi.num.c.real.astype(np.complex128)),
                    UniPoly(pi.den.c.real.astype(np.complex128)))
        params.append(pi)

    # The two divisions produce proportional denominators.  Snap them to a
    # single shared polynomial so both coordinates blow up at exactly the
    # same parameter values; otherwise the tiny root mismatch between the
    # two copies bends the traced branch near its poles.
    b, e = params[0].den, params[1].den
    if b.degree == e.degree and e.degree >= 1:
        ec = e.c
        s = float(np.real(np.vdot(ec, b.c)) / np.real(np.vdot(ec, ec)))
        if UniPoly(b.c - s * ec).inf_norm() <= 1e-9 * b.inf_norm():
            params[1] = RatFun(UniPoly(s * params[1].num.c), b)

    raw_poles = []
    for pi in params:
        if pi.den.degree >= 1:
            raw_poles.extend(real_roots(pi.den))
    poles = []
    for b in sorted(raw_poles):
        if not poles or abs(b - poles[-1]) > 1e-7 * (1.0 + abs(b)):
            poles.append(b)
    return Parametrization(p1=params[0], p2=params[1], poles=poles)


def _squarefree_exponent(u: UniPoly) -> int:
    """Largest k with u ~ v^k, read off the root multiplicities."""
    from curvedist.rootfind import all_roots
    if u.degree < 2:
        return 1
    mults = all_roots(u).mults
    g = 0
    for m in mults:
        g = int(np.gcd(g, m))
    return max(g, 1)


def implicitize(P: Parametrization) -> BiPoly:
    """Defining polynomial of the parametrized curve, normalized to unit
    infinity norm with a deterministic sign."""
    g1num, g1den = P.p1.num, P.p1.den
    g2num, g2den = P.p2.num, P.p2.den
    m1 = max(g1num.degree, g1den.degree)
    m2 = max(g2num.degree, g2den.degree)
    if m1 < 1 or m2 < 1:
        raise DegenerateParametrization("a coordinate is constant in t")

    def tcoeffs(num, den, deg):
        a = np.zeros(deg + 1, dtype=np.complex128)
        b = np.zeros(deg + 1, dtype=np.complex128)
        a[: len(den.c)] = den.c
        b[: len(num.c)] = num.c
        return a, b

    a1, b1 = tcoeffs(g1num, g1den, m1)  # x*a1 - b1
    a2, b2 = tcoeffs(g2num, g2den, m2)

    nx, ny = _cheb_nodes(m2 + 1, scale=2.0), _cheb_nodes(m1 + 1, scale=2.0)
    vals = np.zeros((len(nx), len(ny)), dtype=np.complex128)
    for ix, x0 in enumerate(nx):
        p1c = (x0 * a1 - b1)[::-1]
        for iy, y0 in enumerate(ny):
            p2c = (y0 * a2 - b2)[::-1]
            vals[ix, iy] = _sylvester_det(p1c, p2c)
    if np.max(np.abs(vals)) <= 1e-12 * max(g1num.inf_norm(), g1den.inf_norm(), 1.0):
        raise DegenerateParametrization("implicitization resultant vanishes")

    # tensor Chebyshev interpolation, one axis at a time
    inter = np.array([_interp_cheb(ny, vals[ix, :], m1, scale=2.0)
                      for ix in range(len(nx))])
    grid = np.array([_interp_cheb(nx, inter[:, j], m2, scale=2.0)
                     for j in range(inter.shape[1])]).T
    R = BiPoly(grid)
    R = _as_real(R, "implicitization resultant")

    # strip repeated-cover powers: on a generic vertical line the resultant
    # is the k-th power of the true section (leading y-coefficient is
    # constant under the infinity hypotheses, so monic rebuild is safe)
    k = _squarefree_exponent(R.subs_x(0.31472))
    if k > 1:
        from curvedist.rootfind import all_roots
        degy = R.deg_in("y")
        newdeg = degy // k
        nodes = _cheb_nodes(R.deg_in("x") + 1, scale=2.0)
        cols = np.zeros((len(nodes), newdeg + 1), dtype=np.complex128)
        for ix, x0 in enumerate(nodes):
            sec = R.subs_x(x0)
            rs = all_roots(sec)
            roots = []
            for r, m in zip(rs.roots, rs.mults):
                roots.extend([r] * max(m // k, 1))
            cols[ix, :] = np.resize(UniPoly.from_roots(roots[:newdeg]).c, newdeg + 1)
        grid = np.array([_interp_cheb(nodes, cols[:, j], R.deg_in("x") // k, scale=2.0)
                         for j in range(newdeg + 1)]).T
        R = _as_real(BiPoly(grid), "squarefree part")

    norm = R.inf_norm()
    c = R.c / norm
    c = np.where(np.abs(c) <= 1e-8, 0.0, c)  # interpolation noise floor
    nzi, nzj = np.nonzero(c)
    if len(nzi) and c[nzi[0], nzj[0]].real < 0:
        c = -c
    return BiPoly(c)
