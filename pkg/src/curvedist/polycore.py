"""Dense polynomial arithmetic over floating scalars.

Bivariate grids, univariate coefficient vectors and rational functions, plus
the elimination tools the parametrization pipeline needs: Sylvester
resultants (by evaluation-interpolation at Chebyshev nodes), Euclidean
division with a carried parameter, numeric content, and restriction of a
bivariate polynomial to a line.

Scalars are built-in ``complex``; a value is treated as real within ``tol``
iff ``|im| <= tol * max(1, |re|)``.
"""

from __future__ import annotations

import numpy as np

from curvedist import _kernels
from curvedist.errors import DegreeDropped, IllConditionedDivisor

TRIM_REL = 1e-14


def is_real_within(z: complex, tol: float) -> bool:
    z = complex(z)
    return abs(z.imag) <= tol * max(1.0, abs(z.real))


def _trim1(c, ref=None):
    """Trim an ascending coefficient vector; coefficients below the relative
    threshold are zeroed, trailing zeros dropped."""
    c = np.atleast_1d(np.asarray(c, dtype=np.complex128))
    if c.size == 0:
        return c
    scale = ref if ref is not None else float(np.max(np.abs(c)))
    if scale == 0.0:
        return np.zeros(0, dtype=np.complex128)
    c = np.where(np.abs(c) <= TRIM_REL * scale, 0.0, c)
    nz = np.nonzero(c)[0]
    if nz.size == 0:
        return np.zeros(0, dtype=np.complex128)
    return np.ascontiguousarray(c[: nz[-1] + 1])


def _conv(a, b):
    if len(a) == 0 or len(b) == 0:
        return np.zeros(0, dtype=np.complex128)
    return np.convolve(a, b)


def _padd(a, b):
    n = max(len(a), len(b))
    out = np.zeros(n, dtype=np.complex128)
    out[: len(a)] += a
    out[: len(b)] += b
    return out


class UniPoly:
    """Univariate polynomial, ascending complex coefficients.

    The zero polynomial has an empty coefficient vector.
    """

    __slots__ = ("c",)

    def __init__(self, coeffs=(), trim: bool = True):
        if isinstance(coeffs, UniPoly):
            self.c = coeffs.c
            return
        c = np.atleast_1d(np.asarray(coeffs, dtype=np.complex128))
        self.c = _trim1(c) if trim else np.ascontiguousarray(c)

    @classmethod
    def from_roots(cls, roots, lead=1.0):
        c = np.array([lead], dtype=np.complex128)
        for r in roots:
            c = _conv(c, np.array([-r, 1.0], dtype=np.complex128))
        return cls(c, trim=False)

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return len(self.c) == 0

    def inf_norm(self) -> float:
        return float(np.max(np.abs(self.c))) if len(self.c) else 0.0

    def __call__(self, t):
        if self.is_zero():
            return np.zeros_like(np.asarray(t, dtype=np.complex128)) if np.ndim(t) else 0j
        return _kernels.polyval(self.c, t)

    def deriv(self) -> "UniPoly":
        if self.degree < 1:
            return UniPoly()
        return UniPoly(self.c[1:] * np.arange(1, len(self.c)), trim=False)

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        return UniPoly(self.c / self.c[-1], trim=False)

    def reverse(self) -> "UniPoly":
        return UniPoly(self.c[::-1].copy(), trim=False)

    def is_real(self, tol: float = 1e-10) -> bool:
        if self.is_zero():
            return True
        return float(np.max(np.abs(self.c.imag))) <= tol * max(1.0, self.inf_norm())

    def __add__(self, other):
        other = other if isinstance(other, UniPoly) else UniPoly([other])
        return UniPoly(_padd(self.c, other.c))

    def __sub__(self, other):
        other = other if isinstance(other, UniPoly) else UniPoly([other])
        return UniPoly(_padd(self.c, -other.c))

    def __neg__(self):
        return UniPoly(-self.c, trim=False)

    def __mul__(self, other):
        if isinstance(other, UniPoly):
            return UniPoly(_conv(self.c, other.c))
        return UniPoly(self.c * other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = UniPoly([1.0])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, k: int) -> "UniPoly":
        """Multiply by t^k."""
        if self.is_zero():
            return self
        return UniPoly(np.concatenate([np.zeros(k, dtype=np.complex128), self.c]), trim=False)

    def __repr__(self):
        return f"UniPoly(deg={self.degree})"


def abs_eval(c, x: float) -> float:
    """Sum |c_i| x^i: the natural magnitude scale of p at |t| = x."""
    with np.errstate(over="ignore"):
        return float(np.polyval(np.abs(np.asarray(c))[::-1], abs(x)))


def _roots_raw(c):
    """All complex roots of an ascending coefficient vector (trimmed,
    leading coefficient nonzero).  Zero roots are peeled off first."""
    c = _trim1(np.asarray(c, dtype=np.complex128))
    if len(c) <= 1:
        return np.zeros(0, dtype=np.complex128)
    nz = np.nonzero(c)[0][0]
    zeros = np.zeros(nz, dtype=np.complex128)
    c = c[nz:]
    if len(c) <= 1:
        return zeros
    scale = np.max(np.abs(c))
    roots, sweeps = _kernels.aberth(c / scale)
    if sweeps >= 200:
        roots = np.roots((c / scale)[::-1]).astype(np.complex128)
    return np.concatenate([zeros, roots])


class RatFun:
    """Univariate rational function num/den."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=(1.0,)):
        self.num = num if isinstance(num, UniPoly) else UniPoly(num)
        self.den = den if isinstance(den, UniPoly) else UniPoly(den)
        if self.den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")

    def normalized(self, root_tol: float = 1e-10) -> "RatFun":
        """Cancel numeric common roots and make the denominator monic."""
        num, den = self.num, self.den
        if num.is_zero():
            return RatFun(UniPoly(), UniPoly([1.0]))
        nscale = num.inf_norm()
        changed = True
        while changed and den.degree >= 1 and num.degree >= 1:
            changed = False
            cur = num.inf_norm()
            if not np.isfinite(cur) or cur <= 1e-300:
                break
            for r in _roots_raw(den.c):
                if not np.isfinite(r):
                    continue
                bound = root_tol * abs_eval(num.c, abs(r))
                if not np.isfinite(bound):
                    continue
                if abs(num(r)) <= bound:
                    num = UniPoly(_deflate(num.c, r), trim=False)
                    den = UniPoly(_deflate(den.c, r), trim=False)
                    changed = True
                    break
        lead = den.c[-1]
        return RatFun(UniPoly(num.c / lead, trim=False), den.monic())

    def __call__(self, t):
        t = complex(t)
        if abs(t) <= 1.0:
            dv = self.den(t)
            return self.num(t) / dv
        # evaluate through 1/t to stay well conditioned at large |t|
        u = 1.0 / t
        dn, dd = self.num.degree, self.den.degree
        nv = self.num.reverse()(u) if not self.num.is_zero() else 0j
        dv = self.den.reverse()(u)
        return t ** (dn - dd) * nv / dv if not self.num.is_zero() else 0j

    def deriv(self) -> "RatFun":
        n, d = self.num, self.den
        return RatFun(n.deriv() * d - n * d.deriv(), d * d)

    def deriv_num(self) -> UniPoly:
        """Numerator of the derivative (critical-point polynomial)."""
        n, d = self.num, self.den
        return n.deriv() * d - n * d.deriv()

    def limit_at_infinity(self):
        """Limit as t -> +/- inf: (value_plus, value_minus); ``None`` entries
        mean the limit is infinite."""
        if self.num.is_zero():
            return 0j, 0j
        dn, dd = self.num.degree, self.den.degree
        if dn < dd:
            return 0j, 0j
        if dn == dd:
            v = self.num.c[-1] / self.den.c[-1]
            return v, v
        return None, None

    def __mul__(self, other):
        if isinstance(other, RatFun):
            return RatFun(self.num * other.num, self.den * other.den)
        return RatFun(self.num * other, self.den)

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, RatFun):
            other = RatFun(UniPoly([complex(other)]))
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other):
        if not isinstance(other, RatFun):
            other = RatFun(UniPoly([complex(other)]))
        return RatFun(self.num * other.den - other.num * self.den, self.den * other.den)

    def is_real(self, tol: float = 1e-10) -> bool:
        return self.num.is_real(tol) and self.den.is_real(tol)

    def __repr__(self):
        return f"RatFun(deg {self.num.degree}/{self.den.degree})"


def _deflate(c, r):
    """Synthetic division of ascending coefficients by (t - r)."""
    n = len(c) - 1
    out = np.zeros(n, dtype=np.complex128)
    acc = c[n]
    for i in range(n - 1, -1, -1):
        out[i] = acc
        acc = c[i] + acc * r
    return out


def root_multiplicity(c, r, tol: float = 1e-8) -> int:
    """Number of times (t - r) numerically divides the polynomial."""
    c = _trim1(np.asarray(c, dtype=np.complex128))
    if len(c) == 0:
        return 0
    count = 0
    scale = np.max(np.abs(c))
    while len(c) > 1:
        bound = tol * scale * max(1.0, abs(r)) ** (len(c) - 1)
        if abs(_kernels.polyval(c, r)) > bound:
            break
        c = _deflate(c, r)
        count += 1
    return count


class BiPoly:
    """Dense bivariate polynomial: grid ``c[i, j]`` for x^i y^j."""

    __slots__ = ("c", "_pstack")

    def __init__(self, grid, trim: bool = True):
        if isinstance(grid, BiPoly):
            self.c = grid.c
            self._pstack = None
            return
        c = np.atleast_2d(np.asarray(grid, dtype=np.complex128))
        if trim:
            c = self._trim_grid(c)
        self.c = np.ascontiguousarray(c)
        self._pstack = None

    @staticmethod
    def _trim_grid(c):
        if c.size == 0:
            return np.zeros((1, 1), dtype=np.complex128)
        scale = float(np.max(np.abs(c)))
        if scale == 0.0:
            return np.zeros((1, 1), dtype=np.complex128)
        c = np.where(np.abs(c) <= TRIM_REL * scale, 0.0, c)
        rows = np.nonzero(np.any(c != 0, axis=1))[0]
        cols = np.nonzero(np.any(c != 0, axis=0))[0]
        if rows.size == 0:
            return np.zeros((1, 1), dtype=np.complex128)
        return c[: rows[-1] + 1, : cols[-1] + 1]

    @classmethod
    def from_terms(cls, terms):
        """Build from an iterable of ``(i, j, coeff)``."""
        terms = list(terms)
        nx = max((t[0] for t in terms), default=0)
        ny = max((t[1] for t in terms), default=0)
        c = np.zeros((nx + 1, ny + 1), dtype=np.complex128)
        for i, j, v in terms:
            c[i, j] += v
        return cls(c)

    @classmethod
    def zero(cls):
        return cls(np.zeros((1, 1)), trim=False)

    @property
    def degx(self) -> int:
        return self.c.shape[0] - 1

    @property
    def degy(self) -> int:
        return self.c.shape[1] - 1

    @property
    def total_degree(self) -> int:
        nz = np.nonzero(self.c)
        if nz[0].size == 0:
            return 0
        return int(np.max(nz[0] + nz[1]))

    def is_zero(self) -> bool:
        return not np.any(self.c)

    def inf_norm(self) -> float:
        return float(np.max(np.abs(self.c)))

    def eval(self, x, y) -> complex:
        return _kernels.eval2(self.c, complex(x), complex(y))

    __call__ = eval

    def partial(self, v) -> "BiPoly":
        i, j = v
        if i < 0 or j < 0:
            raise ValueError("derivative orders must be nonnegative")
        c = self.c
        for _ in range(i):
            if c.shape[0] == 1:
                return BiPoly.zero()
            c = c[1:, :] * np.arange(1, c.shape[0])[:, None]
        for _ in range(j):
            if c.shape[1] == 1:
                return BiPoly.zero()
            c = c[:, 1:] * np.arange(1, c.shape[1])[None, :]
        return BiPoly(c)

    def scale(self, factor) -> "BiPoly":
        return BiPoly(self.c * factor)

    def __add__(self, other):
        a, b = self.c, other.c
        nx = max(a.shape[0], b.shape[0])
        ny = max(a.shape[1], b.shape[1])
        out = np.zeros((nx, ny), dtype=np.complex128)
        out[: a.shape[0], : a.shape[1]] += a
        out[: b.shape[0], : b.shape[1]] += b
        return BiPoly(out)

    def __sub__(self, other):
        return self + other.scale(-1.0)

    def __mul__(self, other):
        if isinstance(other, BiPoly):
            a, b = self.c, other.c
            out = np.zeros((a.shape[0] + b.shape[0] - 1, a.shape[1] + b.shape[1] - 1),
                           dtype=np.complex128)
            for i in range(a.shape[0]):
                for j in range(a.shape[1]):
                    if a[i, j] != 0:
                        out[i : i + b.shape[0], j : j + b.shape[1]] += a[i, j] * b
            return BiPoly(out)
        return self.scale(other)

    __rmul__ = __mul__

    def leading_form(self) -> "BiPoly":
        """Homogeneous part of total degree d, i.e. F(x, y, 0)."""
        if self.is_zero():
            raise ValueError("leading form of the zero polynomial")
        d = self.total_degree
        out = np.zeros_like(self.c)
        for i in range(self.c.shape[0]):
            for j in range(self.c.shape[1]):
                if i + j == d and self.c[i, j] != 0:
                    out[i, j] = self.c[i, j]
        return BiPoly(out, trim=False)

    def homogenize(self) -> "HomPoly":
        if self.is_zero():
            raise ValueError("homogenize of the zero polynomial")
        return HomPoly(self.c.copy(), self.total_degree)

    def coeffs_in(self, var: str):
        """List of UniPoly coefficients: p = sum_k coeffs[k] * var^k."""
        if var == "x":
            return [UniPoly(self.c[i, :]) for i in range(self.c.shape[0])]
        if var == "y":
            return [UniPoly(self.c[:, j]) for j in range(self.c.shape[1])]
        raise ValueError("var must be 'x' or 'y'")

    def deg_in(self, var: str) -> int:
        cs = self.coeffs_in(var)
        for k in range(len(cs) - 1, -1, -1):
            if not cs[k].is_zero():
                return k
        return 0

    def subs_x(self, x0) -> UniPoly:
        """Specialize x = x0, leaving a UniPoly in y."""
        powers = np.power(complex(x0), np.arange(self.c.shape[0]))
        return UniPoly(powers @ self.c)

    def subs_y(self, y0) -> UniPoly:
        powers = np.power(complex(y0), np.arange(self.c.shape[1]))
        return UniPoly(self.c @ powers)

    def swap_vars(self) -> "BiPoly":
        return BiPoly(self.c.T.copy())

    def is_real(self, tol: float = 1e-10) -> bool:
        return float(np.max(np.abs(self.c.imag))) <= tol * max(1.0, self.inf_norm())

    def real_part(self) -> "BiPoly":
        return BiPoly(self.c.real.astype(np.complex128))

    def _partial_stack(self):
        if self._pstack is None:
            d = self.total_degree
            nx, ny = self.c.shape
            stack = np.zeros((d + 1, d + 1, nx, ny), dtype=np.complex128)
            for v1 in range(d + 1):
                for v2 in range(d + 1 - v1):
                    g = self.partial((v1, v2)).c
                    stack[v1, v2, : g.shape[0], : g.shape[1]] = g
            self._pstack = stack
        return self._pstack

    def __repr__(self):
        return f"BiPoly(degx={self.degx}, degy={self.degy}, d={self.total_degree})"


class HomPoly:
    """Homogenization of a BiPoly: grid c[i, j] stands for x^i y^j z^(d-i-j)."""

    __slots__ = ("c", "d")

    def __init__(self, grid, d):
        self.c = np.asarray(grid, dtype=np.complex128)
        self.d = int(d)

    def eval(self, x, y, z) -> complex:
        x, y, z = complex(x), complex(y), complex(z)
        acc = 0j
        for i in range(self.c.shape[0]):
            for j in range(self.c.shape[1]):
                if self.c[i, j] != 0:
                    acc += self.c[i, j] * x ** i * y ** j * z ** (self.d - i - j)
        return acc

    def dehomogenize(self) -> BiPoly:
        return BiPoly(self.c.copy())

    def at_z0(self) -> BiPoly:
        """F(x, y, 0): the degree-d form."""
        return self.dehomogenize().leading_form()


# ---------------------------------------------------------------------------
# elimination tools


def _cheb_nodes(n: int, scale: float = 1.0):
    k = np.arange(n)
    return scale * np.cos(np.pi * (2 * k + 1) / (2 * n))


def _interp_cheb(nodes, values, deg: int, scale: float = 1.0):
    """Power-basis coefficients of the polynomial of degree <= deg through
    (nodes, values); nodes are Chebyshev points on [-scale, scale]."""
    from numpy.polynomial import chebyshev as C

    coef = C.chebfit(np.asarray(nodes) / scale, values, deg)
    p = C.cheb2poly(coef)
    if len(p) < deg + 1:  # cheb2poly trims exact-zero leading coefficients
        p = np.pad(p, (0, deg + 1 - len(p)))
    if scale != 1.0:
        p = p / np.power(scale, np.arange(len(p)))
    return p


def sylvester_matrix(pc, qc):
    """Sylvester matrix from descending coefficient sequences (entries may be
    any scalar type supporting arithmetic)."""
    n = len(pc) - 1
    m = len(qc) - 1
    size = n + m
    S = [[0.0] * size for _ in range(size)]
    for i in range(m):
        for k in range(n + 1):
            S[i][i + k] = pc[k]
    for i in range(n):
        for k in range(m + 1):
            S[m + i][i + k] = qc[k]
    return S


def _sylvester_det(pc, qc) -> complex:
    n = len(pc) - 1
    m = len(qc) - 1
    if n < 0 or m < 0:
        return 0j
    S = np.zeros((n + m, n + m), dtype=np.complex128)
    for i in range(m):
        S[i, i : i + n + 1] = pc
    for i in range(n):
        S[m + i, i : i + m + 1] = qc
    return complex(np.linalg.det(S))


def resultant(p: BiPoly, q: BiPoly, var: str) -> UniPoly:
    """Res_var(p, q) as a polynomial in the surviving variable.

    Computed by evaluation at Chebyshev nodes of the surviving variable and
    interpolation; each sample is a numeric Sylvester determinant.
    """
    if var not in ("x", "y"):
        raise ValueError("var must be 'x' or 'y'")
    np_ = p.deg_in(var)
    nq = q.deg_in(var)
    if np_ < 1 or nq < 1:
        raise ValueError("both operands must have positive degree in var")
    other = "y" if var == "x" else "x"
    mp, mq = p.deg_in(other), q.deg_in(other)
    pcs = p.coeffs_in(var)
    qcs = q.coeffs_in(var)
    if pcs[np_].is_zero() or qcs[nq].is_zero():
        raise DegreeDropped(f"leading coefficient in {var} vanishes identically")

    # Bezout cap: the y-degree bound overshoots badly for total-degree-shaped
    # inputs and the excess coefficients come out as interpolation noise
    bound = min(np_ * mq + nq * mp, p.total_degree * q.total_degree)
    if bound == 0:
        # both free of the surviving variable: the resultant is a constant
        pc = np.array([c.c[0] if not c.is_zero() else 0j for c in pcs[: np_ + 1]])
        qc = np.array([c.c[0] if not c.is_zero() else 0j for c in qcs[: nq + 1]])
        return UniPoly([_sylvester_det(pc[::-1], qc[::-1])])
    nodes = _cheb_nodes(bound + 1)
    vals = np.empty(bound + 1, dtype=np.complex128)
    for idx, t0 in enumerate(nodes):
        pc = np.array([c(t0) for c in pcs[: np_ + 1]])[::-1]
        qc = np.array([c(t0) for c in qcs[: nq + 1]])[::-1]
        vals[idx] = _sylvester_det(pc, qc)
    return UniPoly(_interp_cheb(nodes, vals, bound))


def euclid_div(p, q, var: str = "x"):
    """Euclidean division of ``p`` by ``q`` along ``var``.

    ``p`` may carry a second variable; ``q`` must be free of it (the carried
    parameter stays in the coefficients).  Returns (quotient, remainder) with
    the same representation as ``p``.
    """
    uni_in = isinstance(p, UniPoly)
    if uni_in:
        grid = p.c.reshape(-1, 1)
    else:
        grid = p.c if var == "x" else p.c.T
    if isinstance(q, BiPoly):
        qc_grid = q.c if var == "x" else q.c.T
        if qc_grid.shape[1] != 1 and np.any(qc_grid[:, 1:]):
            raise IllConditionedDivisor("divisor must be free of the carried parameter")
        d = qc_grid[:, 0]
    else:
        d = q.c
    d = _trim1(d)
    if len(d) == 0:
        raise ZeroDivisionError("division by the zero polynomial")
    qnorm = float(np.max(np.abs(d)))
    if abs(d[-1]) < 1e-10 * qnorm:
        raise IllConditionedDivisor("leading coefficient below 1e-10 * norm")

    dq = len(d) - 1
    n = grid.shape[0] - 1
    R = grid.astype(np.complex128).copy()
    if n < dq:
        Q = np.zeros((1, grid.shape[1]), dtype=np.complex128)
    else:
        Q = np.zeros((n - dq + 1, grid.shape[1]), dtype=np.complex128)
        for i in range(n, dq - 1, -1):
            coef = R[i, :] / d[-1]
            Q[i - dq, :] = coef
            for k in range(dq + 1):
                R[i - dq + k, :] -= coef * d[k]
            R[i, :] = 0.0

    if uni_in:
        return UniPoly(Q[:, 0]), UniPoly(R[:, 0])
    if var == "y":
        Q, R = Q.T, R.T
    return BiPoly(Q), BiPoly(R)


def approx_gcd(polys, tol: float = 1e-8) -> UniPoly:
    """Approximate monic GCD of a list of UniPoly, by common-root matching."""
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return UniPoly()
    base = min(polys, key=lambda p: p.degree)
    if base.degree == 0:
        return UniPoly([1.0])
    factors = []
    seen = []
    for r in _roots_raw(base.c):
        if any(abs(r - s) <= 1e-9 * (1.0 + abs(s)) for s in seen):
            continue
        seen.append(r)
        mult = min(root_multiplicity(p.c, r, tol) for p in polys)
        if mult > 0:
            factors.extend([r] * mult)
    if not factors:
        return UniPoly([1.0])
    return UniPoly.from_roots(factors)


def content(p: BiPoly, var: str) -> UniPoly:
    """Numeric content of p w.r.t. var: approximate GCD of its coefficients
    viewed as polynomials in the other variable."""
    coeffs = p.coeffs_in(var)
    return approx_gcd(coeffs)


def compose_line(f: BiPoly, base, direction) -> UniPoly:
    """Coefficients in s of f(base + s*direction), by the Taylor identity."""
    dx, dy = complex(direction[0]), complex(direction[1])
    if dx == 0 and dy == 0:
        raise ValueError("direction must be nonzero")
    bx, by = complex(base[0]), complex(base[1])
    d = f.total_degree
    stack = f._partial_stack()
    out = _kernels.line_coeffs(stack, f.c.shape[0], f.c.shape[1], bx, by, dx, dy, d)
    return UniPoly(out)
